"""Exact computation of psi(E) = E* (x) E as a hermitian module over
A (x) A^op, its Dold extension to K_0 and its Witt invariants."""

__version__ = "0.1.0"

from .algebra import (
    Algebra,
    AlgebraElement,
    AlgebraMorphism,
    Antiinvolution,
    BUILTIN_FAMILY,
    algebra_from_dict,
    algebra_from_structure_constants,
    builtin_algebra,
    envelope,
    mult_morphism,
    tensor_algebra,
)
from .errors import (
    DegenerateFormError,
    FieldMismatchError,
    PsihermError,
    RingMismatchError,
    UnsupportedError,
    ValidationError,
)
from .hermitian import (
    GWClass,
    HermitianModule,
    RingWithAntiinvolution,
    base_change_hermitian,
    enveloping_base,
    evaluate_form,
    hyperbolic,
    make_hermitian,
    orthogonal_sum,
    theta_matrix,
    trace_form,
    verify_isometry,
)
from .modules import (
    K0Class,
    Module,
    ModuleMap,
    direct_sum,
    dual_module,
    ext_square,
    extend_scalars,
    free_module,
    hom_module,
    projective_module,
    sym_square,
    tensor_over_k,
)
from .psi import (
    adams_psi2,
    dold_extend_degree2,
    dold_extend_psi,
    gamma,
    psi_module,
    psi_on_iso,
    signature_of_representation_target,
    sum_decomposition_isometry,
)
from .scalars import GF, QQ, Field
from .witt import (
    WittFingerprint,
    diagonal_restriction,
    diagonalize_symmetric,
    fingerprint,
    image_order_mod,
    signature,
)
