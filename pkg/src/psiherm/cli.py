"""psiherm command line.

    psiherm psi        --algebra builtin:Q --module free:2
    psiherm verify     --algebra builtin:M2Q --suite all --seed 42
    psiherm invariants --algebra builtin:Q --class "free:2 - free:1"
    psiherm invariants --algebra builtin:F5 --class "image-order p=3 alpha=1"

Reports are JSON with sorted keys.  Exit status: 0 pass, 1 verification
failure, 2 input error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import re
import sys
import time
from pathlib import Path

from . import __version__
from .algebra import Algebra, algebra_from_dict, algebra_to_dict, builtin_algebra
from .errors import PsihermError, UnsupportedError, ValidationError
from .hermitian import check_hermitian, is_nondegenerate
from .modules import K0Class, Module, free_module, projective_module
from .psi import adams_psi2, dold_extend_psi, psi_module
from .suites import SUITES, run_suite
from .witt import diagonal_restriction, fingerprint, image_order_mod, rank_invariant

SCHEMA = "psiherm-report/1"


class InputError(Exception):
    """Bad command-line input or input file; maps to exit status 2."""


# -- input parsing ---------------------------------------------------------------------


def _load_json(path: str) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc


def load_algebra(spec: str) -> Algebra:
    if spec.startswith("builtin:"):
        try:
            return builtin_algebra(spec[len("builtin:"):])
        except (ValueError, PsihermError) as exc:
            raise InputError(str(exc)) from exc
    doc = _load_json(spec)
    if not isinstance(doc, dict):
        raise InputError(f"{spec}: expected a JSON object")
    try:
        return algebra_from_dict(doc)
    except (ValueError, PsihermError) as exc:
        where = getattr(exc, "witness", None)
        raise InputError(f"{spec}: {exc}" + (f" (at {where})" if where is not None else "")) from exc


def load_module(A: Algebra, spec: str) -> Module:
    m = re.fullmatch(r"free:(\d+)", spec.strip())
    if m:
        return free_module(A, int(m.group(1)))
    if spec.startswith("idem:"):
        path = spec[len("idem:"):]
        doc = _load_json(path)
        try:
            e = doc["idempotent"]
            n = len(e)
            rows = [[A.element([A.field(str(x)) for x in cell]) for cell in row] for row in e]
            return projective_module(A, n, rows)
        except (KeyError, TypeError) as exc:
            raise InputError(f"{path}: expected {{\"idempotent\": [[[coords...], ...], ...]}}") from exc
        except (ValueError, PsihermError) as exc:
            raise InputError(f"{path}: {exc}") from exc
    raise InputError(f"module spec must be free:<n> or idem:<file>, got {spec!r}")


_TERM = re.compile(r"\s*([+-])?\s*((?:free:\d+)|(?:idem:\S+))\s*")


def parse_class(A: Algebra, spec: str) -> K0Class:
    """'free:2 - free:1', '-free:1', 'idem:e.json + free:1' as a K0 class."""
    pos, total, first = 0, None, True
    while pos < len(spec):
        m = _TERM.match(spec, pos)
        if not m or (not first and m.group(1) is None):
            raise InputError(f"cannot parse class spec at column {pos + 1}: {spec!r}")
        c = K0Class.of(load_module(A, m.group(2)))
        if m.group(1) == "-":
            c = -c
        total = c if total is None else total + c
        pos, first = m.end(), False
    if total is None:
        raise InputError("empty class spec")
    return total


# -- serialization -----------------------------------------------------------------------


def matrix_to_json(M) -> list:
    return [[x.coords_str() for x in row] for row in M]


def _fingerprint_json(x, field) -> dict:
    try:
        return fingerprint(x).as_dict(field.square_class_label)
    except UnsupportedError as exc:
        return {"status": "unsupported", "reason": str(exc), "k_rank": rank_invariant(x)}


def _digest(obj) -> str:
    return hashlib.sha256(json.dumps(obj, sort_keys=True).encode()).hexdigest()


def _report(command: str, A: Algebra, construction: dict, results: dict, ok: bool, elapsed=None) -> dict:
    echo = {"algebra": A.name, "command": command, **construction}
    rep = {
        "schema": SCHEMA,
        "tool": {"name": "psiherm", "version": __version__},
        "input_digest": _digest({"algebra": algebra_to_dict(A), **echo}),
        "construction": echo,
        "results": results,
        "verdict": "pass" if ok else "fail",
    }
    if elapsed is not None:
        rep["timing_seconds"] = round(elapsed, 3)
    return rep


# -- commands ---------------------------------------------------------------------------


def cmd_psi(A: Algebra, module_spec: str) -> tuple[dict, bool]:
    E = load_module(A, module_spec)
    P = psi_module(E, check_nondegenerate=False).output
    herm = check_hermitian(P)
    nondeg = is_nondegenerate(P)
    results = {
        "module": {"ambient_rank": E.rank, "free": E.is_free, "k_dimension": E.k_dimension()},
        "gram": matrix_to_json(P.gram),
        "generators": [f"u{i + 1}{j + 1}" for i in range(E.rank) for j in range(E.rank)],
        "hermitian": "pass" if herm is None else {"fail": list(herm)},
        "nondegenerate": "pass" if nondeg else "fail",
        "fingerprint": _fingerprint_json(P, A.field),
    }
    return results, herm is None and nondeg


def cmd_verify(A: Algebra, suite: str, seed: int, trials: int) -> tuple[dict, bool]:
    names = SUITES if suite == "all" else (suite,)
    if suite != "all" and suite not in SUITES:
        raise InputError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}, all")
    out = {}
    ok = True
    for name in names:
        res = run_suite(name, A, seed, trials)
        out[name] = res.as_dict()
        ok = ok and res.passed
    return {"suites": out, "seed": seed, "trials": trials}, ok


_IMAGE = re.compile(r"\s*image-order\s+p\s*=\s*(\d+)\s+alpha\s*=\s*(\d+)\s*$")


def cmd_invariants(A: Algebra, class_spec: str) -> tuple[dict, bool]:
    m = _IMAGE.match(class_spec)
    if m:
        p, alpha = int(m.group(1)), int(m.group(2))
        try:
            order = image_order_mod(A, p, alpha)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        return {"image_order": {"p": p, "alpha": alpha, "order": order}}, True
    c = parse_class(A, class_spec)
    results = {
        "class": {"module_ambient_rank": c.module.rank, "free_rank": c.free_rank, "rank": str(c.rank())},
        "psi_fingerprint": _fingerprint_json(dold_extend_psi(c), A.field),
    }
    if A.is_commutative() and c.module.is_free:
        results["psi2_rank"] = str(adams_psi2(c).rank())
        if "id" in A.involutions:
            dims = {}
            for label, n in (("module", c.module.rank), ("free_part", c.free_rank)):
                if n:
                    dims[label] = list(diagonal_restriction(free_module(A, n)).dims)
            results["eigenspace_dims"] = dims
    return results, True


# -- entry point -------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="psiherm", description="psi(E) = E* (x) E and its hermitian invariants")
    p.add_argument("--version", action="version", version=f"psiherm {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--algebra", default="builtin:Q", help="builtin:<name> or an algebra JSON file")
        sp.add_argument("--out", help="write the JSON report here instead of stdout")
        sp.add_argument("--timing", action="store_true", help="include wall-clock timing (breaks byte-identity)")
        sp.add_argument("--quiet", action="store_true", help="no summary on stderr")

    sp = sub.add_parser("psi", help="build psi(E) and report its Gram")
    common(sp)
    sp.add_argument("--module", default="free:1", help="free:<n> or idem:<file>")

    sp = sub.add_parser("verify", help="run verification suites")
    common(sp)
    sp.add_argument("--suite", default="all", help=f"one of {', '.join(SUITES)}, all")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--trials", type=int, default=10, help="random trials per randomized check")

    sp = sub.add_parser("invariants", help="fingerprints of Dold-extended classes, image orders")
    common(sp)
    sp.add_argument("--class", dest="class_spec", help="'free:2 - free:1' or 'image-order p=3 alpha=1'")
    sp.add_argument("class_pos", nargs="?", metavar="CLASS")
    return p


def _summary(rep: dict) -> str:
    lines = [f"psiherm {rep['construction']['command']} on {rep['construction']['algebra']}: {rep['verdict']}"]
    suites = rep["results"].get("suites")
    if suites:
        for name, r in suites.items():
            lines.append(f"  {name:<13} {r['status']:<15} checks={r['checks']} failures={r['failures']}")
    return "\n".join(lines)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        A = load_algebra(args.algebra)
        if args.command == "psi":
            construction = {"module": args.module}
            results, ok = cmd_psi(A, args.module)
        elif args.command == "verify":
            construction = {"suite": args.suite, "seed": args.seed, "trials": args.trials}
            results, ok = cmd_verify(A, args.suite, args.seed, args.trials)
        else:
            spec = args.class_spec or args.class_pos
            if not spec:
                raise InputError("invariants needs a class spec (--class)")
            construction = {"class": spec}
            results, ok = cmd_invariants(A, spec)
    except InputError as exc:
        print(f"psiherm: error: {exc}", file=sys.stderr)
        return 2
    except ValidationError as exc:
        print(f"psiherm: validation failed: {exc} (witness {exc.witness})", file=sys.stderr)
        return 1
    except UnsupportedError as exc:
        print(f"psiherm: unsupported: {exc}", file=sys.stderr)
        return 2
    rep = _report(args.command, A, construction, results, ok,
                  time.perf_counter() - start if args.timing else None)
    text = json.dumps(rep, sort_keys=True, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    if not args.quiet:
        print(_summary(rep), file=sys.stderr)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
