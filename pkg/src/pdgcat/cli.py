"""Command line: pdgcat {cohomology, nh, klr, qgroup} with JSON or text reports.

Exit codes: 0 pass, 1 a checked identity failed, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Dict, List, Sequence

from .base_arith import check_prime

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _window(text: str | None):
    if text is None:
        return None
    try:
        lo, hi = (int(t) for t in text.split(":"))
    except ValueError:
        raise UsageError(f"--window expects LO:HI, got {text!r}")
    if lo > hi:
        raise UsageError("--window needs LO <= HI")
    return lo, hi


def _prime(p: int) -> int:
    try:
        return check_prime(p)
    except ValueError as exc:
        raise UsageError(str(exc))


def _emit(report: Dict[str, Any], fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(report, indent=2, sort_keys=True, default=str))
        return
    for k, v in report.items():
        if isinstance(v, (dict, list)):
            v = json.dumps(v, default=str)
        print(f"{k}: {v}")


# cohomology


def _load_complex(path: str):
    from .pcomplex import PComplex

    try:
        with open(path) as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: bad JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}")
    for field in ("p", "dims"):
        if field not in obj:
            raise UsageError(f"{path}: missing field {field!r}")
    try:
        return PComplex.from_json(obj)
    except (ValueError, TypeError, KeyError) as exc:
        raise UsageError(f"{path}: {exc}")


def cmd_cohomology(args) -> int:
    from . import pcomplex as pc

    U = _load_complex(args.input)
    p = U.p
    keyed = lambda d: {str(j): v for j, v in sorted(d.items())}
    dec = pc.decompose(U)
    defects = pc.exactness_defects(U)
    sym = pc.symbol(U, dec)
    report = {
        "p": p,
        "window": [U.lo, U.hi],
        "decomposition": dec.to_json(),
        "slash": {str(k): keyed(pc.slash_cohomology(U, k)) for k in range(p - 1)},
        "backslash": {str(k): keyed(pc.backslash_cohomology(U, k)) for k in range(p)},
        "mayer": {str(k): keyed(pc.mayer_cohomology(U, k)) for k in range(1, p)},
        "exact": not defects,
        "contractible": pc.is_contractible(U),
        "symbol": sym.to_json(),
    }
    _emit(report, args.format)
    return EXIT_OK if not defects else EXIT_FAIL


# nilHecke


def cmd_nh(args) -> int:
    from . import nilhecke as nh

    p = _prime(args.p)
    if args.n is None or args.n < 1:
        raise UsageError("nh needs --n >= 1")
    a = args.a % p
    report: Dict[str, Any] = {"p": p, "n": args.n, "a": a}
    code = EXIT_OK
    if args.sub == "acyclic":
        y = nh.nh_find_contraction(args.n, a, p)
        if y is None:
            report["witness"] = "none"
            report["acyclic"] = False
        else:
            ok = nh.nh_derive(y, a) == nh.nh_one(p, args.n)
            report["witness"] = repr(y)
            report["witness_json"] = y.to_json()
            report["acyclic"] = True
            report["verified"] = ok
            code = EXIT_OK if ok else EXIT_FAIL
    elif args.sub == "symbol":
        res = nh.nh_symbol(args.n, a, p, _window(args.window))
        report.update(res.to_json())
        code = EXIT_OK if res.verified else EXIT_FAIL
    elif args.sub == "derive-check":
        ok = nh.nh_check_pnilpotent(args.n, a, p)
        report["d^p_vanishes_on_generators"] = ok
        code = EXIT_OK if ok else EXIT_FAIL
    _emit(report, args.format)
    return code


# KLR


def _quiver(text: str | None):
    from .klr import Quiver

    try:
        return Quiver.parse(text or "A2")
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        raise UsageError(f"bad quiver {text!r}: {exc}")


def _params(text: str | None, quiver):
    from .klr import DiffParams

    text = text or "d_plus"
    if text in ("d_plus", "d_minus"):
        return DiffParams.preset(text, quiver)
    parts = text.split(",")
    if len(parts) == 4 and all(s.strip().lstrip("-").isdigit() for s in parts):
        vals = [int(s) for s in parts]
        if quiver.edges:
            return DiffParams.a2(*vals)
        return DiffParams.a1xa1(*vals)
    try:
        if text.lstrip().startswith("{"):
            return DiffParams.from_json(json.loads(text))
        with open(text) as fh:
            return DiffParams.from_json(json.load(fh))
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        raise UsageError(f"bad params {text!r}: {exc}")


def _cartan_entry(job):
    from .klr import Quiver, klr_hom_symbol

    u, v, params, p, window = job
    res = klr_hom_symbol(Quiver.A2(), u, v, params, p, window)
    return res.value, res.verified


def cmd_klr(args) -> int:
    from . import klr

    p = _prime(args.p)
    quiver = _quiver(args.quiver)
    report: Dict[str, Any] = {"p": p}
    code = EXIT_OK
    if args.sub == "qsr-solve":
        sols = sorted(klr.qsr_parameter_solve(p))
        report["solutions"] = [list(s) for s in sols]
    elif args.sub == "cartan":
        params = _params(args.params, quiver)
        window = _window(args.window) or (-12, 60)
        jobs = [(u, v, params, p, window) for u in klr.A2_ORDER for v in klr.A2_ORDER]
        if args.jobs and args.jobs > 1:
            with ProcessPoolExecutor(args.jobs) as ex:
                results = list(ex.map(_cartan_entry, jobs))
        else:
            results = [_cartan_entry(j) for j in jobs]
        mat = [[results[3 * r + c][0] for c in range(3)] for r in range(3)]
        verified = all(ok for _, ok in results)
        holds = klr.row_identity(mat)
        report.update(
            {
                "params": params.to_json(),
                "order": ["".join(s) for s in klr.A2_ORDER],
                "window": list(window),
                "matrix": [[e.pretty() for e in row] for row in mat],
                "matrix_json": [[e.to_json() for e in row] for row in mat],
                "row_identity": holds,
                "verified": verified,
            }
        )
        code = EXIT_OK if verified else EXIT_FAIL
    elif args.sub == "serre-check":
        params = _params(args.params, quiver)
        image = args.image or args.params == "d_minus"
        rep = klr.serre_idempotent_check(*klr.serre_quadruple(p, image=image), params)
        report.update({"params": params.to_json(), "sigma_image": image})
        report.update(rep.as_dict())
        code = EXIT_OK if rep.ok else EXIT_FAIL
    elif args.sub == "symbol":
        params = _params(args.params, quiver)
        if not args.seq:
            raise UsageError("klr symbol needs --seq, e.g. --seq iji")
        window = _window(args.window) or (-12, 60)
        res = klr.klr_symbol(quiver, tuple(args.seq), params, p, window)
        report.update({"params": params.to_json(), "seq": args.seq})
        report.update(res.to_json())
        code = EXIT_OK if res.verified else EXIT_FAIL
    _emit(report, args.format)
    return code


# quantum group


def cmd_qgroup(args) -> int:
    from .uqgroup import categorification_crosscheck, verify_bialgebra

    p = _prime(args.p)
    report: Dict[str, Any] = {"p": p}
    if p < 3:
        print("warning: several checks assume p >= 3", file=sys.stderr)
        report["warning"] = "several checks assume p >= 3"
    bi = verify_bialgebra(p)
    report["bialgebra"] = bi.as_dict()
    checks: List[dict] = []
    if p >= 3 and not args.skip_crosscheck:
        for n in range(p):
            for m in range(p - n):
                checks.append(categorification_crosscheck(p, n, m))
    report["crosscheck"] = checks
    ok = bi.ok and all(c["ok"] for c in checks)
    report["ok"] = ok
    _emit(report, args.format)
    return EXIT_OK if ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--jobs", type=int, default=1, help="worker processes where supported")

    parser = argparse.ArgumentParser(prog="pdgcat", description="Verification runs for p-DG algebras.")
    sub = parser.add_subparsers(dest="command", required=True)

    c = sub.add_parser("cohomology", parents=[common], help="decompose a p-complex file")
    c.add_argument("input")
    c.set_defaults(func=cmd_cohomology)

    n = sub.add_parser("nh", parents=[common], help="nilHecke checks")
    n.add_argument("sub", choices=("acyclic", "symbol", "derive-check"))
    n.add_argument("--p", type=int, required=True)
    n.add_argument("--n", type=int, required=True)
    n.add_argument("--a", type=int, default=1)
    n.add_argument("--window")
    n.set_defaults(func=cmd_nh)

    k = sub.add_parser("klr", parents=[common], help="KLR checks")
    k.add_argument("sub", choices=("qsr-solve", "cartan", "serre-check", "symbol"))
    k.add_argument("--p", type=int, required=True)
    k.add_argument("--quiver", help="A2, A1xA1 or a JSON file")
    k.add_argument("--params", help="d_plus, d_minus, a,b,r,s or a JSON file")
    k.add_argument("--seq", help="source sequence for symbol, e.g. iji")
    k.add_argument("--window")
    k.add_argument("--image", action="store_true", help="use the sigma-image quadruple")
    k.set_defaults(func=cmd_klr)

    q = sub.add_parser("qgroup", parents=[common], help="u+ bialgebra and crosschecks")
    q.add_argument("--p", type=int, required=True)
    q.add_argument("--skip-crosscheck", action="store_true")
    q.set_defaults(func=cmd_qgroup)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    # allow "--window -2:40" as well as "--window=-2:40"
    for k in range(len(argv) - 1):
        if argv[k] == "--window" and argv[k + 1].startswith("-"):
            argv[k : k + 2] = [f"--window={argv[k + 1]}", ""]
    argv = [a for a in argv if a != ""]
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    seed = os.environ.get("PDG_SEED")
    if seed is not None and not seed.lstrip("-").isdigit():
        print(f"error: PDG_SEED must be an integer, got {seed!r}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
