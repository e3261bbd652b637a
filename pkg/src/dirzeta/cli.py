"""Command-line front end.

Thin routing over the library: every subcommand parses its inputs, calls the
owning module, and prints one JSON object (or a text rendering).  Exit codes:
0 success, 1 domain error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Optional

import mpmath as mp

from .engine import (ContinuationParams, continuation_eval, derivative_blocks,
                     residue_at, value_at)
from .exact import rational_from_string, rational_to_string
from .kvalue import KValue, kv_eval
from .model import (SpecError, load_spec, preset, PRESET_NAMES)
from .numeric import DomainError, Precision
from .oracles import ORACLE_NAMES, run_oracle
from .qengine import QContext, q0, q1
from .barnes import barnes_derivative, barnes_value
from .witten import (meinardus_constants, residues_g2, rg2_asymptotic,
                     rg2_exact, rg2_log_asymptotic, witten_derivative0,
                     witten_value0)


def _num_str(value, digits: int) -> str:
    with mp.workprec(int(digits * 3.33) + 16):
        return mp.nstr(mp.mpf(value), digits, strip_zeros=False)


def _load_problem(args):
    if getattr(args, "spec", None):
        return load_spec(args.spec)
    if getattr(args, "preset", None):
        pre = preset(args.preset)
        return pre.spec, pre.direction, pre.origin
    raise SpecError("exactly one of --spec or --preset is required")


def _emit(args, payload: dict) -> None:
    if args.format == "json":
        text = json.dumps(payload, sort_keys=True, indent=2)
    else:
        text = "\n".join(f"{k}: {v}" for k, v in sorted(payload.items()))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _derivative_payload(deriv: KValue, digits: int, numeric: bool) -> dict:
    payload = {"derivative": deriv.to_json_list()}
    if numeric:
        payload["numeric"] = _num_str(kv_eval(deriv, Precision(max(15, digits))),
                                      digits)
    return payload


def _params_from(args) -> ContinuationParams:
    theta = None
    if getattr(args, "theta", None):
        theta = rational_from_string(args.theta)
    return ContinuationParams(theta=theta)


def _int_list(text: str) -> list[int]:
    return [int(x) for x in text.split(",")] if text else []


def _frac_list(text: str) -> list[Fraction]:
    return [rational_from_string(x) for x in text.split(",")] if text else []


def _cmd_value(args) -> dict:
    spec, direction, target = _load_problem(args)
    return {"value": rational_to_string(value_at(spec, direction, target))}


def _cmd_derivative(args) -> dict:
    spec, direction, target = _load_problem(args)
    res = derivative_blocks(spec, direction, target)
    return _derivative_payload(res.derivative, args.digits, args.numeric)


def _cmd_continue(args) -> dict:
    spec, direction, target = _load_problem(args)
    s = rational_from_string(args.s)
    val = continuation_eval(spec, direction, target, s, _params_from(args))
    return {"s": rational_to_string(s), "value": _num_str(val, args.digits)}


def _cmd_residue(args) -> dict:
    spec, direction, target = _load_problem(args)
    s0 = rational_from_string(args.at)
    val = residue_at(spec, direction, target, s0, _params_from(args))
    return {"at": rational_to_string(s0), "residue": _num_str(val, args.digits)}


def _cmd_qcoeff(args) -> dict:
    spec, direction, target = _load_problem(args)
    pset = frozenset(_int_list(args.pset))
    k = tuple(_int_list(args.k))
    ctx = QContext(spec, direction, target, args.j, pset, k)
    payload = {"q0": rational_to_string(q0(ctx)), "q1": q1(ctx).to_json_list()}
    if args.numeric:
        payload["q1_numeric"] = _num_str(
            kv_eval(q1(ctx), Precision(max(15, args.digits))), args.digits)
    return payload


def _cmd_barnes(args) -> dict:
    R = _int_list(args.R)
    d = _frac_list(args.d)
    w = _frac_list(args.w)
    if args.derivative:
        deriv = barnes_derivative(R, args.m, d, w)
        return _derivative_payload(deriv, args.digits, args.numeric)
    return {"value": rational_to_string(barnes_value(R, args.m, d, w))}


def _cmd_witten(args) -> dict:
    if args.what == "value0":
        return {"value": rational_to_string(witten_value0(args.algebra))}
    deriv = witten_derivative0(args.algebra)
    return _derivative_payload(deriv, args.digits, True)


def _cmd_residues(args) -> dict:
    if args.algebra != "g2":
        raise DomainError("residue pairs are tabulated for g2 only")
    pair = residues_g2(Precision(max(15, args.digits)))
    return {
        "omega_alpha": _num_str(pair.omega_alpha, args.digits),
        "omega_beta": _num_str(pair.omega_beta, args.digits),
        "err_alpha": f"{pair.err_alpha:.3e}",
        "err_beta": f"{pair.err_beta:.3e}",
    }


def _cmd_rg2(args) -> dict:
    if args.mode == "exact":
        counts = rg2_exact(args.n)
        return {"n": args.n, "exact": str(counts[args.n])}
    data = meinardus_constants()
    if args.mode == "asymptotic":
        return {"n": args.n, "asymptotic": f"{rg2_asymptotic(args.n, data):.9e}",
                "leading_factor_only": True}
    counts = rg2_exact(args.n)
    lines = ["n,exact,asymptotic,log_error"]
    n = 1
    import math as _math
    while n <= args.n:
        exact = counts[n]
        log_asym = rg2_log_asymptotic(n, data)
        log_err = abs(_math.log(exact) - log_asym) if exact > 0 else float("nan")
        lines.append(f"{n},{exact},{_math.exp(log_asym):.9e},{log_err:.6f}")
        n *= 2
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")
        return {"written": args.out, "rows": len(lines) - 1,
                "leading_factor_only": True}
    print("\n".join(lines))
    return {}


def _cmd_oracle(args) -> dict:
    reports = run_oracle(args.check, getattr(args, "preset", None),
                         fast=not args.full)
    payload = {"checks": [
        {"name": r.name, "passed": r.passed,
         "max_deviation": f"{r.max_deviation:.3e}",
         "tolerance": f"{r.tolerance:.1e}", "details": r.details}
        for r in reports]}
    payload["passed"] = all(r.passed for r in reports)
    return payload


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dirzeta",
        description="Directional multizeta special values, Witten zeta "
                    "applications, and representation-count asymptotics.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, with_input=True):
        if with_input:
            group = p.add_mutually_exclusive_group(required=True)
            group.add_argument("--spec", help="path to a JSON problem file")
            group.add_argument("--preset", choices=PRESET_NAMES)
        p.add_argument("--digits", type=int, default=30)
        p.add_argument("--format", choices=("json", "text"), default="json")
        p.add_argument("--out", help="write output to this path")

    p = sub.add_parser("value", help="exact directional value")
    add_common(p)
    p.set_defaults(func=_cmd_value)

    p = sub.add_parser("derivative", help="exact directional derivative")
    add_common(p)
    p.add_argument("--numeric", action="store_true")
    p.set_defaults(func=_cmd_derivative)

    p = sub.add_parser("continue", help="J+K continuation at real s")
    add_common(p)
    p.add_argument("--s", required=True, help="evaluation point, rational p/q")
    p.add_argument("--theta", help="override the free split parameter")
    p.set_defaults(func=_cmd_continue)

    p = sub.add_parser("residue", help="residue at a candidate pole")
    add_common(p)
    p.add_argument("--at", required=True, help="pole location, rational p/q")
    p.add_argument("--theta")
    p.set_defaults(func=_cmd_residue)

    p = sub.add_parser("qcoeff", help="corner coefficients q0/q1 (debugging)")
    add_common(p)
    p.add_argument("--j", type=int, required=True, help="residual index, 0-based")
    p.add_argument("--pset", default="", help="comma-separated subset, 0-based")
    p.add_argument("--k", default="", help="comma-separated budgets")
    p.add_argument("--numeric", action="store_true")
    p.set_defaults(func=_cmd_qcoeff)

    p = sub.add_parser("barnes", help="weighted lattice zeta at -m")
    add_common(p, with_input=False)
    p.add_argument("--R", required=True, help="comma-separated exponents")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--d", required=True, help="comma-separated rationals")
    p.add_argument("--w", required=True, help="comma-separated rationals")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--value", action="store_true", default=True)
    mode.add_argument("--derivative", action="store_true", default=False)
    p.add_argument("--numeric", action="store_true")
    p.set_defaults(func=_cmd_barnes)

    p = sub.add_parser("witten", help="Lie-algebra zeta specials at 0")
    add_common(p, with_input=False)
    p.add_argument("--algebra", choices=PRESET_NAMES, required=True)
    p.add_argument("--what", choices=("value0", "derivative0"), required=True)
    p.set_defaults(func=_cmd_witten)

    p = sub.add_parser("residues", help="residue pair at 1/3 and 1/5")
    add_common(p, with_input=False)
    p.add_argument("--algebra", choices=("g2",), required=True)
    p.set_defaults(func=_cmd_residues)

    p = sub.add_parser("rg2", help="dimension-count: exact / asymptotic / CSV")
    add_common(p, with_input=False)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mode", choices=("exact", "asymptotic", "compare"),
                   default="exact")
    p.set_defaults(func=_cmd_rg2)

    p = sub.add_parser("oracle", help="run an independent cross-check")
    add_common(p, with_input=False)
    p.add_argument("--check", default="all",
                   choices=ORACLE_NAMES + ("all",))
    p.add_argument("--preset", choices=PRESET_NAMES)
    p.add_argument("--full", action="store_true",
                   help="include the slow slope-fit residue checks")
    p.set_defaults(func=_cmd_oracle)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        payload = args.func(args)
    except (DomainError, SpecError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if payload:
        _emit(args, payload)
    if args.command == "oracle" and not payload.get("passed", True):
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
