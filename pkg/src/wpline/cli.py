"""Batch command line front end.

Exit codes: 0 when every check passes, 1 when a mathematical check fails,
2 for invalid invocations.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .series import SeriesError

SCHEMA = "wpline/1"


class UsageError(Exception):
    pass


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise UsageError(message)


def _dump(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


# ------------------------------------------------------------ subcommands
def cmd_wave(args) -> tuple:
    from .wave import t_evolve, wave_closed

    wave = wave_closed(args.r, args.dmax)
    if args.t:
        wave = t_evolve(wave, args.t, args.horder)
    if args.format == "text":
        return 0, wave.render() + "\n"
    return 0, _dump({"schema": SCHEMA, "t": str(args.t), "wave": wave.to_json_obj()})


def cmd_qc_check(args) -> tuple:
    from .wave import quantum_curve_apply, t_evolve, three_term_check, wave_closed

    half = Fraction(0) if args.tamper else Fraction(1, 2)
    checks = []
    for d in range(1, args.dmax + 1):
        checks.append({"check": f"three-term d={d}", "pass": three_term_check(args.r, d, half)})
    wave = wave_closed(args.r, args.dmax)
    img = quantum_curve_apply(args.r, wave, half_constant=half)
    checks.append({"check": f"quantum curve through q-degree {args.dmax}",
                   "pass": img.is_zero_through(args.dmax)})
    if args.t:
        evolved = t_evolve(wave, args.t, args.horder)
        img_t = quantum_curve_apply(args.r, evolved, t=args.t, horder=args.horder, half_constant=half)
        checks.append({"check": f"quantum curve at t={args.t} through h-order {args.horder}",
                       "pass": img_t.is_zero_through(args.dmax, args.horder)})
    return _verdict(args, "qc-check", checks)


def cmd_xd_check(args) -> tuple:
    from .wave import l_coefficients, xd_identity_holds

    checks = [{"check": f"X_d identity d<={args.dmax} through x^-{args.xorder}",
               "pass": xd_identity_holds(args.r, args.dmax, args.xorder)}]
    if args.r >= 2:
        for d in range(1, args.dmax + 1):
            c = l_coefficients(args.r, d)
            ok = all(v == 0 for v in c[1:]) and c[0] == (-1) ** d
            checks.append({"check": f"L(x) coefficients d={d}", "pass": ok})
    return _verdict(args, "xd-check", checks)


def cmd_vev(args) -> tuple:
    from .wedge import (
        connected_from_disconnected,
        connected_vev_recursion,
        disconnected_vev_char_sum,
        w_vev,
    )
    from math import factorial

    if args.k:
        parts = [int(p) for p in args.k.split(",")]
        _require(all(p >= 1 for p in parts), "--k entries must be >= 1")
        value = w_vev(args.r, args.dmax, parts)
        if args.format == "text":
            return 0, f"D = {value}\n"
        return 0, _dump({"schema": SCHEMA, "r": args.r, "d": args.dmax, "k": parts, "value": str(value)})
    names = [f"w{i + 1}" for i in range(args.n)]
    out = []
    agree = True
    subsets = [tuple(p for i, p in enumerate(names) if m >> i & 1) for m in range(1 << args.n)]
    dis = {}
    for sub in subsets:
        dis[frozenset(sub)] = [
            disconnected_vev_char_sum(args.r, d, list(sub), args.zorder)
            .scale(Fraction(1, factorial(d) * factorial(args.r * d)))
            for d in range(args.dmax + 1)]
    con = connected_from_disconnected(dis, names, args.dmax)
    for d in range(args.dmax + 1):
        rec = connected_vev_recursion(args.r, d, names, args.zorder)
        via_chars = con[frozenset(names)][d].scale(factorial(d) * factorial(args.r * d))
        same = (rec - via_chars).is_zero()
        agree &= same
        out.append({"d": d, "series": rec.to_json_obj(), "text": rec.to_string(), "oracle_agrees": same})
    if args.format == "text":
        body = "".join(f"d={e['d']}: {e['text']}  [oracle {'ok' if e['oracle_agrees'] else 'MISMATCH'}]\n"
                       for e in out)
        return (0 if agree else 1), body
    return (0 if agree else 1), _dump({"schema": SCHEMA, "r": args.r, "n": args.n, "correlators": out})


def cmd_gw_table(args) -> tuple:
    from .gw import invariant_table, table_csv, table_json_obj

    rows = invariant_table(args.r, args.dmax, args.n, args.zorder)
    if args.g is not None:
        rows = [row for row in rows if row.g == args.g]
    if args.format == "text":
        return 0, table_csv(rows)
    return 0, _dump({"schema": SCHEMA, "invariants": table_json_obj(rows)})


def cmd_bilinear_check(args) -> tuple:
    from .bilinear import (
        bilinear_identity_check,
        bogoliubov_export,
        canonical_basis_b,
        closed_to_matrix,
        two_point_closed,
    )

    size, D = args.n, args.dmax
    perturb = (0, 0) if args.tamper else None
    coeffs = two_point_closed(args.r, size, size, D)
    inverted = canonical_basis_b(args.r, size, D)
    checks = [
        {"check": f"A+- = B+- A-- on {size}x{size} through q-degree {D}",
         "pass": bilinear_identity_check(args.r, size, D, perturb)},
        {"check": "closed two-point function matches inversion",
         "pass": inverted.equals(closed_to_matrix(coeffs, size, D))},
    ]
    code, body = _verdict(args, "bilinear-check", checks)
    if args.format == "json":
        payload = json.loads(body)
        payload["bogoliubov"] = bogoliubov_export(coeffs)
        body = _dump(payload)
    return code, body


def cmd_char(args) -> tuple:
    from .partitions import character_table, character_table_csv, enumerate_partitions

    if args.format == "text":
        return 0, character_table_csv(args.n)
    parts = [list(p) for p in enumerate_partitions(args.n)]
    return 0, _dump({"schema": SCHEMA, "n": args.n, "partitions": parts,
                     "table": character_table(args.n)})


def _verdict(args, name: str, checks: list) -> tuple:
    ok = all(c["pass"] for c in checks)
    if args.format == "text":
        lines = [f"{'PASS' if c['pass'] else 'FAIL'}  {c['check']}" for c in checks]
        lines.append(f"{name}: {'pass' if ok else 'fail'}")
        return (0 if ok else 1), "\n".join(lines) + "\n"
    return (0 if ok else 1), _dump({"schema": SCHEMA, "command": name, "r": args.r,
                                    "pass": ok, "checks": checks})


# ------------------------------------------------------------ parser
COMMANDS = {
    "wave": cmd_wave,
    "qc-check": cmd_qc_check,
    "xd-check": cmd_xd_check,
    "vev": cmd_vev,
    "gw-table": cmd_gw_table,
    "bilinear-check": cmd_bilinear_check,
    "char": cmd_char,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wpline", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"wpline {__version__}")
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--r", type=int, default=1, help="orbifold order r >= 1")
    shared.add_argument("--dmax", type=int, default=2, help="largest degree d")
    shared.add_argument("--xorder", type=int, default=15, help="truncation order in 1/x")
    shared.add_argument("--yorder", type=int, default=8, help="truncation order in 1/y")
    shared.add_argument("--zorder", type=int, default=6, help="truncation order in z")
    shared.add_argument("--horder", type=int, default=4, help="hbar order for t-evolution")
    shared.add_argument("--t", type=_fraction, default=Fraction(0), help="time parameter (rational)")
    shared.add_argument("--format", choices=("json", "text"), default="json")
    shared.add_argument("--out", type=Path, default=None, help="write output to FILE")
    shared.add_argument("--n", type=int, default=None, help="point count, window size or partition size")
    shared.add_argument("--g", type=int, default=None, help="genus filter for gw-table")
    shared.add_argument("--k", type=str, default=None, help="composition k for vev, comma separated")
    shared.add_argument("--tamper", action="store_true", help=argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[shared])
    return parser


N_DEFAULTS = {"vev": 1, "gw-table": 1, "bilinear-check": 8, "char": 4}


def _validate(args) -> None:
    _require(args.r >= 1, "--r must be >= 1")
    _require(args.dmax >= 0, "--dmax must be >= 0")
    for flag in ("xorder", "yorder", "zorder"):
        _require(getattr(args, flag) >= 1, f"--{flag} must be >= 1")
    _require(args.horder >= 0, "--horder must be >= 0")
    if args.n is None:
        args.n = N_DEFAULTS.get(args.command, 1)
    _require(args.n >= 0, "--n must be >= 0")
    if args.command == "bilinear-check":
        _require(args.n >= 1, "--n (window size) must be >= 1")
        _require(args.dmax >= 1, "--dmax must be >= 1 for bilinear-check")
    if args.command in ("qc-check", "xd-check"):
        _require(args.dmax >= 1, f"--dmax must be >= 1 for {args.command}")
    if args.command == "gw-table":
        need = 2 * args.dmax - 1 if args.r == 1 else 1
        _require(args.zorder >= need, f"--zorder must be >= {need} to hold degree {args.dmax}")
        _require(args.g is None or args.g >= 0, "--g must be >= 0")
    if args.command == "vev":
        _require(args.n <= 4, "--n must be <= 4 for vev")
    if args.command == "char":
        _require(args.n <= 20, "--n must be <= 20 for char")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _validate(args)
        code, body = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"wpline {args.command}: {exc}", file=sys.stderr)
        return 2
    except (ValueError, SeriesError) as exc:
        print(f"wpline {args.command}: {exc}", file=sys.stderr)
        return 2
    if args.out is not None:
        args.out.write_text(body)
        meta = {"schema": SCHEMA, "version": __version__, "command": args.command,
                "argv": list(argv) if argv is not None else sys.argv[1:]}
        Path(str(args.out) + ".meta.json").write_text(_dump(meta))
    else:
        sys.stdout.write(body)
    return code


if __name__ == "__main__":
    sys.exit(main())
