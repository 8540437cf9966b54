"""Command-line front end for the library.

Four subcommands: ``series`` prints exact Taylor tables, ``verify`` runs
the dual-route theorem checks and reports PASS or the first mismatch,
``enumerate`` lists small witness sets, and ``eval`` prints validated
numeric values.  Output is deterministic in all three formats so it can
be diffed or piped into external plotting.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from mpmath import mp, mpf

from dixonian.contfrac import (
    J_FAMILIES,
    S_FAMILIES,
    meixner_denominator,
    snake_width_gf,
    valent_ops,
    verify_conrad,
)
from dixonian.core import PowerSeries, series_compose, series_derive
from dixonian.functions import dixon_egf_integers, dixon_series, weierstrass_P
from dixonian.numerics import NumericValue, eval_cmh, eval_smh, pi3
from dixonian.permutations import (
    andre_polynomials,
    andre_weights,
    motzkin_path_total,
    parity_class_counts,
    parity_class_counts_dp,
    parity_class_members,
    repeated_count_brute,
    repeated_series,
)
from dixonian.urn import (
    M12,
    brute_cap,
    enumerate_histories,
    history_count_table,
    yule_closed_form,
    yule_rk4,
)

ORDER_ENV = "DIXONIAN_ORDER"
PRECISION_ENV = "DIXONIAN_PRECISION"
FORMAT_ENV = "DIXONIAN_FORMAT"

_FORMATS = ("text", "json", "csv")
_VERIFY_TARGETS = (
    "conrad-j",
    "conrad-s",
    "parity",
    "r-repeated",
    "urn",
    "yule",
    "valent",
    "width",
    "andre",
)

_EPILOG = """\
CSV columns:
  series:    n, coefficient, egf_integer
  verify:    check, status, detail
  enumerate: item
  eval:      expr, argument, value, error_bound

Environment overrides (flags win): DIXONIAN_ORDER, DIXONIAN_PRECISION,
DIXONIAN_FORMAT, DIXONIAN_BRUTE_CAP.

Exit codes: 0 success, 1 verification or domain failure, 2 usage error.
"""


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class Config:
    """Resolved global settings.  ``order`` is the engine truncation
    depth and never drops below 4; ``table_order`` keeps the requested
    row bound for displays."""

    order: int = 60
    table_order: int = 60
    precision: int = 30
    brute_force_cap: int = 9
    output_format: str = "text"


@dataclass
class CommandOutput:
    exit_code: int
    lines: list[str]
    csv_header: list[str]
    csv_rows: list[list[str]]
    payload: dict
    checks: list = field(default_factory=list)


# -- configuration ---------------------------------------------------------


def _resolve_int(flag: int | None, env_name: str, default: int) -> int:
    if flag is not None:
        return flag
    raw = os.environ.get(env_name)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{env_name} must be an integer, got {raw!r}") from None


def resolve_config(args: argparse.Namespace) -> Config:
    raw_order = _resolve_int(args.order, ORDER_ENV, 60)
    precision = _resolve_int(args.precision, PRECISION_ENV, 30)
    fmt = args.format or os.environ.get(FORMAT_ENV) or "text"
    if fmt not in _FORMATS:
        raise UsageError(f"format must be one of {', '.join(_FORMATS)}")
    if raw_order < 0:
        raise UsageError("order must be nonnegative")
    if precision < 10:
        raise UsageError("precision must be at least 10")
    try:
        cap = brute_cap()
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return Config(
        order=max(raw_order, 4),
        table_order=raw_order,
        precision=precision,
        brute_force_cap=cap,
        output_format=fmt,
    )


# -- series ----------------------------------------------------------------


def cmd_series(args: argparse.Namespace, config: Config) -> CommandOutput:
    name = args.function
    if name == "P":
        series = weierstrass_P(config.order)
    else:
        pair = dixon_series(config.order)
        series = getattr(pair, name)
    lines = []
    rows = []
    fact = 1
    for n in range(config.table_order + 1):
        if n:
            fact *= n
        c = series.coefficient(n)
        k = c * fact
        scaled = str(k.numerator) if k.denominator == 1 else str(k)
        if c == 0:
            mid = "0"
        elif n == 0:
            mid = scaled
        else:
            mid = f"{scaled}/{n}!"
        lines.append(f"{n}, {mid}, {scaled}")
        rows.append([str(n), mid, scaled])
    payload = {
        "command": "series",
        "function": name,
        "order": config.table_order,
        "rows": [
            {"n": int(r[0]), "coefficient": r[1], "egf_integer": r[2]}
            for r in rows
        ],
    }
    return CommandOutput(0, lines, ["n", "coefficient", "egf_integer"], rows, payload)


# -- verify ----------------------------------------------------------------


def _verify_conrad_target(kind: str, args: argparse.Namespace) -> list[tuple]:
    table = J_FAMILIES if kind == "j" else S_FAMILIES
    if args.family is not None and args.family not in table:
        raise UsageError(
            f"family must be one of {', '.join(table)} for conrad-{kind}"
        )
    families = [args.family] if args.family else list(table)
    depth = args.depth if args.depth is not None else (8 if kind == "j" else 16)
    if depth < 1:
        raise UsageError("depth must be positive")
    checks = []
    for fam in families:
        rep = verify_conrad(kind, fam, depth, inject_fault=args.inject_fault)
        checks.append((f"{kind}-{fam}", rep.ok, rep.first_message()))
    return checks


def _verify_parity(args: argparse.Namespace) -> list[tuple]:
    n_max = args.n if args.n is not None else 8
    if n_max < 1:
        raise UsageError("--n must be positive")
    sm_ints, cm_ints = dixon_egf_integers(n_max)
    checks = []
    for n in range(1, n_max + 1):
        sweep = parity_class_counts(n)
        if args.inject_fault and n == n_max:
            sweep = (sweep[0] + 1, sweep[1])
        slots = parity_class_counts_dp(n)
        series = (abs(sm_ints[n]), abs(cm_ints[n]))
        ok = sweep == slots == series
        if ok:
            detail = f"X={sweep[0]} Y={sweep[1]}"
        else:
            detail = f"sweep {sweep}, slot walk {slots}, series {series}"
        checks.append((f"n={n}", ok, detail))
    return checks


def _verify_repeated(args: argparse.Namespace) -> list[tuple]:
    n_max = args.max_n if args.max_n is not None else 7
    if n_max < 1:
        raise UsageError("--max-n must be positive")
    checks = []
    for r in (1, 2, 3):
        for open_right in (False, True):
            border = "open" if open_right else "closed"
            if open_right:
                ns = [n for n in range(r, n_max + 1) if n % r == 0]
            else:
                ns = [n for n in range(1, n_max + 1) if n % r == 1 % r]
            if not ns:
                continue
            depth = (ns[-1] if open_right else ns[-1] - 1) // r + 1
            series = repeated_series(r, depth, open_right)
            brute = [repeated_count_brute(n, r, open_right) for n in ns]
            if args.inject_fault:
                brute[-1] += 1
            closed = [
                series.coefficient((n if open_right else n - 1) // r) for n in ns
            ]
            ok = brute == closed
            if ok:
                detail = "counts " + ", ".join(str(b) for b in brute)
            else:
                detail = f"brute {brute} vs fraction {closed}"
            checks.append((f"r={r} {border}", ok, detail))
    return checks


def _verify_urn(args: argparse.Namespace) -> list[tuple]:
    n_max = args.n if args.n is not None else 6
    if n_max < 1:
        raise UsageError("--n must be positive")
    checks = []
    for start, p, q in (("x", 1, 0), ("y", 0, 1)):
        table = history_count_table(M12, p, q, n_max)
        ok = True
        detail = f"{n_max} draw lengths match"
        for n in range(1, n_max + 1):
            words = enumerate_histories(n, start, cap=n_max)
            counts = Counter(w.count("x") for w in words)
            expected = dict(table[n])
            if args.inject_fault:
                counts[min(counts)] += 1
            total = sum(counts.values())
            fact = 1
            for i in range(2, n + 1):
                fact *= i
            if dict(counts) != expected or total != fact:
                ok = False
                detail = f"n={n}: words {dict(counts)} vs operator {expected}"
                break
        checks.append((f"start={start}", ok, detail))
    return checks


def _verify_yule(args: argparse.Namespace) -> list[tuple]:
    checkpoints = (0.25, 0.5, 1.0, 2.0)
    grid = yule_rk4(25000, checkpoints)
    worst = 0.0
    for t in checkpoints:
        cx, cy = yule_closed_form(t)
        rx, ry = grid[t]
        worst = max(worst, abs(rx - cx), abs(ry - cy))
    if args.inject_fault:
        worst += 1.0
    ok = worst < 1e-9
    return [("rk4 vs closed form", ok, f"max deviation {worst:.3e}")]


def _poly_str(coeffs: Sequence[Fraction]) -> str:
    parts = []
    for m in range(len(coeffs) - 1, -1, -1):
        c = coeffs[m]
        if c == 0:
            continue
        mono = "" if m == 0 else ("z" if m == 1 else f"z^{m}")
        mag = abs(c)
        if m and mag == 1:
            body = mono
        elif m:
            body = f"{mag}{mono}"
        else:
            body = str(mag)
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(parts) if parts else "0"


def _verify_valent(args: argparse.Namespace) -> list[tuple]:
    n_max = args.max_n if args.max_n is not None else 4
    if n_max < 0:
        raise UsageError("--max-n must be nonnegative")
    rec = valent_ops(n_max, route="recurrence")
    gf = valent_ops(n_max, route="gf")
    if args.inject_fault:
        rec[-1] = list(rec[-1])
        rec[-1][0] += 1
    checks = []
    for n in range(n_max + 1):
        ok = rec[n] == gf[n]
        detail = f"Q{n}(z) = {_poly_str(rec[n])}"
        if not ok:
            detail += f" (gf route: {_poly_str(gf[n])})"
        checks.append((f"Q{n}", ok, detail))
    return checks


def _verify_width(args: argparse.Namespace) -> list[tuple]:
    h_max = args.max_n if args.max_n is not None else 6
    if h_max < 1:
        raise UsageError("--max-n must be positive")
    checks = []
    for h in range(1, h_max + 1):
        gf = snake_width_gf(h)
        den = list(gf.den)
        if args.inject_fault:
            den[0] += 1
        ok = tuple(den) == tuple(meixner_denominator(h))
        detail = f"W{h} = ({_poly_str(gf.num)}) / ({_poly_str(gf.den)})"
        checks.append((f"h={h}", ok, detail))
    return checks


def _verify_andre(args: argparse.Namespace) -> list[tuple]:
    k_max = args.max_n if args.max_n is not None else 6
    if k_max < 0:
        raise UsageError("--max-n must be nonnegative")
    polys = andre_polynomials(k_max)
    if args.inject_fault:
        polys[-1][1] = polys[-1].get(1, 0) + 1
    order = 3 * k_max + 9
    smh = dixon_series(order).smh
    sm_ints, _ = dixon_egf_integers(3 * k_max + 1)
    checks = []
    d = smh
    for k in range(k_max + 1):
        target = order - 3 * k
        outer = PowerSeries(
            [Fraction(polys[k].get(m, 0)) for m in range(target + 1)], target
        )
        inner = PowerSeries(smh.coeffs[: target + 1], target)
        compose_ok = series_compose(outer, inner).coeffs == d.coeffs
        start = polys[k].get(1, 0)
        golden = abs(sm_ints[3 * k + 1])
        path = motzkin_path_total(
            k,
            lambda lvl: andre_weights(lvl)[0],
            lambda lvl: andre_weights(lvl)[1],
            lambda lvl: andre_weights(lvl)[2],
        )
        ok = compose_ok and start == golden == path
        detail = f"P_{k}'(0) = {start}"
        if not ok:
            detail = (
                f"compose {'ok' if compose_ok else 'mismatch'}, "
                f"start {start}, series {golden}, paths {path}"
            )
        checks.append((f"k={k}", ok, detail))
        if k < k_max:
            for _ in range(3):
                d = series_derive(d)
    return checks


def cmd_verify(args: argparse.Namespace, config: Config) -> CommandOutput:
    target = args.target
    if target == "conrad-j":
        checks = _verify_conrad_target("j", args)
    elif target == "conrad-s":
        checks = _verify_conrad_target("s", args)
    elif target == "parity":
        checks = _verify_parity(args)
    elif target == "r-repeated":
        checks = _verify_repeated(args)
    elif target == "urn":
        checks = _verify_urn(args)
    elif target == "yule":
        checks = _verify_yule(args)
    elif target == "valent":
        checks = _verify_valent(args)
    elif target == "width":
        checks = _verify_width(args)
    else:
        checks = _verify_andre(args)
    ok = all(c[1] for c in checks)
    lines = [f"{name}: {detail}" for name, _, detail in checks]
    if ok:
        lines.append("PASS")
    else:
        first = next(c for c in checks if not c[1])
        lines.append(f"FAIL: {first[0]}: {first[2]}")
    rows = [
        [name, "pass" if good else "fail", detail] for name, good, detail in checks
    ]
    payload = {
        "command": "verify",
        "target": target,
        "status": "PASS" if ok else "FAIL",
        "checks": [
            {"name": name, "ok": good, "detail": detail}
            for name, good, detail in checks
        ],
    }
    return CommandOutput(
        0 if ok else 1, lines, ["check", "status", "detail"], rows, payload
    )


# -- enumerate --------------------------------------------------------------


def cmd_enumerate(args: argparse.Namespace, config: Config) -> CommandOutput:
    if args.kind == "histories":
        if args.cls is not None:
            raise UsageError("--class applies to perms only")
        start = args.start or "x"
        items = sorted(enumerate_histories(args.n, start))
        payload_items: list = items
    else:
        if args.start is not None:
            raise UsageError("--start applies to histories only")
        if args.cls is None:
            raise UsageError("enumerate perms needs --class X or --class Y")
        members = parity_class_members(args.cls, args.n)
        items = [" ".join(str(v) for v in perm) for perm in members]
        payload_items = [list(perm) for perm in members]
    payload = {
        "command": "enumerate",
        "kind": args.kind,
        "n": args.n,
        "items": payload_items,
    }
    return CommandOutput(0, items, ["item"], [[it] for it in items], payload)


# -- eval --------------------------------------------------------------------


def _parse_argument(raw: str) -> Fraction:
    try:
        return Fraction(raw)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"cannot read {raw!r} as a number") from None


def _yule_value(expr: str, t: Fraction, digits: int) -> NumericValue:
    if t < 0:
        raise ValueError("the embedding runs forward in time")
    with mp.workdps(digits + 15):
        decay = mp.exp(-mpf(t.numerator) / t.denominator)
        u = 1 - decay
        inner = eval_smh(u, digits + 5) if expr == "yuleX" else eval_cmh(u, digits + 5)
        value = decay * inner.value
        bound = decay * inner.error_bound + mpf(10) ** (-(digits + 10))
    return NumericValue(value=value, error_bound=bound)


def cmd_eval(args: argparse.Namespace, config: Config) -> CommandOutput:
    digits = args.digits if args.digits is not None else config.precision
    if digits < 10:
        raise UsageError("precision must be at least 10")
    expr = args.expr
    if expr == "pi3":
        if args.argument is not None:
            raise UsageError("pi3 takes no argument")
        arg = None
        value = pi3(digits + 5)
    else:
        if args.argument is None:
            raise UsageError(f"{expr} needs an argument")
        arg = _parse_argument(args.argument)
        if expr == "smh":
            value = eval_smh(arg, digits + 5)
        elif expr == "cmh":
            value = eval_cmh(arg, digits + 5)
        else:
            value = _yule_value(expr, arg, digits)
    places = min(digits, value.decimal_places())
    rendered = value.to_string(places)
    bound = f"2e-{places}"
    lines = [rendered, f"error < {bound}"]
    arg_str = None if arg is None else str(arg)
    payload = {
        "command": "eval",
        "expr": expr,
        "argument": arg_str,
        "value": rendered,
        "error_bound": bound,
    }
    rows = [[expr, "" if arg_str is None else arg_str, rendered, bound]]
    return CommandOutput(
        0, lines, ["expr", "argument", "value", "error_bound"], rows, payload
    )


# -- plumbing ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--order", type=int, default=None, help="series truncation / table bound"
    )
    common.add_argument(
        "--precision", type=int, default=None, help="working decimal digits"
    )
    common.add_argument(
        "--format", choices=_FORMATS, default=None, help="output format"
    )
    common.add_argument(
        "--output", metavar="FILE", default=None, help="write output to FILE"
    )
    parser = argparse.ArgumentParser(
        prog="dixonian",
        description="Exact tables, theorem checks, listings, and numeric "
        "evaluation for the Dixonian function pair.",
        epilog=_EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
        parents=[common],
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_series = sub.add_parser(
        "series", parents=[common], help="print an exact coefficient table"
    )
    p_series.add_argument("function", choices=("sm", "cm", "smh", "cmh", "P"))

    p_verify = sub.add_parser(
        "verify", parents=[common], help="run a dual-route theorem check"
    )
    p_verify.add_argument("target", choices=_VERIFY_TARGETS)
    p_verify.add_argument("--family", default=None, help="fraction family name")
    p_verify.add_argument("--depth", type=int, default=None)
    p_verify.add_argument("--n", type=int, default=None)
    p_verify.add_argument("--max-n", dest="max_n", type=int, default=None)
    p_verify.add_argument(
        "--inject-fault", action="store_true", help=argparse.SUPPRESS
    )

    p_enum = sub.add_parser(
        "enumerate", parents=[common], help="list a small witness set"
    )
    p_enum.add_argument("kind", choices=("histories", "perms"))
    p_enum.add_argument("--n", type=int, required=True)
    p_enum.add_argument("--class", dest="cls", choices=("X", "Y"), default=None)
    p_enum.add_argument("--start", choices=("x", "y"), default=None)

    p_eval = sub.add_parser(
        "eval", parents=[common], help="print a validated numeric value"
    )
    p_eval.add_argument("expr", choices=("smh", "cmh", "pi3", "yuleX", "yuleY"))
    p_eval.add_argument("argument", nargs="?", default=None)
    p_eval.add_argument("--digits", type=int, default=None)

    return parser


def render(out: CommandOutput, fmt: str) -> str:
    if fmt == "text":
        return "\n".join(out.lines) + "\n" if out.lines else ""
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(out.csv_header)
        writer.writerows(out.csv_rows)
        return buf.getvalue()
    return json.dumps(out.payload, indent=2) + "\n"


_DISPATCH = {
    "series": cmd_series,
    "verify": cmd_verify,
    "enumerate": cmd_enumerate,
    "eval": cmd_eval,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        if code in (0, None):
            return 0
        return 2
    try:
        config = resolve_config(args)
        out = _DISPATCH[args.command](args, config)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    text = render(out, config.output_format)
    if args.output:
        try:
            with open(args.output, "w", encoding="utf-8") as handle:
                handle.write(text)
        except OSError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
    else:
        sys.stdout.write(text)
    return out.exit_code


if __name__ == "__main__":
    sys.exit(main())
