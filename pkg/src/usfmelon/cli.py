"""Command-line interface: every subsystem behind one entry point.

Subcommands and their products (JSON to stdout by default, ``--format
csv`` for delimited output, ``--out FILE`` for an atomic file write):

* ``kernel``    exact potential-kernel octant dump
* ``green``     exact first-row Green values, cross-checked between routes
* ``tables``    open/closed boundary determinant tables
* ``constants`` asymptotic watermelon amplitudes C_k
* ``prob``      exact half-plane probabilities over a range of r
* ``finite``    finite-box determinant probabilities over box sizes
* ``sample``    seeded Monte Carlo estimate on one box
* ``asympt``    power-law determinant lemma residuals
* ``fit``       exponent fit of an (r, value) table

Exit status: 0 on success, 1 on a validation/usage error, 2 when an
internal consistency alarm fired (a probability left [0, 1], two exact
routes disagreed, or an impossible pairing was observed).

JSON artifacts carry a ``meta`` block recording the full invocation (and
seed where applicable); CSV artifacts carry the same as ``#``-prefixed
comment lines before the header.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
import time
from typing import Sequence

from .errors import ConsistencyError
from .exactnum import PiPoly
from .fitting import fit_exponent
from .halfplane import g_fin_closed_row1, green_closed, green_open, green_open_row1
from .kernel import DEFAULT_KERNEL
from .lattice import RectDomain, watermelon_prob_finite
from .melons import (
    WatermelonSpec,
    decay_exponent,
    table_closed,
    table_open,
    watermelon_constant,
    watermelon_prob_halfplane,
)

__all__ = ["main"]


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # exit 1, not argparse's 2
        raise _UsageError(message)


def _parse_range(text: str) -> list[int]:
    """``"7"`` -> [7];  ``"4..9"`` -> [4, 5, ..., 9]."""
    if ".." in text:
        lo_s, _, hi_s = text.partition("..")
        lo, hi = int(lo_s), int(hi_s)
        if hi < lo:
            raise _UsageError(f"--r/--k range {text!r} is empty")
        return list(range(lo, hi + 1))
    return [int(text)]


def _parse_csv_ints(text: str) -> list[int]:
    return [int(tok) for tok in text.split(",") if tok]


def _parse_box(text: str) -> tuple[int, int]:
    w_s, _, h_s = text.partition("x")
    if not h_s:
        raise _UsageError(f"--box must look like WxH, got {text!r}")
    return int(w_s), int(h_s)


def _emit(payload: dict, fmt: str, out: str | None) -> None:
    if fmt == "json":
        text = json.dumps(payload, indent=2) + "\n"
    else:
        buf = io.StringIO()
        for key, value in payload.get("meta", {}).items():
            buf.write(f"# {key}: {json.dumps(value)}\n")
        rows = payload.get("rows", [])
        if rows:
            writer = csv.DictWriter(buf, fieldnames=list(rows[0].keys()))
            writer.writeheader()
            for row in rows:
                writer.writerow(row)
        else:  # scalar payloads: one key/value table
            writer = csv.writer(buf)
            for key, value in payload.items():
                if key != "meta":
                    writer.writerow([key, value])
        text = buf.getvalue()
    if out is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(out))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-usfmelon-")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, out)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _meta(args: argparse.Namespace, **extra) -> dict:
    meta = {"command": args.command, "argv": sys.argv[1:] or ["<api>"]}
    if getattr(args, "seed", None) is not None:
        meta["seed"] = args.seed
    meta.update(extra)
    return meta


def _poly_row(poly: PiPoly) -> dict:
    return {
        "text": poly.to_text(),
        "coeffs": poly.to_json_obj(),
        "float": float(poly.eval_interval(64)),
    }


def _cmd_kernel(args) -> dict:
    rows = []
    for m, n, value in DEFAULT_KERNEL.items(args.max):
        rational = value.coeff(0)
        pi_inv = value.coeff(1)
        rows.append(
            {
                "m": m,
                "n": n,
                "rational_part": f"{rational.numerator}/{rational.denominator}",
                "pi_inverse_part": f"{pi_inv.numerator}/{pi_inv.denominator}",
            }
        )
    return {"meta": _meta(args, max=args.max), "rows": rows}


def _cmd_green(args) -> dict:
    rows = []
    for n in args.n:
        if args.bc == "open":
            by_kernel = green_open(n, 1, 1)
            by_sum = green_open_row1(n)
        else:
            by_kernel = green_closed(n, 1, 1).finite
            by_sum = g_fin_closed_row1(n)
        if by_kernel != by_sum:
            raise ConsistencyError(
                f"green value routes disagree at n={n} ({args.bc}): "
                f"{by_kernel.to_text()} vs {by_sum.to_text()}"
            )
        rows.append({"n": n, "value": by_kernel.to_text(),
                     "float": float(by_kernel.eval_interval(64))})
    return {"meta": _meta(args, bc=args.bc), "rows": rows}


def _cmd_tables(args) -> dict:
    rows = []
    for k in args.k:
        table = table_open(k) if args.bc == "open" else table_closed(k)
        rows.append({"k": k, **_poly_row(table)})
    return {"meta": _meta(args, bc=args.bc), "rows": rows}


def _cmd_constants(args) -> dict:
    rows = []
    for k in args.k:
        exact, value = watermelon_constant(args.bc, k)
        table = exact.denominator
        rows.append(
            {
                "k": k,
                "table_det": table.to_json_obj(),
                "table_det_text": table.to_text(),
                "C_k_exact": {
                    "num": exact.numerator.to_json_obj(),
                    "den": exact.denominator.to_json_obj(),
                    "pi_power": exact.pi_power,
                },
                "C_k_float": value,
            }
        )
    return {"meta": _meta(args, bc=args.bc), "rows": rows}


def _cmd_prob(args) -> dict:
    rows = []
    for k in args.k:
        power = decay_exponent(args.bc, k)
        for r in args.r:
            spec = WatermelonSpec(k=k, r=r, bc=args.bc)
            _, value = watermelon_prob_halfplane(spec)
            rows.append(
                {
                    "k": k,
                    "r": r,
                    "prob": value,
                    "prob_times_r_power": value * r**power,
                }
            )
    return {"meta": _meta(args, bc=args.bc, power_by_k={
        str(k): decay_exponent(args.bc, k) for k in args.k}), "rows": rows}


def _cmd_finite(args) -> dict:
    rows = []
    (k,) = args.k if len(args.k) == 1 else (_usage("finite takes one --k"),)
    (r,) = args.r if len(args.r) == 1 else (_usage("finite takes one --r"),)
    prev = None
    for size in args.sizes:
        prob = watermelon_prob_finite(RectDomain.standard(size, args.bc), k, r)
        rows.append(
            {
                "size": size,
                "prob": prob,
                "delta_prev": None if prev is None else abs(prob - prev),
            }
        )
        prev = prob
    return {"meta": _meta(args, bc=args.bc, k=k, r=r), "rows": rows}


def _usage(message: str):
    raise _UsageError(message)


def _cmd_sample(args) -> dict:
    from .sampler import mc_estimate

    width, height = args.box
    (k,) = args.k if len(args.k) == 1 else (_usage("sample takes one --k"),)
    (r,) = args.r if len(args.r) == 1 else (_usage("sample takes one --r"),)
    domain = RectDomain(width=width, height=height, bc=args.bc)
    start = time.monotonic()
    est = mc_estimate(domain, k, r, args.n, args.seed, threads=args.threads)
    elapsed = time.monotonic() - start
    return {
        "meta": _meta(args, bc=args.bc, k=k, r=r),
        "p_hat": est.p_hat,
        "stderr": est.stderr,
        "n": est.n,
        "seed": est.seed,
        "box": f"{width}x{height}",
        "elapsed_s": elapsed,
    }


def _cmd_asympt(args) -> dict:
    import mpmath as mp

    from .detasym import ShiftVectors, powerlaw_leading

    if args.check != "powerlaw":
        raise _UsageError(f"unknown --check {args.check!r}")
    (k,) = args.k if len(args.k) == 1 else (_usage("asympt takes one --k"),)
    if args.u is not None and args.v is not None:
        sv = ShiftVectors(tuple(args.u), tuple(args.v))
        if sv.k != k:
            raise _UsageError("--u/--v length must equal --k")
    else:
        # generic shifts: sum(u) != sum(v), so the O(1/r) correction of the
        # lemma is visible in the residuals
        sv = ShiftVectors(
            tuple(range(1, k + 1)), tuple(k + 2 - i for i in range(1, k + 1))
        )
    rows = []
    for r in args.r:
        dps = 30 + int(k * (args.alpha + k) * math.log10(max(r, 2)))
        with mp.workdps(dps):
            matrix = mp.matrix(
                [
                    [(mp.mpf(r) + sv.u[i] - sv.v[j]) ** (-mp.mpf(args.alpha))
                     for j in range(k)]
                    for i in range(k)
                ]
            )
            determinant = mp.det(matrix)
        leading = powerlaw_leading(args.alpha, k, sv, float(r))
        ratio = float(determinant / leading)
        rows.append({"r": r, "ratio": ratio, "residual": ratio - 1.0})
    return {
        "meta": _meta(args, alpha=args.alpha, k=k, u=list(sv.u), v=list(sv.v)),
        "rows": rows,
    }


def _cmd_fit(args) -> dict:
    points: list[tuple[float, float]] = []
    with open(args.input, newline="") as handle:
        for line in handle:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            cells = next(csv.reader([line]))
            try:
                r, value = float(cells[0]), float(cells[1])
            except (ValueError, IndexError):
                continue  # header or malformed line
            points.append((r, value))
    report = fit_exponent(points)
    return {"meta": _meta(args, input=args.input), **report.to_dict()}


_COMMANDS = {
    "kernel": _cmd_kernel,
    "green": _cmd_green,
    "tables": _cmd_tables,
    "constants": _cmd_constants,
    "prob": _cmd_prob,
    "finite": _cmd_finite,
    "sample": _cmd_sample,
    "asympt": _cmd_asympt,
    "fit": _cmd_fit,
}


def _add_common(sub: argparse.ArgumentParser, *flags: str) -> None:
    if "bc" in flags:
        sub.add_argument("--bc", choices=("open", "closed"), required=True)
    if "k" in flags:
        sub.add_argument("--k", type=_parse_range, default=[1])
    if "r" in flags:
        sub.add_argument("--r", type=_parse_range)
    sub.add_argument("--format", choices=("json", "csv"), default="json")
    sub.add_argument("--out", default=None, help="write atomically to this path")
    sub.add_argument("--threads", type=int, default=1)


def build_parser() -> _Parser:
    parser = _Parser(prog="usfmelon", description=__doc__.splitlines()[0])
    subs = parser.add_subparsers(dest="command", required=True)

    sub = subs.add_parser("kernel", help="exact potential-kernel dump")
    sub.add_argument("--max", type=int, required=True)
    _add_common(sub)

    sub = subs.add_parser("green", help="first-row Green values, both routes")
    sub.add_argument("--n", type=_parse_range, default=list(range(6)))
    _add_common(sub, "bc")

    sub = subs.add_parser("tables", help="boundary determinant tables")
    _add_common(sub, "bc", "k")

    sub = subs.add_parser("constants", help="asymptotic amplitudes C_k")
    _add_common(sub, "bc", "k")

    sub = subs.add_parser("prob", help="exact half-plane probabilities")
    _add_common(sub, "bc", "k", "r")

    sub = subs.add_parser("finite", help="finite-box probabilities over sizes")
    sub.add_argument("--sizes", type=_parse_csv_ints, required=True)
    _add_common(sub, "bc", "k", "r")

    sub = subs.add_parser("sample", help="Monte Carlo estimate on one box")
    sub.add_argument("--box", type=_parse_box, required=True)
    sub.add_argument("--n", type=int, required=True)
    sub.add_argument("--seed", type=int, required=True)
    _add_common(sub, "bc", "k", "r")

    sub = subs.add_parser("asympt", help="determinant-lemma residuals")
    sub.add_argument("--check", default="powerlaw")
    sub.add_argument("--alpha", type=float, required=True)
    sub.add_argument("--r", type=_parse_csv_ints, required=True)
    sub.add_argument("--u", type=_parse_csv_ints, default=None)
    sub.add_argument("--v", type=_parse_csv_ints, default=None)
    _add_common(sub, "k")

    sub = subs.add_parser("fit", help="fit C * r^-p to an (r, value) table")
    sub.add_argument("--input", required=True)
    _add_common(sub)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "r", None) is None and args.command in ("prob", "finite", "sample"):
            raise _UsageError(f"{args.command} requires --r")
        payload = _COMMANDS[args.command](args)
        _emit(payload, args.format, args.out)
        return 0
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except ConsistencyError as exc:
        print(f"consistency alarm: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
