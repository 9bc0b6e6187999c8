"""Command-line entry point.

Subcommands: filters, cascade, check-r, plot-s, eval-g, build-plan,
verify, report-all.  Exit codes: 0 success, 2 invalid configuration,
3 numerical failure, 4 verification failure.

All emitted artifacts are deterministic: floats are printed with 17
significant digits, JSON keys are sorted, and wall-clock fields are
dropped from report bundles so two runs with the same configuration
produce byte-identical files.  WAVESAT_OUTDIR overrides the directory
for relative output paths.
"""

from __future__ import annotations

import argparse
import dataclasses
import os
import sys
from pathlib import Path

import numpy as np

from . import analysis, cascade, filters, periodized, sequence, verify
from .errors import (
    ConfigError,
    NumericalError,
    VerificationError,
    WavesatError,
)

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_VERIFICATION = 4


def _fmt(value: float) -> str:
    return format(float(value), ".17g")


def _json_scalar(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return "null"
    if isinstance(value, float):
        if value != value:
            return '"nan"'
        if value == float("inf"):
            return '"inf"'
        if value == float("-inf"):
            return '"-inf"'
        return _fmt(value)
    if isinstance(value, int):
        return str(value)
    if isinstance(value, str):
        out = value.replace("\\", "\\\\").replace('"', '\\"')
        return f'"{out}"'
    raise TypeError(f"unsupported JSON scalar {type(value).__name__}")


def emit_json(obj, indent: int = 0) -> str:
    """Deterministic JSON: sorted keys, fixed float formatting."""
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        rows = [
            f'{inner}"{key}": {emit_json(obj[key], indent + 1)}'
            for key in sorted(obj)
        ]
        return "{\n" + ",\n".join(rows) + f"\n{pad}}}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        rows = [f"{inner}{emit_json(item, indent + 1)}" for item in obj]
        return "[\n" + ",\n".join(rows) + f"\n{pad}]"
    return _json_scalar(obj)


def _outpath(raw: str) -> Path:
    path = Path(raw)
    if not path.is_absolute():
        base = os.environ.get("WAVESAT_OUTDIR")
        if base:
            path = Path(base) / path
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def write_csv(path: Path, xs, values):
    rows = ["x,value"]
    rows += [f"{_fmt(x)},{_fmt(v)}" for x, v in zip(xs, values)]
    path.write_text("\n".join(rows) + "\n")


def write_svg(path: Path, xs, values, title: str):
    """Self-contained polyline plot with axes and a horizontal zero line."""
    width, height, margin = 720, 420, 50
    x_lo, x_hi = float(xs[0]), float(xs[-1])
    y_lo = min(0.0, float(np.min(values)))
    y_hi = float(np.max(values))
    if y_hi == y_lo:
        y_hi = y_lo + 1.0
    y_pad = 0.05 * (y_hi - y_lo)
    y_lo -= y_pad
    y_hi += y_pad

    def sx(x):
        return margin + (x - x_lo) / (x_hi - x_lo) * (width - 2 * margin)

    def sy(y):
        return height - margin - (y - y_lo) / (y_hi - y_lo) * (height - 2 * margin)

    step = max(1, len(xs) // 2000)
    pts = " ".join(
        f"{sx(float(x)):.2f},{sy(float(v)):.2f}"
        for x, v in zip(xs[::step], values[::step])
    )
    zero_y = sy(0.0)
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2:.0f}" y="24" text-anchor="middle" '
        f'font-family="sans-serif" font-size="15">{title}</text>',
        f'<line x1="{margin}" y1="{height - margin}" x2="{width - margin}" '
        f'y2="{height - margin}" stroke="black"/>',
        f'<line x1="{margin}" y1="{margin}" x2="{margin}" '
        f'y2="{height - margin}" stroke="black"/>',
        f'<line x1="{margin}" y1="{zero_y:.2f}" x2="{width - margin}" '
        f'y2="{zero_y:.2f}" stroke="red" stroke-dasharray="6,4"/>',
        f'<text x="{margin}" y="{height - margin + 18}" font-family="sans-serif" '
        f'font-size="11" text-anchor="middle">{_fmt(x_lo)}</text>',
        f'<text x="{width - margin}" y="{height - margin + 18}" '
        f'font-family="sans-serif" font-size="11" text-anchor="middle">{_fmt(x_hi)}</text>',
        f'<text x="{margin - 6}" y="{sy(y_hi - y_pad):.2f}" font-family="sans-serif" '
        f'font-size="11" text-anchor="end">{_fmt(y_hi - y_pad)}</text>',
        f'<text x="{margin - 6}" y="{zero_y:.2f}" font-family="sans-serif" '
        f'font-size="11" text-anchor="end">0</text>',
        f'<polyline points="{pts}" fill="none" stroke="steelblue" stroke-width="1.2"/>',
        "</svg>",
    ]
    path.write_text("\n".join(parts) + "\n")


def _iters_for(order: int, explicit: int | None) -> int:
    if explicit is not None:
        return explicit
    return 12 if order >= 40 else 15


def report_dict(report: analysis.PropertyRReport) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "k_psi": report.k_psi,
        "eta_tilde": report.eta_tilde,
        "eta": report.eta,
        "m_g": report.m_g,
        "r1_pass": report.r1_pass,
        "r2_pass": report.r2_pass,
        "r3_pass": report.r3_pass,
        "error_budget": report.error_budget,
        "level_n": report.level_n,
        "derivative_ratio": report.derivative_ratio,
        "lipschitz_slack": report.lipschitz_slack,
        "zero_count": report.zero_set.count,
        "zeros": list(report.zero_set.zeros),
        "min_gap": report.zero_set.min_gap,
        "zero_tolerance": report.zero_set.tolerance,
    }


def verification_dict(rep: verify.VerificationReport, with_runtime: bool) -> dict:
    out = {
        "schema_version": SCHEMA_VERSION,
        "target": rep.target,
        "dimension": rep.dimension,
        "samples_tested": rep.samples_tested,
        "windows_tested": rep.windows_tested,
        "failures": [
            {"x": list(x), "J": start} for x, start in rep.failures
        ],
        "pass": rep.passed,
        "min_observed_product": rep.min_observed_product,
        "min_observed_log2": rep.min_observed_log2,
        "alpha_used": rep.alpha_used,
        "alpha_used_log2": rep.alpha_used_log2,
    }
    if with_runtime:
        out["runtime_ms"] = rep.runtime_ms
    return out


def plan_dict(plan: sequence.SequencePlan) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "dimension": plan.dimension,
        "block_length": plan.block_length,
        "entries": [[j, list(p)] for j, p in plan.entries()],
        "provenance": plan.provenance(),
    }


def _prepare(order: int, iters: int | None):
    pair = filters.daubechies_filters(order)
    n = _iters_for(order, iters)
    phi = cascade.compute_scaling(pair, n)
    psi = cascade.compute_wavelet(phi, pair.g)
    return pair, phi, psi


def cmd_filters(args) -> int:
    pair = filters.daubechies_filters(args.order)
    validation = filters.validate_filters(pair)
    if args.json:
        doc = {
            "schema_version": SCHEMA_VERSION,
            "order": pair.order_p,
            "support_k": pair.support_k,
            "h": list(pair.h),
            "g": list(pair.g),
            "validation": {
                "sum_residual": validation.sum_residual,
                "orthonormality_residual": validation.orthonormality_residual,
                "qmf_residual": validation.qmf_residual,
                "moment_residual": validation.moment_residual,
                "pass": validation.passed,
            },
        }
        text = emit_json(doc) + "\n"
    else:
        rows = ["k,h,g"]
        rows += [
            f"{k},{_fmt(pair.h[k])},{_fmt(pair.g[k])}"
            for k in range(len(pair.h))
        ]
        text = "\n".join(rows) + "\n"
    if args.out:
        _outpath(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_cascade(args) -> int:
    pair, phi, psi = _prepare(args.order, args.iters)
    f = psi if args.emit == "psi" else phi
    write_csv(_outpath(args.csv), f.grid(), f.values)
    return EXIT_OK


def cmd_check_r(args) -> int:
    pair = filters.daubechies_filters(args.order)
    n = _iters_for(args.order, args.iters)
    report = analysis.check_property_R(pair, n_iters=n)
    text = emit_json(report_dict(report)) + "\n"
    if args.json:
        _outpath(args.json).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if report.passed else EXIT_VERIFICATION


def cmd_plot_s(args) -> int:
    pair, phi, psi = _prepare(args.order, args.iters)
    s = analysis.saturation_function(psi)
    write_svg(
        _outpath(args.svg),
        s.grid(),
        s.values,
        f"Saturation sum for order {args.order} "
        f"(min {_fmt(float(s.values.min()))})",
    )
    return EXIT_OK


def _parse_dyadic(text: str) -> periodized.DyadicRational:
    # Accepted forms: "NUM/2^L", "NUM" (integer), or a float literal.
    if "/" in text:
        num, _, den = text.partition("/")
        if not den.startswith("2^"):
            raise ConfigError(f"dyadic denominators look like 2^L, got {den!r}")
        return periodized.DyadicRational(int(num), int(den[2:]))
    if "." in text or "e" in text or "E" in text:
        return periodized.DyadicRational.from_float(float(text))
    return periodized.DyadicRational(int(text), 0)


def cmd_eval_g(args) -> int:
    pair, phi, psi = _prepare(args.order, args.iters)
    x = _parse_dyadic(args.x)
    value = periodized.G1_eval(psi, args.j, args.p_shift, x)
    sys.stdout.write(_fmt(value) + "\n")
    return EXIT_OK


def _schedule_for(psi, report, dim):
    return sequence.derive_schedule(
        psi, report.zero_set, report.eta, report.m_g, dim
    )


def cmd_build_plan(args) -> int:
    pair = filters.daubechies_filters(args.order)
    n = _iters_for(args.order, args.iters)
    report = analysis.check_property_R(pair, n_iters=n)
    if not report.passed:
        raise VerificationError(
            f"order {args.order} fails the positivity certificate; "
            "no schedule is guaranteed"
        )
    psi = analysis.wavelet_samples(pair, n)
    params = _schedule_for(psi, report, args.dim)
    plan = sequence.build_sequence_nd(psi, params, args.dim, args.horizon)
    _outpath(args.out).write_text(emit_json(plan_dict(plan)) + "\n")
    return EXIT_OK


def load_plan(path: Path) -> sequence.SequencePlan:
    import json

    doc = json.loads(path.read_text())
    entries = doc["entries"]
    tags = doc["provenance"]
    base = entries[0][0]
    block_length = doc["block_length"]
    # The inner block runs from the first entry to the slot before the
    # first repeated reset; reconstruct it from the materialized rows.
    inner = [tuple(p) for _, p in entries]
    first_len = len(inner)
    for idx in range(1, len(inner)):
        if tags[idx] == "block-reset":
            first_len = idx
            break
    return sequence.SequencePlan(
        dimension=doc["dimension"],
        horizon=len(entries) - 1,
        block_length=block_length,
        base_scale=base,
        inner=tuple(inner[:first_len]),
        inner_tags=tuple(tags[:first_len]),
        first_block=tuple(inner[:first_len]),
        first_tags=tuple(tags[:first_len]),
    )


def cmd_verify(args) -> int:
    pair = filters.daubechies_filters(args.order)
    n = _iters_for(args.order, args.iters)
    report = analysis.check_property_R(pair, n_iters=n)
    psi = analysis.wavelet_samples(pair, n)
    params = _schedule_for(psi, report, args.dim)
    if args.plan:
        plan = load_plan(Path(args.plan))
    else:
        plan = sequence.build_sequence_nd(psi, params, args.dim, args.horizon)
    j_list = list(range(0, args.j_max + 1)) if args.j_max is not None else [0]
    rep = verify.verify_theorem(
        psi, plan, params, samples=args.samples, j_list=j_list, seed=args.seed
    )
    text = emit_json(verification_dict(rep, with_runtime=True)) + "\n"
    if args.json:
        _outpath(args.json).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if rep.passed else EXIT_VERIFICATION


def cmd_report_all(args) -> int:
    """filters -> cascade -> positivity certificate -> plan -> verify,
    written as a deterministic bundle directory."""
    out_dir = _outpath(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    pair = filters.daubechies_filters(args.order)
    validation = filters.validate_filters(pair)
    n = _iters_for(args.order, args.iters)
    phi = cascade.compute_scaling(pair, n)
    psi = cascade.compute_wavelet(phi, pair.g)
    s = analysis.saturation_function(psi)
    report = analysis.check_property_R(pair, n_iters=n)

    (out_dir / "filters.json").write_text(
        emit_json(
            {
                "schema_version": SCHEMA_VERSION,
                "order": pair.order_p,
                "support_k": pair.support_k,
                "h": list(pair.h),
                "g": list(pair.g),
                "validation_pass": validation.passed,
            }
        )
        + "\n"
    )
    write_csv(out_dir / "psi.csv", psi.grid(), psi.values)
    write_csv(out_dir / "saturation.csv", s.grid(), s.values)
    write_svg(
        out_dir / "saturation.svg",
        s.grid(),
        s.values,
        f"Saturation sum for order {args.order}",
    )
    (out_dir / "property_r.json").write_text(
        emit_json(report_dict(report)) + "\n"
    )
    if not report.passed:
        return EXIT_VERIFICATION

    params = _schedule_for(psi, report, args.dim)
    plan = sequence.build_sequence_nd(psi, params, args.dim, args.horizon)
    (out_dir / "plan.json").write_text(emit_json(plan_dict(plan)) + "\n")
    j_list = list(range(0, args.horizon - plan.block_length + 1))
    rep = verify.verify_theorem(
        psi, plan, params, samples=args.samples, j_list=j_list, seed=args.seed
    )
    (out_dir / "verification.json").write_text(
        emit_json(verification_dict(rep, with_runtime=False)) + "\n"
    )
    return EXIT_OK if rep.passed else EXIT_VERIFICATION


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wavesat",
        description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_order(p):
        p.add_argument("--order", type=int, required=True, help="filter order p")
        p.add_argument(
            "--iters",
            type=int,
            default=None,
            help="cascade iterations (default 15; 12 for order >= 40)",
        )

    p = sub.add_parser("filters", help="emit filter coefficients")
    add_order(p)
    p.add_argument("--json", action="store_true")
    p.add_argument("--out", default=None, help="write instead of stdout")
    p.set_defaults(func=cmd_filters)

    p = sub.add_parser("cascade", help="sample the scaling function or wavelet")
    add_order(p)
    p.add_argument("--emit", choices=["phi", "psi"], default="psi")
    p.add_argument("--csv", required=True, help="output CSV path")
    p.set_defaults(func=cmd_cascade)

    p = sub.add_parser("check-r", help="certify property (R)")
    add_order(p)
    p.add_argument("--json", default=None, help="write report to path")
    p.set_defaults(func=cmd_check_r)

    p = sub.add_parser("plot-s", help="plot the saturation sum")
    add_order(p)
    p.add_argument("--svg", required=True, help="output SVG path")
    p.set_defaults(func=cmd_plot_s)

    p = sub.add_parser("eval-g", help="evaluate G(2^j x - p) exactly")
    add_order(p)
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--p-shift", type=int, required=True)
    p.add_argument("--x", required=True, help="dyadic NUM/2^L, integer, or float")
    p.set_defaults(func=cmd_eval_g)

    p = sub.add_parser("build-plan", help="construct a translate schedule")
    add_order(p)
    p.add_argument("--dim", type=int, default=1)
    p.add_argument("--horizon", type=int, default=200)
    p.add_argument("--out", required=True, help="plan JSON path")
    p.set_defaults(func=cmd_build_plan)

    p = sub.add_parser("verify", help="verify the non-vanishing windows")
    add_order(p)
    p.add_argument("--dim", type=int, default=1)
    p.add_argument("--plan", default=None, help="plan JSON (else built in-process)")
    p.add_argument("--horizon", type=int, default=200)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--j-max", type=int, default=None)
    p.add_argument("--seed", type=int, default=verify.DEFAULT_SEED)
    p.add_argument("--json", default=None, help="write report to path")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("report-all", help="full pipeline into a bundle directory")
    add_order(p)
    p.add_argument("--dim", type=int, default=1)
    p.add_argument("--horizon", type=int, default=200)
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--seed", type=int, default=verify.DEFAULT_SEED)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_report_all)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except VerificationError as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return EXIT_VERIFICATION
    except WavesatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
