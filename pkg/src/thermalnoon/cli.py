"""Command line front end.

Subcommands:
  analytic      sample a closed-form correlation curve to CSV + JSON sidecar
  oracle-check  cross-check closed forms, path sum, and permanent evaluators
  speckle       Monte Carlo speckle run: CSV curve + JSON cosine fit
  fock          truncated Fock-space projection and factorization report
  thresholds    co-located vs spread visibility crossover table

Randomized commands take an explicit --seed; nothing is seeded from the clock.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys

import numpy as np

from .analytic import (
    crossover_threshold,
    setup1_coeffs,
    setup1_curve,
    setup1_g,
    setup1_visibility,
    setup2_coeffs,
    setup2_curve,
    setup2_g,
    setup2_visibility,
)
from .curves import default_grid
from .errors import CapacityError
from .fockstate import (
    default_cutoff,
    noon_overlap,
    project_magic,
    thermal_two_mode,
    verify_isomorphism,
)
from .geometry import TWO_PI, DetectorLayout, SourceArray
from .pathsum import PATHSUM_MAX_ORDER, correlation_pathsum, correlation_permanent
from .speckle import SpeckleConfig, fit_cosine, simulate_curve

ORACLE_TOLERANCE = 1e-9
ISOMORPHISM_TOLERANCE = 1e-6


def _relative_gap(a: float, b: float) -> float:
    return abs(a - b) / max(abs(a), abs(b), 1e-300)


def _write_csv(path: str, header: list[str], rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([repr(float(v)) for v in row])


def _emit_json(payload: dict, path: str | None) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True)
    if path is None:
        print(text)
    else:
        with open(path, "w") as fh:
            fh.write(text + "\n")
        print(f"wrote {path}")


def _sidecar_path(csv_path: str) -> str:
    return (csv_path[:-4] if csv_path.endswith(".csv") else csv_path) + ".json"


def _cmd_analytic(args: argparse.Namespace) -> int:
    grid = default_grid(args.grid)
    if args.setup == 1:
        if args.order is None:
            raise ValueError("--setup 1 needs --order (even total detector count)")
        curve = setup1_curve(args.order, grid)
        c1, c2 = setup1_coeffs(args.order)
        frequency = args.order // 2
        parity_sign = 1
        out = args.out or f"analytic-spread-M{args.order}.csv"
        sample = setup1_g(args.order, 0.0)
    else:
        if args.m1 is None or args.m2 is None:
            raise ValueError("--setup 2 needs --m1 and --m2")
        curve = setup2_curve(args.m1, args.m2, grid)
        coeffs = setup2_coeffs(args.m1, args.m2)
        c1, c2 = coeffs.c1, coeffs.c2
        frequency = coeffs.frequency
        parity_sign = coeffs.parity_sign
        out = args.out or f"analytic-colocated-m1_{args.m1}-m2_{args.m2}.csv"
        sample = setup2_g(args.m1, args.m2, 0.0)
    peak = float(curve.values.max())
    _write_csv(
        out,
        ["delta1", "G", "g_norm"],
        zip(curve.grid, curve.values, curve.values / peak),
    )
    sidecar = {
        "c1": c1,
        "c2": c2,
        "visibility": c2 / c1,
        "frequency": frequency,
        "parity_sign": parity_sign,
    }
    with open(_sidecar_path(out), "w") as fh:
        fh.write(json.dumps(sidecar, indent=2, sort_keys=True) + "\n")
    print(
        f"wrote {out} and {_sidecar_path(out)} "
        f"(visibility {c2 / c1:.6g}, G(0) = {sample:g})"
    )
    return 0


def _cmd_oracle_check(args: argparse.Namespace) -> int:
    if args.max_order > 8:
        raise CapacityError(
            f"oracle sweeps are limited to --max-order 8; the path sum itself "
            f"caps at M = {PATHSUM_MAX_ORDER}, use correlation_permanent beyond"
        )
    rng = np.random.default_rng(args.seed)
    two = SourceArray.equidistant(2, 1.0)
    report: dict = {"tolerance": ORACLE_TOLERANCE, "seed": args.seed}

    spread = []
    for order in range(2, args.max_order + 1, 2):
        layout = DetectorLayout.spread(order // 2)
        worst = 0.0
        for delta1 in rng.uniform(0.0, TWO_PI, size=args.samples):
            direct = correlation_pathsum(two, layout.detector_phases(delta1))
            closed = setup1_g(order, delta1)
            worst = max(worst, _relative_gap(direct, closed))
        spread.append({"order": order, "max_rel_gap": worst})
    report["spread_closed_form"] = spread

    colocated = []
    for m1 in range(1, args.max_order):
        for m2 in range(1, args.max_order - m1 + 1):
            layout = DetectorLayout.colocated(m1, m2)
            worst = 0.0
            for delta1 in rng.uniform(0.0, TWO_PI, size=args.samples):
                direct = correlation_pathsum(two, layout.detector_phases(delta1))
                closed = setup2_g(m1, m2, delta1)
                worst = max(worst, _relative_gap(direct, closed))
            colocated.append({"m1": m1, "m2": m2, "max_rel_gap": worst})
    report["colocated_closed_form"] = colocated

    worst = 0.0
    for _ in range(args.random_configs):
        count = int(rng.integers(1, 4))
        order = int(rng.integers(1, min(6, args.max_order) + 1))
        nbar = tuple(rng.choice([0.5, 1.0, 2.0]) for _ in range(count))
        sources = SourceArray(nbar=nbar)
        deltas = rng.uniform(0.0, TWO_PI, size=order)
        worst = max(
            worst,
            _relative_gap(
                correlation_pathsum(sources, deltas),
                correlation_permanent(sources, deltas),
            ),
        )
    report["pathsum_vs_permanent"] = {
        "configs": args.random_configs,
        "max_rel_gap": worst,
    }

    gaps = (
        [row["max_rel_gap"] for row in spread]
        + [row["max_rel_gap"] for row in colocated]
        + [worst]
    )
    report["max_rel_gap"] = max(gaps)
    report["pass"] = bool(report["max_rel_gap"] <= ORACLE_TOLERANCE)
    _emit_json(report, args.out)
    return 0 if report["pass"] else 1


def _speckle_config(args: argparse.Namespace) -> SpeckleConfig:
    if args.config is not None:
        with open(args.config) as fh:
            data = json.load(fh)
        cfg = SpeckleConfig.from_dict(data)
        overrides = {}
        if args.frames is not None:
            overrides["frames"] = args.frames
        if args.seed is not None:
            overrides["seed"] = args.seed
        if args.workers is not None:
            overrides["workers"] = args.workers
        if overrides:
            from dataclasses import replace

            cfg = replace(cfg, **overrides)
        return cfg
    missing = [
        name
        for name, value in (
            ("--m1", args.m1),
            ("--m2", args.m2),
            ("--frames", args.frames),
            ("--seed", args.seed),
        )
        if value is None
    ]
    if missing:
        raise ValueError(f"missing required flags: {', '.join(missing)}")
    if args.layout == "spread":
        if args.m1 != args.m2:
            raise ValueError("--layout spread requires --m1 == --m2")
        layout = DetectorLayout.spread(args.m1)
    else:
        layout = DetectorLayout.colocated(args.m1, args.m2)
    return SpeckleConfig(
        sources=SourceArray.equidistant(args.sources, args.nbar),
        layout=layout,
        frames=args.frames,
        seed=args.seed,
        grid=default_grid(args.grid),
        slit_ratio=args.slit_ratio,
        workers=args.workers if args.workers is not None else 1,
    )


def _cmd_speckle(args: argparse.Namespace) -> int:
    config = _speckle_config(args)
    curve = simulate_curve(config)
    frequency = args.fit_frequency
    if frequency is None:
        frequency = config.layout.m2 if config.layout.m2 >= 1 else 1
    fit = fit_cosine(curve, frequency)
    normalized = curve.normalize()
    out = args.out or (
        f"speckle-m1_{config.layout.m1}-m2_{config.layout.m2}"
        f"-frames_{config.frames}-seed_{config.seed}.csv"
    )
    _write_csv(
        out,
        ["delta1", "g_norm", "stderr"],
        zip(normalized.grid, normalized.values, normalized.stderr),
    )
    sidecar = {
        "A": fit.offset,
        "B": fit.amplitude,
        "visibility": fit.visibility,
        "stderr_visibility": fit.stderr_visibility,
        "stderr_amplitude": fit.stderr_amplitude,
        "frequency": fit.frequency,
        "dominant_frequency": fit.dominant_frequency,
        "parity_ok": fit.parity_ok,
        "seed": config.seed,
        "frames": config.frames,
    }
    with open(_sidecar_path(out), "w") as fh:
        fh.write(json.dumps(sidecar, indent=2, sort_keys=True) + "\n")
    print(
        f"wrote {out} and {_sidecar_path(out)} "
        f"(visibility {fit.visibility:.4f} +- {fit.stderr_visibility:.4f}, "
        f"dominant frequency {fit.dominant_frequency})"
    )
    return 0


def _cmd_fock(args: argparse.Namespace) -> int:
    cutoff = args.cutoff or default_cutoff(args.nbar, args.m1, args.m2)
    rho = thermal_two_mode(args.nbar, cutoff)
    projected = project_magic(rho, args.m2)
    offsets = projected.support_offsets(tol=1e-12)
    expected = {(0, 0), (args.m2, -args.m2), (-args.m2, args.m2)}
    grid = np.linspace(0.0, TWO_PI, args.grid)
    reports = [
        verify_isomorphism(args.nbar, args.m1, args.m2, d, cutoff) for d in grid
    ]
    max_gap = max(r.relative_gap for r in reports)
    payload = {
        "nbar": args.nbar,
        "m1": args.m1,
        "m2": args.m2,
        "cutoff": cutoff,
        "trunc_tail": rho.trunc_tail,
        "projection_norm": projected.projection_norm,
        "support_offsets": sorted(offsets),
        "support_ok": bool(offsets <= expected),
        "noon_overlap": noon_overlap(projected, args.m2),
        "grid": [float(d) for d in grid],
        "relative_gaps": [r.relative_gap for r in reports],
        "max_relative_gap": max_gap,
        "tolerance": ISOMORPHISM_TOLERANCE,
        "pass": bool(offsets <= expected and max_gap <= ISOMORPHISM_TOLERANCE),
    }
    _emit_json(payload, args.out)
    return 0 if payload["pass"] else 1


def _cmd_thresholds(args: argparse.Namespace) -> int:
    if args.max_m2 < 2:
        raise ValueError("--max-m2 must be >= 2")
    rows = []
    table = {}
    for m2 in range(2, args.max_m2 + 1):
        m1 = crossover_threshold(m2)
        table[str(m2)] = m1
        rows.append(
            {
                "m2": m2,
                "m1_min": m1,
                "colocated_visibility": float(setup2_visibility(m1, m2)),
                "spread_visibility": float(setup1_visibility(2 * m2)),
            }
        )
    payload = {"thresholds": table, "detail": rows}
    _emit_json(payload, args.out)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="thermalnoon",
        description="Thermal-light intensity correlations at magic detector positions.",
    )
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("analytic", help="sample a closed-form curve to CSV")
    p.add_argument("--setup", type=int, choices=(1, 2), required=True)
    p.add_argument("--order", type=int, help="total detectors M for --setup 1 (even)")
    p.add_argument("--m1", type=int, help="moving detectors for --setup 2")
    p.add_argument("--m2", type=int, help="fixed detectors for --setup 2")
    p.add_argument("--grid", type=int, default=181, metavar="N")
    p.add_argument("--out", type=str, default=None, metavar="PATH")
    p.set_defaults(handler=_cmd_analytic)

    p = sub.add_parser("oracle-check", help="cross-check the evaluators")
    p.add_argument("--max-order", type=int, default=6)
    p.add_argument("--samples", type=int, default=25, metavar="N")
    p.add_argument("--random-configs", type=int, default=100, metavar="N")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", type=str, default=None, metavar="PATH")
    p.set_defaults(handler=_cmd_oracle_check)

    p = sub.add_parser("speckle", help="Monte Carlo speckle run")
    p.add_argument("--m1", type=int, default=None)
    p.add_argument("--m2", type=int, default=None)
    p.add_argument(
        "--layout", choices=("colocated", "spread"), default="colocated"
    )
    p.add_argument("--frames", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--grid", type=int, default=181, metavar="N")
    p.add_argument("--nbar", type=float, default=1.0, metavar="X")
    p.add_argument("--sources", type=int, default=2, metavar="K")
    p.add_argument("--workers", type=int, default=None, metavar="W")
    p.add_argument("--slit-ratio", type=float, default=0.0)
    p.add_argument("--fit-frequency", type=int, default=None)
    p.add_argument("--config", type=str, default=None, metavar="JSON")
    p.add_argument("--out", type=str, default=None, metavar="PATH")
    p.set_defaults(handler=_cmd_speckle)

    p = sub.add_parser("fock", help="projection and factorization report")
    p.add_argument("--nbar", type=float, default=0.5, metavar="X")
    p.add_argument("--m1", type=int, default=2)
    p.add_argument("--m2", type=int, default=2)
    p.add_argument("--cutoff", type=int, default=None)
    p.add_argument("--grid", type=int, default=9, metavar="N")
    p.add_argument("--out", type=str, default=None, metavar="PATH")
    p.set_defaults(handler=_cmd_fock)

    p = sub.add_parser("thresholds", help="visibility crossover table")
    p.add_argument("--max-m2", type=int, default=5)
    p.add_argument("--out", type=str, default=None, metavar="PATH")
    p.set_defaults(handler=_cmd_thresholds)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "handler", None) is None:
        parser.print_help()
        return 2
    try:
        return args.handler(args)
    except (ValueError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
