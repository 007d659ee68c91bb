"""Command-line interface: steady states, sweeps, correlations, verification.

Exit codes: 0 success, 1 configuration error, 2 numerical/physical
degeneracy (no unique steady state, dark channel, failed verification),
3 sweep finished with failed grid points.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import correlations, dynamics, heff, model

__all__ = ["SweepSpec", "SweepRow", "run_sweep", "sweep_csv", "main"]

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_DEGENERATE = 2
EXIT_PARTIAL_SWEEP = 3

CSV_HEADER = "omega_rabi,sz,p2,g12,g21,cs_lhs,cs_rhs,violated,pair_freq"


@dataclass(frozen=True)
class SweepSpec:
    """Rabi-frequency grid over a fixed set of base parameters."""

    base: model.PhysicalParams
    omega_min: float = 1e11
    omega_max: float = 1e13
    points: int = 200
    spacing: str = "log"

    def __post_init__(self):
        if self.spacing not in ("log", "linear"):
            raise model.ConfigError(f"spacing must be log or linear, got {self.spacing!r}")
        if self.points < 2:
            raise model.ConfigError("points must be >= 2")
        if self.omega_max <= self.omega_min:
            raise model.ConfigError("omega_max must exceed omega_min")
        if self.spacing == "log" and self.omega_min <= 0:
            raise model.ConfigError("log spacing needs omega_min > 0")

    def grid(self) -> np.ndarray:
        if self.spacing == "log":
            return np.geomspace(self.omega_min, self.omega_max, self.points)
        return np.linspace(self.omega_min, self.omega_max, self.points)


@dataclass(frozen=True)
class SweepRow:
    omega_rabi: float
    sz: float
    p2: float
    g12: float
    g21: float
    cs_lhs: float
    cs_rhs: float
    violated: bool
    pair_freq: float
    failed: bool = False


def _sweep_point(base: model.PhysicalParams, omega: float) -> SweepRow:
    eff = model.from_physical(model.with_rabi(base, omega))
    gen = dynamics.build_adjoint_generator(eff)
    ss = dynamics.steady_state(gen)
    rep = correlations.cauchy_schwarz(ss)
    return SweepRow(
        omega_rabi=omega,
        sz=ss.s_z,
        p2=ss.p_excited,
        g12=rep.g12,
        g21=rep.g21,
        cs_lhs=rep.cs_lhs,
        cs_rhs=rep.cs_rhs,
        violated=rep.violated,
        pair_freq=eff.pair_freq,
    )


def _sweep_point_guarded(base: model.PhysicalParams, omega: float) -> SweepRow:
    try:
        return _sweep_point(base, omega)
    except Exception:
        nan = float("nan")
        return SweepRow(omega, nan, nan, nan, nan, nan, nan, False, nan, failed=True)


def run_sweep(spec: SweepSpec, workers: int = 1) -> list:
    """Evaluate the grid; rows come back in grid order regardless of workers."""
    grid = spec.grid()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda w: _sweep_point_guarded(spec.base, w), grid))
    return [_sweep_point_guarded(spec.base, w) for w in grid]


def _fmt(x: float) -> str:
    return format(x, ".9g")


def sweep_csv(rows) -> str:
    """Deterministic CSV serialization, 9 significant digits."""
    lines = [CSV_HEADER]
    for r in rows:
        lines.append(
            ",".join(
                [
                    _fmt(r.omega_rabi),
                    _fmt(r.sz),
                    _fmt(r.p2),
                    _fmt(r.g12),
                    _fmt(r.g21),
                    _fmt(r.cs_lhs),
                    _fmt(r.cs_rhs),
                    "true" if r.violated else "false",
                    _fmt(r.pair_freq),
                ]
            )
        )
    return "\n".join(lines) + "\n"


# --- configuration assembly -------------------------------------------------


def _mapping_from_args(args) -> dict:
    """preset defaults <- config file <- CLI flags, later wins."""
    mapping: dict = {}
    if args.config is not None:
        try:
            with open(args.config, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise model.ConfigError(f"cannot read config file {args.config}: {exc}")
        mapping.update(model.parse_config(text))
    if args.preset is not None:
        mapping["preset"] = args.preset
    if getattr(args, "rabi", None) is not None:
        mapping["rabi"] = args.rabi
        mapping.pop("e0_field", None)
        mapping.pop("p12_debye", None)
    return mapping


def _params(args) -> model.PhysicalParams:
    return model.params_from_mapping(_mapping_from_args(args))


def _write_text(path: str, text: str) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise model.ConfigError(f"cannot write output file {path}: {exc}")


# --- subcommands -------------------------------------------------------------


def cmd_steady(args) -> int:
    params = _params(args)
    eff = model.from_physical(params)
    gen = dynamics.build_adjoint_generator(eff)
    ss = dynamics.steady_state(gen)
    print(f"omega_rabi   = {_fmt(eff.omega_rabi)}  1/s")
    print(f"sz           = {_fmt(ss.s_z)}")
    print(f"p2           = {_fmt(ss.p_excited)}")
    print(f"delta_eff    = {_fmt(eff.delta_eff)}  1/s")
    print("channel frequencies (1/s):")
    print(f"  optical    = {_fmt(eff.omega0 + eff.bs_shift)}")
    print(f"  laser      = {_fmt(eff.omegaL)}")
    print(f"  pair       = {_fmt(eff.pair_freq)}")
    print("channel rates (1/s):")
    print(f"  gamma_R    = {_fmt(eff.gamma_R)}")
    print(f"  gamma_L    = {_fmt(eff.gamma_L)}")
    print(f"  gamma_T    = {_fmt(eff.gamma_T)}")
    print(f"  pump       = {_fmt(eff.c_pump * eff.gamma_T)}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    mapping = _mapping_from_args(args)
    spec_kwargs = {}
    for key, dst in (("omega_min", "omega_min"), ("omega_max", "omega_max")):
        if key in mapping:
            spec_kwargs[dst] = mapping.pop(key)
    if args.points is not None:
        spec_kwargs["points"] = args.points
        mapping.pop("points", None)
    elif "points" in mapping:
        spec_kwargs["points"] = mapping.pop("points")
    if args.spacing is not None:
        spec_kwargs["spacing"] = args.spacing
        mapping.pop("spacing", None)
    elif "spacing" in mapping:
        spec_kwargs["spacing"] = mapping.pop("spacing")
    spec = SweepSpec(base=model.params_from_mapping(mapping), **spec_kwargs)
    rows = run_sweep(spec)
    _write_text(args.output, sweep_csv(rows))
    failed = sum(r.failed for r in rows)
    if failed:
        print(f"{failed} of {len(rows)} grid points failed", file=sys.stderr)
        return EXIT_PARTIAL_SWEEP
    return EXIT_OK


def cmd_correlate(args) -> int:
    params = _params(args)
    eff = model.from_physical(params)
    gen = dynamics.build_adjoint_generator(eff)
    ss = dynamics.steady_state(gen)
    tau_max = args.tau_max
    if tau_max is None:
        if eff.gamma_R <= 0:
            raise model.ConfigError("tau-max required when gamma_R is zero")
        tau_max = 10.0 / eff.gamma_R
    if tau_max <= 0:
        raise model.ConfigError("tau-max must be > 0")
    if args.tau_points < 1:
        raise model.ConfigError("tau-points must be >= 1")
    if args.tau_points == 1:
        taus = np.array([0.0])
    else:
        taus = np.linspace(0.0, tau_max, args.tau_points)
    g12 = correlations.g2_tau(1, 2, gen, ss, taus)
    g21 = correlations.g2_tau(2, 1, gen, ss, taus)
    lines = ["tau,g12,g21"]
    for t, a, b in zip(taus, g12, g21):
        lines.append(f"{_fmt(t)},{_fmt(a)},{_fmt(b)}")
    _write_text(args.output, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_verify_heff(args) -> int:
    params = _params(args)
    eff = model.from_physical(params)
    if args.mode_truncation < 2:
        raise model.ConfigError("mode-truncation must be >= 2")
    report = heff.verify_derivation(params, eff, n_trunc=args.mode_truncation)
    for c in report.checks:
        line = (
            f"{c.name:18s} measured {c.measured:.12g} "
            f"target {c.target:.12g} deviation {c.deviation:.3g}"
        )
        if c.note:
            line += f"  [{c.note}]"
        print(line)
    if report.all_within(1e-8):
        print("derivation check passed")
        return EXIT_OK
    print("derivation check FAILED", file=sys.stderr)
    return EXIT_DEGENERATE


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="thzpair",
        description=(
            "Photon-pair emission from a driven two-level emitter with "
            "unequal permanent dipole moments: steady states, correlation "
            "functions, and a derivation self-check."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_rabi=True):
        p.add_argument("--preset", help="named parameter set (gamma-globulin, gan-dot)")
        p.add_argument("--config", help="key = value parameter file")
        if with_rabi:
            p.add_argument("--rabi", type=float, help="Rabi frequency (1/s)")

    p = sub.add_parser("steady", help="steady-state report for one drive strength")
    common(p)
    p.set_defaults(func=cmd_steady)

    p = sub.add_parser("sweep", help="CSV sweep over Rabi frequency")
    common(p, with_rabi=False)
    p.add_argument("--output", required=True, help="CSV output path")
    p.add_argument("--points", type=int, help="grid points (default 200)")
    spacing = p.add_mutually_exclusive_group()
    spacing.add_argument(
        "--log", dest="spacing", action="store_const", const="log",
        help="logarithmic grid (default)",
    )
    spacing.add_argument(
        "--linear", dest="spacing", action="store_const", const="linear",
        help="linear grid",
    )
    p.set_defaults(func=cmd_sweep, spacing=None)

    p = sub.add_parser("correlate", help="two-time correlations g12/g21 vs delay")
    common(p)
    p.add_argument("--output", required=True, help="CSV output path")
    p.add_argument(
        "--tau-max", type=float, help="largest delay (s); default 10/gamma_R"
    )
    p.add_argument("--tau-points", type=int, default=200, help="delay grid size")
    p.set_defaults(func=cmd_correlate)

    p = sub.add_parser(
        "verify-heff",
        help="re-derive the effective coefficients on a truncated mode",
    )
    common(p)
    p.add_argument(
        "--mode-truncation", type=int, default=3, help="Fock-space cutoff N (>= 2)"
    )
    p.set_defaults(func=cmd_verify_heff)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except model.ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (
        dynamics.DegenerateSteadyStateError,
        dynamics.NoRelaxationError,
        correlations.ChannelDarkError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
