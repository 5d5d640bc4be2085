"""Command-line entry point.

Subcommands reproduce the reference sweeps (fig1d, fig1e, fig2b, fig2c,
fig2d), run a user-supplied sequence file (run-seq), or cross-check the
Monte Carlo engine against the exact backend (verify).  Every numeric
output is a pure function of (config, seed); CSV files carry a metadata
header that fully documents the run.

The exact backend evaluates fig1d, fig1e, and fig2b on the small desk-unit
verification bath (order-1 rad/s frequencies); time values are then
dimensionless instead of microseconds, and the metadata header says so.
"""

from __future__ import annotations

import argparse
import sys

from . import __version__
from .config import RunConfig, config_header, load_config, write_csv
from .engine import (covariance_from_bits, run_outcomes, sweep_amplitude,
                     sweep_delay, sweep_echo)
from .oracle import exact_covariance, exact_echo_probability
from .seqfile import SequenceParseError, parse_sequence
from .sequences import IntermediateSpec
from .verify import default_verify_spec, run_verify

US = 1e-6

EXACT_SUBCOMMANDS = ("fig1d", "fig1e", "fig2b")


def _require_semiclassical(config: RunConfig, command: str) -> None:
    if config.backend == "exact" and command not in EXACT_SUBCOMMANDS:
        raise ValueError(
            f"the exact backend supports {', '.join(EXACT_SUBCOMMANDS)} "
            f"and verify, not {command}")


def cmd_fig1d(config: RunConfig) -> tuple[list[str], list[tuple]]:
    """Single-echo P(S) vs tau_echo."""
    taus = config.grid(config.fig1d_tau_min_us, config.fig1d_tau_max_us,
                       config.fig1d_points)
    columns = ["tau_echo_us", "p_singlet", "stderr"]
    if config.backend == "exact":
        spec = default_verify_spec()
        return columns, [(t, exact_echo_probability(spec, t), 0.0)
                         for t in taus]
    results = sweep_echo(config.model(), [t * US for t in taus],
                         config.shots, config.seed, config.workers)
    return columns, [(t, r.p1_mean, r.stderr)
                     for t, r in zip(taus, results)]


def cmd_fig1e(config: RunConfig) -> tuple[list[str], list[tuple]]:
    """Covariance vs tau_delay, one trace per tau_echo (long format)."""
    delays = config.grid(config.fig1e_delay_min_us, config.fig1e_delay_max_us,
                         config.fig1e_points)
    columns = ["tau_echo_us", "tau_delay_us", "covariance", "stderr"]
    rows = []
    if config.backend == "exact":
        spec = default_verify_spec()
        for tau in config.fig1e_tau_echo_traces_us:
            for d in delays:
                c = exact_covariance(spec, tau, _gap(d, tau), "lock_singlet")
                rows.append((tau, d, c, 0.0))
        return columns, rows
    model = config.model()
    for tau in config.fig1e_tau_echo_traces_us:
        results = sweep_delay(model, tau * US, [d * US for d in delays],
                              IntermediateSpec(), config.shots, config.seed,
                              config.workers)
        rows.extend((tau, d, r.covariance, r.stderr)
                    for d, r in zip(delays, results))
    return columns, rows


def _gap(delay: float, tau_echo: float) -> float:
    gap = delay - tau_echo
    if gap < 0:
        raise ValueError(f"tau_delay {delay} is shorter than tau_echo "
                         f"{tau_echo}")
    return gap


def cmd_fig2b(config: RunConfig) -> tuple[list[str], list[tuple]]:
    """Covariance vs tau_delay, one column pair per intermediate mode."""
    delays = config.grid(config.fig2b_delay_min_us, config.fig2b_delay_max_us,
                         config.fig2b_points)
    tau = config.fig2b_tau_echo_us
    columns = ["tau_delay_us"]
    for mode in config.fig2b_modes:
        columns += [f"cov_{mode}", f"err_{mode}"]
    per_mode = []
    if config.backend == "exact":
        spec = default_verify_spec()
        for mode in config.fig2b_modes:
            per_mode.append([(exact_covariance(spec, tau, _gap(d, tau), mode),
                              0.0) for d in delays])
    else:
        model = config.model()
        for mode in config.fig2b_modes:
            inter = IntermediateSpec(
                mode=mode,
                pulse_angle_error_rms=config.fig2b_pulse_angle_error_rms)
            results = sweep_delay(model, tau * US, [d * US for d in delays],
                                  inter, config.shots, config.seed,
                                  config.workers)
            per_mode.append([(r.covariance, r.stderr) for r in results])
    rows = []
    for i, d in enumerate(delays):
        row: tuple = (d,)
        for series in per_mode:
            row = row + series[i]
        rows.append(row)
    return columns, rows


def cmd_fig2c(config: RunConfig) -> tuple[list[str], list[tuple]]:
    """Single-echo P(S) vs refocusing-pulse amplitude (calibration)."""
    amps = config.grid(config.fig2_amp_min, config.fig2_amp_max,
                       config.fig2_points)
    _, echo = sweep_amplitude(config.model(), config.fig2_tau_echo_us * US,
                              config.fig2_tau_delay_us * US, amps,
                              config.shots, config.seed, config.workers)
    columns = ["amplitude", "p_singlet", "stderr"]
    return columns, [(a, r.p1_mean, r.stderr) for a, r in zip(amps, echo)]


def cmd_fig2d(config: RunConfig) -> tuple[list[str], list[tuple]]:
    """Covariance vs intermediate pulse amplitude, with the co-emitted
    single-echo calibration curve on the same grid."""
    amps = config.grid(config.fig2_amp_min, config.fig2_amp_max,
                       config.fig2_points)
    cov, echo = sweep_amplitude(config.model(), config.fig2_tau_echo_us * US,
                                config.fig2_tau_delay_us * US, amps,
                                config.shots, config.seed, config.workers)
    columns = ["amplitude", "covariance", "stderr", "echo_p_singlet",
               "echo_stderr"]
    return columns, [(a, c.covariance, c.stderr, e.p1_mean, e.stderr)
                     for a, c, e in zip(amps, cov, echo)]


def cmd_run_seq(config: RunConfig, path: str) -> tuple[list[str], list[tuple]]:
    """Run a DSL sequence file for the configured number of shots."""
    with open(path, encoding="utf-8") as fh:
        seq = parse_sequence(fh.read())
    if seq.n_measurements != 2:
        raise ValueError(f"sequence must contain exactly two measurements, "
                         f"found {seq.n_measurements}")
    bits = run_outcomes(seq, config.model(), config.seed, config.shots,
                        config.workers)
    cov, se = covariance_from_bits(bits[:, 0], bits[:, 1])
    columns = ["p1_singlet", "p2_singlet", "covariance", "stderr", "shots"]
    row = (float(bits[:, 0].mean()), float(bits[:, 1].mean()), cov, se,
           config.shots)
    return columns, [row]


def cmd_verify(config: RunConfig, out) -> int:
    report = run_verify(shots=config.verify_shots, seed=config.seed,
                        workers=config.workers)
    for line in report.lines():
        out.write(line + "\n")
    return 0 if report.ok else 1


def _emit(config: RunConfig, command: str, columns, rows) -> None:
    header = config_header(config, command, __version__)
    if config.backend == "exact":
        header.append("# desk_units = true (times dimensionless, "
                      "frequencies of order 1 rad/s)")
    if config.out:
        with open(config.out, "w", encoding="utf-8", newline="") as fh:
            write_csv(fh, header, columns, rows)
    else:
        write_csv(sys.stdout, header, columns, rows)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spinbath",
        description="Hahn-echo correlation sweeps of a nuclear spin bath")
    sub = parser.add_subparsers(dest="command", required=True)
    names = ["fig1d", "fig1e", "fig2b", "fig2c", "fig2d", "run-seq", "verify"]
    for name in names:
        p = sub.add_parser(name)
        p.add_argument("--config", metavar="PATH", default=None)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--shots", type=int, default=None)
        p.add_argument("--workers", type=int, default=None)
        p.add_argument("--backend", choices=["semiclassical", "exact"],
                       default=None)
        p.add_argument("--out", metavar="PATH", default=None)
        if name == "run-seq":
            p.add_argument("file", metavar="FILE")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    overrides = dict(seed=args.seed, workers=args.workers,
                     backend=args.backend, out=args.out)
    if args.command == "verify":
        overrides["verify_shots"] = args.shots
    else:
        overrides["shots"] = args.shots
    try:
        config = load_config(args.config, **overrides)
        if args.command == "verify":
            return cmd_verify(config, sys.stdout)
        _require_semiclassical(config, args.command)
        if args.command == "run-seq":
            columns, rows = cmd_run_seq(config, args.file)
        else:
            handler = {"fig1d": cmd_fig1d, "fig1e": cmd_fig1e,
                       "fig2b": cmd_fig2b, "fig2c": cmd_fig2c,
                       "fig2d": cmd_fig2d}[args.command]
            columns, rows = handler(config)
        _emit(config, args.command, columns, rows)
    except (ValueError, SequenceParseError, OSError) as exc:
        print(f"spinbath {args.command}: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
