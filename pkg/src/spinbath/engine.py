"""Monte Carlo execution of pulse sequences over freshly sampled baths.

Every shot draws its own bath and noise from a counter-based substream
(Philox keyed by the root seed, counter = shot index), so any partition of
the shot range over workers reproduces the same outcomes bit-exactly.
Shots are executed in vectorized chunks; `run_shot` is the same code path
with a chunk of one.

Covariance of the two single-shot outcomes follows the two-measurement
estimator C = <x1 x2> - <x1><x2> with a delete-1 jackknife standard error
(computed in closed form from the four outcome-pair counts).
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ._kernels import evolve_batch, fill_shot_draws
from .bath import BathConfig, DotBathState, draws_per_dot, \
    transverse_square_integral
from .physics import ElectronParams
from .sequences import (MERGED, SEPARATED, ExchangePulse, FreeEvolve,
                        InitSinglet, InitUpDown, IntermediateSpec, JMap,
                        LockSinglet, MeasureST0, PulseSequence, ReadoutModel,
                        build_correlation_experiment, build_echo,
                        build_echo_with_amplitude)

CHUNK_SHOTS = 4096  # fixed partition unit; independent of worker count


@dataclass(frozen=True)
class Model:
    """Everything the engine needs besides the sequence itself."""

    electron: ElectronParams
    bath: BathConfig
    jmap: JMap = JMap()


@dataclass(frozen=True)
class ShotRecord:
    """Outcome bits of the two echo measurements of one shot (1 = singlet)."""

    x1: int
    x2: int
    shot_index: int

    def __post_init__(self):
        if self.x1 not in (0, 1) or self.x2 not in (0, 1):
            raise ValueError("outcomes must be bits")

    @property
    def substream(self) -> int:
        return self.shot_index


@dataclass(frozen=True)
class SweepResult:
    """One grid point of a sweep; covariance is None for single-echo sweeps."""

    axis: float
    p1_mean: float
    p2_mean: float
    covariance: float | None
    stderr: float
    shots: int

    def __post_init__(self):
        if self.covariance is not None and not -0.25 <= self.covariance <= 0.25:
            raise ValueError(f"covariance {self.covariance} outside [-0.25, 0.25]")
        if self.shots >= 2 and not self.stderr > 0:
            raise ValueError("stderr must be > 0 for shots >= 2")


# --- covariance estimator -------------------------------------------------

def covariance_from_bits(x1: np.ndarray, x2: np.ndarray) -> tuple[float, float]:
    """Eq.-style sample covariance of two bit arrays plus jackknife stderr.

    The delete-1 jackknife has only four distinct leave-one-out values (one
    per outcome pair), so it reduces to a weighted sum over the pair counts.
    A half-count floor keeps the stderr positive when the outcomes happen
    to be deterministic.
    """
    x1 = np.asarray(x1)
    x2 = np.asarray(x2)
    m = x1.size
    if m < 2:
        raise ValueError("need at least 2 records")
    n11 = int(np.sum((x1 == 1) & (x2 == 1)))
    n10 = int(np.sum((x1 == 1) & (x2 == 0)))
    n01 = int(np.sum((x1 == 0) & (x2 == 1)))
    n00 = m - n11 - n10 - n01
    s1 = n11 + n10
    s2 = n11 + n01
    cov = n11 / m - (s1 / m) * (s2 / m)

    counts = np.array([n11, n10, n01, n00], dtype=float)
    a = np.array([1, 1, 0, 0], dtype=float)
    b = np.array([1, 0, 1, 0], dtype=float)
    mm = m - 1
    loo = (n11 - a * b) / mm - (s1 - a) * (s2 - b) / (mm * mm)
    mean_loo = float(np.dot(counts, loo)) / m
    var_jack = (m - 1) / m * float(np.dot(counts, (loo - mean_loo) ** 2))
    stderr = math.sqrt(var_jack + (0.5 / m) ** 2)
    return float(cov), stderr


def covariance(records: list[ShotRecord]) -> tuple[float, float]:
    """Covariance of the (x1, x2) outcome pairs of a list of shot records."""
    if not records:
        raise ValueError("empty record list")
    x1 = np.array([r.x1 for r in records])
    x2 = np.array([r.x2 for r in records])
    return covariance_from_bits(x1, x2)


# --- vectorized shot execution -------------------------------------------

class _BatchBath:
    """(shots, macro-spins) phasor arrays for one dot, real/imag split."""

    __slots__ = ("amp_re", "amp_im", "omega", "b_par", "kw")

    def __init__(self, amp_re, amp_im, omega, b_par, kw):
        self.amp_re = amp_re
        self.amp_im = amp_im
        self.omega = omega
        self.b_par = b_par
        self.kw = kw


def _build_batch_dot(config: BathConfig, z: np.ndarray) -> _BatchBath:
    """Vectorized mirror of bath._sample_dot; z has shape (shots, draws)."""
    k = config.macro_spins_per_species
    n_spec = len(config.species)
    m = z.shape[0]
    amp_re = np.empty((m, n_spec * k))
    amp_im = np.empty((m, n_spec * k))
    omegas = np.empty((m, n_spec * k))
    pos = 0
    for i, s in enumerate(config.species):
        spread = z[:, pos:pos + k]
        re = z[:, pos + k:pos + 2 * k]
        im = z[:, pos + 2 * k:pos + 3 * k]
        pos += 3 * k
        base = s.gamma * config.b_ext
        omegas[:, i * k:(i + 1) * k] = base * (1.0 + s.frequency_spread * spread)
        scale = s.rms_transverse_field / math.sqrt(2.0 * k)
        amp_re[:, i * k:(i + 1) * k] = scale * re
        amp_im[:, i * k:(i + 1) * k] = scale * im
    b_par = config.rms_longitudinal_total() * z[:, pos]
    return _BatchBath(amp_re, amp_im, omegas, b_par, config.knight_weights())


def _advance(bath: _BatchBath, dt: float, sz: np.ndarray,
             knight_rms: float) -> np.ndarray:
    """Knight-evolve all shots by dt; returns the per-shot b_perp integral."""
    return evolve_batch(bath.amp_re, bath.amp_im, bath.omega, bath.kw,
                        sz, knight_rms, dt)


def _square_integrals(bath: _BatchBath, dt: float, sz: np.ndarray,
                      config: BathConfig) -> np.ndarray:
    # slow per-shot path, only used with include_quadratic
    m = bath.amp_re.shape[0]
    out = np.empty(m)
    for i in range(m):
        state = DotBathState(bath.amp_re[i] + 1j * bath.amp_im[i],
                             bath.omega[i], bath.kw, float(bath.b_par[i]))
        out[i] = transverse_square_integral(state, dt, float(sz[i]), config)
    return out


def _execute_batch(seq: PulseSequence, model: Model, left: _BatchBath,
                   right: _BatchBath, normals: np.ndarray,
                   uniforms: np.ndarray) -> np.ndarray:
    """Run the sequence on a batch of shots; returns (shots, n_meas) bits."""
    m = left.amp_re.shape[0]
    p = model.electron
    knight = model.bath.knight_rms
    bloch = np.zeros((m, 3))
    sz0 = np.zeros(m)
    outcomes = []
    i_norm = i_unif = 0

    for seg in seq.segments:
        if isinstance(seg, InitSinglet):
            bloch[:] = (1.0, 0.0, 0.0)
        elif isinstance(seg, InitUpDown):
            u = uniforms[:, i_unif]
            i_unif += 1
            bloch[:, 0] = 0.0
            bloch[:, 1] = 0.0
            bloch[:, 2] = np.where(u < seg.adiabatic_error, -1.0, 1.0)
        elif isinstance(seg, LockSinglet):
            _advance(left, seg.duration, sz0, knight)
            _advance(right, seg.duration, sz0, knight)
            bloch[:] = (1.0, 0.0, 0.0)
        elif isinstance(seg, FreeEvolve):
            dt = seg.duration
            if seg.electron == MERGED:
                _advance(left, dt, sz0, knight)
                _advance(right, dt, sz0, knight)
                continue
            sz = bloch[:, 2] / 2.0
            quad = 0.0
            if p.include_quadratic:
                quad = (_square_integrals(left, dt, sz, model.bath)
                        - _square_integrals(right, dt, -sz, model.bath)) \
                    / (2.0 * p.b_ext)
            int_l = _advance(left, dt, sz, knight)
            int_r = _advance(right, dt, -sz, knight)
            phi = p.kappa * ((left.b_par - right.b_par) * dt
                             - p.g_perp_ratio * (int_l - int_r) + quad)
            c, s = np.cos(phi), np.sin(phi)
            x, y = bloch[:, 0].copy(), bloch[:, 1]
            bloch[:, 0] = x * c - y * s
            bloch[:, 1] = x * s + y * c
        elif isinstance(seg, ExchangePulse):
            theta = seg.nominal_angle(model.jmap) \
                + seg.angle_error_rms * normals[:, i_norm]
            i_norm += 1
            c, s = np.cos(theta), np.sin(theta)
            y, z = bloch[:, 1].copy(), bloch[:, 2]
            bloch[:, 1] = y * c - z * s
            bloch[:, 2] = y * s + z * c
        elif isinstance(seg, MeasureST0):
            p_s = np.clip((1.0 + bloch[:, 0]) / 2.0, 0.0, 1.0)
            p_report = p_s * seg.fidelity_s + (1.0 - p_s) * (1.0 - seg.fidelity_t)
            u = uniforms[:, i_unif]
            i_unif += 1
            bit = (u < p_report).astype(np.uint8)
            outcomes.append(bit)
            bloch[:, 0] = np.where(bit == 1, 1.0, -1.0)
            bloch[:, 1] = 0.0
            bloch[:, 2] = 0.0
        else:
            raise TypeError(f"unknown segment {seg!r}")
    return np.stack(outcomes, axis=1) if outcomes else np.empty((m, 0), np.uint8)


def _run_chunk(seq: PulseSequence, model: Model, root_seed: int,
               start: int, count: int) -> np.ndarray:
    """Sample and execute shots [start, start+count); deterministic in indices."""
    config = model.bath
    n = draws_per_dot(config)
    n_norm, n_unif = seq.stochastic_layout()
    z, normals, uniforms = fill_shot_draws(root_seed, start, count,
                                           2 * n, n_norm, n_unif)
    left = _build_batch_dot(config, z[:, :n])
    right = _build_batch_dot(config, z[:, n:])
    return _execute_batch(seq, model, left, right, normals, uniforms)


def run_outcomes(seq: PulseSequence, model: Model, root_seed: int,
                 shots: int, workers: int = 1) -> np.ndarray:
    """All shot outcomes as a (shots, n_measurements) bit array.

    The shot range is partitioned into fixed chunks merged in index order,
    so the result is identical for any worker count.
    """
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    spans = [(s, min(CHUNK_SHOTS, shots - s))
             for s in range(0, shots, CHUNK_SHOTS)]
    if workers <= 1 or len(spans) == 1:
        parts = [_run_chunk(seq, model, root_seed, s, c) for s, c in spans]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_run_chunk, seq, model, root_seed, s, c)
                       for s, c in spans]
            parts = [f.result() for f in futures]
    return np.concatenate(parts, axis=0)


def run_shot(seq: PulseSequence, model: Model, root_seed: int,
             shot_index: int) -> ShotRecord:
    """Execute one shot of a two-measurement sequence."""
    if seq.n_measurements != 2:
        raise ValueError(
            f"sequence must contain exactly two measurements, "
            f"has {seq.n_measurements}")
    bits = _run_chunk(seq, model, root_seed, shot_index, 1)[0]
    return ShotRecord(int(bits[0]), int(bits[1]), shot_index)


# --- sweep drivers --------------------------------------------------------

def correlation_point(model: Model, tau_echo: float, tau_delay: float,
                      intermediate: IntermediateSpec, shots: int,
                      root_seed: int, workers: int = 1,
                      readout: ReadoutModel = ReadoutModel()) -> SweepResult:
    """Covariance of the two echo outcomes at a single (tau_echo, tau_delay)."""
    seq = build_correlation_experiment(tau_echo, tau_delay, intermediate, readout)
    bits = run_outcomes(seq, model, root_seed, shots, workers)
    cov, se = covariance_from_bits(bits[:, 0], bits[:, 1])
    return SweepResult(axis=tau_delay, p1_mean=float(bits[:, 0].mean()),
                       p2_mean=float(bits[:, 1].mean()), covariance=cov,
                       stderr=se, shots=shots)


def _binomial_stderr(p: float, m: int) -> float:
    return math.sqrt(p * (1.0 - p) / m + (0.5 / m) ** 2)


def sweep_echo(model: Model, tau_grid, shots: int, root_seed: int,
               workers: int = 1,
               readout: ReadoutModel = ReadoutModel()) -> list[SweepResult]:
    """Single-echo singlet return probability over a tau_echo grid."""
    tau_grid = list(tau_grid)
    if not tau_grid:
        raise ValueError("empty tau_echo grid")
    out = []
    for tau in tau_grid:
        seq = build_echo(tau, readout)
        bits = run_outcomes(seq, model, root_seed, shots, workers)
        p = float(bits[:, 0].mean())
        out.append(SweepResult(axis=tau, p1_mean=p, p2_mean=p, covariance=None,
                               stderr=_binomial_stderr(p, shots), shots=shots))
    return out


def sweep_delay(model: Model, tau_echo: float, delay_grid,
                intermediate: IntermediateSpec, shots: int, root_seed: int,
                workers: int = 1,
                readout: ReadoutModel = ReadoutModel()) -> list[SweepResult]:
    """Covariance vs tau_delay for one intermediate mode."""
    delay_grid = list(delay_grid)
    if not delay_grid:
        raise ValueError("empty delay grid")
    return [correlation_point(model, tau_echo, d, intermediate, shots,
                              root_seed, workers, readout)
            for d in delay_grid]


def sweep_amplitude(model: Model, tau_echo: float, tau_delay: float,
                    amp_grid, shots: int, root_seed: int, workers: int = 1,
                    pulse_duration: float = 20e-9,
                    readout: ReadoutModel = ReadoutModel(),
                    ) -> tuple[list[SweepResult], list[SweepResult]]:
    """Covariance vs intermediate pulse amplitude, plus the single-echo
    P(S) vs amplitude calibration curve on the same grid."""
    amp_grid = list(amp_grid)
    if not amp_grid:
        raise ValueError("empty amplitude grid")
    cov_results = []
    echo_results = []
    for amp in amp_grid:
        inter = IntermediateSpec(mode="updown_theta", amplitude=amp,
                                 pulse_duration=pulse_duration)
        r = correlation_point(model, tau_echo, tau_delay, inter, shots,
                              root_seed, workers, readout)
        cov_results.append(SweepResult(axis=amp, p1_mean=r.p1_mean,
                                       p2_mean=r.p2_mean, covariance=r.covariance,
                                       stderr=r.stderr, shots=shots))
        seq = build_echo_with_amplitude(tau_echo, amp, pulse_duration, readout)
        bits = run_outcomes(seq, model, root_seed, shots, workers)
        p = float(bits[:, 0].mean())
        echo_results.append(SweepResult(axis=amp, p1_mean=p, p2_mean=p,
                                        covariance=None,
                                        stderr=_binomial_stderr(p, shots),
                                        shots=shots))
    return cov_results, echo_results
