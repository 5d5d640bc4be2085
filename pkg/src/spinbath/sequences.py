"""Pulse-sequence representation, builders, and qubit-level segment action.

Bloch-sphere convention: poles +z/-z are the product states up-down /
down-up; +x is the singlet S and -x the triplet T0.  Free evolution under
the hyperfine gradient rotates about z; exchange pulses rotate about x
(so an angle of pi swaps up-down and down-up).  Exchange pulses are
instantaneous on the bath timescale: a finite duration only sets the
rotation angle through the exchange map J(amplitude) * duration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bath import (BathConfig, DotBathState, advance_with_integral,
                   transverse_square_integral)
from .physics import ElectronParams

MERGED = "merged"
SEPARATED = "separated"


@dataclass(frozen=True)
class QubitState:
    """S-T0 qubit as a Bloch vector (r_x, r_y, r_z)."""

    bloch: tuple[float, float, float] = (1.0, 0.0, 0.0)

    def __post_init__(self):
        n = math.sqrt(sum(c * c for c in self.bloch))
        if n > 1.0 + 1e-9:
            raise ValueError(f"Bloch vector norm {n} exceeds 1")

    @property
    def r_x(self) -> float:
        return self.bloch[0]

    @property
    def r_z(self) -> float:
        return self.bloch[2]


@dataclass(frozen=True)
class JMap:
    """Exchange strength vs pulse amplitude: J(A) = j0 * exp(A / amp_scale)."""

    j0: float = 1.0e7        # rad/s at zero amplitude
    amp_scale: float = 1.0   # amplitude units per e-fold

    def __post_init__(self):
        if self.j0 <= 0 or self.amp_scale <= 0:
            raise ValueError("j0 and amp_scale must be > 0")

    def j(self, amplitude: float) -> float:
        return self.j0 * math.exp(amplitude / self.amp_scale)

    def amplitude_for_angle(self, angle: float, duration: float) -> float:
        """Invert J(A) * duration = angle (the pi-calibration point)."""
        if angle <= 0 or duration <= 0:
            raise ValueError("angle and duration must be > 0")
        return self.amp_scale * math.log(angle / (self.j0 * duration))


def exchange_angle(jmap: JMap, amplitude: float, duration: float) -> float:
    """Rotation angle J(amplitude) * duration in rad."""
    if duration < 0:
        raise ValueError(f"duration must be >= 0, got {duration}")
    return jmap.j(amplitude) * duration


# --- segments -------------------------------------------------------------

@dataclass(frozen=True)
class InitSinglet:
    duration: float = 0.0


@dataclass(frozen=True)
class InitUpDown:
    adiabatic_error: float = 0.0
    duration: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.adiabatic_error <= 1.0:
            raise ValueError("adiabatic_error must be a probability")


@dataclass(frozen=True)
class LockSinglet:
    duration: float

    def __post_init__(self):
        if self.duration < 0:
            raise ValueError(f"duration must be >= 0, got {self.duration}")


@dataclass(frozen=True)
class FreeEvolve:
    duration: float
    electron: str = SEPARATED

    def __post_init__(self):
        if self.duration < 0:
            raise ValueError(f"duration must be >= 0, got {self.duration}")
        if self.electron not in (MERGED, SEPARATED):
            raise ValueError(f"unknown electron configuration {self.electron!r}")


@dataclass(frozen=True)
class ExchangePulse:
    """Instantaneous rotation about the S-T0 (x) axis.

    Specified either by an explicit angle or by (amplitude, pulse_duration)
    through the exchange map, never both.
    """

    angle: float | None = None
    amplitude: float | None = None
    pulse_duration: float = 0.0
    angle_error_rms: float = 0.0
    duration: float = 0.0  # wall time: pulses are instantaneous

    def __post_init__(self):
        if (self.angle is None) == (self.amplitude is None):
            raise ValueError("specify exactly one of angle or amplitude")
        if self.amplitude is not None and self.pulse_duration <= 0:
            raise ValueError("amplitude-specified pulse needs pulse_duration > 0")
        if self.angle_error_rms < 0:
            raise ValueError("angle_error_rms must be >= 0")

    def nominal_angle(self, jmap: JMap | None) -> float:
        if self.angle is not None:
            return self.angle
        if jmap is None:
            raise ValueError("amplitude-specified pulse needs an exchange map")
        return exchange_angle(jmap, self.amplitude, self.pulse_duration)


@dataclass(frozen=True)
class MeasureST0:
    fidelity_s: float = 1.0
    fidelity_t: float = 1.0
    duration: float = 0.0

    def __post_init__(self):
        if not (0.0 <= self.fidelity_s <= 1.0 and 0.0 <= self.fidelity_t <= 1.0):
            raise ValueError("fidelities must be probabilities")


Segment = (InitSinglet | InitUpDown | LockSinglet | FreeEvolve
           | ExchangePulse | MeasureST0)


@dataclass(frozen=True)
class PulseSequence:
    segments: tuple[Segment, ...]

    def __post_init__(self):
        if not self.segments:
            raise ValueError("empty sequence")

    @property
    def total_duration(self) -> float:
        return sum(s.duration for s in self.segments)

    @property
    def n_measurements(self) -> int:
        return sum(isinstance(s, MeasureST0) for s in self.segments)

    def stochastic_layout(self) -> tuple[int, int]:
        """(normal draws, uniform draws) one shot consumes, in segment order.

        Every ExchangePulse consumes one normal and every InitUpDown /
        MeasureST0 one uniform, whether or not the corresponding error
        parameter is zero, so the draw layout depends only on structure.
        """
        n_norm = sum(isinstance(s, ExchangePulse) for s in self.segments)
        n_unif = sum(isinstance(s, (InitUpDown, MeasureST0)) for s in self.segments)
        return n_norm, n_unif


# --- scalar segment action ------------------------------------------------

@dataclass
class ShotContext:
    """Mutable per-shot environment: the two baths plus model parameters."""

    params: ElectronParams
    bath_config: BathConfig
    left: DotBathState
    right: DotBathState
    rng: np.random.Generator
    jmap: JMap | None = None


def _rotate_z(b: tuple[float, float, float], phi: float) -> tuple[float, float, float]:
    c, s = math.cos(phi), math.sin(phi)
    return (b[0] * c - b[1] * s, b[0] * s + b[1] * c, b[2])


def _rotate_x(b: tuple[float, float, float], theta: float) -> tuple[float, float, float]:
    c, s = math.cos(theta), math.sin(theta)
    return (b[0], b[1] * c - b[2] * s, b[1] * s + b[2] * c)


def apply_segment(q: QubitState, seg: Segment,
                  ctx: ShotContext) -> tuple[QubitState, int | None]:
    """Apply one segment: returns the new qubit state and, for a measurement,
    the outcome bit (1 = singlet).  Bath states in ctx advance in place.

    During separated free evolution the qubit picks up the z-phase from the
    left/right frequency difference while each bath Knight-evolves with
    <S_z> = +/- r_z / 2; merged segments exert no Knight shift and
    accumulate no gradient phase.
    """
    if isinstance(seg, InitSinglet):
        return QubitState((1.0, 0.0, 0.0)), None

    if isinstance(seg, InitUpDown):
        flip = ctx.rng.random() < seg.adiabatic_error
        return QubitState((0.0, 0.0, -1.0 if flip else 1.0)), None

    if isinstance(seg, LockSinglet):
        ctx.left, _ = advance_with_integral(ctx.left, seg.duration, 0.0,
                                            ctx.bath_config)
        ctx.right, _ = advance_with_integral(ctx.right, seg.duration, 0.0,
                                             ctx.bath_config)
        return QubitState((1.0, 0.0, 0.0)), None

    if isinstance(seg, FreeEvolve):
        dt = seg.duration
        if seg.electron == MERGED:
            ctx.left, _ = advance_with_integral(ctx.left, dt, 0.0, ctx.bath_config)
            ctx.right, _ = advance_with_integral(ctx.right, dt, 0.0, ctx.bath_config)
            return q, None
        sz = q.r_z / 2.0
        p = ctx.params
        quad = 0.0
        if p.include_quadratic:
            sq_l = transverse_square_integral(ctx.left, dt, +sz, ctx.bath_config)
            sq_r = transverse_square_integral(ctx.right, dt, -sz, ctx.bath_config)
            quad = (sq_l - sq_r) / (2.0 * p.b_ext)
        ctx.left, int_l = advance_with_integral(ctx.left, dt, +sz, ctx.bath_config)
        ctx.right, int_r = advance_with_integral(ctx.right, dt, -sz, ctx.bath_config)
        phi = p.kappa * ((ctx.left.b_par - ctx.right.b_par) * dt
                         - p.g_perp_ratio * (int_l - int_r) + quad)
        return QubitState(_rotate_z(q.bloch, phi)), None

    if isinstance(seg, ExchangePulse):
        theta = seg.nominal_angle(ctx.jmap)
        theta += seg.angle_error_rms * ctx.rng.standard_normal()
        return QubitState(_rotate_x(q.bloch, theta)), None

    if isinstance(seg, MeasureST0):
        norm = math.sqrt(sum(c * c for c in q.bloch))
        if norm > 1.0 + 1e-9:
            raise ValueError(f"cannot measure non-normalized state, |r| = {norm}")
        p_s = min(max((1.0 + q.r_x) / 2.0, 0.0), 1.0)
        p_report = p_s * seg.fidelity_s + (1.0 - p_s) * (1.0 - seg.fidelity_t)
        outcome = int(ctx.rng.random() < p_report)
        collapsed = (1.0, 0.0, 0.0) if outcome else (-1.0, 0.0, 0.0)
        return QubitState(collapsed), outcome

    raise TypeError(f"unknown segment {seg!r}")


# --- builders -------------------------------------------------------------

@dataclass(frozen=True)
class ReadoutModel:
    fidelity_s: float = 1.0
    fidelity_t: float = 1.0


def build_echo(tau_echo: float, readout: ReadoutModel = ReadoutModel(),
               pi_error_rms: float = 0.0) -> PulseSequence:
    """Hahn echo: init S, free half, exchange pi, free half, measure."""
    if tau_echo <= 0:
        raise ValueError(f"tau_echo must be > 0, got {tau_echo}")
    half = tau_echo / 2.0
    return PulseSequence((
        InitSinglet(),
        FreeEvolve(half, SEPARATED),
        ExchangePulse(angle=math.pi, angle_error_rms=pi_error_rms),
        FreeEvolve(half, SEPARATED),
        MeasureST0(readout.fidelity_s, readout.fidelity_t),
    ))


def build_echo_with_amplitude(tau_echo: float, amplitude: float,
                              pulse_duration: float,
                              readout: ReadoutModel = ReadoutModel()) -> PulseSequence:
    """Hahn echo whose refocusing pulse angle is set by amplitude (calibration)."""
    if tau_echo <= 0:
        raise ValueError(f"tau_echo must be > 0, got {tau_echo}")
    half = tau_echo / 2.0
    return PulseSequence((
        InitSinglet(),
        FreeEvolve(half, SEPARATED),
        ExchangePulse(amplitude=amplitude, pulse_duration=pulse_duration),
        FreeEvolve(half, SEPARATED),
        MeasureST0(readout.fidelity_s, readout.fidelity_t),
    ))


LOCK_SINGLET = "lock_singlet"
UPDOWN = "updown"
UPDOWN_PI = "updown_pi"
UPDOWN_THETA = "updown_theta"

INTERMEDIATE_MODES = (LOCK_SINGLET, UPDOWN, UPDOWN_PI, UPDOWN_THETA)


@dataclass(frozen=True)
class IntermediateSpec:
    """Qubit manipulation between the two echoes."""

    mode: str = LOCK_SINGLET
    amplitude: float | None = None      # updown_theta only
    pulse_duration: float = 20e-9       # updown_theta only
    pulse_angle_error_rms: float = 0.0  # updown_pi only
    adiabatic_error: float = 0.0

    def __post_init__(self):
        if self.mode not in INTERMEDIATE_MODES:
            raise ValueError(
                f"unknown intermediate mode {self.mode!r}; "
                f"valid modes: {', '.join(INTERMEDIATE_MODES)}")
        if self.mode == UPDOWN_THETA and self.amplitude is None:
            raise ValueError("updown_theta requires an amplitude")


def build_correlation_experiment(tau_echo: float, tau_delay: float,
                                 intermediate: IntermediateSpec,
                                 readout: ReadoutModel = ReadoutModel()) -> PulseSequence:
    """Two Hahn echoes separated by an intermediate qubit state.

    tau_delay is measured between the two echoes' refocusing pulses, which
    equals the time between the echo starts, so the intermediate block
    lasts tau_delay - tau_echo and the whole sequence tau_delay + tau_echo.
    """
    if tau_delay < tau_echo:
        raise ValueError(
            f"tau_delay ({tau_delay}) must be >= tau_echo ({tau_echo})")
    gap = tau_delay - tau_echo
    echo1 = build_echo(tau_echo, readout).segments
    echo2 = build_echo(tau_echo, readout).segments
    m = intermediate.mode
    if m == LOCK_SINGLET:
        block: tuple[Segment, ...] = (LockSinglet(gap),)
    elif m == UPDOWN:
        block = (InitUpDown(intermediate.adiabatic_error),
                 FreeEvolve(gap, SEPARATED))
    elif m == UPDOWN_PI:
        block = (InitUpDown(intermediate.adiabatic_error),
                 FreeEvolve(gap / 2.0, SEPARATED),
                 ExchangePulse(angle=math.pi,
                               angle_error_rms=intermediate.pulse_angle_error_rms),
                 FreeEvolve(gap / 2.0, SEPARATED))
    else:  # UPDOWN_THETA
        block = (InitUpDown(intermediate.adiabatic_error),
                 FreeEvolve(gap / 2.0, SEPARATED),
                 ExchangePulse(amplitude=intermediate.amplitude,
                               pulse_duration=intermediate.pulse_duration),
                 FreeEvolve(gap / 2.0, SEPARATED))
    return PulseSequence(echo1 + block + echo2)
