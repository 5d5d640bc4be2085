"""Semiclassical macro-spin model of the two per-dot nuclear baths.

Each dot's transverse Overhauser field is a sum of complex phasors
("macro-spins"), several per species, each precessing at a frequency close
to the species Larmor frequency and carrying a relative hyperfine coupling
weight.  Sampling produces fully mixed (circular-Gaussian) initial
conditions; evolution is analytic phase rotation, either free or with an
electron-state-dependent Knight shift added per macro-spin.

All randomness flows through counter-based per-shot streams (Philox keyed
by the root seed, counter = shot index), so results are reproducible
independent of execution order or parallelism.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .constants import (DEFAULT_B_EXT, DEFAULT_G_PAR, SPECIES_WEIGHT,
                        TWO_PI, gamma_rad)
from .physics import NuclearSpecies, validate_species_list


def default_species(rms_transverse_total: float = 0.3e-3,
                    rms_longitudinal_total: float = 2.0e-3,
                    frequency_spread: float = 1.0e-3) -> list[NuclearSpecies]:
    """GaAs species list with total RMS fields split by nuclear weight.

    RMS contributions add in quadrature, so each species gets the total
    scaled by sqrt of its weight.
    """
    out = []
    for name, w in SPECIES_WEIGHT.items():
        out.append(NuclearSpecies(
            name=name,
            gamma=gamma_rad(name),
            abundance=w,
            rms_transverse_field=rms_transverse_total * math.sqrt(w),
            rms_longitudinal_field=rms_longitudinal_total * math.sqrt(w),
            frequency_spread=frequency_spread,
        ))
    return out


@dataclass(frozen=True)
class MacroSpin:
    """One transverse-field phasor: c = |c| e^{i theta} in tesla."""

    amplitude: complex       # T
    omega: float             # rad/s
    knight_weight: float     # dimensionless, >= 0

    def __post_init__(self):
        if not np.isfinite(self.amplitude):
            raise ValueError("amplitude must be finite")
        if self.omega <= 0:
            raise ValueError(f"omega must be > 0, got {self.omega}")
        if self.knight_weight < 0:
            raise ValueError("knight_weight must be >= 0")


@dataclass(frozen=True)
class BathConfig:
    """Static configuration of the per-dot bath model."""

    species: list[NuclearSpecies] = field(default_factory=default_species)
    b_ext: float = DEFAULT_B_EXT
    macro_spins_per_species: int = 32
    knight_rms: float = TWO_PI * 8.0e3   # rad/s at full electron polarization
    knight_weight_distribution: str = "exponential-envelope"
    species_knight_weights: tuple[float, ...] | None = None
    rng_seed: int = 0

    def __post_init__(self):
        if self.macro_spins_per_species < 1:
            raise ValueError("macro_spins_per_species must be >= 1")
        if self.knight_rms < 0:
            raise ValueError("knight_rms must be >= 0")
        if self.knight_weight_distribution not in ("uniform", "exponential-envelope"):
            raise ValueError(
                f"unknown knight_weight_distribution "
                f"{self.knight_weight_distribution!r}")
        if self.species_knight_weights is not None:
            if len(self.species_knight_weights) != len(self.species):
                raise ValueError(
                    "species_knight_weights must have one entry per species")
            if any(w < 0 for w in self.species_knight_weights):
                raise ValueError("species_knight_weights must be >= 0")
        validate_species_list(self.species)

    @property
    def n_macro_spins(self) -> int:
        return self.macro_spins_per_species * len(self.species)

    def knight_weights(self) -> np.ndarray:
        """Per-macro-spin weights w_k / mean(w), concatenated over species."""
        k = self.macro_spins_per_species
        if self.knight_weight_distribution == "uniform":
            per_species = np.ones(k)
        else:
            per_species = np.exp(-2.0 * np.arange(k) / k)
        w = np.tile(per_species, len(self.species))
        if self.species_knight_weights is not None:
            w = w * np.repeat(self.species_knight_weights, k)
        return w / w.mean()

    def base_omegas(self) -> np.ndarray:
        """Species Larmor frequencies repeated per macro-spin (rad/s)."""
        return np.repeat([s.gamma * self.b_ext for s in self.species],
                         self.macro_spins_per_species)

    def rms_longitudinal_total(self) -> float:
        return math.sqrt(sum(s.rms_longitudinal_field ** 2 for s in self.species))


@dataclass(frozen=True)
class DotBathState:
    """Macro-spin phasors of one dot, at a common epoch, plus the static field.

    Arrays are ordered species-major; `knight_weight` is pre-normalized to
    unit mean so a weight of 1 produces exactly the configured mean shift.
    """

    amplitude: np.ndarray      # complex, T
    omega: np.ndarray          # rad/s
    knight_weight: np.ndarray  # dimensionless, mean 1
    b_par: float               # T

    @property
    def macro_spins(self) -> list[MacroSpin]:
        return [MacroSpin(complex(a), float(w), float(k))
                for a, w, k in zip(self.amplitude, self.omega, self.knight_weight)]


def shot_rng(root_seed: int, shot_index: int) -> np.random.Generator:
    """Counter-based substream for one shot: same (seed, index) -> same draws."""
    bits = np.random.Philox(key=root_seed, counter=shot_index << 64)
    return np.random.Generator(bits)


def _sample_dot(config: BathConfig, z: np.ndarray) -> DotBathState:
    """Build one dot's bath from a flat vector of standard normals.

    Layout per species: [K frequency-spread draws, K amplitude real parts,
    K amplitude imaginary parts]; one final draw for b_par.
    """
    k = config.macro_spins_per_species
    n_spec = len(config.species)
    amps = np.empty(n_spec * k, dtype=complex)
    omegas = np.empty(n_spec * k)
    pos = 0
    for i, s in enumerate(config.species):
        spread = z[pos:pos + k]
        re = z[pos + k:pos + 2 * k]
        im = z[pos + 2 * k:pos + 3 * k]
        pos += 3 * k
        base = s.gamma * config.b_ext
        omegas[i * k:(i + 1) * k] = base * (1.0 + s.frequency_spread * spread)
        scale = s.rms_transverse_field / math.sqrt(2.0 * k)
        amps[i * k:(i + 1) * k] = scale * (re + 1j * im)
    b_par = config.rms_longitudinal_total() * z[pos]
    return DotBathState(amplitude=amps, omega=omegas,
                        knight_weight=config.knight_weights(), b_par=float(b_par))


def draws_per_dot(config: BathConfig) -> int:
    return 3 * config.macro_spins_per_species * len(config.species) + 1


def sample_bath(config: BathConfig,
                rng: np.random.Generator) -> tuple[DotBathState, DotBathState]:
    """Draw independent left/right baths from a fully mixed ensemble.

    Per species the total transverse phasor is circular-Gaussian with the
    configured RMS magnitude; b_par is Gaussian with the combined
    longitudinal RMS.
    """
    n = draws_per_dot(config)
    z = rng.standard_normal(2 * n)
    return _sample_dot(config, z[:n]), _sample_dot(config, z[n:])


def b_perp_at(state: DotBathState, t: float) -> float:
    """Transverse field at time t past the state's epoch: Re sum a_k e^{i w_k t}."""
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    return float(np.real(np.sum(state.amplitude * np.exp(1j * state.omega * t))))


def evolve_free(state: DotBathState, dt: float) -> DotBathState:
    """Advance every phasor by its own Larmor phase; b_par is static."""
    if dt < 0:
        raise ValueError(f"dt must be >= 0, got {dt}")
    return replace(state, amplitude=state.amplitude * np.exp(1j * state.omega * dt))


def evolve_knight(state: DotBathState, dt: float, sz: float,
                  config: BathConfig) -> DotBathState:
    """Larmor evolution with the mean-field Knight shift of an electron <S_z> = sz.

    Phasor k advances at omega_k + 2 sz knight_rms w_k, with weights
    normalized to unit mean, so the mean shift at sz = 1/2 is knight_rms.
    sz = 0 reduces exactly to evolve_free.
    """
    if dt < 0:
        raise ValueError(f"dt must be >= 0, got {dt}")
    eff = state.omega + 2.0 * sz * config.knight_rms * state.knight_weight
    return replace(state, amplitude=state.amplitude * np.exp(1j * eff * dt))


def transverse_phase_integral(state: DotBathState, dt: float) -> float:
    """Integral of b_perp over [0, dt) past the epoch, analytic (T*s)."""
    if dt < 0:
        raise ValueError(f"dt must be >= 0, got {dt}")
    w = state.omega
    return float(np.real(np.sum(
        state.amplitude * (np.exp(1j * w * dt) - 1.0) / (1j * w))))


def advance_with_integral(state: DotBathState, dt: float, sz: float,
                          config: BathConfig) -> tuple[DotBathState, float]:
    """Knight-evolve the bath by dt and return the b_perp time integral (T*s).

    The integral is taken along the actual (Knight-shifted) trajectory, so
    it is exactly consistent with the evolution it accompanies.
    """
    if dt < 0:
        raise ValueError(f"dt must be >= 0, got {dt}")
    eff = state.omega + 2.0 * sz * config.knight_rms * state.knight_weight
    rot = np.exp(1j * eff * dt)
    integral = float(np.real(np.sum(state.amplitude * _osc_integral(eff, dt))))
    return replace(state, amplitude=state.amplitude * rot), integral


def _osc_integral(w: np.ndarray, dt: float) -> np.ndarray:
    """Integral of e^{i w t} over [0, dt), elementwise; dt at w = 0."""
    out = np.empty(w.shape, dtype=complex)
    zero = w == 0.0
    wn = np.where(zero, 1.0, w)
    out = (np.exp(1j * wn * dt) - 1.0) / (1j * wn)
    out[zero] = dt
    return out


def transverse_square_integral(state: DotBathState, dt: float, sz: float,
                               config: BathConfig) -> float:
    """Integral of b_perp(t)^2 over [0, dt) along the Knight-shifted
    trajectory (T^2 * s), for the optional quadratic frequency term."""
    if dt < 0:
        raise ValueError(f"dt must be >= 0, got {dt}")
    a = state.amplitude
    w = state.omega + 2.0 * sz * config.knight_rms * state.knight_weight
    w_sum = w[:, None] + w[None, :]
    w_diff = w[:, None] - w[None, :]
    aa = a[:, None] * a[None, :]
    aac = a[:, None] * np.conj(a)[None, :]
    x = np.sum(aa * _osc_integral(w_sum, dt))
    y = np.sum(aac * _osc_integral(w_diff, dt))
    return 0.5 * float(np.real(x) + np.real(y))
