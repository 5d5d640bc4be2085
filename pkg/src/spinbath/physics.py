"""Electron precession frequencies from instantaneous Overhauser fields.

Maps a per-dot field configuration (static longitudinal plus oscillating
transverse nuclear field) to the effective electron precession frequency,
including the linear transverse coupling that arises from g-factor
anisotropy and an optional quadratic term.  The S-T0 qubit phase rate is
the difference of the two dots' frequencies, so all common-mode terms
(external field in particular) cancel exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .constants import (DEFAULT_B_EXT, DEFAULT_G_PAR, DEFAULT_G_PERP_RATIO,
                        HBAR, MU_B)


@dataclass(frozen=True)
class NuclearSpecies:
    """One nuclear isotope contributing to the per-dot Overhauser field.

    RMS fields are the per-dot contribution of this species: the transverse
    value is the RMS magnitude of the species' total transverse phasor, the
    longitudinal value the RMS of its static contribution.  frequency_spread
    is the fractional RMS spread of Larmor frequency across macro-spins.
    """

    name: str
    gamma: float                   # rad/s/T
    abundance: float
    rms_transverse_field: float    # T
    rms_longitudinal_field: float  # T
    frequency_spread: float = 0.0

    def __post_init__(self):
        if self.gamma <= 0:
            raise ValueError(f"gamma must be > 0, got {self.gamma}")
        if not 0.0 < self.abundance <= 1.0:
            raise ValueError(f"abundance must be in (0, 1], got {self.abundance}")
        if self.rms_transverse_field < 0 or self.rms_longitudinal_field < 0:
            raise ValueError("rms fields must be >= 0")
        if self.frequency_spread < 0:
            raise ValueError("frequency_spread must be >= 0")


def validate_species_list(species: list[NuclearSpecies]) -> None:
    """Check that the configured abundances form a complete composition."""
    total = sum(s.abundance for s in species)
    if abs(total - 1.0) > 1e-9:
        raise ValueError(f"species abundances must sum to 1, got {total}")


@dataclass(frozen=True)
class ElectronParams:
    """Electron g-tensor and external-field parameters for one dot."""

    g_par: float = DEFAULT_G_PAR
    g_perp_ratio: float = DEFAULT_G_PERP_RATIO  # g_perp / g_par
    b_ext: float = DEFAULT_B_EXT                # T
    include_quadratic: bool = False

    def __post_init__(self):
        if self.b_ext <= 0:
            raise ValueError(f"b_ext must be > 0, got {self.b_ext}")
        if self.g_par == 0:
            raise ValueError("g_par must be nonzero")

    @property
    def kappa(self) -> float:
        """Electron frequency per unit longitudinal field, mu_B*g_par/hbar (rad/s/T)."""
        return MU_B * self.g_par / HBAR


@dataclass(frozen=True)
class FieldSample:
    """Instantaneous nuclear field seen by one dot."""

    b_par: float   # static longitudinal Overhauser field, T
    b_perp: float  # transverse Overhauser field at this instant, T

    def __post_init__(self):
        if not (math.isfinite(self.b_par) and math.isfinite(self.b_perp)):
            raise ValueError("field components must be finite")


def larmor_omega(species: NuclearSpecies, b_ext: float) -> float:
    """Nuclear Larmor angular frequency gamma * B_ext (rad/s)."""
    if b_ext < 0:
        raise ValueError(f"b_ext must be >= 0, got {b_ext}")
    return species.gamma * b_ext


def electron_omega(params: ElectronParams, f: FieldSample) -> float:
    """Effective electron precession frequency for one dot (rad/s).

    (mu_B g_par / hbar) * (B_ext + b_par - (g_perp/g_par) b_perp
                           [+ b_perp^2 / (2 B_ext)])
    """
    shift = params.b_ext + f.b_par - params.g_perp_ratio * f.b_perp
    if params.include_quadratic:
        shift += f.b_perp ** 2 / (2.0 * params.b_ext)
    return params.kappa * shift


def qubit_phase_rate(params: ElectronParams, f_left: FieldSample,
                     f_right: FieldSample) -> float:
    """S-T0 precession rate: left-dot minus right-dot electron frequency (rad/s)."""
    return electron_omega(params, f_left) - electron_omega(params, f_right)
