"""Cross-validation of the Monte Carlo engine against the exact backend.

A small symmetric bath spec is mirrored into the semiclassical model (one
macro-spin per nucleus, couplings mapped so every variance and Knight
shift matches), then the covariance of the two echo outcomes is compared
between exact_covariance and the sampled engine over a (gap, mode) grid.

The mean-field engine ignores operator non-commutativity, so the
comparison uses a small transverse ratio and a tolerance of a few Monte
Carlo standard errors.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .bath import BathConfig
from .constants import HBAR, MU_B
from .engine import Model, correlation_point
from .oracle import (BRANCH_DOWNUP, BRANCH_UPDOWN, SmallBathSpec,
                     conditional_propagator, entanglement_witness,
                     exact_covariance, iem_kraus, intermediate_channel,
                     maximally_mixed)
from .physics import ElectronParams, NuclearSpecies
from .sequences import IntermediateSpec


def mirror_model(spec: SmallBathSpec) -> Model:
    """Semiclassical model matching a symmetric small-bath spec.

    Works in desk units: b_ext = 1 and g_par = hbar/mu_B make the electron
    frequency numerically equal to the field, so species Larmor frequencies
    are the spec's zeemans directly.  Per nucleus, the transverse phasor
    RMS a_k/sqrt(2) and longitudinal RMS a_k/2 reproduce the variances of
    lambda*a_k*I_x and a_k*I_z, and the per-species Knight weights make the
    mean-field frequency shift under <S_z> = 1/2 exactly a_k/2.
    """
    if spec.n_left != spec.n_right:
        raise ValueError("mirror requires a symmetric spec")
    n = spec.n_left
    left_a = spec.couplings[:n]
    left_w = spec.zeemans[:n]
    if spec.couplings[n:] != left_a or spec.zeemans[n:] != left_w:
        raise ValueError("mirror requires identical left/right couplings")
    species = [NuclearSpecies(name=f"spin{k}", gamma=left_w[k], abundance=1.0 / n,
                              rms_transverse_field=left_a[k] / math.sqrt(2.0),
                              rms_longitudinal_field=left_a[k] / 2.0,
                              frequency_spread=0.0)
               for k in range(n)]
    bath = BathConfig(species=species, b_ext=1.0, macro_spins_per_species=1,
                      knight_rms=float(np.mean(left_a)) / 2.0,
                      knight_weight_distribution="uniform",
                      species_knight_weights=left_a)
    electron = ElectronParams(g_par=HBAR / MU_B,
                              g_perp_ratio=spec.transverse_ratio, b_ext=1.0)
    return Model(electron=electron, bath=bath)


@dataclass(frozen=True)
class VerifyPoint:
    mode: str
    gap: float
    exact: float
    sampled: float
    stderr: float

    @property
    def ok(self) -> bool:
        return abs(self.sampled - self.exact) < 4.0 * self.stderr


@dataclass(frozen=True)
class VerifyReport:
    points: list[VerifyPoint]
    invariant_failures: list[str]
    elapsed: float

    @property
    def ok(self) -> bool:
        return not self.invariant_failures and all(p.ok for p in self.points)

    def lines(self) -> list[str]:
        out = []
        for p in self.points:
            status = "ok" if p.ok else "FAIL"
            out.append(f"{status}  mode={p.mode:<12s} gap={p.gap:g}  "
                       f"exact={p.exact:+.5f}  mc={p.sampled:+.5f}  "
                       f"stderr={p.stderr:.5f}")
        for msg in self.invariant_failures:
            out.append(f"FAIL  {msg}")
        out.append(f"{'PASS' if self.ok else 'FAIL'}  "
                   f"({len(self.points)} grid points, {self.elapsed:.1f} s)")
        return out


def default_verify_spec() -> SmallBathSpec:
    """Three nuclei per dot in desk units (frequencies of order 1 rad/s).

    Odd-harmonic Zeemans with couplings a_k = omega_k/2 put every nucleus
    at the maximum of the tau = 2 pi echo filter, and make the Knight
    phases accumulated over a 2 pi gap sit exactly at quadrature: the
    honest covariance there is zero by symmetry, while any rescaling of
    the Knight map moves it off quadrature and shows up immediately.
    """
    a = (0.5, 1.5, 2.5)
    w = (1.0, 3.0, 5.0)
    return SmallBathSpec(n_left=3, n_right=3, couplings=a + a,
                         zeemans=w + w, transverse_ratio=0.1)


DEFAULT_TAU_ECHO = 2.0 * math.pi
DEFAULT_GAPS = (4.0, 7.0, 10.0)
KNIGHT_SENSITIVE_GAP = 2.0 * math.pi


def _invariant_checks(spec: SmallBathSpec, tau_echo: float,
                      gap: float) -> list[str]:
    failures = []
    tol = 1e-10
    ident = np.eye(spec.dim)

    for branch in (BRANCH_UPDOWN, BRANCH_DOWNUP):
        u = conditional_propagator(spec, branch, tau_echo)
        if np.max(np.abs(u.conj().T @ u - ident)) > tol:
            failures.append(f"propagator {branch} not unitary to {tol}")

    kraus = iem_kraus(spec, tau_echo)
    if kraus.completeness_defect() > tol:
        failures.append(f"Kraus completeness defect {kraus.completeness_defect():g}")

    rho = maximally_mixed(spec)
    for mode in ("lock_singlet", "updown", "updown_pi"):
        out = intermediate_channel(spec, mode, gap)(rho)
        if abs(np.trace(out).real - 1.0) > tol:
            failures.append(f"channel {mode} not trace preserving")

    if entanglement_witness(spec, gap, rho) > tol:
        failures.append("witness nonzero on maximally mixed state")

    m_s = kraus.m_singlet
    cond = m_s @ rho @ m_s.conj().T
    cond /= np.trace(cond).real
    if spec.transverse_ratio != 0.0:
        if entanglement_witness(spec, gap, cond) <= tol:
            failures.append("witness vanishes on post-IEM conditional state")

    lam0 = SmallBathSpec(spec.n_left, spec.n_right, spec.couplings,
                         spec.zeemans, transverse_ratio=0.0)
    if abs(exact_covariance(lam0, tau_echo, gap, "updown")) > tol:
        failures.append("covariance nonzero at lambda = 0")

    return failures


def run_verify(shots: int = 100_000, seed: int = 2718, workers: int = 1,
               spec: SmallBathSpec | None = None,
               tau_echo: float = DEFAULT_TAU_ECHO,
               gaps: tuple[float, ...] = DEFAULT_GAPS,
               tamper: bool = False) -> VerifyReport:
    """Run the invariant suite plus the 10-point comparison grid.

    `tamper` deliberately breaks the mirrored Knight map (negative
    control: the report must then fail and name the offending points).
    """
    t0 = time.time()
    spec = spec or default_verify_spec()
    model = mirror_model(spec)
    if tamper:
        bath = BathConfig(species=model.bath.species, b_ext=model.bath.b_ext,
                          macro_spins_per_species=1,
                          knight_rms=model.bath.knight_rms * 2.0,
                          knight_weight_distribution="uniform",
                          species_knight_weights=model.bath.species_knight_weights)
        model = Model(electron=model.electron, bath=bath)

    failures = _invariant_checks(spec, tau_echo, gaps[0])

    grid = [("lock_singlet", g) for g in gaps] \
        + [("updown", KNIGHT_SENSITIVE_GAP)] \
        + [("updown", g) for g in gaps] \
        + [("updown_pi", g) for g in gaps]
    points = []
    for mode, gap in grid:
        exact = exact_covariance(spec, tau_echo, gap, mode)
        res = correlation_point(model, tau_echo, tau_echo + gap,
                                IntermediateSpec(mode=mode), shots, seed,
                                workers)
        points.append(VerifyPoint(mode=mode, gap=gap, exact=exact,
                                  sampled=res.covariance, stderr=res.stderr))
    return VerifyReport(points=points, invariant_failures=failures,
                        elapsed=time.time() - t0)
