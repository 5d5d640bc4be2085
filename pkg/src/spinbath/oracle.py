"""Exact small-N quantum backend.

Pure-dephasing qubit-bath model: nuclear spins 1/2 with Zeeman splittings
omega_k and couplings a_k, the electron-conditioned bath field

    B = sum_left a_k (I_z,k + lambda I_x,k) - sum_right a_k (I_z,k + lambda I_x,k)

and conditional propagators U_q(t) = exp(-i t (H_Z + s_q B)) for the two
electron branches.  One Hahn-echo IEM cycle becomes a Kraus pair acting on
the bath density matrix, so outcome correlations can be computed exactly
(no sampling).  This is the truth source the Monte Carlo engine is checked
against on small baths.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

MAX_SPINS = 12
MAX_DIM = 4096

BRANCH_UPDOWN = "updown"
BRANCH_DOWNUP = "downup"

_SZ = np.array([[0.5, 0.0], [0.0, -0.5]])
_SX = np.array([[0.0, 0.5], [0.5, 0.0]])


@dataclass(frozen=True)
class SmallBathSpec:
    """Exactly diagonalizable bath: a few spins 1/2 split over the two dots."""

    n_left: int
    n_right: int
    couplings: tuple[float, ...]       # a_k, rad/s, left block then right
    zeemans: tuple[float, ...]         # omega_k, rad/s
    transverse_ratio: float = 0.0      # lambda

    def __post_init__(self):
        if self.n_left < 0 or self.n_right < 0:
            raise ValueError("spin counts must be >= 0")
        n = self.n_left + self.n_right
        if n > MAX_SPINS or 2 ** n > MAX_DIM:
            raise ValueError(
                f"{n} spins exceed the dimension cap of {MAX_SPINS} "
                f"(2^N <= {MAX_DIM})")
        if len(self.couplings) != n or len(self.zeemans) != n:
            raise ValueError("couplings and zeemans need one entry per spin")

    @property
    def n_spins(self) -> int:
        return self.n_left + self.n_right

    @property
    def dim(self) -> int:
        return 2 ** self.n_spins


def _site_op(op: np.ndarray, k: int, n: int) -> np.ndarray:
    """Single-site operator embedded in the n-spin product space."""
    out = np.array([[1.0]])
    for i in range(n):
        out = np.kron(out, op if i == k else np.eye(2))
    return out


def _hamiltonians(spec: SmallBathSpec) -> tuple[np.ndarray, np.ndarray]:
    """(H_Z, B) as dense matrices."""
    n = spec.n_spins
    hz = np.zeros((spec.dim, spec.dim))
    bop = np.zeros((spec.dim, spec.dim))
    lam = spec.transverse_ratio
    for k in range(n):
        iz = _site_op(_SZ, k, n)
        hz += spec.zeemans[k] * iz
        sign = 1.0 if k < spec.n_left else -1.0
        bop += sign * spec.couplings[k] * (iz + lam * _site_op(_SX, k, n))
    return hz, bop


def conditional_propagator(spec: SmallBathSpec, branch: str,
                           t: float) -> np.ndarray:
    """Bath unitary conditioned on the electron branch, over time t."""
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    if branch == BRANCH_UPDOWN:
        s_q = 0.5
    elif branch == BRANCH_DOWNUP:
        s_q = -0.5
    else:
        raise ValueError(f"branch must be {BRANCH_UPDOWN!r} or {BRANCH_DOWNUP!r}")
    hz, bop = _hamiltonians(spec)
    return expm(-1j * t * (hz + s_q * bop))


def zeeman_propagator(spec: SmallBathSpec, t: float) -> np.ndarray:
    """Bath evolution with the electron locked in S (no conditioned field)."""
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    hz, _ = _hamiltonians(spec)
    return expm(-1j * t * hz)


@dataclass(frozen=True)
class KrausPair:
    """Outcome-labelled bath operators of one IEM cycle."""

    m_singlet: np.ndarray
    m_triplet: np.ndarray

    def completeness_defect(self) -> float:
        ms, mt = self.m_singlet, self.m_triplet
        ident = np.eye(ms.shape[0])
        return float(np.max(np.abs(ms.conj().T @ ms + mt.conj().T @ mt - ident)))


def iem_kraus(spec: SmallBathSpec, tau_echo: float) -> KrausPair:
    """Kraus pair of one Hahn-echo IEM cycle of total evolution tau_echo.

    The electron starts in S = (updown - downup)/sqrt(2), each branch drags
    the bath with its own propagator, the pi pulse swaps branches at the
    midpoint, and the S/T0 measurement projects; the bath is left with
    M_S = (U_du U_ud + U_ud U_du)/2 or M_T = (difference)/2 (half legs).
    """
    if tau_echo <= 0:
        raise ValueError(f"tau_echo must be > 0, got {tau_echo}")
    u_ud = conditional_propagator(spec, BRANCH_UPDOWN, tau_echo / 2.0)
    u_du = conditional_propagator(spec, BRANCH_DOWNUP, tau_echo / 2.0)
    a = u_du @ u_ud
    b = u_ud @ u_du
    return KrausPair(m_singlet=(a + b) / 2.0, m_triplet=(a - b) / 2.0)


def intermediate_channel(spec: SmallBathSpec, mode: str, gap: float,
                         pulse_angle: float = 0.0):
    """Bath channel for the qubit manipulation between the echoes.

    Returns rho -> rho' as a callable.  lock_singlet is pure Zeeman
    evolution; updown conjugates with U_updown(gap); a mid-gap electron
    rotation theta mixes the two second-half branches with weights
    cos^2(theta/2) and sin^2(theta/2) (the electron is reinitialized before
    the second echo, so its coherences drop out).
    """
    if gap < 0:
        raise ValueError(f"gap must be >= 0, got {gap}")
    if mode == "lock_singlet":
        u = zeeman_propagator(spec, gap)
        return lambda rho: u @ rho @ u.conj().T
    if mode == "updown":
        u = conditional_propagator(spec, BRANCH_UPDOWN, gap)
        return lambda rho: u @ rho @ u.conj().T
    if mode in ("updown_pi", "updown_theta"):
        theta = math.pi if mode == "updown_pi" else pulse_angle
        half_ud = conditional_propagator(spec, BRANCH_UPDOWN, gap / 2.0)
        half_du = conditional_propagator(spec, BRANCH_DOWNUP, gap / 2.0)
        w_stay = math.cos(theta / 2.0) ** 2
        w_swap = math.sin(theta / 2.0) ** 2
        u_stay = half_ud @ half_ud
        u_swap = half_du @ half_ud
        return lambda rho: (w_stay * u_stay @ rho @ u_stay.conj().T
                            + w_swap * u_swap @ rho @ u_swap.conj().T)
    raise ValueError(f"unknown intermediate mode {mode!r}")


def maximally_mixed(spec: SmallBathSpec) -> np.ndarray:
    return np.eye(spec.dim) / spec.dim


def validate_density_matrix(rho: np.ndarray, tol: float = 1e-10) -> None:
    """Trace-one, Hermitian, positive semidefinite within tol."""
    if abs(np.trace(rho).real - 1.0) > tol:
        raise ValueError(f"trace {np.trace(rho)} != 1")
    if np.max(np.abs(rho - rho.conj().T)) > tol:
        raise ValueError("density matrix not Hermitian")
    if np.linalg.eigvalsh(rho).min() < -tol:
        raise ValueError("density matrix not positive semidefinite")


def exact_covariance(spec: SmallBathSpec, tau_echo: float, gap: float,
                     mode: str, pulse_angle: float = 0.0) -> float:
    """Covariance of the two IEM outcomes, computed without sampling.

    C = P(S,S) - P1(S) * P2(S) with the bath starting maximally mixed and
    the intermediate channel applied between the two Kraus projections.
    """
    kraus = iem_kraus(spec, tau_echo)
    channel = intermediate_channel(spec, mode, gap, pulse_angle)
    rho = maximally_mixed(spec)

    joint = {}  # P(o1, o2) for outcomes 1 = S, 0 = T
    for o1, m1 in ((1, kraus.m_singlet), (0, kraus.m_triplet)):
        sub = m1 @ rho @ m1.conj().T
        p1 = float(np.trace(sub).real)
        if p1 <= 0.0:
            joint[o1, 1] = joint[o1, 0] = 0.0
            continue
        evolved = channel(sub)
        for o2, m2 in ((1, kraus.m_singlet), (0, kraus.m_triplet)):
            joint[o1, o2] = float(np.trace(m2 @ evolved @ m2.conj().T).real)

    p1_s = joint[1, 1] + joint[1, 0]
    p2_s = joint[1, 1] + joint[0, 1]
    return joint[1, 1] - p1_s * p2_s


def exact_echo_probability(spec: SmallBathSpec, tau_echo: float) -> float:
    """Single-echo P(S) from the maximally mixed bath."""
    kraus = iem_kraus(spec, tau_echo)
    rho = maximally_mixed(spec)
    return float(np.trace(kraus.m_singlet @ rho @ kraus.m_singlet.conj().T).real)


def entanglement_witness(spec: SmallBathSpec, gap: float,
                         rho: np.ndarray) -> float:
    """Trace distance of the two electron-conditioned bath evolutions.

    D(U_ud rho U_ud^dag, U_du rho U_du^dag); zero means the interaction
    generates no qubit-bath entanglement for pure dephasing.
    """
    validate_density_matrix(rho)
    u_ud = conditional_propagator(spec, BRANCH_UPDOWN, gap)
    u_du = conditional_propagator(spec, BRANCH_DOWNUP, gap)
    diff = u_ud @ rho @ u_ud.conj().T - u_du @ rho @ u_du.conj().T
    eigs = np.linalg.eigvalsh(diff)
    return 0.5 * float(np.sum(np.abs(eigs)))
