"""Physical constants and default nuclear species data (SI units)."""

import math

# CODATA 2018
MU_B = 9.2740100783e-24  # Bohr magneton, J/T
HBAR = 1.054571817e-34   # reduced Planck constant, J*s

TWO_PI = 2.0 * math.pi

# Gyromagnetic ratios of the three GaAs nuclear species, gamma/2pi in Hz/T,
# from standard NMR tables.
GAMMA_OVER_2PI = {
    "As75": 7.315e6,
    "Ga69": 10.248e6,
    "Ga71": 13.021e6,
}

# Fraction of the nuclei per formula unit: As is half of all nuclei, the
# remainder splits by natural Ga isotope abundance (60.1% / 39.9%).
SPECIES_WEIGHT = {
    "As75": 0.500,
    "Ga69": 0.301,
    "Ga71": 0.199,
}

DEFAULT_B_EXT = 0.2          # T
DEFAULT_G_PAR = -0.44        # bulk GaAs electron g-factor
DEFAULT_G_PERP_RATIO = 0.95  # g_perp/g_par, ~5% anisotropy


def gamma_rad(name: str) -> float:
    """Gyromagnetic ratio in rad/s/T for a tabulated species."""
    return TWO_PI * GAMMA_OVER_2PI[name]
