"""Hahn-echo correlation spectroscopy of a nuclear spin bath.

Semiclassical macro-spin Monte Carlo of a two-electron S-T0 qubit probing
the transverse Overhauser field of a GaAs double quantum dot, with the
Knight-shift back-action channel, plus an exact small-bath quantum backend
used as the truth source.
"""

from .bath import (BathConfig, DotBathState, MacroSpin, b_perp_at,
                   default_species, evolve_free, evolve_knight, sample_bath,
                   shot_rng)
from .engine import (Model, ShotRecord, SweepResult, correlation_point,
                     covariance, covariance_from_bits, run_outcomes, run_shot,
                     sweep_amplitude, sweep_delay, sweep_echo)
from .oracle import (KrausPair, SmallBathSpec, conditional_propagator,
                     entanglement_witness, exact_covariance,
                     exact_echo_probability, iem_kraus, intermediate_channel,
                     maximally_mixed, validate_density_matrix,
                     zeeman_propagator)
from .physics import (ElectronParams, FieldSample, NuclearSpecies,
                      electron_omega, larmor_omega, qubit_phase_rate)
from .seqfile import SequenceParseError, parse_sequence, render_sequence
from .sequences import (ExchangePulse, FreeEvolve, InitSinglet, InitUpDown,
                        IntermediateSpec, JMap, LockSinglet, MeasureST0,
                        PulseSequence, QubitState, ReadoutModel, apply_segment,
                        build_correlation_experiment, build_echo,
                        build_echo_with_amplitude, exchange_angle)
from .verify import VerifyPoint, VerifyReport, mirror_model, run_verify

__version__ = "0.1.0"
