import math

import numpy as np
import pytest

from spinbath.bath import BathConfig, sample_bath, shot_rng
from spinbath.physics import ElectronParams
from spinbath.sequences import (MERGED, SEPARATED, ExchangePulse, FreeEvolve,
                                InitSinglet, InitUpDown, IntermediateSpec,
                                JMap, LockSinglet, MeasureST0, PulseSequence,
                                QubitState, ShotContext, apply_segment,
                                build_correlation_experiment, build_echo,
                                build_echo_with_amplitude, exchange_angle)


def make_ctx(seed=0, index=0, config=None, params=None, jmap=None):
    config = config or BathConfig()
    rng = shot_rng(seed, index)
    left, right = sample_bath(config, rng)
    return ShotContext(params=params or ElectronParams(),
                       bath_config=config, left=left, right=right,
                       rng=rng, jmap=jmap)


def zero_field_ctx(**kw):
    from spinbath.bath import default_species
    species = default_species(rms_transverse_total=0.0,
                              rms_longitudinal_total=0.0)
    return make_ctx(config=BathConfig(species=species), **kw)


class TestQubitState:
    def test_default_is_singlet(self):
        assert QubitState().bloch == (1.0, 0.0, 0.0)

    def test_norm_bound(self):
        with pytest.raises(ValueError):
            QubitState((1.0, 1.0, 0.0))


class TestExchangeAngle:
    def test_linearity_in_duration(self):
        jmap = JMap()
        assert exchange_angle(jmap, 1.3, 40e-9) == \
            pytest.approx(2 * exchange_angle(jmap, 1.3, 20e-9), rel=1e-14)

    def test_vanishes_at_large_negative_amplitude(self):
        assert exchange_angle(JMap(), -40.0, 20e-9) < 1e-9

    def test_monotone_in_amplitude(self):
        jmap = JMap()
        amps = np.linspace(-2, 4, 50)
        angles = [exchange_angle(jmap, a, 20e-9) for a in amps]
        assert all(b > a for a, b in zip(angles, angles[1:]))

    def test_pi_calibration_roundtrip(self):
        jmap = JMap()
        a_pi = jmap.amplitude_for_angle(math.pi, 20e-9)
        assert exchange_angle(jmap, a_pi, 20e-9) == pytest.approx(math.pi, rel=1e-12)

    def test_invalid_jmap(self):
        with pytest.raises(ValueError):
            JMap(j0=0.0)
        with pytest.raises(ValueError):
            JMap(amp_scale=-1.0)


class TestApplySegment:
    def test_pi_pulse_swaps_poles(self):
        ctx = make_ctx()
        q, _ = apply_segment(QubitState((0.0, 0.0, 1.0)),
                             ExchangePulse(angle=math.pi), ctx)
        np.testing.assert_allclose(q.bloch, (0.0, 0.0, -1.0), atol=1e-12)

    def test_zero_angle_identity(self):
        ctx = make_ctx()
        start = QubitState((0.3, 0.4, 0.5))
        q, _ = apply_segment(start, ExchangePulse(angle=0.0), ctx)
        assert q.bloch == start.bloch

    def test_double_pi_is_identity(self):
        ctx = make_ctx()
        q = QubitState((0.2, -0.5, 0.8))
        for _ in range(2):
            q, _ = apply_segment(q, ExchangePulse(angle=math.pi), ctx)
        np.testing.assert_allclose(q.bloch, (0.2, -0.5, 0.8), atol=1e-12)

    def test_free_evolve_zero_fields_identity(self):
        ctx = zero_field_ctx()
        start = QubitState((0.6, 0.0, 0.8))
        q, _ = apply_segment(start, FreeEvolve(5e-6, SEPARATED), ctx)
        np.testing.assert_allclose(q.bloch, start.bloch, atol=1e-12)

    def test_merged_free_evolve_keeps_qubit(self):
        ctx = make_ctx()
        start = QubitState((0.0, 1.0, 0.0))
        q, _ = apply_segment(start, FreeEvolve(5e-6, MERGED), ctx)
        assert q.bloch == start.bloch

    def test_init_segments(self):
        ctx = make_ctx()
        q, _ = apply_segment(QubitState((0.0, 0.0, -1.0)), InitSinglet(), ctx)
        assert q.bloch == (1.0, 0.0, 0.0)
        q, _ = apply_segment(q, InitUpDown(), ctx)
        assert q.bloch == (0.0, 0.0, 1.0)
        q, _ = apply_segment(q, LockSinglet(1e-6), ctx)
        assert q.bloch == (1.0, 0.0, 0.0)

    def test_bloch_norm_preserved_by_unitaries(self):
        ctx = make_ctx(seed=9)
        q = QubitState((1.0, 0.0, 0.0))
        segs = [FreeEvolve(1.1e-6, SEPARATED), ExchangePulse(angle=0.7),
                FreeEvolve(0.4e-6, SEPARATED), ExchangePulse(angle=2.1),
                FreeEvolve(2.6e-6, SEPARATED)]
        for seg in segs:
            q, _ = apply_segment(q, seg, ctx)
            assert abs(math.sqrt(sum(c * c for c in q.bloch)) - 1.0) < 1e-12

    def test_measure_singlet_deterministic(self):
        ctx = make_ctx()
        q, bit = apply_segment(QubitState((1.0, 0.0, 0.0)), MeasureST0(), ctx)
        assert bit == 1 and q.bloch == (1.0, 0.0, 0.0)
        q, bit = apply_segment(QubitState((-1.0, 0.0, 0.0)), MeasureST0(), ctx)
        assert bit == 0 and q.bloch == (-1.0, 0.0, 0.0)

    def test_measure_fidelity_flips(self):
        # fidelity_s = 0 reports every singlet as triplet
        ctx = make_ctx()
        _, bit = apply_segment(QubitState((1.0, 0.0, 0.0)),
                               MeasureST0(fidelity_s=0.0), ctx)
        assert bit == 0


class TestBuilders:
    def test_echo_structure(self):
        seq = build_echo(6.84e-6)
        kinds = [type(s).__name__ for s in seq.segments]
        assert kinds == ["InitSinglet", "FreeEvolve", "ExchangePulse",
                         "FreeEvolve", "MeasureST0"]
        assert seq.segments[1].duration == pytest.approx(3.42e-6)
        assert seq.segments[2].angle == math.pi
        assert seq.total_duration == pytest.approx(6.84e-6)

    def test_echo_rejects_nonpositive_tau(self):
        with pytest.raises(ValueError):
            build_echo(0.0)

    def test_echo_static_terms_cancel(self):
        # longitudinal-only bath: the pi pulse refocuses the static gradient
        from spinbath.bath import default_species
        species = default_species(rms_transverse_total=0.0,
                                  rms_longitudinal_total=2e-3)
        ctx = make_ctx(config=BathConfig(species=species))
        q = QubitState()
        for seg in build_echo(4.0e-6).segments[:-1]:
            q, _ = apply_segment(q, seg, ctx)
        assert q.r_x == pytest.approx(1.0, abs=1e-10)

    def test_correlation_experiment_durations(self):
        for mode in ("lock_singlet", "updown", "updown_pi"):
            seq = build_correlation_experiment(
                2.0e-6, 18.0e-6, IntermediateSpec(mode=mode))
            assert seq.total_duration == pytest.approx(20.0e-6, rel=1e-12)
            assert seq.n_measurements == 2

    def test_correlation_experiment_blocks(self):
        seq = build_correlation_experiment(2.0e-6, 10.0e-6,
                                           IntermediateSpec(mode="updown_pi"))
        kinds = [type(s).__name__ for s in seq.segments]
        assert kinds[5:9] == ["InitUpDown", "FreeEvolve", "ExchangePulse",
                              "FreeEvolve"]
        # pulse sits at the gap midpoint
        assert seq.segments[6].duration == pytest.approx(4.0e-6)
        assert seq.segments[8].duration == pytest.approx(4.0e-6)

    def test_delay_must_cover_echo(self):
        with pytest.raises(ValueError):
            build_correlation_experiment(5e-6, 4e-6, IntermediateSpec())

    def test_amplitude_echo_builder(self):
        seq = build_echo_with_amplitude(2.0e-6, 1.5, 20e-9)
        pulse = seq.segments[2]
        assert pulse.amplitude == 1.5 and pulse.angle is None
        assert pulse.duration == 0.0  # instantaneous in wall time

    def test_intermediate_spec_validation(self):
        with pytest.raises(ValueError):
            IntermediateSpec(mode="hold_my_beer")
        with pytest.raises(ValueError):
            IntermediateSpec(mode="updown_theta")


class TestSegmentValidation:
    def test_exchange_pulse_exclusive_args(self):
        with pytest.raises(ValueError):
            ExchangePulse()
        with pytest.raises(ValueError):
            ExchangePulse(angle=1.0, amplitude=1.0)
        with pytest.raises(ValueError):
            ExchangePulse(amplitude=1.0)  # needs pulse_duration

    def test_negative_durations_rejected(self):
        with pytest.raises(ValueError):
            FreeEvolve(-1e-6)
        with pytest.raises(ValueError):
            LockSinglet(-1e-9)

    def test_probability_ranges(self):
        with pytest.raises(ValueError):
            InitUpDown(adiabatic_error=1.2)
        with pytest.raises(ValueError):
            MeasureST0(fidelity_s=-0.1)

    def test_empty_sequence_rejected(self):
        with pytest.raises(ValueError):
            PulseSequence(())

    def test_stochastic_layout(self):
        seq = build_correlation_experiment(2e-6, 10e-6,
                                           IntermediateSpec(mode="updown_pi"))
        n_norm, n_unif = seq.stochastic_layout()
        assert n_norm == 3   # two echo pulses + intermediate pulse
        assert n_unif == 3   # one InitUpDown + two measurements
