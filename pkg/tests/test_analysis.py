import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from existence.analysis import (
    QuantizationReport,
    build_report,
    detect_peaks,
    power_bound_check,
    quantize_fit,
    velocity_condition,
)
from existence.bichromatic import AtomParams, FieldParams, ForceCurve
from existence.errors import InputError

ATOM = AtomParams()
F_UNIT = 0.5  # hbar k gamma / 2 in natural units


def synthetic_curve(omega_r=40.0, width=0.4, step=0.02, ns=(1, 2, 3, 4), sign=1.0):
    v = np.arange(0.0, 1.2 * omega_r, step)
    f = np.zeros_like(v)
    for n in ns:
        f += sign * n * F_UNIT * np.exp(-0.5 * ((v - omega_r / n) / width) ** 2)
    return ForceCurve(v, f, np.zeros_like(v))


class TestQuantizeFit:
    def test_measured_values(self):
        fits = quantize_fit([0.8, 1.9, 3.2], 1.0)
        assert [q.n for q in fits] == [1, 2, 3]
        assert all(q.residual <= 0.25 for q in fits)

    def test_half_to_even(self):
        assert [q.n for q in quantize_fit([2.5, 3.5, 1.5], 1.0)] == [2, 4, 2]

    def test_small_values_floor_at_one(self):
        (q,) = quantize_fit([0.2], 1.0)
        assert q.n == 1
        assert q.residual == pytest.approx(0.8)
        (z,) = quantize_fit([0.0], 1.0)
        assert (z.n, z.residual) == (0, 0.0)

    def test_sign_ignored(self):
        (q,) = quantize_fit([-2.1], 1.0)
        assert q.n == 2
        assert q.value == -2.1

    def test_bad_unit(self):
        with pytest.raises(InputError):
            quantize_fit([1.0], 0.0)

    @settings(max_examples=100, deadline=None)
    @given(n=st.integers(1, 50), frac=st.floats(-0.49, 0.49), unit=st.floats(0.01, 100))
    def test_recovers_integer(self, n, frac, unit):
        (q,) = quantize_fit([(n + frac) * unit], unit)
        assert q.n == n
        assert q.residual == pytest.approx(abs(frac), abs=1e-9)


class TestConditions:
    def test_velocity_condition(self):
        assert velocity_condition(4, 40.0, 1.0) == 10.0
        with pytest.raises(InputError):
            velocity_condition(0, 40.0, 1.0)
        with pytest.raises(InputError):
            velocity_condition(1, 40.0, 0.0)

    def test_power_bound(self):
        ok = power_bound_check(1.0, 10.0, 40.0, 1.0)
        assert ok.bound == 20.0 and ok.satisfied
        assert not power_bound_check(2.1, 10.0, 40.0, 1.0).satisfied
        assert power_bound_check(2.0, 10.0, 40.0, 1.0).satisfied


class TestDetectPeaks:
    def test_single_parabola_vertex(self):
        v = np.linspace(-1, 1, 11) + 0.013
        curve = ForceCurve(v, 3.0 - (v - 0.05) ** 2, np.zeros(11))
        (p,) = detect_peaks(curve, 0.01)
        assert p.v_peak == pytest.approx(0.05, abs=1e-12)
        assert p.f_peak == pytest.approx(3.0, abs=1e-12)

    def test_negative_peaks_keep_sign(self):
        (p,) = detect_peaks(synthetic_curve(ns=(2,), sign=-1.0), 0.1)
        assert p.f_peak < 0

    def test_prominence_filters_ripple(self):
        v = np.linspace(0, 10, 501)
        f = np.exp(-0.5 * (v - 5) ** 2) + 0.01 * np.sin(20 * v)
        assert len(detect_peaks(ForceCurve(v, f, np.zeros_like(v)), 0.1)) == 1

    def test_flat_curve_has_no_peaks(self):
        v = np.linspace(0, 1, 5)
        assert detect_peaks(ForceCurve(v, np.ones(5), np.zeros(5)), 0.1) == []

    def test_rejects(self):
        with pytest.raises(InputError):
            detect_peaks(ForceCurve([0.0, 1.0], [0.0, 1.0], [0.0, 0.0]), 0.1)
        with pytest.raises(InputError):
            detect_peaks(synthetic_curve(), 0.0)


class TestBuildReport:
    def test_ground_truth(self):
        field = FieldParams(delta=40.0, omega_r=40.0)
        report = build_report(synthetic_curve(), ATOM, field, 0.1)
        assert report.unit == pytest.approx(F_UNIT)
        assert sorted(p.n_nearest for p in report.peaks) == [1, 2, 3, 4]
        assert all(p.residual < 0.05 for p in report.peaks)
        assert all(fit.mismatch < 0.02 for fit in report.velocity_fits)
        assert all(c.satisfied for c in report.power_checks)
        assert report.meta["rounding"] == "half-to-even"

    def test_noise_robust(self):
        rng = np.random.default_rng(7)
        clean = synthetic_curve()
        noisy = ForceCurve(clean.velocities, clean.forces + rng.normal(0, 0.005, len(clean)),
                           np.zeros(len(clean)))
        report = build_report(noisy, ATOM, FieldParams(delta=40.0, omega_r=40.0), 0.2)
        assert sorted(p.n_nearest for p in report.peaks) == [1, 2, 3, 4]

    def test_custom_unit(self):
        report = build_report(synthetic_curve(ns=(3,)), ATOM, FieldParams(omega_r=40.0), 0.1,
                              unit=0.25)
        assert report.peaks[0].n_nearest == 6

    def test_mirrored_curve(self):
        curve = synthetic_curve(ns=(2,))
        mirrored = ForceCurve(-curve.velocities[::-1], -curve.forces[::-1], curve.spreads)
        report = build_report(mirrored, ATOM, FieldParams(omega_r=40.0), 0.1)
        (fit,) = report.velocity_fits
        assert fit.v_peak < 0 and fit.mismatch < 0.02

    def test_serializes(self):
        d = build_report(synthetic_curve(), ATOM, FieldParams(omega_r=40.0), 0.1).to_dict()
        assert set(d) == {"unit", "peaks", "velocity_fits", "power_checks", "meta"}
        assert len(d["peaks"]) == 4

    def test_report_invariants(self):
        with pytest.raises(InputError):
            QuantizationReport(0.0, (), (), ())
        assert math.isclose(QuantizationReport(1.0, (), (), ()).unit, 1.0)
