import math

import numpy as np
import pytest

from core.exceptions import ConvergenceError, DomainError, ParameterError, UndefinedStatisticError
from core.specfun import SeriesResult
from core.statistics import g2, mandel_q, mean_n, mean_n2, pnd, pnd_table, poissonian_crossing, stats_report
from core.systems import PacsPoint, SipSystem, energy

PRESET_SYSTEMS = [SipSystem.d_type(), SipSystem.c_type(-4.0), SipSystem.a_type1(0.5), SipSystem.a_type2(5.0)]


def _amplitude(system: SipSystem) -> complex:
    return 0.6 * np.exp(0.4j) if system.convergence_radius == 1.0 else 1.7 * np.exp(-1.1j)


class TestPhotonAddedDType:
    @pytest.mark.parametrize('method', ['generic', 'closed'])
    def test_unit_amplitude(self, method):
        point = PacsPoint(1.0, 1, SipSystem.d_type())
        assert mean_n(point, method) == pytest.approx(2.5, rel=1e-9)
        assert mean_n2(point, method) == pytest.approx(7.5, rel=1e-9)
        assert mandel_q(point, method) == pytest.approx(-0.5, rel=1e-9)
        assert g2(point, method) == pytest.approx(0.8, rel=1e-9)

    def test_vacuum_amplitude(self):
        system = SipSystem.d_type()
        for m in range(1, 5):
            point = PacsPoint(0.0, m, system)
            assert mean_n(point) == pytest.approx(energy(system, m))
            assert mean_n(point, 'closed') == pytest.approx(energy(system, m))
            assert mandel_q(point) == pytest.approx(-1.0)

    def test_sub_poissonian(self):
        system = SipSystem.d_type()
        for m in (1, 2, 5, 10):
            values = [mandel_q(PacsPoint(r, m, system)) for r in np.linspace(0.05, 10.0, 40)]
            assert max(values) < 0
        assert -0.1 < mandel_q(PacsPoint(10.0, 1, system)) < 0


class TestPoisson:
    @pytest.mark.parametrize('r', [0.3, 1.0, 2.5])
    def test_plain_coherent_state(self, r):
        point = PacsPoint(r, 0, SipSystem.d_type())
        assert mean_n(point) == pytest.approx(r * r, rel=1e-12)
        assert mandel_q(point) == pytest.approx(0.0, abs=1e-10)
        assert g2(point) == pytest.approx(1.0, rel=1e-10)

    @pytest.mark.parametrize('method', ['generic', 'closed'])
    def test_pnd(self, method):
        point = PacsPoint(1.0, 0, SipSystem.d_type())
        assert pnd(point, 2, method) == pytest.approx(math.exp(-1.0) / 2, rel=1e-12)

    def test_undefined_at_vacuum(self):
        point = PacsPoint(0.0, 0, SipSystem.d_type())
        assert mean_n(point) == 0
        with pytest.raises(UndefinedStatisticError):
            mandel_q(point)
        with pytest.raises(UndefinedStatisticError):
            g2(point)

    def test_closed_needs_photons(self):
        with pytest.raises(ParameterError):
            mean_n(PacsPoint(1.0, 0, SipSystem.d_type()), 'closed')
        with pytest.raises(ParameterError):
            mean_n(PacsPoint(1.0, 1, SipSystem.d_type()), 'exact')


class TestConsistency:
    @pytest.mark.parametrize('system', PRESET_SYSTEMS, ids=str)
    def test_generic_matches_closed(self, system):
        z = _amplitude(system)
        for m in range(1, 6):
            point = PacsPoint(z, m, system)
            assert mean_n(point, 'closed') == pytest.approx(mean_n(point), rel=1e-8)
            assert mean_n2(point, 'closed') == pytest.approx(mean_n2(point), rel=1e-8)
            assert pnd(point, m + 3, 'closed') == pytest.approx(pnd(point, m + 3), rel=1e-8)

    @pytest.mark.parametrize('system', PRESET_SYSTEMS, ids=str)
    def test_pnd_moments(self, system):
        z = _amplitude(system)
        for m in range(4):
            point = PacsPoint(z, m, system)
            n_max = 400
            probabilities = pnd_table(point, n_max)
            levels = energy(system, np.arange(n_max + 1))
            assert probabilities.sum() == pytest.approx(1.0, abs=1e-12)
            assert np.sum(levels * probabilities) == pytest.approx(mean_n(point), rel=1e-9)
            assert np.sum(levels ** 2 * probabilities) == pytest.approx(mean_n2(point), rel=1e-9)
            assert np.all(probabilities[:m] == 0)

    def test_q_identity(self):
        rng = np.random.default_rng(1)
        for system in PRESET_SYSTEMS:
            radius = 0.95 if system.convergence_radius == 1.0 else 6.0
            for _ in range(50):
                z = radius * rng.uniform(0.05, 1.0) * np.exp(2j * np.pi * rng.uniform())
                point = PacsPoint(z, int(rng.integers(0, 6)), system)
                report = stats_report(point)
                assert report.mandel_q == pytest.approx(report.mean_n * (report.g2 - 1), rel=1e-10, abs=1e-10)

    def test_report(self):
        report = stats_report(PacsPoint(1.0, 1, SipSystem.d_type()), 'closed').as_dict()
        assert report.pop('method') == 'closed'
        assert report == pytest.approx({'<N>': 2.5, '<N^2>': 7.5, 'Q': -0.5, 'g2': 0.8}, rel=1e-9)

    def test_unconverged_closed_pnd(self, monkeypatch):
        monkeypatch.setattr('core.statistics.pfq', lambda a, b, w: SeriesResult(complex(2.0), 0.5, 5, False))
        with pytest.raises(ConvergenceError):
            pnd(PacsPoint(1.0, 1, SipSystem.d_type()), 3, 'closed')

    def test_closed_pnd_table(self):
        point = PacsPoint(0.5, 2, SipSystem.a_type2(5.0))
        np.testing.assert_allclose(pnd_table(point, 30, 'closed'), pnd_table(point, 30), rtol=1e-9, atol=1e-300)


class TestRegimes:
    def test_c_type_crossing(self):
        system = SipSystem.c_type(-4.0)
        assert mandel_q(PacsPoint(0.05, 1, system)) < 0
        assert mandel_q(PacsPoint(0.95, 1, system)) > 0
        root = poissonian_crossing(system, 1, 0.05, 0.95)
        assert 0.05 < root < 0.95
        assert mandel_q(PacsPoint(root, 1, system)) == pytest.approx(0.0, abs=1e-8)

    def test_crossing_needs_sign_change(self):
        with pytest.raises(DomainError):
            poissonian_crossing(SipSystem.d_type(), 1, 0.1, 5.0)

    @pytest.mark.parametrize('m', [1, 2])
    def test_a_type_super_poissonian(self, m):
        assert mandel_q(PacsPoint(10.0, m, SipSystem.a_type1(0.5))) > 0
        assert mandel_q(PacsPoint(0.99, m, SipSystem.a_type2(5.0))) > 0

    def test_pnd_peak_moves_with_photons(self):
        system = SipSystem.a_type2(5.0)
        peaks = [int(np.argmax(pnd_table(PacsPoint(0.5, m, system), 60))) for m in range(4)]
        assert all(peak >= m for m, peak in enumerate(peaks))
        assert peaks[3] > peaks[0]
