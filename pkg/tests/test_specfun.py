import math

import numpy as np
import pytest
from scipy import special

from core.exceptions import ConvergenceError, DivergenceError, DomainError, ParameterError
from core.specfun import (ContourConfig, MeijerGSpec, SeriesResult, log_gamma, log_gamma_ratio, log_gamma_signed,
                          meijer_g_q0, mellin_moment, pfq, pfq_partial_sums, require_converged)


class TestLogGamma:
    def test_values(self):
        assert log_gamma(1.0) == pytest.approx(0.0, abs=1e-15)
        assert log_gamma(0.5) == pytest.approx(math.log(math.sqrt(math.pi)), rel=1e-14)
        assert log_gamma(7.0) == pytest.approx(math.log(720.0), rel=1e-14)

    @pytest.mark.parametrize('x', [0.0, -1.0, -2.5])
    def test_domain(self, x):
        with pytest.raises(DomainError):
            log_gamma(x)

    def test_signed(self):
        log_abs, sign = log_gamma_signed(-0.5)
        assert sign == -1.0
        assert log_abs == pytest.approx(math.log(2 * math.sqrt(math.pi)), rel=1e-14)
        with pytest.raises(DomainError):
            log_gamma_signed(-3.0)

    def test_ratio(self):
        # Gamma(5) Gamma(-0.5) / Gamma(3) = 24 * (-2 sqrt(pi)) / 2
        log_abs, sign = log_gamma_ratio([5.0, -0.5], [3.0])
        assert sign * math.exp(log_abs) == pytest.approx(-24 * math.sqrt(math.pi), rel=1e-13)


class TestPfq:
    def test_exponential(self):
        result = pfq([], [], 1.0)
        assert result.converged
        assert result.real == pytest.approx(math.e, rel=1e-15)

    def test_kummer(self):
        assert pfq([2.0], [1.0], 1.0).real == pytest.approx(2 * math.e, rel=1e-14)

    def test_geometric(self):
        result = pfq([1.0], [], 0.5)
        assert result.converged
        assert result.real == pytest.approx(2.0, rel=1e-14)
        assert result.abs_error_estimate <= 1e-15 * max(1.0, abs(result.value))

    def test_gauss(self):
        # 2F1(1, 1; 2; w) = -ln(1 - w) / w
        assert pfq([1.0, 1.0], [2.0], 0.5).real == pytest.approx(2 * math.log(2.0), rel=1e-14)

    def test_terminating(self):
        # 1F1(-3; 1; 2) is the Laguerre polynomial L_3(2)
        result = pfq([-3.0], [1.0], 2.0)
        assert result.converged
        assert result.abs_error_estimate == 0.0
        assert result.real == pytest.approx(-1.0 / 3.0, rel=1e-14)

    def test_zero_argument(self):
        assert pfq([1.0, 1.0, 1.0], [1.0], 0.0).real == 1.0

    @pytest.mark.parametrize('b', [[0.0], [-2.0], [1.0, -1.0]])
    def test_nonpositive_lower_parameter(self, b):
        with pytest.raises(ParameterError):
            pfq([1.0], b, 0.5)

    def test_tolerance(self):
        with pytest.raises(ParameterError):
            pfq([1.0], [1.0], 0.5, tol=0.0)

    def test_divergence(self):
        with pytest.raises(DivergenceError):
            pfq([1.0, 1.0, 1.0], [1.0], 0.1)
        with pytest.raises(DivergenceError):
            pfq([1.0], [], 1.0)

    def test_budget(self):
        result = pfq([], [], 100.0, max_terms=5)
        assert not result.converged
        assert result.terms_used <= 5

    def test_partial_sums_follow_term_ratio(self):
        a, b, w = [0.5, 2.0], [1.5], 0.3
        sums = pfq_partial_sums(a, b, w, 30)
        terms = np.diff(sums)
        for n in range(1, len(terms)):
            ratio = np.prod([ai + n for ai in a]) / (np.prod([bj + n for bj in b]) * (n + 1)) * w
            assert terms[n] / terms[n - 1] == pytest.approx(ratio, rel=1e-12)
        assert sums[-1].real == pytest.approx(pfq(a, b, w).real, rel=1e-12)


class TestMeijerG:
    def test_exponential(self):
        result = meijer_g_q0(MeijerGSpec((), (0.0,)), 1.0)
        assert result.converged
        assert result.real == pytest.approx(math.exp(-1.0), rel=1e-10)

    @pytest.mark.parametrize('x', [0.1, 1.0, 4.0])
    def test_exponential_through_cancellation(self, x):
        assert meijer_g_q0(MeijerGSpec((0.0,), (0.0, 0.0)), x).real == pytest.approx(math.exp(-x), rel=1e-10)

    @pytest.mark.parametrize('x', [0.2, 1.0, 3.0])
    def test_double_pole(self, x):
        # G^{2,0}_{0,2}(x | 0, 0) = 2 K_0(2 sqrt(x))
        expected = 2 * special.k0(2 * math.sqrt(x))
        assert meijer_g_q0(MeijerGSpec((), (0.0, 0.0)), x).real == pytest.approx(expected, rel=1e-9)

    @pytest.mark.parametrize('x', [0.5, 2.0, 5.0])
    def test_incomplete_gamma(self, x):
        # G^{2,0}_{1,2}(x | 1; 0, 0) = Gamma(0, x)
        assert meijer_g_q0(MeijerGSpec((1.0,), (0.0, 0.0)), x).real == pytest.approx(special.exp1(x), rel=1e-9)

    @pytest.mark.parametrize('x', [0.3, 0.7])
    def test_finite_support_inside(self, x):
        assert meijer_g_q0(MeijerGSpec((1.0,), (0.0,)), x).real == pytest.approx(1.0, rel=1e-9)

    def test_finite_support_outside(self):
        result = meijer_g_q0(MeijerGSpec((1.0,), (0.0,)), 1.5)
        assert result.value == 0.0
        assert result.converged

    @pytest.mark.parametrize('x', [0.2, 0.5, 0.8])
    def test_beta_density(self, x):
        # G^{1,0}_{1,1}(x | a; b) = x^b (1 - x)^(a - b - 1) / Gamma(a - b)
        expected = x ** 0.5 * (1 - x) ** 1.5 / math.gamma(2.5)
        assert meijer_g_q0(MeijerGSpec((3.0,), (0.5,)), x).real == pytest.approx(expected, rel=1e-9)

    def test_shift_property(self):
        spec, alpha = MeijerGSpec((2.0,), (0.0, 0.0)), 0.5
        for x in np.linspace(0.2, 5.0, 10):
            shifted = meijer_g_q0(spec.shifted(alpha), x).real
            assert shifted == pytest.approx(x ** alpha * meijer_g_q0(spec, x).real, rel=1e-8)

    def test_reduced(self):
        reduced = MeijerGSpec((0.0, 1.5), (0.0, 0.0, 1.5)).reduced()
        assert reduced.a_params == ()
        assert reduced.b_params == (0.0,)

    def test_mellin(self):
        assert mellin_moment(MeijerGSpec((), (0.0,)), 3.0) == pytest.approx(2.0, rel=1e-14)
        assert mellin_moment(MeijerGSpec((1.0,), (0.0, 0.0), 2.0), 2.0) == pytest.approx(0.25 * 1 / 2, rel=1e-14)
        with pytest.raises(DomainError):
            mellin_moment(MeijerGSpec((), (1.0,)), -1.0)

    def test_errors(self):
        with pytest.raises(ParameterError):
            MeijerGSpec((1.0, 2.0), (0.0,))
        with pytest.raises(ParameterError):
            MeijerGSpec((), ())
        with pytest.raises(DomainError):
            meijer_g_q0(MeijerGSpec((), (0.0,)), 0.0)
        with pytest.raises(ParameterError):
            meijer_g_q0(MeijerGSpec((), (0.0,)), 1.0, ContourConfig(real_shift=-1.0))
        with pytest.raises(ConvergenceError) as info:
            meijer_g_q0(MeijerGSpec((), (0.0,)), 1.0, ContourConfig(max_doublings=0))
        assert info.value.partial is not None

    def test_explicit_shift(self):
        contour = ContourConfig(real_shift=2.0)
        assert meijer_g_q0(MeijerGSpec((), (0.0,)), 1.0, contour).real == pytest.approx(math.exp(-1.0), rel=1e-10)


class TestMeijerGNearUnity:
    @pytest.mark.parametrize('y', [0.3, 0.6, 0.9, 0.99, 0.999])
    def test_two_pairs_against_gauss(self, y):
        # G^{2,0}_{2,2}(y | a1, a2; b1, b2) = y^b2 (1 - y)^(psi - 1) / Gamma(psi) 2F1(a2 - b1, a1 - b1; psi; 1 - y)
        expected = y ** 0.5 * (1 - y) ** 2 / 2.0 * special.hyp2f1(2.0, 1.5, 3.0, 1 - y)
        result = meijer_g_q0(MeijerGSpec((1.5, 2.0), (0.0, 0.5)), y)
        assert result.converged
        assert result.real == pytest.approx(expected, rel=1e-9)

    @pytest.mark.parametrize('y', [0.55, 0.65])
    def test_series_continues_contour(self, y):
        spec = MeijerGSpec((1.0, 3.5, 3.5), (0.0, 0.0, 2.5))
        contour_only = meijer_g_q0(spec, y, ContourConfig(unit_series_from=1.0)).real
        assert meijer_g_q0(spec, y).real == pytest.approx(contour_only, rel=1e-8)

    def test_close_to_the_end_of_the_support(self):
        spec = MeijerGSpec((1.0, 3.5, 3.5), (0.0, 0.0, 2.5))
        values = [meijer_g_q0(spec, y).real for y in (0.9, 0.99, 0.999, 0.9999)]
        assert all(v > 0 for v in values)
        # psi = 5.5: G vanishes like (1 - y)^4.5
        assert values[-1] / values[-2] == pytest.approx(10 ** -4.5, rel=1e-2)

    def test_single_pair_is_closed(self):
        result = meijer_g_q0(MeijerGSpec((-0.5,), (0.0,)), 0.4)
        assert result.terms_used == 1
        assert result.real == pytest.approx(0.6 ** -1.5 / special.gamma(-0.5), rel=1e-14)

    def test_unit_series_budget(self):
        with pytest.raises(ConvergenceError) as info:
            meijer_g_q0(MeijerGSpec((1.5, 2.0), (0.0, 0.5)), 0.6, ContourConfig(unit_series_terms=8))
        assert not info.value.partial.converged

    def test_evaluation_budget(self):
        with pytest.raises(ConvergenceError):
            meijer_g_q0(MeijerGSpec((), (0.0,)), 1.0, ContourConfig(max_evaluations=24))
        with pytest.raises(ParameterError):
            ContourConfig(max_evaluations=10)
        with pytest.raises(ParameterError):
            ContourConfig(unit_series_from=0.0)

    def test_require_converged(self):
        assert require_converged(SeriesResult(1.0, 0.0, 3, True), 'x').real == 1.0
        with pytest.raises(ConvergenceError) as info:
            require_converged(SeriesResult(1.0, 0.5, 3, False), 'Test value')
        assert 'Test value' in str(info.value)
