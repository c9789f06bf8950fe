""" Special functions: log-gamma, generalized hypergeometric series pFq and Meijer G^{q,0}_{p,q}.

All Gamma factors go through logarithms so that products of Gamma functions with arguments of a few
hundred never overflow. The Meijer G-function is evaluated from its Mellin-Barnes integral by a
vectorised Gauss-Legendre rule, never by residue sums, so repeated b-parameters (double poles) need
no special treatment. Finite-support functions (q = p) close to the end of their support are summed
as a series in 1 - y whose coefficients follow from the Mellin transform one Gamma pair at a time.
"""
import cmath
import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional, Tuple

import numpy as np
from scipy import special

from .exceptions import ConvergenceError, DivergenceError, DomainError, ParameterError
from .typings import Params

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SeriesResult:
    """ A computed value with its truncation metadata. """
    value: complex
    abs_error_estimate: float
    terms_used: int
    converged: bool

    @property
    def real(self) -> float:
        return float(self.value.real)


def _is_nonpositive_integer(x: float) -> bool:
    return x <= 0 and float(x).is_integer()


def log_gamma(x: float) -> float:
    """ ln Gamma(x) for x > 0 """
    if not x > 0:
        raise DomainError(f'log_gamma requires a positive argument. Currently:{x}')
    return float(special.gammaln(x))


def log_gamma_signed(x: float) -> Tuple[float, float]:
    """ (ln|Gamma(x)|, sign Gamma(x)) for any real x that is not a pole """
    if _is_nonpositive_integer(x):
        raise DomainError(f'Gamma has a pole at {x}')
    return float(special.gammaln(x)), float(special.gammasgn(x))


def log_gamma_ratio(numerators: Params, denominators: Params = ()) -> Tuple[float, float]:
    """
    Log-modulus and sign of Prod Gamma(numerators) / Prod Gamma(denominators).
    :param numerators: arguments of the Gamma functions in the numerator
    :param denominators: arguments of the Gamma functions in the denominator
    :return: (log|ratio|, sign)
    """
    log_value, sign = 0.0, 1.0
    for x in numerators:
        log_abs, sgn = log_gamma_signed(x)
        log_value += log_abs
        sign *= sgn
    for x in denominators:
        log_abs, sgn = log_gamma_signed(x)
        log_value -= log_abs
        sign *= sgn
    return log_value, sign


def _pfq_ratio(a: Tuple[float, ...], b: Tuple[float, ...], w: complex, n: int) -> complex:
    """ t_{n+1} / t_n of the hypergeometric series """
    numerator = 1.0
    for ai in a:
        numerator *= ai + n
    denominator = float(n + 1)
    for bj in b:
        denominator *= bj + n
    return numerator / denominator * w


def _pfq_arguments(a: Params, b: Params, w: complex, tol: float) -> Tuple[tuple, tuple, complex, bool]:
    a = tuple(float(v) for v in a)
    b = tuple(float(v) for v in b)
    w = complex(w)
    if not tol > 0:
        raise ParameterError(f'tol must be strictly positive. Currently:{tol}')
    for bj in b:
        if _is_nonpositive_integer(bj):
            raise ParameterError(f'Lower parameter {bj} is a nonpositive integer: the series is undefined.')
    terminating = any(_is_nonpositive_integer(ai) for ai in a)
    if not terminating and w != 0:
        if len(a) > len(b) + 1:
            raise DivergenceError(f'{len(a)}F{len(b)} diverges for every nonzero argument.')
        if len(a) == len(b) + 1 and abs(w) >= 1.0:
            raise DivergenceError(f'{len(a)}F{len(b)} diverges at |w|={abs(w)} >= 1.')
    return a, b, w, terminating


def pfq(a: Params, b: Params, w: complex, tol: float = 1e-15, max_terms: int = 100_000) -> SeriesResult:
    """
    Generalized hypergeometric series pFq(a; b; w) = sum_n [Prod (a_i)_n / Prod (b_j)_n] w^n / n!

    Terms are generated by their ratio. Once past the largest parameter the ratios are monotone, and the
    remainder after t_n is bounded by |t_n| r / (1 - r) with r the larger of the current ratio and the
    limiting ratio (|w| for p = q + 1, zero otherwise). Summation stops when this bound drops below
    tol * max(1, |sum|).
    """
    a, b, w, terminating = _pfq_arguments(a, b, w, tol)
    if max_terms < 1:
        raise ParameterError(f'max_terms must be at least 1. Currently:{max_terms}')
    limit_ratio = abs(w) if len(a) == len(b) + 1 else 0.0
    monotone_from = max((abs(v) for v in a + b), default=0.0) + 1.0

    term = complex(1.0)
    total = complex(1.0)
    previous_ratio = math.inf
    tail = math.inf
    n = 0
    while n + 1 < max_terms:
        term *= _pfq_ratio(a, b, w, n)
        total += term
        n += 1
        if term == 0:
            return SeriesResult(total, 0.0, n + 1, True)
        ratio = abs(_pfq_ratio(a, b, w, n))
        if n >= monotone_from and (ratio <= previous_ratio or ratio <= limit_ratio):
            bound = max(ratio, limit_ratio)
            if bound < 1.0:
                tail = abs(term) * bound / (1.0 - bound)
                if tail <= tol * max(1.0, abs(total)):
                    return SeriesResult(total, tail, n + 1, True)
        previous_ratio = ratio
    if terminating:
        return SeriesResult(total, 0.0, n + 1, True)
    logger.debug(f'{len(a)}F{len(b)} at w={w} stopped after {n + 1} terms with tail bound {tail:.3e}')
    return SeriesResult(total, tail, n + 1, False)


def pfq_partial_sums(a: Params, b: Params, w: complex, n_terms: int) -> np.ndarray:
    """ The first n_terms partial sums of pFq(a; b; w), each term being the previous one times the term ratio """
    a, b, w, _ = _pfq_arguments(a, b, w, 1.0)
    sums = np.empty(n_terms, dtype=complex)
    term = complex(1.0)
    total = complex(1.0)
    for n in range(n_terms):
        sums[n] = total
        term *= _pfq_ratio(a, b, w, n)
        total += term
    return sums


@dataclass(frozen=True)
class MeijerGSpec:
    """
    One G^{q,0}_{p,q}(scale * x | a ; b) instance.

    q > p: the Mellin-Barnes integrand decays like exp(-(q-p) pi |Im s| / 2) on vertical lines.
    q = p: the function is supported on 0 < scale * x < 1.
    """
    a_params: Tuple[float, ...]
    b_params: Tuple[float, ...]
    scale: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, 'a_params', tuple(float(v) for v in self.a_params))
        object.__setattr__(self, 'b_params', tuple(float(v) for v in self.b_params))
        if self.q < 1:
            raise ParameterError('G^{q,0}_{p,q} needs at least one b-parameter.')
        if self.q < self.p:
            raise ParameterError(f'G^{{q,0}}_{{p,q}} requires q >= p. Currently: p={self.p}, q={self.q}')
        if not self.scale > 0:
            raise ParameterError(f'scale must be strictly positive. Currently:{self.scale}')

    @property
    def p(self) -> int:
        return len(self.a_params)

    @property
    def q(self) -> int:
        return len(self.b_params)

    @property
    def finite_support(self) -> bool:
        return self.p == self.q

    def reduced(self) -> 'MeijerGSpec':
        """ Cancel a-parameters that coincide with b-parameters; the integrand is unchanged. """
        a, b = list(self.a_params), list(self.b_params)
        for value in list(a):
            if len(b) == 1:
                break
            match = next((bj for bj in b if math.isclose(bj, value, rel_tol=0.0, abs_tol=1e-12)), None)
            if match is not None:
                a.remove(value)
                b.remove(match)
        return MeijerGSpec(tuple(a), tuple(b), self.scale)

    def shifted(self, alpha: float) -> 'MeijerGSpec':
        return MeijerGSpec(tuple(v + alpha for v in self.a_params), tuple(v + alpha for v in self.b_params),
                           self.scale)

    def mellin(self, s: float) -> float:
        """ int_0^inf x^{s-1} G(scale x) dx = scale^{-s} Prod Gamma(b+s) / Prod Gamma(a+s) """
        if s <= -min(self.b_params):
            raise DomainError(f'The Mellin transform exists only for s > {-min(self.b_params)}. Currently:{s}')
        if any(_is_nonpositive_integer(ai + s) for ai in self.a_params):
            return 0.0
        log_value, sign = log_gamma_ratio([bj + s for bj in self.b_params], [ai + s for ai in self.a_params])
        return sign * math.exp(log_value - s * math.log(self.scale))


@dataclass(frozen=True)
class ContourConfig:
    """
    real_shift: abscissa c of the contour; chosen from the poles and the saddle point when None.
    im_cutoff: length of the first panel along each ray; later panels double.
    step_control: relative tolerance of the panel rule and of the tail test.
    angle: opening angle of the rays leaving c (pi/2 is the vertical line). None selects pi/2 when q > p
        and 3 pi/4 when q = p.
    max_evaluations: integrand evaluations allowed for one value of G.
    unit_series_from: for q = p, arguments y >= unit_series_from are summed as a series in 1 - y.
    unit_series_terms: number of terms of that series.
    """
    real_shift: Optional[float] = None
    im_cutoff: float = 8.0
    step_control: float = 1e-12
    angle: Optional[float] = None
    pole_clearance: float = 0.5
    max_doublings: int = 40
    order: int = 24
    max_depth: int = 30
    max_evaluations: int = 1_000_000
    unit_series_from: float = 0.5
    unit_series_terms: int = 200

    def __post_init__(self):
        if not self.im_cutoff > 0:
            raise ParameterError(f'im_cutoff must be strictly positive. Currently:{self.im_cutoff}')
        if not self.step_control > 0:
            raise ParameterError(f'step_control must be strictly positive. Currently:{self.step_control}')
        if self.angle is not None and not math.pi / 2 <= self.angle < math.pi:
            raise ParameterError(f'angle must lie in [pi/2, pi). Currently:{self.angle}')
        if self.max_evaluations < self.order:
            raise ParameterError(f'max_evaluations must cover one panel of {self.order} nodes. '
                                 f'Currently:{self.max_evaluations}')
        if not 0 < self.unit_series_from <= 1:
            raise ParameterError(f'unit_series_from must lie in (0, 1]. Currently:{self.unit_series_from}')
        if self.unit_series_terms < 8:
            raise ParameterError(f'unit_series_terms must be at least 8. Currently:{self.unit_series_terms}')


@lru_cache(maxsize=None)
def _legendre_rule(order: int) -> Tuple[np.ndarray, np.ndarray]:
    nodes, weights = special.roots_legendre(order)
    return nodes, weights


def _legendre_panel(f: Callable[[np.ndarray], np.ndarray], lower: float, upper: float,
                    order: int) -> Tuple[float, float]:
    nodes, weights = _legendre_rule(order)
    half = 0.5 * (upper - lower)
    values = f(0.5 * (upper + lower) + half * nodes)
    return half * float(np.dot(weights, values)), half * float(np.dot(weights, np.abs(values)))


def adaptive_legendre(f: Callable[[np.ndarray], np.ndarray], lower: float, upper: float, rel_tol: float,
                      order: int = 24, max_depth: int = 30,
                      max_evaluations: Optional[int] = None) -> Tuple[float, float, float, int, bool]:
    """
    Integrate a vectorised real function on [lower, upper] by Gauss-Legendre bisection.
    An interval is accepted when the rule on the interval and on its two halves differ by less than
    rel_tol times the integral of |f| over the interval.
    :return: integral, integral of |f|, error estimate, number of evaluations, converged flag
    :raises ConvergenceError: more than max_evaluations evaluations of f would be needed
    """
    coarse, coarse_abs = _legendre_panel(f, lower, upper, order)
    evaluations = order
    stack = [(lower, upper, coarse, 0)]
    value = magnitude = error = 0.0
    converged = True
    while stack:
        if max_evaluations is not None and evaluations + 2 * order > max_evaluations:
            raise ConvergenceError(f'Gauss-Legendre bisection on [{lower}, {upper}] exceeded {max_evaluations} '
                                   f'evaluations with {len(stack)} intervals pending.',
                                   partial=SeriesResult(complex(value), error, evaluations, False))
        left_end, right_end, coarse, depth = stack.pop()
        middle = 0.5 * (left_end + right_end)
        left, left_abs = _legendre_panel(f, left_end, middle, order)
        right, right_abs = _legendre_panel(f, middle, right_end, order)
        evaluations += 2 * order
        difference = abs(left + right - coarse)
        if difference <= rel_tol * (left_abs + right_abs) or depth >= max_depth:
            converged = converged and difference <= rel_tol * (left_abs + right_abs)
            value += left + right
            magnitude += left_abs + right_abs
            error += difference
        else:
            stack.append((middle, right_end, right, depth + 1))
            stack.append((left_end, middle, left, depth + 1))
    return value, magnitude, error, evaluations, converged


def contour_abscissa(spec: MeijerGSpec, y: float, contour: ContourConfig) -> float:
    """ Abscissa c of the Mellin-Barnes contour, right of every pole of Prod Gamma(b + s) """
    leftmost = -min(spec.b_params)
    if contour.real_shift is not None:
        if contour.real_shift <= leftmost:
            raise ParameterError(f'real_shift must lie right of the poles at s <= {leftmost}. '
                                 f'Currently:{contour.real_shift}')
        return float(contour.real_shift)
    c = leftmost + contour.pole_clearance
    if spec.q > spec.p:
        # Near the saddle point the integrand has the size of the result, so large arguments keep
        # their relative accuracy.
        c = max(c, y ** (1.0 / (spec.q - spec.p)))
    return c


def _mellin_barnes_integrand(spec: MeijerGSpec, y: float, c: float,
                             theta: float) -> Callable[[np.ndarray], np.ndarray]:
    a = np.asarray(spec.a_params, dtype=float)
    b = np.asarray(spec.b_params, dtype=float)
    direction = cmath.exp(1j * theta)
    log_y = math.log(y)

    def integrand(r: np.ndarray) -> np.ndarray:
        s = c + r * direction
        log_f = special.loggamma(s[:, None] + b).sum(axis=1) - special.loggamma(s[:, None] + a).sum(axis=1)
        return (np.exp(log_f - s * log_y) * direction).imag / math.pi

    return integrand


def _unit_series_order(spec: MeijerGSpec) -> Optional[Tuple[np.ndarray, np.ndarray]]:
    """ Parameters sorted so that no partial sum of a_j - b_j is a pole of Gamma, or None """
    a = np.sort(np.asarray(spec.a_params, dtype=float))
    b = np.sort(np.asarray(spec.b_params, dtype=float))
    if any(_is_nonpositive_integer(v) for v in np.cumsum(a - b)[:-1]):
        return None
    return a, b


def _reciprocal_gamma_ratio(numerator: np.ndarray, denominator: np.ndarray) -> np.ndarray:
    """ Gamma(numerator) / Gamma(denominator), zero where the denominator sits on a pole """
    poles = (denominator <= 0) & (denominator == np.floor(denominator))
    ratio = (np.exp(special.gammaln(numerator) - special.gammaln(denominator))
             * special.gammasgn(numerator) * special.gammasgn(denominator))
    return np.where(poles, 0.0, ratio)


def unit_series_coefficients(a: np.ndarray, b: np.ndarray, n_terms: int) -> np.ndarray:
    """
    d_N of G^{p,0}_{p,p}(y | a ; b) = y^{b_p} (1 - y)^{psi - 1} sum_N d_N (1 - y)^N with psi = sum(a - b).

    For p = 1 only d_0 = 1 / Gamma(psi) is nonzero. Every further pair (a_j, b_j) multiplies the Mellin
    transform by Gamma(b_j + s) / Gamma(a_j + s); on the coefficients this is a convolution with the
    binomial series of (1 - t)^{b_{j-1} - a_j} followed by the factor Gamma(psi' + N) / Gamma(psi + N).
    """
    ns = np.arange(n_terms, dtype=float)
    psi = a[0] - b[0]
    coefficients = np.zeros(n_terms)
    coefficients[0] = special.rgamma(psi)
    for j in range(1, len(a)):
        binomial = special.binom(a[j] - b[j - 1] + ns - 1.0, ns)
        psi_next = psi + a[j] - b[j]
        coefficients = (_reciprocal_gamma_ratio(psi + ns, psi_next + ns)
                        * np.convolve(coefficients, binomial)[:n_terms])
        psi = psi_next
    return coefficients


def _unit_series(a: np.ndarray, b: np.ndarray, y: float, contour: ContourConfig) -> SeriesResult:
    n_terms = 1 if len(a) == 1 else contour.unit_series_terms
    terms = unit_series_coefficients(a, b, n_terms) * (1.0 - y) ** np.arange(n_terms)
    prefactor = y ** b[-1] * (1.0 - y) ** (float(np.sum(a - b)) - 1.0)
    magnitude = float(np.sum(np.abs(terms)))
    tail = float(np.max(np.abs(terms[-8:])))
    if n_terms > 1 and tail > contour.step_control * magnitude:
        raise ConvergenceError(f'Series of G^{{{len(a)},0}}_{{{len(a)},{len(a)}}} in 1 - y at y={y} did not '
                               f'converge within {n_terms} terms.',
                               partial=SeriesResult(complex(prefactor * np.sum(terms)), prefactor * tail,
                                                    n_terms, False))
    error = prefactor * (tail + np.finfo(float).eps * magnitude) if n_terms > 1 else 0.0
    return SeriesResult(complex(prefactor * np.sum(terms)), abs(error), n_terms, True)


def require_converged(result: SeriesResult, what: str) -> SeriesResult:
    """ Pass a converged result through; an unconverged one raises ConvergenceError """
    if not result.converged:
        raise ConvergenceError(f'{what} did not reach its tolerance after {result.terms_used} terms '
                               f'(error estimate {result.abs_error_estimate:.3e}).', partial=result)
    return result


def meijer_g_q0(spec: MeijerGSpec, x: float, contour: ContourConfig = None) -> SeriesResult:
    """
    G^{q,0}_{p,q}(spec.scale * x | a ; b) from its Mellin-Barnes integral.

    The contour leaves the abscissa c along the rays c + r exp(+-i theta). For real parameters the
    two rays are complex conjugates of each other, hence
        G = (1/pi) int_0^inf Im[ f(c + r e^{i theta}) e^{i theta} ] dr,   f(s) = Prod Gamma(b+s) / Prod Gamma(a+s) y^{-s}.
    With theta = pi/2 this is the vertical line Re(s) = c. For q = p the integrand decays only
    algebraically along that line; bending the rays to the left makes y^{-s} decay exponentially when y < 1,
    and G vanishes identically for y >= 1.
    Near y = 1 the bent rays decay only like y^{-s}, so for q = p and y >= unit_series_from (always when
    p = 1) G is summed as its series in 1 - y instead.
    The first panel is [0, im_cutoff]; panels double until one contributes less than step_control / 10 of
    the running value. At most max_evaluations integrand values are spent.
    """
    contour = contour or ContourConfig()
    if not x > 0:
        raise DomainError(f'meijer_g_q0 requires x > 0. Currently:{x}')
    spec = spec.reduced()
    y = spec.scale * x
    if spec.finite_support and y >= 1.0:
        return SeriesResult(complex(0.0), 0.0, 0, True)
    if spec.finite_support and (spec.p == 1 or y >= contour.unit_series_from):
        ordered = _unit_series_order(spec)
        if ordered is not None:
            return _unit_series(*ordered, y, contour)
    c = contour_abscissa(spec, y, contour)
    if contour.angle is not None:
        theta = contour.angle
    else:
        theta = math.pi / 2 if spec.q > spec.p else 3 * math.pi / 4
    integrand = _mellin_barnes_integrand(spec, y, c, theta)

    value, magnitude, error, evaluations, converged = adaptive_legendre(
        integrand, 0.0, contour.im_cutoff, contour.step_control, contour.order, contour.max_depth,
        contour.max_evaluations)
    lower = contour.im_cutoff
    for _ in range(contour.max_doublings):
        upper = 2.0 * lower
        panel, panel_abs, panel_error, panel_evaluations, panel_converged = adaptive_legendre(
            integrand, lower, upper, contour.step_control, contour.order, contour.max_depth,
            contour.max_evaluations - evaluations)
        value += panel
        magnitude += panel_abs
        error += panel_error
        evaluations += panel_evaluations
        converged = converged and panel_converged
        lower = upper
        if panel_abs <= contour.step_control / 10 * max(abs(value), 1e-14 * magnitude):
            if not converged:
                logger.warning(f'Panel rule reached max_depth for G at x={x} with {spec}')
            return SeriesResult(complex(value), error + panel_abs, evaluations, converged)
    raise ConvergenceError(f'Mellin-Barnes tail of G at x={x} did not decay within {contour.max_doublings} '
                           f'doublings of the contour ({spec}).',
                           partial=SeriesResult(complex(value), error, evaluations, False))


def mellin_moment(spec: MeijerGSpec, s: float) -> float:
    """ The exact Mellin transform of spec at real s """
    return spec.mellin(s)
