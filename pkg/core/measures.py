""" Resolution of identity: weight functions omega_m and the moment problem behind them.

The measure d mu = omega_m(|z|^2) d^2z resolves the identity on span{|Psi_{n+m}>} iff the density
W_m = pi N_m^2 omega_m solves the Stieltjes moment problem int_0^inf x^n W_m(x) dx = |K_n^m|^2.
Inverting the Mellin transform of |K_{s-1}^m|^2 gives W_m as a Meijer G^{q,0}_{p,q} function.
"""
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence

import numpy as np
from scipy import integrate

from .exceptions import DomainError, ParameterError
from .specfun import ContourConfig, MeijerGSpec, meijer_g_q0, pfq, require_converged
from .systems import Family, SipSystem, gram_hypergeometric, log_inv_k_sq_array
from .typings import Grid

logger = logging.getLogger(__name__)


class EndpointStrategy(str, Enum):
    power_singularity_split = 'power_singularity_split'
    exponential_tail = 'exponential_tail'
    finite_support = 'finite_support'


@dataclass(frozen=True)
class QuadratureConfig:
    """
    Radial quadrature of the moments int x^k W_m(x) dx.

    epsilon: below it W_m is replaced by its local power law.
    upper_gap: for finite support, the last relative gap before the endpoint, replaced by a (1 - x)^sigma law.
    tail_efoldings: how far past the peak of the highest moment the exponential tail is integrated.
    upper_limit: explicit upper limit; required by power_singularity_split.
    """
    rel_tol: float = 1e-10
    abs_tol: float = 1e-14
    max_subdivisions: int = 2000
    endpoint_strategy: Optional[EndpointStrategy] = None
    epsilon: float = 1e-12
    upper_gap: float = 1e-5
    tail_efoldings: float = 50.0
    upper_limit: Optional[float] = None
    contour: ContourConfig = field(default_factory=ContourConfig)

    def __post_init__(self):
        for name in ('rel_tol', 'abs_tol', 'epsilon', 'upper_gap', 'tail_efoldings'):
            if not getattr(self, name) > 0:
                raise ParameterError(f'{name} must be strictly positive. Currently:{getattr(self, name)}')
        if self.max_subdivisions < 1:
            raise ParameterError(f'max_subdivisions must be at least 1. Currently:{self.max_subdivisions}')
        if self.endpoint_strategy is not None:
            object.__setattr__(self, 'endpoint_strategy', EndpointStrategy(self.endpoint_strategy))


@dataclass(frozen=True)
class MeasureDensity:
    """ W_m(x) = prefactor * G^{q,0}_{p,q}(spec.scale * x | a ; b) """
    prefactor: float
    spec: MeijerGSpec

    def __call__(self, x: float, contour: ContourConfig = None) -> float:
        result = require_converged(meijer_g_q0(self.spec, x, contour), f'G-function of W at x={x}')
        return self.prefactor * result.real

    @property
    def support_end(self) -> float:
        return 1.0 / self.spec.scale if self.spec.finite_support else math.inf

    def moment(self, k: float) -> float:
        """ The exact moment int x^k W dx from the Mellin transform """
        return self.prefactor * self.spec.mellin(k + 1.0)


def measure_density(system: SipSystem, m: int) -> MeasureDensity:
    """ The density W_m with int_0^inf x^n W_m(x) dx = |K_n^m|^2 """
    if m < 0:
        raise ParameterError(f'm must be nonnegative. Currently:{m}')
    if system.family is Family.DType:
        scale = system.c ** 2 / system.gamma
        return MeasureDensity(system.gamma ** -m * scale, MeijerGSpec((m,), (0.0, 0.0), scale))
    if system.family is Family.CType:
        rho = system.rho
        return MeasureDensity(math.gamma(m - rho) * system.gamma ** -m,
                              MeijerGSpec((m, m - rho - 1), (0.0, 0.0)))
    if system.family is Family.AType1:
        rho = system.rho
        prefactor = system.kappa ** (-2 * m) * 2.0 ** (2 * m + 2 * rho - 3) / math.sqrt(math.pi)
        return MeasureDensity(prefactor, MeijerGSpec((m, 2 * m + 2 * rho - 1, 2 * m + 2 * rho - 1),
                                                     (0.0, 0.0, m + 2 * rho - 1, m + rho - 1, m + rho - 0.5),
                                                     0.25))
    nu = system.nu
    return MeasureDensity(system.kappa ** (-2 * m) * math.gamma(2 * m + nu + 1),
                          MeijerGSpec((m, 2 * m + nu, 2 * m + nu), (0.0, 0.0, m + nu)))


def _check_x(system: SipSystem, x: float):
    if not x > 0:
        raise DomainError(f'The weight is defined for x = |z|^2 > 0. Currently:{x}')
    if not x < system.convergence_radius ** 2:
        raise DomainError(f'x={x} lies outside the disc of {system}')


def density(system: SipSystem, m: int, x: float, contour: ContourConfig = None) -> float:
    _check_x(system, x)
    return measure_density(system, m)(x, contour)


def weight(system: SipSystem, m: int, x: float, contour: ContourConfig = None) -> float:
    """
    omega_m(x) = S_m(x) W_m(x) / pi, the hypergeometric normalization side times the Meijer G density.
    """
    _check_x(system, x)
    form = gram_hypergeometric(system, m)
    series = require_converged(pfq(form.a, form.b, form.arg_scale * x), f'Normalization series at x={x}')
    return math.exp(form.log_prefactor) * series.real * measure_density(system, m)(x, contour) / math.pi


def default_strategy(system: SipSystem) -> EndpointStrategy:
    if system.family in (Family.DType, Family.AType1):
        return EndpointStrategy.exponential_tail
    return EndpointStrategy.finite_support


def default_weight_grid(system: SipSystem, count: int = 200) -> np.ndarray:
    """ Values of x = |z|^2 on which weights are scanned and tabulated """
    if system.family is Family.DType:
        return np.linspace(0.01, 10.0, count)
    if system.family is Family.AType1:
        return np.linspace(0.01, 30.0, count)
    return np.linspace(0.005, 0.995, count)


def weight_positivity_scan(system: SipSystem, m: int, grid: Grid = None, contour: ContourConfig = None) -> float:
    """ min omega_m over the grid; negative values expose parameter ranges without a positive measure """
    grid = default_weight_grid(system) if grid is None else grid
    return min(weight(system, m, float(x), contour) for x in grid)


def _near_zero_panel(w_of_x, epsilon: float, orders: np.ndarray) -> np.ndarray:
    """ int_0^epsilon x^k W dx with W ~ A x^beta fitted at epsilon and epsilon/2 """
    at_epsilon, at_half = w_of_x(epsilon), w_of_x(epsilon / 2)
    if at_epsilon > 0 and at_half > 0:
        beta = math.log(at_epsilon / at_half) / math.log(2.0)
    else:
        beta = 0.0
    if beta <= -1:
        raise DomainError(f'The density behaves like x^{beta:.3f} at the origin and has no moments.')
    return at_epsilon * epsilon / (orders + beta + 1.0) * epsilon ** orders


def _log_variable_panel(w_of_x, lower: float, upper: float, orders: np.ndarray, log_scales: np.ndarray,
                        quad: QuadratureConfig) -> np.ndarray:
    """ int_lower^upper x^k W dx / e^{log_scales} with x = e^u """

    def integrand(u: float) -> np.ndarray:
        return np.exp((orders + 1.0) * u - log_scales) * w_of_x(math.exp(u))

    value, _ = integrate.quad_vec(integrand, math.log(lower), math.log(upper), epsabs=quad.abs_tol,
                                  epsrel=quad.rel_tol, norm='max', limit=quad.max_subdivisions)
    return value


def _linear_panel(w_of_x, lower: float, upper: float, orders: np.ndarray, log_scales: np.ndarray,
                  quad: QuadratureConfig) -> np.ndarray:
    def integrand(x: float) -> np.ndarray:
        return np.exp(orders * math.log(x) - log_scales) * w_of_x(x)

    value, _ = integrate.quad_vec(integrand, lower, upper, epsabs=quad.abs_tol, epsrel=quad.rel_tol,
                                  norm='max', limit=quad.max_subdivisions)
    return value


def _exponential_upper_limit(spec: MeijerGSpec, k_max: int, quad: QuadratureConfig) -> float:
    """ Beyond this x the integrand of the highest moment has decayed by tail_efoldings e-folds """
    spread = spec.q - spec.p
    t_max = k_max + 1 + abs(sum(spec.b_params) - sum(spec.a_params)) + quad.tail_efoldings / spread
    return t_max ** spread / spec.scale


def _finite_support_upper(w_of_x, end: float, spec: MeijerGSpec, orders: np.ndarray, log_scales: np.ndarray,
                          quad: QuadratureConfig) -> np.ndarray:
    """ int_{end/2}^{end} x^k W dx: substitution x = end (1 - e^{-t}) and a (end - x)^sigma endpoint panel """
    sigma = sum(spec.a_params) - sum(spec.b_params) - 1.0
    if sigma <= -1:
        raise DomainError(f'The density behaves like (1 - x)^{sigma:g} at the end of its support and '
                          f'is not integrable.')
    gap = quad.upper_gap

    def integrand(t: float) -> np.ndarray:
        x = end * (1.0 - math.exp(-t))
        return np.exp(orders * math.log(x) - log_scales) * w_of_x(x) * end * math.exp(-t)

    body, _ = integrate.quad_vec(integrand, math.log(2.0), math.log(1.0 / gap), epsabs=quad.abs_tol,
                                 epsrel=quad.rel_tol, norm='max', limit=quad.max_subdivisions)
    last = end * (1.0 - gap)
    endpoint = (w_of_x(last) * end * gap / (sigma + 1.0)
                * np.exp(orders * math.log(end * (1.0 - gap / 2)) - log_scales))
    return body + endpoint


def moment_integrals(system: SipSystem, m: int, orders: Sequence[int],
                     quad: QuadratureConfig = QuadratureConfig()) -> np.ndarray:
    """
    M_k = int_0^inf x^k W_m(x) dx for every k in orders, all moments in one vector quadrature.
    Each component is integrated relative to |K_k^m|^2 so that low and high orders keep the same
    relative accuracy.
    """
    orders = np.asarray(orders, dtype=float)
    if orders.size == 0:
        return np.zeros(0)
    dens = measure_density(system, m)
    spec = dens.spec.reduced()
    strategy = quad.endpoint_strategy or default_strategy(system)

    def w_of_x(x: float) -> float:
        return dens.prefactor * require_converged(meijer_g_q0(spec, x, quad.contour), f'G-function at x={x}').real

    log_scales = -log_inv_k_sq_array(system, orders, m)
    k_max = int(orders.max())
    scaled = _near_zero_panel(w_of_x, quad.epsilon, orders) * np.exp(-log_scales)

    if strategy is EndpointStrategy.finite_support:
        end = dens.support_end
        if not math.isfinite(end):
            raise ParameterError(f'finite_support needs a density with bounded support, not {system}')
        scaled += _log_variable_panel(w_of_x, quad.epsilon, end / 2, orders, log_scales, quad)
        scaled += _finite_support_upper(w_of_x, end, spec, orders, log_scales, quad)
    elif strategy is EndpointStrategy.exponential_tail:
        if spec.finite_support:
            raise ParameterError(f'exponential_tail needs a density on (0, inf), not {system}')
        upper = quad.upper_limit or _exponential_upper_limit(spec, k_max, quad)
        logger.debug(f'Moments of {system}, m={m} integrated up to x={upper:.4g}')
        scaled += _log_variable_panel(w_of_x, quad.epsilon, upper, orders, log_scales, quad)
    else:
        upper = quad.upper_limit or dens.support_end
        if not math.isfinite(upper):
            raise ParameterError('power_singularity_split needs upper_limit for a density on (0, inf).')
        split = min(1.0, upper / 2)
        scaled += _log_variable_panel(w_of_x, quad.epsilon, split, orders, log_scales, quad)
        scaled += _linear_panel(w_of_x, split, upper, orders, log_scales, quad)
    return scaled * np.exp(log_scales)


def moment_residuals(system: SipSystem, m: int, orders: Sequence[int],
                     quad: QuadratureConfig = QuadratureConfig()) -> np.ndarray:
    """ |M_k - |K_k^m|^2| / |K_k^m|^2 for every k in orders """
    orders = np.asarray(orders, dtype=float)
    moments = moment_integrals(system, m, orders, quad)
    expected = np.exp(-log_inv_k_sq_array(system, orders, m))
    return np.abs(moments - expected) / expected


def moment_check(system: SipSystem, m: int, n: int, quad: QuadratureConfig = QuadratureConfig()) -> float:
    return float(moment_residuals(system, m, [n], quad)[0])


def closed_weight_m0(system: SipSystem, x: float) -> float:
    """ omega_0 in elementary functions; A-type-1 only at rho = 1/2, kappa = 1 """
    _check_x(system, x)
    if system.family is Family.DType:
        return system.c ** 2 / (math.pi * system.gamma)
    if system.family is Family.CType:
        return -(1 + system.rho) * (1 - x) ** -2 / math.pi
    if system.family is Family.AType2:
        return system.nu * (1 - x) ** -2 / math.pi
    if not (math.isclose(system.rho, 0.5) and math.isclose(system.kappa, 1.0)):
        raise ParameterError(f'No elementary m=0 weight is known for {system}')
    root = math.sqrt(x)
    return math.cosh(root) * math.exp(-root) / (2 * math.pi * root)
