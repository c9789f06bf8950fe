""" Photon-added coherent states |z; m> = N_m(|z|^2) sum_n z^n / K_n^m |Psi_{n+m}>

The Gram series S_m(w) = sum_n w^n / |K_n^m|^2, the normalization N_m = S_m^{-1/2}, overlaps and the
reproducing kernel. Series are summed in vectorised blocks from log-space terms.
"""
import cmath
import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .exceptions import ConvergenceError, DivergenceError, DomainError, ParameterError
from .specfun import SeriesResult, pfq
from .systems import (PacsPoint, SipSystem, energy, gram_hypergeometric, k_phase_angle, log_abs_k_coeff,
                      log_inv_k_sq_array)

logger = logging.getLogger(__name__)

LOG_OVERFLOW = 709.0


@dataclass(frozen=True)
class TruncationPolicy:
    tol: float = 1e-15
    max_terms: int = 200_000
    block: int = 64

    def __post_init__(self):
        if not self.tol > 0:
            raise ParameterError(f'tol must be strictly positive. Currently:{self.tol}')
        if self.max_terms < 1:
            raise ParameterError(f'max_terms must be at least 1. Currently:{self.max_terms}')
        if self.block < 4:
            raise ParameterError(f'block must hold at least 4 terms. Currently:{self.block}')


def _monotone_from(system: SipSystem, m: int) -> float:
    form = gram_hypergeometric(system, m)
    return max(abs(v) for v in form.a + form.b) + 1.0


def _limit_ratio(system: SipSystem, w_abs: float) -> float:
    return w_abs / system.convergence_radius ** 2 if math.isfinite(system.convergence_radius) else 0.0


def _check_argument(system: SipSystem, w_abs: float):
    if not w_abs < system.convergence_radius ** 2:
        raise DivergenceError(f'|w|={w_abs} reaches the radius of convergence {system.convergence_radius ** 2} '
                              f'of {system}')


def _sum_log_series(log_abs_terms: Callable[[np.ndarray], np.ndarray],
                    angles: Optional[Callable[[np.ndarray], np.ndarray]],
                    limit_ratio: float, monotone_from: float, trunc: TruncationPolicy) -> SeriesResult:
    """
    sum_n exp(log_abs_terms(n) + i angles(n)), block by block.
    After each block the remainder is bounded from the last two term ratios as in pfq.
    """
    total = complex(0.0)
    used = 0
    tail = math.inf
    while used < trunc.max_terms:
        size = min(trunc.block, trunc.max_terms - used)
        ns = np.arange(used, used + size)
        log_t = log_abs_terms(ns)
        if np.any(log_t > LOG_OVERFLOW):
            raise DivergenceError(f'Series terms overflow double precision near n={int(ns[np.argmax(log_t)])}')
        terms = np.exp(log_t)
        if angles is not None:
            terms = terms * np.exp(1j * angles(ns))
        total += terms.sum()
        used += size
        if size < 3 or used < monotone_from:
            continue
        with np.errstate(invalid='ignore'):
            ratio = math.exp(log_t[-1] - log_t[-2]) if np.isfinite(log_t[-2]) else math.inf
            previous = math.exp(log_t[-2] - log_t[-3]) if np.isfinite(log_t[-3]) else math.inf
        if ratio <= previous or ratio <= limit_ratio:
            bound = max(ratio, limit_ratio)
            if bound < 1.0:
                tail = math.exp(log_t[-1]) * bound / (1.0 - bound)
                if tail <= trunc.tol * abs(total):
                    return SeriesResult(total, tail, used, True)
    logger.debug(f'Series stopped at the budget of {trunc.max_terms} terms with tail bound {tail:.3e}')
    return SeriesResult(total, tail, used, False)


def _weighted_series(system: SipSystem, m: int, w: complex, power: int, trunc: TruncationPolicy) -> SeriesResult:
    w = complex(w)
    w_abs = abs(w)
    _check_argument(system, w_abs)
    if w == 0:
        value = math.exp(float(log_inv_k_sq_array(system, [0], m)[0])) * energy(system, m) ** power
        return SeriesResult(complex(value), 0.0, 1, True)
    log_w, arg_w = math.log(w_abs), cmath.phase(w)

    def log_abs_terms(ns: np.ndarray) -> np.ndarray:
        log_t = log_inv_k_sq_array(system, ns, m) + ns * log_w
        if power:
            with np.errstate(divide='ignore'):
                log_t = log_t + power * np.log(energy(system, ns + m))
        return log_t

    angles = (lambda ns: ns * arg_w) if arg_w != 0 else None
    return _sum_log_series(log_abs_terms, angles, _limit_ratio(system, w_abs),
                           _monotone_from(system, m) + power, trunc)


def gram_series(system: SipSystem, m: int, w: complex, trunc: TruncationPolicy = TruncationPolicy()) -> SeriesResult:
    """ S_m(w) = sum_n w^n / |K_n^m|^2 """
    return _weighted_series(system, m, w, 0, trunc)


def energy_series(system: SipSystem, m: int, x: float, power: int,
                  trunc: TruncationPolicy = TruncationPolicy()) -> SeriesResult:
    """ sum_n E_{n+m}^power x^n / |K_n^m|^2, so that <N^power> = energy_series / gram_series """
    return _weighted_series(system, m, x, power, trunc)


def gram_closed(system: SipSystem, m: int, x: float) -> SeriesResult:
    """ S_m(x) through its hypergeometric form """
    form = gram_hypergeometric(system, m)
    _check_argument(system, abs(x))
    result = pfq(form.a, form.b, form.arg_scale * x)
    if not result.converged:
        raise ConvergenceError(f'pFq of the Gram series did not converge at x={x}', partial=result)
    prefactor = math.exp(form.log_prefactor)
    return SeriesResult(prefactor * result.value, prefactor * result.abs_error_estimate, result.terms_used, True)


def normalization(system: SipSystem, m: int, x: float, method: str = 'series',
                  trunc: TruncationPolicy = TruncationPolicy()) -> float:
    """
    N_m(x) = S_m(x)^{-1/2} with x = |z|^2.
    :param method: 'series' (direct sum of the coefficients) or 'closed' (hypergeometric form)
    """
    if x < 0:
        raise DomainError(f'normalization takes x = |z|^2 >= 0. Currently:{x}')
    if method == 'series':
        result = gram_series(system, m, x, trunc)
        if not result.converged:
            raise ConvergenceError(f'Gram series of {system}, m={m} did not converge at x={x}', partial=result)
    elif method == 'closed':
        result = gram_closed(system, m, x)
    else:
        raise ParameterError(f'Unknown method:{method}. Expected series or closed')
    return result.real ** -0.5


def state_coefficient(point: PacsPoint, n: int) -> complex:
    """ Amplitude of |Psi_{n+m}> in |z; m> """
    if n < 0:
        raise ParameterError(f'n must be nonnegative. Currently:{n}')
    norm = normalization(point.system, point.m, point.x)
    if point.z == 0:
        return complex(norm * math.exp(-log_abs_k_coeff(point.system, 0, point.m))) if n == 0 else 0j
    log_abs = math.log(norm) + n * math.log(abs(point.z)) - log_abs_k_coeff(point.system, n, point.m)
    angle = n * cmath.phase(point.z) - float(k_phase_angle(point.system, n))
    return cmath.exp(complex(log_abs, angle))


def fock_amplitude(point: PacsPoint, j: int) -> complex:
    """ <Psi_j | z; m>; the lowest m levels are empty """
    return 0j if j < point.m else state_coefficient(point, j - point.m)


def fock_distribution(point: PacsPoint, n_max: int) -> np.ndarray:
    """ |<Psi_j | z; m>|^2 for j = 0..n_max """
    probabilities = np.zeros(n_max + 1)
    if n_max < point.m:
        return probabilities
    ks = np.arange(n_max - point.m + 1)
    log_norm_sq = 2.0 * math.log(normalization(point.system, point.m, point.x))
    if point.z == 0:
        probabilities[point.m] = 1.0
        return probabilities
    probabilities[point.m:] = np.exp(log_norm_sq + ks * math.log(point.x)
                                     + log_inv_k_sq_array(point.system, ks, point.m))
    return probabilities


def inner_product(system: SipSystem, z1: complex, m1: int, z2: complex, m2: int,
                  trunc: TruncationPolicy = TruncationPolicy()) -> complex:
    """
    <z2; m2 | z1; m1>. For m1 >= m2 the overlap is
        N1 N2 conj(z2)^(m1-m2) sum_n (conj(z2) z1)^n / (conj(K_{n+m1-m2}^{m2}) K_n^{m1}),
    otherwise it is the complex conjugate of the swapped overlap.
    """
    if m1 < m2:
        return inner_product(system, z2, m2, z1, m1, trunc).conjugate()
    z1, z2 = complex(z1), complex(z2)
    for z in (z1, z2):
        if not abs(z) < system.convergence_radius:
            raise DomainError(f'|z|={abs(z)} lies outside the disc of radius {system.convergence_radius}')
    shift = m1 - m2
    norms = normalization(system, m1, abs(z1) ** 2, trunc=trunc) * normalization(system, m2, abs(z2) ** 2,
                                                                                  trunc=trunc)
    if shift > 0 and z2 == 0:
        return 0j
    w = z2.conjugate() * z1
    if w == 0:
        term = z2.conjugate() ** shift * cmath.exp(1j * float(k_phase_angle(system, shift)))
        return norms * term * math.exp(-log_abs_k_coeff(system, shift, m2) - log_abs_k_coeff(system, 0, m1))
    _check_argument(system, abs(w))
    log_w, arg_w = math.log(abs(w)), cmath.phase(w)
    log_shift = shift * math.log(abs(z2)) if shift else 0.0
    arg_shift = -shift * cmath.phase(z2)

    def log_abs_terms(ns: np.ndarray) -> np.ndarray:
        return (0.5 * log_inv_k_sq_array(system, ns + shift, m2) + 0.5 * log_inv_k_sq_array(system, ns, m1)
                + ns * log_w + log_shift)

    def angles(ns: np.ndarray) -> np.ndarray:
        return ns * arg_w + arg_shift + k_phase_angle(system, ns + shift) - k_phase_angle(system, ns)

    monotone_from = max(_monotone_from(system, m1), _monotone_from(system, m2))
    result = _sum_log_series(log_abs_terms, angles, _limit_ratio(system, abs(w)), monotone_from, trunc)
    if not result.converged:
        raise ConvergenceError(f'Overlap series of {system} did not converge for z1={z1}, z2={z2}', partial=result)
    return norms * result.value


def kernel(system: SipSystem, m: int, z: complex, zp: complex,
           trunc: TruncationPolicy = TruncationPolicy()) -> complex:
    """ The reproducing kernel K(z, z') = N_m(|z'|^2) N_m(|z|^2) S_m(conj(z) z') = <z; m | z'; m> """
    return inner_product(system, zp, m, z, m, trunc)


def kernel_idempotence_check(system: SipSystem, m: int, z: complex, zp: complex, quad=None) -> float:
    """
    Relative residual of int K(z, u) K(u, z') d mu(u) against K(z, z').
    The angular integral is done analytically, leaving
        N N' sum_k (conj(z) z')^k M_k / |K_k^m|^4
    with the radial moments M_k of the measure computed by quadrature.
    """
    from .measures import QuadratureConfig, moment_integrals

    quad = quad or QuadratureConfig()
    z, zp = complex(z), complex(zp)
    w = z.conjugate() * zp
    reference = kernel(system, m, z, zp)
    orders = np.arange(gram_series(system, m, abs(w)).terms_used)
    moments = moment_integrals(system, m, orders, quad)
    log_inv = log_inv_k_sq_array(system, orders, m)
    powers = np.zeros(len(orders), dtype=complex)
    powers[0] = 1.0
    if w != 0:
        powers = np.exp(orders * cmath.log(w))
    series = np.sum(np.exp(2 * log_inv) * moments * powers)
    norms = normalization(system, m, abs(z) ** 2) * normalization(system, m, abs(zp) ** 2)
    reproduced = norms * series
    residual = abs(reproduced - reference) / abs(reference)
    logger.debug(f'Idempotence of the kernel of {system}, m={m} at ({z}, {zp}): residual {residual:.3e} '
                 f'with {len(orders)} moments')
    return residual
