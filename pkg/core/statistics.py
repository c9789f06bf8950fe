""" Photon statistics of |z; m>: number distribution, <N>, <N^2>, Mandel Q and g^2.

N is the number operator of the system, N |Psi_n> = E_n |Psi_n>. Every quantity comes in a generic
form (series over the coefficients K_n^m) and a closed hypergeometric form.
"""
import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize, special

from .exceptions import ConvergenceError, DomainError, ParameterError, UndefinedStatisticError
from .specfun import pfq, require_converged
from .states import energy_series, fock_distribution, gram_series
from .systems import Family, PacsPoint, SipSystem, energy, gram_hypergeometric

logger = logging.getLogger(__name__)

METHODS = ('generic', 'closed')


@dataclass(frozen=True)
class StatsReport:
    mean_n: float
    mean_n2: float
    mandel_q: float
    g2: float
    method: str

    def as_dict(self) -> dict:
        return {'<N>': self.mean_n, '<N^2>': self.mean_n2, 'Q': self.mandel_q, 'g2': self.g2,
                'method': self.method}


def _check_method(method: str):
    if method not in METHODS:
        raise ParameterError(f'Unknown method:{method}. Expected one of {METHODS}')


def _closed_lists(system: SipSystem, m: int, power: int):
    """
    Upper and lower parameters of the series F_next (power=1) and F_next2 (power=2) with
    <N^power> = E_m^power F_next(power) / F.
    """
    rho, nu = system.rho, system.nu
    if system.family is Family.DType:
        lists = {1: ((m + 1, m + 1), (1, m)),
                 2: ((m + 1, m + 1, m + 1), (1, m, m))}
    elif system.family is Family.CType:
        lists = {1: ((m - rho, m + 1, m + 1), (1, m)),
                 2: ((m - rho, m + 1, m + 1, m + 1), (1, m, m))}
    elif system.family is Family.AType1:
        lists = {1: ((m + 1, m + 1, 2 * m + 2 * rho, 2 * m + 2 * rho, m + 1 + 2 * rho),
                     (1, m, m + rho, m + 2 * rho, m + 2 * rho, m + rho + 0.5)),
                 2: ((m + 1, m + 1, m + 1, 2 * m + 2 * rho, 2 * m + 2 * rho, m + 1 + 2 * rho, m + 1 + 2 * rho),
                     (1, m, m, m + rho, m + 2 * rho, m + 2 * rho, m + 2 * rho, m + rho + 0.5))}
    else:
        lists = {1: ((m + 1, m + 1, 2 * m + nu + 1, 2 * m + nu + 1, m + nu + 2), (1, m, m + nu + 1, m + nu + 1)),
                 2: ((m + 1, m + 1, m + 1, 2 * m + nu + 1, 2 * m + nu + 1, m + nu + 2, m + nu + 2),
                     (1, m, m, m + nu + 1, m + nu + 1, m + nu + 1))}
    return lists[power]


def _closed_moment(point: PacsPoint, power: int) -> float:
    system, m = point.system, point.m
    if m == 0:
        raise ParameterError('The closed photon statistics have a lower parameter m and need m >= 1; '
                             'use the generic method at m = 0.')
    form = gram_hypergeometric(system, m)
    w = form.arg_scale * point.x
    upper, lower = _closed_lists(system, m, power)
    numerator, denominator = pfq(upper, lower, w), pfq(form.a, form.b, w)
    for result in (numerator, denominator):
        if not result.converged:
            raise ConvergenceError(f'Closed statistics series did not converge at |z|^2={point.x}', partial=result)
    return energy(system, m) ** power * numerator.real / denominator.real


def _generic_moment(point: PacsPoint, power: int) -> float:
    system, m = point.system, point.m
    numerator = energy_series(system, m, point.x, power)
    denominator = gram_series(system, m, point.x)
    for result in (numerator, denominator):
        if not result.converged:
            raise ConvergenceError(f'Statistics series did not converge at |z|^2={point.x}', partial=result)
    return numerator.real / denominator.real


def _log_closed_pnd(system: SipSystem, n: int, m: int, x: float) -> float:
    """ log P_n without the 1/F factor of the Gram series """
    k = n - m
    lg = special.gammaln
    if system.family is Family.DType:
        return lg(n + 1) - lg(m + 1) + k * math.log(system.c ** 2 * x / system.gamma) - 2 * lg(k + 1)
    if system.family is Family.CType:
        rho = system.rho
        return lg(n + 1) + lg(n - rho) - lg(m - rho) - lg(m + 1) + k * math.log(x) - 2 * lg(k + 1)
    if system.family is Family.AType1:
        rho = system.rho
        return (lg(n + 1) + 2 * lg(n + m + 2 * rho) + lg(m + 2 * rho) + k * math.log(x)
                - 2 * lg(k + 1) - lg(2 * n + 2 * rho) - lg(n + 2 * rho) - lg(m + 1) - lg(2 * m + 2 * rho))
    nu = system.nu
    return (lg(n + 1) + 2 * lg(n + m + nu + 1) + lg(m + nu + 1) + k * math.log(x)
            - 2 * lg(k + 1) - lg(n + nu + 1) - 2 * lg(2 * m + nu + 1) - lg(m + 1))


def pnd(point: PacsPoint, n: int, method: str = 'generic') -> float:
    """ Photon number distribution P_n = |<Psi_n | z; m>|^2, zero for n < m """
    _check_method(method)
    if n < point.m:
        return 0.0
    if method == 'generic':
        return float(fock_distribution(point, n)[n])
    if point.x == 0:
        return 1.0 if n == point.m else 0.0
    form = gram_hypergeometric(point.system, point.m)
    series = require_converged(pfq(form.a, form.b, form.arg_scale * point.x),
                               f'Normalization series of the closed PND at |z|^2={point.x}')
    return math.exp(_log_closed_pnd(point.system, n, point.m, point.x)) / series.real


def pnd_table(point: PacsPoint, n_max: int, method: str = 'generic') -> np.ndarray:
    """ P_0 .. P_{n_max} """
    _check_method(method)
    if method == 'generic':
        return fock_distribution(point, n_max)
    return np.array([pnd(point, n, method) for n in range(n_max + 1)])


def mean_n(point: PacsPoint, method: str = 'generic') -> float:
    _check_method(method)
    return _generic_moment(point, 1) if method == 'generic' else _closed_moment(point, 1)


def mean_n2(point: PacsPoint, method: str = 'generic') -> float:
    _check_method(method)
    return _generic_moment(point, 2) if method == 'generic' else _closed_moment(point, 2)


def _moments(point: PacsPoint, method: str):
    first, second = mean_n(point, method), mean_n2(point, method)
    if first == 0:
        raise UndefinedStatisticError(f'<N> = 0 for m={point.m} at z={point.z}: Q and g2 are undefined.')
    return first, second


def mandel_q(point: PacsPoint, method: str = 'generic') -> float:
    """ Q = (<N^2> - <N>^2) / <N> - 1; negative values are sub-Poissonian """
    first, second = _moments(point, method)
    return (second - first ** 2) / first - 1.0


def g2(point: PacsPoint, method: str = 'generic') -> float:
    """ g^2(0) = (<N^2> - <N>) / <N>^2 """
    first, second = _moments(point, method)
    return (second - first) / first ** 2


def stats_report(point: PacsPoint, method: str = 'generic') -> StatsReport:
    first, second = _moments(point, method)
    assert second >= first ** 2 * (1 - 1e-12), f'Negative variance of N at {point}'
    return StatsReport(first, second, (second - first ** 2) / first - 1.0, (second - first) / first ** 2, method)


def poissonian_crossing(system: SipSystem, m: int, lower: float, upper: float, method: str = 'generic',
                        xtol: float = 1e-12) -> float:
    """
    The amplitude |z_0| in (lower, upper) where Q changes sign, i.e. where the statistics pass from
    sub- to super-Poissonian.
    """

    def q_at(r: float) -> float:
        return mandel_q(PacsPoint(r, m, system), method)

    at_lower, at_upper = q_at(lower), q_at(upper)
    if at_lower * at_upper > 0:
        raise DomainError(f'Q has the same sign at |z|={lower} ({at_lower:.3e}) and |z|={upper} '
                          f'({at_upper:.3e}) for {system}, m={m}')
    root = optimize.brentq(q_at, lower, upper, xtol=xtol)
    logger.info(f'Poissonian crossing of {system}, m={m} at |z|={root:.12g}')
    return root
