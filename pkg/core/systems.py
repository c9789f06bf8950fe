""" Shape-invariant systems and the expansion coefficients K_n^m of their photon-added coherent states.

A system is fixed by its family and parameters. Everything the states need from it is the remainder
sequence R(k), the energies E_n = R(1) + ... + R(n) and the factorization functions Z_k, from which
K_n^m follows either as a literal product of partial sums or in a closed Gamma form.
"""
import cmath
import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

import numpy as np
from scipy import special

from .exceptions import DomainError, ParameterError
from .typings import Grid

logger = logging.getLogger(__name__)

# Above this N = n + m the raw products are accumulated as sums of logarithms.
RAW_DIRECT_PRODUCT_LIMIT = 30


class Family(str, Enum):
    DType = 'D'
    CType = 'C'
    AType1 = 'A1'
    AType2 = 'A2'

    @classmethod
    def parse(cls, name: str) -> 'Family':
        aliases = {'d': cls.DType, 'dtype': cls.DType, 'c': cls.CType, 'ctype': cls.CType,
                   'a1': cls.AType1, 'atype1': cls.AType1, 'a2': cls.AType2, 'atype2': cls.AType2}
        try:
            return aliases[str(name).strip().lower().replace('-', '').replace('_', '')]
        except KeyError:
            raise ParameterError(f'Unknown system family:{name}. Expected one of D, C, A1, A2')


@dataclass(frozen=True)
class SipSystem:
    """
    A shape-invariant system of family D, C, A-1 or A-2.

    strict=True additionally enforces the parameter ranges in which the resolution of identity has a
    positive weight (rho < -1 for C, nu > 0 for A-2). Non-strict systems only need the states to exist.
    """
    family: Family
    gamma: float = 1.0
    c: float = 1.0
    rho: Optional[float] = None
    nu: float = 1.0
    kappa: float = 1.0
    alpha: float = 0.0
    strict: bool = True

    def __post_init__(self):
        object.__setattr__(self, 'family', Family.parse(self.family) if not isinstance(self.family, Family)
                           else self.family)
        if self.family in (Family.DType, Family.CType) and not self.gamma > 0:
            raise ParameterError(f'gamma must be strictly positive. Currently:{self.gamma}')
        if self.family is Family.DType and self.c == 0:
            raise ParameterError('c must be nonzero for a D-type system.')
        if self.family in (Family.AType1, Family.AType2) and not self.kappa > 0:
            raise ParameterError(f'kappa must be strictly positive. Currently:{self.kappa}')
        if self.family is Family.CType:
            if self.rho is None or not self.rho < 0:
                raise ParameterError(f'C-type systems need rho < 0. Currently:{self.rho}')
            if self.strict and not self.rho < -1:
                raise ParameterError(f'The C-type measure is positive only for rho < -1. Currently:{self.rho}')
        if self.family is Family.AType1 and (self.rho is None or not self.rho > 0):
            raise ParameterError(f'A-type-1 systems need rho > 0. Currently:{self.rho}')
        if self.family is Family.AType2:
            if not self.nu > -1:
                raise ParameterError(f'A-type-2 systems need nu > -1. Currently:{self.nu}')
            if self.strict and not self.nu > 0:
                raise ParameterError(f'The A-type-2 measure is positive only for nu > 0. Currently:{self.nu}')
        if not self.measure_is_positive:
            logger.warning(f'{self} lies outside the range of a positive resolution of identity.')

    @classmethod
    def d_type(cls, gamma: float = 1.0, c: float = 1.0, alpha: float = 0.0) -> 'SipSystem':
        return cls(Family.DType, gamma=gamma, c=c, alpha=alpha)

    @classmethod
    def c_type(cls, rho: float, gamma: float = 1.0, alpha: float = 0.0, strict: bool = True) -> 'SipSystem':
        return cls(Family.CType, gamma=gamma, rho=rho, alpha=alpha, strict=strict)

    @classmethod
    def a_type1(cls, rho: float, kappa: float = 1.0, alpha: float = 0.0) -> 'SipSystem':
        return cls(Family.AType1, rho=rho, kappa=kappa, alpha=alpha)

    @classmethod
    def a_type2(cls, nu: float, kappa: float = 1.0, alpha: float = 0.0, strict: bool = True) -> 'SipSystem':
        return cls(Family.AType2, nu=nu, kappa=kappa, alpha=alpha, strict=strict)

    @property
    def effective_rho(self) -> Optional[float]:
        if self.family is Family.AType2:
            return self.nu / 2 + 0.5
        return self.rho

    @property
    def convergence_radius(self) -> float:
        """ Radius of the disc of amplitudes z for which the states are normalizable """
        return math.inf if self.family in (Family.DType, Family.AType1) else 1.0

    @property
    def measure_is_positive(self) -> bool:
        if self.family is Family.CType:
            return self.rho < -1
        if self.family is Family.AType2:
            return self.nu > 0
        return True

    def __str__(self):
        if self.family is Family.DType:
            return f'DType(gamma={self.gamma}, c={self.c}, alpha={self.alpha})'
        if self.family is Family.CType:
            return f'CType(rho={self.rho}, gamma={self.gamma}, alpha={self.alpha})'
        if self.family is Family.AType1:
            return f'AType1(rho={self.rho}, kappa={self.kappa}, alpha={self.alpha})'
        return f'AType2(nu={self.nu}, kappa={self.kappa}, alpha={self.alpha})'


@dataclass(frozen=True)
class PacsPoint:
    """ The state |z; m> of a system """
    z: complex
    m: int
    system: SipSystem

    def __post_init__(self):
        if isinstance(self.m, bool) or int(self.m) != self.m or self.m < 0:
            raise ParameterError(f'm must be a nonnegative integer. Currently:{self.m}')
        object.__setattr__(self, 'm', int(self.m))
        object.__setattr__(self, 'z', complex(self.z))
        if not abs(self.z) < self.system.convergence_radius:
            raise DomainError(f'|z|={abs(self.z)} lies outside the disc of radius '
                              f'{self.system.convergence_radius} of {self.system}')

    @property
    def x(self) -> float:
        return abs(self.z) ** 2


@dataclass(frozen=True)
class HypergeometricForm:
    """ S(w) = exp(log_prefactor) * pFq(a; b; arg_scale * w) """
    log_prefactor: float
    a: Tuple[float, ...]
    b: Tuple[float, ...]
    arg_scale: float = 1.0


def remainder(system: SipSystem, k: int) -> float:
    """ The remainder R(a_k) of the shape-invariance condition, k >= 1 """
    if k < 1:
        raise ParameterError(f'remainder is defined for k >= 1. Currently:{k}')
    if system.family in (Family.DType, Family.CType):
        return system.gamma
    if system.family is Family.AType1:
        return system.kappa ** 2 * (2 * system.rho + 2 * k - 1)
    return system.kappa ** 2 * (system.nu + 2 * k)


def energy(system: SipSystem, n):
    """ E_n, closed form; works elementwise on integer arrays """
    if system.family in (Family.DType, Family.CType):
        return n * system.gamma
    if system.family is Family.AType1:
        return system.kappa ** 2 * n * (n + 2 * system.rho)
    return system.kappa ** 2 * n * (n + system.nu + 1)


def _gammaln(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise DomainError(f'Nonpositive Gamma argument {float(np.min(x))} in the coefficient of a PA-SIPCS.')
    return special.gammaln(x)


def _log_abs_k_closed(system: SipSystem, n: np.ndarray, m: int) -> np.ndarray:
    n = np.asarray(n, dtype=float)
    lg = _gammaln
    if system.family is Family.DType:
        return (0.5 * (n - m) * math.log(system.gamma) + lg(n + 1) - n * math.log(abs(system.c))
                - 0.5 * lg(n + m + 1))
    if system.family is Family.CType:
        rho = system.rho
        return 0.5 * (lg(m - rho) + 2 * lg(n + 1) - m * math.log(system.gamma) - lg(n + m - rho)
                      - lg(n + m + 1))
    if system.family is Family.AType1:
        rho = system.rho
        return -m * math.log(system.kappa) + 0.5 * (2 * lg(n + 1) + lg(2 * n + 2 * m + 2 * rho)
                                                    + lg(n + m + 2 * rho) - lg(n + m + 1)
                                                    - 2 * lg(n + 2 * m + 2 * rho))
    nu = system.nu
    return 0.5 * (-2 * m * math.log(system.kappa) + 2 * lg(n + 1) + lg(n + m + nu + 1) + lg(2 * m + nu + 1)
                  - lg(n + m + 1) - 2 * lg(n + 2 * m + nu + 1))


def _functional_factor(system: SipSystem, k: int, m: int) -> complex:
    """ Z_k of the product Z_m Z_{m+1} ... Z_{n+m-1} that accompanies B_+^m """
    if system.family is Family.DType:
        return complex(system.c)
    if system.family is Family.CType:
        return math.sqrt(system.gamma * (k - system.rho)) * cmath.exp(-1j * system.alpha * system.gamma)
    if system.family is Family.AType1:
        return complex(system.kappa)
    nu = system.nu
    return (system.kappa * math.sqrt((2 * k + nu + 1) * (2 * k + nu + 2))
            * cmath.exp(-1j * system.alpha * remainder(system, k - m + 1)))


def _k_coeff_raw(system: SipSystem, n: int, m: int) -> complex:
    """ K_n^m from the literal partial-sum products """
    top = n + m
    remainders = np.array([remainder(system, s) for s in range(1, top + 1)])
    # partial[k-1] = R(k) + ... + R(top)
    partial = np.cumsum(remainders[::-1])[::-1]
    upper, lower = partial[m:], partial[:m]
    if np.any(partial <= 0):
        raise DomainError(f'Nonpositive partial sum of remainders for n={n}, m={m} in {system}')
    factors = [_functional_factor(system, k, m) for k in range(m, top)]
    if top <= RAW_DIRECT_PRODUCT_LIMIT:
        z_product = complex(1.0)
        for factor in factors:
            z_product *= factor
        return math.sqrt(math.prod(upper)) / (z_product * math.sqrt(math.prod(lower)))
    log_abs = 0.5 * float(np.sum(np.log(upper))) - 0.5 * float(np.sum(np.log(lower)))
    log_abs -= sum(math.log(abs(factor)) for factor in factors)
    phase = -sum(cmath.phase(factor) for factor in factors)
    return cmath.exp(complex(log_abs, phase))


def k_phase_angle(system: SipSystem, n):
    """ Argument of K_n^m (independent of m); elementwise on integer arrays """
    n = np.asarray(n, dtype=float)
    if system.family is Family.DType:
        return n * math.pi if system.c < 0 else np.zeros_like(n)
    if system.family is Family.CType:
        return system.alpha * system.gamma * n
    if system.family is Family.AType2:
        return system.alpha * energy(system, n)
    return np.zeros_like(n)


def k_phase(system: SipSystem, n: int) -> complex:
    """ Unit-modulus phase of K_n^m """
    return cmath.exp(1j * float(k_phase_angle(system, n)))


def _check_indices(n: int, m: int):
    if n < 0 or m < 0:
        raise ParameterError(f'n and m must be nonnegative. Currently: n={n}, m={m}')


def log_abs_k_coeff(system: SipSystem, n: int, m: int, method: str = 'closed') -> float:
    _check_indices(n, m)
    if method == 'closed':
        return float(_log_abs_k_closed(system, np.asarray(n), m))
    if method == 'raw':
        return math.log(abs(_k_coeff_raw(system, n, m)))
    raise ParameterError(f'Unknown method:{method}. Expected closed or raw')


def k_coeff(system: SipSystem, n: int, m: int, method: str = 'closed') -> complex:
    """
    The coefficient K_n^m with B_+^m z^n/h_n |Psi_n> = z^n / K_n^m |Psi_{n+m}>.
    :param method: 'closed' (family Gamma forms) or 'raw' (partial-sum products over the Z_k)
    """
    _check_indices(n, m)
    if method == 'raw':
        return _k_coeff_raw(system, n, m)
    return math.exp(log_abs_k_coeff(system, n, m, method)) * k_phase(system, n)


def log_inv_k_sq_array(system: SipSystem, ns: Grid, m: int) -> np.ndarray:
    """ ln 1/|K_n^m|^2 for an array of n """
    return -2.0 * _log_abs_k_closed(system, np.asarray(ns, dtype=float), m)


def inv_k_sq(system: SipSystem, n: int, m: int) -> float:
    _check_indices(n, m)
    return math.exp(float(log_inv_k_sq_array(system, [n], m)[0]))


def gram_hypergeometric(system: SipSystem, m: int) -> HypergeometricForm:
    """ The closed form of the Gram series S(w) = sum_n w^n / |K_n^m|^2 """
    if system.family is Family.DType:
        return HypergeometricForm(m * math.log(system.gamma) + math.lgamma(m + 1), (m + 1.0,), (1.0,),
                                  system.c ** 2 / system.gamma)
    if system.family is Family.CType:
        return HypergeometricForm(m * math.log(system.gamma) + math.lgamma(m + 1), (m - system.rho, m + 1.0),
                                  (1.0,))
    if system.family is Family.AType1:
        rho = system.rho
        log_prefactor = (2 * m * math.log(system.kappa) + math.lgamma(m + 1) + math.lgamma(2 * m + 2 * rho)
                         - math.lgamma(m + 2 * rho))
        return HypergeometricForm(log_prefactor, (m + 1.0, 2 * m + 2 * rho, 2 * m + 2 * rho),
                                  (1.0, m + rho, m + 2 * rho, m + rho + 0.5), 0.25)
    nu = system.nu
    log_prefactor = (2 * m * math.log(system.kappa) + math.lgamma(m + 1) + math.lgamma(2 * m + nu + 1)
                     - math.lgamma(m + nu + 1))
    return HypergeometricForm(log_prefactor, (m + 1.0, 2 * m + nu + 1, 2 * m + nu + 1), (1.0, m + nu + 1))
