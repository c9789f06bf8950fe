import logging
import math
from dataclasses import dataclass
from typing import Callable, List

import numpy as np
import pandas as pd

from .exceptions import PacsError
from .figures import system_from_config
from .measures import default_weight_grid, moment_residuals, weight_positivity_scan
from .states import gram_series, kernel, kernel_idempotence_check, normalization
from .statistics import mean_n, mean_n2, mandel_q, g2, pnd_table
from .systems import PacsPoint, energy, k_coeff

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CheckResult:
    name: str
    residual: float
    tolerance: float
    passed: bool
    detail: str = ''

    def __str__(self):
        status = 'PASS' if self.passed else 'FAIL'
        text = f'{self.name:<44} residual={self.residual:.3e} tol={self.tolerance:.1e} {status}'
        return f'{text} ({self.detail})' if self.detail else text


class Verifier:
    """ Runs every consistency check between the closed forms and the independent series oracles """

    def __init__(self, executor):
        self.executor = executor
        self.args = executor.args
        self.system = system_from_config(self.args)
        self.rng = np.random.default_rng(self.args.seed_for_computation)
        self.results: List[CheckResult] = []
        self.report = dict()

    @property
    def passed(self) -> bool:
        return all(result.passed for result in self.results)

    def frame(self) -> pd.DataFrame:
        return pd.DataFrame([vars(result) for result in self.results],
                            columns=['name', 'residual', 'tolerance', 'passed', 'detail'])

    def _sample_amplitudes(self, count: int) -> np.ndarray:
        """ Random complex amplitudes well inside the disc of convergence """
        radius = 2.0 if math.isinf(self.system.convergence_radius) else 0.9
        return radius * np.sqrt(self.rng.uniform(0.01, 1.0, count)) * np.exp(2j * np.pi * self.rng.uniform(size=count))

    def check(self, name: str, tolerance: float, compute: Callable[[], float]) -> CheckResult:
        """ Run one check; a numerical error counts as a failure and is reported """
        try:
            residual = float(compute())
            result = CheckResult(name, residual, tolerance, bool(residual <= tolerance))
        except (PacsError, ArithmeticError) as e:
            result = CheckResult(name, math.inf, tolerance, False, f'{type(e).__name__}: {e}')
        self.results.append(result)
        print(result)
        return result

    def verify(self) -> None:
        """
        (1) Coefficients: closed Gamma forms against the raw partial-sum products.
        (2) Normalization: series against the hypergeometric form.
        (3) Statistics: Q identity, generic against closed, PND normalization and first moment.
        (4) Measure: moment problem of the Meijer G density.
        (5) Kernel: hermiticity, K(z, z) = 1, positivity and idempotence.
        (6) Weight positivity scan.
        """
        print(f'Verification of {self.system} starts.')
        m_list = self.args.m_list
        # (1) Coefficients.
        self.check('coefficients raw vs closed (n<=60, m<=5)', 1e-10, self.coefficient_residual)
        # (2) Normalization.
        for m in m_list:
            self.check(f'normalization series vs closed m={m}', 1e-10,
                       lambda m=m: self.normalization_residual(m))
        # (3) Statistics.
        for m in m_list:
            self.check(f'Q = <N>(g2 - 1) m={m}', 1e-10, lambda m=m: self.q_identity_residual(m))
            if m >= 1:
                self.check(f'statistics generic vs closed m={m}', 1e-8, lambda m=m: self.closed_statistics_residual(m))
            self.check(f'PND normalization and <N> m={m}', 1e-9, lambda m=m: self.pnd_residual(m))
        # (4) Measure.
        orders = np.arange(self.args.moment_orders)
        for m in range(self.args.moment_m_max + 1):
            self.check(f'moments n<{self.args.moment_orders} m={m}', 1e-6,
                       lambda m=m: float(np.max(moment_residuals(self.system, m, orders))))
        # (5) Kernel.
        for m in m_list:
            self.check(f'kernel hermiticity and K(z,z)=1 m={m}', 1e-12, lambda m=m: self.kernel_residual(m))
            self.check(f'kernel positivity m={m}', 1e-12, lambda m=m: self.kernel_positivity(m))
        z, zp = self._sample_amplitudes(2) * 0.25
        self.check(f'kernel idempotence m={m_list[0]}', 1e-5,
                   lambda: kernel_idempotence_check(self.system, m_list[0], z, zp))
        # (6) Weight positivity.
        grid = default_weight_grid(self.system, 50)
        for m in m_list:
            self.check(f'weight positivity m={m}', 0.0, lambda m=m: -weight_positivity_scan(self.system, m, grid))
        self.report['checks'] = len(self.results)
        self.report['failed'] = sum(not result.passed for result in self.results)
        print(f'Verification ends: {self.report["failed"]} of {self.report["checks"]} checks failed.')

    def coefficient_residual(self) -> float:
        worst = 0.0
        for m in range(6):
            for n in range(61):
                raw, closed = k_coeff(self.system, n, m, 'raw'), k_coeff(self.system, n, m, 'closed')
                worst = max(worst, abs(raw - closed) / abs(raw))
        return worst

    def normalization_residual(self, m: int) -> float:
        xs = np.abs(self._sample_amplitudes(10)) ** 2
        return max(abs(normalization(self.system, m, x, 'series') / normalization(self.system, m, x, 'closed') - 1)
                   for x in xs)

    def q_identity_residual(self, m: int) -> float:
        worst = 0.0
        for z in self._sample_amplitudes(5):
            point = PacsPoint(z, m, self.system)
            first = mean_n(point)
            worst = max(worst, abs(mandel_q(point) - first * (g2(point) - 1)) / max(1.0, abs(mandel_q(point))))
        return worst

    def closed_statistics_residual(self, m: int) -> float:
        worst = 0.0
        for z in self._sample_amplitudes(5):
            point = PacsPoint(z, m, self.system)
            for statistic in (mean_n, mean_n2):
                generic, closed = statistic(point, 'generic'), statistic(point, 'closed')
                worst = max(worst, abs(generic - closed) / abs(generic))
        return worst

    def pnd_residual(self, m: int) -> float:
        point = PacsPoint(self._sample_amplitudes(1)[0], m, self.system)
        n_max = m + gram_series(self.system, m, point.x).terms_used
        probabilities = pnd_table(point, n_max)
        first = float(np.sum(energy(self.system, np.arange(n_max + 1)) * probabilities))
        return max(abs(probabilities.sum() - 1.0), abs(first / mean_n(point) - 1.0))

    def kernel_residual(self, m: int) -> float:
        z, zp = self._sample_amplitudes(2)
        hermiticity = abs(kernel(self.system, m, z, zp) - kernel(self.system, m, zp, z).conjugate())
        diagonal = abs(kernel(self.system, m, z, z) - 1.0)
        return max(hermiticity, diagonal)

    def kernel_positivity(self, m: int) -> float:
        """ Minus the smallest eigenvalue of the Gram matrix of four states, clipped at zero """
        points = self._sample_amplitudes(4)
        gram = np.array([[kernel(self.system, m, a, b) for b in points] for a in points])
        return max(0.0, -float(np.min(np.linalg.eigvalsh(gram))))
