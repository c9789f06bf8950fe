""" Figure presets and the tables behind every tabular command (figures, stats, pnd, weight, sweep). """
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Tuple

import numpy as np
import pandas as pd

from .exceptions import PacsError
from .helper_classes import RunConfig
from .measures import weight
from .statistics import g2, mandel_q, pnd_table, poissonian_crossing, stats_report
from .systems import PacsPoint, SipSystem

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FigurePreset:
    name: str
    family: str
    parameters: Tuple[Tuple[str, float], ...]
    quantity: str
    m_list: Tuple[int, ...]
    grid: Tuple[float, float, str] = (0.05, 10.0, 'abs')
    z: float = None
    n_max: int = 60

    def as_config(self) -> dict:
        """ The preset as RunConfig fields """
        z_min, z_max, z_scale = self.grid
        config = {'family': self.family, 'quantity': self.quantity, 'm_list': self.m_list, 'z_min': z_min,
                  'z_max': z_max, 'z_scale': z_scale, 'n_max': self.n_max, 'z': self.z}
        config.update(dict(self.parameters))
        return config


_Q_M_LIST = (1, 2, 5, 10)
PRESETS: Dict[str, FigurePreset] = {
    preset.name: preset for preset in (
        FigurePreset('fig1', 'D', (('gamma', 1.0), ('c', 1.0)), 'weight', (1, 2, 3, 4), (0.01, 10.0, 'abs2')),
        FigurePreset('fig2', 'D', (('gamma', 1.0), ('c', 1.0)), 'Q', _Q_M_LIST, (0.05, 10.0, 'abs')),
        FigurePreset('fig3', 'D', (('gamma', 1.0), ('c', 1.0)), 'pnd', (0, 1, 2, 3), z=2.0),
        FigurePreset('fig4', 'C', (('rho', -2.0),), 'weight', (0, 1, 2, 3), (0.005, 0.995, 'abs2')),
        FigurePreset('fig5', 'C', (('rho', -4.0),), 'Q', _Q_M_LIST, (0.005, 0.995, 'abs')),
        FigurePreset('fig6', 'C', (('rho', -8.0),), 'pnd', (0, 1, 2, 3), z=0.5),
        FigurePreset('fig7', 'A1', (('rho', 0.5),), 'weight', (0, 1, 2, 3), (0.01, 30.0, 'abs2')),
        FigurePreset('fig8', 'A1', (('rho', 0.5),), 'Q', _Q_M_LIST, (0.05, 10.0, 'abs')),
        FigurePreset('fig9', 'A1', (('rho', 0.5),), 'pnd', (0, 1, 2, 3), z=5.0),
        FigurePreset('fig10', 'A2', (('nu', 1.5),), 'weight', (0, 1, 2), (0.005, 0.995, 'abs2')),
        FigurePreset('fig11', 'A2', (('nu', 5.0),), 'Q', _Q_M_LIST, (0.005, 0.995, 'abs')),
        FigurePreset('fig12', 'A2', (('nu', 5.0),), 'pnd', (0, 1, 2, 3), z=0.5),
        FigurePreset('fig2b', 'D', (('gamma', 1.0), ('c', 1.0)), 'g2', _Q_M_LIST, (0.05, 10.0, 'abs')),
        FigurePreset('fig3b', 'D', (('gamma', 1.0), ('c', 1.0)), 'pnd', (0, 1, 2, 3), z=5.0, n_max=80),
        FigurePreset('fig5b', 'C', (('rho', -4.0),), 'g2', _Q_M_LIST, (0.005, 0.995, 'abs')),
        FigurePreset('fig6b', 'C', (('rho', -8.0),), 'pnd', (0, 1, 2, 3), z=0.8, n_max=150),
        FigurePreset('fig8b', 'A1', (('rho', 0.5),), 'g2', _Q_M_LIST, (0.05, 10.0, 'abs')),
        FigurePreset('fig9b', 'A1', (('rho', 0.5),), 'pnd', (0, 1, 2, 3), z=20.0),
        FigurePreset('fig11b', 'A2', (('nu', 5.0),), 'g2', _Q_M_LIST, (0.005, 0.995, 'abs')),
        FigurePreset('fig12b', 'A2', (('nu', 5.0),), 'pnd', (0, 1, 2, 3), z=0.8, n_max=150),
    )
}


@dataclass
class Table:
    """ A CSV-ready frame, the number of rows with failed cells and scalar results for the run report """
    frame: pd.DataFrame
    failures: int = 0
    summary: dict = field(default_factory=dict)


def system_from_config(config: RunConfig) -> SipSystem:
    return SipSystem(config.family, gamma=config.gamma, c=config.c, rho=config.rho, nu=config.nu,
                     kappa=config.kappa, alpha=config.alpha, strict=config.strict_system)


def z_grid(config: RunConfig) -> np.ndarray:
    return np.linspace(config.z_min, config.z_max, config.z_count)


def _abscissa(config: RunConfig) -> Tuple[str, np.ndarray, np.ndarray]:
    """ Column name, grid values and the corresponding x = |z|^2 """
    grid = z_grid(config)
    if config.z_scale == 'abs2':
        return '|z|^2', grid, grid
    return '|z|', grid, grid ** 2


def _grid_table(abscissa: str, grid: np.ndarray, arguments: np.ndarray,
                columns: Dict[str, Callable[[float], float]], label: str) -> Table:
    """ Evaluate every column at the argument of every grid value; failures leave NaN cells """
    rows: List[list] = []
    failures = 0
    for position, (value, argument) in enumerate(zip(grid, arguments)):
        row = [float(value)]
        failed = False
        for name, evaluate in columns.items():
            try:
                row.append(float(evaluate(float(argument))))
            except (PacsError, ArithmeticError) as e:
                failed = True
                row.append(math.nan)
                logger.warning(f'{label}: {name} failed at {abscissa}={value:.6g} (row {position}): {e}')
        failures += failed
        rows.append(row)
    return Table(pd.DataFrame(rows, columns=[abscissa] + list(columns)), failures)


def _method_for(config: RunConfig, m: int) -> str:
    # The closed statistics carry the lower parameter m and exist only for m >= 1.
    return config.method if m >= 1 else 'generic'


def weight_table(config: RunConfig) -> Table:
    system = system_from_config(config)
    abscissa, grid, xs = _abscissa(config)
    columns = {f'w_m{m}': (lambda x, m=m: weight(system, m, x)) for m in config.m_list}
    return _grid_table(abscissa, grid, xs, columns, f'weight of {system}')


def statistic_table(config: RunConfig, quantities: Tuple[str, ...]) -> Table:
    """ Q and/or g2 over the z grid for every m """
    system = system_from_config(config)
    abscissa, grid, xs = _abscissa(config)
    evaluators = {'Q': mandel_q, 'g2': g2}
    columns = {}
    for m in config.m_list:
        for quantity in quantities:
            columns[f'{quantity}_m{m}'] = (lambda x, m=m, f=evaluators[quantity]:
                                           f(PacsPoint(math.sqrt(x), m, system), _method_for(config, m)))
    return _grid_table(abscissa, grid, xs, columns, f'statistics of {system}')


def pnd_frame(config: RunConfig) -> Table:
    """ P_n for n = 0..n_max at the amplitude z, one column per m """
    system = system_from_config(config)
    frame = pd.DataFrame({'n': np.arange(config.n_max + 1)})
    failures = 0
    for m in config.m_list:
        try:
            frame[f'P_m{m}'] = pnd_table(PacsPoint(config.z, m, system), config.n_max, _method_for(config, m))
        except (PacsError, ArithmeticError) as e:
            failures += 1
            frame[f'P_m{m}'] = math.nan
            logger.warning(f'PND of {system}, m={m} failed at |z|={config.z}: {e}')
    return Table(frame, failures)


def stats_frame(config: RunConfig) -> Table:
    system = system_from_config(config)
    rows, failures = [], 0
    for m in config.m_list:
        try:
            report = stats_report(PacsPoint(config.z, m, system), _method_for(config, m))
            rows.append([m, config.z, report.mean_n, report.mean_n2, report.mandel_q, report.g2, report.method])
        except (PacsError, ArithmeticError) as e:
            failures += 1
            rows.append([m, config.z] + [math.nan] * 4 + [_method_for(config, m)])
            logger.warning(f'Statistics of {system}, m={m} failed at |z|={config.z}: {e}')
    return Table(pd.DataFrame(rows, columns=['m', '|z|', '<N>', '<N^2>', 'Q', 'g2', 'method']), failures)


def run_figure(config: RunConfig) -> Table:
    """ The table of a figure command; quantity selects weight, Q, g2 or pnd """
    if config.quantity == 'weight':
        return weight_table(config)
    if config.quantity in ('Q', 'g2'):
        return statistic_table(config, (config.quantity,))
    return pnd_frame(config)


def poissonian_crossings(config: RunConfig, frame: pd.DataFrame) -> Dict[str, float]:
    """
    For every m whose Q column changes sign on the grid, the amplitude |z_0| of the first sign change,
    refined by root finding between the two grid rows that bracket it.
    """
    system = system_from_config(config)
    amplitudes = frame.iloc[:, 0].to_numpy()
    if config.z_scale == 'abs2':
        amplitudes = np.sqrt(amplitudes)
    crossings = dict()
    for m in config.m_list:
        q_values = frame[f'Q_m{m}'].to_numpy()
        for row in range(len(q_values) - 1):
            left, right = q_values[row], q_values[row + 1]
            if np.isfinite(left) and np.isfinite(right) and left * right < 0:
                try:
                    crossings[f'm{m}'] = poissonian_crossing(system, m, float(amplitudes[row]),
                                                             float(amplitudes[row + 1]), _method_for(config, m))
                except (PacsError, ArithmeticError) as e:
                    logger.warning(f'Poissonian crossing of {system}, m={m} could not be refined: {e}')
                break
    return crossings


def run_sweep(config: RunConfig) -> Table:
    """ Q and g2 over the grid, with the sub- to super-Poissonian crossings in the summary """
    table = statistic_table(config, ('Q', 'g2'))
    table.summary['poissonian_crossings'] = poissonian_crossings(config, table.frame)
    return table
