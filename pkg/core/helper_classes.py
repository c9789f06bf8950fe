from dataclasses import dataclass, fields
from typing import Optional, Tuple

from .exceptions import ConfigError

# figNb are the second panels: g2 next to Q, and the PND at a second amplitude.
FIGURES = tuple(f'fig{i}' for i in range(1, 13)) + tuple(f'fig{i}b' for i in (2, 3, 5, 6, 8, 9, 11, 12))
COMMANDS = FIGURES + ('verify', 'stats', 'pnd', 'weight', 'sweep')
QUANTITIES = ('weight', 'Q', 'g2', 'pnd')
Z_SCALES = ('abs', 'abs2')


def _parse_bool(value: str) -> bool:
    lowered = value.strip().lower()
    if lowered in ('1', 'true', 'yes', 'on'):
        return True
    if lowered in ('0', 'false', 'no', 'off'):
        return False
    raise ValueError(f'not a boolean: {value}')


def _parse_optional_float(value: str) -> Optional[float]:
    return None if value.strip().lower() in ('', 'none') else float(value)


def _parse_m_list(value: str) -> Tuple[int, ...]:
    return tuple(int(item) for item in value.split(',') if item.strip())


@dataclass
class RunConfig:
    """ Everything a pacs command needs. Built from a figure preset, a config file and --param overrides. """
    command: str = 'verify'
    family: str = 'D'
    gamma: float = 1.0
    c: float = 1.0
    kappa: float = 1.0
    rho: Optional[float] = None
    nu: float = 1.0
    alpha: float = 0.0
    m_list: Tuple[int, ...] = (0, 1, 2, 3)
    z_min: float = 0.05
    z_max: float = 10.0
    z_count: int = 200
    z_scale: str = 'abs'
    z: Optional[float] = None
    n_max: int = 60
    quantity: Optional[str] = None
    method: str = 'generic'
    output_path: Optional[str] = None
    emit_plot_script: bool = False
    seed_for_computation: int = 0
    strict: bool = True
    moment_orders: int = 9
    moment_m_max: int = 3

    PARSERS = {'command': str, 'family': str, 'gamma': float, 'c': float, 'kappa': float,
               'rho': _parse_optional_float, 'nu': float, 'alpha': float, 'm_list': _parse_m_list,
               'z_min': float, 'z_max': float, 'z_count': int, 'z_scale': str, 'z': _parse_optional_float,
               'n_max': int, 'quantity': str, 'method': str, 'output_path': str,
               'emit_plot_script': _parse_bool, 'seed_for_computation': int, 'strict': _parse_bool,
               'moment_orders': int, 'moment_m_max': int}

    def update(self, x: dict, line: int = None):
        """ Set fields from already typed values or from the raw strings of a config line """
        for key, value in x.items():
            if key not in self.PARSERS:
                raise ConfigError('unknown key', line=line, field=key)
            if isinstance(value, str):
                try:
                    value = self.PARSERS[key](value.strip())
                except ValueError as e:
                    raise ConfigError(f'invalid value {value!r} ({e})', line=line, field=key)
            setattr(self, key, value)

    @property
    def strict_system(self) -> bool:
        """ Positive-weight parameter ranges bind only the commands that tabulate weights """
        return self.strict and (self.command.startswith('fig') or self.command == 'weight')

    def __iter__(self):
        for f in fields(self):
            yield f.name, getattr(self, f.name)

    def __repr__(self):
        return f'RunConfig at {hex(id(self))}: ' + str(dict(self))

    def __str__(self):
        return self.__repr__()
