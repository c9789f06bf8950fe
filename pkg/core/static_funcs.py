import datetime
import functools
import logging
import os
import time
from typing import Iterable, List, Optional, Tuple

import pandas as pd

from .exceptions import ConfigError
from .figures import PRESETS
from .helper_classes import COMMANDS, RunConfig
from .sanity_checkers import sanity_checking_with_arguments

ConfigEntry = Tuple[Optional[int], str, str]


def timeit(func_name):
    """ Log the wall time of the decorated step """

    def func_decorator(func):
        @functools.wraps(func)
        def debug(*args, **kwargs):
            start_time = time.time()
            r = func(*args, **kwargs)
            logging.getLogger('pacs').info(f'{func_name} took {time.time() - start_time:.3f} seconds')
            return r

        return debug

    return func_decorator


def create_logger(*, name: str, path: str = None) -> logging.Logger:
    logger = logging.getLogger(name)
    logger.setLevel(logging.INFO)
    formatter = logging.Formatter('%(asctime)s - %(name)s - %(levelname)s - %(message)s')
    # Repeated runs in one process must not stack handlers.
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
        handler.close()
    # create console handler
    ch = logging.StreamHandler()
    ch.setLevel(logging.INFO)
    ch.setFormatter(formatter)
    logger.addHandler(ch)
    if path is not None:
        # create file handler
        fh = logging.FileHandler(os.path.join(path, 'info.log'))
        fh.setLevel(logging.INFO)
        fh.setFormatter(formatter)
        logger.addHandler(fh)
    return logger


def create_experiment_folder(folder_name='Experiments'):
    directory = os.getcwd() + '/' + folder_name + '/'
    folder_name = str(datetime.datetime.now()).replace(' ', '_').replace(':', '-')
    path_of_folder = directory + folder_name
    os.makedirs(path_of_folder)
    return path_of_folder


def parse_line(text: str, line: Optional[int]) -> Optional[ConfigEntry]:
    """ 'key = value' with optional '# comment'; blank lines give None """
    content = text.split('#', 1)[0].strip()
    if not content:
        return None
    if '=' not in content:
        raise ConfigError(f'expected key=value, got {content!r}', line=line)
    key, value = content.split('=', 1)
    key = key.strip()
    if not key:
        raise ConfigError(f'missing key in {content!r}', line=line)
    return line, key, value.strip()


def load_config(path: str) -> List[ConfigEntry]:
    """ Read a flat key=value configuration file """
    if not os.path.isfile(path):
        raise ConfigError(f'configuration file {path} does not exist')
    entries = []
    with open(path, 'r') as reader:
        for number, text in enumerate(reader, start=1):
            entry = parse_line(text, number)
            if entry is not None:
                entries.append(entry)
    return entries


def parse_params(params: Iterable[str]) -> List[ConfigEntry]:
    """ --param key=value overrides; they carry no line number """
    entries = []
    for text in params:
        entry = parse_line(text, None)
        if entry is None:
            raise ConfigError(f'empty --param {text!r}')
        entries.append(entry)
    return entries


def build_run_config(command: str, entries: Iterable[ConfigEntry] = (), output_path: str = None) -> RunConfig:
    """
    Layer the figure preset of the command, the config file entries and the --param entries, in that order of
    increasing priority, then validate.
    """
    if command not in COMMANDS:
        raise ConfigError(f'unknown command {command!r}. Expected one of {COMMANDS}', field='command')
    config = RunConfig(command=command)
    if command in PRESETS:
        config.update(PRESETS[command].as_config())
    for line, key, value in entries:
        if key == 'command' and value != command:
            raise ConfigError(f'configuration is for {value!r} but the command is {command!r}', line=line,
                              field=key)
        config.update({key: value}, line=line)
    if output_path is not None:
        config.output_path = output_path
    return sanity_checking_with_arguments(config)


def write_csv(frame: pd.DataFrame, path: str) -> str:
    """ Deterministic CSV: 17 significant digits, ',' separators, LF line endings """
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    frame.to_csv(path, index=False, float_format='%.17g', lineterminator='\n')
    return path


def emit_plot_script(csv_path: str) -> str:
    """ A gnuplot script next to the CSV plotting every column against the first """
    columns = list(pd.read_csv(csv_path, nrows=0).columns)
    stem, _ = os.path.splitext(csv_path)
    script_path = stem + '.gp'
    name = os.path.basename(csv_path)
    plots = ', \\\n     '.join(f"'{name}' using 1:{i + 1} with lines title '{column}'"
                               for i, column in enumerate(columns[1:], start=1))
    with open(script_path, 'w', newline='\n') as writer:
        writer.write("set datafile separator ','\n")
        writer.write('set key autotitle columnhead\n')
        writer.write(f"set xlabel '{columns[0]}'\n")
        writer.write(f"set terminal pngcairo size 900,600\nset output '{os.path.basename(stem)}.png'\n")
        writer.write(f'plot {plots}\n')
    return script_path
