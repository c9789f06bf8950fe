import sys

import click

from core.exceptions import ConfigError
from core.executer import EXIT_CONFIG_ERROR, Execute
from core.helper_classes import COMMANDS
from core.static_funcs import build_run_config, load_config, parse_params


@click.command()
@click.argument('command', type=click.Choice(COMMANDS))
@click.option('-c', '--config', 'config_path', type=click.Path(), default=None,
              help='Flat key=value configuration file.')
@click.option('-o', '--out', 'output_path', type=click.Path(), default=None,
              help='CSV output path. A fresh folder under Experiments/ is used if omitted.')
@click.option('-p', '--param', 'params', multiple=True,
              help='key=value override of a configuration key, e.g. --param m_list=1,2,5.')
@click.option('--emit-plot-script', is_flag=True, help='Write a gnuplot script next to the CSV.')
def pacs(command, config_path, output_path, params, emit_plot_script):
    """Photon-added coherent states of shape-invariant systems: figure data, statistics and verification.

    COMMAND is one of fig1..fig12, the second panels fig2b, fig3b, fig5b, fig6b, fig8b, fig9b, fig11b, fig12b,
    verify, stats, pnd, weight, sweep.
    """
    try:
        entries = load_config(config_path) if config_path else []
        entries += parse_params(params)
        config = build_run_config(command, entries, output_path)
        if emit_plot_script:
            config.emit_plot_script = True
        executor = Execute(config)
    except ConfigError as e:
        click.secho(f'Configuration error: {e}', fg='red', bold=True, err=True)
        sys.exit(EXIT_CONFIG_ERROR)
    executor.start()
    sys.exit(executor.exit_code)


if __name__ == '__main__':
    pacs()
