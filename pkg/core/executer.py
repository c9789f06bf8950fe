import json
import os
import time

from .figures import PRESETS, Table, pnd_frame, run_figure, run_sweep, stats_frame, weight_table
from .helper_classes import RunConfig
from .sanity_checkers import sanity_checking_with_arguments
from .static_funcs import create_experiment_folder, create_logger, emit_plot_script, timeit, write_csv
from .verifier import Verifier

# Exit codes of a run.
EXIT_OK, EXIT_VERIFY_FAILED, EXIT_CONFIG_ERROR, EXIT_NUMERICAL_FAILURE = 0, 1, 2, 3


class Execute:
    """ A class for running one pacs command.

    (1) Validating the configuration and preparing the output location.
    (2) Computing the table of a figure or tabular command, or running the verification suite.
    (3) Storing the CSV, the optional plot script and the report.
    """

    def __init__(self, args: RunConfig):
        # (1) Sanity checking.
        self.args = sanity_checking_with_arguments(args)
        # (2) Decide where the results go. Without an explicit path a fresh experiment folder is used.
        self.storage_path = None
        if self.args.output_path is None and self.args.command != 'verify':
            self.storage_path = create_experiment_folder(folder_name='Experiments')
            self.args.output_path = os.path.join(self.storage_path, f'{self.args.command}.csv')
        # (3) Application logger; a file handler is added for experiment folders.
        self.logger = create_logger(name='pacs', path=self.storage_path)
        # (4) Store few data in memory, e.g. runtime, path of the CSV, failures.
        self.report = dict()
        self.exit_code = EXIT_OK

    @timeit('Computation')
    def compute_table(self) -> Table:
        """ Dispatch a tabular command """
        command = self.args.command
        if command in PRESETS:
            return run_figure(self.args)
        if command == 'stats':
            return stats_frame(self.args)
        if command == 'pnd':
            return pnd_frame(self.args)
        if command == 'weight':
            return weight_table(self.args)
        return run_sweep(self.args)

    def store(self, table: Table) -> None:
        # (1) CSV.
        path = write_csv(table.frame, self.args.output_path)
        self.report['output_path'] = path
        print(f'Results are stored in {path}')
        # (2) Plot script.
        if self.args.emit_plot_script:
            self.report['plot_script'] = emit_plot_script(path)
            print(f'Plot script is stored in {self.report["plot_script"]}')

    def start(self) -> dict:
        """
        (1) Verification or table computation
        (2) Store the results
        (3) Return a report of the run
        """
        start_time = time.time()
        self.logger.info(f'Command {self.args.command} with {self.args}')
        if self.args.command == 'verify':
            # (1.1) Verification suite.
            verifier = Verifier(self)
            verifier.verify()
            self.report.update(verifier.report)
            if not verifier.passed:
                self.exit_code = EXIT_VERIFY_FAILED
            if self.args.output_path is not None:
                self.store(Table(verifier.frame()))
        else:
            # (1.2) Figure and tabular commands.
            table = self.compute_table()
            self.report['failures'] = table.failures
            self.report.update(table.summary)
            for m, root in table.summary.get('poissonian_crossings', {}).items():
                print(f'Q changes sign for {m} at |z_0| = {root:.12g}')
            if table.failures:
                self.logger.warning(f'{table.failures} rows contain failed evaluations (NaN).')
                self.exit_code = EXIT_NUMERICAL_FAILURE
            self.store(table)
        # (2) Runtime.
        total_runtime = time.time() - start_time
        if 60 > total_runtime:
            message = f'{total_runtime:.3f} seconds'
        else:
            message = f'{total_runtime / 60:.3f} minutes'
        self.report['Runtime'] = message
        self.report['exit_code'] = self.exit_code
        print(f'Total computation time: {message}')
        # (3) Report next to the results of an experiment folder.
        if self.storage_path is not None:
            self.report['path_experiment_folder'] = self.storage_path
            with open(os.path.join(self.storage_path, 'report.json'), 'w') as file_descriptor:
                json.dump(self.report, file_descriptor, indent=4)
        return self.report
