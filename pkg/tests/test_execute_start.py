import os

import numpy as np
import pandas as pd
import pytest

from core.exceptions import ConfigError
from core.executer import EXIT_NUMERICAL_FAILURE, EXIT_OK, EXIT_VERIFY_FAILED, Execute
from core.static_funcs import build_run_config, load_config, parse_params
from core.statistics import poissonian_crossing
from core.systems import SipSystem


class TestRunConfig:
    def test_preset_layering(self):
        args = build_run_config('fig5', parse_params(['m_list=1,2', 'z_count=7']))
        assert args.family == 'C' and args.rho == -4.0
        assert args.m_list == (1, 2)
        assert args.z_count == 7
        assert args.quantity == 'Q'

    def test_config_file(self, tmp_path):
        path = tmp_path / 'run.cfg'
        path.write_text('# photon-added C-type states\nfamily = C\n\nrho = -3.0  # below -1\nz = 0.4\n')
        entries = load_config(str(path))
        assert [entry[0] for entry in entries] == [2, 4, 5]
        args = build_run_config('stats', entries + parse_params(['rho=-6']))
        assert args.rho == -6.0 and args.z == 0.4

    @pytest.mark.parametrize('text, line, field', [('family = D\nbogus = 1\n', 2, 'bogus'),
                                                   ('gamma = -1\n', 1, 'gamma'),
                                                   ('z_count = many\n', 1, 'z_count'),
                                                   ('command = fig2\n', 1, 'command')])
    def test_config_errors(self, tmp_path, text, line, field):
        path = tmp_path / 'bad.cfg'
        path.write_text(text)
        with pytest.raises(ConfigError) as info:
            build_run_config('fig1', load_config(str(path)))
        assert info.value.field == field
        if field != 'gamma':
            assert info.value.line == line
            assert str(info.value).startswith(f'line {line}, field {field}')

    @pytest.mark.parametrize('params, field', [(['family=C', 'rho=-0.5'], 'rho'),
                                               (['family=A2', 'nu=-2'], 'nu'),
                                               (['family=X'], 'family'),
                                               (['z_max=1.5'], 'z_max'),
                                               (['method=exact'], 'method'),
                                               (['m_list=-1'], 'm_list')])
    def test_sanity_checks(self, params, field):
        base = ['family=C', 'rho=-2', 'z_max=0.9'] if 'z_max=1.5' in params else []
        with pytest.raises(ConfigError) as info:
            build_run_config('weight', parse_params(base + params))
        assert info.value.field == field

    def test_positive_weight_range_binds_weight_tables_only(self):
        assert build_run_config('stats', parse_params(['family=C', 'rho=-0.5', 'z=0.3'])).rho == -0.5
        assert build_run_config('verify', parse_params(['family=C', 'rho=-0.5'])).strict
        for command in ('fig4', 'weight'):
            with pytest.raises(ConfigError) as info:
                build_run_config(command, parse_params(['family=C', 'rho=-0.5', 'z_max=0.9']))
            assert info.value.field == 'rho'

    def test_missing_amplitude(self):
        with pytest.raises(ConfigError):
            build_run_config('pnd', [])
        with pytest.raises(ConfigError):
            parse_params(['no_equals_sign'])


class TestExecute:
    def test_stats(self, tmp_path):
        out = str(tmp_path / 'stats.csv')
        report = Execute(build_run_config('stats', parse_params(['z=1.0', 'm_list=1', 'method=closed']),
                                          out)).start()
        assert report['exit_code'] == EXIT_OK
        frame = pd.read_csv(out)
        assert list(frame.columns) == ['m', '|z|', '<N>', '<N^2>', 'Q', 'g2', 'method']
        assert frame['<N>'][0] == pytest.approx(2.5, rel=1e-9)
        assert frame['Q'][0] == pytest.approx(-0.5, rel=1e-9)

    def test_weight(self, tmp_path):
        out = str(tmp_path / 'weight.csv')
        Execute(build_run_config('weight', parse_params(['family=C', 'rho=-2', 'z_scale=abs2', 'z_max=0.9',
                                                         'z_count=5', 'm_list=0']), out)).start()
        frame = pd.read_csv(out)
        assert list(frame.columns) == ['|z|^2', 'w_m0']
        np.testing.assert_allclose(frame['w_m0'], (1 - frame['|z|^2']) ** -2 / np.pi, rtol=1e-8)

    def test_sweep(self, tmp_path):
        out = str(tmp_path / 'sweep.csv')
        Execute(build_run_config('sweep', parse_params(['z_count=4', 'm_list=0,1']), out)).start()
        frame = pd.read_csv(out)
        assert list(frame.columns) == ['|z|', 'Q_m0', 'g2_m0', 'Q_m1', 'g2_m1']
        np.testing.assert_allclose(frame['Q_m0'], 0.0, atol=1e-10)
        np.testing.assert_allclose(frame['g2_m0'], 1.0, rtol=1e-10)

    def test_numerical_failure(self, tmp_path):
        out = str(tmp_path / 'stats.csv')
        executor = Execute(build_run_config('stats', parse_params(['z=0', 'm_list=0,1']), out))
        report = executor.start()
        assert executor.exit_code == EXIT_NUMERICAL_FAILURE
        assert report['failures'] == 1
        frame = pd.read_csv(out)
        assert np.isnan(frame['Q'][0])
        assert frame['Q'][1] == pytest.approx(-1.0)

    def test_verify(self, tmp_path):
        out = str(tmp_path / 'verify.csv')
        params = ['m_list=0,1', 'moment_orders=4', 'moment_m_max=1']
        executor = Execute(build_run_config('verify', parse_params(params), out))
        report = executor.start()
        assert executor.exit_code == EXIT_OK
        assert report['failed'] == 0
        frame = pd.read_csv(out)
        assert frame['passed'].all()

    def test_verify_outside_positive_range(self):
        params = ['family=C', 'rho=-0.5', 'm_list=0', 'moment_orders=2', 'moment_m_max=0']
        executor = Execute(build_run_config('verify', parse_params(params)))
        report = executor.start()
        assert executor.exit_code == EXIT_VERIFY_FAILED
        assert report['failed'] >= 1

    def test_experiment_folder(self, tmp_path, monkeypatch):
        monkeypatch.chdir(tmp_path)
        report = Execute(build_run_config('pnd', parse_params(['z=1.0', 'n_max=10', 'm_list=0']))).start()
        folder = report['path_experiment_folder']
        assert os.path.isfile(os.path.join(folder, 'pnd.csv'))
        assert os.path.isfile(os.path.join(folder, 'report.json'))
        assert os.path.isfile(os.path.join(folder, 'info.log'))

    def test_sweep_reports_poissonian_crossing(self, tmp_path):
        params = ['family=C', 'rho=-4', 'm_list=1', 'z_min=0.05', 'z_max=0.95', 'z_count=10']
        report = Execute(build_run_config('sweep', parse_params(params), str(tmp_path / 'sweep.csv'))).start()
        assert report['exit_code'] == EXIT_OK
        root = report['poissonian_crossings']['m1']
        assert 0.05 < root < 0.95
        assert root == pytest.approx(poissonian_crossing(SipSystem.c_type(-4.0), 1, 0.05, 0.95), abs=1e-9)
        assert 'm1' not in Execute(build_run_config('sweep', parse_params(['m_list=1', 'z_count=5']),
                                                    str(tmp_path / 'd.csv'))).start()['poissonian_crossings']
