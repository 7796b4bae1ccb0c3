#!/usr/bin/env python3
"""
🧪 Command-line checks: run documents, commands, output formats and exit codes
"""

import json
import logging

import numpy as np
import pandas as pd
import pytest

from src.cli import (cmd_solve, cmd_split, cmd_sweep, cmd_wavefunction, main, parse_config, render_csv,
                     sweep_point)
from src.cli.config import SweepConfig
from src.exact import exact_two_center_1d, numeric_two_center_2d
from src.utils.errors import ConfigError, NoBoundStatesError, UnsupportedFamilyError
from src.utils.logging_setup import setup_logging

POINT1D_SINGLE = {"model": {"family": "Point1D", "centers": [0.0], "couplings_lambda": [2.0]}}

POINT1D_PAIR = {"model": {"family": "Point1D", "centers": [-10.0, 10.0],
                          "couplings_lambda": [1.0, 1.0], "degenerate": True}}

POINT2D_PAIR = {"model": {"family": "Point2D", "centers": [[-6.0, 0.0], [6.0, 0.0]],
                          "binding_energies": [-1.0, -1.0], "degenerate": True}}

POINT3D_THREE = {"model": {"family": "Point3D", "centers": [[0.0, 0.0, 0.0], [12.0, 0.0, 0.0], [0.0, 14.0, 0.0]],
                           "binding_energies": [-1.0, -0.64, -0.81]}}


def _config(doc, **sections):
    merged = dict(doc)
    merged.update(sections)
    return parse_config(json.dumps(merged, indent=2), "test.json")


def _write_doc(tmp_path, doc, name="run.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc, indent=2), encoding="utf-8")
    return str(path)


def _error_payload(stderr):
    lines = [line for line in stderr.splitlines() if line.startswith("{")]
    return json.loads(lines[-1])


class TestParseConfig:
    def test_minimal_point1d_pair(self):
        config = _config(POINT1D_PAIR)
        assert config.model.size == 2
        assert config.model.couplings == (1.0, 1.0)
        assert config.sweep is None and config.output.path is None

    def test_exponent_floats(self):
        config = parse_config('{"model": {"family": "Point1D", "centers": [0], "couplings_lambda": [2]},\n'
                              ' "numerics": {"tol": 1e-14, "window": [-2E+0, -1e-3]}}')
        assert config.numerics.tol == 1e-14
        assert config.numerics.window == (-2.0, -1e-3)

    def test_hyperbolic_threshold_quoted(self):
        doc = {"model": {"family": "PointH2", "curvature_kappa": 2.0,
                         "centers": [{"radius": 0.0, "direction": [1.0, 0.0]}],
                         "binding_energies": [2.0]}}
        with pytest.raises(ConfigError, match=r"binding energy must lie below κ²/4 = 1"):
            _config(doc)

    def test_overlapping_curves_rejected(self):
        doc = {"model": {"family": "Curve2D", "couplings_lambda": [2.0, 1.6], "centers": [
            {"shape": "circle", "center": [0.0, 0.0], "radius": 1.0, "samples": 256},
            {"shape": "circle", "center": [1.5, 0.0], "radius": 1.0, "samples": 256}]}}
        with pytest.raises(ConfigError, match="minimum distance") as info:
            _config(doc)
        assert info.value.path == "model.centers"

    def test_unknown_key_names_path_and_line(self):
        text = '{\n  "model": {\n    "family": "Point1D",\n    "centers": [0.0],\n' \
               '    "couplings_lambda": [2.0],\n    "colour": "red"\n  }\n}'
        with pytest.raises(ConfigError) as info:
            parse_config(text, "run.json")
        assert info.value.path == "model.colour"
        assert info.value.line == 6
        assert "unknown key" in str(info.value)

    def test_malformed_json(self):
        with pytest.raises(ConfigError, match="malformed") as info:
            parse_config('{\n  "model": {\n    "family": "Point1D",\n  ]\n}', "broken.json")
        assert info.value.line is not None

    def test_tab_indented_document(self):
        config = parse_config(json.dumps(POINT1D_PAIR, indent="\t"), "tab.json")
        assert config.model.couplings == (1.0, 1.0)
        assert config == _config(POINT1D_PAIR)

    def test_tab_indented_document_keeps_lines(self):
        text = '{\n\t"model": {\n\t\t"family": "Point1D",\n\t\t"centers": [0.0],\n' \
               '\t\t"couplings_lambda": [2.0],\n\t\t"colour": "red"\n\t}\n}'
        with pytest.raises(ConfigError) as info:
            parse_config(text, "tab.json")
        assert info.value.path == "model.colour"
        assert info.value.line == 6

    def test_wrong_types_rejected(self):
        with pytest.raises(ConfigError, match="expected a number") as info:
            _config({"model": {"family": "Point1D", "centers": [0.0], "couplings_lambda": ["two"]}})
        assert info.value.path == "model.couplings_lambda"
        with pytest.raises(ConfigError, match="unknown model family"):
            _config({"model": {"family": "Point4D", "centers": [0.0], "couplings_lambda": [1.0]}})

    def test_equal_parameters_need_degenerate_flag(self):
        doc = {"model": {"family": "Point1D", "centers": [-10.0, 10.0], "couplings_lambda": [1.0, 1.0]}}
        with pytest.raises(ConfigError, match="degenerate") as info:
            _config(doc)
        assert info.value.path == "model.couplings_lambda"

    @pytest.mark.parametrize("sweep,message", [
        ({"family": "Point1D", "variable": "a", "start": 2.0, "stop": 12.0, "steps": 1, "lambda": 1.0},
         "at least 2 steps"),
        ({"family": "Point1D", "variable": "a", "start": 12.0, "stop": 2.0, "steps": 5, "lambda": 1.0},
         "must be below stop"),
        ({"family": "Point2D", "variable": "lambda", "start": 1.0, "stop": 2.0, "steps": 5, "a": 6.0},
         "only be swept for Point1D"),
        ({"family": "Point3D", "variable": "a", "start": 1.0, "stop": 2.0, "steps": 5},
         "need a fixed 'mu'"),
    ])
    def test_invalid_sweeps(self, sweep, message):
        with pytest.raises(ConfigError, match=message):
            _config({}, sweep=sweep)

    def test_wavefunction_grid_must_match_model(self):
        grid = {"lower": [-1.0], "upper": [1.0], "points": [5]}
        with pytest.raises(ConfigError, match="axes"):
            _config(POINT2D_PAIR, wavefunction={"state": 0, "grid": grid})

    def test_round_trip_of_resolved_echo(self):
        config = _config(POINT2D_PAIR, numerics={"tol": 1e-14, "window": [-2.0, -0.1]},
                         solve={"cross_check": True}, output={"path": "out.json"})
        again = parse_config(json.dumps(config.to_dict()))
        assert again == config

    def test_overrides(self):
        config = _config(POINT1D_SINGLE).with_overrides(quad_order=8, tol=1e-10, out="x.json")
        assert config.numerics.quad_order == 8 and config.model.quad_order == 8
        assert config.numerics.tol == 1e-10 and config.output.path == "x.json"
        with pytest.raises(ConfigError):
            config.with_overrides(quad_order=1)


class TestSolve:
    def test_single_point1d(self):
        report = cmd_solve(_config(POINT1D_SINGLE))
        assert report['energies'] == [pytest.approx(-1.0, rel=1e-14)]
        assert report['alphas'] == [pytest.approx(2.0)]
        assert report['diagnostics']['flow']['violations'] == 0

    def test_point2d_pair_matches_oracle(self):
        report = cmd_solve(_config(POINT2D_PAIR, numerics={"window": [-1.001, -0.999]},
                                   solve={"cross_check": True}))
        exact = numeric_two_center_2d(1.0, 6.0)
        assert report['energies'] == [pytest.approx(exact.e_minus, rel=1e-10),
                                      pytest.approx(exact.e_plus, rel=1e-10)]
        assert report['diagnostics']['brute_force']['max_deviation'] < 1e-10

    def test_riesz_residuals_reported(self):
        report = cmd_solve(_config(POINT1D_SINGLE, solve={"riesz_check": True, "flow": False}))
        assert 'flow' not in report['diagnostics']
        assert report['diagnostics']['riesz_residuals'][0] < 1e-8

    def test_empty_window(self):
        with pytest.raises(NoBoundStatesError, match="no bound states in window"):
            cmd_solve(_config(POINT1D_SINGLE, numerics={"window": [-0.5, -0.2]}))


class TestSplit:
    def test_degenerate_point1d(self):
        report = cmd_split(_config(POINT1D_PAIR))
        assert report['mode'] == 'degenerate'
        assert report['degenerate']['asymptotic'] == pytest.approx(np.exp(-10.0), rel=1e-12)
        exact = exact_two_center_1d(1.0, 10.0)
        assert report['oracle']['method'] == 'lambert'
        assert report['relative_error'] == pytest.approx(
            abs(np.exp(-10.0) - exact.splitting) / exact.splitting, rel=1e-6)

    def test_three_centers_have_no_oracle(self):
        report = cmd_split(_config(POINT3D_THREE))
        assert report['mode'] == 'nondegenerate'
        assert len(report['levels']) == 3
        for level in report['levels']:
            assert 'oracle_energy' not in level
            assert 0.8 <= level['closed_form_ratio'] <= 1.25

    def test_two_centers_get_solver_oracle(self):
        doc = {"model": {"family": "Point3D", "centers": [[0.0, 0.0, 0.0], [6.0, 0.0, 0.0]],
                         "binding_energies": [-1.0, -0.64]}}
        report = cmd_split(_config(doc))
        assert all(level['relative_error'] < 1e-3 for level in report['levels'])

    def test_curve_pair(self):
        doc = {"model": {"family": "Curve2D", "couplings_lambda": [2.0, 1.6], "centers": [
            {"shape": "circle", "center": [0.0, 0.0], "radius": 1.0, "samples": 256},
            {"shape": "circle", "center": [12.0, 0.0], "radius": 1.0, "samples": 256}]},
            "numerics": {"quad_order": 16}}
        report = cmd_split(_config(doc, split={"oracle": False}))
        assert report['mode'] == 'curve'
        for level in report['levels']:
            assert 0.7 <= level['curve']['ratio'] <= 1.3


class TestSweep:
    def test_point1d_ladder(self):
        sweep = {"family": "Point1D", "variable": "a", "start": 2.0, "stop": 12.0, "steps": 21, "lambda": 1.0}
        frame = cmd_sweep(_config({}, sweep=sweep), threads=3)
        assert list(frame.columns) == ['a', 'delta_exact', 'delta_perturbative', 'rel_error']
        assert len(frame) == 21 and frame['a'].is_monotonic_increasing
        assert np.all(np.diff(frame['rel_error'].to_numpy()) < 0.0)

    def test_thread_count_does_not_change_output(self):
        sweep = {"family": "Point3D", "variable": "a", "start": 1.0, "stop": 10.0, "steps": 10, "mu": 1.0}
        config = _config({}, sweep=sweep)
        assert render_csv(cmd_sweep(config, threads=1)) == render_csv(cmd_sweep(config, threads=4))

    def test_point2d_columns_decay(self):
        sweep = {"family": "Point2D", "variable": "a", "start": float(np.exp(np.euler_gamma)) + 0.1,
                 "stop": 10.0, "steps": 8, "mu": 1.0}
        frame = cmd_sweep(_config({}, sweep=sweep))
        for column in ('delta_exact', 'delta_perturbative'):
            values = frame[column].to_numpy()
            assert np.all(values > 0.0) and np.all(np.diff(values) < 0.0)

    def test_coupling_sweep(self):
        sweep = SweepConfig("Point1D", "lambda", 1.0, 2.0, 3, a=10.0)
        row = sweep_point(sweep, 1.5)
        assert row['lambda'] == 1.5
        assert row['delta_perturbative'] == pytest.approx(2.25 * np.exp(-15.0))

    def test_single_state_point_becomes_nan(self):
        row = sweep_point(SweepConfig("Point1D", "a", 0.5, 2.0, 3, lam=1.0), 0.5)
        assert np.isnan(row['delta_exact'])


class TestWavefunction:
    def test_point1d_exponential_ratio(self):
        frame = cmd_wavefunction(_config(POINT1D_SINGLE, wavefunction={
            "state": 0, "grid": {"lower": [0.0], "upper": [1.0], "points": [2]}}))
        assert list(frame.columns) == ['x', 'psi']
        assert frame['psi'][0] / frame['psi'][1] == pytest.approx(np.e, rel=1e-10)

    def test_point2d_pair_is_even(self):
        frame = cmd_wavefunction(_config(POINT2D_PAIR, wavefunction={
            "state": 0, "grid": {"lower": [-8.0, -2.0], "upper": [8.0, 2.0], "points": [9, 5]}}))
        assert len(frame) == 9 * 5 - 2
        mirrored = frame.assign(x=0.0 - frame["x"])
        merged = frame.merge(mirrored, on=['x', 'y'], suffixes=('', '_mirror'))
        assert len(merged) == len(frame)
        np.testing.assert_allclose(merged['psi'], merged['psi_mirror'], rtol=1e-12)

    def test_correction_column(self):
        doc = {"model": {"family": "Point2D", "centers": [[0.0, 0.0], [12.0, 0.0]],
                         "binding_energies": [-1.0, -0.5]}}
        frame = cmd_wavefunction(_config(doc, wavefunction={
            "state": 0, "correction_center": 0,
            "grid": {"lower": [10.0, 1.0], "upper": [14.0, 2.0], "points": [3, 2]}}))
        assert list(frame.columns) == ['x', 'y', 'psi', 'delta_psi']
        near_partner = frame[frame['x'] == 12.0]['delta_psi'].abs().max()
        away = frame[frame['x'] == 10.0]['delta_psi'].abs().max()
        assert near_partner > away > 0.0

    def test_unsupported_family(self):
        doc = {"model": {"family": "Salpeter1D", "centers": [0.0], "binding_energies": [0.2], "mass_m": 1.0},
               "wavefunction": {"grid": {"lower": [0.5], "upper": [1.0], "points": [3]}}}
        with pytest.raises(UnsupportedFamilyError):
            cmd_wavefunction(_config(doc))


def test_csv_format():
    text = render_csv(pd.DataFrame({"a": [0.1, 2.0], "b": [1e20, np.nan]}))
    assert text == "a,b\n0.10000000000000001,1e+20\n2,nan\n"


class TestRunner:
    def test_solve_to_file(self, tmp_path, settings_file):
        out = tmp_path / "solve.json"
        code = main(['solve', '--config', _write_doc(tmp_path, POINT1D_SINGLE), '--out', str(out),
                     '--settings', str(settings_file)])
        assert code == 0
        report = json.loads(out.read_text(encoding="utf-8"))
        assert report['energies'] == [pytest.approx(-1.0, rel=1e-14)]
        assert parse_config(json.dumps(report['config'])).model.couplings == (2.0,)

    def test_solve_to_stdout(self, tmp_path, settings_file, capsys):
        code = main(['solve', '--config', _write_doc(tmp_path, POINT1D_SINGLE), '--settings', str(settings_file)])
        assert code == 0
        assert json.loads(capsys.readouterr().out)['command'] == 'solve'

    def test_config_error_exit_code(self, tmp_path, settings_file, capsys):
        doc = {"model": {"family": "Point1D", "centers": [0.0], "couplings_lambda": [-1.0]}}
        code = main(['solve', '--config', _write_doc(tmp_path, doc), '--settings', str(settings_file)])
        assert code == 2
        payload = _error_payload(capsys.readouterr().err)
        assert payload['error'] == 'ConfigError' and payload['exit_code'] == 2

    def test_missing_document(self, tmp_path, settings_file, capsys):
        code = main(['solve', '--config', str(tmp_path / "nope.json"), '--settings', str(settings_file)])
        assert code == 2
        assert "cannot read" in _error_payload(capsys.readouterr().err)['message']

    def test_numerical_failure_exit_code(self, tmp_path, settings_file, capsys):
        doc = dict(POINT1D_SINGLE, numerics={"window": [-0.5, -0.2]})
        code = main(['solve', '--config', _write_doc(tmp_path, doc), '--settings', str(settings_file)])
        assert code == 3
        assert _error_payload(capsys.readouterr().err)['error'] == 'NoBoundStatesError'

    def test_quad_order_override_is_echoed(self, tmp_path, settings_file):
        out = tmp_path / "split.json"
        code = main(['split', '--config', _write_doc(tmp_path, POINT1D_PAIR), '--out', str(out),
                     '--quad-order', '8', '--settings', str(settings_file)])
        assert code == 0
        assert json.loads(out.read_text(encoding="utf-8"))['config']['numerics']['quad_order'] == 8

    def test_sweep_csv_is_bit_stable(self, tmp_path, settings_file):
        doc = {"sweep": {"family": "Point1D", "variable": "a", "start": 2.0, "stop": 12.0, "steps": 11,
                         "lambda": 1.0}}
        path = _write_doc(tmp_path, doc)
        first, second = tmp_path / "first.csv", tmp_path / "second.csv"
        for out, threads in ((first, '1'), (second, '3')):
            assert main(['sweep', '--config', path, '--out', str(out), '--threads', threads,
                         '--settings', str(settings_file)]) == 0
        assert first.read_bytes() == second.read_bytes()
        assert first.read_bytes().startswith(b"a,delta_exact,delta_perturbative,rel_error\n")

    def test_tab_indented_document_runs(self, tmp_path, settings_file, capsys):
        path = tmp_path / "tab.json"
        path.write_text(json.dumps(POINT1D_SINGLE, indent="\t"), encoding="utf-8")
        assert main(['solve', '--config', str(path), '--settings', str(settings_file)]) == 0
        assert json.loads(capsys.readouterr().out)['energies'] == [pytest.approx(-1.0, rel=1e-14)]

    def test_unwritable_log_file_falls_back_to_stderr(self, tmp_path, capsys):
        blocker = tmp_path / "blocker"
        blocker.write_text("", encoding="utf-8")
        logger = setup_logging({'file': str(blocker / "krein.log"), 'console_level': 'WARNING'})
        assert [type(h) for h in logger.handlers] == [logging.StreamHandler]
        assert "cannot open log file" in capsys.readouterr().err
