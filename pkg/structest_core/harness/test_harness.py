import json
import math

import numpy as np
import pandas as pd
import pytest
from scipy.stats import norm

from structest_core.canonical import threshold_from_rule
from structest_core.errors import ConfigurationError
from structest_core.harness import (
    ExperimentConfig,
    calibrate,
    chunk_ranges,
    fit_ks_exponent,
    ks_distance,
    load_experiment_config,
    risk_lower_bound,
    run_clt_sweep,
    run_ergm_threshold,
    run_experiment,
    run_ising_threshold,
    run_tasks,
    run_tv_collapse,
    summarize_reports,
    wilson_interval,
)
from structest_core.rng import stream


def small_ising(**overrides) -> ExperimentConfig:
    settings = dict(mode='ising-threshold', n=[12], d=[2], beta=[0.0], null_beta=[0.0], null_h=[0.0],
                    replicates=300, threshold=0.0, epsilon=0.34, graph='circulant', sweeps=1, seed=7)
    settings.update(overrides)
    return ExperimentConfig(**settings)


# configuration

def test_config_requires_a_coupling_grid():
    with pytest.raises(ConfigurationError):
        ExperimentConfig(mode='ising-threshold', n=[10], d=[2])
    with pytest.raises(ConfigurationError):
        ExperimentConfig(mode='ising-threshold', n=[], d=[2], beta=[0.1])


def test_config_rejections():
    with pytest.raises(ConfigurationError):
        ExperimentConfig(mode='bootstrap', n=[10])
    with pytest.raises(ConfigurationError):
        ExperimentConfig(mode='ising-threshold', n=[10], beta=[0.1], scaling=[1.0])
    with pytest.raises(ConfigurationError):
        ExperimentConfig(mode='ising-threshold', n=[10], beta=[0.1], replicates=0)
    with pytest.raises(ConfigurationError):
        ExperimentConfig(mode='ising-threshold', n=[10], beta=[0.1], epsilon='wide')
    with pytest.raises(ConfigurationError):
        ExperimentConfig(mode='ising-threshold', n=[10], beta=[0.1], null_beta=[2.0])
    with pytest.raises(ConfigurationError):
        ExperimentConfig(mode='ising-threshold', n=[10], beta=[0.1], h=0.5)
    with pytest.raises(ConfigurationError):
        ExperimentConfig(mode='ergm-threshold', n=[10], beta=[0.1], null_p=[0.05])
    with pytest.raises(ConfigurationError):
        ExperimentConfig.from_dict({'mode': 'clt-sweep', 'n': [10], 'colour': 'blue'})


def test_config_from_json(tmp_path):
    path = tmp_path / 'exp.json'
    path.write_text(json.dumps({'mode': 'clt-sweep', 'n': 100, 'd': [4, 8], 's': [0.3, 0.5],
                                'replicates': 50, 'epsilon': 'auto'}))
    cfg = load_experiment_config(path)
    assert cfg.n == [100] and cfg.d == [4, 8]
    assert cfg.epsilon == 'auto'
    assert cfg.to_dict()['replicates'] == 50

    (tmp_path / 'bad.json').write_text('{not json')
    with pytest.raises(ConfigurationError):
        load_experiment_config(tmp_path / 'bad.json')
    with pytest.raises(ConfigurationError):
        load_experiment_config(tmp_path / 'missing.json')


# building blocks

def test_wilson_interval():
    low, high = wilson_interval(5, 10)
    assert low < 0.5 < high
    assert low == pytest.approx(1 - high)
    low, high = wilson_interval(0, 200)
    assert low == pytest.approx(0.0, abs=1e-12) and 0 < high < 0.03


def test_chunk_ranges():
    assert [list(r) for r in chunk_ranges(10, 4)] == [[0, 1, 2, 3], [4, 5, 6, 7], [8, 9]]
    assert chunk_ranges(0, 4) == []


def test_run_tasks_keeps_order():
    tasks = list(range(1, 9))
    assert run_tasks(math.factorial, tasks, workers=1) == [math.factorial(t) for t in tasks]
    assert run_tasks(math.factorial, tasks, workers=2) == [math.factorial(t) for t in tasks]


def test_risk_lower_bound():
    assert risk_lower_bound(0.0) == 0.5
    assert risk_lower_bound(0.2) == pytest.approx(0.4)
    assert risk_lower_bound(1.0) == 0.0


def test_ks_distance():
    rng = stream(3)
    assert ks_distance(rng.standard_normal(20000)) < 0.02
    assert ks_distance(rng.standard_normal(5000) + 1.0) > 0.3


def test_fit_ks_exponent():
    x = np.array([0.01, 0.04, 0.16])
    gamma, K = fit_ks_exponent(x, 2.0 * x ** 0.25)
    assert gamma == pytest.approx(0.25)
    assert K == pytest.approx(2.0)


# threshold experiments

def test_zero_coupling_alternative_is_indistinguishable():
    report = run_ising_threshold(small_ising())
    row = report.rows.iloc[0]
    assert row['scaling'] == 0.0
    assert abs(row['type1_rate'] + row['type2_rate'] - 1.0) <= 0.15
    assert row['type1_ci_low'] <= row['type1_rate'] <= row['type1_ci_high']
    assert row['risk'] == max(row['type1_rate'], row['type2_rate'])
    assert 0.0 <= row['alpha_n_empirical'] <= 1.0
    assert row['worst_null'] == 'beta_cw=0,h_cw=0'


def test_threshold_report_columns():
    report = run_ising_threshold(small_ising(beta=[0.0, 0.3], null_beta=[0.0, 0.5]))
    expected = {'n', 'd', 'beta', 'scaling', 'sigma_n', 'beta_sigma', 'epsilon', 'threshold',
                'tau_n', 'L_n', 'type1_rate', 'type2_rate', 'risk', 'alpha_n_exact',
                'error_bound', 'elapsed_s'}
    assert expected <= set(report.rows.columns)
    assert len(report.rows) == 2
    assert report.summary['null_grid'] == ['beta_cw=0,h_cw=0', 'beta_cw=0.5,h_cw=0']


def test_reports_do_not_depend_on_worker_count():
    serial = run_ising_threshold(small_ising(beta=[0.2], null_beta=[0.0, 1.0]))
    again = run_ising_threshold(small_ising(beta=[0.2], null_beta=[0.0, 1.0]))
    parallel = run_ising_threshold(small_ising(beta=[0.2], null_beta=[0.0, 1.0], workers=2))
    pd.testing.assert_frame_equal(serial.deterministic_rows(), again.deterministic_rows())
    pd.testing.assert_frame_equal(serial.deterministic_rows(), parallel.deterministic_rows())


def test_auto_threshold_needs_a_feasible_rule():
    with pytest.raises(ConfigurationError):
        run_ising_threshold(small_ising(threshold=None))
    report = run_ising_threshold(small_ising(threshold=None, L=10.0, ks_constant=1e-3))
    assert report.rows.iloc[0]['threshold'] > 0


def test_ergm_zero_wedge_weight_is_indistinguishable():
    cfg = ExperimentConfig(mode='ergm-threshold', n=[8], beta=[0.0], p=0.5, null_p=[0.5], delta=0.2,
                           replicates=300, threshold=0.0, sweeps=1, seed=11)
    row = run_ergm_threshold(cfg).rows.iloc[0]
    assert row['beta1'] == 0.0
    assert abs(row['type1_rate'] + row['type2_rate'] - 1.0) <= 0.15
    assert row['worst_null'] == 'p=0.5'


# CLT sweep

def test_clt_sweep_small_instance():
    cfg = ExperimentConfig(mode='clt-sweep', n=[200], d=[4], s=[0.5], replicates=4000, seed=5)
    row = run_clt_sweep(cfg).rows.iloc[0]
    assert row['l'] == 100
    assert row['ks'] < 0.1
    assert abs(row['z_mean']) < 0.1
    assert abs(row['z_sd'] - 1.0) < 0.1


def test_clt_sweep_fits_an_exponent():
    cfg = ExperimentConfig(mode='clt-sweep', n=[100], d=[4, 16], s=[0.5], replicates=2000, seed=5)
    report = run_clt_sweep(cfg)
    assert set(report.summary) == {'fit_exponent', 'fit_constant'}


# TV collapse

def test_tv_collapse_zero_coupling():
    cfg = ExperimentConfig(mode='tv-collapse', n=[8, 10], d=[2], beta=[0.0], graph='circulant')
    rows = run_tv_collapse(cfg).rows
    assert np.allclose(rows['tv'], 0.0, atol=1e-12)
    assert np.allclose(rows['risk_lower_bound'], 0.5)


def test_tv_collapse_small_product():
    cfg = ExperimentConfig(mode='tv-collapse', n=[8, 10, 12, 14], d=[2], scaling=[0.05], graph='circulant')
    report = run_tv_collapse(cfg)
    rows = report.rows.sort_values('n')
    assert rows['tv'].iloc[-1] <= 0.05
    assert rows['beta_cw'].iloc[0] == pytest.approx(8 * 2 * rows['beta'].iloc[0] / 7)
    assert list(report.summary['tv_trend_in_n']) == ['d=2,scaling=0.05']


def test_tv_collapse_along_a_vanishing_product():
    tvs = []
    for n in (8, 10, 12, 14):
        cfg = ExperimentConfig(mode='tv-collapse', n=[n], d=[2], scaling=[0.4 * 8 / n], graph='circulant')
        tvs.append(run_tv_collapse(cfg).rows['tv'].iloc[0])
    assert all(a > b for a, b in zip(tvs, tvs[1:]))


def test_tv_grows_with_the_product():
    cfg = ExperimentConfig(mode='tv-collapse', n=[10], d=[2], scaling=[0.25, 0.5, 1.0], graph='circulant')
    tv = run_tv_collapse(cfg).rows.sort_values('scaling')['tv'].to_numpy()
    assert np.all(np.diff(tv) > 0)


def test_tv_collapse_ergm():
    cfg = ExperimentConfig(mode='tv-collapse', model='ergm', n=[4, 5], beta=[0.0, 0.5], p=0.5)
    rows = run_tv_collapse(cfg).rows
    zero = rows[rows['beta2'] == 0.0]
    assert np.allclose(zero['tv'], 0.0, atol=1e-12)
    assert (rows[rows['beta2'] == 0.5]['tv'] > 0).all()


# calibration

def test_calibration_curve():
    cfg = small_ising(mode='calibration', null_beta=[0.0, 0.5], thresholds=[100.0, 0.0, 1.0], beta=[])
    rows = calibrate(cfg).rows
    assert rows['threshold'].tolist() == [0.0, 1.0, 100.0]
    rates = rows['type1_rate'].to_numpy()
    assert np.all(np.diff(rates) <= 0)
    last = rows.iloc[-1]
    assert last['type1_rate'] == pytest.approx(last['alpha_n_empirical'])
    first = rows.iloc[0]
    assert first['type1_bound'] == pytest.approx(first['alpha_n_exact'] + 0.5 + first['tau_n'])


def test_calibration_ergm():
    cfg = ExperimentConfig(mode='calibration', model='ergm', n=[8], null_p=[0.4, 0.6], delta=0.2,
                           replicates=200, thresholds=[0.0, 2.0], seed=2)
    rows = calibrate(cfg).rows
    assert len(rows) == 2
    assert rows['type1_rate'].iloc[0] >= rows['type1_rate'].iloc[1]
    assert rows['type1_bound'].iloc[1] == pytest.approx(
        rows['alpha_n_exact'].iloc[1] + norm.sf(2.0) + rows['tau_n'].iloc[1])


def test_calibration_rate_stays_under_bound():
    cfg = ExperimentConfig(mode='calibration', n=[200], d=[4], null_beta=[0.0, 0.5], null_h=[0.0],
                           epsilon=0.3, ks_constant=0.3, thresholds=[0.5, 1.0, 1.5, 2.0],
                           replicates=1000, seed=11)
    rows = calibrate(cfg).rows
    assert len(rows) == 4
    for _, row in rows.iterrows():
        assert row['type1_ci_high'] <= row['type1_bound']


# reports

def test_report_files(tmp_path):
    report = run_experiment(small_ising())
    csv_path, json_path = report.write(str(tmp_path / 'out' / 'ising'))
    frame = pd.read_csv(csv_path)
    assert list(frame.columns) == list(report.rows.columns)
    assert len(frame) == 1
    with open(json_path) as f:
        sidecar = json.load(f)
    assert sidecar['mode'] == 'ising-threshold'
    assert sidecar['experiment']['seed'] == 7
    assert 'ks_constant' in sidecar['settings']
    assert sidecar['columns'] == list(report.rows.columns)


def test_summarize_reports(tmp_path):
    first = run_ising_threshold(small_ising(beta=[0.0, 0.3]))
    second = run_ising_threshold(small_ising(beta=[0.0], seed=8))
    a, _ = first.write(str(tmp_path / 'a'))
    b, _ = second.write(str(tmp_path / 'b'))
    summary = summarize_reports([a, b])
    assert list(summary['source'].unique()) == ['a', 'b']
    assert len(summary) == 3
    assert (summary['risk'] >= summary[['type1_rate', 'type2_rate']].max(axis=1) - 1e-12).all()

    calib, _ = calibrate(small_ising(mode='calibration', beta=[])).write(str(tmp_path / 'c'))
    with pytest.raises(ConfigurationError):
        summarize_reports([calib])
    with pytest.raises(ConfigurationError):
        summarize_reports([])


# desk-scale runs

@pytest.mark.slow
def test_clt_at_scale():
    cfg = ExperimentConfig(mode='clt-sweep', n=[2000], d=[10], s=[0.5], replicates=100_000, workers=2)
    row = run_clt_sweep(cfg).rows.iloc[0]
    assert row['ks'] <= 0.05
    assert row['ks_bound'] == pytest.approx((10 / 2000) ** 0.25, rel=1e-9)


@pytest.mark.slow
def test_ising_above_threshold():
    cfg = ExperimentConfig(mode='ising-threshold', n=[500], d=[10], scaling=[10.0], L=10.0, c=1.0,
                           epsilon='auto', alpha_target=0.01, ks_constant=2.5e-4,
                           replicates=2000, workers=2)
    row = run_ising_threshold(cfg).rows.iloc[0]
    assert row['threshold'] == pytest.approx(1.81, abs=0.02)
    assert row['risk'] <= 0.10


@pytest.mark.slow
def test_ergm_above_threshold():
    cfg = ExperimentConfig(mode='ergm-threshold', n=[100], scaling=[8.0], p=0.5, threshold=1.4,
                           replicates=1000, workers=2)
    row = run_ergm_threshold(cfg).rows.iloc[0]
    assert row['beta1'] == pytest.approx(-0.784)
    assert row['risk'] <= 0.15


@pytest.mark.slow
def test_null_rejection_rate_under_rule_threshold():
    cfg = ExperimentConfig(mode='ising-threshold', n=[1000], d=[4], beta=[0.0], null_beta=[0.0, 0.5],
                           null_h=[0.0], epsilon=0.3, L=10.0, c=1.0, ks_constant=0.2, sweeps=1,
                           replicates=5000, workers=2, seed=3)
    row = run_ising_threshold(cfg).rows.iloc[0]
    tau = 0.2 * (4 / 1000) ** 0.25
    assert row['tau_n'] == pytest.approx(tau)
    assert row['threshold'] == pytest.approx(threshold_from_rule(tau, 10.0, c=1.0))
    assert row['alpha_n_exact'] < 1e-6
    assert row['type1_rate'] <= norm.sf(row['threshold']) + row['tau_n']
    assert row['type1_ci_high'] <= row['alpha_n_exact'] + norm.sf(row['threshold']) + row['tau_n']

    calibration = calibrate(ExperimentConfig(
        mode='calibration', n=[1000], d=[4], null_beta=[0.0, 0.5], null_h=[0.0], epsilon=0.3,
        ks_constant=0.2, thresholds=[0.5, 1.0, 1.5, 2.0], replicates=5000, workers=2, seed=3)).rows
    assert (calibration['type1_ci_high'] <= calibration['type1_bound']).all()
