import numpy as np
import rwdiff as rw
import pytest


def _path(s, tdot):
    s = np.asarray(s, dtype=float)
    tdot = np.asarray(tdot, dtype=float)
    zeros = np.zeros_like(s)
    return rw.TemporalPath(s=s, t=1+s, tdot=tdot, a=np.sqrt(tdot**2-1), clock=zeros, conformal=zeros)


def _crunch(**kwargs):
    return rw.EnsembleConfig(model='big_crunch_radiation', fiber='r3', n_traj=4, s_max=5, ds=1e-2, seed=2, **kwargs)


def test_config(tmp_path):
    rw.heading('test_config()')
    config = rw.EnsembleConfig(model='sinh', fiber='h3', n_traj=8, s_max=20, ds=1e-2, seed=1)
    assert config.d == 3 and config.sigma == 1.0 and config.burn_in == 5.0
    assert config.statistics == ['termination', 'rates', 'clock', 'returns', 'occupation', 'exceedance', 'boundary', 'direction']
    assert np.isclose(config.initial_state().tdot, 2.0) and config.initial_state().t == 1.0
    assert rw.EnsembleConfig(statistics='rates').statistics == ['termination', 'rates']
    assert rw.ensemble_config(model='sinh', n_traj=3).n_traj == 3
    assert _crunch().initial_state().t == 0.5
    assert rw.EnsembleConfig(model='sinh', init={'a0':3.0}).initial_state().a == 3.0
    entrance = rw.EnsembleConfig(model=rw.catalog('power', c=2/3), init={'mode':'entrance'}).initial_state()
    assert entrance.t < 1e-4

    for kwargs in [dict(fiber='h3', d=4), dict(n_traj=0), dict(statistics=['rats']), dict(tolerances={'kss':1}),
                   dict(init={'mode':'bogus'}), dict(s_max=20, burn_in=30), dict(level=1)]:
        with pytest.raises(rw.ConfigurationError):
            rw.EnsembleConfig(**kwargs)

    cfg = rw.odict([('model.family', 'sinh'), ('fiber', 'h3'), ('sim.ds', 0.01), ('ensemble.n_traj', 4), ('tol.ks', 0.07)])
    config = rw.EnsembleConfig.from_dict(cfg)
    assert config.tolerances.ks == 0.07 and config.n_traj == 4 and config.fiber.label == 'h3'
    config = rw.load_ensemble_config(rw.saveconfig(str(tmp_path/'run.cfg'), cfg))
    assert config.model.label == 'sinh'
    config = rw.EnsembleConfig.from_dict({'model.family':'sinh', 'init.a0':3.0, 'tol.tail':0.05})
    assert config.initial_state().a == 3.0 and config.tolerances.tail == 0.05
    with pytest.raises(rw.ConfigurationError) as E:
        rw.EnsembleConfig.from_dict({'model.family':'sinh', 'sim.sgima':1.0})
    assert 'sim.sigma' in str(E.value)
    with pytest.raises(rw.ConfigurationError):
        rw.EnsembleConfig.from_dict({'model.family':'sinh', 'sim.sigma':-1.0})
    assert rw.dumpjson(config.to_dict()) # Serializable
    return config


def test_estimators():
    rw.heading('test_estimators()')
    occ = rw.occupation_measure(_path([0, 1, 2, 3], [1, 2, 3, 4]), burn_in=1)
    assert np.array_equal(occ['values'], [2, 3])
    assert np.allclose(occ['weights'], [0.5, 0.5]) and occ.duration == 2
    assert np.isclose(occ.mean_inv_square, 0.5/4 + 0.5/9)
    with pytest.raises(rw.InsufficientSamples):
        rw.occupation_measure(_path([0, 1, 2, 3], [1, 2, 3, 4]), burn_in=5)

    uniform = lambda x: np.clip(x, 0, 1)
    assert np.isclose(rw.ks_distance([0.25, 0.75], uniform), 0.25)
    assert np.isclose(rw.ks_distance([0.25, 0.75], uniform, weights=[1, 1]), 0.25)
    assert np.isclose(rw.ks_distance([0.25, 0.75, 0.75], uniform, weights=[2, 1, 1]), 0.25)

    cdf = rw.invariant_cdf(1, 1, 3)
    draws = rw.sample_invariant(1, 1, 3, rw.makerng(1), size=10000)
    assert rw.ks_distance(draws, cdf) < 0.03
    assert rw.ks_distance(draws + 1, cdf) > 0.2
    hist = rw.occupation_histogram(rw.objdict(values=draws, weights=np.full(len(draws), 1/len(draws))))
    assert hist.overflow < 1e-9
    assert rw.ks_distance(hist, cdf) < 0.03

    path = _path([0, 1, 2, 3, 4], [3, 1.5, 3, 1.5, 3])
    assert rw.return_count(path, 2.0) == 2
    assert rw.return_count(path, 2.0, burn_in=2) == 1
    with pytest.raises(rw.DomainError):
        rw.return_count(path, 1.0)

    path = _path(np.linspace(0, 10, 101), 1 + np.linspace(0, 10, 101))
    exc = rw.exceedance(path, times=[1, 5, 10, 12])
    assert np.array_equal(exc[:, :3], [[0, 1, 1], [0, 1, 1], [0, 0, 1]])
    assert np.all(np.isnan(exc[:, 3]))
    return exc


def test_run_ensemble():
    rw.heading('test_run_ensemble()')
    config = _crunch(workers=1)
    stats = rw.run_ensemble(config, verbose=0)
    assert stats.kind == 'EnsembleStats'
    assert stats.termination.fractions[rw.Termination.HorizonReached] == 1.0
    assert stats.failures == 0
    assert stats.boundary.fractions['FiberPoint'] == 1.0
    assert rw.dumpjson(stats) # Serializable

    parallel = rw.run_ensemble(_crunch(workers=2), verbose=0)
    assert parallel.termination.s_end == stats.termination.s_end # Same streams whatever the pool

    single = rw.run_trajectory(config, 3)
    assert single.termination.s_end == stats.termination.s_end[3]

    prediction = rw.predict_regimes(config.model, config.fiber, d=3, sigma=1)
    report = rw.verify_regime(stats, prediction)
    assert report.kind == 'VerdictReport' and report.passed
    verdicts = {claim.claim:claim.verdict for claim in report.claims}
    assert verdicts['tdot_behavior'] == 'pass'
    assert verdicts['lifetime_finite'] == 'pass'
    assert verdicts['position_behavior'] == 'pass'
    return report


def test_occupation():
    rw.heading('test_occupation()')
    config = rw.EnsembleConfig(model='sinh', fiber='h3', n_traj=2, s_max=10, ds=1e-2, seed=4, workers=1)
    stats = rw.run_ensemble(config, verbose=0)
    assert stats.H_inf > 0.99
    assert 0.99 < np.sum(stats.occupation.counts) <= 1 + 1e-9
    assert 0 < stats.occupation.ks_pooled < 1
    assert stats.rates.rate_tdot.n == 2
    report = rw.verify_regime(stats, rw.predict_regimes(config.model, 'h3', d=3, sigma=1))
    assert len(report.claims) == 6
    assert all(claim.verdict in ['pass', 'fail', 'unconverged'] for claim in report.claims)
    return stats


def test_verdicts():
    rw.heading('test_verdicts()')
    stats = rw.run_ensemble(_crunch(statistics=['termination'], workers=1), verbose=0)
    prediction = rw.predict_regimes(rw.catalog('big_crunch_radiation'), 0)
    with pytest.raises(rw.ConfigurationError):
        rw.verify_regime(stats, prediction) # The clock claim needs clock statistics

    vague = rw.objdict(indeterminate=True, reason='growth class: undecided', model='user', fiber_curvature=0, d=3, sigma=1.0)
    report = rw.verify_regime(stats, vague)
    assert report.passed and report.counts.unconverged == len(report.claims)
    return report


def test_oracle():
    rw.heading('test_oracle()')
    config = rw.EnsembleConfig(model='sinh', seed=2)
    report = rw.oracle_compare(config, h_list=[4e-2, 2e-2, 1e-2], n_paths=2, s_max=1, verbose=0)
    assert len(report.deviation) == 3
    assert np.all(report.deviation >= 0) and np.isfinite(report.order)
    with pytest.raises(rw.ConfigurationError):
        rw.oracle_compare(config, h_list=[1e-2, 3e-3, 1e-3])
    with pytest.raises(rw.ConfigurationError):
        rw.oracle_compare(config, h_list=[1e-2, 5e-3])
    return report


def test_covariance():
    rw.heading('test_covariance()')
    for name in ['r3', 's3', 'h3']:
        result = rw.covariance_test(rw.Fiber.parse(name), nsamples=20000, rng=rw.makerng(0), level=1e-4)
        assert result.rank == 2, name
        assert result.passed, name
    return result


if __name__ == '__main__':
    test_estimators()
    test_run_ensemble()
    test_occupation()
    test_verdicts()
    test_oracle()
    test_covariance()
