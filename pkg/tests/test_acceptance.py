'''
Long-running checks of the asymptotic regimes. Run directly or through testall.py;
each block takes from seconds to a few minutes.
'''

import os
import tempfile
import numpy as np
import rwdiff as rw

torun = [
'pseudonorm',
'ergodic',
'rates',
'sandwich',
'transience',
'clock',
'greatcircle',
'escape',
'horizon',
'schemes',
'determinism',
]

if 'doplot' not in locals(): doplot = True
n_traj = 64
seeds = range(64)


# Residual of the pseudo-norm along every kind of path
if 'pseudonorm' in torun:
    for name in ['sinh', 'power(c=1)', 'big_crunch_radiation', 'power_exp(gamma=0,beta=0.5)']:
        model = rw.catalog(name)
        config = rw.EnsembleConfig(model=model, s_max=50, ds=1e-3)
        path = rw.simulate_temporal(config.initial_state(), model, config.params, 50, rw.makerng(0))
        worst = np.max(rw.pseudonorm_residual(path, model))
        print('%s: pseudo-norm residual %g' % (name, worst))
        assert worst <= 1e-12


# Occupation of tdot against the invariant law of the constant-H model
if 'ergodic' in torun:
    config = rw.EnsembleConfig(model='constant(H=1)', fiber='r3', n_traj=8, s_max=500, ds=1e-3, statistics=['occupation'], seed=1)
    stats = rw.run_ensemble(config)
    occ = stats.occupation
    reference = rw.invariant_moment(1, 1, 3, lambda x: 1/x**2)
    print('KS %g; mean 1/tdot^2 %g +/- %g vs %g' % (occ.ks_pooled, occ.mean_inv_square.estimate, occ.mean_inv_square.se, reference))
    assert occ.ks_pooled < 0.05
    assert abs(occ.mean_inv_square.estimate - reference) <= 3*occ.mean_inv_square.se

    draws = rw.sample_invariant(1, 1, 3, rw.makerng(2), size=100000)
    assert rw.ks_distance(draws, rw.invariant_cdf(1, 1, 3)) < 0.01
    assert abs(draws.mean() - rw.invariant_moment(1, 1, 3)) < 3*draws.std()/np.sqrt(len(draws))


# Lyapunov rates of tdot and alpha for polynomial expansion
if 'rates' in torun:
    for c,d,sigma in [(0,3,1), (1,3,1), (2,4,1)]:
        config = rw.EnsembleConfig(model=rw.catalog('power', c=c), fiber='r%i' % d, n_traj=n_traj, s_max=200, ds=1e-2, sigma=sigma, statistics=['rates'], seed=3)
        rates = rw.run_ensemble(config).rates
        expected_tdot = (d-1)*sigma**2/(2*(1+c))
        expected_alpha = (d-1)*sigma**2*c/(2*(1+c))
        print('c=%g d=%i: rate_tdot %g (%g), rate_alpha %g (%g)' % (c, d, rates.rate_tdot.estimate, expected_tdot, rates.rate_alpha.estimate, expected_alpha))
        assert abs(rates.rate_tdot.estimate - expected_tdot) <= 0.1*expected_tdot
        assert abs(rates.rate_alpha.estimate - expected_alpha) <= 0.1*max(expected_alpha, expected_tdot)


# Comparison processes sandwich tdot
if 'sandwich' in torun:
    models = [rw.catalog('sinh'), rw.ExpansionModel.from_functions(alpha=lambda t: t*(1+t))]
    for model in models:
        init = rw.TemporalState.from_tdot(1.0, 2.0, model)
        violations = 0
        for seed in seeds:
            triple = rw.comparison_triple(init, model, rw.StepParams(ds=1e-2), 20, rw.makerng(seed), verbose=0)
            violations += np.sum(triple.u.tdot > triple.tdot.tdot + 1e-10) + np.sum(triple.tdot.tdot > triple.v.tdot + 1e-10)
        print('%s: %i violations' % (model.label, violations))
        assert violations == 0


# Return counts stabilize only when H^d is integrable
if 'transience' in torun:
    growth = {}
    returns = {}
    reports = {}
    for beta in [0.5, 0.8]:
        model = rw.catalog('power_exp', gamma=0, beta=beta)
        counts = []
        for s_max in [100, 200, 400]:
            statistics = None if s_max == 400 else ['returns']
            config = rw.EnsembleConfig(model=model, fiber='r3', n_traj=16, s_max=s_max, ds=1e-2, statistics=statistics, seed=5)
            stats = rw.run_ensemble(config, verbose=0)
            counts.append(stats.returns.mean[2])
        returns[beta] = counts
        growth[beta] = np.diff(counts)
        prediction = rw.predict_regimes(model, 'r3', d=3, sigma=1)
        reports[beta] = rw.verify_regime(stats, prediction)
        print('beta=%g: mean returns %s, verdicts %s' % (beta, counts, [(c.claim, c.verdict) for c in reports[beta].claims]))
        assert prediction.tdot_behavior.as_transient_iff_Hd_integrable == (beta == 0.5)

    tol = rw.EnsembleConfig().tolerances
    assert growth[0.5][1] <= growth[0.5][0] + 1e-12
    assert growth[0.5][-1] <= tol.returns*max(1.0, returns[0.5][1])
    assert np.all(growth[0.8] > 0)
    assert growth[0.5][-1] < growth[0.8][-1]

    for beta,report in reports.items():
        verdicts = {claim.claim:claim.verdict for claim in report.claims}
        assert report.passed, verdicts
        assert verdicts['tdot_behavior'] == 'pass'
        allowed = ['position_behavior', 'causal_boundary'] if beta == 0.8 else []
        assert all(verdict == 'pass' for claim,verdict in verdicts.items() if claim not in allowed), verdicts


# Clock convergence against divergence
if 'clock' in torun:
    expected = {'big_crunch_radiation':'Converging', 'power(c=2/3)':'Converging', 'power(c=1)':'Converging',
                'sinh':'Diverging', 'constant(H=1)':'Diverging'}
    for name,kind in expected.items():
        config = rw.EnsembleConfig(model=name, fiber='r3', n_traj=n_traj, s_max=100, ds=1e-2, statistics=['clock'], seed=7)
        fractions = rw.run_ensemble(config, verbose=0).clock.fractions
        print('%s: %s' % (name, fractions))
        assert fractions.get(kind, 0) >= 0.9


# Random great circle on the sphere
if 'greatcircle' in torun:
    model = rw.catalog('constant')
    fiber = rw.Fiber.parse('s3')
    good = 0
    for seed in seeds:
        traj = rw.simulate_full(rw.TemporalState(t=1, a=1, model=model), rw.SpatialState(fiber=fiber), model, fiber, rw.StepParams(ds=1e-2, thin=10), 200, rw.makerng(seed), verbose=0)
        limit = rw.boundary_limit(traj, model)
        ok = limit.kind == 'GreatCircle' and abs(limit.norm_U-1) < 1e-2 and abs(limit.norm_V-1) < 1e-2 and abs(limit.inner_UV) < 1e-2 and limit.residual < 5e-2
        good += ok
    print('Great circles: %i of %i' % (good, len(seeds)))
    assert good >= 0.9*len(seeds)
    if doplot:
        rw.save_plotdata(traj, os.path.join(tempfile.mkdtemp(), 'greatcircle.csv'))


# Escape along the hyperboloid
if 'escape' in torun:
    config = rw.EnsembleConfig(model='power(c=1)', fiber='h3', n_traj=n_traj, s_max=30, ds=1e-2, statistics=['boundary'], seed=9)
    limits = rw.run_ensemble(config, verbose=0).boundary.limits
    good = sum([lim.kind == 'NullDirection' and lim.c_over_a_min >= 0.99 and lim.delta_deviation < 1e-2 for lim in limits])
    print('Null directions: %i of %i' % (good, len(limits)))
    assert good >= 0.9*len(limits)


# Fiber points behind finite future horizons
if 'horizon' in torun:
    config = rw.EnsembleConfig(model='sinh', fiber='h3', n_traj=n_traj, s_max=50, ds=1e-2, statistics=['boundary'], seed=11)
    limits = rw.run_ensemble(config, verbose=0).boundary.limits
    assert all(lim.certificate < 1e-3 for lim in limits)

    model = rw.catalog('big_crunch_radiation')
    fiber = rw.Fiber.parse('s3')
    for seed in seeds:
        traj = rw.simulate_full(rw.TemporalState.from_tdot(0.5, 2.0, model), rw.SpatialState(fiber=fiber), model, fiber, rw.StepParams(ds=1e-2), 50, rw.makerng(seed), verbose=0)
        assert traj.termination.kind == rw.Termination.HorizonReached
        tail = rw.tailslice(len(traj), 0.2)
        assert rw.cauchy_deviation(traj.temporal.a[tail]) < 1e-2


# Strong order of the temporal scheme and covariance of the spatial noise
if 'schemes' in torun:
    report = rw.oracle_compare(rw.EnsembleConfig(model='sinh', seed=2), h_list=[1e-2, 5e-3, 2.5e-3, 1.25e-3])
    print('Strong order %g, deviations %s' % (report.order, report.deviation))
    assert 0.35 <= report.order <= 0.65
    for name in ['r3', 's3', 'h3']:
        result = rw.covariance_test(rw.Fiber.parse(name), rng=rw.makerng(3))
        print('%s: statistic %g, p = %g' % (name, result.statistic, result.pvalue))
        assert result.passed


# Identical JSON whatever the number of workers
if 'determinism' in torun:
    folder = tempfile.mkdtemp()
    outputs = []
    for workers in [1, 4]:
        out = os.path.join(folder, 'stats_%i.json' % workers)
        code = rw.main(['ensemble', '--model', 'sinh', '--fiber', 'h3', '--n-traj', '8', '--s-max', '20', '--ds', '0.01', '--workers', str(workers), '--out', out])
        assert code == 0
        outputs.append(rw.loadtext(out))
    assert outputs[0] == outputs[1]
