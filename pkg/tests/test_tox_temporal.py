import numpy as np
import rwdiff as rw
import pytest
from scipy import integrate


def test_step():
    rw.heading('test_step()')
    model = rw.catalog('constant')
    p = rw.StepParams(sigma=1, d=3, ds=0.01, adaptive=False)
    state = rw.TemporalState(t=1, a=1, model=model)
    assert np.isclose(state.tdot, np.sqrt(2))
    new = rw.step_temporal(state, model, p, 0.5)
    assert np.isclose(new.a**2, 1.211421356, atol=1e-9)
    assert np.isclose(new.t, 1.0141421356, atol=1e-10)
    assert np.isclose(new.s, 0.01)

    truncated = rw.step_temporal(state, model, p, -100.0) # Large negative draw: a^2 truncated at 0
    assert truncated.a == 0 and truncated.tdot == 1.0

    implicit = rw.step_temporal(state, model, p.replace(scheme='implicit'), 0.5)
    assert abs(implicit.tdot - new.tdot) < 0.05 # Same step to first order

    t, tdot = rw.step_tamed(1.0, 2.0, model, p.replace(sigma=0), 0.01, 0.0)
    assert np.isclose(t, 1.02) and tdot == 2.0
    assert rw.step_tamed(1.0, 1.0001, rw.catalog('constant(H=100)'), p, 0.01, -50)[1] == 1.0 # Floored at 1

    with pytest.raises(rw.DomainError):
        rw.StepParams(d=2)
    with pytest.raises(rw.DomainError):
        rw.StepParams(scheme='rk4')
    with pytest.raises(rw.DomainError):
        rw.TemporalState.from_tdot(1.0, 0.5, model)
    crunch = rw.catalog('big_crunch_radiation')
    with pytest.raises(rw.DomainError):
        rw.step_temporal(rw.TemporalState(t=2-1e-10, a=1, model=crunch), crunch, p, 0.0)
    return new


def test_stepsize():
    rw.heading('test_stepsize()')
    p = rw.StepParams(ds=0.1)
    assert rw.stepsize(10.0, 1.0, np.inf, p) == 0.1
    assert np.isclose(rw.stepsize(0.01, 2.0, np.inf, p), 0.01/20)
    assert np.isclose(rw.stepsize(1.99, 1.0, 2.0, p), 0.001)
    assert rw.stepsize(10.0, 1.0, np.inf, p, remaining=0.05) == 0.05
    assert rw.stepsize(0.01, 2.0, np.inf, p.replace(adaptive=False)) == 0.1
    return


def test_simulate():
    rw.heading('test_simulate()')
    model = rw.catalog('power', c=1)
    p = rw.StepParams(ds=1e-2)
    init = rw.TemporalState(t=1, a=1, model=model)
    path = rw.simulate_temporal(init, model, p, 5, rw.makerng(7, 0))
    assert path.termination.kind == rw.Termination.ProperTimeBudget
    assert np.isclose(path.s[-1], 5.0)
    assert np.all(np.diff(path.s) > 0) and np.all(np.diff(path.t) > 0)
    assert np.all(path.tdot >= 1) and np.all(np.diff(path.clock) >= 0)
    assert path.clock[0] == 0 and path.conformal[0] == 0
    assert np.max(rw.pseudonorm_residual(path, model)) <= 1e-12

    again = rw.simulate_temporal(init, model, p, 5, rw.makerng(7, 0))
    assert np.array_equal(path.tdot, again.tdot) # Same stream, same path
    other = rw.simulate_temporal(init, model, p, 5, rw.makerng(7, 1))
    assert not np.array_equal(path.tdot, other.tdot)

    thinned = rw.simulate_temporal(init, model, p.replace(thin=10), 5, rw.makerng(7, 0))
    assert len(thinned) == 51
    assert np.allclose(thinned.tdot, path.tdot[::10])

    crunch = rw.catalog('big_crunch_radiation')
    path = rw.simulate_temporal(rw.TemporalState.from_tdot(0.5, 2.0, crunch), crunch, rw.StepParams(ds=1e-2), 50, rw.makerng(1))
    assert path.termination.kind == rw.Termination.HorizonReached
    assert 2 - 1e-9 <= path.t[-1] < 2
    assert path.s[-1] < 50

    with pytest.raises(rw.DomainError):
        rw.TemporalState(t=3, a=1, model=crunch)
    with pytest.raises(rw.DomainError):
        rw.simulate_temporal(rw.TemporalState(t=3, a=1, model=model), crunch, p, 5, rw.makerng(1))
    with pytest.raises(rw.ConfigurationError):
        rw.simulate_temporal(init, model, p, 5)
    return path


def test_path_io(tmp_path):
    rw.heading('test_path_io()')
    model = rw.catalog('sinh')
    path = rw.simulate_temporal(rw.TemporalState(t=1, a=1, model=model), model, rw.StepParams(ds=1e-2), 2, rw.makerng(3))
    filename = path.to_csv(str(tmp_path/'path.csv'))
    with open(filename) as f:
        assert f.readline().strip() == 's,t,tdot,a,clock,conformal'
    loaded = rw.TemporalPath.from_csv(filename)
    for col in ['s', 't', 'tdot', 'a', 'clock', 'conformal']:
        assert np.array_equal(getattr(loaded, col), getattr(path, col))
    assert loaded.termination.kind == path.termination.kind
    assert rw.ExpansionModel.from_dict(loaded.meta.model).label == 'sinh'
    return loaded


def test_fixed():
    rw.heading('test_fixed()')
    model = rw.catalog('sinh')
    p = rw.StepParams()
    init = rw.TemporalState.from_tdot(1.0, 2.0, model)
    increments = rw.makerng(5).standard_normal(200)
    t1, x1 = rw.integrate_fixed(init, model, p, 1e-3, increments, scheme='euler')
    t2, x2 = rw.integrate_fixed(init, model, p, 1e-3, increments, scheme='tamed')
    assert len(t1) == len(t2) == 201
    assert t1[0] == t2[0] == 1.0 and x1[0] == x2[0]
    assert np.max(np.abs(x1 - x2)/x2) < 0.1
    return x1


def test_entrance():
    rw.heading('test_entrance()')
    model = rw.catalog('power', c=2/3)
    state = rw.entrance_start(model, 1.0)
    assert 3e-5 < state.t < 1e-4
    assert model.alpha(state.t) >= 1e-3*(1 - 1e-9)
    assert state.a == 1.0 and state.s == 0
    with pytest.raises(rw.ModelError):
        rw.entrance_start(rw.catalog('power', c=1), 1.0)
    with pytest.raises(rw.DomainError):
        rw.entrance_start(model, 0.0)
    return state


def test_invariant():
    rw.heading('test_invariant()')
    H, sigma, d = 1.0, 1.0, 3
    assert np.isclose(rw.invariant_moment(H, sigma, d, lambda x: 1.0), 1.0, rtol=1e-8)
    u, nu = rw.invariant_density(H, sigma, d, 2.0)
    assert np.isclose(u, np.sqrt(3)*np.exp(-4))
    assert np.isclose(nu, u/rw.invariant_normalization(H, sigma, d))

    cdf = rw.invariant_cdf(H, sigma, d)
    x = np.linspace(1, 10, 200)
    values = cdf(x)
    assert values[0] == 0 and np.all(np.diff(values) >= 0)
    assert cdf(1e6) == 1.0
    direct = integrate.quad(lambda y: rw.invariant_density(H, sigma, d, y)[1], 1, 2)[0]
    assert abs(cdf(2.0) - direct) < 1e-4

    draws = rw.sample_invariant(H, sigma, d, rw.makerng(0), size=20000)
    mean = rw.invariant_moment(H, sigma, d)
    assert np.all(draws > 1)
    assert abs(draws.mean() - mean) < 4*draws.std()/np.sqrt(len(draws))

    with pytest.raises(rw.DomainError):
        rw.invariant_density(H, sigma, d, 0.5)
    with pytest.raises(rw.DomainError):
        rw.invariant_cdf(0.0, sigma, d)
    return draws


def test_comparison():
    rw.heading('test_comparison()')
    model = rw.catalog('sinh')
    init = rw.TemporalState.from_tdot(1.0, 2.0, model)
    triple = rw.comparison_triple(init, model, rw.StepParams(ds=1e-2), 20, rw.makerng(3))
    assert len(triple.u) == len(triple.tdot) == len(triple.v)
    assert np.all(triple.u.tdot <= triple.tdot.tdot + 1e-9)
    assert np.all(triple.tdot.tdot <= triple.v.tdot + 1e-9)
    with pytest.raises(rw.DomainError):
        crunch = rw.catalog('big_crunch_radiation')
        rw.comparison_triple(rw.TemporalState(t=1, a=1, model=crunch), crunch, rw.StepParams(), 1, rw.makerng(0))
    return triple


def _synthetic_path(s, t, w, clock=None):
    if clock is None: clock = np.zeros_like(s)
    return rw.TemporalPath(s=s, t=t, tdot=np.sqrt(1+w**2), a=w*t, clock=clock, conformal=np.zeros_like(s), w=w)


def test_estimators():
    rw.heading('test_estimators()')
    model = rw.catalog('power', c=1)
    s = np.linspace(0, 100, 1001)
    path = _synthetic_path(s, np.exp(s/2), np.exp(s/2))
    rates = rw.rate_estimate(path, model)
    assert np.isclose(rates.rate_alpha, 0.5)
    assert np.isclose(rates.rate_tdot, 0.5, rtol=1e-6)
    assert np.isclose(rates.rate_int_alpha, 1.0, rtol=1e-6)
    assert rates.nsamples == 200
    with pytest.raises(rw.InsufficientSamples):
        rw.rate_estimate(_synthetic_path(s[:50], np.exp(s[:50]/2), np.exp(s[:50]/2)), model)

    ones = np.ones_like(s)
    converging = rw.clock_diagnostic(_synthetic_path(s, ones, ones, clock=1-np.exp(-s)))
    assert converging.kind == 'Converging' and np.isclose(converging.estimate, 1.0)
    diverging = rw.clock_diagnostic(_synthetic_path(s, ones, ones, clock=s))
    assert diverging.kind == 'Diverging' and np.isclose(diverging.slope, 1.0)
    with pytest.raises(rw.InsufficientSamples):
        rw.clock_diagnostic(_synthetic_path(s[:5], ones[:5], ones[:5]))

    remainder = rw.constant_h_decomposition(_synthetic_path(s, ones, np.sqrt(np.exp(2*s) - 1)), 1.0, 3)
    assert np.allclose(remainder, 0, atol=1e-9)
    return rates


if __name__ == '__main__':
    test_step()
    test_stepsize()
    test_simulate()
    test_fixed()
    test_entrance()
    test_invariant()
    test_comparison()
    test_estimators()
