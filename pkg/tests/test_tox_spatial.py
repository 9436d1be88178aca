import os
import numpy as np
import rwdiff as rw
import pytest

fibers = ['r3', 's3', 'h3']


def _maxresidual(traj):
    return max(rw.constraint_residuals(traj.state(i), traj.fiber).max for i in range(len(traj)))


def test_fibers():
    rw.heading('test_fibers()')
    fiber = rw.Fiber.parse('h3')
    assert fiber.kappa == -1 and fiber.d == 3 and fiber.ambient_dim == 4
    assert fiber.label == 'h3' and fiber.kind == 'Hyperbolic'
    assert rw.Fiber.parse('s4').ambient_dim == 5
    assert rw.Fiber.parse('flat').label == 'r3'
    assert rw.Fiber.parse('hyperbolic', d=5).label == 'h5'
    assert rw.Fiber.parse(fiber) is fiber
    assert fiber.inner(fiber.origin(), fiber.origin()) == -1
    assert np.array_equal(fiber.signature(), [-1, 1, 1, 1])
    with pytest.raises(rw.ConfigurationError):
        rw.Fiber.parse('h3', d=4)
    with pytest.raises(rw.DomainError):
        rw.Fiber(0, 2)
    with pytest.raises(rw.DomainError):
        rw.Fiber.parse('torus3')
    with pytest.raises(rw.DomainError):
        rw.SpatialState(x=[0, 0, 0], fiber=fiber)
    return fiber


def test_projection():
    rw.heading('test_projection()')
    sphere = rw.Fiber(1, 3)
    x, theta = rw.project_to_manifold([1.1, 0, 0, 0], [0, 1, 0, 0], sphere)
    assert np.allclose(x, [1, 0, 0, 0]) and np.allclose(theta, [0, 1, 0, 0])
    with pytest.raises(rw.ConstraintError):
        rw.project_to_manifold([1, 0, 0, 0], [2, 0, 0, 0], sphere)

    hyper = rw.Fiber(-1, 3)
    x, theta = rw.project_to_manifold([11, 10, 0, 0], [0.3, 0.2, 1.0, 0.5], hyper)
    assert np.isclose(x[0], np.sqrt(101))
    res = rw.constraint_residuals(rw.SpatialState(x=x, theta=theta, fiber=hyper), hyper)
    assert res.max < 1e-12
    with pytest.raises(rw.ConstraintError):
        rw.project_to_manifold([-1, 0, 0, 0], [0, 1, 0, 0], hyper) # Lower sheet
    with pytest.raises(rw.ConstraintError):
        rw.project_to_manifold([0, 0, 0], [0, 0, 0], rw.Fiber(0, 3))
    lower = rw.SpatialState(x=[-1, 0, 0, 0], theta=[0, 1, 0, 0], fiber=hyper)
    assert rw.constraint_residuals(lower, hyper).max == np.inf
    return res


def test_geodesic():
    rw.heading('test_geodesic()')
    rng = rw.makerng(2)
    phi = 0.7
    for name in fibers:
        fiber = rw.Fiber.parse(name)
        sp = rw.random_state(fiber, rng)
        assert rw.constraint_residuals(sp, fiber).max < 1e-12
        x, theta = rw.geodesic_flow(sp.x, sp.theta, fiber, phi)
        moved = rw.SpatialState(x=x, theta=theta, fiber=fiber)
        assert rw.constraint_residuals(moved, fiber).max < 1e-12, name
        if fiber.kappa == 0:
            assert np.isclose(np.linalg.norm(x - sp.x), phi)
        elif fiber.kappa == 1:
            assert np.isclose(np.dot(x, sp.x), np.cos(phi))
            again = rw.geodesic_flow(sp.x, sp.theta, fiber, 2*np.pi)[0]
            assert np.allclose(again, sp.x)
        else:
            assert np.isclose(-fiber.inner(x, sp.x), np.cosh(phi))
    hyper = rw.Fiber.parse('h3')
    with pytest.raises(rw.NumericalFailure):
        rw.geodesic_flow(hyper.origin(), hyper.default_direction(), hyper, 1000.0)
    return moved


def test_noise():
    rw.heading('test_noise()')
    rng = rw.makerng(4)
    for name in fibers:
        fiber = rw.Fiber.parse(name)
        sp = rw.random_state(fiber, rng, scale=0.5)
        for i in range(20):
            u = rw.tangent_noise(fiber, sp.x, sp.theta, rng.standard_normal(fiber.ambient_dim))
            assert abs(fiber.inner(u, sp.theta)) < 1e-10, name
            if fiber.kappa != 0:
                assert abs(fiber.inner(u, sp.x)) < 1e-10, name

    fiber = rw.Fiber.parse('h3')
    x, theta = rw.project_to_manifold([1.2, 0.5, 0, 0], [0, 0.3, 1, 0], fiber)
    draws = np.array([rw.tangent_noise(fiber, x, theta, xi) for xi in rng.standard_normal((10000, 4))])
    covariance = draws.T @ draws/len(draws)
    assert np.allclose(covariance, rw.bracket(fiber, x, theta), atol=0.1)
    return covariance


def test_bracket():
    rw.heading('test_bracket()')
    e0, e1 = np.eye(4)[0], np.eye(4)[1]
    expected = np.diag([0, 0, 1, 1])
    assert np.allclose(rw.bracket(rw.Fiber(1, 3), e0, e1), expected)
    assert np.allclose(rw.bracket(rw.Fiber(-1, 3), e0, e1), expected)
    flat = rw.bracket(rw.Fiber(0, 3), np.zeros(3), np.eye(3)[0])
    assert np.allclose(flat, np.diag([0, 1, 1]))
    return flat


def test_frames():
    rw.heading('test_frames()')
    rng = rw.makerng(6)
    for name in fibers:
        fiber = rw.Fiber.parse(name)
        for i in range(5):
            frame = rw.direction_frame(rw.random_state(fiber, rng), fiber)
            assert len(frame) == 3
            assert np.isclose(np.linalg.norm(frame), 1.0), name
    origin = rw.SpatialState(fiber=rw.Fiber.parse('h3'))
    assert np.allclose(rw.direction_frame(origin, rw.Fiber.parse('h3')), [1, 0, 0])
    assert rw.angular_coverage(np.eye(3)) == 0.5
    assert rw.angular_coverage(np.vstack([np.eye(3), -np.eye(3)])) == 1.0
    return frame


def test_step_spatial():
    rw.heading('test_step_spatial()')
    model = rw.catalog('constant')
    fiber = rw.Fiber.parse('s3')
    p = rw.StepParams(sigma=0, ds=0.01, adaptive=False)
    before = rw.TemporalState(t=1, a=1, model=model)
    after = rw.step_temporal(before, model, p, 0.0)
    sp = rw.SpatialState(fiber=fiber)
    new = rw.step_spatial(sp, before, after, fiber, p, np.zeros(4))
    assert np.isclose(np.dot(new.x, sp.x), np.cos(0.01)) # Pure geodesic at unit speed
    assert rw.constraint_residuals(new, fiber).max < 1e-12
    stopped = rw.TemporalState(t=1, a=0, model=model)
    with pytest.raises(rw.DegenerateVelocity):
        rw.step_spatial(sp, stopped, after, fiber, p, np.zeros(4))
    return new


def test_simulate_full():
    rw.heading('test_simulate_full()')
    model = rw.catalog('sinh')
    fiber = rw.Fiber.parse('h3')
    p = rw.StepParams(ds=1e-2)
    init = rw.TemporalState(t=1, a=1, model=model)
    traj = rw.simulate_full(init, rw.SpatialState(fiber=fiber), model, fiber, p, 5, rw.makerng(11, 0))
    assert traj.termination.kind == rw.Termination.ProperTimeBudget
    assert traj.x.shape == (len(traj), 4) and traj.theta.shape == (len(traj), 4)
    assert _maxresidual(traj) <= 1e-9
    assert np.all((traj.phase >= 0) & (traj.phase < 2*np.pi))
    again = rw.simulate_full(init, rw.SpatialState(fiber=fiber), model, fiber, p, 5, rw.makerng(11, 0))
    assert np.array_equal(traj.x, again.x)

    thinned = rw.simulate_full(init, rw.SpatialState(fiber=fiber), model, fiber, p.replace(thin=5), 5, rw.makerng(11, 0))
    assert len(thinned.x) == len(thinned.temporal) == 101
    assert np.allclose(thinned.x, traj.x[::5])

    with pytest.raises(rw.ConfigurationError):
        rw.simulate_full(init, rw.SpatialState(fiber=fiber), model, fiber, p.replace(d=4), 5, rw.makerng(0))
    with pytest.raises(rw.DomainError):
        bad = rw.SpatialState(x=[2, 0, 0, 0], fiber=rw.Fiber.parse('s3'))
        rw.simulate_full(init, bad, model, rw.Fiber.parse('s3'), p, 5, rw.makerng(0))
    return traj


def test_trajectory_io(tmp_path):
    rw.heading('test_trajectory_io()')
    model = rw.catalog('power', c=1)
    fiber = rw.Fiber.parse('s3')
    traj = rw.simulate_full(rw.TemporalState(t=1, a=1, model=model), rw.SpatialState(fiber=fiber), model, fiber, rw.StepParams(ds=1e-2), 1, rw.makerng(1))
    filename = traj.to_csv(str(tmp_path/'traj.csv'))
    assert os.path.isfile(str(tmp_path/'traj.json'))
    loaded = rw.Trajectory.from_csv(filename)
    assert loaded.fiber.label == 's3'
    assert np.array_equal(loaded.x, traj.x) and np.array_equal(loaded.theta, traj.theta)
    assert np.array_equal(loaded.temporal.tdot, traj.temporal.tdot)

    bare = traj.to_csv(str(tmp_path/'bare.csv'), sidecar=False)
    with pytest.raises(rw.ConfigurationError):
        rw.Trajectory.from_csv(bare)
    assert rw.Trajectory.from_csv(bare, fiber=fiber).x.shape == traj.x.shape
    return loaded


def test_polar():
    rw.heading('test_polar()')
    fiber = rw.Fiber.parse('h3')
    x, theta = rw.project_to_manifold([np.sqrt(10), 3, 0, 0], [0, 0.4, 1, 0], fiber)
    ts = rw.TemporalState(t=1, a=2, model=rw.catalog('constant'))
    pol = rw.polar_diagnostics(rw.SpatialState(x=x, theta=theta, fiber=fiber), ts)
    assert np.isclose(pol.r, 3)
    assert np.isclose(pol.c_over_a**2 + pol.rho_over_r**2, 1.0)
    assert np.isclose(pol.c, 2*pol.c_over_a)
    with pytest.raises(rw.ConstraintError):
        rw.polar_diagnostics(rw.SpatialState(fiber=fiber), ts)
    assert np.isclose(rw.remaining_variation(rw.catalog('power', c=2), 1.0), 1.0, rtol=1e-6)
    return pol


def test_boundary():
    rw.heading('test_boundary()')
    model = rw.catalog('sinh')
    fiber = rw.Fiber.parse('h3')
    traj = rw.simulate_full(rw.TemporalState(t=1, a=1, model=model), rw.SpatialState(fiber=fiber), model, fiber, rw.StepParams(ds=1e-2), 20, rw.makerng(5))
    limit = rw.boundary_limit(traj, model)
    assert limit.kind == 'FiberPoint' and limit.certified
    assert np.array_equal(limit.x_inf, traj.x[-1])
    short = rw.simulate_full(rw.TemporalState(t=1, a=1, model=model), rw.SpatialState(fiber=fiber), model, fiber, rw.StepParams(ds=1e-2), 0.5, rw.makerng(5))
    early = rw.boundary_limit(short, model, tol_tail=10)
    assert early.deviation < 10 and not early.certified
    assert early.kind == 'Unconverged' # A Cauchy tail needs the certificate too

    model = rw.catalog('power', c=1)
    for name, kind in [('r3', 'NullDirection'), ('s3', 'GreatCircle')]:
        fiber = rw.Fiber.parse(name)
        traj = rw.simulate_full(rw.TemporalState(t=1, a=1, model=model), rw.SpatialState(fiber=fiber), model, fiber, rw.StepParams(ds=1e-2), 30, rw.makerng(8))
        limit = rw.boundary_limit(traj, model)
        assert limit.kind == kind, name
    assert np.isclose(limit.norm_U, 1.0, atol=1e-2) and abs(limit.inner_UV) < 1e-2
    assert limit.residual < 1e-2

    failed = rw.Trajectory(temporal=rw.TemporalPath(s=[0, 1], t=[1, 2], tdot=[1, 1], a=[0, 0], clock=[0, 0], conformal=[0, 0],
                                                    termination=rw.objdict(kind=rw.Termination.NumericalFailure, message='overflow')),
                           x=traj.x[:2], theta=traj.theta[:2], fiber=fiber)
    assert rw.boundary_limit(failed, model).kind == 'Unconverged'
    return limit


if __name__ == '__main__':
    test_fibers()
    test_projection()
    test_geodesic()
    test_noise()
    test_bracket()
    test_frames()
    test_step_spatial()
    test_simulate_full()
    test_polar()
    test_boundary()
