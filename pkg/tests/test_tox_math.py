import numpy as np
import rwdiff as rw
import pytest


def test_tails():
    rw.heading('test_tails()')
    inds = rw.tailslice(1000, 0.2)
    assert (inds.start, inds.stop) == (800, 1000)
    with pytest.raises(rw.InsufficientSamples):
        rw.tailslice(100, 0.2, minlength=50)
    with pytest.raises(rw.DomainError):
        rw.tailslice(100, 1.5)
    x = np.linspace(0, 10, 50)
    slope, intercept = rw.linslope(x, 3*x + 1)
    assert np.isclose(slope, 3) and np.isclose(intercept, 1)
    assert np.isclose(rw.cauchy_deviation([1.0, 1.1, 0.95]), 0.15)
    assert rw.cauchy_deviation([[1,0,0], [1,0,0]]) == 0
    return slope


def test_cumulative():
    rw.heading('test_cumulative()')
    x = np.linspace(0, 1, 101)
    out = rw.cumtrapz(2*x, x)
    assert out[0] == 0
    assert np.allclose(out, x**2, atol=1e-12)

    s = np.linspace(0, 500, 5001)
    logint = rw.logcumtrapz(2*s, s)
    assert logint[0] == -np.inf
    assert np.all(np.isfinite(logint[1:])) # Would overflow outside log space
    exact = 2*s[-1] - np.log(2)
    assert abs(logint[-1] - exact) < 1e-2 # Trapezoid error of the exponential
    return logint


def test_tail_limit():
    rw.heading('test_tail_limit()')
    grid = rw.geomgrid()
    conv = rw.tail_limit(1 - 1/grid)
    assert conv.status == 'converged'
    assert abs(conv.limit - 1) < 1e-3
    div = rw.tail_limit(grid)
    assert div.status == 'divergent' and div.limit == np.inf
    with pytest.raises(rw.InsufficientSamples):
        rw.tail_limit([1, 2])
    assert rw.tail_limit([1, 2, np.nan, 3, 4, 5]).status == 'indeterminate'
    return conv


def test_improper_integral():
    rw.heading('test_improper_integral()')
    assert rw.improper_integral(lambda t: 1/t, 1.0, np.inf) == np.inf
    assert rw.improper_integral(lambda t: 1/t, 1.0, 0) == np.inf
    assert np.isclose(rw.improper_integral(lambda t: t**-2, 1.0, np.inf), 1.0, rtol=1e-6)
    assert np.isclose(rw.improper_integral(lambda t: t**-0.5, 1.0, 0), 2.0, rtol=1e-6)
    assert np.isclose(rw.improper_integral(lambda t: (2-t)**-0.5, 1.0, 2.0), 2.0, rtol=1e-6)
    return


def test_helpers():
    rw.heading('test_helpers()')
    s = np.linspace(0, 4, 9)
    assert rw.findinds(s >= 1.5)[0] == 3
    assert rw.findinds(np.eye(2))[1].tolist() == [0, 1]
    assert np.array_equal(rw.findinds([2,3,6,3], 6), [2])
    return


if __name__ == '__main__':
    test_tails()
    test_cumulative()
    test_tail_limit()
    test_improper_integral()
    test_helpers()
