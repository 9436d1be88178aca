import numpy as np
import rwdiff as rw
import pytest


def test_colorize():
    rw.heading('test_colorize()')
    rw.colorize('green', 'pass')
    verdict = rw.colorize(color='red', string='fail', output=True)
    print('This should be red: ' + verdict)
    assert 'fail' in verdict
    assert rw.colorize('blue', 'plain', output=True, enable=False) == 'plain'
    with pytest.raises(ValueError):
        rw.colorize('chartreuse', 'nope')
    return verdict


def test_printv(capsys):
    rw.heading('test_printv()')
    capsys.readouterr()
    rw.printv('shown', 2, 2)
    rw.printv('hidden', 3, 2)
    out = capsys.readouterr().out
    assert 'shown' in out
    assert 'hidden' not in out
    assert out.startswith('    ') # Indented by level
    assert 'ds' in repr(rw.StepParams(ds=1e-2))
    return out


def test_promotetolist():
    rw.heading('test_promotetolist()')
    assert rw.promotetolist('rates') == ['rates']
    assert rw.promotetolist(['rates', 'clock']) == ['rates', 'clock']
    assert rw.promotetolist(None) == []
    assert rw.promotetolist(None, keepnone=True) == [None]
    assert rw.promotetolist(np.array([0,1,2])) == [0,1,2]
    with pytest.raises(TypeError):
        rw.promotetolist(1, str)
    with pytest.raises(TypeError):
        rw.promotetolist(['a', 2], objtype='str')
    arr = rw.promotetoarray(3)
    assert arr.shape == (1,)
    with pytest.raises(TypeError):
        rw.promotetoarray('three')
    return arr


def test_types():
    rw.heading('test_types()')
    assert rw.isnumber(2.5)
    assert not rw.isnumber(True) # Flags are not parameter values
    assert not rw.isnumber('2.5')
    assert rw.isstring('h3')
    assert rw.checktype([0.5, 2], 'arraylike')
    assert not rw.checktype(['r3', 'h3'], 'arraylike')
    assert rw.sigfig(3.14159, 3) == '3.14'
    assert rw.sigfig(123456.0, 3) == '1.23e+05'
    with pytest.raises(TypeError):
        rw.checktype(1, 'str', die=True)
    return


def test_suggest():
    rw.heading('test_suggest()')
    models = ['constant', 'power', 'power_exp', 'sinh', 'big_crunch_radiation']
    assert rw.suggest('sinhh', models) == 'sinh'
    assert rw.suggest('Power', models) == 'power'
    assert rw.suggest('xyzzyxyzzy', models) is None
    assert rw.suggest('power_ex', models, n=2) == ['power_exp', 'power']
    with pytest.raises(KeyError):
        rw.suggest('sinhh', models, die=True)
    return


def test_errors():
    rw.heading('test_errors()')
    for err in [rw.ModelError, rw.DomainError, rw.IndeterminateError, rw.NumericalFailure, rw.DegenerateVelocity,
                rw.ConstraintError, rw.InsufficientSamples, rw.ConfigurationError, rw.EnsembleFailure, rw.VerificationFailure]:
        assert issubclass(err, rw.RWDiffError)
    assert issubclass(rw.ModelError, ValueError)
    assert issubclass(rw.NumericalFailure, ArithmeticError)
    with pytest.raises(ValueError):
        rw.catalog('no_such_model')
    return


def test_timer(capsys):
    rw.heading('test_timer()')
    with rw.Timer(label='nothing', verbose=2) as timer:
        np.sum(np.arange(1000))
    out = capsys.readouterr().out
    assert 'Elapsed time for nothing' in out
    assert timer.elapsed >= 0
    return timer


def test_odict():
    rw.heading('test_odict()')
    rates = rw.odict(rate_tdot=0.5, rate_alpha=0.25, rate_int_alpha=1.0)
    assert rates[0] == rates['rate_tdot']
    assert rates[['rate_alpha', 'rate_int_alpha']] == [0.25, 1.0]
    assert rates.keys() == ['rate_tdot', 'rate_alpha', 'rate_int_alpha']
    with pytest.raises(KeyError):
        rates['rate_clock']
    cfg = rw.objdict()
    cfg['tol.ks'] = 0.07
    cfg['model.family'] = 'sinh'
    assert cfg.findkeys('tol.') == ['tol.ks']
    growth = rw.objdict(kind='Polynomial')
    growth.c = 2.0
    assert growth['c'] == 2.0
    assert growth.kind == 'Polynomial'
    with pytest.raises(AttributeError):
        growth.keys = 'not allowed'
    return growth


if __name__ == '__main__':
    test_colorize()
    test_promotetolist()
    test_types()
    test_suggest()
    test_errors()
    test_odict()
