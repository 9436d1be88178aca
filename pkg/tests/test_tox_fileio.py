import os
import numpy as np
import rwdiff as rw
import pytest


def _square(x, offset=0):
    return x**2 + offset


def test_json(tmp_path):
    rw.heading('test_json()')
    report = rw.objdict(kind='HorizonIntegrals', i_minus=np.float64(1.5), i_plus=np.inf, c0=1, missing=np.nan,
                        flags=np.array([True, False]), nested=rw.odict(values=np.arange(3)))
    clean = rw.sanitizejson(report)
    assert clean['i_plus'] == 'inf'
    assert clean['missing'] is None
    assert clean['nested']['values'] == [0, 1, 2]
    assert clean['flags'] == [True, False]
    filename = rw.savejson(str(tmp_path/'report.json'), report)
    loaded = rw.loadjson(filename)
    assert list(loaded.keys()) == list(report.keys()) # Field order survives
    assert rw.desanitize(loaded.i_plus) == np.inf
    assert np.isnan(rw.desanitize(loaded.missing))
    assert rw.dumpjson(report) == rw.dumpjson(report) # Stable
    assert rw.dumpjson(report).endswith('\n')
    return loaded


def test_config(tmp_path):
    rw.heading('test_config()')
    text = '''
# A de Sitter ensemble
model.family = sinh
fiber = h3
sim.sigma = 1.0
sim.adaptive = yes
model.T = inf
ensemble.statistics = ['rates', 'clock']
tol.ks = 0.07 # looser
'''
    cfg = rw.parseconfig(text)
    assert cfg['model.family'] == 'sinh'
    assert cfg['sim.sigma'] == 1.0
    assert cfg['sim.adaptive'] is True
    assert cfg['model.T'] == np.inf
    assert cfg['ensemble.statistics'] == ['rates', 'clock']
    assert cfg['tol.ks'] == 0.07
    filename = rw.saveconfig(str(tmp_path/'run.cfg'), cfg, header='saved')
    again = rw.loadconfig(filename)
    assert again == cfg
    with pytest.raises(rw.ConfigurationError):
        rw.loadconfig(str(tmp_path/'missing.cfg'))
    return cfg


def test_csv(tmp_path):
    rw.heading('test_csv()')
    data = rw.odict(s=np.linspace(0, 1, 7), tdot=1 + np.pi*np.arange(7)/3)
    filename = rw.savecsv(str(tmp_path/'sub'/'path.csv'), data)
    assert os.path.isfile(filename)
    with open(filename) as f:
        assert f.readline().strip() == 's,tdot'
    loaded = rw.loadcsv(filename, columns=['s', 'tdot'])
    assert np.array_equal(loaded.tdot, data['tdot']) # Round-trip precision
    with pytest.raises(rw.ConfigurationError):
        rw.loadcsv(filename, columns=['s', 'clock'])
    return loaded


def test_paths(tmp_path):
    rw.heading('test_paths()')
    filename = rw.makefilepath(folder=str(tmp_path/'runs'), ext='json', default='stats')
    assert filename == os.path.join(str(tmp_path/'runs'), 'stats.json')
    assert os.path.isdir(str(tmp_path/'runs'))
    textfile = rw.savetext(str(tmp_path/'notes.txt'), ['a', 'b'])
    assert rw.loadtext(textfile, splitlines=True) == ['a', 'b']
    return filename


def test_parallelize(monkeypatch):
    rw.heading('test_parallelize()')
    serial = rw.parallelize(_square, iterkwargs={'x':range(6)}, ncpus=1)
    parallel = rw.parallelize(_square, iterkwargs={'x':range(6)}, ncpus=2)
    assert serial == parallel == [0, 1, 4, 9, 16, 25]
    withkw = rw.parallelize(_square, iterkwargs={'x':[1,2,3]}, kwargs={'offset':1}, ncpus=2)
    assert withkw == [2, 5, 10]
    with pytest.raises(ValueError):
        rw.parallelize(_square, iterkwargs={'x':[1], 'offset':[1, 2]})
    with pytest.raises(ValueError):
        rw.parallelize(_square, iterkwargs=[1, 2])
    assert rw.parallelize(_square, iterkwargs=[{'x':2}, {'x':3, 'offset':1}], ncpus=1) == [4, 10]

    monkeypatch.setenv('RWDIFF_WORKERS', '3')
    assert rw.getworkers() == 3
    assert rw.getworkers(2) == 2
    assert rw.getworkers(maxworkers=1) == 1
    monkeypatch.setenv('RWDIFF_WORKERS', 'many')
    with pytest.raises(rw.ConfigurationError):
        rw.getworkers()
    return parallel


if __name__ == '__main__':
    import pathlib, tempfile
    folder = pathlib.Path(tempfile.mkdtemp())
    test_json(folder)
    test_config(folder)
    test_csv(folder)
    test_paths(folder)
