"""
Ensembles and verification: reproducible parallel ensembles of full trajectories,
the estimators computed on them, verdicts against the predicted regimes, the
comparison of the two temporal schemes and the test of the spatial noise.

Every trajectory index gets its own generator stream from (seed, index) and the
outputs are folded in index order, so statistics do not depend on the number of
workers.

Version: 2026oct17
"""

##############################################################################
### IMPORTS
##############################################################################

import os
import numpy as np
from scipy import stats as spstats
from . import rw_utils as ut
from . import rw_math as rm
from . import rw_fileio as rf
from . import rw_parallel as rp
from . import rw_expansion as rx
from . import rw_temporal as rt
from . import rw_spatial as rs
from .rw_odict import objdict


##############################################################################
### CONFIGURATION
##############################################################################

__all__ = ['EnsembleConfig', 'ensemble_config', 'load_ensemble_config']

_statistics = ['termination', 'rates', 'clock', 'returns', 'occupation', 'exceedance', 'boundary', 'direction']

_tolerances = objdict(
    rate        = 0.1,   # Relative error of the Lyapunov rates
    ks          = 0.05,  # KS distance of the pooled occupation measure
    se          = 3.0,   # Standard errors allowed for the ergodic average
    clock       = 1e-2,  # Relative clock increment over the last window
    tail        = 1e-2,  # Cauchy deviation of boundary tails
    certificate = 1e-3,  # Remaining variation for a certified fiber point
    majority    = 0.9,   # Fraction of trajectories a qualitative verdict needs
    returns     = 0.1,   # Relative growth of return counts still called stable
    coverage    = 0.75,  # Angular coverage of a recurrent direction
    failure     = 0.05,  # Fraction of numerical failures an ensemble tolerates
)

_configkeys = ['model.family', 'model.params', 'model.T', 'model.table', 'model.file', 'fiber',
               'sim.sigma', 'sim.d', 'sim.ds', 'sim.s_max', 'sim.thin', 'sim.adaptive', 'sim.eps_horizon',
               'init.mode', 'init.t0', 'init.tdot0', 'init.a0',
               'ensemble.n_traj', 'ensemble.seed', 'ensemble.workers', 'ensemble.burn_in', 'ensemble.level',
               'ensemble.statistics', 'ensemble.csv']

_exceedance_levels = [2.0, 5.0, 10.0]


class EnsembleConfig(ut.prettyobj):
    '''
    Everything that determines an ensemble: model, fiber, step parameters, number of
    trajectories, seed, initial condition, requested statistics and tolerances.

    Args:
        model: ExpansionModel (or a catalog name)
        fiber: Fiber or a name such as "h3"
        init: objdict with mode ('state' or 'entrance'), t0, tdot0, a0
        statistics: list drawn from termination, rates, clock, returns, occupation, exceedance, boundary, direction (default all)
        tolerances: dict overriding the default tolerances
        burn_in: start of the occupation window (default s_max/4)
        level: level of the return counts (default 2)
        csv: folder for raw per-trajectory CSVs (default None, none written)

    Example:
        config = rw.EnsembleConfig(model='sinh', fiber='h3', n_traj=8, s_max=20, ds=1e-2, seed=1)
    '''

    def __init__(self, model=None, fiber=None, sigma=None, d=None, n_traj=None, ds=None, s_max=None, thin=None,
                 adaptive=None, eps_horizon=None, seed=None, init=None, statistics=None, tolerances=None,
                 burn_in=None, level=None, workers=None, csv=None):
        if model      is None: model      = 'constant'
        if fiber      is None: fiber      = 'r'
        if n_traj     is None: n_traj     = 64
        if s_max      is None: s_max      = 200.0
        if seed       is None: seed       = 0
        if level      is None: level      = 2.0
        if statistics is None: statistics = list(_statistics)
        if ut.isstring(model): model = rx.catalog(model)
        fiber = rs.Fiber.parse(fiber, d=d)
        if d is None: d = fiber.d
        self.model  = model
        self.fiber  = fiber
        self.params = rt.StepParams(sigma=sigma, d=d, ds=ds, adaptive=adaptive, eps_horizon=eps_horizon, thin=thin)
        if fiber.d != self.params.d:
            errormsg = 'Fiber %s and d=%s disagree' % (fiber.label, d)
            raise ut.ConfigurationError(errormsg)
        if int(n_traj) != n_traj or n_traj < 1:
            errormsg = 'n_traj must be a positive integer, not %s' % n_traj
            raise ut.ConfigurationError(errormsg)
        if not s_max > 0:
            errormsg = 's_max must be positive, not %s' % s_max
            raise ut.ConfigurationError(errormsg)
        if not level > 1:
            errormsg = 'The return level must exceed 1, not %s' % level
            raise ut.ConfigurationError(errormsg)
        self.n_traj = int(n_traj)
        self.s_max  = float(s_max)
        self.seed   = int(seed)
        self.level  = float(level)
        self.burn_in = float(burn_in) if burn_in is not None else self.s_max/4
        if not 0 <= self.burn_in < self.s_max:
            errormsg = 'burn_in must lie in [0, s_max), not %s' % self.burn_in
            raise ut.ConfigurationError(errormsg)
        self.workers = workers
        self.csv = csv

        statistics = ut.promotetolist(statistics)
        for stat in statistics:
            if stat not in _statistics:
                errormsg = 'Statistic "%s" not recognized; did you mean "%s"? Choices are %s' % (stat, ut.suggest(stat, _statistics), _statistics)
                raise ut.ConfigurationError(errormsg)
        if 'termination' not in statistics: statistics = ['termination'] + statistics
        self.statistics = [stat for stat in _statistics if stat in statistics]

        self.tolerances = objdict(_tolerances)
        for key,val in dict(tolerances or {}).items():
            if key not in _tolerances:
                errormsg = 'Tolerance "%s" not recognized; did you mean "%s"?' % (key, ut.suggest(key, _tolerances.keys()))
                raise ut.ConfigurationError(errormsg)
            self.tolerances[key] = float(val)

        self.init = objdict(mode='state', t0=None, tdot0=None, a0=None)
        self.init.update(init or {})
        if self.init.mode not in ['state', 'entrance']:
            errormsg = 'init.mode must be "state" or "entrance", not "%s"' % self.init.mode
            raise ut.ConfigurationError(errormsg)
        return None

    @property
    def sigma(self):
        return self.params.sigma

    @property
    def d(self):
        return self.params.d

    def initial_state(self):
        ''' The initial temporal state shared by every trajectory '''
        if self.init.mode == 'entrance':
            a0 = self.init.a0 if self.init.a0 is not None else 1.0
            return rt.entrance_start(self.model, a0, self.params)
        t0 = self.init.t0
        if t0 is None: t0 = 1.0 if np.isinf(self.model.T) else self.model.T/4
        if self.init.a0 is not None:
            return rt.TemporalState(t=t0, a=self.init.a0, model=self.model)
        tdot0 = self.init.tdot0 if self.init.tdot0 is not None else 2.0
        return rt.TemporalState.from_tdot(t0, tdot0, self.model)

    def initial_spatial(self):
        return rs.SpatialState(fiber=self.fiber)

    def to_dict(self):
        output = objdict()
        output.model       = self.model.to_dict()
        output.fiber       = self.fiber.label
        output.params      = self.params.to_dict()
        output.n_traj      = self.n_traj
        output.s_max       = self.s_max
        output.seed        = self.seed
        output.init        = self.init
        output.statistics  = self.statistics
        output.tolerances  = self.tolerances
        output.burn_in     = self.burn_in
        output.level       = self.level
        return output

    @classmethod
    def from_dict(cls, cfg, folder=None):
        '''
        Build a config from flat key-value entries (model.family, sim.sigma, ...,
        tol.ks). Unknown keys are rejected with a suggestion.
        '''
        cfg = objdict(cfg)
        tolkeys = cfg.findkeys('tol.')
        for key in cfg.keys():
            if key not in _configkeys and key not in tolkeys:
                errormsg = 'Config key "%s" not recognized; did you mean "%s"?' % (key, ut.suggest(key, _configkeys))
                raise ut.ConfigurationError(errormsg)
        get = cfg.get
        kwargs = dict(
            model       = rx.model_from_config(cfg, prefix='model.', folder=folder),
            fiber       = get('fiber', 'r'),
            sigma       = get('sim.sigma'),
            d           = get('sim.d'),
            ds          = get('sim.ds'),
            s_max       = get('sim.s_max'),
            thin        = get('sim.thin'),
            adaptive    = get('sim.adaptive'),
            eps_horizon = get('sim.eps_horizon'),
            n_traj      = get('ensemble.n_traj'),
            seed        = get('ensemble.seed'),
            workers     = get('ensemble.workers'),
            burn_in     = get('ensemble.burn_in'),
            level       = get('ensemble.level'),
            statistics  = get('ensemble.statistics'),
            csv         = get('ensemble.csv'),
            init        = {key[5:]:cfg[key] for key in cfg.findkeys('init.')},
            tolerances  = {key[4:]:cfg[key] for key in tolkeys},
        )
        if kwargs['csv'] is not None and folder is not None and not os.path.isabs(str(kwargs['csv'])):
            kwargs['csv'] = os.path.join(folder, kwargs['csv'])
        try:
            return cls(**kwargs)
        except (ut.DomainError, ut.ModelError) as E:
            errormsg = 'Invalid ensemble configuration: %s' % str(E)
            raise ut.ConfigurationError(errormsg) from E


def ensemble_config(**kwargs):
    ''' Shortcut for EnsembleConfig(**kwargs) '''
    return EnsembleConfig(**kwargs)


def load_ensemble_config(filename):
    '''
    Read an ensemble config file.

    Example config file:
        model.family = sinh
        fiber = h3
        sim.sigma = 1.0
        ensemble.n_traj = 64
        tol.ks = 0.07
    '''
    cfg = rf.loadconfig(filename)
    return EnsembleConfig.from_dict(cfg, folder=os.path.dirname(os.path.abspath(filename)))



##############################################################################
### ESTIMATORS
##############################################################################

__all__ += ['occupation_measure', 'occupation_histogram', 'ks_distance', 'return_count', 'exceedance']

_occupation_edges = np.concatenate([[1.0], 1.0 + np.geomspace(1e-6, 1e6, 3001)])


def occupation_measure(path, burn_in=None):
    '''
    Time-weighted occupation of tdot over [burn_in, end]: each sample carries the
    proper time until the next one. Returns values, normalized weights, the window
    duration and the time average of 1/tdot^2.

    Example:
        occ = rw.occupation_measure(path, burn_in=50)
        occ.mean_inv_square
    '''
    if burn_in is None: burn_in = 0.0
    s = path.s
    keep = rm.findinds(s[:-1] >= burn_in)
    if not len(keep):
        errormsg = 'No samples after burn-in %g (path ends at s=%g)' % (burn_in, s[-1])
        raise ut.InsufficientSamples(errormsg)
    durations = np.diff(s)[keep]
    values = path.tdot[keep]
    duration = durations.sum()
    output = objdict()
    output['values']  = values
    output['weights'] = durations/duration
    output.duration = float(duration)
    output.mean_inv_square = float(np.sum(output['weights']/values**2))
    return output


def occupation_histogram(occupation, edges=None):
    ''' Weights of an occupation measure per bin; mass beyond the last edge goes in overflow '''
    if edges is None: edges = _occupation_edges
    counts, _ = np.histogram(occupation['values'], bins=edges, weights=occupation['weights'])
    return objdict(edges=edges, counts=counts, overflow=float(max(0.0, 1.0 - counts.sum())))


def ks_distance(sample, reference_cdf, weights=None):
    '''
    Sup distance between an empirical CDF and reference_cdf. sample is an array of
    draws (optionally weighted), an occupation measure, or an occupation histogram,
    which is compared at its bin edges.

    Example:
        x = rw.sample_invariant(1, 1, 3, rw.makerng(0), size=10000)
        rw.ks_distance(x, rw.invariant_cdf(1, 1, 3)) # about 0.01
    '''
    if isinstance(sample, dict):
        if 'counts' in sample:
            edges = sample['edges']
            empirical = np.concatenate([[0.0], np.cumsum(sample['counts'])])
            return float(np.max(np.abs(empirical - ut.promotetoarray(reference_cdf(edges)))))
        weights = sample['weights']
        sample = sample['values']
    sample = ut.promotetoarray(sample)
    if not len(sample):
        errormsg = 'Cannot compute a KS distance of an empty sample'
        raise ut.InsufficientSamples(errormsg)
    if weights is None:
        return float(spstats.kstest(sample, reference_cdf).statistic)
    weights = ut.promotetoarray(weights)
    order = np.argsort(sample, kind='stable')
    sample = sample[order]
    cum = np.cumsum(weights[order])/np.sum(weights)
    last = np.concatenate([sample[1:] != sample[:-1], [True]]) # Ties collapse to their final cumulative weight
    values, upper = sample[last], cum[last]
    lower = np.concatenate([[0.0], upper[:-1]])
    ref = ut.promotetoarray(reference_cdf(values))
    return float(max(np.max(np.abs(upper - ref)), np.max(np.abs(lower - ref))))


def return_count(path, level, burn_in=None, s_until=None):
    '''
    Number of down-crossings of tdot through level after burn_in (and up to s_until).

    Example:
        rw.return_count(path, 2.0, burn_in=50)
    '''
    if not level > 1:
        errormsg = 'The return level must exceed 1, not %s' % level
        raise ut.DomainError(errormsg)
    if burn_in is None: burn_in = 0.0
    if s_until is None: s_until = np.inf
    window = (path.s >= burn_in) & (path.s <= s_until)
    tdot = path.tdot[window]
    return int(np.sum((tdot[:-1] > level) & (tdot[1:] <= level)))


def exceedance(path, levels=None, times=None):
    ''' Indicators of tdot_s > R at the given proper times (nan past the end of the path) '''
    if levels is None: levels = _exceedance_levels
    if times is None: times = np.linspace(path.s[-1]/10, path.s[-1], 10)
    times = ut.promotetoarray(times)
    tdot = np.interp(times, path.s, path.tdot)
    output = np.array([(tdot > level).astype(float) for level in levels])
    output[:, times > path.s[-1]] = np.nan
    return output



##############################################################################
### TRAJECTORY WORKER
##############################################################################

__all__ += ['run_trajectory', 'run_ensemble']


def _context(config, verbose=None):
    ''' Model-level quantities computed once per ensemble '''
    context = objdict()
    context.growth = rx.classify_growth(config.model, verbose=verbose)
    context.H_inf = context.growth.H_inf if context.growth.kind == 'Exponential' else 0.0
    try:
        context.horizons = rx.horizon_integrals(config.model, verbose=verbose)
    except ut.IndeterminateError as E:
        context.horizons = None
        context.horizons_error = str(E)
    return context


def _attempt(func, *args, **kwargs):
    ''' Estimators that run out of samples give None instead of stopping the worker '''
    try:
        return func(*args, **kwargs)
    except ut.InsufficientSamples:
        return None


def run_trajectory(config, index, context=None, verbose=None):
    '''
    Simulate trajectory index of the ensemble and compute its per-trajectory
    statistics. The generator stream depends only on (config.seed, index).

    Example:
        result = rw.run_trajectory(config, 0)
        result.termination.kind
    '''
    if verbose is None: verbose = 0
    if context is None: context = _context(config)
    model, fiber = config.model, config.fiber
    rng = rt.makerng(config.seed, index)
    traj = rs.simulate_full(config.initial_state(), config.initial_spatial(), model, fiber, config.params, config.s_max, rng, verbose=verbose)
    path = traj.temporal
    tol = config.tolerances

    output = objdict(index=index, termination=traj.termination)
    failed = traj.termination.kind == rt.Termination.NumericalFailure
    if config.csv:
        traj.to_csv(os.path.join(config.csv, 'traj_%05i.csv' % index))
    if failed:
        return output

    if 'rates' in config.statistics:
        output.rates = _attempt(rt.rate_estimate, path, model)

    if 'clock' in config.statistics:
        output.clock = _attempt(rt.clock_diagnostic, path, tol_clock=tol.clock)

    if 'returns' in config.statistics:
        marks = [config.s_max/4, config.s_max/2, config.s_max]
        output.returns = [return_count(path, config.level, s_until=mark) for mark in marks]

    if 'occupation' in config.statistics:
        occ = _attempt(occupation_measure, path, burn_in=config.burn_in)
        if occ is not None:
            hist = occupation_histogram(occ)
            output.occupation = objdict(duration=occ.duration, mean_inv_square=occ.mean_inv_square, counts=hist.counts)
            if context.H_inf > 0:
                output.occupation.ks = ks_distance(occ, rt.invariant_cdf(context.H_inf, config.sigma, config.d))

    if 'exceedance' in config.statistics:
        times = np.linspace(config.s_max/10, config.s_max, 10)
        output.exceedance = exceedance(path, times=times)

    if 'boundary' in config.statistics:
        if context.horizons is None:
            output.boundary = objdict(kind='Unconverged', reason='horizon integrals: %s' % context.horizons_error)
        else:
            limit = _attempt(rs.boundary_limit, traj, model, fiber, horizons=context.horizons, tol_tail=tol.tail, tol_certificate=tol.certificate)
            output.boundary = limit if limit is not None else objdict(kind='Unconverged', reason='too few samples')

    if 'direction' in config.statistics:
        inds = rm.tailslice(len(traj), 0.2)
        step = max(1, (inds.stop - inds.start)//2000)
        frames = np.array([rs.direction_frame(traj.state(i), fiber) for i in range(inds.start, inds.stop, step)])
        output.direction = objdict(deviation=rm.cauchy_deviation(frames), coverage=rs.angular_coverage(frames))

    return output



##############################################################################
### ENSEMBLES
##############################################################################

def _summary(values):
    ''' Mean, standard error across trajectories, and the values themselves '''
    values = ut.promotetoarray([np.nan if v is None else v for v in values])
    finite = values[np.isfinite(values)]
    output = objdict()
    output.estimate = float(np.mean(finite)) if len(finite) else np.nan
    output.se = float(np.std(finite, ddof=1)/np.sqrt(len(finite))) if len(finite) > 1 else np.nan
    output.n = len(finite)
    output['values'] = values
    return output


def _fractions(kinds):
    ''' Fraction of each kind, in order of first appearance '''
    output = objdict()
    n = max(1, len(kinds))
    for kind in kinds:
        output[kind] = output.get(kind, 0) + 1.0/n
    return output


def run_ensemble(config, verbose=None):
    '''
    Simulate config.n_traj independent trajectories over a worker pool and
    aggregate the requested statistics in trajectory-index order. Numerical failures
    are counted; more than tol.failure (5%) of them raises EnsembleFailure.

    Example:
        config = rw.EnsembleConfig(model='power(c=1)', fiber='r3', n_traj=16, s_max=50, ds=1e-2)
        stats = rw.run_ensemble(config)
        stats.rates.rate_tdot.estimate # about 0.5
    '''
    if verbose is None: verbose = 1
    model = config.model
    hypotheses = rx.check_hypotheses(model)
    if not hypotheses.passed:
        failing = [key for key,val in hypotheses.clauses.items() if not val.passed]
        ut.printv('Warning: model %s does not satisfy the standing hypotheses (%s)' % (model.label, ', '.join(failing)), 1, verbose)
    context = _context(config, verbose=verbose)

    ncpus = config.workers
    if model.funcs is not None and ncpus != 1:
        ut.printv('User models built from callables run in a single process', 2, verbose)
        ncpus = 1
    if config.csv:
        os.makedirs(config.csv, exist_ok=True)
    ut.printv('Running %i trajectories of %s on %s' % (config.n_traj, model.label, config.fiber.label), 2, verbose)
    with ut.Timer(label='ensemble', verbose=verbose):
        results = rp.parallelize(run_trajectory, iterkwargs={'index':list(range(config.n_traj))}, kwargs={'config':config, 'context':context}, ncpus=ncpus)

    stats = objdict(kind='EnsembleStats')
    stats.config = config.to_dict()
    stats.hypotheses_passed = bool(hypotheses.passed)
    stats.growth = context.growth
    stats.horizons = context.horizons
    stats.H_inf = context.H_inf
    kinds = [res.termination.kind for res in results]
    stats.termination = objdict(fractions=_fractions(kinds), kinds=kinds, s_end=[res.termination.s_end for res in results])
    nfailed = kinds.count(rt.Termination.NumericalFailure)
    stats.failures = nfailed
    if nfailed > config.tolerances.failure*config.n_traj:
        errormsg = '%i of %i trajectories ended in a numerical failure (tolerance %g): first message: %s' % (nfailed, config.n_traj, config.tolerances.failure, [res.termination.message for res in results if res.termination.kind == rt.Termination.NumericalFailure][0])
        raise ut.EnsembleFailure(errormsg)
    ok = [res for res in results if res.termination.kind != rt.Termination.NumericalFailure]

    if 'rates' in config.statistics:
        stats.rates = objdict()
        for key in ['rate_tdot', 'rate_alpha', 'rate_int_alpha']:
            stats.rates[key] = _summary([res.rates[key] if res.rates is not None else None for res in ok])

    if 'clock' in config.statistics:
        clockkinds = [res.clock.kind if res.clock is not None else 'Unconverged' for res in ok]
        stats.clock = objdict(fractions=_fractions(clockkinds), kinds=clockkinds)

    if 'returns' in config.statistics:
        counts = np.array([res.returns for res in ok], dtype=float).reshape(-1, 3)
        stats.returns = objdict(level=config.level, marks=[config.s_max/4, config.s_max/2, config.s_max])
        stats.returns.mean = counts.mean(axis=0)
        stats.returns.se = counts.std(axis=0, ddof=1)/np.sqrt(len(counts)) if len(counts) > 1 else np.full(3, np.nan)
        stats.returns.counts = counts

    if 'occupation' in config.statistics:
        occs = [res.occupation for res in ok if res.get('occupation') is not None]
        stats.occupation = objdict(burn_in=config.burn_in)
        if len(occs):
            durations = np.array([occ.duration for occ in occs])
            pooled = np.sum([occ.duration*occ.counts for occ in occs], axis=0)/durations.sum()
            stats.occupation.edges = _occupation_edges
            stats.occupation.counts = pooled
            stats.occupation.mean_inv_square = _summary([occ.mean_inv_square for occ in occs])
            if context.H_inf > 0:
                stats.occupation.reference_H = context.H_inf
                stats.occupation.ks_pooled = ks_distance(objdict(edges=_occupation_edges, counts=pooled), rt.invariant_cdf(context.H_inf, config.sigma, config.d))
                stats.occupation.ks = _summary([occ.ks for occ in occs])

    if 'exceedance' in config.statistics:
        arr = np.array([res.exceedance for res in ok])
        stats.exceedance = objdict(levels=_exceedance_levels, times=np.linspace(config.s_max/10, config.s_max, 10))
        stats.exceedance.probability = np.nanmean(arr, axis=0) if len(arr) else None

    if 'boundary' in config.statistics:
        limits = [res.boundary for res in ok]
        stats.boundary = objdict(fractions=_fractions([lim.kind for lim in limits]), kinds=[lim.kind for lim in limits])
        for key in ['certificate', 'deviation', 'residual', 'norm_U', 'norm_V', 'inner_UV', 'delta_deviation', 'theta_deviation', 'c_over_a_min']:
            vals = [lim.get(key) for lim in limits]
            if any(v is not None for v in vals):
                stats.boundary[key] = _summary(vals)
        stats.boundary.limits = limits

    if 'direction' in config.statistics:
        stats.direction = objdict()
        stats.direction.deviation = _summary([res.direction.deviation for res in ok])
        stats.direction.coverage = _summary([res.direction.coverage for res in ok])

    ut.printv('Ensemble done: %i trajectories, %i failures' % (config.n_traj, nfailed), 2, verbose)
    return stats



##############################################################################
### VERDICTS
##############################################################################

__all__ += ['verify_regime']


def _claim(claim, theory, empirical, tolerance, verdict, detail=''):
    return objdict(claim=claim, theory=theory, empirical=empirical, tolerance=tolerance, verdict=verdict, detail=detail)


def _need(stats, *keys):
    for key in keys:
        if key not in stats:
            errormsg = 'The ensemble statistics lack "%s", which this claim needs; add it to the requested statistics' % key
            raise ut.ConfigurationError(errormsg)
    return None


def _returns_growth(stats, tol):
    ''' Relative growth of the mean return count between s_max/2 and s_max '''
    mean = stats.returns.mean
    growth = mean[2] - mean[1]
    return growth, bool(growth <= tol.returns*max(1.0, mean[1]))


def _verify_tdot(stats, prediction, tol):
    behavior = prediction.tdot_behavior
    kind = behavior.kind
    if kind == 'FiniteLifetimeDivergent':
        frac = stats.termination.fractions.get(rt.Termination.HorizonReached, 0.0)
        verdict = 'pass' if frac >= tol.majority else 'unconverged'
        return _claim('tdot_behavior', kind, frac, tol.majority, verdict, 'fraction of trajectories reaching the horizon')

    _need(stats, 'returns')
    growth, stable = _returns_growth(stats, tol)
    if kind == 'Transient' or (kind == 'TransientInProbability' and behavior.get('as_transient_iff_Hd_integrable')):
        _need(stats, 'rates')
        rate = stats.rates.rate_tdot
        if not np.isfinite(rate.estimate):
            return _claim('tdot_behavior', kind, objdict(return_growth=growth, rate_tdot=None), tol.returns, 'unconverged', 'no trajectory had enough tail samples for a rate')
        positive = rate.estimate > 0
        if stable and positive: verdict = 'pass'
        elif not positive:      verdict = 'fail'
        else:                   verdict = 'fail' if kind == 'Transient' else 'unconverged'
        return _claim('tdot_behavior', kind, objdict(return_growth=growth, rate_tdot=rate.estimate), tol.returns, verdict, 'return counts stable and positive rate')

    if kind == 'TransientInProbability':
        verdict = 'pass' if not stable else 'unconverged'
        return _claim('tdot_behavior', kind, objdict(return_growth=growth), tol.returns, verdict, 'return counts keep growing')

    # Harris recurrent: occupation against the invariant law of the limiting H
    _need(stats, 'occupation')
    occ = stats.occupation
    if 'counts' not in occ:
        return _claim('tdot_behavior', kind, None, tol.ks, 'unconverged', 'no samples after burn-in')
    H = behavior.invariant_H
    ks = ks_distance(objdict(edges=occ.edges, counts=occ.counts), rt.invariant_cdf(H, prediction.sigma, prediction.d))
    reference = rt.invariant_moment(H, prediction.sigma, prediction.d, lambda x: 1/x**2)
    avg = occ.mean_inv_square
    within = bool(abs(avg.estimate - reference) <= tol.se*avg.se) if np.isfinite(avg.se) else True
    empirical = objdict(ks=ks, mean_inv_square=avg.estimate, reference_inv_square=reference, return_growth=growth)
    if ks < tol.ks and within and not stable: verdict = 'pass'
    elif ks >= tol.ks:                        verdict = 'fail'
    else:                                     verdict = 'unconverged'
    return _claim('tdot_behavior', kind, empirical, tol.ks, verdict, 'KS to the invariant law, ergodic average of 1/tdot^2, growing returns')


def _majority(fractions, kind, tol):
    return fractions.get(kind, 0.0) >= tol.majority


def _verify_clock(stats, prediction, tol):
    _need(stats, 'clock')
    fractions = stats.clock.fractions
    expected, opposite = ('Converging', 'Diverging') if prediction.clock_convergent else ('Diverging', 'Converging')
    if _majority(fractions, expected, tol):   verdict = 'pass'
    elif _majority(fractions, opposite, tol): verdict = 'fail'
    else:                                     verdict = 'unconverged'
    return _claim('clock_convergent', bool(prediction.clock_convergent), fractions, tol.majority, verdict, 'majority of clock diagnostics')


def _verify_direction(stats, prediction, tol):
    behavior = prediction.direction_behavior
    if behavior == 'GreatCircle':
        _need(stats, 'boundary')
        fractions = stats.boundary.fractions
        if _majority(fractions, 'GreatCircle', tol): verdict = 'pass'
        elif _majority(fractions, 'FiberPoint', tol) or _majority(fractions, 'NullDirection', tol): verdict = 'fail'
        else: verdict = 'unconverged'
        return _claim('direction_behavior', behavior, fractions, tol.majority, verdict, 'great-circle frames')
    _need(stats, 'direction')
    deviations = stats.direction.deviation['values']
    coverages = stats.direction.coverage['values']
    converged = np.mean(deviations < tol.tail)
    recurrent = np.mean(coverages >= tol.coverage)
    empirical = objdict(converged=float(converged), recurrent=float(recurrent))
    if behavior == 'Converges':
        if converged >= tol.majority:   verdict = 'pass'
        elif recurrent >= tol.majority: verdict = 'fail'
        else:                           verdict = 'unconverged'
    else:
        if recurrent >= tol.majority:   verdict = 'pass'
        elif converged >= tol.majority: verdict = 'fail'
        else:                           verdict = 'unconverged'
    return _claim('direction_behavior', behavior, empirical, tol.majority, verdict, 'tail deviation and angular coverage of theta')


_positionlimits = {'ConvergesInFiber':'FiberPoint', 'EscapesAlongHypersurface':'NullDirection', 'GreatCircle':'GreatCircle'}
_boundarylimits = {'FiberPoint':'FiberPoint', 'NullDirection':'NullDirection', 'TimelikeApex':'GreatCircle'}


def _verify_limitkind(claim, theory, expected, stats, tol):
    _need(stats, 'boundary')
    fractions = stats.boundary.fractions
    others = [kind for kind in fractions.keys() if kind not in [expected, 'Unconverged']]
    if _majority(fractions, expected, tol):                  verdict = 'pass'
    elif sum(fractions[kind] for kind in others) > 1 - tol.majority: verdict = 'fail'
    else:                                                    verdict = 'unconverged'
    return _claim(claim, theory, fractions, tol.majority, verdict, 'boundary limit kinds')


def _verify_lifetime(stats, prediction, tol):
    frac = stats.termination.fractions.get(rt.Termination.HorizonReached, 0.0)
    if prediction.lifetime_finite:
        verdict = 'pass' if frac >= tol.majority else 'unconverged'
    else:
        verdict = 'pass' if frac == 0 else 'fail'
    return _claim('lifetime_finite', bool(prediction.lifetime_finite), frac, tol.majority, verdict, 'fraction reaching the horizon')


def verify_regime(stats, prediction, tolerances=None):
    '''
    Test every predicted regime against the ensemble statistics. Each claim gets one
    entry with verdict 'pass', 'fail' or 'unconverged'; the report passes when no
    claim fails.

    Example:
        report = rw.verify_regime(stats, rw.predict_regimes(model, fiber, d=3, sigma=1))
        report.passed
    '''
    tol = objdict(_tolerances)
    if 'config' in stats: tol.update(stats.config.get('tolerances', {}))
    tol.update(tolerances or {})

    claims = []
    if prediction.indeterminate:
        for key in rx._regimekeys:
            claims.append(_claim(key, None, None, None, 'unconverged', 'indeterminate prediction: %s' % prediction.reason))
    else:
        claims.append(_verify_tdot(stats, prediction, tol))
        claims.append(_verify_clock(stats, prediction, tol))
        claims.append(_verify_direction(stats, prediction, tol))
        position = prediction.position_behavior
        claims.append(_verify_limitkind('position_behavior', position, _positionlimits[position], stats, tol))
        claims.append(_verify_lifetime(stats, prediction, tol))
        limit = prediction.causal_boundary.limit
        claims.append(_verify_limitkind('causal_boundary', prediction.causal_boundary, _boundarylimits[limit], stats, tol))

    report = objdict(kind='VerdictReport', model=prediction.model, fiber_curvature=prediction.fiber_curvature, d=prediction.d, sigma=prediction.sigma)
    report.claims = claims
    verdicts = [claim.verdict for claim in claims]
    report.counts = objdict(passed=verdicts.count('pass'), failed=verdicts.count('fail'), unconverged=verdicts.count('unconverged'))
    report.passed = report.counts.failed == 0
    return report



##############################################################################
### SCHEME AND NOISE CHECKS
##############################################################################

__all__ += ['oracle_compare', 'covariance_test']


def _check_halving(h_list):
    h_list = ut.promotetoarray(h_list)
    if len(h_list) < 3:
        errormsg = 'oracle_compare needs at least 3 step sizes, not %i' % len(h_list)
        raise ut.ConfigurationError(errormsg)
    ratios = h_list[:-1]/h_list[1:]
    if not np.allclose(ratios, 2.0, rtol=1e-9):
        errormsg = 'Step sizes must halve successively, not %s' % h_list
        raise ut.ConfigurationError(errormsg)
    return h_list


def oracle_compare(config, h_list=None, n_paths=None, s_max=None, verbose=None):
    '''
    Run the (t, a^2) scheme and the independent tamed (t, tdot) scheme on shared
    Brownian increments for each step size and report the mean over paths of the
    maximal relative deviation of tdot, and the fitted strong order (slope of log
    deviation against log h).

    Example:
        report = rw.oracle_compare(rw.EnsembleConfig(model='sinh', seed=2))
        report.order # about 0.5
    '''
    if h_list  is None: h_list  = [1e-2, 5e-3, 2.5e-3, 1.25e-3]
    if n_paths is None: n_paths = 16
    if s_max   is None: s_max   = 10.0
    if verbose is None: verbose = 1
    h_list = _check_halving(h_list)
    model, p = config.model, config.params
    init = config.initial_state()
    hfine = h_list[-1]
    nfine = int(round(s_max/hfine))

    deviations = np.zeros((n_paths, len(h_list)))
    for j in range(n_paths):
        rng = rt.makerng(config.seed, j)
        fine = rng.standard_normal(nfine)
        for i,h in enumerate(h_list):
            m = int(round(h/hfine))
            coarse = fine[:(nfine//m)*m].reshape(-1, m).sum(axis=1)/np.sqrt(m)
            t1, x1 = rt.integrate_fixed(init, model, p, h, coarse, scheme='euler')
            t2, x2 = rt.integrate_fixed(init, model, p, h, coarse, scheme='tamed')
            n = min(len(x1), len(x2))
            deviations[j,i] = np.max(np.abs(x1[:n] - x2[:n])/x2[:n])
        ut.printv('Path %i of %i: deviations %s' % (j+1, n_paths, deviations[j]), 3, verbose)

    output = objdict(h=h_list)
    output.deviation = deviations.mean(axis=0)
    output.se = deviations.std(axis=0, ddof=1)/np.sqrt(n_paths) if n_paths > 1 else np.full(len(h_list), np.nan)
    positive = output.deviation > 0
    if positive.sum() >= 2:
        output.order = float(rm.linslope(np.log(h_list[positive]), np.log(output.deviation[positive]))[0])
    else:
        output.order = np.nan
    output.monotone = bool(np.all(np.diff(output.deviation) <= 0))
    output.n_paths = n_paths
    output.s_max = s_max
    return output


def covariance_test(fiber, state=None, nsamples=None, rng=None, level=None):
    '''
    Likelihood-ratio test, with Bartlett's correction, that tangent_noise samples at
    a frozen state have covariance bracket(fiber, x, theta). The samples are expressed
    in the eigenbasis of the bracket's range; the null directions must carry no noise.

    Example:
        rw.covariance_test(rw.Fiber.parse('h3'), rng=rw.makerng(0)).passed # True
    '''
    if nsamples is None: nsamples = 100000
    if level    is None: level    = 0.01
    if rng      is None: rng      = rt.makerng(0)
    if state    is None: state    = rs.random_state(fiber, rng)
    x, theta = state.x, state.theta
    draws = rng.standard_normal((nsamples, fiber.ambient_dim))
    samples = np.array([rs.tangent_noise(fiber, x, theta, xi) for xi in draws])
    matrix = rs.bracket(fiber, x, theta)
    evals, evecs = np.linalg.eigh(matrix)
    keep = evals > 1e-9*evals.max()
    Y = samples @ evecs[:,keep]
    Z = samples @ evecs[:,~keep]
    p = int(keep.sum())
    n = nsamples
    S = (Y.T @ Y)/n
    M = S/np.sqrt(np.outer(evals[keep], evals[keep])) # Sigma^{-1/2} S Sigma^{-1/2}
    sign, logdet = np.linalg.slogdet(M)
    lr = n*(np.trace(M) - logdet - p)
    bartlett = 1 - (2*p + 1 - 2.0/(p+1))/(6.0*n)
    statistic = bartlett*lr
    dof = p*(p+1)//2
    output = objdict(statistic=float(statistic), dof=dof, pvalue=float(spstats.chi2.sf(statistic, dof)), rank=p)
    output.null_residual = float(np.max(np.abs(Z))) if Z.size else 0.0
    output.passed = bool(output.pvalue > level and output.null_residual < 1e-8*max(1.0, np.abs(x).max()**2))
    return output
