"""
The temporal sub-diffusion (t_s, tdot_s) in the regularizing (t, a^2) coordinates:
single steps, paths with their clock and conformal integrals, the entrance law at
t = 0, the constant-H invariant density, the comparison coupling and the rate
estimators.

States keep the scaled velocity w = a/alpha(t) = sqrt(tdot^2 - 1) alongside a, so
paths stay finite when alpha itself overflows; the a^2 update is carried out as
a^2/alpha^2(t), which is the same arithmetic divided by a constant.

Version: 2026oct17
"""

##############################################################################
### IMPORTS
##############################################################################

import os
import functools
import numpy as np
from scipy import optimize
from scipy.interpolate import PchipInterpolator
from . import rw_utils as ut
from . import rw_math as rm
from . import rw_fileio as rf
from . import rw_expansion as rx
from .rw_odict import odict, objdict


##############################################################################
### RANDOM STREAMS
##############################################################################

__all__ = ['makerng', 'NoiseStream']


def makerng(seed=None, index=None):
    '''
    Generator for trajectory index of a run with the given seed. Streams come from
    SeedSequence([seed, index]), so a replicate depends only on (seed, index).

    Example:
        rng = rw.makerng(7, 0)
    '''
    if seed is None: seed = 0
    entropy = [int(seed)] if index is None else [int(seed), int(index)]
    return np.random.default_rng(np.random.SeedSequence(entropy))


class NoiseStream(object):
    ''' Standard normal draws of a fixed width, generated in chunks '''

    def __init__(self, rng, width=1, chunk=4096):
        self.rng = rng
        self.width = width
        self.chunk = chunk
        self._buf = None
        self._pos = chunk
        return None

    def next(self):
        if self._pos >= self.chunk:
            self._buf = self.rng.standard_normal((self.chunk, self.width))
            self._pos = 0
        out = self._buf[self._pos]
        self._pos += 1
        return out[0] if self.width == 1 else out


class ArrayNoise(object):
    ''' Replays a supplied array of increments, one row per step '''

    def __init__(self, increments):
        self.increments = np.asarray(increments, dtype=float)
        self._pos = 0
        return None

    def next(self):
        if self._pos >= len(self.increments):
            errormsg = 'Ran out of supplied increments after %i steps' % self._pos
            raise ut.InsufficientSamples(errormsg)
        out = self.increments[self._pos]
        self._pos += 1
        return out



##############################################################################
### STATES AND PARAMETERS
##############################################################################

__all__ += ['StepParams', 'TemporalState', 'Termination']

_schemes = ['euler', 'implicit']


class StepParams(ut.prettyobj):
    '''
    Step parameters shared by the temporal and spatial integrators.

    Args:
        sigma: diffusion strength (default 1)
        d: fiber dimension, at least 3 (default 3)
        ds: base proper-time step (default 1e-3)
        adaptive: cap the step near t = 0 and near a finite T so that tdot*h <= min(t, T-t)/10 (default True)
        eps_horizon: trajectories stop when t >= T - eps_horizon (default 1e-9)
        thin: keep every thin-th step in the path (default 1)
        scheme: 'euler' for the (t, a^2) update, 'implicit' for the order-preserving variant
    '''

    def __init__(self, sigma=None, d=None, ds=None, adaptive=None, eps_horizon=None, thin=None, scheme=None):
        if sigma       is None: sigma       = 1.0
        if d           is None: d           = 3
        if ds          is None: ds          = 1e-3
        if adaptive    is None: adaptive    = True
        if eps_horizon is None: eps_horizon = 1e-9
        if thin        is None: thin        = 1
        if scheme      is None: scheme      = 'euler'
        if not sigma >= 0:
            errormsg = 'sigma must be nonnegative, not %s' % sigma
            raise ut.DomainError(errormsg)
        if int(d) != d or d < 3:
            errormsg = 'The fiber dimension must be an integer >= 3, not %s' % d
            raise ut.DomainError(errormsg)
        if not ds > 0:
            errormsg = 'The step ds must be positive, not %s' % ds
            raise ut.DomainError(errormsg)
        if not eps_horizon > 0:
            errormsg = 'eps_horizon must be positive, not %s' % eps_horizon
            raise ut.DomainError(errormsg)
        if int(thin) != thin or thin < 1:
            errormsg = 'thin must be a positive integer, not %s' % thin
            raise ut.DomainError(errormsg)
        if scheme not in _schemes:
            errormsg = 'Scheme "%s" not recognized; choices are %s' % (scheme, _schemes)
            raise ut.DomainError(errormsg)
        self.sigma       = float(sigma)
        self.d           = int(d)
        self.ds          = float(ds)
        self.adaptive    = bool(adaptive)
        self.eps_horizon = float(eps_horizon)
        self.thin        = int(thin)
        self.scheme      = scheme
        return None

    def replace(self, **kwargs):
        ''' Copy with some fields changed '''
        fields = dict(sigma=self.sigma, d=self.d, ds=self.ds, adaptive=self.adaptive, eps_horizon=self.eps_horizon, thin=self.thin, scheme=self.scheme)
        fields.update(kwargs)
        return StepParams(**fields)

    def to_dict(self):
        return objdict(sigma=self.sigma, d=self.d, ds=self.ds, adaptive=self.adaptive, eps_horizon=self.eps_horizon, thin=self.thin, scheme=self.scheme)


class TemporalState(ut.prettyobj):
    '''
    A point (s, t, a) of the temporal process, with a = alpha(t)*sqrt(tdot^2-1).
    Give either a or w = a/alpha(t); the other is derived from the model.

    Example:
        state = rw.TemporalState(t=1.0, a=1.0, model=rw.catalog('constant'))
        state.tdot # sqrt(2)
    '''

    def __init__(self, s=None, t=None, a=None, w=None, model=None, logalpha=None, horizon=False):
        if s is None: s = 0.0
        if t is None:
            errormsg = 'A temporal state needs a time t'
            raise ut.DomainError(errormsg)
        if logalpha is None:
            if model is None:
                errormsg = 'A temporal state needs the model (or log alpha at t)'
                raise ut.DomainError(errormsg)
            model.checkdomain(t)
            logalpha = model.logalpha(t)
        if w is None:
            if a is None:
                errormsg = 'A temporal state needs a or w'
                raise ut.DomainError(errormsg)
            w = a*np.exp(-logalpha)
        if not w >= 0:
            errormsg = 'The velocity coordinate must be nonnegative, not %s' % w
            raise ut.DomainError(errormsg)
        if a is None:
            with np.errstate(over='ignore'):
                a = float(np.exp(logalpha)*w)
        self.s = float(s)
        self.t = float(t)
        self.a = float(a)
        self.w = float(w)
        self.logalpha = float(logalpha)
        self.horizon = horizon
        return None

    @property
    def tdot(self):
        return float(np.sqrt(1.0 + self.w**2))

    @classmethod
    def from_tdot(cls, t, tdot, model, s=None):
        ''' State from (t, tdot) '''
        if not tdot >= 1:
            errormsg = 'tdot must be at least 1, not %s' % tdot
            raise ut.DomainError(errormsg)
        return cls(s=s, t=t, w=np.sqrt(tdot**2 - 1.0), model=model)


class Termination(object):
    ''' Termination causes of a trajectory '''
    HorizonReached   = 'HorizonReached'
    ProperTimeBudget = 'ProperTimeBudget'
    NumericalFailure = 'NumericalFailure'



##############################################################################
### SINGLE STEPS
##############################################################################

__all__ += ['stepsize', 'step_temporal', 'step_tamed']


def stepsize(t, tdot, T, p, remaining=None):
    ''' Step length: ds, capped by the remaining budget and, if adaptive, by min(t, T-t)/(10 tdot) '''
    h = p.ds
    if remaining is not None:
        h = min(h, remaining)
    if p.adaptive:
        room = min(t, T - t) if np.isfinite(T) else t
        h = min(h, room/(10.0*tdot))
    return h


def _euler_q(q, sigma, d, h, dW):
    ''' Euler-Maruyama update of a^2/alpha^2(t) at fixed t, truncated at 0 '''
    s2 = sigma**2
    qnew = q + ((d+1)*s2*q + d*s2)*h + 2*sigma*np.sqrt(q*(q+1.0))*np.sqrt(h)*dW
    return max(qnew, 0.0)


def _implicit_y(y, Hval, sigma, d, h, dW):
    ''' Drift-implicit step of y = arcsinh(w): y' - kappa coth(y') = y - H sinh(y) h + sigma sqrt(h) dW '''
    rhs = np.asarray(y - Hval*np.sinh(y)*h + sigma*np.sqrt(h)*dW, dtype=float)
    kappa = 0.5*(d-1)*sigma**2*h
    if kappa == 0:
        return np.maximum(rhs, 0.0)
    z0 = 0.5*(rhs + np.sqrt(rhs**2 + 4*kappa))
    func  = lambda z: z - kappa/np.tanh(z) - rhs
    deriv = lambda z: 1.0 + kappa/np.sinh(z)**2
    return optimize.newton(func, z0, fprime=deriv, tol=1e-14, maxiter=100)


def _advance(t, w, logalpha, model, p, h, dW):
    '''
    One temporal step from (t, w); returns (t', w', log alpha(t'), horizon flag).
    t' uses the old velocity; overshoots past T are pulled back inside the margin.
    '''
    tdot = np.sqrt(1.0 + w*w)
    tnew = t + tdot*h
    horizon = False
    if np.isfinite(model.T) and tnew >= model.T - p.eps_horizon:
        horizon = True
        tnew = min(tnew, model.T - 0.5*p.eps_horizon)
    lanew = model.logalpha(tnew)
    if p.scheme == 'euler':
        qtmp = _euler_q(w*w, p.sigma, p.d, h, dW)
        wnew = np.sqrt(qtmp)*np.exp(logalpha - lanew)
    else:
        y = np.arcsinh(w)
        ynew = float(_implicit_y(y, model.H(t), p.sigma, p.d, h, dW))
        wnew = np.sinh(ynew)
    if not (np.isfinite(tnew) and np.isfinite(wnew) and np.isfinite(lanew)):
        errormsg = 'Non-finite state after a step from t=%g, w=%g with h=%g: t=%s, w=%s' % (t, w, h, tnew, wnew)
        raise ut.NumericalFailure(errormsg)
    return float(tnew), float(wnew), float(lanew), horizon


def step_temporal(state, model, p, dW, h=None):
    '''
    Advance a temporal state by one step with the standard normal draw dW:
    a^2' = a^2 + [(d+1) sigma^2 a^2 + d sigma^2 alpha^2(t)] h + 2 sigma sqrt(a^2 (a^2 + alpha^2(t))) sqrt(h) dW,
    truncated at 0, and t' = t + tdot h. The step h defaults to stepsize(). With
    p.scheme = 'implicit' the velocity is advanced by the order-preserving variant.
    The returned state has horizon=True when t' >= T - eps_horizon.

    Example:
        model = rw.catalog('constant')
        p = rw.StepParams(sigma=1, d=3, ds=0.01, adaptive=False)
        new = rw.step_temporal(rw.TemporalState(t=1, a=1, model=model), model, p, 0.5)
        new.a**2 # 1 + 0.07 + 0.2*sqrt(2)*0.5
    '''
    if state.t >= model.T - p.eps_horizon:
        errormsg = 'State at t=%g is already inside the horizon margin of T=%g' % (state.t, model.T)
        raise ut.DomainError(errormsg)
    if h is None:
        h = stepsize(state.t, state.tdot, model.T, p)
    tnew, wnew, lanew, horizon = _advance(state.t, state.w, state.logalpha, model, p, h, dW)
    return TemporalState(s=state.s+h, t=tnew, w=wnew, logalpha=lanew, horizon=horizon)


def step_tamed(t, tdot, model, p, h, dW):
    '''
    Tamed Euler step written directly in (t, tdot):
    tdot' = tdot + b h/(1 + h|b|) + sigma sqrt(tdot^2-1) sqrt(h) dW with
    b = -H(t)(tdot^2-1) + d sigma^2 tdot/2, floored at 1; t' = t + tdot h.
    '''
    b = -model.H(t)*(tdot**2 - 1.0) + 0.5*p.d*p.sigma**2*tdot
    new = tdot + b*h/(1.0 + h*abs(b)) + p.sigma*np.sqrt(max(tdot**2 - 1.0, 0.0))*np.sqrt(h)*dW
    return t + tdot*h, max(new, 1.0)



##############################################################################
### PATHS
##############################################################################

__all__ += ['TemporalPath', 'simulate_temporal', 'integrate_fixed', 'pseudonorm_residual']

_csvcols = ['s', 't', 'tdot', 'a', 'clock', 'conformal']


class TemporalPath(ut.prettyobj):
    '''
    Sampled temporal trajectory: arrays s, t, tdot, a, clock (sigma^2 times the
    integral of ds/(tdot^2-1)) and conformal (the integral of a/alpha^2 ds), plus
    the scaled velocity w and a termination report (kind, message, steps).
    '''

    def __init__(self, s=None, t=None, tdot=None, a=None, clock=None, conformal=None, w=None, termination=None, meta=None):
        self.s         = ut.promotetoarray(s)
        self.t         = ut.promotetoarray(t)
        self.tdot      = ut.promotetoarray(tdot)
        self.a         = ut.promotetoarray(a)
        self.clock     = ut.promotetoarray(clock)
        self.conformal = ut.promotetoarray(conformal)
        self.w         = ut.promotetoarray(w) if w is not None else np.sqrt(np.maximum(self.tdot**2 - 1.0, 0.0))
        self.termination = termination if termination is not None else objdict(kind=Termination.ProperTimeBudget, message='', steps=len(self.s))
        self.meta = meta if meta is not None else objdict()
        return None

    def __len__(self):
        return len(self.s)

    @property
    def terminated(self):
        return self.termination.kind

    def columns(self):
        ''' CSV columns in order '''
        return odict([(col, getattr(self, col)) for col in _csvcols])

    def sidecar(self):
        ''' Termination report and run metadata for the JSON sidecar '''
        output = objdict(termination=self.termination)
        output.nsamples = len(self)
        output.update(self.meta)
        return output

    def to_csv(self, filename, sidecar=True):
        ''' Write s,t,tdot,a,clock,conformal and (optionally) the JSON sidecar next to it '''
        filename = rf.savecsv(filename, self.columns())
        if sidecar:
            rf.savejson(sidecarname(filename), self.sidecar())
        return filename

    @classmethod
    def from_csv(cls, filename):
        ''' Read a path written by to_csv(); the sidecar is loaded when present '''
        data = rf.loadcsv(filename, columns=_csvcols)
        termination, meta = None, None
        jsonname = sidecarname(filename)
        if os.path.isfile(jsonname):
            meta = rf.loadjson(jsonname)
            termination = meta.pop('termination', None)
            meta.pop('nsamples', None)
        return cls(termination=termination, meta=meta, **{col:data[col] for col in _csvcols})


def sidecarname(filename):
    ''' The JSON sidecar that accompanies a trajectory CSV '''
    base = filename[:-4] if filename.endswith('.csv') else filename
    return base + '.json'


class _PathRecorder(object):
    ''' Accumulates the clock and conformal integrals and keeps thinned samples '''

    def __init__(self, state, sigma, thin):
        self.sigma2 = sigma**2
        self.thin = thin
        self.clock = 0.0
        self.conformal = 0.0
        self.nsteps = 0
        self._prev = (state.w, state.logalpha)
        self.rows = []
        self.record(state, force=True)
        return None

    def accumulate(self, w, logalpha, h):
        w0, la0 = self._prev
        q0, q1 = w0*w0, w*w
        g0 = self.sigma2/q0 if q0 > 0 else np.inf
        g1 = self.sigma2/q1 if q1 > 0 else np.inf
        finite = [g for g in [g0, g1] if np.isfinite(g)]
        if len(finite) == 2:
            self.clock += 0.5*(g0 + g1)*h
        elif len(finite) == 1: # Degenerate endpoint: use the finite one
            self.clock += finite[0]*h
        self.conformal += 0.5*(w0*np.exp(-la0) + w*np.exp(-logalpha))*h
        self._prev = (w, logalpha)
        self.nsteps += 1
        return None

    def record(self, state, force=False):
        if force or self.nsteps % self.thin == 0:
            self.rows.append((state.s, state.t, state.tdot, state.a, self.clock, self.conformal, state.w))
            return True
        return False

    def topath(self, termination, meta=None):
        arr = np.array(self.rows, dtype=float).reshape(-1, 7)
        return TemporalPath(s=arr[:,0], t=arr[:,1], tdot=arr[:,2], a=arr[:,3], clock=arr[:,4], conformal=arr[:,5], w=arr[:,6], termination=termination, meta=meta)


def _checkinit(init, model):
    if not 0 < init.t < model.T:
        errormsg = 'Initial time %g must lie in (0, %g)' % (init.t, model.T)
        raise ut.DomainError(errormsg)
    return None


def simulate_temporal(init, model, p, s_max, rng=None, noise=None, verbose=None):
    '''
    Iterate step_temporal from init until s reaches s_max or t reaches
    T - eps_horizon. The clock and conformal integrals accumulate by trapezoid.
    Numerical failures end the path with termination kind NumericalFailure; they
    are recorded, never raised.

    Args:
        init: initial TemporalState
        model: ExpansionModel
        p: StepParams
        s_max: proper-time budget
        rng: numpy Generator for the increments (or noise, a stream with next())

    Example:
        model = rw.catalog('power', c=1)
        path = rw.simulate_temporal(rw.TemporalState(t=1, a=1, model=model), model, rw.StepParams(), 10, rw.makerng(1))
    '''
    if verbose is None: verbose = 1
    _checkinit(init, model)
    if noise is None:
        if rng is None:
            errormsg = 'simulate_temporal needs an rng or a noise stream'
            raise ut.ConfigurationError(errormsg)
        noise = NoiseStream(rng)
    state = init
    recorder = _PathRecorder(state, p.sigma, p.thin)
    s_end = init.s + s_max
    kind, message = Termination.ProperTimeBudget, ''
    while state.s < s_end - 1e-12*max(1.0, s_end):
        h = stepsize(state.t, state.tdot, model.T, p, remaining=s_end-state.s)
        try:
            new = step_temporal(state, model, p, noise.next(), h=h)
        except ut.NumericalFailure as E:
            kind, message = Termination.NumericalFailure, str(E)
            ut.printv('Trajectory stopped at s=%g: %s' % (state.s, message), 1, verbose)
            break
        recorder.accumulate(new.w, new.logalpha, h)
        state = new
        if state.horizon:
            kind, message = Termination.HorizonReached, 'reached t = %.12g' % state.t
            break
        recorder.record(state)
    if not recorder.rows[-1][0] == state.s:
        recorder.record(state, force=True)
    termination = objdict(kind=kind, message=message, steps=recorder.nsteps, s_end=state.s, t_end=state.t)
    meta = objdict(model=model.to_dict(), params=p.to_dict())
    ut.printv('Temporal path: %i steps, %s at s=%g' % (recorder.nsteps, kind, state.s), 3, verbose)
    return recorder.topath(termination, meta)


def integrate_fixed(init, model, p, h, increments, scheme=None):
    '''
    Fixed-step integration over a supplied array of standard normal increments with
    either the (t, a^2) scheme ('euler', 'implicit') or the tamed (t, tdot) scheme
    ('tamed'). Returns the arrays (t, tdot) including the initial point.
    '''
    if scheme is None: scheme = p.scheme
    increments = ut.promotetoarray(increments)
    n = len(increments)
    tt = np.empty(n+1)
    xx = np.empty(n+1)
    tt[0], xx[0] = init.t, init.tdot
    if scheme == 'tamed':
        t, x = init.t, init.tdot
        for k in range(n):
            t, x = step_tamed(t, x, model, p, h, increments[k])
            tt[k+1], xx[k+1] = t, x
    else:
        q = p.replace(scheme=scheme, adaptive=False)
        t, w, la = init.t, init.w, init.logalpha
        for k in range(n):
            t, w, la, horizon = _advance(t, w, la, model, q, h, increments[k])
            tt[k+1], xx[k+1] = t, np.sqrt(1.0 + w*w)
    return tt, xx


def pseudonorm_residual(path, model=None):
    '''
    Relative residual |-tdot^2 + alpha^2 |xdot|^2 + 1| / tdot^2 per sample, with
    |xdot| = a/alpha^2. Uses a and the model where both are finite, else the stored
    scaled velocity.
    '''
    w = path.w
    if model is not None:
        with np.errstate(over='ignore', invalid='ignore'):
            fromA = path.a*np.exp(-ut.promotetoarray(model.logalpha(path.t)))
        w = np.where(np.isfinite(path.a) & np.isfinite(fromA), fromA, w)
    return np.abs(-path.tdot**2 + w**2 + 1.0)/path.tdot**2



##############################################################################
### ENTRANCE LAW
##############################################################################

__all__ += ['entrance_start']


def entrance_start(model, a0, p=None, alpha_floor=None, grid=None, horizons=None):
    '''
    Start just after the Big Bang: the state (0, t_start, a0) where t_start is the
    first grid time with alpha(t_start) >= alpha_floor (default 1e-3 times the
    largest alpha on the grid). The grid is geometric on (0, min(1, T/2)]. Only
    models with a finite past horizon I- admit this start.

    Example:
        rw.entrance_start(rw.catalog('power', c=2/3), 1.0)
    '''
    if not a0 > 0:
        errormsg = 'The entrance velocity a0 must be positive, not %s' % a0
        raise ut.DomainError(errormsg)
    if horizons is None: horizons = rx.horizon_integrals(model)
    if not np.isfinite(horizons.i_minus):
        errormsg = 'Model %s has an infinite past horizon (I- = inf): no entrance law at t = 0' % model.label
        raise ut.ModelError(errormsg)
    if grid is None:
        tmax = min(1.0, model.T/2)
        grid = np.geomspace(1e-12*tmax, tmax, 1201)
    logalpha = ut.promotetoarray(model.logalpha(grid))
    if alpha_floor is None:
        logfloor = np.max(logalpha) + np.log(1e-3)
    else:
        logfloor = np.log(alpha_floor)
    inds = rm.findinds(logalpha >= logfloor)
    if not len(inds):
        errormsg = 'alpha never reaches the floor %g on the entrance grid' % np.exp(logfloor)
        raise ut.ModelError(errormsg)
    t_start = float(grid[inds[0]])
    return TemporalState(s=0.0, t=t_start, a=float(a0), model=model)



##############################################################################
### CONSTANT-H INVARIANT DENSITY
##############################################################################

__all__ += ['invariant_density', 'invariant_normalization', 'invariant_cdf', 'invariant_moment', 'sample_invariant']


def _checkinvariant(H, sigma, d):
    if not H > 0 or not sigma > 0:
        errormsg = 'The invariant density needs H > 0 and sigma > 0, not H=%s, sigma=%s' % (H, sigma)
        raise ut.DomainError(errormsg)
    if int(d) != d or d < 3:
        errormsg = 'The fiber dimension must be an integer >= 3, not %s' % d
        raise ut.DomainError(errormsg)
    return None


def _loginvariant(x, H, sigma, d):
    ''' log of (x^2-1)^(d/2-1) exp(-2Hx/sigma^2) '''
    x = np.asarray(x, dtype=float)
    with np.errstate(divide='ignore', invalid='ignore'):
        out = (0.5*d - 1)*np.log(x*x - 1.0) - 2*H*x/sigma**2
    return np.where(x > 1, out, -np.inf)


@functools.lru_cache(maxsize=64)
def invariant_normalization(H, sigma, d):
    ''' Z_{H,sigma} = integral over (1, inf) of the unnormalized density '''
    _checkinvariant(H, sigma, d)
    lam = 2*H/sigma**2
    func = lambda x: float(np.exp(_loginvariant(x, H, sigma, d)))
    mode = 1.0 + max((0.5*d-1)/lam, 1e-3)
    return rm.quad(func, 1.0, mode) + rm.quad(func, mode, np.inf)


def invariant_density(H, sigma, d, x):
    '''
    The invariant density of tdot for the constant-H model:
    unnormalized (x^2-1)^(d/2-1) exp(-2Hx/sigma^2), and normalized by Z_{H,sigma}.

    Example:
        u, nu = rw.invariant_density(1, 1, 3, 2.0)
    '''
    _checkinvariant(H, sigma, d)
    x = np.asarray(x, dtype=float)
    if np.any(x <= 1):
        errormsg = 'The invariant density lives on x > 1'
        raise ut.DomainError(errormsg)
    unnormalized = np.exp(_loginvariant(x, H, sigma, d))
    normalized = unnormalized/invariant_normalization(float(H), float(sigma), int(d))
    return rx._out(unnormalized), rx._out(normalized)


def _invariant_span(H, sigma, d):
    ''' Upper end of the tabulated support, past which the mass is negligible '''
    lam = 2*H/sigma**2
    mean = 1.0 + (0.5*d)/lam
    return 1.0 + (mean - 1.0) + (45.0 + (d-2)*np.log(2.0 + d/lam))/lam


@functools.lru_cache(maxsize=64)
def _cdftable(H, sigma, d):
    xmax = _invariant_span(H, sigma, d)
    nodes = 1.0 + np.concatenate([[0.0], np.geomspace(1e-10, xmax-1.0, 600)])
    func = lambda x: float(np.exp(_loginvariant(x, H, sigma, d)))
    pieces = np.array([rm.quad(func, a, b) for a,b in zip(nodes[:-1], nodes[1:])])
    cum = np.concatenate([[0.0], np.cumsum(pieces)])
    cum = np.clip(cum/invariant_normalization(H, sigma, d), 0.0, 1.0)
    cum = np.maximum.accumulate(cum)
    return nodes, PchipInterpolator(nodes, cum, extrapolate=False)


def invariant_cdf(H, sigma, d):
    '''
    The CDF of the invariant law, tabulated once per (H, sigma, d) and returned as
    a vectorized function.

    Example:
        cdf = rw.invariant_cdf(1, 1, 3)
        cdf(2.0)
    '''
    _checkinvariant(H, sigma, d)
    nodes, interp = _cdftable(float(H), float(sigma), int(d))

    def cdf(x):
        x = np.asarray(x, dtype=float)
        out = np.where(x <= 1, 0.0, np.where(x >= nodes[-1], 1.0, 0.0))
        inside = (x > 1) & (x < nodes[-1])
        if np.any(inside):
            out = np.array(out, dtype=float)
            out[inside] = np.clip(interp(x[inside]), 0.0, 1.0)
        return rx._out(out)

    return cdf


def invariant_moment(H, sigma, d, f=None):
    '''
    Expectation of f under the invariant law by quadrature (default f(x) = x).

    Example:
        rw.invariant_moment(1, 1, 3, lambda x: 1/x**2)
    '''
    _checkinvariant(H, sigma, d)
    if f is None: f = lambda x: x
    Z = invariant_normalization(float(H), float(sigma), int(d))
    func = lambda x: f(x)*float(np.exp(_loginvariant(x, H, sigma, d)))/Z
    mode = 1.0 + max((0.5*d-1)/(2*H/sigma**2), 1e-3)
    return rm.quad(func, 1.0, mode) + rm.quad(func, mode, np.inf)


def sample_invariant(H, sigma, d, rng, size=None, maxtries=None):
    '''
    Draw from the invariant law by rejection: y = x-1 is proposed from a gamma law
    with shape d/2 and rate H/sigma^2, and accepted with probability
    (y+2)^k exp(-eps y)/M, where k = d/2-1, eps = H/sigma^2 and M is the maximum
    of that ratio.

    Example:
        x = rw.sample_invariant(1, 1, 3, rw.makerng(0), size=1000)
    '''
    _checkinvariant(H, sigma, d)
    if maxtries is None: maxtries = 1000
    n = 1 if size is None else int(size)
    lam = 2*H/sigma**2
    k = 0.5*d - 1
    eps = 0.5*lam
    mu = 0.5*lam
    ystar = k/eps - 2
    logM = k*np.log(k/eps) - eps*ystar if ystar > 0 else k*np.log(2.0)
    out = np.empty(0)
    for attempt in range(maxtries):
        need = n - len(out)
        batch = max(16, int(1.5*need) + 8)
        y = rng.gamma(shape=k+1, scale=1/mu, size=batch)
        logratio = k*np.log(y + 2) - eps*y - logM
        accept = np.log(rng.random(batch)) <= logratio
        out = np.concatenate([out, 1.0 + y[accept]])
        if len(out) >= n:
            out = out[:n]
            return float(out[0]) if size is None else out
    errormsg = 'Rejection sampling produced %i of %i draws after %i rounds' % (len(out), n, maxtries)
    raise ut.RWDiffError(errormsg)



##############################################################################
### COMPARISON COUPLING
##############################################################################

__all__ += ['comparison_triple']


def comparison_triple(init, model, p, s_max, rng=None, increments=None, H_inf=None, verbose=None):
    '''
    Three processes driven by the same increments: u with H frozen at H(t0), the
    true tdot, and v with H frozen at H_inf (from classify_growth unless given).
    All use the order-preserving implicit scheme with a fixed step ds, so
    u <= tdot <= v at every sample. Returns an objdict of TemporalPaths u, tdot, v.

    Example:
        model = rw.catalog('sinh')
        triple = rw.comparison_triple(rw.TemporalState.from_tdot(1.0, 2.0, model), model, rw.StepParams(ds=1e-2), 20, rw.makerng(3))
        np.all(triple.u.tdot <= triple.tdot.tdot)
    '''
    if not np.isinf(model.T):
        errormsg = 'The comparison coupling needs T = inf, not %g' % model.T
        raise ut.DomainError(errormsg)
    if H_inf is None:
        growth = rx.classify_growth(model, verbose=verbose)
        if growth.kind == 'Indeterminate':
            errormsg = 'Cannot freeze H at infinity: %s' % growth.reason
            raise ut.IndeterminateError(errormsg)
        H_inf = growth.H_inf if growth.kind == 'Exponential' else 0.0
    q = p.replace(scheme='implicit', adaptive=False)
    nsteps = int(np.ceil(s_max/q.ds - 1e-9))
    if increments is None:
        if rng is None:
            errormsg = 'comparison_triple needs an rng or an increments array'
            raise ut.ConfigurationError(errormsg)
        increments = rng.standard_normal(nsteps)
    s_max = len(increments)*q.ds

    frozen_u = rx.catalog('constant', H=float(model.H(init.t)))
    frozen_v = rx.catalog('constant', H=float(H_inf))
    output = objdict()
    for key,thismodel in [('u', frozen_u), ('tdot', model), ('v', frozen_v)]:
        start = TemporalState(s=init.s, t=init.t, w=init.w, model=thismodel)
        output[key] = simulate_temporal(start, thismodel, q, s_max, noise=ArrayNoise(increments), verbose=verbose)
    return output



##############################################################################
### ESTIMATORS
##############################################################################

__all__ += ['rate_estimate', 'clock_diagnostic', 'constant_h_decomposition']


def rate_estimate(path, model, tail_fraction=None, minsamples=None):
    '''
    Least-squares slopes against s of log tdot, log alpha(t) and log of the integral
    of alpha up to t, over the trailing tail_fraction (default 0.2) of the path.

    Example:
        rates = rw.rate_estimate(path, model)
        rates.rate_tdot
    '''
    if tail_fraction is None: tail_fraction = 0.2
    if minsamples    is None: minsamples    = 100
    inds = rm.tailslice(len(path), tail_fraction, minlength=minsamples)
    s = path.s[inds]
    t = path.t[inds]
    logtdot = 0.5*np.log1p(path.w[inds]**2)
    logalpha = ut.promotetoarray(model.logalpha(t))
    logstart = rx.log_integral_alpha(model, t[0])
    logint = rm.logcumtrapz(logalpha, t, logstart=logstart)
    output = objdict()
    output.rate_tdot      = rm.linslope(s, logtdot)[0]
    output.rate_alpha     = rm.linslope(s, logalpha)[0]
    output.rate_int_alpha = rm.linslope(s, logint)[0]
    output.nsamples = len(s)
    return output


def clock_diagnostic(path, window=None, tol_clock=None):
    '''
    Converging when the clock grows by less than tol_clock (default 1e-2) times its
    total over the last window samples (default a tenth of the path); Diverging,
    with the least-squares slope over that window, otherwise.

    Example:
        rw.clock_diagnostic(path).kind # 'Converging' or 'Diverging'
    '''
    n = len(path)
    if window    is None: window    = n//10
    if tol_clock is None: tol_clock = 1e-2
    if window < 1 or n < 2*window:
        errormsg = 'The clock diagnostic needs at least 2 windows of samples (window %i, %i samples)' % (window, n)
        raise ut.InsufficientSamples(errormsg)
    clock = path.clock
    total = clock[-1] - clock[0]
    increment = clock[-1] - clock[-window-1]
    if increment <= tol_clock*total:
        return objdict(kind='Converging', estimate=float(clock[-1]), increment=float(increment))
    slope = rm.linslope(path.s[-window-1:], clock[-window-1:])[0]
    return objdict(kind='Diverging', slope=float(slope), increment=float(increment))


def constant_h_decomposition(path, sigma, d):
    ''' log tdot - log tdot_0 - (d-1) sigma^2 s/2: the bounded-variation remainder when H = 0 '''
    logtdot = 0.5*np.log1p(path.w**2)
    return logtdot - logtdot[0] - 0.5*(d-1)*sigma**2*(path.s - path.s[0])
