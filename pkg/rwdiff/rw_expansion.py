"""
The warping function alpha of a Robertson-Walker spacetime (0,T) x_alpha M and
everything derived from it: the Hubble function, growth classes, horizon integrals,
energy conditions and the theory-side prediction of the asymptotic regimes.

Version: 2026oct17
"""

##############################################################################
### IMPORTS
##############################################################################

import os
import re
import numpy as np
from scipy.interpolate import PchipInterpolator
from . import rw_utils as ut
from . import rw_math as rm
from . import rw_fileio as rf
from .rw_odict import odict, objdict


##############################################################################
### CLOSED FORMS
##############################################################################

# Each family supplies log(alpha), H and H' as functions of (t, params)

def _constant_logalpha(t, p): return p['H']*t
def _constant_H(t, p):        return p['H']*np.ones_like(t)
def _constant_Hprime(t, p):   return np.zeros_like(t)

def _power_logalpha(t, p):    return p['c']*np.log(t)
def _power_H(t, p):           return p['c']/t
def _power_Hprime(t, p):      return -p['c']/t**2

def _power_exp_logalpha(t, p): return p['gamma']*np.log(t) + t**p['beta']
def _power_exp_H(t, p):        return p['gamma']/t + p['beta']*t**(p['beta']-1)
def _power_exp_Hprime(t, p):   return -p['gamma']/t**2 + p['beta']*(p['beta']-1)*t**(p['beta']-2)

def _sinh_logalpha(t, p): return t + np.log(-np.expm1(-2*t)) - np.log(2)
def _sinh_H(t, p):        return 1/np.tanh(t)
def _sinh_Hprime(t, p):   return -4*np.exp(-2*t)/np.expm1(-2*t)**2

def _crunch_logalpha(t, p): return 0.5*(np.log(t) + np.log(p['T']-t))
def _crunch_H(t, p):        return (p['T']/2-t)/(t*(p['T']-t))
def _crunch_Hprime(t, p):
    T = p['T']
    return -(t**2 - T*t + T**2/2)/(t*(T-t))**2

_closedforms = {
    'constant':             (_constant_logalpha,  _constant_H,  _constant_Hprime),
    'power':                (_power_logalpha,     _power_H,     _power_Hprime),
    'power_exp':            (_power_exp_logalpha, _power_exp_H, _power_exp_Hprime),
    'sinh':                 (_sinh_logalpha,      _sinh_H,      _sinh_Hprime),
    'big_crunch_radiation': (_crunch_logalpha,    _crunch_H,    _crunch_Hprime),
}

# Default parameters in positional order, and a one-line description
_families = odict([
    ('constant',             objdict(params=odict(H=0.0),               formula='alpha = exp(H t); H = 0 is the static model')),
    ('power',                objdict(params=odict(c=1.0),               formula='alpha = t^c')),
    ('power_exp',            objdict(params=odict(gamma=0.0, beta=0.5), formula='alpha = t^gamma exp(t^beta), beta in (0,1)')),
    ('sinh',                 objdict(params=odict(),                    formula='alpha = sinh(t), de Sitter')),
    ('big_crunch_radiation', objdict(params=odict(T=2.0),               formula='alpha = sqrt(t (T-t)) on (0,T)')),
    ('tabulated',            objdict(params=odict(),                    formula='monotone cubic interpolation of sampled (t, alpha)')),
])

_aliases = {'desitter':'sinh', 'de_sitter':'sinh', 'custom-tabulated':'tabulated', 'custom_tabulated':'tabulated',
            'bigcrunch':'big_crunch_radiation', 'big_crunch':'big_crunch_radiation', 'static':'constant'}


def _out(x):
    ''' Return a float for 0-d results and an array otherwise '''
    if np.ndim(x)==0: return float(x)
    return x



##############################################################################
### THE MODEL CLASS
##############################################################################

__all__ = ['ExpansionModel']


class ExpansionModel(ut.prettyobj):
    '''
    A warping function alpha on (0,T) with its derivatives and Hubble function.
    Models are normally built with catalog(); a tabulated model takes a table of
    (t, alpha) samples, and a user model takes callables (see from_functions()).

    Catalog models evaluate log(alpha) directly, so alpha never has to be formed
    for fast-growing models; H and H' are closed form. Tabulated and user models
    fall back to central differences with step max(1e-6, 1e-6*t).

    Example:
        model = rw.catalog('power', c=2/3)
        model.H(8.0) # 1/12
    '''

    def __init__(self, family=None, params=None, T=None, table=None, funcs=None, label=None):
        if family is None: family = 'constant'
        if params is None: params = {}
        if T      is None: T = np.inf
        self.family = family
        self.params = odict(params)
        self.T      = float(T)
        self.kind   = 'user' if funcs is not None else family
        self.table  = None
        self.funcs  = funcs
        self._interp = None
        if family == 'tabulated':
            self._settable(table)
        self.label = label if label is not None else self._makelabel()
        return None

    def _makelabel(self):
        if self.funcs is not None:
            return 'user'
        if not len(self.params):
            return self.family
        return '%s(%s)' % (self.family, ','.join(['%s=%g' % (key, val) for key,val in self.params.items()]))

    def _settable(self, table):
        ''' Validate samples and build the interpolant with its C1 extensions '''
        if table is None:
            errormsg = 'A tabulated model needs a table of (t, alpha) samples'
            raise ut.ModelError(errormsg)
        tt = ut.promotetoarray(table[0])
        aa = ut.promotetoarray(table[1])
        if len(tt) != len(aa):
            errormsg = 'Table columns differ in length: %i times vs %i values' % (len(tt), len(aa))
            raise ut.ModelError(errormsg)
        if len(tt) < 8:
            errormsg = 'A tabulated model needs at least 8 samples, not %i' % len(tt)
            raise ut.ModelError(errormsg)
        if np.any(np.diff(tt) <= 0) or tt[0] <= 0 or tt[-1] >= self.T:
            errormsg = 'Table times must be strictly increasing inside (0, %g)' % self.T
            raise ut.ModelError(errormsg)
        if np.any(~np.isfinite(aa)) or np.any(aa <= 0):
            errormsg = 'Table values of alpha must be finite and strictly positive'
            raise ut.ModelError(errormsg)
        self.table = np.array([tt, aa])
        self._interp = PchipInterpolator(tt, aa, extrapolate=False)
        deriv = self._interp.derivative()
        self._t1, self._tn = tt[0], tt[-1]
        self._loga1, self._logan = np.log(aa[0]), np.log(aa[-1])
        self._H1 = float(deriv(tt[0]))/aa[0]
        self._Hn = float(deriv(tt[-1]))/aa[-1]
        if np.isfinite(self.T) and self._Hn >= 0:
            errormsg = 'With a finite T the table must end with a decreasing alpha, so that alpha -> 0 at T'
            raise ut.ModelError(errormsg)
        return None

    def _tab_logalpha(self, t):
        t = np.asarray(t, dtype=float)
        inside = (t >= self._t1) & (t <= self._tn)
        out = np.empty(t.shape)
        with np.errstate(divide='ignore', invalid='ignore'):
            out[inside] = np.log(self._interp(t[inside]))
            below = t < self._t1 # Power law t^p matching value and slope at the first sample
            out[below] = self._loga1 + self._H1*self._t1*np.log(t[below]/self._t1)
            above = t > self._tn
            if np.isinf(self.T): # Constant-H continuation
                out[above] = self._logan + self._Hn*(t[above]-self._tn)
            else: # (T-t)^q continuation with alpha -> 0 at T
                q = -self._Hn*(self.T-self._tn)
                out[above] = self._logan + q*np.log((self.T-t[above])/(self.T-self._tn))
        return out

    def _fd(self, func, t):
        ''' Central difference, one-sided when a neighbour would leave (0,T) '''
        t = np.asarray(t, dtype=float)
        h = np.maximum(1e-6, 1e-6*t)
        lo = t - h
        hi = t + h
        left  = lo <= 0
        right = hi >= self.T
        lo = np.where(left, t, lo)
        hi = np.where(right, t, hi)
        return (func(hi) - func(lo))/(hi - lo)

    # Public evaluation

    def logalpha(self, t):
        ''' log(alpha(t)) '''
        t = np.asarray(t, dtype=float)
        if self.funcs is not None:
            if self.funcs.get('logalpha') is not None: out = self.funcs['logalpha'](t)
            else:                                       out = np.log(self.funcs['alpha'](t))
        elif self.family == 'tabulated':
            out = self._tab_logalpha(t)
        else:
            out = _closedforms[self.family][0](t, self.params)
        return _out(out)

    def alpha(self, t):
        ''' The warping function '''
        return _out(np.exp(self.logalpha(t)))

    def H(self, t):
        ''' Hubble function alpha'/alpha '''
        t = np.asarray(t, dtype=float)
        if self.funcs is not None:
            if self.funcs.get('H') is not None:
                out = self.funcs['H'](t)
            elif self.funcs.get('alpha_prime') is not None:
                out = self.funcs['alpha_prime'](t)/self.funcs['alpha'](t)
            else:
                out = self._fd(self.logalpha, t)
        elif self.family == 'tabulated':
            out = self._fd(self._tab_logalpha, t)
        else:
            out = _closedforms[self.family][1](t, self.params)
        return _out(out)

    def H_prime(self, t):
        ''' Derivative of the Hubble function '''
        t = np.asarray(t, dtype=float)
        if self.funcs is not None and self.funcs.get('H_prime') is not None:
            out = self.funcs['H_prime'](t)
        elif self.funcs is not None or self.family == 'tabulated':
            out = self._fd(self.H, t)
        else:
            out = _closedforms[self.family][2](t, self.params)
        return _out(out)

    def alpha_prime(self, t):
        return _out(self.H(t)*self.alpha(t))

    def alpha_second(self, t):
        ''' alpha'' = alpha*(H' + H^2) '''
        return _out(self.alpha(t)*(self.H_prime(t) + self.H(t)**2))

    def checkdomain(self, t, label=None):
        ''' Raise a DomainError unless every t is inside (0,T) '''
        t = ut.promotetoarray(t)
        if np.any(~(t > 0)) or np.any(~(t < self.T)):
            errormsg = '%s must lie in (0, %g), not %s' % (label or 'Time', self.T, t if len(t)>1 else t[0])
            raise ut.DomainError(errormsg)
        return None

    def describe(self):
        ''' Short description of the model '''
        output = objdict(label=self.label, family=self.family, kind=self.kind, params=objdict(self.params), T=self.T)
        if self.family in _families:
            output.formula = _families[self.family].formula
        if self.table is not None:
            output.nsamples = self.table.shape[1]
        return output

    def to_dict(self):
        output = objdict(family=self.family, params=objdict(self.params), T=self.T)
        if self.table is not None:
            output.table = self.table
        return output

    @classmethod
    def from_dict(cls, data):
        ''' Rebuild a catalog or tabulated model from to_dict() output, e.g. a JSON sidecar entry '''
        family = data['family']
        if family == 'user':
            errormsg = 'User models built from callables cannot be rebuilt from a dict'
            raise ut.ModelError(errormsg)
        T = rf.desanitize(data.get('T', np.inf))
        table = data.get('table')
        kwargs = {'T':float(T)} if family == 'tabulated' else {}
        params = dict(data.get('params') or {})
        return catalog(family, params=params, table=table, **kwargs)

    @classmethod
    def from_functions(cls, alpha=None, logalpha=None, alpha_prime=None, H=None, H_prime=None, T=None, label=None):
        '''
        Build a user model from callables. Either alpha or logalpha is required;
        missing derivatives are finite-differenced. Models built from lambdas cannot
        be sent to worker processes.

        Example:
            model = rw.ExpansionModel.from_functions(alpha=lambda t: np.exp(t**2), H=lambda t: 2*t)
        '''
        if alpha is None and logalpha is None:
            errormsg = 'A user model needs alpha or logalpha'
            raise ut.ModelError(errormsg)
        funcs = dict(alpha=alpha, logalpha=logalpha, alpha_prime=alpha_prime, H=H, H_prime=H_prime)
        return cls(family='user', T=T, funcs=funcs, label=label)



##############################################################################
### CATALOG AND MODEL FILES
##############################################################################

__all__ += ['catalog', 'catalog_names', 'standard_models', 'load_model', 'model_from_config', 'save_model']


def catalog_names():
    ''' Names of the catalog families '''
    return _families.keys()


def _parsename(name):
    ''' Split "power(c=2)" or "power(2)" into the name and its arguments '''
    match = re.match(r'^\s*([\w\-]+)\s*\((.*)\)\s*$', name)
    if not match:
        return name.strip(), [], {}
    name, argstring = match.group(1), match.group(2)
    args, kwargs = [], {}
    for item in [item.strip() for item in argstring.split(',') if item.strip()]:
        if '=' in item:
            key, val = item.split('=', 1)
            kwargs[key.strip()] = _number(val)
        else:
            args.append(_number(item))
    return name, args, kwargs


def _number(string):
    string = string.strip()
    if '/' in string: # e.g. 2/3
        num, den = string.split('/', 1)
        return float(num)/float(den)
    try:
        return float(string)
    except ValueError:
        errormsg = 'Could not read "%s" as a number' % string
        raise ut.ModelError(errormsg)


def catalog(name=None, params=None, table=None, **kwargs):
    '''
    Build a catalog model by name. Parameters can be given as a list (positional
    order), a dict, keyword arguments, or inside the name string.

    Families: constant(H=0), power(c), power_exp(gamma, beta), sinh,
    big_crunch_radiation(T=2), tabulated (needs table=(t, alpha)).

    Examples:
        rw.catalog('power', c=1)          # alpha = t, Milne-type
        rw.catalog('power(2/3)')          # matter-dominated flat model
        rw.catalog('big_crunch_radiation') # alpha = sqrt(t(2-t)) on (0,2)
        rw.catalog('sinh')                # de Sitter
    '''
    if name is None: name = 'constant'
    name, args, strkwargs = _parsename(name)
    name = _aliases.get(name.lower(), name.lower())
    if name not in _families:
        suggestion = ut.suggest(name, _families.keys())
        errormsg = 'Model "%s" not found; did you mean "%s"? Choices are: %s' % (name, suggestion, ', '.join(_families.keys()))
        raise ut.ModelError(errormsg)
    T = kwargs.pop('T', np.inf) if name == 'tabulated' else np.inf

    defaults = _families[name].params
    given = odict()
    if params is not None:
        if isinstance(params, dict): given.update(params)
        else:                        args = ut.promotetolist(params) + args
    if len(args) > len(defaults):
        errormsg = 'Model "%s" takes %i parameters (%s), not %i' % (name, len(defaults), ', '.join(defaults.keys()), len(args))
        raise ut.ModelError(errormsg)
    for key,val in zip(defaults.keys(), args): given[key] = val
    given.update(strkwargs)
    given.update(kwargs)
    for key in given.keys():
        if key not in defaults:
            errormsg = 'Model "%s" has no parameter "%s"; parameters are: %s' % (name, key, ', '.join(defaults.keys()) or 'none')
            raise ut.ModelError(errormsg)
    p = odict(defaults)
    for key,val in given.items():
        if not ut.isnumber(val) or not np.isfinite(val):
            errormsg = 'Parameter %s=%s of model "%s" must be a finite number' % (key, val, name)
            raise ut.ModelError(errormsg)
        p[key] = float(val)

    if name == 'constant' and p['H'] < 0:
        errormsg = 'constant(H) needs H >= 0, not %g' % p['H']
        raise ut.ModelError(errormsg)
    elif name == 'power' and p['c'] < 0:
        errormsg = 'power(c) needs c >= 0, not %g' % p['c']
        raise ut.ModelError(errormsg)
    elif name == 'power_exp' and (p['gamma'] < 0 or not 0 < p['beta'] < 1):
        errormsg = 'power_exp(gamma, beta) needs gamma >= 0 and beta in (0,1), not (%g, %g)' % (p['gamma'], p['beta'])
        raise ut.ModelError(errormsg)
    elif name == 'big_crunch_radiation':
        if p['T'] <= 0:
            errormsg = 'big_crunch_radiation(T) needs T > 0, not %g' % p['T']
            raise ut.ModelError(errormsg)
        T = p['T']
    return ExpansionModel(family=name, params=p, T=T, table=table)


def standard_models():
    ''' The representative models listed by the command line catalog '''
    names = ['constant', 'constant(H=1)', 'power(c=1)', 'power(c=2/3)', 'power(c=2)',
             'power_exp(gamma=0,beta=0.5)', 'power_exp(gamma=0,beta=0.8)', 'sinh', 'big_crunch_radiation']
    return [catalog(name) for name in names]


def load_model(filename=None):
    '''
    Read a model file: key-value lines with family, params and T, and for tabulated
    models a table entry naming a two-column (t, alpha) CSV relative to the file.

    Example model file:
        family = power_exp
        params = [0, 0.5]
    '''
    cfg = rf.loadconfig(filename)
    return model_from_config(cfg, folder=os.path.dirname(os.path.abspath(filename)))


def model_from_config(cfg, prefix='', folder=None):
    ''' Build a model from config keys (family, params, T, table, file), optionally with a prefix such as "model." '''
    get = lambda key: cfg.get(prefix+key)
    if get('file') is not None:
        filename = get('file')
        if folder is not None and not os.path.isabs(filename):
            filename = os.path.join(folder, filename)
        return load_model(filename)
    family = get('family')
    if family is None:
        errormsg = 'Model configuration needs a "%sfamily" entry' % prefix
        raise ut.ModelError(errormsg)
    params = get('params')
    if params is not None and not isinstance(params, (list, tuple, dict)):
        params = [params]
    table = None
    if get('table') is not None:
        tablefile = get('table')
        if folder is not None and not os.path.isabs(tablefile):
            tablefile = os.path.join(folder, tablefile)
        data = rf.loadcsv(tablefile)
        cols = data.keys()
        if len(cols) != 2:
            errormsg = 'Table "%s" must have exactly two columns (t, alpha), not %i' % (tablefile, len(cols))
            raise ut.ModelError(errormsg)
        table = (data[0], data[1])
    kwargs = {}
    T = get('T')
    if T is not None and str(family).lower() in ['tabulated', 'custom-tabulated']:
        kwargs['T'] = float(T)
    return catalog(family, params=params, table=table, **kwargs)


def save_model(model, filename=None):
    ''' Write a model file; tabulated samples go to a CSV next to it '''
    if model.funcs is not None:
        errormsg = 'User models built from callables cannot be saved'
        raise ut.ModelError(errormsg)
    filename = rf.makefilepath(filename=filename, default=model.family, ext='cfg')
    cfg = odict(family=model.family, params=[model.params[k] for k in model.params.keys()], T=model.T)
    if model.table is not None:
        tablename = os.path.splitext(os.path.basename(filename))[0] + '_table.csv'
        rf.savecsv(os.path.join(os.path.dirname(filename), tablename), odict(t=model.table[0], alpha=model.table[1]))
        cfg['table'] = tablename
    return rf.saveconfig(filename, cfg)



##############################################################################
### INTEGRALS
##############################################################################

__all__ += ['conformal_time', 'log_integral_alpha', 'loglog_ratio', 'horizon_integrals', 'hd_integrable', 'h3_in_l1_minus']


def conformal_time(model, t0, t):
    '''
    Conformal time between t0 and t, the integral of du/alpha(u). Antisymmetric in
    its arguments.

    Example:
        rw.conformal_time(rw.catalog('power', c=1), 1, np.e) # 1.0
    '''
    model.checkdomain([t0, t])
    if t0 == t:
        return 0.0
    lo, hi = sorted([float(t0), float(t)])
    sign = 1.0 if t >= t0 else -1.0
    integrand = lambda u: np.exp(-model.logalpha(u))
    npts = min(200, int(np.log2(hi/lo))+2)
    if npts > 2: # Breakpoints spread over several decades
        value = _quadpoints(integrand, lo, hi, np.geomspace(lo, hi, npts)[1:-1])
    else:
        value = rm.quad(integrand, lo, hi)
    return sign*value


def _quadpoints(func, lo, hi, points):
    edges = [lo] + list(points) + [hi]
    return float(sum(rm.quad(func, a, b) for a,b in zip(edges[:-1], edges[1:])))


def _logquad(model, lo, hi):
    ''' log of the integral of alpha over [lo, hi] with a shift against overflow '''
    mid = 0.5*(lo+hi)
    probes = [mid, hi] if lo <= 0 else [lo, mid, hi]
    shift = max(model.logalpha(probes))
    integrand = lambda u: np.exp(model.logalpha(u) - shift)
    width = hi - lo
    edges = [lo] + [hi - width*2.0**(-j) for j in range(1, 31)] + [hi] # Breakpoints toward hi for sharply growing integrands
    value = sum(rm.quad(integrand, a, b) for a,b in zip(edges[:-1], edges[1:]) if b > a)
    if value <= 0:
        return -np.inf
    return np.log(value) + shift


def log_integral_alpha(model, t, t_ref=None):
    '''
    log of the integral of alpha from t_ref (default 0) to t, computed in log space.
    t may be an increasing array, in which case the integral is accumulated.

    Example:
        rw.log_integral_alpha(rw.catalog('power', c=2), 3.0) # log(9)
    '''
    if t_ref is None: t_ref = 0.0
    tarr = ut.promotetoarray(t)
    if np.any(np.diff(tarr) < 0):
        errormsg = 'Times must be increasing'
        raise ut.DomainError(errormsg)
    if np.any(tarr <= t_ref) or np.any(tarr >= model.T):
        errormsg = 'Times must lie in (%g, %g)' % (t_ref, model.T)
        raise ut.DomainError(errormsg)
    edges = np.concatenate([[t_ref], tarr])
    pieces = np.array([_logquad(model, a, b) if b > a else -np.inf for a,b in zip(edges[:-1], edges[1:])])
    out = np.logaddexp.accumulate(pieces)
    return _out(out if np.ndim(t) else out[0])


def loglog_ratio(model, grid=None, t_ref=None):
    ''' r(t) = log alpha(t) / log of the integral of alpha up to t, on the grid '''
    if grid is None: grid = rm.geomgrid()
    grid = ut.promotetoarray(grid)
    logint = ut.promotetoarray(log_integral_alpha(model, grid, t_ref=t_ref))
    with np.errstate(divide='ignore', invalid='ignore'):
        return ut.promotetoarray(model.logalpha(grid))/logint


def horizon_integrals(model, c0=None, tol=None, verbose=None):
    '''
    The horizon integrals I- and I+ of du/alpha(u) near 0 and near T, split at c0
    (default 1, or T/2 for a finite T). Each is a nonnegative float or np.inf.

    Examples:
        rw.horizon_integrals(rw.catalog('power', c=1))   # i_minus=inf, i_plus=inf
        rw.horizon_integrals(rw.catalog('power', c=2/3)) # i_minus=3.0, i_plus=inf
    '''
    if c0 is None: c0 = 1.0 if np.isinf(model.T) else model.T/2
    if tol is None: tol = 1e-8
    model.checkdomain(c0, 'The split point c0')
    integrand = lambda u: float(np.exp(-model.logalpha(u)))
    i_minus = rm.improper_integral(integrand, c0, 0.0, tol=tol, verbose=verbose)
    i_plus  = rm.improper_integral(integrand, c0, model.T, tol=tol, verbose=verbose)
    return objdict(i_minus=i_minus, i_plus=i_plus, c0=float(c0))


def hd_integrable(model, d=None, tol=None, t0=None, power=None, verbose=None):
    '''
    Whether H^d is integrable at infinity (power overrides the exponent d).

    Examples:
        rw.hd_integrable(rw.catalog('power_exp', gamma=0, beta=0.5), 3) # True
        rw.hd_integrable(rw.catalog('power_exp', gamma=0, beta=0.8), 3) # False
    '''
    if d  is None: d  = 3
    if t0 is None: t0 = 1.0
    if power is None: power = d
    if not np.isinf(model.T):
        errormsg = 'Integrability of H^d at infinity needs T = inf, not %g' % model.T
        raise ut.DomainError(errormsg)
    integrand = lambda u: max(float(model.H(u)), 0.0)**power
    return bool(np.isfinite(rm.improper_integral(integrand, t0, np.inf, tol=tol, verbose=verbose)))


def h3_in_l1_minus(model, d=None, eta=None, tol=None, verbose=None):
    '''
    The L^{1-} refinement used by the clock in dimension 3: H^(d-eta) integrable at
    infinity for the given eta (default 0.05). In the critical case (H^3 integrable
    but no H^(3-eta) integrable) this is False.
    '''
    if d   is None: d   = 3
    if eta is None: eta = 0.05
    if not 0 < eta < d:
        errormsg = 'eta must be in (0, %i), not %s' % (d, eta)
        raise ut.DomainError(errormsg)
    return hd_integrable(model, d=d, tol=tol, power=d-eta, verbose=verbose)



##############################################################################
### GROWTH CLASSES AND HYPOTHESES
##############################################################################

__all__ += ['growthclass', 'classify_growth', 'check_hypotheses', 'energy_conditions']


def growthclass(kind, **kwargs):
    ''' A GrowthClass report: kind is Polynomial, Subexponential, Exponential, BigCrunch or Indeterminate '''
    valid = ['Polynomial', 'Subexponential', 'Exponential', 'BigCrunch', 'Indeterminate']
    if kind not in valid:
        errormsg = 'Growth class "%s" not recognized; choices are %s' % (kind, valid)
        raise ut.ModelError(errormsg)
    output = objdict(kind=kind)
    output.update(kwargs)
    return output


def _ratio_limit(grid, ratios):
    ''' Extrapolate r(t) to t = inf by fitting 1/r linearly in 1/log t over the last points '''
    tail = slice(-4, None)
    r = ratios[tail]
    if np.all(np.abs(r) <= 1e-12):
        return 0.0
    if np.any(r <= 0) or np.any(~np.isfinite(r)):
        return np.nan
    slope, intercept = rm.linslope(1/np.log(grid[tail]), 1/r)
    if intercept <= 0:
        return np.inf
    return float(1/intercept)


def classify_growth(model, probe_grid=None, tol_H=None, tol_r=None, verbose=None):
    '''
    Classify the growth of alpha as Polynomial(c), Subexponential(kappa),
    Exponential(H_inf) or BigCrunch, from tail limits on a geometric probe grid
    (default t_k = 2^k, k = 0..11). Tails that cannot be stabilized give an
    Indeterminate report with a reason.

    Examples:
        rw.classify_growth(rw.catalog('power', c=2))  # Polynomial, c=2
        rw.classify_growth(rw.catalog('sinh'))        # Exponential, H_inf=1
    '''
    if tol_H   is None: tol_H   = 1e-3
    if tol_r   is None: tol_r   = 1e-3
    if verbose is None: verbose = 1
    if not np.isinf(model.T):
        return growthclass('BigCrunch', T=model.T)

    grid = rm.geomgrid() if probe_grid is None else ut.promotetoarray(probe_grid)
    if len(grid) < 6 or np.any(np.diff(grid) <= 0):
        return growthclass('Indeterminate', reason='probe grid needs at least 6 increasing points, not %i' % len(grid))

    Hvals = ut.promotetoarray(model.H(grid))
    Hlim = rm.tail_limit(Hvals, tol=tol_H)
    ut.printv('H tail: %s (limit %s)' % (Hlim.status, Hlim.limit), 3, verbose)
    if Hlim.status == 'indeterminate' or (Hlim.status == 'divergent' and Hlim.limit > 0):
        return growthclass('Indeterminate', reason='H does not settle on the probe grid (%s)' % Hlim.status)
    if Hlim.status == 'divergent':
        return growthclass('Indeterminate', reason='H decreases without bound while T = inf')
    if Hlim.limit > tol_H:
        return growthclass('Exponential', H_inf=Hlim.limit)

    Ht = Hvals*grid
    Htlim = rm.tail_limit(Ht, tol=tol_H)
    ratios = loglog_ratio(model, grid)
    rlim = _ratio_limit(grid, ratios)
    ut.printv('H*t tail: %s (limit %s); loglog ratio limit %s' % (Htlim.status, Htlim.limit, rlim), 3, verbose)

    if Htlim.status == 'converged':
        if rlim < 1-tol_r:
            return growthclass('Polynomial', c=max(Htlim.limit, 0.0), ratio_limit=rlim)
        return growthclass('Indeterminate', reason='H*t converges to %g but the loglog ratio tends to %g' % (Htlim.limit, rlim))
    elif Htlim.status == 'indeterminate' and np.isfinite(rlim) and rlim < 1-tol_r:
        return growthclass('Polynomial', c=rlim/(1-rlim), ratio_limit=rlim)

    # Subexponential: kappa from the tail of -H'/H^2
    with np.errstate(divide='ignore', invalid='ignore'):
        kvals = -ut.promotetoarray(model.H_prime(grid))/Hvals**2
    tailvals = kvals[len(kvals)//2:]
    if not np.all(np.isfinite(tailvals)):
        return growthclass('Indeterminate', reason='-H\'/H^2 is not finite on the probe grid')
    klim = rm.tail_limit(kvals, tol=tol_H)
    if klim.status == 'converged':
        kappa = max(klim.limit, 0.0)
        kappa_inf = kappa
    else:
        kappa = float(tailvals.max())
        kappa_inf = float(tailvals.min())
    return growthclass('Subexponential', kappa=kappa, kappa_liminf=max(kappa_inf, 0.0), ratio_limit=rlim)


def _hypothesis_grid(model):
    if np.isinf(model.T):
        return np.geomspace(1e-3, 2048, 200)
    T = model.T
    left = T*np.geomspace(1e-6, 0.5, 100)
    right = T - T*np.geomspace(1e-6, 0.5, 100)[::-1][1:]
    return np.concatenate([left, right])


def check_hypotheses(model, grid=None, tol=None):
    '''
    Check the standing hypotheses on a grid: positivity, a smoothness proxy (finite
    H and H'), log-concavity (H nonincreasing), the endpoint behavior of case (a)
    (T = inf, H >= 0) or case (b) (T finite, alpha -> 0 at both ends, H -> -inf at
    T), and for subexponential models the window of -H'/H^2. Failures are reported,
    never raised.

    Example:
        report = rw.check_hypotheses(rw.catalog('sinh'))
        report.passed, report.case # True, 'a'
    '''
    if tol  is None: tol  = 1e-6
    if grid is None: grid = _hypothesis_grid(model)
    grid = ut.promotetoarray(grid)
    clauses = objdict()
    with np.errstate(all='ignore'):
        logalpha = ut.promotetoarray(model.logalpha(grid))
        Hvals    = ut.promotetoarray(model.H(grid))
        Hprime   = ut.promotetoarray(model.H_prime(grid))

    inside = bool(np.all(grid > 0) and np.all(grid < model.T))
    clauses.positivity = objdict(passed=inside and bool(np.all(np.isfinite(logalpha))),
                                 detail='alpha > 0 on %i grid points' % len(grid))
    clauses.smoothness = objdict(passed=bool(np.all(np.isfinite(Hvals)) and np.all(np.isfinite(Hprime))),
                                 detail='H and H\' finite on the grid')
    dH = np.diff(Hvals)
    worst = float(np.max(dH/np.maximum(1.0, np.abs(Hvals[:-1])))) if len(dH) else 0.0
    clauses.log_concave = objdict(passed=bool(worst <= tol), detail='largest relative increase of H: %g' % worst)

    case = None
    if np.isinf(model.T):
        passed = bool(np.min(Hvals) >= -1e-12)
        if passed: case = 'a'
        clauses.endpoints = objdict(passed=passed, detail='case (a): min H = %g' % np.min(Hvals))
    else:
        alphas = np.exp(logalpha)
        small = 1e-2*np.max(alphas)
        tgap = model.T - grid[-1]
        passed = bool(alphas[0] <= small and alphas[-1] <= small and Hvals[-1] < 0 and Hvals[-1] <= -0.1/tgap)
        if passed: case = 'b'
        clauses.endpoints = objdict(passed=passed, detail='case (b): alpha at the ends %g, %g; H at T- %g' % (alphas[0], alphas[-1], Hvals[-1]))

    growth = None
    if case == 'a' and clauses.log_concave.passed:
        growth = classify_growth(model)
        if growth.kind == 'Subexponential':
            passed = bool(np.isfinite(growth.kappa) and growth.kappa_liminf <= 1e-2)
            clauses.hypothesis2 = objdict(passed=passed, detail='-H\'/H^2 window: liminf %g, limsup %g' % (growth.kappa_liminf, growth.kappa))

    output = objdict()
    output.passed = all([clause.passed for clause in clauses.values()])
    output.case = case
    output.clauses = clauses
    output.growth = growth.kind if growth is not None else None
    return output


def energy_conditions(model, k=None, grid=None):
    '''
    Evaluate the weak and strong energy conditions of the perfect fluid attached to
    the spacetime, pointwise on a grid: weak is -2(alpha''/alpha - alpha'^2/alpha^2 +
    2k/alpha^2) >= 0 and strong is -alpha'' >= 0. Also reports the energy density
    and pressure (with their 8 pi factors).

    Example:
        rw.energy_conditions(rw.catalog('big_crunch_radiation'), k=1).strong.fraction # 1.0
    '''
    if k is None: k = 0
    if k not in [-1, 0, 1]:
        errormsg = 'Fiber curvature must be -1, 0 or 1, not %s' % k
        raise ut.DomainError(errormsg)
    if grid is None: grid = _hypothesis_grid(model)
    grid = ut.promotetoarray(grid)
    model.checkdomain(grid)
    with np.errstate(all='ignore'):
        Hvals  = ut.promotetoarray(model.H(grid))
        Hprime = ut.promotetoarray(model.H_prime(grid))
        inv2   = np.exp(-2*ut.promotetoarray(model.logalpha(grid))) # 1/alpha^2
        second = Hprime + Hvals**2 # alpha''/alpha
        weak   = -2*(second - Hvals**2 + 2*k*inv2)
        strong = -ut.promotetoarray(model.alpha_second(grid))
    output = objdict(k=k, grid=grid)
    output.energy_density = 3*(Hvals**2 + k*inv2)
    output.pressure = -(2*second + Hvals**2 + k*inv2)
    for name,vals in [('weak', weak), ('strong', strong)]:
        ok = vals >= -1e-12*np.maximum(1.0, np.abs(vals))
        output[name] = objdict(values=vals, satisfied=ok, fraction=float(np.mean(ok)))
    return output



##############################################################################
### REGIME PREDICTION
##############################################################################

__all__ += ['parse_curvature', 'predict_regimes']

_regimekeys = ['tdot_behavior', 'clock_convergent', 'direction_behavior', 'position_behavior', 'lifetime_finite', 'causal_boundary']

_curvatures = {'r':0, 'flat':0, 'euclidean':0, 'h':-1, 'hyperbolic':-1, 's':1, 'spherical':1, 'sphere':1}


def parse_curvature(fiber):
    ''' Curvature -1, 0 or 1 from an integer, a Fiber, or a name like "h3" or "spherical" '''
    if hasattr(fiber, 'kappa'):
        return int(fiber.kappa)
    if ut.isnumber(fiber) and fiber in [-1, 0, 1]:
        return int(fiber)
    if ut.isstring(fiber):
        key = fiber.lower().rstrip('0123456789')
        if key in _curvatures:
            return _curvatures[key]
    errormsg = 'Could not read a fiber curvature from "%s"' % fiber
    raise ut.DomainError(errormsg)


def predict_regimes(model, fiber_curvature=None, d=None, sigma=None, growth=None, horizons=None, verbose=None):
    '''
    Look up the asymptotic regimes of the diffusion from the growth class, the
    horizon integrals, the fiber curvature and the dimension: behavior of tdot,
    convergence of the clock, direction and position behaviors, finiteness of the
    lifetime, and the part of the causal boundary that is reached. Indeterminate
    classifications give a prediction flagged indeterminate.

    Example:
        pred = rw.predict_regimes(rw.catalog('sinh'), -1, d=3, sigma=1)
        pred.tdot_behavior.kind # 'HarrisRecurrent'
    '''
    if fiber_curvature is None: fiber_curvature = 0
    if d       is None: d = 3
    if sigma   is None: sigma = 1.0
    if verbose is None: verbose = 1
    k = parse_curvature(fiber_curvature)
    if int(d) != d or d < 3:
        errormsg = 'The fiber dimension must be an integer >= 3, not %s' % d
        raise ut.DomainError(errormsg)
    if not sigma > 0:
        errormsg = 'sigma must be positive, not %s' % sigma
        raise ut.DomainError(errormsg)
    d = int(d)

    output = objdict(model=model.label, fiber_curvature=k, d=d, sigma=float(sigma), indeterminate=False, reason=None)
    if growth   is None: growth   = classify_growth(model, verbose=verbose)
    output.growth = growth
    try:
        if horizons is None: horizons = horizon_integrals(model, verbose=verbose)
    except ut.IndeterminateError as E:
        horizons = None
        output.indeterminate, output.reason = True, 'horizon integrals: %s' % str(E)
    output.horizons = horizons
    if growth.kind == 'Indeterminate':
        output.indeterminate, output.reason = True, 'growth class: %s' % growth.reason

    if output.indeterminate:
        return _indeterminate(output)

    # Temporal process and clock
    try:
        if growth.kind == 'BigCrunch':
            tdot = objdict(kind='FiniteLifetimeDivergent')
            clock = True
        elif growth.kind == 'Polynomial':
            tdot = objdict(kind='Transient')
            clock = True
        elif growth.kind == 'Subexponential':
            tdot = objdict(kind='TransientInProbability', as_transient_iff_Hd_integrable=hd_integrable(model, d, verbose=verbose))
            if d > 3: clock = hd_integrable(model, 3, verbose=verbose)
            else:     clock = h3_in_l1_minus(model, 3, verbose=verbose)
        else:
            tdot = objdict(kind='HarrisRecurrent', invariant_H=growth.H_inf)
            clock = False
    except ut.IndeterminateError as E:
        output.indeterminate, output.reason = True, 'H^d integrability: %s' % str(E)
        return _indeterminate(output)

    # Spatial process
    finite_future = np.isfinite(horizons.i_plus)
    if finite_future:
        direction = 'Converges' if clock else 'RecurrentSphericalBM'
        position = 'ConvergesInFiber'
        boundary = objdict(kind='FiberCopy', limit='FiberPoint')
    elif k == 1:
        direction = 'GreatCircle'
        position = 'GreatCircle'
        boundary = objdict(kind='Apex', limit='TimelikeApex')
    else:
        direction = 'Converges'
        position = 'EscapesAlongHypersurface'
        boundary = objdict(kind='NullCone', limit='NullDirection')

    output.tdot_behavior      = tdot
    output.clock_convergent   = bool(clock)
    output.direction_behavior = direction
    output.position_behavior  = position
    output.lifetime_finite    = bool(np.isfinite(model.T))
    output.causal_boundary    = boundary
    ut.printv('Predicted regimes for %s: tdot %s, clock %s, direction %s, position %s' % (model.label, tdot.kind, clock, direction, position), 2, verbose)
    return output


def _indeterminate(output):
    ''' Blank every regime field of a prediction that could not be made '''
    for key in _regimekeys:
        output[key] = None
    return output
