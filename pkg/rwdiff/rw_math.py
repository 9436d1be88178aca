"""
Numerical helpers shared by the expansion, temporal and spatial modules: tolerance
checks, tail slicing and slopes, geometric-grid extrapolation, improper integrals
with divergence detection, and log-space cumulative quadrature.

Version: 2026oct17
"""

import warnings
import numpy as np
from scipy import integrate
from . import rw_utils as ut
from .rw_odict import objdict

##############################################################################
### FIND FUNCTIONS
##############################################################################

__all__ = ['findinds']


def findinds(val1, val2=None, eps=1e-6):
    '''
    Indices where val1 is nonzero, or, with val2, where val1 is within eps of val2.
    One-dimensional input gives an index array; higher dimensions give the tuple
    from np.nonzero.

    Example:
        rw.findinds(path.s >= burn_in)[0] # first sample inside the window
    '''
    if val2 is None:
        output = np.nonzero(val1)
    else:
        output = np.nonzero(abs(np.array(val1)-val2)<eps)
    if np.ndim(val1)==1:
        output = output[0]
    return output



##############################################################################
### TAILS AND SLOPES
##############################################################################

__all__ += ['tailslice', 'linslope', 'cauchy_deviation', 'cumtrapz', 'logcumtrapz']


def tailslice(n, fraction=None, minlength=None):
    '''
    Slice selecting the trailing fraction of n samples. With minlength, raise
    InsufficientSamples if the tail would be shorter.

    Example:
        inds = rw.tailslice(1000, 0.2) # slice(800, 1000)
    '''
    if fraction is None: fraction = 0.2
    if not 0 < fraction <= 1:
        errormsg = 'Tail fraction must be in (0,1], not %s' % fraction
        raise ut.DomainError(errormsg)
    ntail = max(1, int(np.floor(n*fraction)))
    if minlength is not None and ntail < minlength:
        errormsg = 'Tail of %i samples (%s of %i) is shorter than the required %i' % (ntail, fraction, n, minlength)
        raise ut.InsufficientSamples(errormsg)
    return slice(n-ntail, n)


def linslope(x, y):
    ''' Least-squares slope and intercept of y against x '''
    x = ut.promotetoarray(x)
    y = ut.promotetoarray(y)
    if len(x)<2:
        errormsg = 'At least 2 points are needed for a slope, not %i' % len(x)
        raise ut.InsufficientSamples(errormsg)
    slope, intercept = np.polyfit(x, y, 1)
    return slope, intercept


def cauchy_deviation(values):
    '''
    Maximum pairwise deviation of a sequence of scalars or vectors. For scalars this
    is max-min; for vectors the norm of the componentwise ranges, which bounds the
    largest pairwise distance from above.

    Example:
        rw.cauchy_deviation([1.0, 1.1, 0.95]) # 0.15
    '''
    values = np.asarray(values, dtype=float)
    if not values.size:
        errormsg = 'Cannot compute the deviation of an empty sequence'
        raise ut.InsufficientSamples(errormsg)
    ranges = values.max(axis=0) - values.min(axis=0)
    return float(np.sqrt(np.sum(np.square(ranges))))


def cumtrapz(y, x):
    ''' Cumulative trapezoid, starting at 0 and of the same length as y '''
    y = ut.promotetoarray(y)
    x = ut.promotetoarray(x)
    out = np.zeros(len(y))
    if len(y)>1:
        out[1:] = np.cumsum(0.5*(y[1:]+y[:-1])*np.diff(x))
    return out


def logcumtrapz(logy, x, logstart=None):
    '''
    Logarithm of the cumulative trapezoid of exp(logy), computed without leaving log
    space. logstart is the log of an integral already accumulated before x[0]; without
    it the first entry is -inf.

    Example:
        s = np.linspace(0, 100, 1001)
        logint = rw.logcumtrapz(2*s, s) # log of the integral of exp(2s), no overflow
    '''
    logy = ut.promotetoarray(logy)
    x = ut.promotetoarray(x)
    if logstart is None: logstart = -np.inf
    logpieces = np.logaddexp(logy[1:], logy[:-1]) + np.log(0.5*np.diff(x))
    out = np.empty(len(logy))
    out[0] = logstart
    if len(logy)>1:
        out[1:] = np.logaddexp.accumulate(np.concatenate([[logstart], logpieces]))[1:]
    return out



##############################################################################
### GEOMETRIC-GRID LIMITS
##############################################################################

__all__ += ['geomgrid', 'aitken', 'tail_limit']


def geomgrid(tmin=None, npts=None, base=None):
    ''' Geometric probe grid t_k = tmin*base**k, k = 0..npts-1 '''
    if tmin is None: tmin = 1.0
    if npts is None: npts = 12
    if base is None: base = 2.0
    return tmin*base**np.arange(npts)


def aitken(values):
    '''
    Aitken delta-squared estimates of the limit of a sequence, one per consecutive
    triple. A triple with a vanishing second difference returns its last value.
    '''
    x = ut.promotetoarray(values)
    if len(x)<3:
        errormsg = 'Aitken extrapolation needs at least 3 values, not %i' % len(x)
        raise ut.InsufficientSamples(errormsg)
    d0 = x[1:-1] - x[:-2]
    d1 = x[2:] - x[1:-1]
    denom = d1 - d0
    scale = np.maximum(1.0, np.abs(x[2:]))
    degenerate = np.abs(denom) <= 1e-14*scale
    safe = np.where(degenerate, 1.0, denom)
    return np.where(degenerate, x[2:], x[2:] - d1**2/safe)


def tail_limit(values, tol=None, nagree=None):
    '''
    Decide whether a sequence sampled on a geometric grid converges, diverges, or
    neither. Returns an objdict with status ('converged', 'divergent' or
    'indeterminate'), the limit (signed inf when divergent, nan when indeterminate)
    and the extrapolated estimates.

    Sequences whose last differences are not shrinking are divergent; extrapolating
    them would land on Aitken's anti-limit.

    Example:
        rw.tail_limit(1/rw.geomgrid()).limit # 0.0
    '''
    if tol    is None: tol    = 1e-3
    if nagree is None: nagree = 3
    x = ut.promotetoarray(values)
    if len(x) < nagree+2:
        errormsg = 'Need at least %i values for a tail limit, not %i' % (nagree+2, len(x))
        raise ut.InsufficientSamples(errormsg)
    if not np.all(np.isfinite(x)):
        return objdict(status='indeterminate', limit=np.nan, estimates=np.array([]))

    d = np.abs(np.diff(x))[-nagree:]
    scale = max(1.0, abs(x[-1]))
    estimates = aitken(x)
    if d.max() <= 1e-12*scale:
        status, limit = 'converged', float(x[-1])
    elif np.all(np.diff(d) >= 0):
        status, limit = 'divergent', float(np.sign(x[-1]-x[-2])*np.inf)
    else:
        last = estimates[-nagree:]
        if last.max() - last.min() <= tol:
            status, limit = 'converged', float(last[-1])
        else:
            status, limit = 'indeterminate', np.nan
    return objdict(status=status, limit=limit, estimates=estimates)



##############################################################################
### IMPROPER INTEGRALS
##############################################################################

__all__ += ['quad', 'improper_integral']


def quad(func, lo, hi, epsrel=None, limit=None):
    ''' scipy quad with relative tolerance only and its accuracy warnings silenced '''
    if epsrel is None: epsrel = 1e-12
    if limit  is None: limit  = 200
    with warnings.catch_warnings():
        warnings.simplefilter('ignore', integrate.IntegrationWarning)
        value = integrate.quad(func, lo, hi, epsabs=0, epsrel=epsrel, limit=limit)[0]
    return value


def _piece_points(c0, endpoint, depth):
    ''' Dyadic refinement points from c0 toward the endpoint '''
    i = np.arange(depth+1, dtype=float)
    if endpoint == 0:
        return c0*2.0**(-i)
    elif np.isinf(endpoint):
        return c0*2.0**i
    else:
        return endpoint - (endpoint-c0)*2.0**(-i)


def improper_integral(func, c0, endpoint, tol=None, factor=None, ncheck=None, maxdepth=None, verbose=None):
    '''
    Integral of a nonnegative function between c0 and an endpoint where it may be
    singular (0, +inf, or a finite endpoint). The range is split into dyadic pieces
    accumulating at the endpoint and each piece is integrated with quad.

    The integral is declared infinite when doubling the refinement depth multiplies
    the partial sum by more than factor (default 1.5) ncheck (default 3) times in a
    row. It is declared finite when the geometric remainder estimate of the next
    pieces falls below tol relative to the partial sum, or when the piece ratio has
    settled to a constant below 1 (the tail is then summed exactly). Otherwise an
    IndeterminateError is raised after maxdepth pieces.

    Args:
        func: the integrand, called with a float
        c0: the reference point
        endpoint: 0, np.inf, or a finite endpoint on either side of c0
        tol: relative accuracy of a finite value (default 1e-8)

    Returns:
        The absolute value of the integral, or np.inf

    Example:
        rw.improper_integral(lambda t: 1/t, 1.0, np.inf) # inf
        rw.improper_integral(lambda t: t**-2, 1.0, np.inf) # 1.0
    '''
    if tol      is None: tol      = 1e-8
    if factor   is None: factor   = 1.5
    if ncheck   is None: ncheck   = 3
    if maxdepth is None: maxdepth = 256
    if verbose  is None: verbose  = 1

    points = _piece_points(c0, endpoint, maxdepth)
    total = 0.0
    partial = []
    prevpiece = None
    prevratio = None
    nbig = 0
    for i in range(maxdepth):
        lo, hi = sorted([points[i], points[i+1]])
        if hi <= lo: # Points collapsed onto the endpoint in floating point
            ut.printv('Refinement reached the resolution of the endpoint after %i pieces' % i, 3, verbose)
            if nbig:
                return np.inf
            elif prevratio is not None and prevratio < 1:
                return total
            errormsg = 'Refinement toward %s collapsed after %i pieces without a decision (partial sum %g)' % (endpoint, i, total)
            raise ut.IndeterminateError(errormsg)
        piece = quad(func, lo, hi)
        if not np.isfinite(piece) or piece < 0:
            errormsg = 'Integrand gave an invalid piece %s on [%g, %g]' % (piece, lo, hi)
            raise ut.IndeterminateError(errormsg)
        total += piece
        partial.append(total)
        depth = i+1

        # Finite: geometric remainder estimate
        if piece == 0:
            return total
        if prevpiece is not None and prevpiece > 0:
            ratio = piece/prevpiece
            if depth >= 4 and ratio < 1:
                remainder = piece*ratio/(1-ratio)
                if remainder < tol*max(1.0, total):
                    return total + remainder
                if depth >= 16 and prevratio is not None and ratio < 1-1e-6 and abs(ratio-prevratio) < 1e-8:
                    ut.printv('Geometric tail with ratio %0.6f after %i pieces' % (ratio, depth), 3, verbose)
                    return total + remainder
            prevratio = ratio
        prevpiece = piece

        # Infinite: repeated growth of the partial sum under doubling depth
        if depth >= 16 and (depth & (depth-1)) == 0:
            if partial[depth//2-1] > 0 and total/partial[depth//2-1] > factor:
                nbig += 1
            else:
                nbig = 0
            if nbig >= ncheck:
                ut.printv('Partial sums grew by more than %s at %i consecutive doublings: divergent' % (factor, ncheck), 3, verbose)
                return np.inf

    errormsg = 'Could neither certify convergence nor divergence of the integral toward %s after %i pieces (partial sum %g)' % (endpoint, maxdepth, total)
    raise ut.IndeterminateError(errormsg)
