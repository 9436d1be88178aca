"""
The spatial components (x, Theta) on the flat, hyperbolic and spherical fibers in
ambient Cartesian coordinates: fibers, constraint projection, the spatial step,
full trajectories, polar diagnostics and causal-boundary limits.

The hyperbolic fiber is the upper sheet x^0 > 0 of the hyperboloid q(x,x) = -1 in
Minkowski space, with q(u,v) = -u^0 v^0 + u^1 v^1 + ... + u^d v^d. Time components
are always recomputed from the spatial ones, which keeps the constraints at
machine precision when x^0 is large.

Version: 2026oct17
"""

##############################################################################
### IMPORTS
##############################################################################

import numpy as np
from . import rw_utils as ut
from . import rw_math as rm
from . import rw_fileio as rf
from . import rw_expansion as rx
from . import rw_temporal as rt
from .rw_odict import objdict


##############################################################################
### FIBERS
##############################################################################

__all__ = ['Fiber', 'SpatialState']

_fiberkinds = {0:'Euclidean', -1:'Hyperbolic', 1:'Spherical'}
_fiberprefix = {0:'r', -1:'h', 1:'s'}


class Fiber(ut.prettyobj):
    '''
    A constant-curvature fiber of dimension d >= 3: Euclidean R^d (kappa = 0,
    ambient R^d), Hyperbolic H^d (kappa = -1, ambient Minkowski R^{1,d}) or
    Spherical S^d (kappa = 1, ambient R^{d+1}).

    Example:
        fiber = rw.Fiber.parse('h3')
        fiber.ambient_dim # 4
    '''

    def __init__(self, kappa=None, d=None):
        if kappa is None: kappa = 0
        if d     is None: d     = 3
        kappa = rx.parse_curvature(kappa)
        if int(d) != d or d < 3:
            errormsg = 'The fiber dimension must be an integer >= 3, not %s' % d
            raise ut.DomainError(errormsg)
        self.kappa = kappa
        self.d = int(d)
        self.kind = _fiberkinds[kappa]
        self.ambient_dim = self.d if kappa == 0 else self.d + 1
        return None

    @classmethod
    def parse(cls, name, d=None):
        '''
        Fiber from a name such as "r3", "h4", "s3", "hyperbolic" or "flat"; a bare
        name takes d (default 3).
        '''
        if isinstance(name, Fiber):
            return name
        kappa = rx.parse_curvature(name)
        digits = str(name).lower().lstrip('abcdefghijklmnopqrstuvwxyz_')
        if digits:
            if d is not None and int(digits) != d:
                errormsg = 'Fiber "%s" conflicts with d=%s' % (name, d)
                raise ut.ConfigurationError(errormsg)
            d = int(digits)
        return cls(kappa, d)

    @property
    def label(self):
        return '%s%i' % (_fiberprefix[self.kappa], self.d)

    def __repr__(self):
        return 'Fiber(%s, kappa=%i, d=%i)' % (self.kind, self.kappa, self.d)

    def to_dict(self):
        return objdict(kind=self.kind, kappa=self.kappa, d=self.d, label=self.label)

    def inner(self, u, v):
        ''' The ambient form: Minkowski for the hyperbolic fiber, Euclidean otherwise '''
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        if self.kappa == -1:
            return -u[...,0]*v[...,0] + np.sum(u[...,1:]*v[...,1:], axis=-1)
        return np.sum(u*v, axis=-1)

    def signature(self):
        ''' Diagonal of the ambient form '''
        sig = np.ones(self.ambient_dim)
        if self.kappa == -1: sig[0] = -1.0
        return sig

    def origin(self):
        ''' Base point: 0 in R^d, e0 on the sphere and the hyperboloid '''
        x = np.zeros(self.ambient_dim)
        if self.kappa != 0: x[0] = 1.0
        return x

    def default_direction(self):
        ''' A unit tangent direction at the origin '''
        theta = np.zeros(self.ambient_dim)
        theta[0 if self.kappa == 0 else 1] = 1.0
        return theta


class SpatialState(ut.prettyobj):
    ''' Position x and unit direction theta = xdot/|xdot| in ambient coordinates '''

    def __init__(self, x=None, theta=None, fiber=None):
        if fiber is None: fiber = Fiber()
        if x     is None: x     = fiber.origin()
        if theta is None: theta = fiber.default_direction()
        x = ut.promotetoarray(x)
        theta = ut.promotetoarray(theta)
        if len(x) != fiber.ambient_dim or len(theta) != fiber.ambient_dim:
            errormsg = 'Fiber %s needs vectors of length %i, not %i and %i' % (fiber.label, fiber.ambient_dim, len(x), len(theta))
            raise ut.DomainError(errormsg)
        self.x = x
        self.theta = theta
        return None

    def copy(self):
        return _rawstate(self.x.copy(), self.theta.copy())


def _rawstate(x, theta):
    ''' SpatialState without the length checks '''
    sp = SpatialState.__new__(SpatialState)
    sp.x = x
    sp.theta = theta
    return sp



##############################################################################
### CONSTRAINTS AND FRAMES
##############################################################################

__all__ += ['constraint_residuals', 'project_to_manifold', 'bracket', 'tangent_noise', 'direction_frame', 'angular_coverage', 'random_state']


def constraint_residuals(sp, fiber):
    '''
    Manifold, norm and tangency residuals of a state; max is the largest of them.

    Example:
        res = rw.constraint_residuals(rw.SpatialState(fiber=fiber), fiber)
        res.max # 0.0
    '''
    x, theta = sp.x, sp.theta
    if fiber.kappa == 0:
        manifold = 0.0
        tangency = 0.0
    else:
        manifold = abs(fiber.inner(x, x) - fiber.kappa) if fiber.kappa == 1 else abs(fiber.inner(x, x) + 1.0)
        tangency = abs(fiber.inner(x, theta))
    norm = abs(fiber.inner(theta, theta) - 1.0)
    output = objdict(manifold=float(manifold), norm=float(norm), tangency=float(tangency))
    output.max = max(output.manifold, output.norm, output.tangency)
    if fiber.kappa == -1 and x[0] <= 0:
        output.max = np.inf # Lower sheet
    return output


def _hyperbolic_time(xs):
    return np.sqrt(1.0 + np.dot(xs, xs))


def _hyperbolic_tangent(x, thetas):
    '''
    Tangent vector at x with spatial part thetas, normalized to q-norm 1. The norm is
    computed from the radial/angular split, free of cancellation.
    '''
    xs = x[1:]
    r = np.linalg.norm(xs)
    x0 = x[0]
    if r > 0:
        n = xs/r
        radial = np.dot(n, thetas)
        perp = thetas - radial*n
        qnorm2 = np.dot(perp, perp) + radial**2/x0**2
    else:
        qnorm2 = np.dot(thetas, thetas)
    if not qnorm2 > 0:
        errormsg = 'Degenerate direction: theta is parallel to x'
        raise ut.ConstraintError(errormsg)
    thetas = thetas/np.sqrt(qnorm2)
    theta0 = np.dot(xs, thetas)/x0
    return np.concatenate([[theta0], thetas])


def project_to_manifold(x, theta, fiber):
    '''
    Restore the constraints after a discretized step. Sphere: x/|x|; hyperboloid:
    the time component recomputed from the spatial part, x^0 = sqrt(1 + |xs|^2),
    which rescales x onto the sheet without the cancellation in q(x,x); then theta
    is orthogonalized against x in the ambient form and renormalized. Flat:
    theta/|theta|.

    Example:
        x, theta = rw.project_to_manifold([1.1,0,0,0], [0,1,0,0], rw.Fiber(1, 3)) # x = e0
    '''
    x = np.array(x, dtype=float)
    theta = np.array(theta, dtype=float)
    if fiber.kappa == 0:
        norm = np.linalg.norm(theta)
        if not norm > 0:
            errormsg = 'Degenerate direction: theta = 0'
            raise ut.ConstraintError(errormsg)
        return x, theta/norm

    if fiber.kappa == 1:
        xnorm = np.linalg.norm(x)
        if not xnorm > 0:
            errormsg = 'Cannot project x = 0 onto the sphere'
            raise ut.ConstraintError(errormsg)
        x = x/xnorm
        theta = theta - np.dot(theta, x)*x
        norm = np.linalg.norm(theta)
        if not norm > 1e-12:
            errormsg = 'Degenerate direction: theta is parallel to x'
            raise ut.ConstraintError(errormsg)
        return x, theta/norm

    qxx = fiber.inner(x, x)
    if not qxx < 0 or not x[0] > 0:
        errormsg = 'x = %s is not near the upper hyperboloid sheet (q(x,x) = %g)' % (x, qxx)
        raise ut.ConstraintError(errormsg)
    xs = x[1:]
    x = np.concatenate([[_hyperbolic_time(xs)], xs])
    theta = theta + fiber.inner(theta, x)*x
    return x, _hyperbolic_tangent(x, theta[1:])


def bracket(fiber, x, theta):
    '''
    Ambient bracket matrix of the Theta martingale per unit clock: the inverse
    ambient form minus kappa x x^T minus theta theta^T, which is the projector onto
    the complement of span{x, theta} (span{theta} when flat).
    '''
    x = ut.promotetoarray(x)
    theta = ut.promotetoarray(theta)
    matrix = np.diag(fiber.signature())
    if fiber.kappa != 0:
        matrix -= fiber.kappa*np.outer(x, x)
    matrix -= np.outer(theta, theta)
    return matrix


def tangent_noise(fiber, x, theta, xi):
    '''
    Map an ambient standard normal vector xi to a tangent vector orthogonal to theta
    whose covariance is bracket(fiber, x, theta). On the hyperboloid, xi is projected
    at the origin and carried to x by the boost that maps e0 to x.
    '''
    xi = ut.promotetoarray(xi)
    if fiber.kappa == 0:
        return xi - np.dot(xi, theta)*theta
    if fiber.kappa == 1:
        u = xi - np.dot(xi, x)*x
        return u - np.dot(u, theta)*theta
    xs = x[1:]
    r = np.linalg.norm(xs)
    us = xi[1:].copy()
    if r > 0:
        n = xs/r
        radial = np.dot(n, us)
        us += radial*(x[0] - 1.0)*n
        u0 = radial*r
    else:
        u0 = 0.0
    u = np.concatenate([[u0], us])
    return u - fiber.inner(u, theta)*theta


def direction_frame(sp, fiber):
    '''
    Theta as a unit vector of R^d in a local orthonormal frame at x: the reflection
    (sphere) or boost (hyperboloid) taking x to the origin, spatial components kept.
    '''
    x, theta = sp.x, sp.theta
    if fiber.kappa == 0:
        return theta.copy()
    if fiber.kappa == 1:
        u = x.copy()
        u[0] -= 1.0
        unorm2 = np.dot(u, u)
        moved = theta - 2*np.dot(u, theta)/unorm2*u if unorm2 > 1e-300 else theta
        return moved[1:]
    xs = x[1:]
    r = np.linalg.norm(xs)
    if not r > 0:
        return theta[1:].copy()
    n = xs/r
    return theta[1:] + ((x[0] - 1.0)*np.dot(n, theta[1:]) - r*theta[0])*n


def angular_coverage(frames, cosine=None):
    '''
    Fraction of the 2d signed coordinate axes that the direction frames come within
    the given cosine (default cos 45 deg) of. Near 1 for a recurrent direction,
    small for a converging one.
    '''
    if cosine is None: cosine = np.cos(np.pi/4)
    frames = np.atleast_2d(frames)
    hits = np.concatenate([frames.max(axis=0) >= cosine, (-frames).max(axis=0) >= cosine])
    return float(np.mean(hits))


def random_state(fiber, rng, scale=None):
    ''' A random valid state near the origin, for tests and initial conditions '''
    if scale is None: scale = 1.0
    if fiber.kappa == 0:
        x = scale*rng.standard_normal(fiber.ambient_dim)
    elif fiber.kappa == 1:
        x = rng.standard_normal(fiber.ambient_dim)
    else:
        xs = scale*rng.standard_normal(fiber.d)
        x = np.concatenate([[_hyperbolic_time(xs)], xs])
    theta = rng.standard_normal(fiber.ambient_dim)
    if fiber.kappa == -1:
        theta[0] = 0.0
    x, theta = project_to_manifold(x, theta, fiber)
    return SpatialState(x=x, theta=theta, fiber=fiber)



##############################################################################
### SPATIAL STEP
##############################################################################

__all__ += ['geodesic_flow', 'step_spatial']


def geodesic_flow(x, theta, fiber, phi):
    '''
    Exact unit-speed geodesic flow over arc length phi: translation (flat), rotation
    (sphere) or boost (hyperboloid) in the plane of x and theta.
    '''
    if fiber.kappa == 0:
        return x + phi*theta, theta.copy()
    if fiber.kappa == 1:
        phi = np.mod(phi, 2*np.pi)
        c, s = np.cos(phi), np.sin(phi)
        return c*x + s*theta, -s*x + c*theta
    with np.errstate(over='raise'):
        try:
            c, s = np.cosh(phi), np.sinh(phi)
        except FloatingPointError:
            errormsg = 'Geodesic boost overflow for arc %g' % phi
            raise ut.NumericalFailure(errormsg)
    newx = c*x + s*theta
    newtheta = s*x + c*theta
    return newx, newtheta


def _speed(state):
    ''' Fiber speed |xdot| = a/alpha^2 = w/alpha '''
    return state.w*np.exp(-state.logalpha)


def step_spatial(sp, before, after, fiber, p, noise):
    '''
    Advance the spatial state across the temporal step before -> after. The position
    follows the geodesic flow over the arc (v_before + v_after) h/2, with v = a/alpha^2
    the fiber speed; theta then receives the drift -(d-1)/2 g theta h and the projected
    noise sqrt(g h) tangent_noise(noise), where g = sigma^2/(tdot^2-1) is the clock
    density at the start of the step. Constraints are restored by project_to_manifold.

    Raises DegenerateVelocity when a = 0 at the start of the step.

    Example:
        new = rw.step_spatial(sp, before, after, fiber, p, rng.standard_normal(fiber.ambient_dim))
    '''
    if not before.w > 0:
        errormsg = 'Zero velocity at s=%g: the clock density is infinite' % before.s
        raise ut.DegenerateVelocity(errormsg)
    h = after.s - before.s
    phi = 0.5*(_speed(before) + _speed(after))*h
    x, theta = geodesic_flow(sp.x, sp.theta, fiber, phi)
    g = p.sigma**2/before.w**2
    theta = theta*(1.0 - 0.5*(p.d - 1)*g*h) + np.sqrt(g*h)*tangent_noise(fiber, x, theta, noise)
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(theta))):
        errormsg = 'Non-finite spatial state at s=%g (g=%g, arc=%g)' % (after.s, g, phi)
        raise ut.NumericalFailure(errormsg)
    x, theta = project_to_manifold(x, theta, fiber)
    return _rawstate(x, theta)



##############################################################################
### TRAJECTORIES
##############################################################################

__all__ += ['Trajectory', 'simulate_full']


def _spatialcols(fiber):
    n = fiber.ambient_dim
    return ['x%i' % i for i in range(n)] + ['th%i' % i for i in range(n)]


class Trajectory(ut.prettyobj):
    '''
    A temporal path with aligned spatial samples: x and theta are arrays of shape
    (nsamples, ambient_dim), phase is the conformal integral wrapped to [0, 2 pi).
    '''

    def __init__(self, temporal=None, x=None, theta=None, phase=None, fiber=None):
        self.temporal = temporal
        self.x = np.atleast_2d(np.asarray(x, dtype=float))
        self.theta = np.atleast_2d(np.asarray(theta, dtype=float))
        self.phase = ut.promotetoarray(phase) if phase is not None else np.mod(temporal.conformal, 2*np.pi)
        self.fiber = fiber
        return None

    def __len__(self):
        return len(self.temporal)

    @property
    def termination(self):
        return self.temporal.termination

    def state(self, index=-1):
        ''' SpatialState at a sample '''
        return _rawstate(self.x[index].copy(), self.theta[index].copy())

    def to_csv(self, filename, sidecar=True):
        ''' Temporal columns followed by x0..xn, th0..thn; the fiber goes in the sidecar '''
        columns = self.temporal.columns()
        for i,col in enumerate(_spatialcols(self.fiber)):
            n = self.fiber.ambient_dim
            columns[col] = self.x[:,i] if i < n else self.theta[:,i-n]
        filename = rf.savecsv(filename, columns)
        if sidecar:
            output = self.temporal.sidecar()
            output.fiber = self.fiber.to_dict()
            rf.savejson(rt.sidecarname(filename), output)
        return filename

    @classmethod
    def from_csv(cls, filename, fiber=None):
        ''' Read a trajectory written by to_csv(); the fiber comes from the sidecar unless given '''
        temporal = rt.TemporalPath.from_csv(filename)
        if fiber is None:
            if 'fiber' not in temporal.meta:
                errormsg = 'No fiber given and no sidecar fiber entry for "%s"' % filename
                raise ut.ConfigurationError(errormsg)
            fiber = Fiber(temporal.meta.fiber['kappa'], temporal.meta.fiber['d'])
        data = rf.loadcsv(filename, columns=_spatialcols(fiber))
        n = fiber.ambient_dim
        x = np.column_stack([data['x%i' % i] for i in range(n)])
        theta = np.column_stack([data['th%i' % i] for i in range(n)])
        return cls(temporal=temporal, x=x, theta=theta, fiber=fiber)


def simulate_full(init_temporal, init_spatial, model, fiber, p, s_max, rng=None, noise=None, tol_constraint=None, verbose=None):
    '''
    Advance the temporal and spatial components in lockstep with a shared step size:
    each step uses one normal draw for the temporal update and ambient_dim draws for
    the spatial noise. Samples of both are kept at the same thinning. A zero velocity
    falls back to a pure geodesic spatial step; numerical failures end the trajectory
    with termination kind NumericalFailure.

    Example:
        model, fiber = rw.catalog('sinh'), rw.Fiber.parse('h3')
        traj = rw.simulate_full(rw.TemporalState(t=1, a=1, model=model), rw.SpatialState(fiber=fiber), model, fiber, rw.StepParams(ds=1e-2), 20, rw.makerng(0))
    '''
    if verbose        is None: verbose        = 1
    if tol_constraint is None: tol_constraint = 1e-9
    if p.d != fiber.d:
        errormsg = 'Step parameters have d=%i but the fiber is %s' % (p.d, fiber.label)
        raise ut.ConfigurationError(errormsg)
    rt._checkinit(init_temporal, model)
    residual = constraint_residuals(init_spatial, fiber).max
    if residual > tol_constraint:
        errormsg = 'Initial spatial state violates the %s constraints by %g' % (fiber.label, residual)
        raise ut.DomainError(errormsg)
    if noise is None:
        if rng is None:
            errormsg = 'simulate_full needs an rng or a noise stream'
            raise ut.ConfigurationError(errormsg)
        noise = rt.NoiseStream(rng, width=1+fiber.ambient_dim)

    state = init_temporal
    sp = _rawstate(init_spatial.x.copy(), init_spatial.theta.copy())
    recorder = rt._PathRecorder(state, p.sigma, p.thin)
    phase = np.mod(recorder.conformal, 2*np.pi)
    xs, thetas, phases = [sp.x], [sp.theta], [phase]
    s_end = init_temporal.s + s_max
    kind, message = rt.Termination.ProperTimeBudget, ''
    ndegenerate = 0
    while state.s < s_end - 1e-12*max(1.0, s_end):
        h = rt.stepsize(state.t, state.tdot, model.T, p, remaining=s_end-state.s)
        draws = noise.next()
        try:
            new = rt.step_temporal(state, model, p, draws[0], h=h)
            try:
                newsp = step_spatial(sp, state, new, fiber, p, draws[1:])
            except ut.DegenerateVelocity:
                ndegenerate += 1
                x, theta = geodesic_flow(sp.x, sp.theta, fiber, 0.5*(_speed(state) + _speed(new))*h)
                newsp = _rawstate(*project_to_manifold(x, theta, fiber))
        except (ut.NumericalFailure, ut.ConstraintError) as E:
            kind, message = rt.Termination.NumericalFailure, str(E)
            ut.printv('Trajectory stopped at s=%g: %s' % (state.s, message), 1, verbose)
            break
        recorder.accumulate(new.w, new.logalpha, h)
        phase = np.mod(phase + 0.5*(_speed(state) + _speed(new))*h, 2*np.pi)
        state, sp = new, newsp
        if state.horizon:
            kind, message = rt.Termination.HorizonReached, 'reached t = %.12g' % state.t
            break
        if recorder.record(state):
            xs.append(sp.x); thetas.append(sp.theta); phases.append(phase)
    if not recorder.rows[-1][0] == state.s:
        recorder.record(state, force=True)
        xs.append(sp.x); thetas.append(sp.theta); phases.append(phase)

    termination = objdict(kind=kind, message=message, steps=recorder.nsteps, s_end=state.s, t_end=state.t, degenerate_steps=ndegenerate)
    meta = objdict(model=model.to_dict(), params=p.to_dict())
    temporal = recorder.topath(termination, meta)
    ut.printv('Full path on %s: %i steps, %s at s=%g' % (fiber.label, recorder.nsteps, kind, state.s), 3, verbose)
    return Trajectory(temporal=temporal, x=np.array(xs), theta=np.array(thetas), phase=np.array(phases), fiber=fiber)



##############################################################################
### DIAGNOSTICS AND LIMITS
##############################################################################

__all__ += ['polar_diagnostics', 'remaining_variation', 'great_circle_frame', 'great_circle_residual', 'boundary_limit']


def polar_diagnostics(sp, ts, model=None, r_min=None):
    '''
    Polar split on the hyperboloid: r = |spatial part of x|, the angular position
    xs/r, the radial fraction c/a of theta and the angular fraction rho/r, with
    (rho/r)^2 + (c/a)^2 = 1. c and rho are the same fractions scaled by a.

    Example:
        pol = rw.polar_diagnostics(sp, ts)
        pol.c_over_a**2 + pol.rho_over_r**2 # 1.0
    '''
    if r_min is None: r_min = 1e-8
    x, theta = sp.x, sp.theta
    xs = x[1:]
    r = np.linalg.norm(xs)
    if r < r_min:
        errormsg = 'r = %g is below r_min = %g: the radial split is ill-conditioned' % (r, r_min)
        raise ut.ConstraintError(errormsg)
    n = xs/r
    radial = x[0]*np.dot(n, theta[1:]) - r*theta[0]
    perp = theta[1:] - np.dot(n, theta[1:])*n
    angular = np.linalg.norm(perp)
    output = objdict(r=float(r), theta_unit=n, c_over_a=float(radial), rho_over_r=float(angular))
    output.c = float(ts.a*radial) if np.isfinite(ts.a) else np.nan
    output.rho = float(ts.a*angular) if np.isfinite(ts.a) else np.nan
    return output


def remaining_variation(model, t, tol=None):
    ''' Integral of du/alpha from t to T: bounds the distance still to be travelled in the fiber '''
    integrand = lambda u: float(np.exp(-model.logalpha(u)))
    return rm.improper_integral(integrand, float(t), model.T, tol=tol)


def great_circle_frame(traj, tail_fraction=None):
    '''
    The rotating frame of a spherical trajectory: U = cos(A) x - sin(A) theta and
    V = sin(A) x + cos(A) theta averaged over the tail, with A the wrapped conformal
    phase, and the Cauchy deviation of both over that tail.
    '''
    inds = rm.tailslice(len(traj), tail_fraction, minlength=2)
    A = traj.phase[inds]
    c, s = np.cos(A)[:,None], np.sin(A)[:,None]
    x, theta = traj.x[inds], traj.theta[inds]
    Us = c*x - s*theta
    Vs = s*x + c*theta
    deviation = max(rm.cauchy_deviation(Us), rm.cauchy_deviation(Vs))
    return objdict(U=Us.mean(axis=0), V=Vs.mean(axis=0), deviation=float(deviation))


def great_circle_residual(traj, U, V):
    ''' |x_s - cos(A_s) U - sin(A_s) V| at every sample '''
    A = traj.phase[:,None]
    return np.linalg.norm(traj.x - np.cos(A)*U - np.sin(A)*V, axis=1)


def _conformal_series(model, t):
    ''' Conformal time from t[0] along increasing samples t '''
    return rm.cumtrapz(np.exp(-ut.promotetoarray(model.logalpha(t))), t)


def boundary_limit(traj, model, fiber=None, horizons=None, tail_fraction=None, tol_tail=None, tol_certificate=None, residual_fraction=None):
    '''
    Extract the causal-boundary limit of a trajectory from the tail of its samples.

    - finite I+: FiberPoint(x_inf = last x) when the remaining variation from t_end
      to T is below tol_certificate; a Cauchy x tail alone is not enough
    - flat, infinite I+: NullDirection(theta_inf = tail mean of theta, delta_inf = tail
      of conformal time minus <x, theta_inf>)
    - hyperbolic, infinite I+: NullDirection(theta_inf = tail mean of xs/|xs|,
      delta_inf = tail of conformal time minus argsh(r))
    - spherical, infinite I+: GreatCircle(U, V), tail means of cos(A) x - sin(A) theta
      and sin(A) x + cos(A) theta

    Tails that fail the Cauchy test give kind 'Unconverged' with the diagnostics.

    Example:
        limit = rw.boundary_limit(traj, model)
        limit.kind # e.g. 'GreatCircle'
    '''
    if fiber             is None: fiber             = traj.fiber
    if tail_fraction     is None: tail_fraction     = 0.2
    if tol_tail          is None: tol_tail          = 1e-2
    if tol_certificate   is None: tol_certificate   = 1e-3
    if residual_fraction is None: residual_fraction = 0.1
    if horizons          is None: horizons          = rx.horizon_integrals(model)

    output = objdict(kind=None, termination=traj.termination.kind)
    if traj.termination.kind == rt.Termination.NumericalFailure:
        output.kind = 'Unconverged'
        output.reason = 'trajectory ended in a numerical failure: %s' % traj.termination.message
        return output

    inds = rm.tailslice(len(traj), tail_fraction, minlength=2)
    x = traj.x[inds]
    theta = traj.theta[inds]
    t = traj.temporal.t[inds]

    if np.isfinite(horizons.i_plus):
        t_end = traj.temporal.t[-1]
        certificate = 0.0 if t_end >= model.T else remaining_variation(model, t_end)
        deviation = rm.cauchy_deviation(x)
        output.x_inf = traj.x[-1].copy()
        output.certificate = float(certificate)
        output.deviation = float(deviation)
        output.certified = bool(certificate < tol_certificate)
        output.kind = 'FiberPoint' if output.certified else 'Unconverged'
        if output.kind == 'Unconverged':
            output.reason = 'remaining variation %g above %g (tail deviation %g)' % (certificate, tol_certificate, deviation)
        return output

    if fiber.kappa == 1:
        frame = great_circle_frame(traj, tail_fraction)
        U, V = frame.U, frame.V
        last = rm.tailslice(len(traj), residual_fraction, minlength=1)
        residual = great_circle_residual(traj, U, V)[last]
        deviation = frame.deviation
        output.U = U
        output.V = V
        output.norm_U = float(np.linalg.norm(U))
        output.norm_V = float(np.linalg.norm(V))
        output.inner_UV = float(np.dot(U, V))
        output.residual = float(residual.max())
        output.deviation = float(deviation)
        output.kind = 'GreatCircle' if deviation < tol_tail else 'Unconverged'
        if output.kind == 'Unconverged':
            output.reason = 'great-circle frame tail deviation %g above %g' % (deviation, tol_tail)
        return output

    eta = rx.conformal_time(model, traj.temporal.t[0], t[0]) + _conformal_series(model, t)
    if fiber.kappa == 0:
        direction = theta.mean(axis=0)
        direction /= np.linalg.norm(direction)
        delta = eta - x @ direction
        direction_dev = rm.cauchy_deviation(theta)
    else:
        xs = x[:,1:]
        r = np.linalg.norm(xs, axis=1)
        if np.any(r <= 0):
            output.kind = 'Unconverged'
            output.reason = 'the tail passes through the origin'
            return output
        units = xs/r[:,None]
        direction = units.mean(axis=0)
        direction /= np.linalg.norm(direction)
        delta = eta - np.arcsinh(r)
        direction_dev = rm.cauchy_deviation(units)
        radial = x[:,0]*np.sum(units*theta[:,1:], axis=1) - r*theta[:,0]
        output.c_over_a_min = float(radial.min())
    delta_dev = rm.cauchy_deviation(delta)
    output.theta_inf = direction
    output.delta_inf = float(delta[-1])
    output.theta_deviation = float(direction_dev)
    output.delta_deviation = float(delta_dev)
    output.kind = 'NullDirection' if (delta_dev < tol_tail and direction_dev < tol_tail) else 'Unconverged'
    if output.kind == 'Unconverged':
        output.reason = 'direction deviation %g, delta deviation %g (tolerance %g)' % (direction_dev, delta_dev, tol_tail)
    return output
