'''
Plot data for trajectories: the series behind the standard diagnostic plots (log
tdot and the clock against s, theta components against the clock, the pseudo-norm
residual, and on spherical fibers the great-circle residual), written as CSV and as
a small SVG line plot.

SVGs are rendered with the Agg backend and a fixed hash salt and no date, so the
same series always give the same file.
'''

##############################################################################
### IMPORTS
##############################################################################

import numpy as np
import matplotlib
matplotlib.use('Agg')
import matplotlib.pyplot as plt
from . import rw_utils as ut
from . import rw_fileio as rf
from . import rw_expansion as rx
from . import rw_temporal as rt
from . import rw_spatial as rs
from .rw_odict import odict, objdict


##############################################################################
### SERIES
##############################################################################

__all__ = ['plot_series', 'save_plotdata']

# Colorbrewer qualitative colors
_colors = np.array([
    [ 55, 126, 184],
    [228,  26,  28],
    [ 77, 175,  74],
    [162,  78, 153],
    [255, 127,   0],
    [166,  86,  40],
    ])/255.


def plot_series(traj, model=None):
    '''
    Plottable series of a Trajectory (or TemporalPath): an odict of column name to
    array, all aligned on the samples. The model defaults to the one recorded in the
    trajectory metadata; without one the pseudo-norm residual uses the stored
    scaled velocity.

    Example:
        series = rw.plot_series(rw.Trajectory.from_csv('traj.csv'))
        series['log_tdot']
    '''
    temporal = traj.temporal if hasattr(traj, 'temporal') else traj
    if model is None and temporal.meta.get('model', {}).get('family', 'user') != 'user':
        model = rx.ExpansionModel.from_dict(temporal.meta.model)
    series = odict()
    series['s']          = temporal.s
    series['log_tdot']   = np.log(temporal.tdot)
    series['clock']      = temporal.clock
    series['pseudonorm'] = rt.pseudonorm_residual(temporal, model)
    if hasattr(traj, 'theta'):
        for i in range(traj.theta.shape[1]):
            series['th%i' % i] = traj.theta[:,i]
        if traj.fiber.kappa == 1 and len(traj) >= 10:
            frame = rs.great_circle_frame(traj)
            series['gc_residual'] = rs.great_circle_residual(traj, frame.U, frame.V)
    return series


def _boxoff(ax):
    ''' Remove the top and right borders of an axis '''
    ax.spines['top'].set_visible(False)
    ax.spines['right'].set_visible(False)
    ax.tick_params(direction='out', pad=5)
    return ax


def _panels(series):
    ''' (title, x key, y keys, log y) for each panel with data '''
    panels = [('log tdot', 's', ['log_tdot'], False),
              ('clock', 's', ['clock'], False),
              ('theta vs clock', 'clock', [key for key in series.keys() if key.startswith('th')], False),
              ('pseudo-norm residual', 's', ['pseudonorm'], False)]
    if 'gc_residual' in series:
        panels.append(('great-circle residual', 's', ['gc_residual'], True))
    return [panel for panel in panels if len(panel[2])]


def save_plotdata(traj, filename=None, model=None, svg=True, maxpoints=None):
    '''
    Write the plot series to CSV (filename) and, optionally, a line-plot SVG next to
    it. Plots are thinned to at most maxpoints (default 2000) points per line; the CSV
    keeps every sample. Returns the written filenames.

    Example:
        files = rw.save_plotdata(traj, 'plots/traj_series.csv')
    '''
    if filename  is None: filename  = 'plotdata.csv'
    if maxpoints is None: maxpoints = 2000
    series = plot_series(traj, model=model)
    output = objdict(csv=rf.savecsv(filename, series))
    if not svg:
        return output

    panels = _panels(series)
    n = len(series['s'])
    step = max(1, int(np.ceil(n/maxpoints)))
    with plt.rc_context({'svg.hashsalt':'rwdiff', 'svg.fonttype':'none'}):
        fig, axes = plt.subplots(len(panels), 1, figsize=(7, 2.2*len(panels)), squeeze=False)
        for ax,(title,xkey,ykeys,logy) in zip(axes[:,0], panels):
            x = series[xkey][::step]
            for c,ykey in enumerate(ykeys):
                y = series[ykey][::step]
                if logy: y = np.maximum(y, 1e-300)
                ax.plot(x, y, color=_colors[c % len(_colors)], lw=1, label=ykey)
            if logy: ax.set_yscale('log')
            ax.set_title(title, fontsize=10)
            ax.set_xlabel(xkey)
            if len(ykeys) > 1: ax.legend(fontsize=7, frameon=False, ncol=len(ykeys))
            _boxoff(ax)
        fig.tight_layout()
        svgname = filename[:-4] + '.svg' if filename.endswith('.csv') else filename + '.svg'
        svgname = rf.makefilepath(filename=svgname)
        fig.savefig(svgname, format='svg', metadata={'Date':None})
        plt.close(fig)
    output.svg = svgname
    ut.printv('Plot data written to %s and %s' % (output.csv, svgname), 3, 1)
    return output
