'''
Command-line front door, installed as the "rwdiff" console script.

Subcommands:
    catalog    list the catalog models with their growth class and horizon integrals
    classify   print the predicted regimes of (model, fiber, d, sigma) as JSON
    simulate   write one trajectory CSV and its JSON sidecar
    ensemble   run an ensemble and write its statistics as JSON
    verify     classify, run the ensemble and write the verdict report
    plot-data  turn a trajectory CSV into plottable series (CSV and SVG)

Exit codes: 0 success, 1 usage or input error, 2 numerical failures above the
tolerated fraction, 3 a verification claim failed.

Examples:
    rwdiff classify --model sinh --fiber h3 --sigma 1
    rwdiff simulate --model constant --fiber r3 --s-max 50 --seed 7 --out traj.csv
    rwdiff verify --config desitter.cfg --out verdict.json

Version: 2026oct17
'''

##############################################################################
### IMPORTS
##############################################################################

import os
import sys
import argparse
from . import rw_version as rv
from . import rw_utils as ut
from . import rw_fileio as rf
from . import rw_expansion as rx
from . import rw_temporal as rt
from . import rw_spatial as rs
from . import rw_harness as rh
from . import rw_plotting as rp
from .rw_odict import objdict


##############################################################################
### PARSER
##############################################################################

__all__ = ['main', 'makeparser']

_exitcodes = objdict(ok=0, usage=1, numerical=2, verification=3)

# Flag name -> config key, for flags that override entries of a config file
_overrides = [('fiber', 'fiber'), ('sigma', 'sim.sigma'), ('d', 'sim.d'), ('ds', 'sim.ds'), ('s_max', 'sim.s_max'),
              ('thin', 'sim.thin'), ('n_traj', 'ensemble.n_traj'), ('seed', 'ensemble.seed'), ('workers', 'ensemble.workers'),
              ('burn_in', 'ensemble.burn_in'), ('level', 'ensemble.level')]


class _Parser(argparse.ArgumentParser):
    ''' Argument errors exit with the usage code instead of argparse's 2 '''

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(_exitcodes.usage, '%s: error: %s\n' % (self.prog, message))


def _parentparsers():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('-v', '--verbose', action='count', default=0, help='more progress output (repeatable)')
    common.add_argument('--out', default=None, help='output file (default: standard output, or a fixed name for CSVs)')

    model = argparse.ArgumentParser(add_help=False)
    group = model.add_mutually_exclusive_group()
    group.add_argument('--model', default=None, help='catalog model, e.g. sinh, "power(c=1)"')
    group.add_argument('--model-file', default=None, help='key-value model file')
    model.add_argument('--params', default=None, help='model parameters, e.g. "1" or "gamma=0,beta=0.5"')

    sim = argparse.ArgumentParser(add_help=False)
    sim.add_argument('--fiber', default=None, help='fiber as {r,h,s}{d}, e.g. h3 (default r3)')
    sim.add_argument('--sigma', type=float, default=None, help='diffusion constant (default 1)')
    sim.add_argument('--d', type=int, default=None, help='fiber dimension (default 3)')
    sim.add_argument('--ds', type=float, default=None, help='base proper-time step (default 1e-3)')
    sim.add_argument('--s-max', type=float, default=None, help='proper-time budget (default 200)')
    sim.add_argument('--thin', type=int, default=None, help='keep every thin-th step (default 1)')
    sim.add_argument('--seed', type=int, default=None, help='random seed (default 0)')

    ens = argparse.ArgumentParser(add_help=False)
    ens.add_argument('--config', default=None, help='key-value ensemble config file')
    ens.add_argument('--n-traj', type=int, default=None, help='number of trajectories (default 64)')
    ens.add_argument('--workers', type=int, default=None, help='worker processes (default RWDIFF_WORKERS or the CPU count)')
    ens.add_argument('--statistics', default=None, help='comma-separated statistics (default all)')
    ens.add_argument('--level', type=float, default=None, help='return-count level (default 2)')
    ens.add_argument('--burn-in', type=float, default=None, help='start of the occupation window (default s_max/4)')
    return common, model, sim, ens


def makeparser():
    ''' The argument parser of the rwdiff command '''
    common, model, sim, ens = _parentparsers()
    parser = _Parser(prog='rwdiff', description='Relativistic diffusions on Robertson-Walker spacetimes')
    parser.add_argument('--version', action='version', version='rwdiff %s (%s)' % (rv.__version__, rv.__versiondate__))
    sub = parser.add_subparsers(dest='command', metavar='command', parser_class=_Parser)
    sub.required = True
    sub.add_parser('catalog',  parents=[common, model], help='list models with growth class and horizon integrals')
    sub.add_parser('classify', parents=[common, model, sim], help='print the predicted regimes as JSON')
    sub.add_parser('simulate', parents=[common, model, sim], help='write one trajectory CSV')
    sub.add_parser('ensemble', parents=[common, model, sim, ens], help='run an ensemble and write its statistics')
    sub.add_parser('verify',   parents=[common, model, sim, ens], help='check the predicted regimes against an ensemble')
    plot = sub.add_parser('plot-data', parents=[common], help='plottable series of a trajectory CSV')
    plot.add_argument('csv', help='trajectory CSV written by simulate')
    plot.add_argument('--fiber', default=None, help='fiber of the trajectory (default: from the sidecar)')
    plot.add_argument('--no-svg', action='store_true', help='skip the SVG plot')
    return parser



##############################################################################
### HELPERS
##############################################################################

def _verbosity(args):
    ''' Stay quiet when the result itself goes to standard output '''
    return args.verbose + (1 if args.out else 0)


def _modelname(args):
    name = args.model if args.model is not None else 'constant'
    if args.params is not None:
        if '(' in name:
            errormsg = 'Give parameters either inside --model or with --params, not both'
            raise ut.ConfigurationError(errormsg)
        name = '%s(%s)' % (name, args.params)
    return name


def _model(args):
    if args.model_file is not None:
        if args.params is not None:
            errormsg = '--params cannot be combined with --model-file'
            raise ut.ConfigurationError(errormsg)
        return rx.load_model(args.model_file)
    return rx.catalog(_modelname(args))


def _config(args):
    ''' EnsembleConfig from an optional config file with command-line overrides '''
    cfg = objdict()
    folder = os.getcwd()
    if getattr(args, 'config', None) is not None:
        cfg = rf.loadconfig(args.config)
        folder = os.path.dirname(os.path.abspath(args.config))
    if args.model is not None or args.model_file is not None or args.params is not None:
        for key in cfg.findkeys('model.'):
            cfg.pop(key)
        if args.model_file is not None:
            cfg['model.file'] = os.path.abspath(args.model_file)
        else:
            cfg['model.family'] = _modelname(args)
    elif 'model.family' not in cfg and 'model.file' not in cfg:
        cfg['model.family'] = 'constant'
    for flag,key in _overrides:
        value = getattr(args, flag, None)
        if value is not None:
            cfg[key] = value
    if getattr(args, 'statistics', None) is not None:
        cfg['ensemble.statistics'] = [stat.strip() for stat in args.statistics.split(',') if stat.strip()]
    if 'fiber' in cfg and args.d is not None:
        cfg['fiber'] = rs.Fiber.parse(cfg['fiber'], d=args.d).label
    return rh.EnsembleConfig.from_dict(cfg, folder=folder)


def _emit(obj, filename):
    ''' Write JSON to a file, or to standard output '''
    if filename is None:
        sys.stdout.write(rf.dumpjson(obj))
        return None
    return rf.savejson(filename, obj)



##############################################################################
### COMMANDS
##############################################################################

def _catalog(args):
    verbose = _verbosity(args)
    models = [_model(args)] if (args.model or args.model_file) else rx.standard_models()
    rows = []
    for model in models:
        row = objdict(model=model.describe())
        row.growth = rx.classify_growth(model, verbose=verbose)
        try:
            row.horizons = rx.horizon_integrals(model, verbose=verbose)
        except ut.IndeterminateError as E:
            row.horizons = objdict(kind='Indeterminate', reason=str(E))
        rows.append(row)
    if args.out:
        rf.savejson(args.out, rows)
        return _exitcodes.ok
    print('%-32s %-16s %-12s %-12s' % ('model', 'growth', 'I_minus', 'I_plus'))
    for row in rows:
        hz = row.horizons
        if 'i_plus' in hz: integrals = ('%-12.6g %-12.6g' % (hz.i_minus, hz.i_plus))
        else:              integrals = 'indeterminate'
        print('%-32s %-16s %s' % (row.model.label, row.growth.kind, integrals))
    return _exitcodes.ok


def _classify(args):
    verbose = _verbosity(args)
    model = _model(args)
    fiber = rs.Fiber.parse(args.fiber if args.fiber is not None else 'r', d=args.d)
    sigma = args.sigma if args.sigma is not None else 1.0
    prediction = rx.predict_regimes(model, fiber.kappa, d=fiber.d, sigma=sigma, verbose=verbose)
    _emit(prediction, args.out)
    return _exitcodes.ok


def _simulate(args):
    '''
    One trajectory with the stream of ensemble index 0, so it matches trajectory 0
    of an ensemble with the same flags. A numerical failure still writes the CSV.
    '''
    verbose = _verbosity(args) + 1
    config = rh.EnsembleConfig(model=_model(args), fiber=args.fiber, sigma=args.sigma, d=args.d, ds=args.ds,
                               s_max=args.s_max, thin=args.thin, seed=args.seed, n_traj=1)
    rng = rt.makerng(config.seed, 0)
    traj = rs.simulate_full(config.initial_state(), config.initial_spatial(), config.model, config.fiber,
                            config.params, config.s_max, rng, verbose=verbose)
    filename = traj.to_csv(args.out if args.out else 'trajectory.csv')
    ut.printv('Wrote %i samples to %s (%s)' % (len(traj), filename, traj.termination.kind), 2, verbose)
    if traj.termination.kind == rt.Termination.NumericalFailure:
        errormsg = 'Trajectory ended in a numerical failure: %s' % traj.termination.message
        raise ut.EnsembleFailure(errormsg)
    return _exitcodes.ok


def _ensemble(args):
    verbose = _verbosity(args)
    config = _config(args)
    stats = rh.run_ensemble(config, verbose=verbose)
    _emit(stats, args.out)
    return _exitcodes.ok


def _verify(args):
    verbose = _verbosity(args)
    config = _config(args)
    prediction = rx.predict_regimes(config.model, config.fiber.kappa, d=config.d, sigma=config.sigma, verbose=verbose)
    stats = rh.run_ensemble(config, verbose=verbose)
    report = rh.verify_regime(stats, prediction)
    _emit(report, args.out)
    for claim in report.claims:
        if claim.verdict == 'unconverged':
            print('Unconverged: %s (%s)' % (claim.claim, claim.detail), file=sys.stderr)
    if not report.passed:
        failed = [claim.claim for claim in report.claims if claim.verdict == 'fail']
        errormsg = 'Verification failed for %s' % ', '.join(failed)
        raise ut.VerificationFailure(errormsg)
    return _exitcodes.ok


def _plotdata(args):
    verbose = _verbosity(args) + 1
    fiber = rs.Fiber.parse(args.fiber) if args.fiber is not None else None
    sidecar = rt.sidecarname(args.csv)
    hasfiber = fiber is not None or (os.path.isfile(sidecar) and 'fiber' in rf.loadjson(sidecar))
    if hasfiber: traj = rs.Trajectory.from_csv(args.csv, fiber=fiber)
    else:        traj = rt.TemporalPath.from_csv(args.csv)
    out = args.out
    if out is None:
        base = args.csv[:-4] if args.csv.endswith('.csv') else args.csv
        out = base + '_series.csv'
    files = rp.save_plotdata(traj, out, svg=not args.no_svg)
    ut.printv('Wrote %s' % ', '.join(files.values()), 2, verbose)
    return _exitcodes.ok


_commands = {'catalog':_catalog, 'classify':_classify, 'simulate':_simulate, 'ensemble':_ensemble,
             'verify':_verify, 'plot-data':_plotdata}


def main(argv=None):
    '''
    Run the rwdiff command line and return the exit code.

    Example:
        rw.main(['classify', '--model', 'sinh', '--fiber', 'h3'])
    '''
    parser = makeparser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as E:
        return E.code if E.code is not None else _exitcodes.ok
    try:
        return _commands[args.command](args)
    except (ut.EnsembleFailure, ut.NumericalFailure) as E:
        print('rwdiff: numerical failure: %s' % E, file=sys.stderr)
        return _exitcodes.numerical
    except ut.VerificationFailure as E:
        print('rwdiff: %s' % E, file=sys.stderr)
        return _exitcodes.verification
    except (ut.RWDiffError, OSError) as E:
        print('rwdiff: error: %s' % E, file=sys.stderr)
        return _exitcodes.usage


if __name__ == '__main__':
    sys.exit(main())
