##############################################################################
### IMPORTS
##############################################################################

import os
import psutil
import multiprocessing as mp
from . import rw_utils as ut



##############################################################################
### PARALLELIZATION FUNCTIONS
##############################################################################

__all__ = ['getworkers', 'parallelize']


def getworkers(workers=None, maxworkers=None):
    '''
    Resolve the number of worker processes: an explicit value wins, then the
    RWDIFF_WORKERS environment variable, then the number of CPUs this process may
    run on (psutil CPU affinity, falling back to the logical CPU count).

    Example:
        rw.getworkers()  # e.g. 8
        rw.getworkers(2) # 2
    '''
    if workers is None:
        envval = os.environ.get('RWDIFF_WORKERS')
        if envval:
            try:
                workers = int(envval)
            except ValueError:
                errormsg = 'RWDIFF_WORKERS must be an integer, not "%s"' % envval
                raise ut.ConfigurationError(errormsg)
    if workers is None:
        try:
            workers = len(psutil.Process().cpu_affinity())
        except (AttributeError, NotImplementedError, psutil.Error): # cpu_affinity is unavailable on macOS
            workers = psutil.cpu_count(logical=True) or 1
    workers = int(workers)
    if workers < 1:
        errormsg = 'The number of workers must be at least 1, not %s' % workers
        raise ut.ConfigurationError(errormsg)
    if maxworkers is not None:
        workers = max(1, min(workers, maxworkers))
    return workers


def parallelize(func, iterkwargs=None, kwargs=None, ncpus=None):
    '''
    Shortcut for parallelizing a function over a list of keyword arguments with
    multiprocessing.Pool().map(). Outputs are returned in input order whatever the
    scheduling, so folds over them are deterministic.

    iterkwargs is a dict of equal-length iterables (or a list of dicts); entry i
    of each is passed as a keyword argument to call i. kwargs are passed to every
    call. With ncpus=1 (or a single task) everything runs in this process.

    Example:
        results = rw.parallelize(rw.run_trajectory, iterkwargs={'index':range(8)}, kwargs={'config':config})

    Note: on Windows and macOS, parallel calls must be inside an `if __name__ == '__main__'` block.

    Version: 2026oct17
    '''
    if iterkwargs is None: iterkwargs = []
    if isinstance(iterkwargs, dict):
        lengths = []
        for key,val in iterkwargs.items():
            if not ut.isiterable(val):
                errormsg = 'iterkwargs entries must be iterable, not %s' % type(val)
                raise ValueError(errormsg)
            lengths.append(len(val))
        if len(set(lengths)) > 1:
            errormsg = 'All iterkwargs iterables must be the same length, not %s' % lengths
            raise ValueError(errormsg)
        columns = {key:list(val) for key,val in iterkwargs.items()}
        niters = lengths[0] if lengths else 0
        iterdicts = [{key:val[index] for key,val in columns.items()} for index in range(niters)]
    elif isinstance(iterkwargs, list):
        for item in iterkwargs:
            if not isinstance(item, dict):
                errormsg = 'If iterkwargs is a list, each entry must be a dict, not %s' % type(item)
                raise ValueError(errormsg)
        iterdicts = iterkwargs
    else:
        errormsg = 'iterkwargs must be a dict of lists or a list of dicts, not %s' % type(iterkwargs)
        raise ValueError(errormsg)

    argslist = [TaskArgs(func, index, iterdict, kwargs) for index,iterdict in enumerate(iterdicts)]
    ncpus = getworkers(ncpus, maxworkers=max(1, len(argslist)))
    if ncpus == 1:
        outputlist = [parallel_task(taskargs) for taskargs in argslist]
    else:
        with mp.Pool(processes=ncpus) as multipool:
            outputlist = multipool.map(parallel_task, argslist)
    return outputlist



##############################################################################
### HELPER FUNCTIONS/CLASSES
##############################################################################

class TaskArgs(ut.prettyobj):
        ''' A class to hold the arguments for the task -- must match both parallelize() and parallel_task() '''
        def __init__(self, func, index, iterdict, kwargs):
            self.func     = func     # The function being called
            self.index    = index    # The place in the queue
            self.iterdict = iterdict # The keyword arguments of this call
            self.kwargs   = kwargs   # Keyword arguments shared by every call
            return None


def parallel_task(taskargs):
    ''' Task called by parallelize() -- not to be called directly '''
    kwargs = dict(taskargs.kwargs or {})
    kwargs.update(taskargs.iterdict)
    return taskargs.func(**kwargs)
