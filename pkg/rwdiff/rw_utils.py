# -*- coding: utf-8 -*-
'''
Shared utilities: verbosity-aware printing, type coercion, timing, fuzzy name
matching, and the exception classes raised throughout rwdiff.
'''

##############################################################################
### IMPORTS FROM OTHER LIBRARIES
##############################################################################

import sys
import time
import numbers
import numpy as np
from collections import OrderedDict as OD

_stringtypes = (str, bytes)
_numtype     = numbers.Number

# Add Windows support for colors (do this at the module level so that colorama.init() only gets called once)
if 'win' in sys.platform and sys.platform != 'darwin':
    try:
        import colorama
        colorama.init()
        ansi_support = True
    except Exception:
        ansi_support = False
else:
    ansi_support = True


##############################################################################
### PRINTING/NOTIFICATION FUNCTIONS
##############################################################################

__all__ = ['printv', 'sigfig', 'prepr', 'colorize', 'heading']


def printv(string, thisverbose=1, verbose=2, newline=True, indent=True):
    '''
    Optionally print a message and automatically indent. The same "verbose"
    value is passed down from the caller through every subfunction, determining
    how much detail to print out.

    The general idea is that verbose is an integer from 0-4 as follows:
        0 = no printout whatsoever
        1 = only essential warnings, e.g. a trajectory that failed numerically
        2 = standard printout, e.g. progress of an ensemble
        3 = extra debugging detail, e.g. one line per trajectory
        4 = everything possible, e.g. one line per integration step

    Thus a very important statement might be e.g.
        printv('WARNING, 4 of 64 trajectories failed', 1, verbose)

    whereas a much less important message might be
        printv('Step %i: t=%g' % (i, t), 4, verbose)

    Version: 2026oct17
    '''
    if thisverbose>4 or verbose>4: print('Warning, verbosity should be from 0-4 (this message: %i; current: %i)' % (thisverbose, verbose))
    if verbose>=thisverbose: # Only print if sufficiently verbose
        indents = '  '*thisverbose*bool(indent) # Create automatic indenting
        if newline: print(indents+flexstr(string))
        else:       print(indents+flexstr(string), end='')
    return None


def sigfig(x, sigfigs=5):
    '''
    Return a string representation of a number with the requested number of
    significant figures. Example:
        sigfig(3.14159, 3) # Returns '3.14'
    '''
    if not isnumber(x):
        return flexstr(x)
    if x == 0 or not np.isfinite(x):
        return str(x)
    magnitude = int(np.floor(np.log10(abs(x))))
    decimals = max(0, sigfigs - magnitude - 1)
    if magnitude >= sigfigs or magnitude < -4:
        return '%0.*e' % (sigfigs-1, x)
    return '%0.*f' % (decimals, x)


def prepr(obj, maxlen=None, skip=None):
    '''
    Pretty representation of an object: its class followed by one line per
    attribute (except any that are skipped), long values truncated.
    '''
    if maxlen is None: maxlen = 80
    if skip   is None: skip   = []
    else:              skip   = promotetolist(skip)

    labels = sorted(set(getattr(obj, '__dict__', {}).keys()) - set(skip))
    values = [flexstr(getattr(obj, attr)) for attr in labels]
    maxkeylen = max([len(label) for label in labels]) if labels else 0
    output = '<%s.%s at %s>\n' % (obj.__class__.__module__, obj.__class__.__name__, hex(id(obj)))
    for label,value in zip(labels, values):
        value = value.replace('\n', ' ')
        if len(value)>maxlen: value = value[:maxlen] + ' [...]'
        output += '%*s: %s\n' % (maxkeylen, label, value)
    output += '============================================================\n'
    return output


def colorize(color=None, string=None, output=False, enable=True):
    '''
    Colorize output text. Arguments:
        color = the color you want (use 'bg' with background colors, e.g. 'bgblue')
        string = the text to be colored
        output = whether to return the modified version of the string
        enable = switch to allow colorize() to be easily turned off

    Examples:
        colorize('green', 'pass') # Simple example
        verdict = colorize('red', 'fail', output=True); print('Claim: ' + verdict)
    '''
    if not enable:
        if output: return string
        print(string)
        return None

    ansicolors = OD([
        ('black',   '30'),
        ('red',     '31'),
        ('green',   '32'),
        ('yellow',  '33'),
        ('blue',    '34'),
        ('magenta', '35'),
        ('cyan',    '36'),
        ('gray',    '37'),
        ('bgblack', '40'),
        ('bgred',   '41'),
        ('bggreen', '42'),
        ('reset',   '0'),
    ])
    for key, val in ansicolors.items(): ansicolors[key] = '\033[' + val + 'm'

    colorlist = promotetolist(color)
    for thiscolor in colorlist:
        if thiscolor not in ansicolors.keys():
            errormsg = 'Color "%s" is not available; choices are: %s' % (thiscolor, ', '.join(ansicolors.keys()))
            raise ValueError(errormsg)
    ansicolor = ''.join([ansicolors[thiscolor] for thiscolor in colorlist])

    if string is None: ansistring = ansicolor # Just return the color
    else:              ansistring = ansicolor + str(string) + ansicolors['reset']
    if not ansi_support: ansistring = '' if string is None else str(string) # To avoid garbling output on unsupported systems

    if output:
        return ansistring
    print(ansistring)
    return None


def heading(string=None, color=None, divider=None, spaces=None, minlength=None, maxlength=None, **kwargs):
    '''
    Shortcut to colorize() to create a heading: colored text with horizontal
    lines above and below and blank lines before.

    Examples:
        rw.heading('test_catalog()')
        rw.heading('Verdict report', color='green', divider='=', spaces=0)
    '''
    if string    is None: string    = ''
    if color     is None: color     = 'cyan'
    if divider   is None: divider   = '—'
    if spaces    is None: spaces    = 2
    if minlength is None: minlength = 30
    if maxlength is None: maxlength = 120

    length = int(np.median([minlength, len(string), maxlength]))
    space = '\n'*spaces
    if divider and length: fulldivider = '\n'+divider*length+'\n'
    else:                  fulldivider = ''
    fullstring = space + fulldivider + string + fulldivider
    return colorize(color=color, string=fullstring, **kwargs)



##############################################################################
### TYPE FUNCTIONS
##############################################################################

__all__ += ['flexstr', 'isiterable', 'checktype', 'isnumber', 'isstring', 'promotetoarray', 'promotetolist']

def flexstr(arg, force=True):
    ''' Try converting to a regular string, but proceed if it fails '''
    if isinstance(arg, str):
        return arg
    elif isinstance(arg, bytes):
        try:    return arg.decode()
        except: return repr(arg) if force else arg
    return repr(arg) if force else arg


def isiterable(obj):
    ''' Determine whether or not the input is iterable '''
    try:
        iter(obj)
        return True
    except TypeError:
        return False


def checktype(obj=None, objtype=None, subtype=None, die=False):
    '''
    A convenience function for checking instances. If objtype is a type,
    then this function works exactly like isinstance(). But, it can also
    be a string: 'str', 'number', 'array', 'listlike' or 'arraylike'.

    Examples:
        checktype(np.random.rand(10), 'array', 'number') # Returns True
        checktype([0.5, 2], 'arraylike') # Returns True
        checktype(['r3','h3'], 'arraylike') # Returns False
    '''
    if   objtype in ['str','string']:          objinstance = _stringtypes
    elif objtype in ['num', 'number']:         objinstance = _numtype
    elif objtype in ['arr', 'array']:          objinstance = np.ndarray
    elif objtype in ['listlike', 'arraylike']: objinstance = (list, tuple, np.ndarray)
    elif isinstance(objtype, type):            objinstance = objtype
    elif objtype is None:                      return None
    else:
        errormsg = 'Could not understand what type you want to check: should be either a string or a type, not "%s"' % objtype
        raise ValueError(errormsg)

    result = isinstance(obj, objinstance)
    if isinstance(obj, (bool, np.bool_)) and objtype in ['num', 'number']:
        result = False # A flag is not a parameter value

    if result and objtype in ['listlike', 'arraylike']:
        obj = np.array(obj, dtype=object).flatten()
        if objtype == 'arraylike' and subtype is None: subtype = 'number'
    if result and subtype is not None and isiterable(obj):
        for item in obj:
            result = result and checktype(item, subtype)

    if die:
        if not result:
            errormsg = 'Incorrect type: object is %s, but %s is required' % (type(obj), objtype)
            raise TypeError(errormsg)
        return None
    return result


def isnumber(obj, isnan=None):
    ''' Determine whether or not the input is a number '''
    output = checktype(obj, 'number')
    if output and isnan is not None:
        output = (np.isnan(obj) == isnan)
    return output


def isstring(obj):
    ''' Determine whether or not the input is a string '''
    return checktype(obj, 'string')


def promotetoarray(x, dtype=float):
    ''' Small function to ensure consistent format for things that should be arrays '''
    if isnumber(x):
        return np.array([x], dtype=dtype)
    elif isinstance(x, (list, tuple, range)):
        return np.array(x, dtype=dtype)
    elif isinstance(x, np.ndarray):
        if np.shape(x): return x.astype(dtype, copy=False)
        else:           return np.array([x], dtype=dtype)
    errormsg = 'Expecting a number/list/tuple/ndarray; got: %s' % flexstr(x)
    raise TypeError(errormsg)


def promotetolist(obj=None, objtype=None, keepnone=False):
    '''
    Make sure object is a list, so functions can handle inputs like 'rates' or
    ['rates', 'clock']. None becomes an empty list unless keepnone is True.
    '''
    if obj is None:
        return [None] if keepnone else []
    if isinstance(obj, list):
        output = obj
    elif isinstance(obj, (tuple, np.ndarray)):
        output = list(obj)
    else:
        output = [obj]
    if objtype is not None:
        for item in output:
            checktype(obj=item, objtype=objtype, die=True)
    return output



##############################################################################
### TIME FUNCTIONS
##############################################################################

__all__ += ['tic', 'toc']

def tic():
    '''
    A little pair of functions to calculate a time difference, sort of like Matlab:
    tic() [but you can also use the form t = tic()]
    toc() [but you can also use the form toc(t) where t is the output of tic()]
    '''
    global _tictime
    _tictime = time.time()
    return _tictime


def toc(start=None, output=False, label=None, sigfigs=None, verbose=2):
    ''' Print or return the time elapsed since tic() '''
    if label   is None: label = ''
    if sigfigs is None: sigfigs = 3
    if start is None:
        start = globals().get('_tictime', 0)
    elapsed = time.time() - start
    if output:
        return elapsed
    if label=='': base = 'Elapsed time: '
    else:         base = 'Elapsed time for %s: ' % label
    printv(base + '%s s' % sigfig(elapsed, sigfigs=sigfigs), 2, verbose, indent=False)
    return None



##############################################################################
### MISC. FUNCTIONS
##############################################################################

__all__ += ['suggest']

def suggest(user_input, valid_inputs, n=1, threshold=4, die=False):
    '''
    Return the valid input closest to what the user typed, by Levenshtein
    distance, ignoring case and surrounding whitespace. Returns None if no
    option is within threshold edits.

    Examples:
        suggest('sinhh', ['sinh', 'power', 'constant']) # Returns 'sinh'
        suggest('model.famly', config_keys, die=True) # Raises with a "did you mean" message
    '''
    import Levenshtein # Imported here so the rest of the package works without it

    valid_inputs = promotetolist(valid_inputs, objtype='string')
    if not len(valid_inputs):
        return None
    distance    = np.array([Levenshtein.distance(user_input.strip().lower(), s.strip().lower()) for s in valid_inputs])
    cs_distance = np.array([Levenshtein.distance(user_input, s.strip()) for s in valid_inputs])
    if sum(distance==min(distance)) > 1: # Break ties with the case-sensitive comparison
        distance = cs_distance

    order = np.argsort(distance, kind='stable')
    suggestions = [valid_inputs[i] for i in order]
    suggestionstr = ', '.join(['"' + sugg + '"' for sugg in suggestions[:n]])

    if min(distance) > threshold:
        if die: raise KeyError('"%s" not found' % user_input)
        return None
    elif die:
        raise KeyError('"%s" not found - did you mean %s?' % (user_input, suggestionstr))
    return suggestions[0] if n==1 else suggestions[:n]



##############################################################################
### CLASSES
##############################################################################

__all__ += ['prettyobj', 'Timer']
__all__ += ['RWDiffError', 'ModelError', 'DomainError', 'IndeterminateError', 'NumericalFailure',
            'DegenerateVelocity', 'ConstraintError', 'InsufficientSamples', 'ConfigurationError',
            'EnsembleFailure', 'VerificationFailure']

class prettyobj(object):
    def __repr__(self):
        ''' Use pretty repr for objects '''
        return prepr(self)


class Timer(object):
    '''
    Simple timer wrapping tic() and toc(); use it in a with-block to report the
    elapsed time of an ensemble when the block finishes.

    Example:
        with rw.Timer(label='ensemble', verbose=2):
            stats = rw.run_ensemble(config)
    '''

    def __init__(self, **kwargs):
        self.kwargs = kwargs
        self.tic()

    def __enter__(self):
        self.tic()
        return self

    def __exit__(self, *args):
        self.toc()

    def tic(self):
        self.start = tic()

    def toc(self):
        return toc(self.start, **self.kwargs)

    @property
    def elapsed(self):
        return time.time() - self.start


class RWDiffError(Exception):
    ''' Base class for every error raised by rwdiff '''
    pass


class ModelError(RWDiffError, ValueError):
    ''' Unknown catalog model, invalid parameters, or a malformed model file '''
    pass


class DomainError(RWDiffError, ValueError):
    ''' An argument lies outside the domain of the function, e.g. t outside (0,T) '''
    pass


class IndeterminateError(RWDiffError):
    ''' A limit or integral could be certified neither finite nor infinite '''
    pass


class NumericalFailure(RWDiffError, ArithmeticError):
    ''' Non-finite arithmetic inside an integration step '''
    pass


class DegenerateVelocity(RWDiffError):
    ''' The spatial speed vanished (a = 0), so the direction is undefined for this step '''
    pass


class ConstraintError(RWDiffError):
    ''' A state cannot be projected back onto the fiber, or a diagnostic is ill-conditioned '''
    pass


class InsufficientSamples(RWDiffError, ValueError):
    ''' An estimator was given fewer samples than it needs '''
    pass


class ConfigurationError(RWDiffError, ValueError):
    ''' An ensemble or command configuration is invalid or incomplete '''
    pass


class EnsembleFailure(RWDiffError):
    ''' Too many trajectories of an ensemble ended in NumericalFailure '''
    pass


class VerificationFailure(RWDiffError):
    ''' At least one verified claim failed '''
    pass
