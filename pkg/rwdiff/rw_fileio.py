"""
fileio.py -- file management for rwdiff: paths, text, JSON reports, key-value
config files and trajectory CSVs

Last update: 2026oct17
"""

##############################################################################
### Imports
##############################################################################

import os
import ast
import json
import configparser
import numpy as np
import pandas as pd
from collections import OrderedDict
from . import rw_utils as ut
from .rw_odict import objdict


##############################################################################
### Text and path functions
##############################################################################

__all__ = ['loadtext', 'savetext', 'makefilepath']


def loadtext(filename=None, folder=None, splitlines=False):
    ''' Convenience function for reading a text file '''
    filename = makefilepath(filename=filename, folder=folder, makedirs=False)
    with open(filename) as f: output = f.read()
    if splitlines: output = output.splitlines()
    return output


def savetext(filename=None, string=None):
    ''' Convenience function for saving a text file -- accepts a string or list of strings '''
    if isinstance(string, list): string = '\n'.join(string)
    if not ut.isstring(string):  string = str(string)
    filename = makefilepath(filename=filename)
    with open(filename, 'w', newline='\n') as f: f.write(string)
    return filename


def makefilepath(filename=None, folder=None, ext=None, default=None, split=False, abspath=True, makedirs=True, verbose=False):
    '''
    Utility for taking a filename and folder -- or not -- and generating a valid path from them.

    Inputs:
        filename = the filename, or full file path, to save to -- in which case this utility does nothing
        folder = the name of the folder to be prepended to the filename
        ext = the extension to ensure the file has
        default = a name or list of names to use if filename is None
        split = whether to return the path and filename separately
        makedirs = whether or not to make the folders to save into if they don't exist

    Example:
        makefilepath(filename=None, folder='./runs', ext='json', default='stats') # e.g. '/home/myname/runs/stats.json'
    '''
    filefolder = ''
    filebasename = ''

    if filename is None:
        for defaultname in ut.promotetolist(default):
            if not filename and defaultname: filename = defaultname
    if filename is not None:
        filebasename = os.path.basename(filename)
        filefolder = os.path.dirname(filename)
    if not filebasename: filebasename = 'default'

    if ext and not filebasename.endswith(ext):
        filebasename += '.'+ext
    ut.printv('From filename="%s", default="%s", extension="%s", made basename "%s"' % (filename, default, ext, filebasename), 3, verbose)

    if folder is not None:
        filefolder = folder
    if abspath:
        filefolder = os.path.abspath(os.path.expanduser(filefolder))
    if makedirs:
        os.makedirs(filefolder, exist_ok=True)

    fullfile = os.path.join(filefolder, filebasename)
    if split: return filefolder, filebasename
    else:     return fullfile



##############################################################################
### JSON functions
##############################################################################

__all__ += ['sanitizejson', 'dumpjson', 'loadjson', 'savejson', 'desanitize']


def sanitizejson(obj, verbose=True, die=False):
    """
    Convert Python data structures (odicts, numpy arrays and scalars, nested lists)
    into JSON-compatible ones. NaN becomes None and infinities become the strings
    'inf' and '-inf', so reports stay valid JSON.

    Args:
        obj: almost any kind of data structure that is a combination of list,
            numpy.ndarray, odicts, etc.
    Returns:
        A converted dict/list/value that should be JSON compatible
    """
    if obj is None:
        output = None

    elif isinstance(obj, (bool, np.bool_)):
        output = bool(obj)

    elif ut.isnumber(obj):
        if isinstance(obj, (int, np.integer)):
            output = int(obj)
        elif np.isnan(obj):
            output = None
        elif np.isinf(obj):
            output = 'inf' if obj > 0 else '-inf'
        else:
            output = float(obj)

    elif isinstance(obj, np.ndarray):
        if obj.shape: output = [sanitizejson(p) for p in list(obj)]
        else:         output = sanitizejson(obj.item())

    elif isinstance(obj, (list, tuple)):
        output = [sanitizejson(p) for p in list(obj)]

    elif isinstance(obj, dict):
        output = OrderedDict()
        for key,val in obj.items():
            output[str(key)] = sanitizejson(val)

    elif ut.isstring(obj):
        output = obj.decode() if isinstance(obj, bytes) else str(obj)

    elif hasattr(obj, 'to_dict'):
        output = sanitizejson(obj.to_dict())

    else:
        errormsg = 'Could not sanitize "%s" %s, converting to string instead' % (obj, type(obj))
        if die: raise TypeError(errormsg)
        ut.printv(errormsg, 1, 2 if verbose else 0)
        output = str(obj)

    return output


def desanitize(value):
    ''' Inverse of the infinity encoding of sanitizejson for a single value '''
    if isinstance(value, str) and value in ['inf', '-inf']:
        return float(value)
    elif value is None:
        return np.nan
    return value


def dumpjson(obj=None, indent=2):
    ''' JSON string with stable key order and a trailing newline '''
    return json.dumps(sanitizejson(obj), indent=indent, allow_nan=False) + '\n'


def loadjson(filename=None, folder=None):
    ''' Convenience function for reading a JSON file '''
    filename = makefilepath(filename=filename, folder=folder, makedirs=False)
    with open(filename) as f:
        output = json.load(f, object_pairs_hook=objdict)
    return output


def savejson(filename=None, obj=None, folder=None, indent=2):
    ''' Convenience function for saving a JSON '''
    filename = makefilepath(filename=filename, folder=folder)
    with open(filename, 'w', newline='\n') as f:
        f.write(dumpjson(obj, indent=indent))
    return filename



##############################################################################
### Config functions
##############################################################################

__all__ += ['parseconfig', 'loadconfig', 'saveconfig']

_configsection = 'rwdiff'


def _literal(string):
    ''' Numbers, lists, booleans, inf; anything else stays a string '''
    string = string.strip()
    lowered = string.lower()
    if lowered in ['true', 'yes', 'on']:   return True
    if lowered in ['false', 'no', 'off']:  return False
    if lowered in ['inf', '+inf', 'infinity']: return np.inf
    if lowered in ['none', '']: return None
    try:
        return ast.literal_eval(string)
    except (ValueError, SyntaxError):
        return string


def parseconfig(string):
    '''
    Parse flat key-value text ("key = value", "#" comments, dotted prefixes such
    as "model.family = sinh") into an objdict with literal-evaluated values.

    Example:
        cfg = rw.parseconfig('model.family = sinh\\nsim.sigma = 1.0')
        cfg['sim.sigma'] # 1.0
    '''
    parser = configparser.ConfigParser(comment_prefixes=('#',';'), inline_comment_prefixes=('#',), interpolation=None, delimiters=('=',':'))
    parser.optionxform = str # Keep case
    try:
        parser.read_string('[%s]\n%s' % (_configsection, string))
    except configparser.Error as E:
        errormsg = 'Could not parse config text: %s' % str(E)
        raise ut.ConfigurationError(errormsg)
    output = objdict()
    for key,val in parser.items(_configsection):
        output[key] = _literal(val)
    return output


def loadconfig(filename=None, folder=None):
    ''' Read a key-value config file into an objdict '''
    filename = makefilepath(filename=filename, folder=folder, makedirs=False)
    if not os.path.isfile(filename):
        errormsg = 'Config file "%s" not found' % filename
        raise ut.ConfigurationError(errormsg)
    return parseconfig(loadtext(filename))


def saveconfig(filename=None, config=None, header=None):
    ''' Write a flat dict as "key = value" lines '''
    lines = []
    if header: lines += ['# %s' % line for line in header.splitlines()]
    for key,val in config.items():
        if val is None: continue
        if isinstance(val, np.ndarray): val = val.tolist()
        if ut.isnumber(val) and np.isinf(val): val = 'inf' if val > 0 else '-inf'
        lines.append('%s = %s' % (key, val))
    return savetext(filename, '\n'.join(lines)+'\n')



##############################################################################
### CSV functions
##############################################################################

__all__ += ['savecsv', 'loadcsv']


def savecsv(filename=None, data=None, columns=None):
    '''
    Write columns of floats to CSV with round-trip precision. data is a dict of
    equal-length arrays, or a 2D array with column names given separately.
    '''
    if isinstance(data, dict):
        df = pd.DataFrame(OrderedDict((key, np.asarray(val, dtype=float)) for key,val in data.items()))
    else:
        df = pd.DataFrame(np.asarray(data, dtype=float), columns=columns)
    filename = makefilepath(filename=filename)
    df.to_csv(filename, index=False, float_format='%.17g', lineterminator='\n')
    return filename


def loadcsv(filename=None, columns=None):
    ''' Read a CSV written by savecsv into an objdict of float arrays '''
    filename = makefilepath(filename=filename, makedirs=False)
    df = pd.read_csv(filename, float_precision='round_trip')
    if columns is not None:
        missing = [col for col in columns if col not in df.columns]
        if missing:
            errormsg = 'CSV "%s" is missing columns %s (has %s)' % (filename, missing, list(df.columns))
            raise ut.ConfigurationError(errormsg)
    output = objdict()
    for col in df.columns:
        output[col] = df[col].to_numpy(dtype=float)
    return output
