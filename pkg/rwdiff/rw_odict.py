##############################################################################
### ODICT CLASS
##############################################################################

from collections import OrderedDict as OD
import numpy as np
from . import rw_utils as ut

__all__ = ['odict', 'objdict']

class odict(OD):
    '''
    An ordered dictionary that also supports integer indexing, lists of keys,
    and list-returning keys()/values()/items(). Reports (growth classes, regime
    predictions, verdicts, ensemble statistics) are built from these, and the
    insertion order is what fixes the field order of the JSON they are written to.

    Examples:
        rates = odict(rate_tdot=0.5, rate_alpha=0.5, rate_int_alpha=1.0)
        assert rates[0] == rates['rate_tdot'] # Get item by index
        assert rates[['rate_alpha','rate_int_alpha']] == [0.5, 1.0] # Get items by list
    '''

    def __init__(self, *args, **kwargs):
        if len(args)==1 and args[0] is None: args = [] # Remove a None argument
        OD.__init__(self, *args, **kwargs)
        return None

    def __getitem__(self, key):
        ''' Allows getitem to support strings, integers, or lists of either '''
        if isinstance(key, ut._stringtypes) or isinstance(key, tuple):
            try:
                return OD.__getitem__(self, key)
            except KeyError:
                if len(self): errormsg = 'Key "%s" not found; available keys are: %s' % (ut.flexstr(key), ', '.join([ut.flexstr(k) for k in self.keys()]))
                else:         errormsg = 'Key "%s" not found since the dict is empty' % ut.flexstr(key)
                raise KeyError(errormsg)
        elif isinstance(key, (bool, np.bool_)):
            return OD.__getitem__(self, key)
        elif isinstance(key, ut._numtype):
            thiskey = self.keys()[int(key)]
            return OD.__getitem__(self, thiskey)
        elif isinstance(key, list):
            return [self.__getitem__(item) for item in key]
        return OD.__getitem__(self, key)

    def __repr__(self):
        ''' One line per key, nested dicts indented '''
        if not len(self):
            return '{}'
        lines = []
        for key,val in self.items():
            valstr = repr(val)
            if '\n' in valstr:
                valstr = '\n' + '\n'.join(['    ' + line for line in valstr.splitlines()])
            lines.append('#%i: %s: %s' % (len(lines), repr(key), valstr))
        return '\n'.join(lines)

    def keys(self):
        ''' Return a list of keys '''
        return list(OD.keys(self))

    def values(self):
        ''' Return a list of values '''
        return list(OD.values(self))

    def items(self):
        ''' Return a list of items '''
        return list(OD.items(self))

    def findkeys(self, pattern):
        ''' Keys starting with the given prefix, e.g. findkeys('tol.') '''
        return [key for key in self.keys() if ut.isstring(key) and key.startswith(pattern)]


class objdict(odict):
    '''
    Exactly the same as an odict, but allows keys to be set/retrieved by object
    notation.

    Example:
        growth = rw.objdict(kind='Polynomial', c=2.0)
        growth.ratio_limit = 2/3
        print(growth.kind)
    '''

    def __getattribute__(self, attr):
        try: # First, try to get the attribute as an attribute
            return odict.__getattribute__(self, attr)
        except AttributeError as E: # If that fails, try to get it as a dict item
            try:
                return odict.__getitem__(self, attr)
            except KeyError:
                raise E

    def __setattr__(self, name, value):
        ''' Set key in dict, not attribute! '''
        try:
            odict.__getattribute__(self, name)
        except AttributeError:
            return odict.__setitem__(self, name, value)
        errormsg = '"%s" exists as an attribute, so cannot be set as key' % name
        raise AttributeError(errormsg)

    def __reduce__(self):
        return (self.__class__, (), None, None, iter(self.items()))
