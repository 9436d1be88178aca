"""
RWDIFF

Relativistic diffusions on Robertson-Walker spacetimes: expansion models, the
temporal and spatial simulators, and the ensemble verification harness.

.. autosummary::
    :toctree: _autosummary

    rw_version
    rw_utils
    rw_odict
    rw_math
    rw_fileio
    rw_parallel
    rw_expansion
    rw_temporal
    rw_spatial
    rw_harness
    rw_plotting
    rw_cli

"""



# Import everything
from .rw_version   import *
from .rw_utils     import *
from .rw_odict     import *
from .rw_math      import *
from .rw_fileio    import *
from .rw_parallel  import *
from .rw_expansion import *
from .rw_temporal  import *
from .rw_spatial   import *
from .rw_harness   import *
from .rw_plotting  import *
from .rw_cli       import *
