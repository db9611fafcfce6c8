from ._lsemplus import *  # noqa: F401,F403
from ._lsemplus import __doc__  # noqa: F401
