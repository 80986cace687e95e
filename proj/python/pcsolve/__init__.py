from ._pcsolve import *  # noqa: F401,F403
from ._pcsolve import __doc__  # noqa: F401
