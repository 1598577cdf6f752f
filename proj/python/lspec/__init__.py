"""Python bindings of the lspec library."""

from ._lspec import *  # noqa: F401,F403
from ._lspec import __doc__  # noqa: F401
