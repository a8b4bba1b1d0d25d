"""Python access to the geoglove core: reducers, distances and pipeline stages."""

from ._geoglove import *  # noqa: F401,F403
from ._geoglove import __doc__  # noqa: F401
