"""Blow-up profiles of u'' = u^p on (-1, 1) and the scalar reduction of
(||u||_q^q + b)^r u'' = lambda u^p."""

from ._core import *  # noqa: F401,F403
from ._core import __doc__  # noqa: F401
