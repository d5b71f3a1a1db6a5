"""Thermodynamic formalism for interval iterated function systems."""

from ._ifsthermo import *  # noqa: F401,F403
from ._ifsthermo import Error, InputError, NumericalError, ResourceError  # noqa: F401

__version__ = "0.1.0"
