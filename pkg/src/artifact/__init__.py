"""Exact combinatorics of external rays, Mandelbrot roots and formal matings."""

from .angles import *  # noqa: F401,F403
from .landing import *  # noqa: F401,F403
from .mating import *  # noqa: F401,F403
from .miner import *  # noqa: F401,F403
from .params import *  # noqa: F401,F403
from .scenarios import *  # noqa: F401,F403
from . import angles, landing, mating, miner, params, scenarios

__all__ = [
    *angles.__all__,
    *params.__all__,
    *landing.__all__,
    *mating.__all__,
    *miner.__all__,
    *scenarios.__all__,
]
__version__ = "0.1.0"
