"""Constructions: semideciders, adversaries and functions into open sets."""

from .core import *  # noqa: F401,F403
from .lemma import *  # noqa: F401,F403
from .nbar import *  # noqa: F401,F403
from .structure import *  # noqa: F401,F403
from .cantor import *  # noqa: F401,F403
from .adversary import *  # noqa: F401,F403
from .relative import *  # noqa: F401,F403
from . import adversary, cantor, core, lemma, nbar, relative, structure

__all__ = [n for m in (core, lemma, nbar, structure, cantor, adversary, relative) for n in m.__all__]
