"""A concrete acceptable numbering: terms, coding, fuelled evaluation."""

from .terms import *  # noqa: F401,F403
from .terms import __all__ as _t
from .machine import *  # noqa: F401,F403
from .machine import __all__ as _m

__all__ = list(_t) + list(_m)
