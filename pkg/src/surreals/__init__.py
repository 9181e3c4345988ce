"""Computer-algebra kernel for a finitely representable surreal fragment."""

from . import ordinal
from .ordinal import Ordinal

__all__ = ["ordinal", "Ordinal"]
