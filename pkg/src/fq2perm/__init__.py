"""Permutation polynomials g(s) + L(x) of F_{q^2} with s = x^q + delta x."""

__version__ = "0.1.0"

from .fields import build_field, deltas  # noqa: E402
from .linearized import LinPoly  # noqa: E402
from .spoly import SPoly  # noqa: E402
from .construct import Family, PPForm  # noqa: E402
from .inverse import invert  # noqa: E402

__all__ = ["Family", "LinPoly", "PPForm", "SPoly", "build_field", "deltas", "invert",
           "__version__"]
