"""poslab: a desk-scale laboratory for total positivity in SL(n, R).

Exact-rational (with a float fallback) models of complete flags,
the totally positive unipotent semigroup and its cone coordinates,
diamonds and positive configurations, Veronese circles, tripod
metrics, and Schottky boundary dynamics, plus a property-suite CLI.
"""

__version__ = "0.1.0"

from . import errors  # noqa: F401
