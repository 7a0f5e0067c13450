"""Memory budget for exhaustive searches.

The budget is read from ``HBL_BUDGET_MB`` (default 4096).  Searches call
:func:`check_growth` once per BFS layer with the sphere sizes seen so far; the
next sphere is extrapolated from the last growth ratio and the search refuses
to continue when the projected total would not fit.
"""

from __future__ import annotations

import os

from .errors import BudgetExceeded

DEFAULT_BUDGET_MB = 4096
# Rough CPython cost of one dict entry keyed by a small tuple, plus the tuple.
BYTES_PER_ELEMENT = 240


def budget_bytes(budget_mb: float | None = None) -> int:
    if budget_mb is None:
        budget_mb = float(os.environ.get("HBL_BUDGET_MB", DEFAULT_BUDGET_MB))
    if budget_mb <= 0:
        raise ValueError("memory budget must be positive")
    return int(budget_mb * 1024 * 1024)


def max_elements(budget_mb: float | None = None) -> int:
    return budget_bytes(budget_mb) // BYTES_PER_ELEMENT


def estimate_next(sphere_sizes: list[int]) -> int:
    """Extrapolate the next sphere size from the last two."""
    if not sphere_sizes:
        return 1
    last = sphere_sizes[-1]
    if len(sphere_sizes) < 2 or sphere_sizes[-2] == 0:
        return last * 4 + 4
    ratio = last / sphere_sizes[-2]
    return int(last * max(ratio, 1.0)) + 1


def check_growth(total: int, sphere_sizes: list[int], limit: int) -> None:
    """Raise :class:`BudgetExceeded` if the next layer is projected to overflow."""
    projected = total + estimate_next(sphere_sizes)
    if projected > limit:
        raise BudgetExceeded(
            f"projected {projected} elements exceeds budget of {limit}",
            estimated=projected,
        )
