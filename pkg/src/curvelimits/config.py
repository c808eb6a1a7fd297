"""Resource limits used across the package.

Limits are kept in one mutable object so the command line flags can adjust
them; library callers normally use :func:`override_limits` as a context
manager instead of mutating the object directly.
"""

from __future__ import annotations

import contextlib
import dataclasses
from typing import Iterator


@dataclasses.dataclass
class Limits:
    max_tower_height: int = 4
    # Degree cap for factoring over a proper extension of Q.  Over Q the cap
    # is the larger ``rational_factor_degree_cap``.
    factor_degree_cap: int = 24
    rational_factor_degree_cap: int = 200
    form_degree_cap: int = 12
    t_degree_cap: int = 512
    # None means "4 * d^2" for a curve of degree d.
    puiseux_order: int | None = None


LIMITS = Limits()


@contextlib.contextmanager
def override_limits(**changes) -> Iterator[Limits]:
    saved = dataclasses.replace(LIMITS)
    for key, value in changes.items():
        if not hasattr(LIMITS, key):
            raise AttributeError(f"unknown limit {key!r}")
        setattr(LIMITS, key, value)
    try:
        yield LIMITS
    finally:
        for field in dataclasses.fields(Limits):
            setattr(LIMITS, field.name, getattr(saved, field.name))
