"""Process-wide budgets guarding exhaustive enumerations."""
from __future__ import annotations

import contextlib
from dataclasses import dataclass


@dataclass
class Limits:
    point_budget: int = 10**7
    cell_budget: int = 10**5
    dim_cap: int = 8


limits = Limits()


@contextlib.contextmanager
def override_limits(**kwargs):
    saved = {key: getattr(limits, key) for key in kwargs}
    for key, value in kwargs.items():
        if not hasattr(limits, key):
            raise AttributeError(key)
        setattr(limits, key, value)
    try:
        yield limits
    finally:
        for key, value in saved.items():
            setattr(limits, key, value)
