"""Point estimates with standard errors and significance stars."""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy import stats

__all__ = ["Estimate", "significance_stars"]


def significance_stars(p_value: float) -> str:
    """``***`` below 1%, ``**`` below 5%, ``*`` below 10%."""
    if p_value is None or not math.isfinite(p_value):
        return ""
    if p_value < 0.01:
        return "***"
    if p_value < 0.05:
        return "**"
    if p_value < 0.10:
        return "*"
    return ""


@dataclass(frozen=True)
class Estimate:
    value: float
    std_error: float

    @property
    def z(self) -> float:
        if not self.std_error > 0:
            return math.nan
        return self.value / self.std_error

    @property
    def p_value(self) -> float:
        # two-sided normal reference
        z = self.z
        if not math.isfinite(z):
            return math.nan
        return float(2 * stats.norm.sf(abs(z)))

    @property
    def stars(self) -> str:
        return significance_stars(self.p_value)

    def to_dict(self) -> dict:
        return {
            "estimate": self.value,
            "std_error": self.std_error,
            "p_value": self.p_value,
            "stars": self.stars,
        }
