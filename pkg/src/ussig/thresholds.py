"""Mismatch-count acceptance shared by the string-based protocols.

A declaration is accepted when the mismatch count is strictly below the
threshold fraction of the tested base, with two refinements:

* a clean declaration (zero mismatches) is always accepted, which keeps
  the natural reading of a zero authentication threshold ("accept only a
  perfect match") instead of the vacuous "fewer than zero mismatches";
* the product rate*base is snapped to the nearest integer when it is
  within 1e-9 of one, so decimal rates like 0.1 at base 100 behave as the
  exact count 10 rather than as its floating-point neighbour.
"""

from __future__ import annotations


def threshold_count(rate: float, base: int | float) -> float:
    t = rate * base
    r = round(t)
    return float(r) if abs(t - r) < 1e-9 else t


def accepts(mismatches: int, rate: float, base: int | float) -> bool:
    if mismatches < 0:
        raise ValueError("mismatch count cannot be negative")
    if mismatches == 0:
        return True
    return mismatches < threshold_count(rate, base)
