"""Logarithmic scale grids for integrals against ``da / a``."""

from __future__ import annotations

import numpy as np


def log_scale_grid(a_min: float, a_max: float, count: int) -> tuple[np.ndarray, np.ndarray]:
    """Log-spaced scales with trapezoid weights for ``integral g(a) da/a``.

    In ``t = log a`` the measure ``da/a`` is ``dt``, so the weights are the
    ordinary trapezoid weights of the uniform ``t`` grid.
    """
    if not 0 < a_min < a_max:
        raise ValueError(f"need 0 < a_min < a_max, got {a_min}, {a_max}")
    if count < 2:
        raise ValueError("need at least two scales")
    t = np.linspace(np.log(a_min), np.log(a_max), count)
    step = t[1] - t[0]
    weights = np.full(count, step)
    weights[[0, -1]] = step / 2
    return np.exp(t), weights


def parse_scale_spec(text: str) -> tuple[float, float, int]:
    """Parse ``"min:max:count"``; bounds may be written as powers, e.g. ``2^-3``."""
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError(f"scale spec must be min:max:count, got {text!r}")

    def number(s: str) -> float:
        s = s.strip()
        if "^" in s:
            base, exp = s.split("^")
            return float(base) ** float(exp)
        return float(s)

    return number(parts[0]), number(parts[1]), int(parts[2])
