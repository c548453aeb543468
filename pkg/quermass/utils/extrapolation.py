"""Richardson extrapolation of difference quotients."""

from typing import Sequence
import logging

import numpy as np


log = logging.getLogger(__name__)


def richardson_limit(step_ratio: float, values: Sequence[float], order: float = 1.0, levels: int | None = None) -> float:
    """Extrapolates ``values`` (taken at steps decreasing by ``step_ratio``) to step zero.

    The error of ``values[i]`` is assumed to be a power series in the step starting at
    ``step**order``, with consecutive terms one order apart.

    :param step_ratio: Ratio of consecutive steps, greater than one.
    :param values: Values ordered from the largest step to the smallest.
    :param order: Leading order of the error.
    :param levels: Maximum number of elimination levels, all available by default.
    :return: The extrapolated limit.
    """

    last_level = [float(v) for v in values]
    if len(last_level) == 1:
        return last_level[0]

    max_levels = len(last_level) - 1 if levels is None else min(levels, len(last_level) - 1)
    for m in range(max_levels):
        mult = step_ratio ** (order + m)
        last_level = [
            (mult * high - low) / (mult - 1.0)
            for low, high in zip(last_level[:-1], last_level[1:])
        ]
    return last_level[-1]


def fitted_order(steps: Sequence[float], values: Sequence[float]) -> float:
    """Estimates the leading error order of ``values`` from three or more geometric steps.

    Uses ``log(|d_{i}| / |d_{i+1}|) / log(step_i / step_{i+1})`` on consecutive differences
    ``d`` and returns the median. Returns ``nan`` when fewer than three values are given or
    the differences vanish.
    """

    steps = np.asarray(steps, dtype=float)
    values = np.asarray(values, dtype=float)
    if values.size < 3:
        return float("nan")
    differences = np.abs(np.diff(values))
    with np.errstate(divide="ignore", invalid="ignore"):
        orders = np.log(differences[:-1] / differences[1:]) / np.log(steps[:-2] / steps[1:-1])
    orders = orders[np.isfinite(orders)]
    return float(np.median(orders)) if orders.size else float("nan")


def is_monotone(values: Sequence[float]) -> bool:
    """Whether ``values`` is monotone (non-increasing or non-decreasing)."""

    steps = np.diff(np.asarray(values, dtype=float))
    return bool(np.all(steps >= 0) or np.all(steps <= 0))


def extrapolate_quotients(steps: Sequence[float], quotients: Sequence[float], levels: int = 1) -> float:
    """Richardson limit of difference quotients taken at geometric ``steps``.

    Only the ``levels + 1`` smallest steps enter, assuming a first-order leading error.
    Non-geometric schedules fall back to the quotient at the smallest step.
    """

    steps = np.asarray(steps, dtype=float)
    quotients = np.asarray(quotients, dtype=float)
    levels = max(0, min(levels, steps.size - 1))
    if steps.size == 1:
        return float(quotients[-1])
    ratios = steps[:-1] / steps[1:]
    if not np.allclose(ratios, ratios[0], rtol=1e-9):
        log.warning("Step schedule is not geometric; using the smallest-step quotient as the limit.")
        return float(quotients[-1])
    return richardson_limit(float(ratios[0]), quotients[steps.size - levels - 1:], order=1.0)
