"""Monte Carlo statistics helpers.

Every Grassmannian quantity in :mod:`quermass` is a smooth function of a few sample
means computed on a shared set of subspaces. :func:`delta_method` propagates the sample
covariance of those means through such a function.
"""

from typing import Callable, Tuple

import numpy as np


def standard_error(samples: np.ndarray) -> float:
    """Returns the standard error of the mean of ``samples``.

    :param samples: One-dimensional array of i.i.d. draws.
    :return: ``std(samples, ddof=1) / sqrt(N)``, or ``0.0`` for fewer than two samples.
    """

    samples = np.asarray(samples, dtype=float)
    if samples.size < 2:
        return 0.0
    return float(np.std(samples, ddof=1) / np.sqrt(samples.size))


def delta_method(
    columns: np.ndarray,
    function: Callable[[np.ndarray], float],
    relative_step: float = 1e-6,
) -> Tuple[float, float]:
    """Evaluates ``function`` at the column means of ``columns`` and propagates their standard errors.

    :param columns: ``(N, k)`` array, one row per sample, one column per averaged quantity.
    :param function: Maps the vector of ``k`` means to a scalar.
    :param relative_step: Relative step of the central differences used for the gradient.
    :return: ``(value, stderr)``. ``stderr`` is ``sqrt(gᵀ Σ g / N)`` with ``g`` the
        numerical gradient and ``Σ`` the sample covariance; it is ``0.0`` for ``N < 2``.
    """

    columns = np.atleast_2d(np.asarray(columns, dtype=float))
    samples, k = columns.shape
    means = columns.mean(axis=0)
    value = float(function(means))
    if samples < 2:
        return value, 0.0

    gradient = np.empty(k)
    for index in range(k):
        step = relative_step * max(abs(means[index]), 1e-300)
        upper, lower = means.copy(), means.copy()
        upper[index] += step
        lower[index] -= step
        gradient[index] = (function(upper) - function(lower)) / (2 * step)

    covariance = np.atleast_2d(np.cov(columns, rowvar=False, ddof=1))
    variance = float(gradient @ covariance @ gradient) / samples
    return value, float(np.sqrt(max(variance, 0.0)))
