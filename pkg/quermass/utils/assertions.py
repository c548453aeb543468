"""Utility functions for type- and sanity checking."""

from typing import Any
import inspect

import numpy as np


#: Tolerance on the euclidean norm of a unit vector.
UNIT_NORM_TOLERANCE = 1e-12
#: Tolerance on ``BᵀB - I`` for an orthonormal basis.
ORTHONORMAL_TOLERANCE = 1e-10


def assert_is_bool(value: Any) -> None:
    """Raises an exception if ``value`` is not a boolean.

    :param value: The input to check.
    :raises: :class:`TypeError` if ``value`` is not a boolean.
    """

    if not isinstance(value, (bool, np.bool_)):
        raise TypeError(f"Expected the input to be a bool but got a '{type(value)}'.")


def assert_is_int(value: Any) -> None:
    """Raises an exception if ``value`` is not an integer.

    :param value: The input to check.
    :raises: :class:`TypeError` if ``value`` is not a integer.
    """

    if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
        raise TypeError(f"Expected the input to be an integer but got a '{type(value)}'.")


def assert_is_float_or_int(value: Any) -> None:
    """Raises an exception if ``value`` is not a floating point number or an integer.

    :param value: The input to check.
    :raises: :class:`TypeError` if ``value`` is not a floating point number or an integer.
    """

    if isinstance(value, bool) or not isinstance(value, (int, float, np.integer, np.floating)):
        raise TypeError(f"Expected the input to be an integer or float, but got a '{type(value)}'.")


def assert_is_positive(value: Any) -> None:
    """Raises an exception if ``value`` is not a finite number greater than zero.

    :param value: The input to check.
    :raises: :class:`TypeError` if ``value`` is not a number.
    :raises: :class:`ValueError` if ``value`` is not finite or not positive.
    """

    assert_is_float_or_int(value)
    if not np.isfinite(value) or value <= 0:
        raise ValueError(f"Expected a finite positive number but got {value}.")


def assert_is_positive_int(value: Any) -> None:
    """Raises an exception if ``value`` is not an integer greater than zero.

    :param value: The input to check.
    :raises: :class:`TypeError` if ``value`` is not an integer.
    :raises: :class:`ValueError` if ``value`` is smaller than one.
    """

    assert_is_int(value)
    if value < 1:
        raise ValueError(f"Expected a positive integer but got {value}.")


def assert_is_dimension_pair(n: Any, j: Any) -> None:
    """Raises an exception unless ``1 <= j <= n`` for integers ``n`` and ``j``.

    :raises: :class:`TypeError` if ``n`` or ``j`` is not an integer.
    :raises: :class:`ValueError` if ``j`` is out of range.
    """

    assert_is_positive_int(n)
    assert_is_int(j)
    if not 1 <= j <= n:
        raise ValueError(f"Subspace dimension must satisfy 1 <= j <= n, got {j=} and {n=}.")


def assert_is_strictly_decreasing(values: Any) -> None:
    """Raises an exception if ``values`` is empty or not strictly decreasing.

    :param values: A sequence of numbers.
    :raises: :class:`ValueError` if the sequence is empty or not strictly decreasing.
    """

    values = np.asarray(values, dtype=float)
    if values.ndim != 1 or values.size == 0:
        raise ValueError("Expected a non-empty one-dimensional sequence.")
    if np.any(np.diff(values) >= 0):
        raise ValueError(f"Expected a strictly decreasing sequence but got {values.tolist()}.")


def assert_is_matrix(value: Any, rows: int | None = None, columns: int | None = None) -> None:
    """Raises an exception if ``value`` is not a finite two-dimensional array of the given shape.

    :param value: The input to check.
    :param rows: Expected number of rows, or ``None`` to accept any.
    :param columns: Expected number of columns, or ``None`` to accept any.
    :raises: :class:`TypeError` if ``value`` is not a :class:`numpy.ndarray`.
    :raises: :class:`ValueError` if the shape is wrong or an entry is not finite.
    """

    if not isinstance(value, np.ndarray):
        raise TypeError(f"Expected a numpy array but got a '{type(value)}'.")
    if value.ndim != 2:
        raise ValueError(f"Expected a two-dimensional array but got shape {value.shape}.")
    if rows is not None and value.shape[0] != rows:
        raise ValueError(f"Expected {rows} rows but got {value.shape[0]}.")
    if columns is not None and value.shape[1] != columns:
        raise ValueError(f"Expected {columns} columns but got {value.shape[1]}.")
    if not np.all(np.isfinite(value)):
        raise ValueError("Array contains non-finite entries.")


def assert_is_unit_vectors(value: Any, dim: int) -> None:
    """Raises an exception unless every row of ``value`` is a unit vector in ``dim`` dimensions.

    :param value: A ``(m, dim)`` array.
    :param dim: The ambient dimension.
    :raises: :class:`ValueError` if a row deviates from unit length by more than
        :data:`UNIT_NORM_TOLERANCE`.
    """

    assert_is_matrix(value, columns=dim)
    deviation = np.abs(np.linalg.norm(value, axis=1) - 1.0)
    if deviation.size and deviation.max() > UNIT_NORM_TOLERANCE:
        raise ValueError(f"Directions must be unit vectors (max norm deviation {deviation.max():.3e}).")


def assert_is_orthonormal(value: Any) -> None:
    """Raises an exception unless the columns of ``value`` are orthonormal.

    :param value: A ``(n, j)`` array.
    :raises: :class:`ValueError` if ``‖BᵀB - I‖_max`` exceeds :data:`ORTHONORMAL_TOLERANCE`
        or ``j > n``.
    """

    assert_is_matrix(value)
    n, j = value.shape
    if j < 1 or j > n:
        raise ValueError(f"A basis of a subspace of R^{n} cannot have {j} columns.")
    error = np.abs(value.T @ value - np.eye(j)).max()
    if error > ORTHONORMAL_TOLERANCE:
        raise ValueError(f"Basis columns are not orthonormal (max deviation {error:.3e}).")


def assert_is_string(value: Any) -> None:
    """Raises an exception if ``value`` is not a string.

    :param value: The input to check.
    :raises: :class:`TypeError` if ``value`` is not a string.
    """

    if not isinstance(value, str):
        raise TypeError(f"Expected the input to be a string but got a '{type(value)}'.")


def assert_is_nonempty_string(value: Any) -> None:
    """Raises an exception if ``value`` is not a string of length >= 1.

    :param value: The input to check.
    :raises: :class:`TypeError` if ``value`` is not a string.
    :raises: :class:`ValueError` if ``value`` is an empty string.
    """

    assert_is_string(value)

    if not len(value) > 0:
        raise ValueError(f"Input string cannot be empty.")


def assert_is_callable(value: Any) -> None:
    """Raises an exception if ``value`` is not callable.

    :param value: The input to check.
    :raises: :class:`TypeError` if ``value`` is not callable.
    """

    if not callable(value):
        raise TypeError("Object is not callable.")


def assert_is_callable_and_has_first_param_sender(value: Any) -> None:
    """Raises an exception if ``value` is not a callable which has ``sender`` as its first positional argument.

    :param value: The input to check.
    :raises: :class:`TypeError` if ``value`` is not callable.
    :raises: :class:`ValueError` if ``value` does not accept ``sender`` as its first positional argument.
    """

    assert_is_callable(value)

    sig = inspect.signature(value)
    params = list(sig.parameters)

    if len(params) == 0 or params[0] != 'sender':
        raise ValueError("Callable must accept 'sender' as the first parameter.")


def assert_is_callable_and_accepts_kwargs(value: Any) -> None:
    """Raises an exception if ``value`` is not a callable which accepts keyword arguments.

    :param value: The input to check.
    :raises: :class:`TypeError` if ``value`` is not callable.
    :raises: :class:`ValueError` if ``value`` does not accept keyword arguments.
    """

    assert_is_callable(value)

    parameters = inspect.signature(value).parameters.values()
    if not any(p for p in parameters if p.kind == p.VAR_KEYWORD):
        raise ValueError("Function must accept keyword arguments (**kwargs).")
