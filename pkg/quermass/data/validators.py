"""Custom validators used for type annotations and data model instance validation."""

from typing import List

from typing_extensions import Annotated

from pydantic import AfterValidator


def non_empty_string(value: str) -> str:
    """Ensures that ``value`` is a non-empty string."""

    assert len(value) > 0, f"Expected a non-empty string."
    return value

NonEmptyString = Annotated[str, AfterValidator(non_empty_string)]


def positive(value: float) -> float:
    """Ensures that ``value`` is strictly positive."""

    assert value > 0, f"Expected a positive number, got {value}."
    return value

PositiveFloat = Annotated[float, AfterValidator(positive)]
PositiveInt = Annotated[int, AfterValidator(positive)]


def at_least_one(value: float) -> float:
    """Ensures that ``value >= 1``, as required of an ``L_p`` exponent."""

    assert value >= 1, f"Expected a value of at least 1, got {value}."
    return value

PowerExponent = Annotated[float, AfterValidator(at_least_one)]


def ambient_dimension(value: int) -> int:
    """Ensures that ``value`` is a supported ambient dimension (1 to 4)."""

    assert 1 <= value <= 4, f"Only dimensions 1 <= n <= 4 are supported, got {value}."
    return value

Dimension = Annotated[int, AfterValidator(ambient_dimension)]


def vertex_list(value: List[List[float]]) -> List[List[float]]:
    """Ensures that ``value`` is a non-empty list of points of equal, supported dimension."""

    assert len(value) > 0, "Expected at least one vertex."
    dims = {len(vertex) for vertex in value}
    assert len(dims) == 1, f"All vertices must have the same dimension, got dimensions {sorted(dims)}."
    ambient_dimension(dims.pop())
    return value

VertexList = Annotated[List[List[float]], AfterValidator(vertex_list)]


def square_matrix(value: List[List[float]]) -> List[List[float]]:
    """Ensures that ``value`` is a square matrix of supported size."""

    size = len(value)
    ambient_dimension(size)
    assert all(len(row) == size for row in value), f"Expected a {size}x{size} matrix."
    return value

SquareMatrix = Annotated[List[List[float]], AfterValidator(square_matrix)]


def strictly_decreasing(value: List[float]) -> List[float]:
    """Ensures that ``value`` is a non-empty, strictly decreasing list of steps in ``[1e-4, 1]``."""

    assert len(value) > 0, "Expected at least one step."
    assert all(a > b for a, b in zip(value, value[1:])), f"Steps must be strictly decreasing, got {value}."
    assert value[-1] >= 1e-4, f"The smallest step must be at least 1e-4, got {value[-1]}."
    assert value[0] <= 1, f"The largest step must be at most 1, got {value[0]}."
    return value

StepSchedule = Annotated[List[float], AfterValidator(strictly_decreasing)]
