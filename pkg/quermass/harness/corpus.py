"""The bundled body corpus the verification suites run on.

All bodies contain the origin in their interior. Simplices and random polytopes are
translated so that the mean of their vertices sits at the origin.
"""

from itertools import product
from typing import Dict, Iterable, List
import logging

import numpy as np

from quermass.components.bodies import ConvexBody, Ellipsoid, Polytope, load_body


log = logging.getLogger(__name__)


#: Number of seeded random polytopes per dimension.
RANDOM_POLYTOPES = 5
#: Number of points a random polytope is the hull of.
RANDOM_POINTS = 12


def cube(dim: int, half_width: float = 1.0) -> Polytope:
    vertices = half_width * np.array(list(product((-1.0, 1.0), repeat=dim)))
    return Polytope(vertices, name="square" if dim == 2 else f"cube{dim}d")


def box(half_widths: Iterable[float], name: str) -> Polytope:
    half_widths = np.asarray(list(half_widths), dtype=float)
    vertices = np.array(list(product((-1.0, 1.0), repeat=half_widths.size))) * half_widths
    return Polytope(vertices, name=name)


def cross_polytope(dim: int, radius: float = 1.0) -> Polytope:
    eye = radius * np.eye(dim)
    return Polytope(np.vstack([eye, -eye]), name=f"cross{dim}d")


def simplex(dim: int) -> Polytope:
    vertices = np.vstack([np.zeros(dim), np.eye(dim)])
    return Polytope(vertices - vertices.mean(axis=0), name=f"simplex{dim}d")


def random_polytope(dim: int, index: int, points: int = RANDOM_POINTS) -> Polytope:
    """The hull of ``points`` Gaussian points seeded by ``(dim, index)``, centred at their mean."""

    rng = np.random.default_rng([dim, index])
    cloud = rng.standard_normal((points, dim))
    return Polytope(cloud - cloud.mean(axis=0), name=f"random{dim}d_{index}")


def ball(dim: int, radius: float = 1.0) -> Ellipsoid:
    return Ellipsoid.ball(radius, dim, name=f"ball{dim}d" if radius == 1 else f"ball{dim}d_r{radius:g}")


def build_corpus(body_paths: Iterable[str] = ()) -> Dict[str, ConvexBody]:
    """Builds the corpus, keyed by body name, extended by the given body files.

    :raises: :class:`ValueError` if a body file reuses a corpus name.
    """

    bodies: List[ConvexBody] = [
        Polytope([[-1.0], [1.0]], name="segment"),
        Polytope([[-1.0], [2.0]], name="segment_shifted"),
        ball(1),
        cube(2),
        box((2.0, 1.0), name="rectangle"),
        Ellipsoid(np.diag([1.0, 4.0]), name="ellipse2d"),
        Ellipsoid(np.diag([1.0, 4.0, 9.0]), name="ellipsoid3d"),
    ]
    for dim in (2, 3, 4):
        if dim > 2:
            bodies.append(cube(dim))
        bodies.append(cross_polytope(dim))
        bodies.append(simplex(dim))
        bodies.append(ball(dim))
        bodies.extend(random_polytope(dim, index) for index in range(RANDOM_POLYTOPES))

    corpus = {body.name: body for body in bodies}
    for path in body_paths:
        body = load_body(path)
        if body.name in corpus:
            log.error(f"Body file '{path}' reuses the corpus name '{body.name}'.")
            raise ValueError(f"Duplicate body name '{body.name}'.")
        corpus[body.name] = body
    return corpus


def bodies_of_dimension(corpus: Dict[str, ConvexBody], dim: int) -> List[ConvexBody]:
    """Bodies of the corpus in ``ℝ^dim``, sorted by name."""

    return sorted((body for body in corpus.values() if body.dim == dim), key=lambda body: body.name)


def polytopes_of_dimension(corpus: Dict[str, ConvexBody], dim: int) -> List[Polytope]:
    return [body for body in bodies_of_dimension(corpus, dim) if isinstance(body, Polytope)]
