"""Quermass components are the geometric objects and the quantities computed from them.

Quermass has four component modules:

* :mod:`~quermass.components.bodies`: convex bodies through their support functions
* :mod:`~quermass.components.orlicz`: Orlicz functions and Orlicz linear combinations
* :mod:`~quermass.components.mixed_volumes`: volumes and mixed volumes
* :mod:`~quermass.components.grassmannian`: Haar sampling and affine quermassintegrals

Let's go through some examples.

.. _guide-bodies:

Bodies
------

A body is anything with a support function ``h_K(u) = max_{x ∈ K} ⟨x, u⟩`` that contains the
origin in its interior. Polytopes are given by points whose hull they are, ellipsoids by
their shape matrix:

.. code-block:: python

    from quermass import Ellipsoid, Polytope

    square = Polytope([[-1, -1], [1, -1], [1, 1], [-1, 1]], name="square")
    disk = Ellipsoid.ball(1.0, 2, name="disk")

    print(square.support([1.0, 0.0]))
    # Output: 1.0

Bodies can also be read from JSON specification files with
:func:`~quermass.components.bodies.load_body`.

.. note:: A body whose origin lies on or outside its boundary raises
    :class:`~quermass.components.common.InvalidBodyException`.

.. _guide-orlicz:

Orlicz sums
-----------

An :class:`~quermass.components.orlicz.OrliczFunction` is increasing and convex with
``φ(0) = 0`` and ``φ(1) = 1``. The Orlicz sum ``K +_φ εL`` is known through its support
function, which is solved for direction by direction:

.. code-block:: python

    from quermass import make_power, orlicz_sum
    from quermass.components.orlicz import CombinationWeights

    combined = orlicz_sum(square, disk, CombinationWeights.epsilon(0.5), make_power(2))
    print(combined.support([1.0, 0.0]))
    # Output: 1.224744871391589

Mixed volumes and quermassintegrals
-----------------------------------

Mixed volumes take a polytope first argument. Affine quermassintegrals are Monte Carlo
estimates over Haar-distributed subspaces, returned with their standard error:

.. code-block:: python

    from quermass import affine_quermassintegral
    from quermass.components.mixed_volumes import orlicz_mixed_volume

    print(orlicz_mixed_volume(square, disk, make_power(2)))
    # Output: 4.0

    from quermass.harness.corpus import cube

    estimate = affine_quermassintegral(cube(3), j=2, samples=20000, seed=0)
    print(estimate.value, estimate.stderr)

Estimates on the same ``seed`` use the same subspaces, so that quantities compared with
each other share their sampling noise.
"""
