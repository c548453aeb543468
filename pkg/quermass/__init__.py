"""
Quermass
========

Quermass is a python library for computing Orlicz linear combinations of convex bodies,
Orlicz and :math:`L_p` mixed volumes, affine quermassintegrals and Orlicz mixed affine
quermassintegrals, together with a harness that checks the identities and inequalities
these quantities satisfy, for bodies in dimension at most four.
"""

from .components.bodies import Ellipsoid, Polytope
from .components.grassmannian import affine_quermassintegral, orlicz_mixed_affine_quermassintegral
from .components.orlicz import make_normalized_exp, make_power, orlicz_sum
