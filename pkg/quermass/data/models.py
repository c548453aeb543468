"""Data classes used for parsing, validating and serializing the JSON that enters and
leaves quermass.

Classes:
    - :class:`PolytopeSpec`, :class:`EllipsoidSpec`, :class:`BallSpec`: body specification files.
    - :class:`PowerPhiSpec`, :class:`ExpPhiSpec`: selection of an Orlicz function.
    - :class:`Estimate`: a Monte Carlo value with its standard error.
    - :class:`VariationEstimate`: a first-variation difference-quotient table.
    - :class:`CheckResult`: the outcome of one verification check.
    - :class:`Tolerances`, :class:`SuiteConfig`: harness configuration.
    - :class:`Report`: the machine-readable verification report.
"""

from enum import Enum
from typing import Any, Dict, List, Literal, Optional, Union

from typing_extensions import Annotated

from pydantic import BaseModel, ConfigDict, Field, RootModel, model_validator

from quermass.data.validators import (
    Dimension,
    NonEmptyString,
    PositiveFloat,
    PositiveInt,
    PowerExponent,
    SquareMatrix,
    StepSchedule,
    VertexList,
)


#: Version tag written into every report.
REPORT_SCHEMA = "quermass-report/1"


class PolytopeSpec(BaseModel):
    """A polytope given by its vertices, ``{"type": "polytope", "vertices": [[x, ...], ...]}``."""

    model_config = ConfigDict(extra="forbid")

    type: Literal["polytope"]
    #: Vertex coordinates, one list per vertex.
    vertices: VertexList
    #: Optional display name.
    name: Optional[NonEmptyString] = None


class EllipsoidSpec(BaseModel):
    """An ellipsoid ``{x : xᵀM⁻¹x <= 1}`` given by its shape matrix ``M``, so that ``h(u) = √(uᵀMu)``."""

    model_config = ConfigDict(extra="forbid")

    type: Literal["ellipsoid"]
    #: The symmetric positive-definite shape matrix.
    shape: SquareMatrix
    #: Optional display name.
    name: Optional[NonEmptyString] = None


class BallSpec(BaseModel):
    """A centered euclidean ball, ``{"type": "ball", "radius": r, "dim": n}``."""

    model_config = ConfigDict(extra="forbid")

    type: Literal["ball"]
    #: Radius of the ball.
    radius: PositiveFloat
    #: Ambient dimension.
    dim: Dimension
    #: Optional display name.
    name: Optional[NonEmptyString] = None


BodySpec = Annotated[Union[PolytopeSpec, EllipsoidSpec, BallSpec], Field(discriminator="type")]


class BodyDocument(RootModel[BodySpec]):
    """The content of a body specification file."""


class PowerPhiSpec(BaseModel):
    """``φ(t) = t^p`` for ``p >= 1``, ``{"family": "power", "p": 2}``."""

    model_config = ConfigDict(extra="forbid")

    family: Literal["power"]
    #: The exponent.
    p: PowerExponent = 1.0


class ExpPhiSpec(BaseModel):
    """``φ(t) = (e^{αt} - 1) / (e^α - 1)`` for ``α > 0``, ``{"family": "exp", "alpha": 1.5}``."""

    model_config = ConfigDict(extra="forbid")

    family: Literal["exp"]
    #: The rate.
    alpha: PositiveFloat = 1.0


PhiSpec = Annotated[Union[PowerPhiSpec, ExpPhiSpec], Field(discriminator="family")]


class PhiDocument(RootModel[PhiSpec]):
    """A standalone φ selection, as passed to ``--phi``."""


class Estimate(BaseModel):
    """A Monte Carlo estimate of a Grassmannian quantity.

    ``value`` is the final (powered) quantity; ``raw_mean`` is the sample mean of the
    integrand before the outer ``(·)^{-1/n}``. ``stderr`` is propagated from
    ``raw_stderr`` by the delta method.
    """

    #: The estimated quantity.
    value: float
    #: Standard error of ``value``.
    stderr: float = Field(..., ge=0)
    #: Number of Grassmannian samples, ``1`` when no sampling was needed.
    samples: PositiveInt
    #: Seed of the sample stream.
    seed: int
    #: Sample mean of the integrand.
    raw_mean: float
    #: Standard error of ``raw_mean``.
    raw_stderr: float = Field(..., ge=0)


class VariationEstimate(BaseModel):
    """Difference quotients of a functional along an Orlicz combination ``K +_φ εL``."""

    #: The extrapolated quotient scaled to the mixed quantity it estimates.
    value: float
    #: The steps ``ε``, strictly decreasing.
    epsilons: List[float]
    #: The difference quotients, one per step.
    quotients: List[float]
    #: Richardson limit of ``quotients``.
    extrapolated: float
    #: Empirical leading order of the quotient error (``None`` if it could not be fitted).
    fitted_order: Optional[float] = None
    #: The value the variation is compared against, when one was computed.
    reference: Optional[float] = None
    #: Whether the quotients are monotone in ``ε``.
    monotone: bool = True
    #: Whether Monte Carlo noise in the quotients exceeds their variation.
    noisy: bool = False
    #: Number of samples needed to bring noise below signal, when ``noisy``.
    required_samples: Optional[int] = None

    @property
    def relative_error(self) -> float:
        """``|value - reference| / |reference|``, or ``nan`` without a reference."""

        if self.reference is None or self.reference == 0:
            return float("nan")
        return abs(self.value - self.reference) / abs(self.reference)


class CheckStatus(str, Enum):
    """Outcome of a check."""

    PASS = "pass"
    FAIL = "fail"
    INCONCLUSIVE = "inconclusive"
    #: A conjecture probe saw a nominal violation that survived a re-run.
    CANDIDATE = "candidate"


class CheckResult(BaseModel):
    """The outcome of a single verification check.

    Carries every number needed to recompute ``status`` offline:

    * identity: pass iff ``|lhs - rhs| <= max(abs_tol, stderr_factor·stderr)``;
    * inequality: pass iff ``lhs >= rhs - max(abs_tol, stderr_factor·stderr)``;
    * both are downgraded to inconclusive when ``stderr > 0.1·max(|lhs|, |rhs|)``.

    A result with ``stderr > |lhs - rhs|`` lies inside the pass allowance whenever
    ``stderr_factor >= 1``, so the noise gate above is the only way a Monte Carlo result
    becomes inconclusive. Identities carry it as well as inequalities: an identity matched
    within ten percent noise confirms nothing either.
    """

    #: Unique, sortable identifier, e.g. ``quermass.orlicz_minkowski[cube,cube*2,power2,j=2]``.
    check_id: NonEmptyString
    #: One of ``identity``, ``inequality`` or ``probe``.
    kind: Literal["identity", "inequality", "probe"]
    status: CheckStatus
    lhs: float
    rhs: float
    #: ``lhs - rhs`` (relative for probes).
    margin: float
    #: Standard error of ``lhs - rhs``.
    stderr: float = 0.0
    abs_tol: float = 0.0
    stderr_factor: float = 3.0
    #: Echoed parameters of the check.
    config: Dict[str, Any] = Field(default_factory=dict)

    @staticmethod
    def _stderr_inflated(lhs: float, rhs: float, stderr: float) -> bool:
        return stderr > 0.1 * max(abs(lhs), abs(rhs))

    @classmethod
    def identity(cls, check_id: str, lhs: float, rhs: float, stderr: float = 0.0,
                 abs_tol: float = 0.0, stderr_factor: float = 3.0, **config: Any) -> 'CheckResult':
        """Builds the result of an identity ``lhs = rhs``."""

        allowance = max(abs_tol, stderr_factor * stderr)
        if cls._stderr_inflated(lhs, rhs, stderr):
            status = CheckStatus.INCONCLUSIVE
        elif abs(lhs - rhs) <= allowance:
            status = CheckStatus.PASS
        else:
            status = CheckStatus.FAIL
        return cls(check_id=check_id, kind="identity", status=status, lhs=lhs, rhs=rhs,
                   margin=lhs - rhs, stderr=stderr, abs_tol=abs_tol,
                   stderr_factor=stderr_factor, config=config)

    @classmethod
    def inequality(cls, check_id: str, lhs: float, rhs: float, stderr: float = 0.0,
                   abs_tol: float = 0.0, stderr_factor: float = 3.0, **config: Any) -> 'CheckResult':
        """Builds the result of an inequality ``lhs >= rhs``."""

        allowance = max(abs_tol, stderr_factor * stderr)
        if cls._stderr_inflated(lhs, rhs, stderr):
            status = CheckStatus.INCONCLUSIVE
        elif lhs >= rhs - allowance:
            status = CheckStatus.PASS
        else:
            status = CheckStatus.FAIL
        return cls(check_id=check_id, kind="inequality", status=status, lhs=lhs, rhs=rhs,
                   margin=lhs - rhs, stderr=stderr, abs_tol=abs_tol,
                   stderr_factor=stderr_factor, config=config)

    @property
    def passed(self) -> bool:
        return self.status is CheckStatus.PASS


class Tolerances(BaseModel):
    """Tolerances of the verification checks."""

    model_config = ConfigDict(extra="forbid")

    #: Identities evaluated by exact atom sums.
    atom_sum: PositiveFloat = 1e-9
    #: Relative tolerance of quantities built on outer-polytope volumes.
    outer_volume: PositiveFloat = 1e-3
    #: Number of standard errors allowed in Monte Carlo comparisons.
    stderr_factor: PositiveFloat = 3.0
    #: Relative tolerance of the first variation of volume.
    variation_volume: PositiveFloat = 0.03
    #: Relative tolerance of the first variation of affine quermassintegrals.
    variation_quermass: PositiveFloat = 0.05
    #: Absolute tolerance of the scalar limit ratio.
    limit_ratio: PositiveFloat = 1e-4


class SuiteConfig(BaseModel):
    """Configuration of a verification run."""

    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    #: Ambient dimension of the Grassmannian checks.
    n: Dimension = 3
    #: Subspace dimension of the Grassmannian checks.
    j: PositiveInt = 2
    #: Number of Haar samples per Grassmannian estimate.
    grassmann_samples: PositiveInt = Field(20000, alias="N_grassmann")
    #: Number of sphere directions for outer polytopes and Hausdorff distances.
    directions: PositiveInt = Field(8192, alias="N_directions")
    #: Number of directions for outer polygons inside a projection plane.
    projection_directions: PositiveInt = 512
    #: Seed shared by every Monte Carlo check.
    seed: int = 0
    #: Steps of the first-variation difference quotients.
    eps_schedule: StepSchedule = [0.08, 0.04, 0.02, 0.01, 0.005]
    #: Coefficients ``ε`` of the Orlicz-Brunn-Minkowski and decomposition checks.
    eps_grid: List[PositiveFloat] = [0.3, 1.0]
    #: The Orlicz functions to check.
    phis: List[PhiSpec] = Field(
        default_factory=lambda: [
            PowerPhiSpec(family="power", p=1.0),
            PowerPhiSpec(family="power", p=2.0),
            ExpPhiSpec(family="exp", alpha=1.0),
        ],
        alias="phi",
    )
    tolerances: Tolerances = Field(default_factory=Tolerances)
    #: Extra body files added to the corpus.
    body_paths: List[str] = Field(default_factory=list)

    @model_validator(mode="before")
    @classmethod
    def _wrap_single_phi(cls, data: Any) -> Any:
        # {"phi": {"family": ...}} selects a single function
        if isinstance(data, dict):
            for key in ("phi", "phis"):
                if isinstance(data.get(key), dict):
                    data = {**data, key: [data[key]]}
        return data

    @model_validator(mode="after")
    def _check_dimensions(self) -> 'SuiteConfig':
        if self.j > self.n:
            raise ValueError(f"Subspace dimension j={self.j} exceeds ambient dimension n={self.n}.")
        if not self.phis:
            raise ValueError("At least one Orlicz function is required.")
        return self


class ReportSummary(BaseModel):
    """Number of checks per status."""

    passed: int = Field(0, serialization_alias="pass")
    fail: int = 0
    inconclusive: int = 0
    candidate: int = 0


class Report(BaseModel):
    """A complete verification report."""

    report_schema: str = Field(REPORT_SCHEMA, serialization_alias="schema")
    #: Name of the suite that was run.
    suite: str
    config: SuiteConfig
    #: Results, sorted by ``check_id``.
    checks: List[CheckResult]
    summary: ReportSummary

    @property
    def ok(self) -> bool:
        """``True`` iff no check failed."""

        return self.summary.fail == 0
