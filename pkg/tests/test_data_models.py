import json
import math

import pytest
from pydantic import ValidationError

from quermass.data.models import (
    REPORT_SCHEMA,
    BallSpec,
    BodyDocument,
    CheckResult,
    CheckStatus,
    EllipsoidSpec,
    ExpPhiSpec,
    PhiDocument,
    PolytopeSpec,
    PowerPhiSpec,
    Report,
    ReportSummary,
    SuiteConfig,
    VariationEstimate,
)


class TestBodyDocument:

    def test_polytope(self):
        spec = BodyDocument.model_validate({"type": "polytope", "vertices": [[1, 0], [0, 1], [-1, -1]]}).root
        assert isinstance(spec, PolytopeSpec)
        assert spec.name is None

    def test_ellipsoid(self):
        spec = BodyDocument.model_validate_json('{"type": "ellipsoid", "shape": [[1, 0], [0, 2]], "name": "e"}').root
        assert isinstance(spec, EllipsoidSpec)
        assert spec.name == "e"

    def test_ball(self):
        spec = BodyDocument.model_validate({"type": "ball", "radius": 2, "dim": 3}).root
        assert isinstance(spec, BallSpec)
        assert spec.radius == 2.0

    @pytest.mark.parametrize("data", [
        {"type": "cylinder", "radius": 1},
        {"type": "polytope", "vertices": []},
        {"type": "polytope", "vertices": [[1, 0], [0, 1, 2]]},
        {"type": "polytope", "vertices": [[1, 0, 0, 0, 0]]},
        {"type": "ball", "radius": -1, "dim": 2},
        {"type": "ball", "radius": 1, "dim": 5},
        {"type": "ellipsoid", "shape": [[1, 0], [0]]},
        {"type": "ball", "radius": 1, "dim": 2, "center": [0, 0]},
        {"type": "polytope", "vertices": [[1]], "name": ""},
    ])
    def test_invalid(self, data):
        with pytest.raises(ValidationError):
            BodyDocument.model_validate(data)

    def test_syntax_error(self):
        with pytest.raises(ValidationError):
            BodyDocument.model_validate_json('{"type": "ball", ')


class TestPhiDocument:

    def test_defaults(self):
        assert PhiDocument.model_validate({"family": "power"}).root.p == 1.0
        assert PhiDocument.model_validate({"family": "exp"}).root.alpha == 1.0

    def test_string_parameter_is_coerced(self):
        assert PhiDocument.model_validate({"family": "power", "p": "2.5"}).root.p == 2.5

    @pytest.mark.parametrize("data", [
        {"family": "power", "p": 0.5},
        {"family": "exp", "alpha": 0},
        {"family": "log"},
        {"family": "power", "alpha": 1},
    ])
    def test_invalid(self, data):
        with pytest.raises(ValidationError):
            PhiDocument.model_validate(data)


class TestSuiteConfig:

    def test_defaults(self):
        config = SuiteConfig()
        assert (config.n, config.j) == (3, 2)
        assert config.grassmann_samples == 20000
        assert config.directions == 8192
        assert [type(phi) for phi in config.phis] == [PowerPhiSpec, PowerPhiSpec, ExpPhiSpec]
        assert config.tolerances.atom_sum == 1e-9

    def test_aliases_and_names(self):
        by_alias = SuiteConfig.model_validate({"N_grassmann": 100, "N_directions": 64})
        by_name = SuiteConfig.model_validate({"grassmann_samples": 100, "directions": 64})
        assert by_alias == by_name

    def test_single_phi_is_wrapped(self):
        config = SuiteConfig.model_validate({"phi": {"family": "exp", "alpha": 2}})
        assert len(config.phis) == 1
        assert config.phis[0].alpha == 2.0

    def test_j_exceeding_n(self):
        with pytest.raises(ValidationError):
            SuiteConfig(n=2, j=3)

    @pytest.mark.parametrize("data", [
        {"n": 5},
        {"phi": []},
        {"eps_schedule": [0.01, 0.02]},
        {"eps_schedule": [0.1, 1e-5]},
        {"eps_grid": [0.0]},
        {"tolerances": {"atom_sum": 0}},
        {"unknown": 1},
    ])
    def test_invalid(self, data):
        with pytest.raises(ValidationError):
            SuiteConfig.model_validate(data)

    def test_round_trip_through_dump(self):
        config = SuiteConfig(n=2, j=1, seed=7)
        assert SuiteConfig.model_validate(config.model_dump()) == config


class TestCheckResult:

    def test_identity(self):
        assert CheckResult.identity("a", 1.0, 1.0 + 1e-10, abs_tol=1e-9).status is CheckStatus.PASS
        assert CheckResult.identity("a", 1.0, 1.1, abs_tol=1e-9).status is CheckStatus.FAIL

    def test_identity_within_stderrs(self):
        result = CheckResult.identity("a", 1.0, 1.02, stderr=0.01)
        assert result.status is CheckStatus.PASS
        assert result.margin == pytest.approx(-0.02)

    def test_inequality(self):
        assert CheckResult.inequality("a", 1.0, 0.5).passed
        assert CheckResult.inequality("a", 1.0, 1.0 + 1e-4, abs_tol=1e-3).passed
        assert CheckResult.inequality("a", 1.0, 1.1).status is CheckStatus.FAIL

    def test_inflated_stderr_is_inconclusive(self):
        result = CheckResult.inequality("a", 1.0, 0.5, stderr=0.2)
        assert result.status is CheckStatus.INCONCLUSIVE

    def test_noisy_identity_never_passes(self):
        # |lhs - rhs| is inside 3 stderrs, but the stderr is 15% of the values
        result = CheckResult.identity("a", 1.0, 1.05, stderr=0.15)
        assert result.status is CheckStatus.INCONCLUSIVE
        assert CheckResult.identity("a", 1.0, 1.05, stderr=0.05).passed

    def test_config_is_echoed(self):
        result = CheckResult.identity("a", 1.0, 1.0, K="square", eps=0.3)
        assert result.config == {"K": "square", "eps": 0.3}
        assert result.kind == "identity"


class TestReport:

    def test_serialization_aliases(self):
        summary = ReportSummary(passed=2, fail=1)
        report = Report(suite="all", config=SuiteConfig(), checks=[], summary=summary)
        data = json.loads(report.model_dump_json(by_alias=True))
        assert data["schema"] == REPORT_SCHEMA
        assert data["summary"] == {"pass": 2, "fail": 1, "inconclusive": 0, "candidate": 0}
        assert not report.ok


def test_variation_relative_error():
    estimate = VariationEstimate(value=1.02, epsilons=[0.1], quotients=[1.0], extrapolated=1.0, reference=1.0)
    assert estimate.relative_error == pytest.approx(0.02)
    assert math.isnan(estimate.model_copy(update={"reference": None}).relative_error)
