import csv
import json

import pytest

from quermass.data.models import REPORT_SCHEMA, CheckResult, CheckStatus, SuiteConfig
from quermass.harness.corpus import ball, box, build_corpus, cube, polytopes_of_dimension
from quermass.harness.report import build_report, summarize, write_csv, write_json
from quermass.harness.suite import Suite, run_suite


@pytest.fixture
def corpus():
    return {"square": cube(2), "rectangle": box((2.0, 1.0), "rectangle"), "ball2d": ball(2)}


@pytest.fixture
def suite(small_config, corpus):
    return Suite(small_config, "orlicz", corpus=corpus)


def _results():
    return [
        CheckResult.identity("b", 1.0, 1.0),
        CheckResult.inequality("a", 0.5, 1.0),
        CheckResult.identity("c", 1.0, 2.0, stderr=1.0),
    ]


class TestSuite:

    def test_unknown_name(self, small_config):
        with pytest.raises(ValueError):
            Suite(small_config, "everything")

    def test_plan(self, suite):
        plan = suite.plan
        assert "orlicz.solver_residual" in plan
        assert "volume.minkowski[square,rectangle]" in plan
        assert not any(check_id.startswith("quermass.") for check_id in plan)

    def test_register_duplicate(self, suite):
        suite.register("custom", lambda: CheckResult.identity("custom", 1.0, 1.0))
        with pytest.raises(ValueError):
            suite.register("custom", lambda: CheckResult.identity("custom", 1.0, 1.0))

    def test_run(self, suite):
        started, completed, reports = [], [], []
        suite.signal_check_started.connect(lambda sender, **kwargs: started.append(kwargs["check_id"]))
        suite.signal_check_completed.connect(lambda sender, **kwargs: completed.append(kwargs["result"]))
        suite.signal_suite_completed.connect(lambda sender, **kwargs: reports.append(kwargs["report"]))

        report = suite.run(workers=2)

        ids = [result.check_id for result in report.checks]
        assert ids == sorted(ids)
        assert set(ids) == set(suite.plan)
        assert sorted(started) == ids
        assert len(completed) == len(ids)
        assert reports == [report]
        summary = report.summary
        assert summary.passed + summary.fail + summary.inconclusive + summary.candidate == len(ids)

    def test_failing_check_is_reported(self, small_config, corpus):
        suite = Suite(small_config, "orlicz", corpus=corpus)
        suite.plan.clear()

        def broken():
            raise ZeroDivisionError("boom")

        suite.register("broken", broken)
        suite.register("renamed", lambda: CheckResult.identity("other", 1.0, 1.0))
        report = suite.run(workers=1)
        broken_result, renamed = report.checks
        assert broken_result.status is CheckStatus.FAIL
        assert broken_result.config["error"] == "ZeroDivisionError: boom"
        assert renamed.check_id == "renamed"
        assert not report.ok

    def test_deterministic(self, small_config, corpus):
        first = Suite(small_config, "orlicz", corpus=corpus).run(workers=2)
        second = Suite(small_config, "orlicz", corpus=corpus).run(workers=1)
        assert first.model_dump_json() == second.model_dump_json()

    @pytest.mark.slow
    def test_quermass_suite(self, small_config):
        report = run_suite(small_config, "quermass")
        assert report.checks
        assert all(result.check_id.startswith("quermass.") for result in report.checks)
        assert summarize(report.checks) == report.summary


class TestReport:

    def test_sorted_and_summarized(self, small_config):
        report = build_report("orlicz", small_config, _results())
        assert [result.check_id for result in report.checks] == ["a", "b", "c"]
        assert report.summary.passed == 1
        assert report.summary.fail == 1
        assert report.summary.inconclusive == 1

    def test_duplicate_ids(self, small_config):
        with pytest.raises(ValueError):
            build_report("orlicz", small_config, _results() + [CheckResult.identity("a", 1.0, 1.0)])

    def test_write_json(self, small_config, tmp_path):
        path = tmp_path / "report.json"
        write_json(build_report("orlicz", small_config, _results()), path)
        data = json.loads(path.read_text())
        assert data["schema"] == REPORT_SCHEMA
        assert data["summary"]["pass"] == 1
        assert [check["check_id"] for check in data["checks"]] == ["a", "b", "c"]
        assert data["config"]["n"] == 2

    def test_write_csv(self, small_config, tmp_path):
        path = tmp_path / "report.csv"
        write_csv(build_report("orlicz", small_config, _results()), path)
        with path.open(newline="") as f:
            rows = list(csv.DictReader(f))
        assert [row["status"] for row in rows] == ["fail", "pass", "inconclusive"]
        assert float(rows[0]["margin"]) == -0.5


def test_config_defaults_build_a_full_plan():
    plan = Suite(SuiteConfig(n=2, j=1)).plan
    assert any(check_id.startswith("quermass.ball_law") for check_id in plan)
    assert any(check_id.startswith("volume.first_variation") for check_id in plan)


class TestQuermassPlan:

    @pytest.fixture(scope="class")
    def plan(self):
        return Suite(SuiteConfig(n=3, j=1), "quermass").plan

    @staticmethod
    def _ids(plan, family):
        return sorted(check_id for check_id in plan if check_id.startswith(family + "["))

    def test_ball_law_covers_every_subspace_dimension(self, plan):
        assert self._ids(plan, "quermass.ball_law") == [
            "quermass.ball_law[n=3,j=1,1]", "quermass.ball_law[n=3,j=1,2]",
            "quermass.ball_law[n=3,j=2,1]", "quermass.ball_law[n=3,j=2,2]",
        ]

    def test_limit_ratio_grid(self, plan):
        ids = self._ids(plan, "quermass.limit_ratio")
        assert len(ids) == 9
        assert {check_id.rsplit(",", 1)[1] for check_id in ids} == {"j=1]", "j=2]", "j=3]"}

    def test_orlicz_minkowski_on_the_whole_corpus(self, plan):
        polytopes = polytopes_of_dimension(build_corpus(), 3)
        assert len(self._ids(plan, "quermass.orlicz_minkowski")) == 3 * len(polytopes)

    def test_every_eps(self, plan):
        for family in ("quermass.decomposition", "quermass.orlicz_bm", "quermass.orlicz_bm_dilate"):
            ids = self._ids(plan, family)
            assert any(",0.3," in check_id for check_id in ids)
            assert any(",1," in check_id for check_id in ids)

    def test_first_variation_of_cube_and_ball(self, plan):
        ids = self._ids(plan, "quermass.first_variation")
        assert "quermass.first_variation[cube3d,ball3d,power1,j=1]" in ids
        assert len(ids) == 6

    def test_lutwak_chain_steps(self, plan):
        ids = self._ids(plan, "quermass.lutwak_chain")
        assert [check_id.rsplit(",", 1)[1] for check_id in ids] == ["k=2]", "k=3]"]


def test_volume_first_variation_of_square_and_disk():
    plan = Suite(SuiteConfig(n=2, j=1), "orlicz").plan
    assert "volume.first_variation[square,ball2d,power2]" in plan
    assert "volume.decomposition[cross2d,ellipse2d,exp1,1]" in plan
