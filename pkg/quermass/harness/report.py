"""Building and writing verification reports.

The JSON report is the serialized :class:`~quermass.data.models.Report`. The CSV
report has one row per check with the columns of :data:`CSV_COLUMNS`.
"""

from pathlib import Path
from typing import Iterable, Union
import csv
import logging

from quermass.data.models import CheckResult, CheckStatus, Report, ReportSummary, SuiteConfig


log = logging.getLogger(__name__)


CSV_COLUMNS = ("check_id", "status", "lhs", "rhs", "margin", "stderr")


def summarize(results: Iterable[CheckResult]) -> ReportSummary:
    """Counts results per status."""

    counts = {status: 0 for status in CheckStatus}
    for result in results:
        counts[result.status] += 1
    return ReportSummary(passed=counts[CheckStatus.PASS], fail=counts[CheckStatus.FAIL],
                         inconclusive=counts[CheckStatus.INCONCLUSIVE], candidate=counts[CheckStatus.CANDIDATE])


def build_report(suite: str, config: SuiteConfig, results: Iterable[CheckResult]) -> Report:
    """Assembles a report with results sorted by ``check_id``.

    :raises: :class:`ValueError` if two results share a ``check_id``.
    """

    results = sorted(results, key=lambda result: result.check_id)
    for previous, current in zip(results, results[1:]):
        if previous.check_id == current.check_id:
            raise ValueError(f"Duplicate check id '{current.check_id}'.")
    return Report(suite=suite, config=config, checks=results, summary=summarize(results))


def report_json(report: Report) -> str:
    return report.model_dump_json(indent=2, by_alias=True)


def write_json(report: Report, path: Union[str, Path]) -> None:
    """Writes the report as JSON to ``path``."""

    path = Path(path)
    path.write_text(report_json(report) + "\n", encoding="utf-8")
    log.info(f"Wrote {len(report.checks)} results to '{path}'.")


def write_csv(report: Report, path: Union[str, Path]) -> None:
    """Writes one row per check to ``path``."""

    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as f:
        writer = csv.DictWriter(f, fieldnames=CSV_COLUMNS)
        writer.writeheader()
        for result in report.checks:
            writer.writerow({
                "check_id": result.check_id,
                "status": result.status.value,
                "lhs": repr(result.lhs),
                "rhs": repr(result.rhs),
                "margin": repr(result.margin),
                "stderr": repr(result.stderr),
            })
    log.info(f"Wrote {len(report.checks)} rows to '{path}'.")
