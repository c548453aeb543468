"""Command-line interface.

Subcommands:

* ``compute phi|quermass|mixed-volume``: a single quantity, printed as JSON;
* ``verify``: runs a verification suite and writes a JSON report and a CSV summary;
* ``sweep``: a first-variation difference-quotient table.

Exit codes: ``0`` when no check failed, ``1`` when one did, ``2`` on invalid input.
"""

from pathlib import Path
from typing import Any, Dict, Sequence
import argparse
import json
import logging
import sys

from pydantic import ValidationError

from quermass.components.bodies import ConvexBody, DirectionSet, Polytope, load_body
from quermass.components.common import InvalidBodyException
from quermass.components.grassmannian import (
    DEFAULT_PROJECTION_DIRECTIONS,
    affine_quermassintegral,
    first_variation_quermass,
    orlicz_mixed_affine_quermassintegral,
)
from quermass.components.mixed_volumes import (
    mixed_volume_V1,
    oracle_volume,
    orlicz_mixed_volume,
    outer_polytope,
)
from quermass.components.orlicz import OrliczFunction, make_phi
from quermass.data.models import PhiDocument, PhiSpec, SuiteConfig
from quermass.harness.corpus import build_corpus
from quermass.harness.report import report_json, write_csv, write_json
from quermass.harness.suite import SUITES, Suite
from quermass.utils.environment import EnvironmentException


log = logging.getLogger(__name__)


EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


class UsageError(Exception):
    """Raised on command-line input that names no body, φ or file that can be used."""


def parse_phi_spec(text: str) -> PhiSpec:
    """Parses ``--phi``: a JSON φ selection (optionally wrapped in ``{"phi": ...}``) or a
    shorthand ``power:2`` / ``exp:1.5``.

    :raises: :class:`UsageError` on an unknown shorthand.
    :raises: :class:`pydantic.ValidationError` on an invalid selection.
    """

    text = text.strip()
    if text.startswith("{"):
        data = json.loads(text)
        if isinstance(data, dict) and "phi" in data:
            data = data["phi"]
        return PhiDocument.model_validate(data).root

    family, _, value = text.partition(":")
    parameter = {"power": "p", "exp": "alpha"}.get(family)
    if parameter is None:
        raise UsageError(f"Unknown φ family '{family}', expected 'power' or 'exp'.")
    data: Dict[str, Any] = {"family": family}
    if value:
        data[parameter] = value
    return PhiDocument.model_validate(data).root


def parse_phi(text: str) -> OrliczFunction:
    return make_phi(parse_phi_spec(text))


def resolve_body(value: str, corpus: Dict[str, ConvexBody]) -> ConvexBody:
    """A body file path or the name of a corpus body.

    :raises: :class:`UsageError` if ``value`` is neither.
    """

    if Path(value).is_file():
        return load_body(value)
    if value in corpus:
        return corpus[value]
    log.error(f"'{value}' is neither a body file nor a corpus body.")
    raise UsageError(f"Unknown body '{value}'.")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="quermass",
                                     description="Orlicz mixed affine quermassintegrals and their inequalities.")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for progress, -vv for details")
    commands = parser.add_subparsers(dest="command", required=True)

    def sampling(subparser):
        subparser.add_argument("--j", type=int, default=2, help="subspace dimension")
        subparser.add_argument("--samples", type=int, default=20000, help="Haar samples")
        subparser.add_argument("--seed", type=int, default=0)
        subparser.add_argument("--dirs", type=int, help="sphere directions of outer polytopes")
        subparser.add_argument("--projection-dirs", type=int, default=DEFAULT_PROJECTION_DIRECTIONS,
                               help="directions of outer polygons inside each subspace")

    compute = commands.add_parser("compute", help="compute a single quantity")
    compute.add_argument("quantity", choices=("phi", "quermass", "mixed-volume"))
    compute.add_argument("--body", required=True, help="body file or corpus name")
    compute.add_argument("--body2", help="second body file or corpus name")
    compute.add_argument("--phi", default="power:1", help='JSON selection or "power:p" / "exp:alpha"')
    compute.add_argument("--out", type=Path, help="write the JSON here instead of stdout")
    sampling(compute)

    verify = commands.add_parser("verify", help="run a verification suite")
    verify.add_argument("--suite", choices=SUITES, default="all")
    verify.add_argument("--config", type=Path, help="JSON suite configuration")
    verify.add_argument("--n", type=int)
    verify.add_argument("--j", type=int)
    verify.add_argument("--samples", type=int)
    verify.add_argument("--dirs", type=int, help="sphere directions of outer polytopes")
    verify.add_argument("--seed", type=int)
    verify.add_argument("--phi", action="append", help="replaces the configured φ grid; repeatable")
    verify.add_argument("--body", action="append", default=[], help="extra body file; repeatable")
    verify.add_argument("--threads", type=int, help="worker threads")
    verify.add_argument("--out", type=Path, help="JSON report path")
    verify.add_argument("--csv", type=Path, help="CSV summary path")

    sweep = commands.add_parser("sweep", help="first-variation difference quotients")
    sweep.add_argument("--body", required=True)
    sweep.add_argument("--body2", required=True)
    sweep.add_argument("--phi", default="power:1")
    sweep.add_argument("--eps", type=float, nargs="+", default=[0.08, 0.04, 0.02, 0.01, 0.005])
    sweep.add_argument("--out", type=Path)
    sampling(sweep)

    return parser


def _emit(text: str, path: Path | None) -> None:
    if path is None:
        print(text)
    else:
        path.write_text(text + "\n", encoding="utf-8")


def _directions(args: argparse.Namespace, body: ConvexBody) -> DirectionSet | None:
    return None if args.dirs is None else DirectionSet.uniform(body.dim, args.dirs, args.seed)


def _compute(args: argparse.Namespace) -> int:
    corpus = build_corpus()
    K = resolve_body(args.body, corpus)
    L = resolve_body(args.body2, corpus) if args.body2 else None
    phi = parse_phi(args.phi)

    if args.quantity == "quermass":
        estimate = affine_quermassintegral(K, args.j, args.samples, args.seed, args.projection_dirs)
        _emit(estimate.model_dump_json(indent=2), args.out)
        return EXIT_OK

    if L is None:
        raise UsageError(f"'compute {args.quantity}' needs --body2.")
    if args.quantity == "phi":
        estimate = orlicz_mixed_affine_quermassintegral(K, L, phi, args.j, args.samples, args.seed, args.projection_dirs,
                                                        allow_outer=True, directions=_directions(args, K))
        _emit(estimate.model_dump_json(indent=2), args.out)
        return EXIT_OK

    first = K if isinstance(K, Polytope) else outer_polytope(K, _directions(args, K))
    values = {
        "K": K.name,
        "L": L.name,
        "phi": phi.name,
        "volume": oracle_volume(K),
        "V1": mixed_volume_V1(first, L),
        "V_phi": orlicz_mixed_volume(first, L, phi),
        "outer": first is not K,
    }
    _emit(json.dumps(values, indent=2), args.out)
    return EXIT_OK


def _sweep(args: argparse.Namespace) -> int:
    corpus = build_corpus()
    K = resolve_body(args.body, corpus)
    L = resolve_body(args.body2, corpus)
    estimate = first_variation_quermass(K, L, parse_phi(args.phi), args.j, args.eps, args.samples, args.seed,
                                        args.projection_dirs, allow_outer=True, directions=_directions(args, K))
    _emit(estimate.model_dump_json(indent=2), args.out)
    return EXIT_OK


def load_config(args: argparse.Namespace) -> SuiteConfig:
    """The suite configuration of ``--config`` with the command-line overrides applied.

    :raises: :class:`pydantic.ValidationError` on an invalid configuration.
    """

    config = SuiteConfig.model_validate_json(args.config.read_text(encoding="utf-8")) if args.config else SuiteConfig()
    overrides: Dict[str, Any] = {
        "n": args.n,
        "j": args.j,
        "grassmann_samples": args.samples,
        "directions": args.dirs,
        "seed": args.seed,
    }
    data = config.model_dump()
    data.update({key: value for key, value in overrides.items() if value is not None})
    if args.phi:
        data["phis"] = [parse_phi_spec(text).model_dump() for text in args.phi]
    data["body_paths"] = list(data["body_paths"]) + [str(path) for path in args.body]
    return SuiteConfig.model_validate(data)


def _verify(args: argparse.Namespace) -> int:
    config = load_config(args)
    suite = Suite(config, name=args.suite)

    def on_started(sender, **kwargs):
        log.debug(f"Started {kwargs['check_id']}.")

    def on_completed(sender, **kwargs):
        result = kwargs['result']
        log.info(f"{result.status.value:>12}  {result.check_id}")

    suite.signal_check_started.connect(on_started)
    suite.signal_check_completed.connect(on_completed)
    report = suite.run(workers=args.threads)

    if args.out:
        write_json(report, args.out)
    else:
        print(report_json(report))
    if args.csv:
        write_csv(report, args.csv)
    return EXIT_OK if report.ok else EXIT_FAILED


def main(argv: Sequence[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    logging.basicConfig(level=max(logging.DEBUG, logging.WARNING - 10 * args.verbose),
                        format="%(asctime)s %(levelname)s %(name)s: %(message)s")

    handlers = {"compute": _compute, "verify": _verify, "sweep": _sweep}
    try:
        return handlers[args.command](args)
    except ValidationError as e:
        log.error(f"Invalid input:\n{e}")
    except (UsageError, InvalidBodyException, EnvironmentException, json.JSONDecodeError, OSError) as e:
        log.error(str(e))
    except ValueError as e:
        log.error(f"Invalid value: {e}")
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
