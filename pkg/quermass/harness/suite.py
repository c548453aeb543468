"""Planning and running verification suites.

A :class:`Suite` turns a :class:`~quermass.data.models.SuiteConfig` into a plan: a
mapping from check id to a zero-argument callable producing a
:class:`~quermass.data.models.CheckResult`. Running the suite executes the plan on a
thread pool and collects a :class:`~quermass.data.models.Report`.

Progress is published through :class:`~quermass.utils.signals.Signal`\\ s:

* :attr:`Suite.signal_check_started` sends ``check_id``;
* :attr:`Suite.signal_check_completed` sends ``result``;
* :attr:`Suite.signal_suite_completed` sends ``report``.
"""

from concurrent.futures import ThreadPoolExecutor
from functools import partial
from typing import Callable, Dict, List, Tuple
import logging
import math

import numpy as np

from quermass.components.bodies import ConvexBody, DirectionSet, Ellipsoid, LinearMap
from quermass.components.orlicz import OrliczFunction, make_phi
from quermass.data.models import CheckResult, CheckStatus, Report, SuiteConfig
from quermass.harness import checks
from quermass.harness.checks import SampledProjections, check_name
from quermass.harness.corpus import bodies_of_dimension, build_corpus, polytopes_of_dimension
from quermass.harness.report import build_report
from quermass.utils import assertions
from quermass.utils.environment import worker_count
from quermass.utils.signals import Signal


log = logging.getLogger(__name__)


#: Suite names accepted by :class:`Suite`.
SUITES = ("all", "orlicz", "quermass")
#: Number of volume-level pairs per dimension that go through outer polytopes.
OUTER_PAIRS = 2
#: Subspace dimensions of the scalar limit-ratio checks.
LIMIT_RATIO_DIMENSIONS = (1, 2, 3)
#: Number of random volume preserving maps of the invariance checks.
SPECIAL_MAPS = 5
#: Dilation factors of the scaling checks.
DILATIONS = (0.5, 2.0)
#: Exponents of the ``L_p`` checks.
EXPONENTS = (1.0, 2.0, 3.0)

Pair = Tuple[ConvexBody, ConvexBody]


def _failed(check_id: str, error: Exception) -> CheckResult:
    return CheckResult(check_id=check_id, kind="identity", status=CheckStatus.FAIL, lhs=math.nan,
                       rhs=math.nan, margin=math.nan, config={"error": f"{type(error).__name__}: {error}"})


class Suite:
    """A planned verification run.

    :param config: Run configuration; defaults apply when omitted.
    :param name: ``all``, ``orlicz`` (Orlicz sums and volume-level checks) or
        ``quermass`` (Grassmannian checks).
    :param corpus: Bodies keyed by name; built from ``config.body_paths`` when omitted.
    :raises: :class:`ValueError` if ``name`` is not a known suite.
    """

    def __init__(self, config: SuiteConfig | None = None, name: str = "all",
                 corpus: Dict[str, ConvexBody] | None = None):
        assertions.assert_is_nonempty_string(name)
        if name not in SUITES:
            raise ValueError(f"Unknown suite '{name}', expected one of {', '.join(SUITES)}.")

        #: The run configuration.
        self.config: SuiteConfig = config or SuiteConfig()
        #: The suite name.
        self.name: str = name
        #: Bodies the checks draw from.
        self.corpus: Dict[str, ConvexBody] = corpus if corpus is not None else build_corpus(self.config.body_paths)
        #: The Orlicz functions of the configuration.
        self.phis: List[OrliczFunction] = [make_phi(spec) for spec in self.config.phis]

        #: Signal emitted before a check runs. Sends ``check_id``.
        self.signal_check_started: Signal = Signal(self)
        #: Signal emitted after a check ran. Sends ``result``, the :class:`~quermass.data.models.CheckResult`.
        self.signal_check_completed: Signal = Signal(self)
        #: Signal emitted once every check ran. Sends ``report``, the :class:`~quermass.data.models.Report`.
        self.signal_suite_completed: Signal = Signal(self)

        self._plan: Dict[str, Callable[[], CheckResult]] = {}
        self._planned = False


    def register(self, check_id: str, check: Callable[[], CheckResult]) -> None:
        """Adds a check to the plan.

        :raises: :class:`ValueError` if ``check_id`` is already planned.
        """

        assertions.assert_is_nonempty_string(check_id)
        assertions.assert_is_callable(check)
        if check_id in self._plan:
            raise ValueError(f"Check '{check_id}' is already planned.")
        self._plan[check_id] = check


    @property
    def plan(self) -> Dict[str, Callable[[], CheckResult]]:
        """The planned checks, keyed by id. Built on first access."""

        if not self._planned:
            self._planned = True
            if self.name in ("all", "orlicz"):
                self._plan_orlicz()
            if self.name in ("all", "quermass"):
                self._plan_quermass()
            log.info(f"Planned {len(self._plan)} checks for suite '{self.name}'.")
        return self._plan


    def _dimensions(self) -> List[int]:
        return [1] if self.config.n == 1 else sorted({2, self.config.n})


    def _volume_pairs(self, dim: int) -> List[Pair]:
        """Each polytope paired with the next body of the same dimension, plus ``(square, rectangle)``."""

        bodies = bodies_of_dimension(self.corpus, dim)
        pairs: Dict[Tuple[str, str], Pair] = {}
        for K in polytopes_of_dimension(self.corpus, dim):
            L = bodies[(bodies.index(K) + 1) % len(bodies)]
            pairs[(K.name, L.name)] = (K, L)
        if dim == 2 and "square" in self.corpus and "rectangle" in self.corpus:
            pairs[("square", "rectangle")] = (self.corpus["square"], self.corpus["rectangle"])
        return list(pairs.values())


    def _variation_pairs(self, dim: int, pairs: List[Pair]) -> List[Pair]:
        """The first pair of ``pairs`` and, when the corpus has them, the cube and the ball of ``dim``."""

        chosen = {(K.name, L.name): (K, L) for K, L in pairs[:1]}
        cube_name = "square" if dim == 2 else f"cube{dim}d"
        ball_name = f"ball{dim}d"
        if cube_name in self.corpus and ball_name in self.corpus:
            chosen[(cube_name, ball_name)] = (self.corpus[cube_name], self.corpus[ball_name])
        return list(chosen.values())


    def _plan_orlicz(self) -> None:
        config, tolerances = self.config, self.config.tolerances

        self.register(check_name("orlicz.solver_residual"),
                      partial(checks.check_solver_residual, self.phis, seed=config.seed))
        self.register(check_name("orlicz.solver_closed_form"),
                      partial(checks.check_solver_closed_form, seed=config.seed))

        for dim in self._dimensions():
            directions = DirectionSet.uniform(dim, config.directions, config.seed)
            pairs = self._volume_pairs(dim)
            polytopes = polytopes_of_dimension(self.corpus, dim)
            if not pairs:
                log.warning(f"No polytopes of dimension {dim} in the corpus.")
                continue

            for P in polytopes:
                self.register(check_name("volume.representation", P.name),
                              partial(checks.check_representation, P, tolerances))
                for phi in self.phis:
                    self.register(check_name("volume.vphi_self", P.name, phi.name),
                                  partial(checks.check_vphi_self, P, phi, tolerances))
                    for factor in DILATIONS:
                        self.register(check_name("volume.vphi_dilate", P.name, phi.name, factor),
                                      partial(checks.check_vphi_dilate, P, phi, factor, tolerances))

            for K, L in pairs:
                self.register(check_name("volume.minkowski", K.name, L.name),
                              partial(checks.check_minkowski, K, L, tolerances))
                for p in EXPONENTS:
                    self.register(check_name("volume.lp_vs_phi", K.name, L.name, p),
                                  partial(checks.check_lp_vs_phi, K, L, p))
                    self.register(check_name("volume.lp_minkowski", K.name, L.name, p),
                                  partial(checks.check_lp_minkowski, K, L, p, tolerances))
                for phi in self.phis:
                    self.register(check_name("volume.orlicz_minkowski", K.name, L.name, phi.name),
                                  partial(checks.check_orlicz_minkowski_volume, K, L, phi, tolerances))

            first = polytopes[0]
            for phi in self.phis:
                self.register(check_name("volume.orlicz_minkowski_dilate", first.name, phi.name, 2.0),
                              partial(checks.check_orlicz_minkowski_volume_dilate, first, phi, 2.0, tolerances))
                self.register(check_name("orlicz.dilate_sum", first.name, phi.name),
                              partial(checks.check_dilate_sum, first, phi, directions))

            for index, (K, L) in enumerate(pairs[:OUTER_PAIRS]):
                self.register(check_name("volume.brunn_minkowski", K.name, L.name),
                              partial(checks.check_brunn_minkowski_volume, K, L, directions, tolerances))
                self.register(check_name("volume.lp_brunn_minkowski", K.name, L.name, 2.0),
                              partial(checks.check_lp_brunn_minkowski_volume, K, L, 2.0, directions, tolerances))
                for phi in self.phis:
                    self.register(check_name("orlicz.linear_image", K.name, L.name, phi.name, config.eps_grid[0]),
                                  partial(checks.check_linear_image, K, L, phi, config.eps_grid[0], config.seed))
                    for eps in config.eps_grid:
                        self.register(check_name("volume.orlicz_bm", K.name, L.name, phi.name, eps),
                                      partial(checks.check_orlicz_bm_volume, K, L, phi, eps, directions, tolerances))
                        self.register(check_name("volume.decomposition", K.name, L.name, phi.name, eps),
                                      partial(checks.check_decomposition_volume, K, L, phi, eps, directions))
                    if index == 0:
                        self._plan_first_pair(K, L, phi, directions)

            for K, L in self._variation_pairs(dim, pairs):
                for phi in self.phis:
                    self.register(check_name("volume.first_variation", K.name, L.name, phi.name),
                                  partial(checks.check_first_variation_volume, K, L, phi, config.eps_schedule,
                                          directions, tolerances))

            if dim == config.n:
                for K, L in pairs[:OUTER_PAIRS]:
                    for phi in self.phis:
                        eps = config.eps_grid[0]
                        self.register(check_name("orlicz.projection_lemma", K.name, L.name, phi.name, eps, f"j={config.j}"),
                                      partial(checks.check_projection_lemma, K, L, phi, eps, config.j, seed=config.seed))


    def _plan_first_pair(self, K: ConvexBody, L: ConvexBody, phi: OrliczFunction, directions: DirectionSet) -> None:
        config, tolerances = self.config, self.config.tolerances
        self.register(check_name("orlicz.hausdorff_continuity", K.name, L.name, phi.name),
                      partial(checks.check_hausdorff_continuity, K, L, phi))
        self.register(check_name("orlicz.sum_homogeneity", K.name, L.name, phi.name, config.eps_grid[0]),
                      partial(checks.check_sum_homogeneity, K, L, phi, config.eps_grid[0]))
        for eps in config.eps_grid:
            self.register(check_name("volume.orlicz_bm_dilate", K.name, phi.name, eps, 2.0),
                          partial(checks.check_orlicz_bm_volume_dilate, K, phi, eps, 2.0, directions, tolerances))


    def _plan_quermass(self) -> None:
        config, tolerances = self.config, self.config.tolerances
        n, j, samples, seed = config.n, config.j, config.grassmann_samples, config.seed
        pairs = self._volume_pairs(n)
        if not pairs:
            log.warning(f"No polytopes of dimension {n} in the corpus, skipping the Grassmannian checks.")
            return

        projections = SampledProjections(n, j, samples, seed, config.projection_directions)
        directions = DirectionSet.uniform(n, config.directions, seed)
        suffix = f"j={j}"

        for ball_j in sorted(set(range(1, n)) | {j}):
            for radius in (1.0, 2.0):
                self.register(check_name("quermass.ball_law", f"n={n}", f"j={ball_j}", radius),
                              partial(checks.check_ball_law, n, ball_j, radius, samples, seed))
        for phi in self.phis:
            for ratio_j in sorted(set(LIMIT_RATIO_DIMENSIONS) | {j}):
                self.register(check_name("quermass.limit_ratio", phi.name, f"j={ratio_j}"),
                              partial(checks.check_limit_ratio, phi, ratio_j, tolerances=tolerances))

        first = pairs[0][0]
        self.register(check_name("quermass.homogeneity", first.name, suffix, 2.0),
                      partial(checks.check_homogeneity, first, j, 2.0, samples, seed))
        self.register(check_name("quermass.stderr_scaling", first.name, suffix),
                      partial(checks.check_stderr_scaling, first, j, samples, seed))

        rng = np.random.default_rng(seed)
        maps = [LinearMap.random_special(n, rng) for _ in range(SPECIAL_MAPS)]
        for index, T in enumerate(maps):
            label = f"T{index}"
            self.register(check_name("quermass.sl_invariance", first.name, label, suffix),
                          partial(checks.check_sl_invariance, first, T, label, j, samples, seed))
            K, L = pairs[0]
            phi = self.phis[0]
            self.register(check_name("quermass.sl_invariance_mixed", K.name, L.name, phi.name, label, suffix),
                          partial(checks.check_sl_invariance, K, T, label, j, samples, seed, L=L, phi=phi))

        polytopes = list({K.name: K for K, _ in pairs}.values())
        for K in polytopes:
            self.register(check_name("quermass.boundary_values", K.name),
                          partial(checks.check_boundary_values, K))
        for K, L in pairs:
            for p in EXPONENTS[:2]:
                self.register(check_name("quermass.lp_vs_phi", K.name, L.name, p, suffix),
                              partial(checks.check_lp_vs_phi_quermass, K, L, p, projections))
            for phi in self.phis:
                self.register(check_name("quermass.degeneration", K.name, L.name, phi.name),
                              partial(checks.check_degeneration, K, L, phi))
                self.register(check_name("quermass.orlicz_minkowski", K.name, L.name, phi.name, suffix),
                              partial(checks.check_orlicz_minkowski_quermass, K, L, phi, projections, tolerances))

        for index, (K, L) in enumerate(pairs[:OUTER_PAIRS]):
            self.register(check_name("quermass.brunn_minkowski", K.name, L.name, suffix),
                          partial(checks.check_brunn_minkowski_quermass, K, L, projections, directions, tolerances))
            for phi in self.phis:
                self.register(check_name("quermass.self_mixed", K.name, phi.name, suffix),
                              partial(checks.check_self_mixed, K, phi, projections))
                self.register(check_name("quermass.alternative_self", K.name, phi.name, suffix),
                              partial(checks.check_alternative_self, K, phi, projections))
                for factor in DILATIONS:
                    self.register(check_name("quermass.lambda_scaling", K.name, phi.name, factor, suffix),
                                  partial(checks.check_lambda_scaling, K, phi, factor, projections))
                for eps in config.eps_grid:
                    self.register(check_name("quermass.orlicz_bm", K.name, L.name, phi.name, eps, suffix),
                                  partial(checks.check_orlicz_bm_quermass, K, L, phi, eps, projections, directions,
                                          tolerances))
                    self.register(check_name("quermass.decomposition", K.name, L.name, phi.name, eps, suffix),
                                  partial(checks.check_decomposition_identity, K, L, phi, eps, projections,
                                          directions, tolerances))
                    if index == 0:
                        self.register(check_name("quermass.orlicz_bm_dilate", K.name, phi.name, eps, 2.0, suffix),
                                      partial(checks.check_orlicz_bm_quermass_dilate, K, phi, eps, 2.0,
                                              projections, directions, tolerances))
                if index == 0:
                    self.register(check_name("quermass.orlicz_minkowski_dilate", K.name, phi.name, 2.0, suffix),
                                  partial(checks.check_orlicz_minkowski_quermass_dilate, K, phi, 2.0, projections,
                                          tolerances))

        for K, L in self._variation_pairs(n, pairs):
            for phi in self.phis:
                self.register(check_name("quermass.first_variation", K.name, L.name, phi.name, suffix),
                              partial(checks.check_first_variation_quermass, K, L, phi, j, config.eps_schedule,
                                      samples, seed, config.projection_directions, tolerances))

        probed = polytopes + [body for body in bodies_of_dimension(self.corpus, n) if isinstance(body, Ellipsoid)]
        for K in probed:
            self.register(check_name("quermass.lutwak_conjecture", K.name, suffix),
                          partial(checks.check_lutwak_conjecture, K, j, samples, seed))
        for k in range(j + 1, n + 1):
            self.register(check_name("quermass.lutwak_chain", first.name, suffix, f"k={k}"),
                          partial(checks.check_lutwak_chain, first, j, k, samples, seed))


    def _run_one(self, check_id: str, check: Callable[[], CheckResult]) -> CheckResult:
        self.signal_check_started.emit(check_id=check_id)
        try:
            result = check()
        except Exception as e:
            log.error(f"Check '{check_id}' raised {type(e).__name__}: {e}")
            result = _failed(check_id, e)
        if result.check_id != check_id:
            result = result.model_copy(update={"check_id": check_id})
        self.signal_check_completed.emit(result=result)
        return result


    def run(self, workers: int | None = None) -> Report:
        """Runs every planned check and returns the report.

        :param workers: Thread count; ``$QUERMASS_THREADS`` or the CPU count when omitted.
        :raises: :class:`~quermass.utils.environment.EnvironmentException` if
            ``$QUERMASS_THREADS`` is invalid.
        """

        plan = self.plan
        workers = min(workers or worker_count(), max(1, len(plan)))
        log.info(f"Running {len(plan)} checks on {workers} threads.")
        with ThreadPoolExecutor(max_workers=workers) as executor:
            futures = [executor.submit(self._run_one, check_id, check) for check_id, check in plan.items()]
            results = [future.result() for future in futures]

        report = build_report(self.name, self.config, results)
        log.info(f"Suite '{self.name}': {report.summary.passed} passed, {report.summary.fail} failed, "
                 f"{report.summary.inconclusive} inconclusive, {report.summary.candidate} candidates.")
        self.signal_suite_completed.emit(report=report)
        return report


    def __repr__(self):
        return f"<Suite(name={self.name!r}, n={self.config.n}, j={self.config.j}, checks={len(self.plan)})>"


def run_suite(config: SuiteConfig | None = None, name: str = "all", workers: int | None = None) -> Report:
    """Plans and runs the suite ``name`` on ``config``; see :meth:`Suite.run`."""

    return Suite(config, name).run(workers)
