import math

import numpy as np
import pytest

from quermass.utils import assertions
from quermass.utils.environment import THREADS_VARIABLE, EnvironmentException, get_env_var_or_fail, worker_count
from quermass.utils.extrapolation import extrapolate_quotients, fitted_order, is_monotone, richardson_limit
from quermass.utils.signals import Signal
from quermass.utils.statistics import delta_method, standard_error


class TestAssertions:

    @pytest.mark.parametrize("value", [1, np.int64(3), -2])
    def test_int_accepted(self, value):
        assertions.assert_is_int(value)

    @pytest.mark.parametrize("value", [True, 1.0, "1", None])
    def test_int_rejected(self, value):
        with pytest.raises(TypeError):
            assertions.assert_is_int(value)

    def test_positive(self):
        assertions.assert_is_positive(0.5)
        with pytest.raises(ValueError):
            assertions.assert_is_positive(0)
        with pytest.raises(ValueError):
            assertions.assert_is_positive(math.inf)
        with pytest.raises(TypeError):
            assertions.assert_is_positive(False)

    def test_dimension_pair(self):
        assertions.assert_is_dimension_pair(3, 3)
        with pytest.raises(ValueError):
            assertions.assert_is_dimension_pair(3, 4)
        with pytest.raises(ValueError):
            assertions.assert_is_dimension_pair(3, 0)

    def test_strictly_decreasing(self):
        assertions.assert_is_strictly_decreasing([0.1, 0.05, 0.01])
        with pytest.raises(ValueError):
            assertions.assert_is_strictly_decreasing([0.1, 0.1])
        with pytest.raises(ValueError):
            assertions.assert_is_strictly_decreasing([])

    def test_unit_vectors(self):
        assertions.assert_is_unit_vectors(np.eye(3), 3)
        with pytest.raises(ValueError):
            assertions.assert_is_unit_vectors(np.array([[1.0, 1e-6]]), 2)
        with pytest.raises(ValueError):
            assertions.assert_is_unit_vectors(np.eye(3), 2)

    def test_orthonormal(self):
        assertions.assert_is_orthonormal(np.eye(4)[:, :2])
        with pytest.raises(ValueError):
            assertions.assert_is_orthonormal(np.array([[1.0, 1.0], [0.0, 1.0]]))
        with pytest.raises(ValueError):
            assertions.assert_is_orthonormal(np.ones((2, 3)))

    def test_nonempty_string(self):
        assertions.assert_is_nonempty_string("x")
        with pytest.raises(ValueError):
            assertions.assert_is_nonempty_string("")
        with pytest.raises(TypeError):
            assertions.assert_is_nonempty_string(1)


class TestSignal:

    def test_emit_reaches_every_observer(self):
        sender = object()
        signal = Signal(sender)
        received = []

        def first(sender, **kwargs):
            received.append(("first", sender, kwargs))

        def second(sender, **kwargs):
            received.append(("second", sender, kwargs))

        signal.connect(first)
        signal.connect(second)
        signal.emit(check_id="a")

        assert received == [("first", sender, {"check_id": "a"}), ("second", sender, {"check_id": "a"})]

    def test_disconnect(self):
        signal = Signal(None)
        calls = []

        def callback(sender, **kwargs):
            calls.append(kwargs)

        signal.connect(callback)
        assert signal.has_observers
        signal.disconnect(callback)
        assert not signal.has_observers
        signal.emit(value=1)
        assert calls == []
        with pytest.raises(ValueError):
            signal.disconnect(callback)

    def test_rejects_bad_callbacks(self):
        signal = Signal(None)

        def no_sender(other, **kwargs):
            pass

        def no_kwargs(sender):
            pass

        with pytest.raises(TypeError):
            signal.connect("callback")
        with pytest.raises(ValueError):
            signal.connect(no_sender)
        with pytest.raises(ValueError):
            signal.connect(no_kwargs)

    def test_failing_callback_does_not_stop_others(self):
        signal = Signal(None)
        calls = []

        def broken(sender, **kwargs):
            raise RuntimeError("boom")

        def working(sender, **kwargs):
            calls.append(kwargs["value"])

        signal.connect(broken)
        signal.connect(working)
        signal.emit(value=7)
        assert calls == [7]


class TestEnvironment:

    def test_get_env_var(self, monkeypatch):
        monkeypatch.setenv("QUERMASS_TEST_VARIABLE", "value")
        assert get_env_var_or_fail("QUERMASS_TEST_VARIABLE") == "value"
        monkeypatch.delenv("QUERMASS_TEST_VARIABLE")
        with pytest.raises(EnvironmentException):
            get_env_var_or_fail("QUERMASS_TEST_VARIABLE")

    def test_worker_count_default(self, monkeypatch):
        monkeypatch.delenv(THREADS_VARIABLE, raising=False)
        assert worker_count(3) == 3
        assert worker_count() >= 1

    def test_worker_count_from_environment(self, monkeypatch):
        monkeypatch.setenv(THREADS_VARIABLE, "5")
        assert worker_count(2) == 5

    @pytest.mark.parametrize("raw", ["0", "-1", "many"])
    def test_worker_count_invalid(self, monkeypatch, raw):
        monkeypatch.setenv(THREADS_VARIABLE, raw)
        with pytest.raises(EnvironmentException):
            worker_count()


class TestStatistics:

    def test_standard_error(self):
        samples = np.array([1.0, 2.0, 3.0, 4.0])
        assert standard_error(samples) == pytest.approx(np.std(samples, ddof=1) / 2)
        assert standard_error(np.array([5.0])) == 0.0

    def test_delta_method_linear(self):
        rng = np.random.default_rng(1)
        columns = rng.standard_normal((500, 1)) + 3.0
        value, stderr = delta_method(columns, lambda means: 2.0 * means[0])
        assert value == pytest.approx(2.0 * columns.mean())
        assert stderr == pytest.approx(2.0 * standard_error(columns[:, 0]), rel=1e-6)

    def test_delta_method_difference_of_correlated_columns(self):
        rng = np.random.default_rng(2)
        base = rng.standard_normal(1000)
        columns = np.column_stack([base + 5.0, base + 4.0])
        value, stderr = delta_method(columns, lambda means: means[0] - means[1])
        assert value == pytest.approx(1.0)
        assert stderr == pytest.approx(0.0, abs=1e-9)

    def test_delta_method_single_sample(self):
        value, stderr = delta_method(np.array([[2.0, 3.0]]), lambda means: means[0] * means[1])
        assert value == pytest.approx(6.0)
        assert stderr == 0.0


class TestExtrapolation:

    def test_richardson_removes_first_order_error(self):
        steps = np.array([0.08, 0.04, 0.02])
        values = 3.0 + 5.0 * steps
        assert richardson_limit(2.0, values, order=1.0, levels=1) == pytest.approx(3.0)

    def test_richardson_two_levels(self):
        steps = np.array([0.08, 0.04, 0.02, 0.01])
        values = 1.0 + 2.0 * steps - 7.0 * steps ** 2
        assert richardson_limit(2.0, values, order=1.0) == pytest.approx(1.0, abs=1e-12)

    def test_single_value(self):
        assert richardson_limit(2.0, [4.2]) == 4.2

    def test_fitted_order(self):
        steps = np.array([0.1, 0.05, 0.025, 0.0125])
        assert fitted_order(steps, 1.0 + steps ** 2) == pytest.approx(2.0)
        assert math.isnan(fitted_order(steps[:2], steps[:2]))

    def test_is_monotone(self):
        assert is_monotone([3, 2, 2, 1])
        assert is_monotone([1, 2, 3])
        assert not is_monotone([1, 3, 2])

    def test_extrapolate_quotients(self):
        steps = [0.08, 0.04, 0.02, 0.01]
        quotients = [3.0 + 5.0 * h for h in steps]
        assert extrapolate_quotients(steps, quotients, levels=1) == pytest.approx(3.0)

    def test_non_geometric_schedule_falls_back(self):
        steps = [0.08, 0.05, 0.01]
        quotients = [1.3, 1.2, 1.1]
        assert extrapolate_quotients(steps, quotients) == 1.1
