"""A basic implementation of the observer pattern for emitting signals and connecting
listeners to them, similar to the Django signals framework.

The verification :class:`~quermass.harness.suite.Suite` declares signals for check
progress. Callers connect callbacks to them, for example to log progress or to stream
results somewhere else while the suite is still running.

Example:

.. code-block:: python

    from quermass.harness.suite import Suite

    def on_completed(sender, **kwargs):
        result = kwargs['result']
        print(f"{result.check_id}: {result.status}")

    suite = Suite()
    suite.signal_check_completed.connect(on_completed)
    suite.run()

"""

from typing import Callable, List
import logging
import threading

from quermass.utils import assertions


log = logging.getLogger(__name__)


class Signal():
    """A signal that can have multiple observers (callbacks) connected to it.

    Each time the signal is emitted, all connected callbacks are executed.
    When instantiating a signal, the sending object (sender) **must** be passed to
    the signal's constructor.

    Emission is serialized by a lock, because checks complete on worker threads.

    :param sender: The source object sending the signal.
    """

    def __init__(self, sender: object):
        self._observers: List[Callable] = []
        self._sender = sender
        self._lock = threading.Lock()


    def connect(self, callback: Callable) -> None:
        """Connects the specified ``callback`` to this :class:`Signal`.

        The callback signature **must** contain ``sender`` as the positional argument,
        followed by ``**kwargs``.

        :param callback: The callback function to be connected to this signal.
        :raises: :class:`TypeError` if ``callback`` is not callable.
        :raises: :class:`ValueError` if the first positional argument of ``callback`` is not ``sender``.
        :raises: :class:`ValueError` if ``callback`` does not accept keyword arguments.
        """

        assertions.assert_is_callable_and_has_first_param_sender(callback)
        assertions.assert_is_callable_and_accepts_kwargs(callback)

        self._observers.append(callback)


    def disconnect(self, callback: Callable) -> None:
        """Disconnects the specified ``callback`` from this :class:`Signal`.

        :param callback: The callback function to be disconnected.
        :raises: :class:`ValueError` if the specified callback is not in the list of observers.
        """

        self._observers.remove(callback)


    @property
    def has_observers(self) -> bool:
        """Whether any callback is connected."""

        return bool(self._observers)


    def emit(self, **kwargs) -> None:
        """Emits the signal, notifying all observers by calling their callback functions.

        Any information to be sent to the observers should be provided as keyword arguments to
        this method. An exception raised by one callback is logged and does not prevent the
        remaining callbacks from running.

        :param \\**kwargs: Keyword arguments that will be passed to each callback.
        """

        with self._lock:
            for callback in list(self._observers):
                try:
                    callback(self._sender, **kwargs)
                except Exception:
                    log.exception(f"Signal callback {callback!r} failed.")
