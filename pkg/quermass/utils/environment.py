"""Utilities for reading the process environment."""

import logging
import os

import quermass.utils.assertions as assertions


log = logging.getLogger(__name__)


#: Environment variable capping the number of worker threads used by the harness.
THREADS_VARIABLE = "QUERMASS_THREADS"


class EnvironmentException(Exception):
    """Raised when an environment variable is undefined or holds an invalid value."""


def get_env_var_or_fail(name: str) -> str:
    """Retrieves the value of the environment variable ``name`` or raises an exception if it is undefined.

    :param name: Name of the environment variable to retrieve.
    :return: The current value of the environment variable.
    :raises: :class:`EnvironmentException` if the specified environment variable is undefined.
    :raises: :class:`TypeError` if ``name`` is not a string.
    :raises: :class:`ValueError` if ``name`` is an empty string.
    """

    assertions.assert_is_nonempty_string(name)
    value = os.getenv(name, None)
    if value is None:
        raise EnvironmentException(f"Environment variable '{name}' is undefined.")
    return value


def worker_count(default: int | None = None) -> int:
    """Returns the number of worker threads the harness may use.

    The value of ``$QUERMASS_THREADS`` is used when it is set. Otherwise ``default`` is
    returned, falling back to the number of CPUs.

    :param default: Worker count to use if the environment variable is unset.
    :return: A positive integer.
    :raises: :class:`EnvironmentException` if ``$QUERMASS_THREADS`` is set but is not a
        positive integer.
    """

    try:
        raw = get_env_var_or_fail(THREADS_VARIABLE)
    except EnvironmentException:
        return default if default is not None else (os.cpu_count() or 1)

    try:
        count = int(raw)
    except ValueError:
        count = 0
    if count < 1:
        log.error(f"Invalid value for ${THREADS_VARIABLE}: {raw!r}")
        raise EnvironmentException(f"${THREADS_VARIABLE} must be a positive integer, got {raw!r}.")
    return count
