"""The `data` module provides Pydantic-based data model classes for everything that enters
or leaves quermass as JSON: body specification files, Orlicz function selections, suite
configurations, Monte Carlo estimates, check results and reports.

Constrained scalar types (positive counts, ambient dimensions, step schedules, vertex
lists) are defined in :mod:`~quermass.data.validators` and reused across models.

Example:

    .. code-block:: python

        >>> from quermass.data.models import BodyDocument

        >>> spec = BodyDocument.model_validate_json('{"type": "ball", "radius": 2, "dim": 3}').root
        >>> spec.radius
        2.0

        >>> from quermass.data.models import SuiteConfig

        >>> config = SuiteConfig.model_validate_json('{"n": 3, "j": 2, "phi": {"family": "power", "p": 2}}')
        >>> config.phis[0].p
        2.0
        >>> print(config.model_dump_json(by_alias=True, include={"n", "j", "grassmann_samples"}))
        {"n":3,"j":2,"N_grassmann":20000}
"""
