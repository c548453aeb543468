"""The verification harness: a bundled body corpus, the checks, suites that plan and run
them, report writers and the ``quermass`` command.
"""
