"""Exception hierarchy. Each family maps to one CLI exit code."""

from __future__ import annotations


class PrcError(Exception):
    exit_code = 1


class ConfigError(PrcError, ValueError):
    """Invalid parameters or configuration.

    ``violations`` holds one ``(field, message)`` pair per broken invariant.
    """

    exit_code = 2

    def __init__(self, violations):
        if isinstance(violations, str):
            violations = [("config", violations)]
        self.violations = list(violations)
        super().__init__("; ".join(f"{f}: {m}" for f, m in self.violations))

    @property
    def fields(self):
        return [f for f, _ in self.violations]


class NumericalDomainError(PrcError, ValueError):
    exit_code = 3


class UnphysicalStateError(NumericalDomainError):
    pass


class BracketError(PrcError):
    """Root or optimum bracket does not contain what the search needs."""

    exit_code = 4


class InfeasibleError(BracketError):
    pass
