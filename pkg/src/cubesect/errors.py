"""Exceptions raised across the package."""


class NonConvergent(RuntimeError):
    """A quadrature or root search ran out of budget before reaching its tolerance."""


class NoSignChange(RuntimeError):
    """A scan that should bracket a root found no sign change."""


class ConsistencyError(ArithmeticError):
    """Two independent evaluation routes disagreed."""
