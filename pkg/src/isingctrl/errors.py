"""Exception types shared across the package."""


class IsingCtrlError(Exception):
    """Base class for all package-specific errors."""


class ClassificationError(IsingCtrlError):
    """A configuration does not match the shape expected by a classifier."""


class CharacterizationViolation(IsingCtrlError):
    """A locally stable configuration failed the rectangle/stripe decomposition.

    This should never happen for genuinely robust states; raising loudly is
    deliberate because it would invalidate the reduced state description.
    """


class EnumerationBudgetError(IsingCtrlError):
    """The exact absorption recursion exceeded its memoization budget."""


class DomainError(IsingCtrlError):
    """A state or action outside the domain of the requested operation."""


class BracketError(IsingCtrlError):
    """A root bracket does not contain a sign change."""


class DivergenceError(IsingCtrlError):
    """Hitting-time system is substochastic: the target is not reached a.s."""


class CensoringError(IsingCtrlError):
    """Sample set contains unresolved (censored) trajectories."""


class UnresolvedTrajectoryError(IsingCtrlError):
    """A replication hit its epoch cap before absorbing."""


class ConfigError(IsingCtrlError):
    """Invalid experiment configuration."""
