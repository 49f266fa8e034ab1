"""Toolkit configuration - all magic numbers extracted and centralized."""
from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class ArithmeticConfig:
    """Exact and modular arithmetic settings."""
    PRIME_LOW_BITS: int = 60   # modular primes are drawn from (2^60, 2^62)
    PRIME_HIGH_BITS: int = 62
    DEFAULT_SEED: int = 0

    @property
    def PRIME_WINDOW(self) -> tuple:
        return (1 << self.PRIME_LOW_BITS, 1 << self.PRIME_HIGH_BITS)


@dataclass(frozen=True)
class JacobianConfig:
    """Jacobian ring settings."""
    COEFF_BOUND: int = 9  # generic coefficients are nonzero ints in [-9, 9]
    MAX_RESAMPLES: int = 8


@dataclass(frozen=True)
class PeriodConfig:
    """Period series and recurrence fitting settings."""
    HOLDOUT: int = 5
    EXTRA_CHECK: int = 10
    MAX_ORDER: int = 2
    MAX_DEGREE: int = 4
    HASSE_MAX_PRIME: int = 199


@dataclass(frozen=True)
class ClassifyConfig:
    """Classification search settings."""
    SEARCH_BOX: int = 4
    MAX_SUBGROUP_DIM: int = 3
    MIN_WEIGHT_DIM: int = 1
    MAX_WEIGHT_DIM: int = 5


@dataclass(frozen=True)
class CliConfig:
    """Command-line settings."""
    JOBS_ENV: str = "REFLEX_JOBS"
    DEFAULT_FORMAT: str = "json"
    LOG_FORMAT: str = "%(name)s:%(levelname)s:%(message)s"


# Global config instances
ARITH = ArithmeticConfig()
JACOBIAN = JacobianConfig()
PERIODS = PeriodConfig()
CLASSIFY = ClassifyConfig()
CLI = CliConfig()


class RankMode:
    """Linear algebra modes for ranks."""
    EXACT = "exact"
    MODULAR = "modular"


class ExitCode:
    """Process exit codes of the command-line front end."""
    OK = 0
    INTERNAL = 1
    PRECONDITION = 2
