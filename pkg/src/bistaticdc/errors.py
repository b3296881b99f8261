"""Exception hierarchy for domain and numeric failures.

Plain invalid arguments (negative lengths, malformed config) raise ValueError;
the classes below mark conditions that are legal inputs but have no answer,
so callers (and the CLI exit-code mapping) can tell the two apart.
"""


class CoverageError(Exception):
    """Base class for domain/numeric failures of the coverage calculations."""


class NoTargetError(CoverageError):
    """The constant-bistatic-range locus has no point at the requested angle."""


class SplitRegimeError(CoverageError):
    """Baseline longer than twice the bistatic range: the oval splits in two.

    Classification still works; every other operation refuses this regime.
    """


class NumericalFailureError(CoverageError):
    """An intermediate value left its valid range by more than tolerance."""


class UnboundedCellError(CoverageError):
    """The resolution cell area diverges for this bistatic angle."""


class NoCrossingError(CoverageError):
    """Noise and clutter exponents do not intersect inside the search bracket."""


class DegenerateOptimumError(CoverageError):
    """The objective is monotone in the design variable; no interior optimum."""
