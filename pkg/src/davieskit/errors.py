"""Exception hierarchy.

Every error raised by the library derives from :class:`DaviesKitError` so
callers (notably the CLI) can distinguish library failures from bugs.
"""


class DaviesKitError(Exception):
    """Base class for all davieskit errors."""


class NonHermitianInput(DaviesKitError, ValueError):
    """A matrix expected to be Hermitian is not, beyond tolerance."""


class DegenerateSpectrum(DaviesKitError, ValueError):
    """Eigenvalue gap below tolerance where distinct eigenvalues are required."""


class FunctionUndefined(DaviesKitError, ValueError):
    """Scalar function undefined at an eigenvalue (e.g. real log of x <= 0)."""


class InvalidProjector(DaviesKitError, ValueError):
    """Matrix is not an orthogonal projector within tolerance."""


class DimensionMismatch(DaviesKitError, ValueError):
    """Operands have incompatible shapes."""


class NonPhysicalOutput(DaviesKitError, ValueError):
    """Channel output failed density-matrix validation."""


class NotCP(DaviesKitError, ValueError):
    """Map is not completely positive within tolerance."""


class NotTP(DaviesKitError, ValueError):
    """Map is not trace preserving within tolerance."""


class TraceNotKilled(DaviesKitError, ValueError):
    """Candidate generator does not annihilate the trace."""


class ZeroGap(DaviesKitError, ValueError):
    """Generator has no spectral gap (non-ergodic)."""


class InvalidParams(DaviesKitError, ValueError):
    """Parameter set violates its domain constraints."""


class RateOrderViolated(DaviesKitError, ValueError):
    """Coherence decay rate below half the population relaxation rate."""


class SemigroupConstraintViolated(DaviesKitError, ValueError):
    """Relaxation times violate the semigroup condition tau1 <= 2*tau3."""


class NonPositiveRates(DaviesKitError, ValueError):
    """A transition rate required to be strictly positive vanishes."""


class LogDoesNotExist(DaviesKitError, ValueError):
    """Stochastic matrix has no real logarithm (spectrum not positive)."""


class DomainError(DaviesKitError, ValueError):
    """Input outside the validity domain of a closed-form expression."""


class NotOnSemigroup(DaviesKitError, ValueError):
    """Stochastic block does not embed into a detailed-balance semigroup."""


class NotAState(DaviesKitError, ValueError):
    """Matrix failed density-matrix validation."""


class NotDistribution(DaviesKitError, ValueError):
    """Vector is not a probability distribution within tolerance."""


class NotAChannel(DaviesKitError, ValueError):
    """Matrix is not a completely positive trace-preserving map."""


class CcpInconsistency(DaviesKitError, RuntimeError):
    """Independent conditional-complete-positivity routes disagree beyond
    the tolerance band; indicates a numerical pathology worth inspecting."""
