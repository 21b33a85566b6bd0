"""Exception types shared across the package."""


class MagnonSteerError(Exception):
    """Base class for all package-specific errors."""


class UnstableDrift(MagnonSteerError):
    """The drift matrix is not Hurwitz-stable, no steady state exists.

    Carries the largest eigenvalue real part in ``max_real_part``.
    """

    def __init__(self, max_real_part: float):
        self.max_real_part = max_real_part
        super().__init__(
            f"drift matrix is not Hurwitz-stable "
            f"(max eigenvalue real part {max_real_part:.6e})"
        )


class SingularSystem(MagnonSteerError):
    """The steady-state linear system is rank-deficient or ill-conditioned."""


class NonPositiveInput(MagnonSteerError):
    """A matrix that must be positive definite is not."""


class SingularBlock(MagnonSteerError):
    """A block that must be inverted is numerically singular."""


class NegativeDiscriminant(MagnonSteerError):
    """The two-mode symplectic discriminant is negative: unphysical input."""


class DegenerateDenominator(MagnonSteerError):
    """Closed-form covariance denominator vanished (stability boundary)."""


class UnknownPreset(MagnonSteerError):
    """Requested sweep preset id does not exist."""


class NoCrossing(MagnonSteerError):
    """The scanned measure never reaches zero inside the sweep window."""


class NonMonotone(MagnonSteerError):
    """The scanned measure is not monotone-to-zero inside the sweep window."""


class SpecError(MagnonSteerError):
    """Invalid sweep specification or parameter document."""
