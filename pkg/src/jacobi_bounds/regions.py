"""Half-plane and angular regions beyond the spectral endpoints.

For slope alpha = tan(theta) the region functions are

    f_plus(lam)  = (Re lam - 2) + alpha * Im lam
    f_minus(lam) = -(Re lam + 2) - alpha * Im lam

and the half-planes Phi_plus/Phi_minus are where they are positive.  The
angular regions Psi are unions over the two slope signs; membership reduces
to (Re lam -+ 2) +- alpha * |Im lam| tested against zero.

Eigenvalues on a region boundary (|f| <= BOUNDARY_TOL) are treated as
outside: they contribute nothing to any power sum, so the convention is
bound-neutral and keeps the classification numerically stable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .eigen import Spectrum

BOUNDARY_TOL = 1e-12


class Branch(Enum):
    PLUS = "+"
    MINUS = "-"


@dataclass(frozen=True)
class RegionParams:
    """Slope/angle pair and branch; alpha = tan(theta) whenever both are set."""

    alpha: float
    theta: float = None
    branch: Branch = None

    def __post_init__(self):
        if self.theta is not None:
            if not (0.0 <= self.theta < math.pi / 2):
                raise ValueError("theta must lie in [0, pi/2)")
            if abs(self.alpha - math.tan(self.theta)) > 1e-12 * (1 + abs(self.alpha)):
                raise ValueError(
                    f"alpha={self.alpha} inconsistent with tan(theta)={math.tan(self.theta)}"
                )

    @classmethod
    def from_theta(cls, theta: float, branch: Branch = None) -> "RegionParams":
        return cls(alpha=math.tan(theta), theta=theta, branch=branch)


def pos_part(x: float) -> float:
    return x if x > 0.0 else 0.0


def neg_part(x: float) -> float:
    return -x if x < 0.0 else 0.0


def f_region(lam: complex, alpha: float, branch: Branch) -> float:
    """Signed distance-like functional defining the half-plane regions."""
    lam = complex(lam)
    if branch is Branch.PLUS:
        return (lam.real - 2.0) + alpha * lam.imag
    return -(lam.real + 2.0) - alpha * lam.imag


def in_psi(lam: complex, alpha: float, branch: Branch) -> bool:
    """Membership in the angular union region (slope alpha >= 0)."""
    if alpha < 0:
        raise ValueError("angular regions are defined for alpha >= 0")
    lam = complex(lam)
    if branch is Branch.PLUS:
        return (lam.real - 2.0) + alpha * abs(lam.imag) > BOUNDARY_TOL
    return (lam.real + 2.0) - alpha * abs(lam.imag) < -BOUNDARY_TOL


def min_theta_for(lam: complex, branch: Branch) -> float:
    """Infimum angle theta in [0, pi/2) whose angular region contains lam.

    Valid for eigenvalues in the critical strip -2 <= Re lam <= 2 that are
    not on the interval [-2, 2] itself.  Real lam inside the interval has no
    admissible angle and raises ValueError.
    """
    lam = complex(lam)
    if lam.imag == 0.0:
        if -2.0 <= lam.real <= 2.0:
            raise ValueError(
                f"lambda={lam} lies in the essential spectrum; no admissible angle"
            )
        return 0.0
    if branch is Branch.PLUS:
        t = (2.0 - lam.real) / abs(lam.imag)
    else:
        t = (lam.real + 2.0) / abs(lam.imag)
    return math.atan(max(t, 0.0))


# ---------------------------------------------------------------------------
# Spectrum classification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ClassifiedEigenvalue:
    value: complex
    multiplicity: int
    f_value: float


@dataclass(frozen=True)
class ClassifiedSpectrum:
    """Spectrum split by the half-plane regions at one slope.

    ``plus``/``minus`` are sorted by nonincreasing region-function value
    (ties broken lexicographically by (Re, Im)); ``remainder`` holds
    everything else, including boundary cases.  Every source eigenvalue
    appears exactly once across the three lists with its full multiplicity.
    """

    alpha: float
    plus: tuple
    minus: tuple
    remainder: tuple

    @property
    def total_multiplicity(self) -> int:
        return sum(
            e.multiplicity for part in (self.plus, self.minus, self.remainder) for e in part
        )

    def all_entries(self):
        return self.plus + self.minus + self.remainder


def classify(spectrum: Spectrum, params: RegionParams) -> ClassifiedSpectrum:
    """Partition a spectrum into the two half-plane lists and the remainder."""
    alpha = params.alpha
    plus, minus, rest = [], [], []
    for rec in spectrum.eigenvalues:
        fp = f_region(rec.value, alpha, Branch.PLUS)
        fm = f_region(rec.value, alpha, Branch.MINUS)
        if fp > BOUNDARY_TOL:
            plus.append(ClassifiedEigenvalue(rec.value, rec.multiplicity, fp))
        elif fm > BOUNDARY_TOL:
            minus.append(ClassifiedEigenvalue(rec.value, rec.multiplicity, fm))
        else:
            rest.append(ClassifiedEigenvalue(rec.value, rec.multiplicity, max(fp, fm)))
    key = lambda e: (-e.f_value, e.value.real, e.value.imag)  # noqa: E731
    plus.sort(key=key)
    minus.sort(key=key)
    rest.sort(key=lambda e: (e.value.real, e.value.imag))
    return ClassifiedSpectrum(
        alpha=alpha, plus=tuple(plus), minus=tuple(minus), remainder=tuple(rest)
    )
