"""Statistical functionals on weighted point masses and their sensitivity.

The influence function is computed as a numerical directional derivative:
contaminate the distribution with a small point mass, difference the
functional, and extrapolate the step to zero.  Its growth across probe
locations separates functionals that any data perturbation can hijack
(the mean) from those that saturate (median, trimmed mean).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError, NumericalFailureError


class Functional(str, enum.Enum):
    MEAN = "MEAN"
    MEDIAN = "MEDIAN"
    TRIMMED_MEAN = "TRIMMED_MEAN"


@dataclass(frozen=True)
class FunctionalKind:
    """A functional of distributions; trim_fraction applies to TRIMMED_MEAN only."""

    kind: Functional
    trim_fraction: float | None = None

    def __post_init__(self):
        if self.kind is Functional.TRIMMED_MEAN:
            if self.trim_fraction is None or not 0.0 <= self.trim_fraction < 0.5:
                raise InvalidInputError(
                    f"trim_fraction must lie in [0, 0.5), got {self.trim_fraction}"
                )
        elif self.trim_fraction is not None:
            raise InvalidInputError(f"trim_fraction is only valid for TRIMMED_MEAN")


MEAN = FunctionalKind(Functional.MEAN)
MEDIAN = FunctionalKind(Functional.MEDIAN)


def trimmed_mean(trim_fraction: float) -> FunctionalKind:
    return FunctionalKind(Functional.TRIMMED_MEAN, trim_fraction)


# cumulative-weight comparisons share the weight-sum tolerance
_WEIGHT_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class EmpiricalDistribution:
    """Weighted point masses on the real line, sorted by location.

    Weights must be positive and sum to 1 within 1e-12.
    """

    locations: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        loc = np.asarray(self.locations, dtype=float)
        w = np.asarray(self.weights, dtype=float)
        if loc.ndim != 1 or loc.shape != w.shape or loc.size == 0:
            raise InvalidInputError("locations and weights must be equal-length 1-D and nonempty")
        if not np.all(np.isfinite(loc)):
            raise InvalidInputError("locations must be finite")
        if np.any(w <= 0) or not np.all(np.isfinite(w)):
            raise InvalidInputError("weights must be positive and finite")
        total = float(np.sum(w))
        if abs(total - 1.0) > _WEIGHT_TOL:
            raise InvalidInputError(f"weights must sum to 1 within {_WEIGHT_TOL}, got {total!r}")
        order = np.argsort(loc, kind="stable")
        loc, w = loc[order].copy(), w[order].copy()
        loc.flags.writeable = False
        w.flags.writeable = False
        object.__setattr__(self, "locations", loc)
        object.__setattr__(self, "weights", w)

    @classmethod
    def from_atoms(cls, atoms) -> "EmpiricalDistribution":
        pairs = list(atoms)
        if not pairs:
            raise InvalidInputError("need at least one atom")
        return cls(np.array([p[0] for p in pairs]), np.array([p[1] for p in pairs]))

    @property
    def atoms(self) -> tuple[tuple[float, float], ...]:
        return tuple(zip(self.locations.tolist(), self.weights.tolist()))


def evaluate(t: FunctionalKind, f: EmpiricalDistribution) -> float:
    """Value of the functional at a distribution.

    MEAN is the weighted average.  MEDIAN is the smallest location where
    the cumulative weight reaches 0.5 (generalized-inverse convention,
    which makes the median single-valued).  TRIMMED_MEAN removes
    trim_fraction of mass from each tail, splitting atoms proportionally,
    and averages what remains.
    """
    if t.kind is Functional.MEAN:
        return float(np.dot(f.weights, f.locations))
    if t.kind is Functional.MEDIAN:
        cum = np.cumsum(f.weights)
        idx = int(np.searchsorted(cum, 0.5 - _WEIGHT_TOL))
        return float(f.locations[min(idx, f.locations.size - 1)])
    alpha = t.trim_fraction
    if alpha == 0.0:
        return float(np.dot(f.weights, f.locations))
    hi_edge = np.cumsum(f.weights)
    lo_edge = hi_edge - f.weights
    kept = np.minimum(hi_edge, 1.0 - alpha) - np.maximum(lo_edge, alpha)
    kept = np.maximum(kept, 0.0)
    return float(np.dot(kept, f.locations) / (1.0 - 2.0 * alpha))


def contaminate(f: EmpiricalDistribution, eps: float, y: float) -> EmpiricalDistribution:
    """Mixture (1 - eps) F + eps * (point mass at y).

    The new atom is merged with an existing one at exactly the same
    location; weights still sum to 1.
    """
    if not 0.0 < eps < 1.0:
        raise InvalidInputError(f"eps must lie in (0, 1), got {eps}")
    if not math.isfinite(y):
        raise InvalidInputError(f"contamination location must be finite, got {y}")
    loc = f.locations
    w = f.weights * (1.0 - eps)
    hit = np.nonzero(loc == y)[0]
    if hit.size:
        w = w.copy()
        w[hit[0]] += eps
        return EmpiricalDistribution(loc, w)
    return EmpiricalDistribution(np.append(loc, y), np.append(w, eps))


_EPS_LADDER = (1e-3, 1e-4, 1e-5)


def influence_function(t: FunctionalKind, f: EmpiricalDistribution, y: float) -> float:
    """Directional derivative of the functional toward a point mass at y.

    Difference quotients at eps = 1e-3, 1e-4, 1e-5 are Richardson-
    extrapolated (the quotient error is first order in eps); if the two
    extrapolants still disagree by more than 1e-3 in relative spread the
    quotient sequence has not converged and NumericalFailureError is
    raised.  For MEAN the quotient is eps-independent and the result is
    exactly y - mean(F) up to rounding.
    """
    base = evaluate(t, f)
    quotients = [
        (evaluate(t, contaminate(f, eps, y)) - base) / eps for eps in _EPS_LADDER
    ]
    # eliminate the O(eps) error term; ladder ratio is 10
    r12 = (10.0 * quotients[1] - quotients[0]) / 9.0
    r23 = (10.0 * quotients[2] - quotients[1]) / 9.0
    floor = 1e-6 * (1.0 + abs(y) + abs(base))
    spread = abs(r12 - r23) / max(abs(r12), abs(r23), floor)
    if spread > 1e-3:
        raise NumericalFailureError(
            f"influence quotient did not converge at y = {y}: "
            f"extrapolants {r12:.6g} and {r23:.6g}"
        )
    return float(r23)


@dataclass(frozen=True, eq=False)
class InfluenceProfile:
    """Influence values over probe points plus the derived sensitivity summary.

    ``gross_error_sensitivity`` is +inf when ``unbounded_flag`` is set; the
    flag certifies growth of |IF| across the probe range rather than a
    literal supremum over the whole line.
    """

    probe_points: np.ndarray
    values: np.ndarray
    gross_error_sensitivity: float
    unbounded_flag: bool
    asymptotic_variance: float


def influence_profile(
    t: FunctionalKind, f: EmpiricalDistribution, probe_points
) -> InfluenceProfile:
    """Influence function over sorted probes, with growth and variance summaries.

    The unbounded flag is set when |IF| grows at least linearly in |y| over
    the outer 20% of probe magnitudes (least-squares slope > 0.5).  The
    asymptotic variance integrates IF^2 against the distribution itself.
    """
    probes = np.asarray(probe_points, dtype=float)
    if probes.size == 0:
        raise InvalidInputError("need at least one probe point")
    if np.any(np.diff(probes) < 0):
        raise InvalidInputError("probe points must be sorted ascending")
    values = np.array([influence_function(t, f, y) for y in probes])

    unbounded = _grows_linearly(np.abs(probes), np.abs(values))
    gamma = float("inf") if unbounded else float(np.max(np.abs(values)))
    variance = float(
        np.dot(f.weights, np.array([influence_function(t, f, y) for y in f.locations]) ** 2)
    )
    return InfluenceProfile(
        probe_points=probes,
        values=values,
        gross_error_sensitivity=gamma,
        unbounded_flag=unbounded,
        asymptotic_variance=variance,
    )


def _grows_linearly(magnitudes: np.ndarray, if_abs: np.ndarray) -> bool:
    # one |IF| value per distinct probe magnitude (keep the largest), then a
    # raw-space slope over the outer 20% of magnitudes
    per_mag: dict[float, float] = {}
    for m, v in zip(magnitudes, if_abs):
        per_mag[m] = max(per_mag.get(m, 0.0), v)
    if len(per_mag) < 2:
        return False
    mags = np.array(sorted(per_mag))
    vals = np.array([per_mag[m] for m in mags])
    outer = max(2, math.ceil(0.2 * mags.size))
    x, v = mags[-outer:], vals[-outer:]
    slope, _ = np.polyfit(x, v, 1)
    return bool(slope > 0.5)


@dataclass(frozen=True)
class AttackResult:
    """Witness contamination that drives the mean to a requested target."""

    y: float
    achieved: float
    distance: float


def sensitivity_attack(f: EmpiricalDistribution, eps: float, target: float) -> AttackResult:
    """Place eps of mass so the contaminated mean equals the target exactly.

    Solves (1-eps)*mean(F) + eps*y = target for y; works for every target
    and every eps in (0, 1), which is precisely what makes the mean a
    sensitive functional.  At eps = 0 no attack is possible, so that input
    is rejected.
    """
    if not 0.0 < eps < 1.0:
        raise InvalidInputError(f"eps must lie in (0, 1), got {eps}")
    mu = evaluate(MEAN, f)
    y = (target - (1.0 - eps) * mu) / eps
    achieved = evaluate(MEAN, contaminate(f, eps, y))
    return AttackResult(y=float(y), achieved=float(achieved), distance=float(eps))
