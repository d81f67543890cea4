"""Integral means on circles and grid estimates of Bloch-type norms.

All norm values here are grid sups: maxima over a finite set of points,
hence lower estimates of the true suprema.
"""

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy import optimize

from ._parallel import pmap
from .errors import DomainError, NumericWarning
from .lacunary import GapSeries

DEFAULT_RTOL = 1e-8
MAX_ANGLES = 2 ** 26


@dataclass(frozen=True)
class RadialGrid:
    """Radii r = 1 - 2^(-j/s) for j = s*m_min .. s*m_max (s = subdivisions)
    and ``angles`` uniform angles per circle."""

    m_min: int = 0
    m_max: int = 20
    angles: int = 16
    subdivisions: int = 1

    def __post_init__(self):
        if self.m_min < 0 or self.m_max < self.m_min:
            raise DomainError(f"need 0 <= m_min <= m_max, got {self.m_min}, {self.m_max}")
        if self.angles < 16 or self.angles & (self.angles - 1):
            raise DomainError(f"angles must be a power of two >= 16, got {self.angles}")
        if self.subdivisions < 1:
            raise DomainError("subdivisions must be >= 1")

    @property
    def radii(self):
        j = np.arange(self.m_min * self.subdivisions, self.m_max * self.subdivisions + 1)
        # adding 0.0 turns the -0.0 at j = 0 into +0.0
        return -np.expm1(-j / self.subdivisions * math.log(2.0)) + 0.0

    @property
    def thetas(self):
        return 2 * np.pi * np.arange(self.angles) / self.angles

    def describe(self):
        return {"radii": "1 - 2^-m", "m_min": self.m_min, "m_max": self.m_max,
                "angles": self.angles, "subdivisions": self.subdivisions}


@dataclass(frozen=True)
class Holomorphic:
    """A holomorphic function on the disk given by callables.

    ``derivative`` is f'; the radial derivative is z f'(z).  Set
    ``nonnegative`` when all Taylor coefficients are >= 0 (then
    |Rf| on a circle is largest at theta = 0).
    """

    func: Callable
    derivative: Optional[Callable] = None
    nonnegative: bool = False
    label: str = ""

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        return np.asarray(self.func(z), dtype=complex) * np.ones_like(z)

    def radial_derivative(self, z):
        if self.derivative is None:
            raise DomainError(f"{self.label or 'function'} has no derivative")
        z = np.asarray(z, dtype=complex)
        return z * np.asarray(self.derivative(z), dtype=complex)

    def derivative_view(self):
        return Holomorphic(self.radial_derivative, label=f"R[{self.label}]")


@dataclass(frozen=True)
class NormEstimate:
    value: float
    argmax: tuple  # (r, theta)
    grid: dict
    at_zero: float = 0.0
    kind: str = "grid sup"
    ratios: tuple = field(default=(), repr=False)


# --- integral means ---------------------------------------------------------

def _power_sum(f, r, n, p, shift):
    if hasattr(f, "circle_power_sum"):
        return f.circle_power_sum(r, n, p, shift=shift)
    chunk = 2 ** 18
    total = []
    for start in range(0, n, chunk):
        j = np.arange(start, min(n, start + chunk)) + shift
        vals = np.asarray(f(r * np.exp(2j * np.pi * j / n)))
        total.append(float(np.sum(np.abs(vals) ** p)))
    return math.fsum(total)


def starting_angles(r, minimum=16):
    """Smallest power of two >= max(minimum, 4 / (1 - r)).

    The boundary behaviour at radius r lives on angular scale (1 - r).
    """
    need = max(minimum, 4.0 / (1.0 - r))
    return 1 << max(0, math.ceil(math.log2(need)))


def integral_mean(f, p, r, n_angles=None, rtol=DEFAULT_RTOL, max_angles=MAX_ANGLES,
                  full_output=False):
    """M_p(f, r) = (mean over the circle of |f|^p)^(1/p) by the trapezoid rule.

    The angle count starts at ``n_angles`` (default from
    :func:`starting_angles`) and doubles, reusing previous samples, until
    two successive means of |f|^p agree within ``rtol``.  At ``max_angles``
    a :class:`NumericWarning` is issued.  With ``full_output`` returns
    ``(value, info)``.
    """
    if not 0 <= r < 1:
        raise DomainError(f"integral means need 0 <= r < 1, got {r}")
    if p <= 0:
        raise DomainError(f"p must be positive, got {p}")
    n = starting_angles(r) if n_angles is None else int(n_angles)
    if n < 1 or n & (n - 1):
        raise DomainError(f"angle count must be a power of two, got {n}")
    total = _power_sum(f, r, n, p, 0.0)
    prev = total / n
    converged = False
    while n < max_angles:
        total += _power_sum(f, r, n, p, 0.5)
        n *= 2
        mean = total / n
        if abs(mean - prev) <= rtol * abs(mean):
            prev = mean
            converged = True
            break
        prev = mean
    if not converged:
        warnings.warn(f"integral mean at r={r} not converged with {n} angles",
                      NumericWarning, stacklevel=2)
    value = prev ** (1.0 / p)
    if full_output:
        return value, {"n_angles": n, "converged": converged}
    return value


# --- norm estimates ---------------------------------------------------------

def _value_at_zero(f):
    return abs(complex(np.asarray(f(0j)).ravel()[0]))


def _nonnegative(f):
    if isinstance(f, GapSeries):
        return f.nonnegative
    return bool(getattr(f, "nonnegative", False))


def _circle_angles(rf, r, grid):
    """Angle count for locating max |Rf| on the circle of radius r: at least
    the grid's, 4 / (1 - r), and four samples per period of the highest
    live frequency when that is known."""
    n = max(grid.angles, starting_angles(r))
    if hasattr(rf, "effective_degree"):
        n = max(n, starting_angles(0.0, 4 * rf.effective_degree(r)))
    return min(n, MAX_ANGLES)


def _top_angles(rf, r, n, count):
    if hasattr(rf, "circle_top"):
        return rf.circle_top(r, n, count)
    chunk = 2 ** 18
    best = []
    for start in range(0, n, chunk):
        th = 2 * np.pi * np.arange(start, min(n, start + chunk)) / n
        vals = np.abs(np.asarray(rf(r * np.exp(1j * th))))
        idx = np.argsort(-vals, kind="stable")[:count]
        best.extend(zip(-vals[idx], th[idx]))
    return [t for _, t in sorted(best)[:count]]


def circle_max(rf, r, grid, count=8):
    """max |rf| on the circle of radius r and the angle attaining it.

    Samples the circle finely (see :func:`_circle_angles`), then polishes
    the ``count`` best samples by bounded scalar maximization within one
    sample spacing.  The result is still a lower estimate of the true max.
    """
    n = _circle_angles(rf, r, grid)
    h = 2 * np.pi / n
    mod = lambda t: abs(complex(np.asarray(rf(r * np.exp(1j * t)))))  # noqa: E731
    best_val, best_theta = -1.0, 0.0
    for t0 in _top_angles(rf, r, n, count):
        v0 = mod(t0)
        if v0 > best_val:
            best_val, best_theta = v0, t0
        res = optimize.minimize_scalar(lambda t: -mod(t), bounds=(t0 - h, t0 + h),
                                       method="bounded", options={"xatol": 1e-3 * h})
        if -res.fun > best_val:
            best_val, best_theta = -res.fun, float(np.mod(res.x, 2 * np.pi))
    return best_val, best_theta


def bloch_norm_estimate(f, g, grid):
    """|f(0)| + grid sup of |Rf(z)| (1 - |z|) / omega(1 - |z|).

    For series with nonnegative coefficients the circle max of |Rf| sits at
    theta = 0 and only that point is sampled.  Otherwise each circle is
    searched as in :func:`circle_max`.
    """
    radii = grid.radii
    weight = (1.0 - radii) / g(1.0 - radii)
    if _nonnegative(f):
        thetas = np.zeros(len(radii))
        rf = np.abs(np.asarray(f.radial_derivative(radii.astype(complex))))
    else:
        rfun = f.derivative_view() if hasattr(f, "derivative_view") else f.radial_derivative
        found = pmap(lambda r: circle_max(rfun, float(r), grid), radii)
        rf = np.array([v for v, _ in found])
        thetas = np.array([t for _, t in found])
    ratio = rf * weight
    i = int(np.argmax(ratio))
    f0 = _value_at_zero(f)
    return NormEstimate(f0 + float(ratio[i]), (float(radii[i]), float(thetas[i])),
                        grid.describe(), f0, ratios=tuple(ratio))


def hardy_bloch_norm_estimate(f, g, p, grid):
    """|f(0)| + grid sup over radii of M_p(Rf, r) (1 - r) / omega(1 - r)."""
    if p <= 0:
        raise DomainError(f"p must be positive, got {p}")
    rf = f.derivative_view()
    radii = grid.radii
    means = np.array(pmap(lambda r: integral_mean(rf, p, float(r)), radii))
    ratio = means * (1.0 - radii) / g(1.0 - radii)
    i = int(np.argmax(ratio))
    f0 = _value_at_zero(f)
    return NormEstimate(f0 + float(ratio[i]), (float(radii[i]), None), grid.describe(), f0,
                        ratios=tuple(ratio))
