"""Hadamard gap series sum_k a_k z^(n_k) with n_k = 2^k or 2^k - 1.

Truncation is explicit: a series stores a_0..a_K.  When it was built from a
gauge the omitted coefficients are bounded by omega(1) (the gauge is
nondecreasing), which gives computable tail bounds; otherwise the series is
the polynomial it stores and the tail is zero.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .errors import DomainError, UnsupportedError
from .gauge import Gauge, parse_gauge

RULES = ("2^k", "2^k-1")
DEFAULT_TAIL_TOL = 1e-12
MAX_ORDER = 40

# Angle counts up to 2**_STORED_LEVELS are materialized; larger circles are
# streamed in chunks of that size.
_STORED_LEVELS = 20


class Evaluation(NamedTuple):
    value: complex
    tail_bound: float


def exponent(k, rule):
    return 2 ** k if rule == "2^k" else 2 ** k - 1


@dataclass(frozen=True)
class GapSeries:
    coeffs: tuple
    rule: str = "2^k"
    gauge: Optional[Gauge] = None

    def __post_init__(self):
        if self.rule not in RULES:
            raise DomainError(f"exponent rule must be one of {RULES}, got {self.rule!r}")
        if len(self.coeffs) == 0:
            raise DomainError("a gap series needs at least one coefficient")
        object.__setattr__(self, "coeffs", tuple(float(a) for a in self.coeffs))

    @property
    def order(self):
        """Truncation order K (index of the last stored coefficient)."""
        return len(self.coeffs) - 1

    @property
    def exponents(self):
        return [exponent(k, self.rule) for k in range(len(self.coeffs))]

    @property
    def coeff_bound(self):
        """Bound on |a_k| for the omitted k > K."""
        return float(self.gauge(1.0)) if self.gauge is not None else 0.0

    @property
    def nonnegative(self):
        return all(a >= 0 for a in self.coeffs)

    # -- pointwise evaluation ------------------------------------------------

    def terms(self, z, derivative=False):
        """Array of a_k z^(n_k) (times n_k if ``derivative``), last axis k."""
        z = np.asarray(z, dtype=complex)
        if np.any(np.abs(z) >= 1):
            raise DomainError("gap series are evaluated only for |z| < 1")
        k = np.arange(len(self.coeffs))
        n = np.array(self.exponents, dtype=float)
        rho = np.abs(z)[..., None]
        theta = np.angle(z)[..., None]
        with np.errstate(divide="ignore", under="ignore", invalid="ignore"):
            mod = np.where(n == 0, 1.0, np.exp(n * np.log(rho)))
        # 2^k * theta is exact in binary floating point
        ang = np.ldexp(theta, k) - (theta if self.rule == "2^k-1" else 0.0)
        out = np.asarray(self.coeffs) * mod * np.exp(1j * ang)
        if derivative:
            out = out * n
        return out

    def __call__(self, z):
        out = self.terms(z).sum(axis=-1)
        return out if out.ndim else complex(out)

    def radial_derivative(self, z):
        """Rf(z) = z f'(z) = sum a_k n_k z^(n_k)."""
        out = self.terms(z, derivative=True).sum(axis=-1)
        return out if out.ndim else complex(out)

    def _underflow_slack(self, rho):
        n = np.array(self.exponents, dtype=float)
        if rho == 0:
            return 0.0
        with np.errstate(under="ignore"):
            flushed = np.count_nonzero(np.exp(n * math.log(rho)) == 0)
        return flushed * max(abs(a) for a in self.coeffs) * np.finfo(float).tiny

    def evaluate(self, z):
        """Value and certified tail bound B |z|^(n_{K+1}) / (1 - |z|)."""
        z = complex(z)
        value = self(z)
        rho = abs(z)
        n_next = exponent(self.order + 1, self.rule)
        tail = self.coeff_bound * _geometric_tail(rho, n_next)
        return Evaluation(value, tail + self._underflow_slack(rho))

    def radial_derivative_eval(self, z):
        """Rf(z) with tail bound B sum_{n >= N} n |z|^n."""
        z = complex(z)
        value = self.radial_derivative(z)
        rho = abs(z)
        n_next = exponent(self.order + 1, self.rule)
        tail = self.coeff_bound * _weighted_tail(rho, n_next)
        return Evaluation(value, tail + self._underflow_slack(rho))

    # -- circle sums -----------------------------------------------------------

    def circle_coefficients(self, r, derivative=False):
        """c_k with |f(r e^{i theta})| = |sum_k c_k e^{i 2^k theta}|.

        For the 2^k - 1 rule the common factor e^{-i theta} is dropped; it
        does not change the modulus.
        """
        n = np.array(self.exponents, dtype=float)
        with np.errstate(divide="ignore", under="ignore"):
            mod = np.where(n == 0, 1.0, np.exp(n * math.log(r))) if r > 0 else (n == 0) * 1.0
        c = np.asarray(self.coeffs) * mod
        if derivative:
            c = c * n
        return c.astype(complex)

    def circle_power_sum(self, r, n_angles, p, derivative=False, shift=0.0):
        """sum_j |f(r e^{2 pi i (j + shift) / N})|^p over j < N (N a power of 2)."""
        if not 0 <= r < 1:
            raise DomainError(f"circle radius must lie in [0, 1), got {r}")
        return dyadic_circle_power_sum(self.circle_coefficients(r, derivative),
                                       n_angles, p, shift)

    def circle_top(self, r, n_angles, count=1, derivative=False):
        """Angles of the ``count`` largest samples of |f| (or |Rf|) among
        n_angles uniform points on the circle of radius r."""
        c = self.circle_coefficients(r, derivative)
        return [2 * np.pi * j / n_angles for j in dyadic_circle_top(c, n_angles, count)]

    def effective_degree(self, r, derivative=False, rel=1e-16):
        """Largest exponent whose term still matters on the circle of radius r."""
        c = np.abs(self.circle_coefficients(r, derivative))
        if not np.any(c):
            return 0
        live = np.nonzero(c > rel * c.max())[0]
        return int(self.exponents[live[-1]])

    def derivative_view(self):
        """The radial derivative Rf as an evaluable with fast circle sums."""
        return RadialDerivative(self)

    def to_dict(self):
        return {
            "gauge": self.gauge.to_dsl() if self.gauge is not None else None,
            "rule": self.rule,
            "K": self.order,
            "coeffs": list(self.coeffs),
        }

    @classmethod
    def from_dict(cls, data):
        gauge = parse_gauge(data["gauge"]) if data.get("gauge") else None
        coeffs = data["coeffs"]
        if data.get("K", len(coeffs) - 1) != len(coeffs) - 1:
            raise DomainError("K does not match the number of coefficients")
        return cls(tuple(coeffs), data["rule"], gauge)


class RadialDerivative:
    """Rf for a gap series, usable wherever an evaluable is expected."""

    def __init__(self, series):
        self.series = series

    def __call__(self, z):
        return self.series.radial_derivative(z)

    def circle_power_sum(self, r, n_angles, p, shift=0.0):
        return self.series.circle_power_sum(r, n_angles, p, derivative=True, shift=shift)

    def circle_top(self, r, n_angles, count=1):
        return self.series.circle_top(r, n_angles, count, derivative=True)

    def effective_degree(self, r):
        return self.series.effective_degree(r, derivative=True)


def _geometric_tail(rho, n):
    if rho == 0:
        return 1.0 if n == 0 else 0.0
    with np.errstate(under="ignore"):
        return math.exp(n * math.log(rho)) / (1.0 - rho)


def _weighted_tail(rho, n):
    """sum_{m >= n} m rho^m = rho^n (n (1 - rho) + rho) / (1 - rho)^2."""
    if rho == 0:
        return 0.0
    return math.exp(n * math.log(rho)) * (n * (1.0 - rho) + rho) / (1.0 - rho) ** 2


def choose_order(r_max, bound=1.0, rule="2^k", tol=DEFAULT_TAIL_TOL, cap=MAX_ORDER,
                 derivative=False):
    """Smallest K whose tail bound at radius ``r_max`` is <= tol (capped)."""
    tail = _weighted_tail if derivative else _geometric_tail
    for K in range(cap + 1):
        if bound * tail(r_max, exponent(K + 1, rule)) <= tol:
            return K
    return cap


def build_extremal(g, K, rule="2^k"):
    """The gap series with coefficients omega(1), omega(1/2), ..., omega(2^-K)."""
    if K < 0:
        raise DomainError(f"truncation order must be >= 0, got {K}")
    coeffs = g(2.0 ** -np.arange(K + 1))
    return GapSeries(tuple(np.atleast_1d(coeffs)), rule, g)


def gap_eval(s, z):
    """Value and tail bound of a gap series at |z| < 1."""
    if abs(z) >= 1:
        raise DomainError(f"|z| must be < 1, got {abs(z)}")
    return s.evaluate(z)


def radial_derivative_eval(s, z):
    if abs(z) >= 1:
        raise DomainError(f"|z| must be < 1, got {abs(z)}")
    return s.radial_derivative_eval(z)


class L2Membership(NamedTuple):
    status: str  # "InL2", "NotInL2" or "Unknown"
    reason: str


def l2_membership(s):
    """Whether (omega(2^-k))_k is square summable, decided in closed form.

    For nondecreasing gauges sum omega^2(2^-k) >= I(0+), so NotInL2 matches a
    divergent quadratic integral.
    """
    g = s.gauge
    if g is None:
        raise UnsupportedError("l2_membership needs a series built from a gauge")
    if g.kind == "const":
        return L2Membership("NotInL2", "sum of a constant diverges")
    if g.kind == "pow":
        return L2Membership("InL2", f"geometric: omega^2(2^-k) = c^2 2^(-{2 * g.param!r} k)")
    if g.kind == "log":
        expo = 2.0 * g.param
        if expo < -1:
            return L2Membership("InL2", f"(1 + k ln 2)^{expo!r} is summable (exponent < -1)")
        return L2Membership("NotInL2", f"(1 + k ln 2)^{expo!r} dominates the harmonic series")
    partial = np.cumsum(g(2.0 ** -np.arange(64)) ** 2)
    return L2Membership("Unknown", f"partial sums up to k=63: {partial[-1]!r}")


# --- O(N) circle sums for dyadic frequencies --------------------------------

def _phase(frac):
    return np.exp(2j * np.pi * frac)


def shifted_coefficients(c, n_angles, shift):
    """Fold a grid shift theta_j = 2 pi (j + shift) / N into the coefficients."""
    if shift == 0:
        return np.asarray(c, dtype=complex)
    J = int(n_angles).bit_length() - 1
    k = np.arange(len(c))
    # 2^k * shift / N as an exact fraction of a full turn, reduced mod 1
    frac = np.array([math.fmod(math.ldexp(shift, int(kk) - J), 1.0) for kk in k])
    return np.asarray(c, dtype=complex) * _phase(frac)


def _circle_chunks(c, n_angles, shift=0.0):
    """Values of g(theta) = sum_k c_k e^{i 2^k theta} at theta_j = 2 pi (j + shift) / N,
    N = 2^J, yielded in order in chunks of at most 2^20 points.

    Term k depends only on j mod 2^(J-k), so the values on the grid obey

        G_s(j) = G_{s-1}(j mod 2^(s-1)) + c_{J-s} e^{2 pi i j / 2^s},

    starting from the aliased constant G_0 = sum_{k >= J} c_k.  The levels
    are materialized up to 2^20 points and the rest is streamed, so the
    cost is O(N) time and O(min(N, 2^20)) memory.
    """
    N = int(n_angles)
    if N < 1 or N & (N - 1):
        raise DomainError(f"angle count must be a power of two, got {N}")
    J = N.bit_length() - 1
    c = shifted_coefficients(c, N, shift)
    K = len(c) - 1
    coeff = lambda k: c[k] if k <= K else 0.0  # noqa: E731
    stored = min(J, _STORED_LEVELS)
    vals = np.array([c[J:].sum() if J <= K else 0.0], dtype=complex)
    for s in range(1, stored + 1):
        ck = coeff(J - s)
        vals = np.tile(vals, 2)
        if ck != 0:
            vals += ck * _phase(np.arange(2 ** s) / 2 ** s)
    if stored == J:
        yield vals
        return
    # remaining low-frequency terms k = 0..J-stored-1 on chunks of size 2^stored
    size = 2 ** stored
    t = np.arange(size)
    ratios, rows = [], []
    for k in range(J - stored):
        ck = coeff(k)
        if ck != 0:
            period = 2 ** (J - k)
            ratios.append(period // size)
            rows.append(ck * _phase(t / period))
    if not rows:
        for _ in range(N // size):
            yield vals
        return
    ratios = np.array(ratios)
    basis = np.array(rows)
    for q in range(N // size):
        # one matrix-vector product adds every streamed term at once
        yield vals + _phase((q % ratios) / ratios) @ basis


def dyadic_circle_power_sum(c, n_angles, p, shift=0.0):
    """sum_{j<N} |g(theta_j)|^p for g(theta) = sum_k c_k e^{i 2^k theta}
    (see :func:`_circle_chunks` for the grid and the recursion)."""
    return math.fsum(float(np.sum(_abs_power(v, p))) for v in _circle_chunks(c, n_angles, shift))


def dyadic_circle_top(c, n_angles, count=1):
    """Indices j of the ``count`` largest |g(2 pi j / N)|, largest first."""
    best_val = np.empty(0)
    best_idx = np.empty(0, dtype=np.int64)
    offset = 0
    for v in _circle_chunks(c, n_angles):
        a = np.abs(v)
        take = min(count, a.size)
        idx = np.argpartition(-a, take - 1)[:take]
        best_val = np.concatenate([best_val, a[idx]])
        best_idx = np.concatenate([best_idx, idx + offset])
        keep = np.lexsort((best_idx, -best_val))[:count]
        best_val, best_idx = best_val[keep], best_idx[keep]
        offset += a.size
    return [int(j) for j in best_idx]


def _abs_power(v, p):
    if p == 2:
        return v.real * v.real + v.imag * v.imag
    # np.abs goes through hypot, so tiny moduli do not underflow when squared
    return np.abs(v) ** p
