"""Rademacher functions and the randomized lacunary family

    F_y(z) = sum_k R_k(y) a_k z^(2^k - 1),    R_k(y) = sign sin(2^(k+1) pi y).

R_k(y) = 1 - 2 d_{k+1}(y) where d_i is the i-th binary digit of y, so
R_0..R_{K-1} are constant on dyadic cells of length 2^-K and run through
every sign pattern exactly once.  The dy-integral of any function of these
signs is therefore the plain average over the 2^K patterns.
"""

import math
from dataclasses import dataclass

import numpy as np

from ._parallel import pmap
from .errors import DomainError, ResourceError
from .lacunary import GapSeries

MAX_EXACT_TERMS = 24
_BLOCK_BITS = 20


def rademacher(k, y):
    """R_k(y) in {-1, +1}; +1 where sin(2^(k+1) pi y) vanishes.

    Vectorized over ``y``.  Uses the binary expansion of y, which is exact
    for floats, instead of evaluating the sine.
    """
    y = np.asarray(y, dtype=float)
    if np.any((y < 0) | (y > 1)):
        raise DomainError("Rademacher functions are defined for 0 <= y <= 1")
    u = np.fmod(np.ldexp(y, k + 1), 2.0)
    out = np.where(u <= 1.0, 1, -1)
    return int(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class RademacherFamily:
    """The family F_y built on a gap series with exponents 2^k - 1.

    ``size`` (K) is the number of randomized terms, i.e. the base truncation
    order plus one.
    """

    base: GapSeries

    def __post_init__(self):
        if self.base.rule != "2^k-1":
            raise DomainError("the Rademacher family uses exponents 2^k - 1")

    @property
    def size(self):
        return len(self.base.coeffs)

    def signs(self, y):
        """Sign vectors (R_0(y), ..., R_{K-1}(y)), last axis k."""
        y = np.asarray(y, dtype=float)
        return np.stack([rademacher(k, y) for k in range(self.size)], axis=-1)

    def weights(self, z):
        """w_k = a_k z^(n_k)."""
        return self.base.terms(z)


def family_eval(fam, y, z):
    """F_y(z) = sum_k R_k(y) a_k z^(n_k)."""
    if abs(z) >= 1:
        raise DomainError(f"|z| must be < 1, got {abs(z)}")
    return complex(np.dot(fam.signs(y), fam.weights(z)))


def sign_sums(w):
    """All 2^K values sum_k eps_k w_k, eps in {-1, 1}^K.

    Index i encodes the pattern by its bits (bit k set means eps_k = -1).
    """
    sums = np.zeros(1, dtype=complex)
    for wk in w:
        sums = np.concatenate([sums + wk, sums - wk])
    return sums


def _gray_offsets(w_high):
    """Partial sums over the high sign bits in Gray-code order; consecutive
    patterns differ in one sign, so each offset is an O(1) update."""
    h = len(w_high)
    offset = complex(np.sum(w_high))
    eps = np.ones(h)
    out = [offset]
    for i in range(1, 2 ** h):
        bit = (i & -i).bit_length() - 1
        eps[bit] = -eps[bit]
        offset += 2 * eps[bit] * w_high[bit]
        out.append(offset)
    return out


def _abs_power_sum(v, q):
    terms = v.real * v.real + v.imag * v.imag if q == 2 else np.abs(v) ** q
    return math.fsum(terms)


def enumerate_moment(w, p):
    """Exact average of |sum eps_k w_k|^(2p) over all sign patterns.

    The low 20 signs are enumerated as one vector; the remaining high signs
    are walked in Gray-code order, one independent block each.  Block sums
    use compensated summation and are merged in block order.
    """
    w = np.asarray(w, dtype=complex)
    K = len(w)
    if K > MAX_EXACT_TERMS:
        raise ResourceError(f"exact enumeration is limited to {MAX_EXACT_TERMS} terms "
                            f"(got {K}); use montecarlo mode")
    low = sign_sums(w[:_BLOCK_BITS])
    offsets = _gray_offsets(w[_BLOCK_BITS:])
    blocks = pmap(lambda c: _abs_power_sum(low + c, 2 * p), offsets)
    return math.fsum(blocks) / 2.0 ** K


def montecarlo_moment(w, p, seed, samples, tasks=8):
    """Average of |F_y|^(2p) over uniformly drawn y; returns (mean, stderr).

    Each task draws from its own generator spawned from ``seed``.
    """
    w = np.asarray(w, dtype=complex)
    K = len(w)
    if K > 52:
        raise DomainError("at most 52 Rademacher digits are resolved by a double")
    children = np.random.SeedSequence(seed).spawn(tasks)
    counts = [samples // tasks + (1 if i < samples % tasks else 0) for i in range(tasks)]

    def run(args):
        ss, n = args
        y = np.random.default_rng(ss).random(n)
        signs = np.stack([rademacher(k, y) for k in range(K)], axis=-1)
        v = signs @ w
        vals = np.abs(v) ** (2 * p)
        return math.fsum(vals), math.fsum(vals * vals)

    parts = pmap(run, zip(children, counts))
    s1 = math.fsum(a for a, _ in parts)
    s2 = math.fsum(b for _, b in parts)
    mean = s1 / samples
    var = max(s2 / samples - mean * mean, 0.0)
    return mean, math.sqrt(var / max(samples - 1, 1))


def closed_form_moment(w, p):
    """Exact sign average for p = 1 and p = 2.

    p = 1: A = sum |w_k|^2.  p = 2: 2 A^2 + |sum w_k^2|^2 - 2 sum |w_k|^4
    (for real w this is 3 A^2 - 2 sum w_k^4).
    """
    w = np.asarray(w, dtype=complex)
    a2 = (w * w.conj()).real
    big_a = math.fsum(a2)
    if p == 1:
        return big_a
    if p == 2:
        b = complex(np.sum(w * w))
        return 2 * big_a ** 2 + abs(b) ** 2 - 2 * math.fsum(a2 ** 2)
    raise DomainError(f"closed form available only for p in {{1, 2}}, got {p}")


def moment_integral(fam, z, p, mode="exact", seed=0, samples=100_000, full_output=False):
    """int_0^1 |F_y(z)|^(2p) dy.

    ``mode`` is ``"exact"`` (enumeration of all 2^K sign patterns, K <= 24),
    ``"closed"`` (orthogonality identities, p in {1, 2}, any K) or
    ``"montecarlo"`` (seeded sampling of y; ``full_output`` adds the
    standard error).
    """
    if abs(z) >= 1:
        raise DomainError(f"|z| must be < 1, got {abs(z)}")
    if p <= 0:
        raise DomainError(f"p must be positive, got {p}")
    w = fam.weights(complex(z))
    stderr = 0.0
    if mode == "exact":
        value = enumerate_moment(w, p)
    elif mode == "closed":
        value = closed_form_moment(w, p)
    elif mode == "montecarlo":
        value, stderr = montecarlo_moment(w, p, seed, samples)
    else:
        raise DomainError(f"unknown mode {mode!r}")
    if full_output:
        return value, {"mode": mode, "K": len(w), "stderr": stderr,
                       "seed": seed if mode == "montecarlo" else None,
                       "samples": samples if mode == "montecarlo" else None}
    return value
