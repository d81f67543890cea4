"""Gauge functions omega on (0, 1] and their quadratic integrals.

A gauge is one of three parametric families (optionally multiplied by a
positive constant ``scale``)::

    const       omega(t) = 1
    pow(a)      omega(t) = t**a,                 0 < a < 1
    log(b)      omega(t) = (1 + ln(1/t))**b,     b <= 0

or a user supplied callable (``Gauge.custom``), for which everything is
computed numerically.  The quadratic integral is

    I(x) = int_x^1 omega(t)^2 / t dt,     Phi(x) = 1 + I(x),

and the dyadic sum Psi(r) = sum_k omega(2^-k)^2 r^(2^k - 1).
"""

import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Optional

import numpy as np

from ._quadrature import dyadic_breakpoints, quad
from .errors import DomainError, ParseError, QuadratureError

KINDS = ("const", "pow", "log", "custom")

#: Relative slack allowed when scanning sampled values for monotonicity.
MONOTONE_RTOL = 1e-12

_PSI_TAIL_TOL = 1e-12
_PSI_MAX_ORDER = 62


@dataclass(frozen=True)
class Gauge:
    """A gauge function together with its claimed regularity exponent.

    ``eps`` is the exponent in the hypothesis "omega(t)/t^(1-eps) is
    nonincreasing".  When omitted a value that makes the hypothesis hold
    is filled in (see :func:`default_eps`).
    """

    kind: str
    param: float = 0.0
    eps: Optional[float] = None
    scale: float = 1.0
    func: Optional[Callable] = field(default=None, compare=False, repr=False)
    label: str = ""

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown gauge kind {self.kind!r}")
        if self.kind == "pow" and not 0 < self.param < 1:
            raise DomainError(f"pow exponent must lie in (0, 1), got {self.param}")
        if self.kind == "log" and self.param > 0:
            raise DomainError(f"log exponent must be <= 0 for an increasing gauge, got {self.param}")
        if self.kind == "custom" and self.func is None:
            raise DomainError("custom gauge needs a callable")
        if not self.scale > 0:
            raise DomainError(f"scale must be positive, got {self.scale}")
        if self.eps is None:
            object.__setattr__(self, "eps", default_eps(self.kind, self.param))
        if not 0 < self.eps < 1:
            raise DomainError(f"eps must lie in (0, 1), got {self.eps}")

    @classmethod
    def const(cls, eps=None, scale=1.0):
        return cls("const", 0.0, eps, scale)

    @classmethod
    def power(cls, alpha, eps=None, scale=1.0):
        return cls("pow", float(alpha), eps, scale)

    @classmethod
    def log(cls, beta, eps=None, scale=1.0):
        return cls("log", float(beta), eps, scale)

    @classmethod
    def custom(cls, func, eps=0.5, label="custom"):
        """Wrap a vectorized callable ``func(t)``; only numeric paths apply."""
        return cls("custom", 0.0, eps, 1.0, func, label)

    @property
    def has_closed_form(self):
        return self.kind != "custom"

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        if self.kind == "const":
            out = np.ones_like(t)
        elif self.kind == "pow":
            out = t ** self.param
        elif self.kind == "log":
            out = (1.0 - np.log(t)) ** self.param
        else:
            out = np.asarray(self.func(t), dtype=float) * np.ones_like(t)
        out = self.scale * out
        return out if out.ndim else float(out)

    def to_dsl(self):
        if self.kind == "custom":
            return f"custom:{self.label}"
        head = self.kind if self.kind == "const" else f"{self.kind}:{self.param!r}"
        text = f"{head};eps={self.eps!r}"
        if self.scale != 1.0:
            text += f";scale={self.scale!r}"
        return text

    def __str__(self):
        return self.to_dsl()


def default_eps(kind, param):
    """Regularity exponent used when none is given.

    For ``pow(a)`` the hypothesis holds iff eps <= 1 - a; for ``log(b)`` iff
    eps <= 1 + b.  The midpoint of the admissible range is used, except that
    const and log(b >= -1/2) keep 0.5.
    """
    if kind == "pow":
        return (1.0 - param) / 2.0
    if kind == "log" and param < -0.5:
        return (1.0 + param) / 2.0 if param > -1 else 0.5
    return 0.5


def parse_gauge(text):
    """Parse the gauge mini-DSL, e.g. ``"pow:0.5;eps=0.25"``.

    Grammar: ``kind[:number](;key=number)*`` with kind in const/pow/log and
    keys eps/scale.  Matching is case-sensitive.
    """
    parts = text.split(";")
    head = parts[0]
    kind, sep, arg = head.partition(":")
    if kind not in ("const", "pow", "log"):
        raise ParseError(f"unknown gauge kind {kind!r}", text, 0)
    if kind == "const":
        if sep:
            raise ParseError("const takes no parameter", text, len(kind))
        param = 0.0
    else:
        if not sep:
            raise ParseError(f"{kind} needs a parameter ({kind}:value)", text, len(kind))
        param = _number(arg, text, len(kind) + 1)
    options = {}
    pos = len(head) + 1
    for part in parts[1:]:
        key, eq, val = part.partition("=")
        if key not in ("eps", "scale"):
            raise ParseError(f"unknown option {key!r}", text, pos)
        if not eq:
            raise ParseError(f"option {key!r} needs '='", text, pos + len(key))
        if key in options:
            raise ParseError(f"duplicate option {key!r}", text, pos)
        options[key] = _number(val, text, pos + len(key) + 1)
        pos += len(part) + 1
    try:
        return Gauge(kind, param, options.get("eps"), options.get("scale", 1.0))
    except DomainError as exc:
        raise ParseError(str(exc), text, len(kind) + 1 if sep else 0) from exc


def _number(token, text, pos):
    try:
        value = float(token)
    except ValueError:
        raise ParseError(f"expected a number, got {token!r}", text, pos) from None
    if not math.isfinite(value):
        raise ParseError(f"expected a finite number, got {token!r}", text, pos)
    return value


def eval_gauge(g, t):
    """omega(t) for scalar ``t`` in (0, 1]."""
    if not 0 < t <= 1:
        raise DomainError(f"gauge argument must lie in (0, 1], got {t}")
    return float(g(t))


# --- regularity -------------------------------------------------------------

class Condition(NamedTuple):
    name: str
    passed: bool
    violation: Optional[tuple]  # first (t1, t2) breaking the monotonicity


@dataclass(frozen=True)
class RegularityReport:
    gauge: str
    conditions: tuple

    @property
    def passed(self):
        return all(c.passed for c in self.conditions)

    def failed(self):
        return [c for c in self.conditions if not c.passed]

    def __getitem__(self, name):
        for c in self.conditions:
            if c.name == name:
                return c
        raise KeyError(name)


def _first_break(x, y, increasing):
    """First consecutive pair of ``x`` (sorted ascending) where ``y`` breaks
    the claimed monotonicity, or None."""
    for i in range(len(x) - 1):
        a, b = y[i], y[i + 1]
        slack = MONOTONE_RTOL * max(abs(a), abs(b))
        if (increasing and b < a - slack) or (not increasing and b > a + slack):
            return (float(x[i]), float(x[i + 1]))
    return None


def check_regularity(g, grid):
    """Scan the gauge hypotheses on a sorted grid in (0, 1].

    Checked: omega nondecreasing; omega(t)/t^(1-eps) nonincreasing; and, in
    the variable tau = 1/t, tau*omega(1/tau)/tau nonincreasing and
    tau*omega(1/tau)/tau^eps nondecreasing.  Violations are reported, not
    raised.
    """
    t = np.sort(np.asarray(grid, dtype=float))
    if t.size and (t[0] <= 0 or t[-1] > 1):
        raise DomainError("regularity grid must lie in (0, 1]")
    w = g(t)
    tau = 1.0 / t[::-1]
    w_tau = g(1.0 / tau)
    conds = []
    positive = bool(np.all(w > 0))
    conds.append(Condition("omega positive", positive, None if positive else
                           (float(t[np.argmin(w > 0)]),) * 2))
    conds.append(Condition("omega nondecreasing", *_cond(t, w, True)))
    conds.append(Condition("omega(t)/t^(1-eps) nonincreasing",
                           *_cond(t, w / t ** (1.0 - g.eps), False)))
    conds.append(Condition("tau*omega(1/tau)/tau nonincreasing",
                           *_cond(tau, tau * w_tau / tau, False)))
    conds.append(Condition("tau*omega(1/tau)/tau^eps nondecreasing",
                           *_cond(tau, tau * w_tau / tau ** g.eps, True)))
    return RegularityReport(g.to_dsl(), tuple(conds))


def _cond(x, y, increasing):
    brk = _first_break(x, y, increasing)
    return brk is None, brk


def dyadic_grid(m_max=20, m_min=0):
    """Points 2^-m, m = m_max..m_min, ascending."""
    return 2.0 ** -np.arange(m_max, m_min - 1, -1, dtype=float)


# --- quadratic integral -----------------------------------------------------

@dataclass(frozen=True)
class QuadraticIntegralValue:
    x: float
    value_I: float
    value_Phi: float
    method: str
    abs_error_bound: float


def _closed_form_I(g, x):
    c2 = g.scale ** 2
    if g.kind == "const":
        return -c2 * math.log(x)
    if g.kind == "pow":
        a2 = 2.0 * g.param
        return -c2 * math.expm1(a2 * math.log(x)) / a2
    b = 2.0 * g.param + 1.0
    big_l = math.log1p(-math.log(x))
    if b == 0.0:
        return c2 * big_l
    return c2 * math.expm1(b * big_l) / b


def quadratic_integral(g, x, method="auto", tol=1e-11):
    """I(x) and Phi(x) = 1 + I(x) for 0 < x < 1.

    ``method`` is ``"closed"``, ``"quadrature"`` or ``"auto"`` (closed form
    whenever the gauge has one).
    """
    if not 0 < x < 1:
        raise DomainError(f"quadratic integral needs 0 < x < 1, got {x}")
    if method == "auto":
        method = "closed" if g.has_closed_form else "quadrature"
    if method == "closed":
        if not g.has_closed_form:
            raise DomainError("custom gauges have no closed form")
        value = _closed_form_I(g, x)
        err = 4 * np.finfo(float).eps * max(1.0, abs(value))
    elif method == "quadrature":
        value, err = quad(lambda t: g(t) ** 2 / t, x, 1.0, tol=tol,
                          breakpoints=dyadic_breakpoints(x, 1.0))
        if err > 1e-10:
            raise QuadratureError("quadratic integral did not converge", value, err)
    else:
        raise DomainError(f"unknown method {method!r}")
    return QuadraticIntegralValue(x, value, 1.0 + value, method, err)


def phi(g, x):
    """Phi(x) = 1 + I(x); accepts x = 1 (Phi(1) = 1)."""
    if x == 1:
        return 1.0
    return quadratic_integral(g, x).value_Phi


def phi_values(g, x):
    """Vectorized Phi(x) for x in (0, 1]."""
    x = np.asarray(x, dtype=float)
    if np.any((x <= 0) | (x > 1)):
        raise DomainError("Phi is defined on (0, 1]")
    if not g.has_closed_form:
        return np.vectorize(lambda v: phi(g, float(v)), otypes=[float])(x)
    c2 = g.scale ** 2
    if g.kind == "const":
        val = -np.log(x)
    elif g.kind == "pow":
        a2 = 2.0 * g.param
        val = -np.expm1(a2 * np.log(x)) / a2
    else:
        b = 2.0 * g.param + 1.0
        big_l = np.log1p(-np.log(x))
        val = big_l if b == 0.0 else np.expm1(b * big_l) / b
    return 1.0 + c2 * val


def limit_at_zero(g):
    """I(0+) for closed-form gauges (``math.inf`` when divergent)."""
    c2 = g.scale ** 2
    if g.kind == "const":
        return math.inf
    if g.kind == "pow":
        return c2 / (2.0 * g.param)
    if g.kind == "log":
        b = 2.0 * g.param + 1.0
        return math.inf if b >= 0 else c2 / -b
    raise DomainError("custom gauges have no closed-form limit")


# --- dyadic sum Psi ---------------------------------------------------------

class PsiValue(NamedTuple):
    value: float
    tail_bound: float
    order: int


def dyadic_powers(r, exponents):
    """r**n for nonnegative float r < 1 and integer exponents n, computed
    as exp(n log r); underflow flushes to 0."""
    exponents = np.asarray(exponents, dtype=float)
    if r == 0:
        return np.where(exponents == 0, 1.0, 0.0)
    with np.errstate(under="ignore"):
        return np.exp(exponents * math.log(r))


def geometric_tail(r, first_exponent):
    """sum_{n >= N} r^n = r^N / (1 - r)."""
    if r == 0:
        return 1.0 if first_exponent == 0 else 0.0
    return math.exp(first_exponent * math.log(r)) / (1.0 - r)


def psi_order(r, sup_sq=1.0, tol=_PSI_TAIL_TOL, cap=_PSI_MAX_ORDER):
    """Smallest K whose Psi tail bound at r is <= tol (at most ``cap``)."""
    for k in range(cap + 1):
        if sup_sq * geometric_tail(r, 2.0 ** (k + 1) - 1) <= tol:
            return k
    return cap


def psi(g, r, K=None):
    """Psi(r) = sum_k omega(2^-k)^2 r^(2^k - 1) truncated at k = K.

    The tail is bounded by omega(1)^2 r^(2^(K+1) - 1) / (1 - r), valid for
    nondecreasing gauges.
    """
    if not 0 <= r < 1:
        raise DomainError(f"Psi needs 0 <= r < 1, got {r}")
    sup_sq = float(g(1.0)) ** 2
    if K is None:
        K = psi_order(r, sup_sq)
    k = np.arange(K + 1)
    coeffs = g(2.0 ** -k) ** 2
    terms = coeffs * dyadic_powers(r, 2.0 ** k - 1)
    tail = sup_sq * geometric_tail(r, 2.0 ** (K + 1) - 1)
    return PsiValue(math.fsum(terms), tail, K)


# --- dichotomy --------------------------------------------------------------

@dataclass(frozen=True)
class Dichotomy:
    """Whether I(0+) is finite.  ``status`` is Convergent, Divergent or
    Unknown; numeric evidence never yields Divergent."""

    status: str
    limit: Optional[float] = None
    evidence: tuple = ()

    def __str__(self):
        return self.status


def classify_dichotomy(g, depth=40):
    if g.has_closed_form:
        lim = limit_at_zero(g)
        if math.isinf(lim):
            return Dichotomy("Divergent", lim)
        return Dichotomy("Convergent", lim)
    seq = tuple(quadratic_integral(g, 2.0 ** -m, method="quadrature").value_I
                for m in range(1, depth + 1))
    return Dichotomy("Unknown", None, seq)
