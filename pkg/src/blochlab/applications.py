"""Radial Carleson measures and hyperbolic-derivative audits on the disk.

Measures on [0, 1) and holomorphic self-maps of the disk are parametric and
parsed from small DSL strings::

    power:-0.5            d rho = (1 - r)^beta dr
    atom:0.5:1.0          mass 1.0 at r = 0.5
    mix:[power:0,atom:0.5:1.0]

    scale:0.5             z -> c z
    moebius:0.3           z -> (z + a) / (1 + conj(a) z)
    blaschke:[0.1,0.5i]   finite Blaschke product with these zeros
    atomic:1.0            z -> exp(c (z + 1) / (z - 1))
"""

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import special

from ._quadrature import quad
from .errors import DomainError, ParseError, PreconditionError, SingularityError
from .gauge import classify_dichotomy, phi, phi_values
from .lacunary import build_extremal
from .means import RadialGrid, bloch_norm_estimate, integral_mean
from .report import EstimateReport, Row, summarize
from .stochastic import RademacherFamily, enumerate_moment

#: Partial integrals above this, still growing by BLOWUP_FACTOR per dyadic
#: step, are declared divergent by the numeric classifier.
BLOWUP_THRESHOLD = 1e12
BLOWUP_FACTOR = 1.5

#: Circles on which 1 - |phi| drops below this are excluded from audits.
SINGULAR_GAP = 1e-14


# --- radial measures --------------------------------------------------------

@dataclass(frozen=True)
class RadialMeasure:
    kind: str  # "power", "atom" or "mix"
    beta: float = 0.0
    r0: float = 0.0
    mass: float = 1.0
    parts: tuple = ()

    def __post_init__(self):
        if self.kind == "atom":
            if not 0 <= self.r0 < 1:
                raise DomainError(f"atoms must sit in [0, 1), got {self.r0}")
            if not self.mass > 0:
                raise DomainError(f"atom mass must be positive, got {self.mass}")
        elif self.kind == "power":
            if not math.isfinite(self.beta):
                raise DomainError("power exponent must be finite")
        elif self.kind == "mix":
            if not self.parts:
                raise DomainError("a mixture needs at least one component")
        else:
            raise DomainError(f"unknown measure kind {self.kind!r}")

    @classmethod
    def power(cls, beta):
        return cls("power", beta=float(beta))

    @classmethod
    def atom(cls, r0, mass=1.0):
        return cls("atom", r0=float(r0), mass=float(mass))

    @classmethod
    def mix(cls, *parts):
        return cls("mix", parts=tuple(parts))

    def to_dsl(self):
        if self.kind == "power":
            return f"power:{self.beta!r}"
        if self.kind == "atom":
            return f"atom:{self.r0!r}:{self.mass!r}"
        return "mix:[" + ",".join(p.to_dsl() for p in self.parts) + "]"


def _split_list(body, text, offset):
    """Split a bracketed, comma separated list at depth 0."""
    items, depth, start = [], 0, 0
    for i, ch in enumerate(body):
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
            if depth < 0:
                raise ParseError("unbalanced ']'", text, offset + i)
        elif ch == "," and depth == 0:
            items.append((body[start:i], offset + start))
            start = i + 1
    if depth:
        raise ParseError("unbalanced '['", text, offset + len(body))
    items.append((body[start:], offset + start))
    return items


def _bracketed(rest, text, offset):
    if not (rest.startswith("[") and rest.endswith("]")):
        raise ParseError("expected a bracketed list", text, offset)
    return _split_list(rest[1:-1], text, offset + 1)


def _num(token, text, pos, kind=float):
    try:
        return kind(token.strip().replace("i", "j") if kind is complex else token)
    except ValueError:
        raise ParseError(f"expected a number, got {token!r}", text, pos) from None


def parse_measure(text, _offset=0, _full=None):
    full = text if _full is None else _full
    kind, sep, rest = text.partition(":")
    if not sep:
        raise ParseError("expected kind:parameters", full, _offset + len(kind))
    pos = _offset + len(kind) + 1
    try:
        if kind == "power":
            return RadialMeasure.power(_num(rest, full, pos))
        if kind == "atom":
            r0, sep2, mass = rest.partition(":")
            if not sep2:
                raise ParseError("atom needs r0:mass", full, pos + len(r0))
            return RadialMeasure.atom(_num(r0, full, pos), _num(mass, full, pos + len(r0) + 1))
        if kind == "mix":
            parts = [parse_measure(item, off, full) for item, off in _bracketed(rest, full, pos)]
            return RadialMeasure.mix(*parts)
    except DomainError as exc:
        raise ParseError(str(exc), full, pos) from exc
    raise ParseError(f"unknown measure kind {kind!r}", full, _offset)


class CarlesonClass(NamedTuple):
    status: str  # "Finite", "Infinite" or "Undecided"
    value: float
    reason: str
    partial: tuple = ()


def _power_integral(g, q, beta, tol=1e-12):
    """int_0^1 Phi^(q/2)(u) u^beta du for beta > -1, as an integral in
    s = ln(1/u) over blocks of length ln 2 (dyadic blocks in u).

    Truncation uses Phi(e^-s) <= 1 + W s with W = omega(1)^2, whose tail
    int_S^inf (1 + W s)^a e^(-c s) ds is an incomplete gamma function.
    """
    a, c, w = 0.5 * q, beta + 1.0, float(g(1.0)) ** 2
    h = math.log(2.0)

    def integrand(s):
        return phi_values(g, np.exp(-s)) ** a * np.exp(-c * s)

    def tail(s_cut):
        v0 = c * (1.0 + w * s_cut) / w
        upper = special.gammaincc(a + 1.0, v0)
        if upper == 0:
            return 0.0
        return math.exp(a * math.log(w / c) + c / w - math.log(c) + special.gammaln(a + 1.0)
                        + math.log(upper))

    total, err, m = [], 0.0, 0
    while True:
        val, e = quad(integrand, m * h, (m + 1) * h, tol=tol)
        total.append(val)
        err += e
        m += 1
        t = tail(m * h)
        if t <= tol * max(1.0, math.fsum(total)) or m > 20000:
            return math.fsum(total), err + t


def classify_numeric(g, q, beta, m_max=120):
    """Blow-up rule on partial integrals over [0, 1 - 2^-m]."""
    partial = []
    prev = 0.0
    for m in range(1, m_max + 1):
        cur = prev + _partial_power_block(g, q, beta, m)
        partial.append(cur)
        if cur > BLOWUP_THRESHOLD and prev > 0 and cur / prev >= BLOWUP_FACTOR:
            return CarlesonClass("Infinite", math.inf,
                                 f"partial integrals exceed {BLOWUP_THRESHOLD:g} and grow by "
                                 f">= {BLOWUP_FACTOR} per dyadic step", tuple(partial))
        if m > 4:
            # geometric estimate of the remaining blocks from the last two
            step, last = cur - prev, prev - partial[-3]
            ratio = step / last if last > 0 else 1.0
            if ratio < 1 and step * ratio / (1 - ratio) <= 1e-12 * cur:
                return CarlesonClass("Finite", cur, "partial integrals converged",
                                     tuple(partial))
        prev = cur
    return CarlesonClass("Undecided", math.nan, "no blow-up and no convergence at depth "
                         f"{m_max}", tuple(partial))


def _partial_power_block(g, q, beta, m):
    """int over u in [2^-m, 2^-(m-1)] of Phi^(q/2)(u) u^beta du."""
    a, c = 0.5 * q, beta + 1.0
    h = math.log(2.0)
    f = lambda s: phi_values(g, np.exp(-s)) ** a * np.exp(-c * s)  # noqa: E731
    return quad(f, (m - 1) * h, m * h, tol=1e-12)[0]


def carleson_classify(g, q, rho, method="auto"):
    """Finiteness of int_0^1 Phi^(q/2)(1 - r) d rho(r).

    Since 1 <= Phi(u) <= 1 + omega(1)^2 ln(1/u) for nondecreasing gauges,
    a power measure (1 - r)^beta dr gives a finite integral iff beta > -1;
    the value is then computed by quadrature.  ``method="numeric"`` uses
    only the dyadic blow-up rule and may return Undecided.
    """
    if q <= 0:
        raise DomainError(f"q must be positive, got {q}")
    if rho.kind == "atom":
        val = rho.mass * phi(g, 1.0 - rho.r0) ** (0.5 * q)
        return CarlesonClass("Finite", val, "single atom")
    if rho.kind == "mix":
        parts = [carleson_classify(g, q, p, method) for p in rho.parts]
        for p in parts:
            if p.status != "Finite":
                return CarlesonClass(p.status, p.value, f"component: {p.reason}")
        return CarlesonClass("Finite", math.fsum(p.value for p in parts), "sum of components")
    if method == "numeric":
        return classify_numeric(g, q, rho.beta)
    if rho.beta <= -1:
        return CarlesonClass("Infinite", math.inf,
                             f"(1 - r)^{rho.beta!r} is not integrable at r = 1 and Phi >= 1")
    val, _ = _power_integral(g, q, rho.beta)
    return CarlesonClass("Finite", val, f"beta = {rho.beta!r} > -1")


def _gl_nodes(a, b, n=10):
    x, w = np.polynomial.legendre.leggauss(n)
    half = 0.5 * (b - a)
    return 0.5 * (a + b) + half * x, half * w


def _carleson_partial(g, q, rho, m):
    """int over r in [0, 1 - 2^-m] of Phi^(q/2)(1 - r) d rho(r)."""
    atoms = math.fsum(mass * phi(g, 1.0 - r0) ** (0.5 * q)
                      for r0, mass in _atoms(rho) if r0 < 1.0 - 2.0 ** -m)
    return atoms + math.fsum(_partial_power_block(g, q, beta, j)
                             for beta in _powers(rho) for j in range(1, m + 1))


#: Evidence is consistent when the probe-to-Carleson ratio varies by at most
#: this factor over the last PROBE_WINDOW dyadic depths.
PROBE_SPREAD = 2.0
PROBE_WINDOW = 4


def carleson_necessity_probe(g, q, rho, K=10, m_max=16, angles=16):
    """Evidence for int int |F_y|^q d sigma d rho over the Rademacher family.

    The y-average is exact (all 2^K sign patterns), the circle average is a
    trapezoid sum with ``angles`` points and the rho-integral is taken over
    [0, 1 - 2^-m] for m = 1..m_max (10-point Gauss blocks).  Row m compares
    this partial integral with the partial Carleson integral of
    Phi^(q/2)(1 - r) over the same range.  The two are comparable up to
    constants, so the evidence is consistent when their ratio settles,
    whether the classification is Finite or Infinite.
    """
    cls = carleson_classify(g, q, rho)
    base = build_extremal(g, K - 1, "2^k-1")
    fam = RademacherFamily(base)
    norm = bloch_norm_estimate(base, g, RadialGrid(0, m_max)).value
    thetas = 2 * np.pi * np.arange(angles) / angles

    def averaged(r):
        return float(np.mean([enumerate_moment(fam.weights(r * np.exp(1j * t)), 0.5 * q)
                              for t in thetas]))

    atoms = _atoms(rho)
    powers = _powers(rho)
    edges = [0.0] + [1.0 - 2.0 ** -m for m in range(1, m_max + 1)]
    rows, partial = [], []
    running = 0.0
    for m, (a, b) in enumerate(zip(edges[:-1], edges[1:]), start=1):
        running += math.fsum(mass * averaged(r0) for r0, mass in atoms if a <= r0 < b)
        if powers:
            x, w = _gl_nodes(a, b)
            vals = np.array([averaged(float(r)) for r in x])
            running += math.fsum(float(np.dot(w, vals * (1.0 - x) ** beta)) for beta in powers)
        partial.append(running)
        ref = _carleson_partial(g, q, rho, m)
        rows.append(Row(b, None, running / ref if ref > 0 else math.nan, running, ref))
    tail = [row.ratio for row in rows[-PROBE_WINDOW:] if row.ratio > 0]
    spread = max(tail) / min(tail) if tail else math.inf
    consistent = spread <= PROBE_SPREAD
    steps = np.diff([0.0] + partial)
    growing = bool(len(steps) > 1 and steps[-1] >= 0.5 * steps[-2] and steps[-1] > 0)
    return EstimateReport(
        "carleson_probe", g.to_dsl(),
        {"radii": "[0, 1 - 2^-m]", "m_max": m_max, "angles": angles, "measure": rho.to_dsl()},
        rows, "max", partial[-1], "holds" if consistent else "violated",
        f"classification {cls.status}; probe/Carleson ratio spread {spread:.3g} over the "
        f"last {len(tail)} depths",
        checks={"evidence_consistent": {"passed": consistent, "spread": spread,
                                        "max_spread": PROBE_SPREAD,
                                        "label": "numerical evidence, not a proof"}},
        extra={"classification": cls.status, "classification_value": cls.value, "q": q,
               "normalization": norm, "normalized_final": partial[-1] / norm ** q,
               "partial": partial, "steps_not_decaying": growing},
        provenance={"K": K, "mode": "exact"})


def _atoms(rho):
    if rho.kind == "atom":
        return [(rho.r0, rho.mass)]
    if rho.kind == "mix":
        return [a for p in rho.parts for a in _atoms(p)]
    return []


def _powers(rho):
    if rho.kind == "power":
        return [rho.beta]
    if rho.kind == "mix":
        return [b for p in rho.parts for b in _powers(p)]
    return []


# --- self-maps --------------------------------------------------------------

@dataclass(frozen=True)
class SelfMap:
    kind: str  # "scale", "moebius", "blaschke", "atomic"
    param: complex = 0.0
    zeros: tuple = ()

    def __post_init__(self):
        if self.kind == "scale" and not abs(self.param) <= 1:
            raise DomainError("scale map needs |c| <= 1")
        if self.kind == "moebius" and not abs(self.param) < 1:
            raise DomainError("Moebius map needs |a| < 1")
        if self.kind == "atomic" and not (self.param.real > 0 and self.param.imag == 0):
            raise DomainError("atomic inner map needs c > 0")
        if self.kind == "blaschke":
            if not self.zeros or any(abs(a) >= 1 for a in self.zeros):
                raise DomainError("Blaschke zeros must lie in the open disk")
        if self.kind not in ("scale", "moebius", "blaschke", "atomic"):
            raise DomainError(f"unknown self-map kind {self.kind!r}")

    @classmethod
    def scale(cls, c):
        return cls("scale", complex(c))

    @classmethod
    def moebius(cls, a):
        return cls("moebius", complex(a))

    @classmethod
    def blaschke(cls, zeros):
        return cls("blaschke", 0j, tuple(complex(a) for a in zeros))

    @classmethod
    def atomic(cls, c=1.0):
        return cls("atomic", complex(c))

    def to_dsl(self):
        def fmt(v):
            return repr(v.real) if v.imag == 0 else repr(v).strip("()").replace("j", "i")
        if self.kind == "blaschke":
            return "blaschke:[" + ",".join(fmt(a) for a in self.zeros) + "]"
        return f"{self.kind}:{fmt(self.param)}"

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        if self.kind == "scale":
            return self.param * z
        if self.kind == "moebius":
            a = self.param
            return (z + a) / (1 + a.conjugate() * z)
        if self.kind == "blaschke":
            out = np.ones_like(z)
            for a in self.zeros:
                out = out * (z - a) / (1 - a.conjugate() * z)
            return out
        c = self.param.real
        return np.exp(c * (z + 1) / (z - 1))

    def derivative(self, z):
        z = np.asarray(z, dtype=complex)
        if self.kind == "scale":
            return self.param * np.ones_like(z)
        if self.kind == "moebius":
            a = self.param
            return (1 - abs(a) ** 2) / (1 + a.conjugate() * z) ** 2
        if self.kind == "blaschke":
            factors = [(z - a) / (1 - a.conjugate() * z) for a in self.zeros]
            out = np.zeros_like(z)
            for j, a in enumerate(self.zeros):
                term = (1 - abs(a) ** 2) / (1 - a.conjugate() * z) ** 2
                for i, fac in enumerate(factors):
                    if i != j:
                        term = term * fac
                out = out + term
            return out
        c = self.param.real
        return self(z) * (-2 * c) / (z - 1) ** 2

    def one_minus_abs(self, z):
        """1 - |phi(z)| without cancellation where a closed form allows."""
        z = np.asarray(z, dtype=complex)
        if self.kind == "scale":
            return 1.0 - abs(self.param) * np.abs(z)
        if self.kind == "moebius":
            a = self.param
            one_minus_sq = (1 - abs(a) ** 2) * (1 - np.abs(z) ** 2) / np.abs(1 + a.conjugate() * z) ** 2
            return one_minus_sq / (1 + np.abs(self(z)))
        if self.kind == "blaschke":
            log_mod = np.zeros(z.shape)
            with np.errstate(divide="ignore"):
                for a in self.zeros:
                    gap = (1 - abs(a) ** 2) * (1 - np.abs(z) ** 2) / np.abs(1 - a.conjugate() * z) ** 2
                    log_mod = log_mod + 0.5 * np.log1p(-np.minimum(gap, 1.0))
            return -np.expm1(log_mod)
        c = self.param.real
        return -np.expm1(c * (np.abs(z) ** 2 - 1) / np.abs(z - 1) ** 2)


def parse_map(text):
    kind, sep, rest = text.partition(":")
    if not sep:
        raise ParseError("expected kind:parameter", text, len(kind))
    pos = len(kind) + 1
    try:
        if kind == "scale":
            return SelfMap.scale(_num(rest, text, pos, complex))
        if kind == "moebius":
            return SelfMap.moebius(_num(rest, text, pos, complex))
        if kind == "atomic":
            return SelfMap.atomic(_num(rest, text, pos))
        if kind == "blaschke":
            zeros = [_num(item, text, off, complex) for item, off in _bracketed(rest, text, pos)]
            return SelfMap.blaschke(zeros)
    except DomainError as exc:
        raise ParseError(str(exc), text, pos) from exc
    raise ParseError(f"unknown self-map kind {kind!r}", text, 0)


def _hyperbolic(phi_map, om, z):
    gap = phi_map.one_minus_abs(z)
    if np.any(gap <= 0):
        bad = np.ravel(z)[np.argmin(np.ravel(gap))]
        raise SingularityError("|phi(z)| >= 1", complex(bad))
    return np.abs(phi_map.derivative(z)) * (1 - np.abs(z)) / gap * om(np.minimum(gap, 1.0))


def hyperbolic_ratio(phi_map, om, z):
    """|phi'(z)| (1 - |z|) / (1 - |phi(z)|) * Omega(1 - |phi(z)|)."""
    if abs(z) >= 1:
        raise DomainError(f"|z| must be < 1, got {abs(z)}")
    return float(_hyperbolic(phi_map, om, complex(z)))


# --- quantitative corollary audit --------------------------------------------

def cor43_audit(phi_map, g, om, p, grid=None):
    """Grid audit of the hyperbolic-derivative corollary.

    (a) hypothesis: (1 - r) M_2p(|phi'| Omega(1 - |phi|) / (1 - |phi|), r)
    <= omega(1 - r) at every grid radius;  (b) when (a) passes, the sup over
    grid radii of int Phi_Omega^p(1 - |phi(r zeta)|) d sigma(zeta).
    """
    if p < 1:
        raise PreconditionError("1 <= p < infinity", f"got p={p}")
    if classify_dichotomy(g).status != "Convergent":
        raise PreconditionError("I_omega(0+) < infinity", f"omega = {g.to_dsl()}")
    if classify_dichotomy(om).status != "Divergent":
        raise PreconditionError("I_Omega = infinity", f"Omega = {om.to_dsl()}")
    grid = grid or RadialGrid(0, 16)
    probe = 2 * np.pi * np.arange(grid.angles * 64) / (grid.angles * 64)
    rows, excluded = [], []
    violation = None
    for r in grid.radii:
        r = float(r)
        if np.min(phi_map.one_minus_abs(r * np.exp(1j * probe))) < SINGULAR_GAP:
            excluded.append(r)
            continue
        lhs = integral_mean(lambda z: _hyperbolic(phi_map, om, z), 2 * p, r)
        rhs = float(g(1.0 - r)) if r < 1 else 0.0
        rows.append(Row(r, None, lhs / rhs, lhs, rhs))
        if violation is None and lhs > rhs * (1 + 1e-12):
            violation = r
    hyp_ok = violation is None
    profile, sup = [], math.nan
    checks = {"hypothesis": {"passed": hyp_ok, "first_violation_r": violation,
                             "excluded_radii": excluded}}
    if hyp_ok:
        for r in grid.radii:
            r = float(r)
            if r in excluded:
                continue
            val = integral_mean(lambda z: phi_values(om, np.minimum(phi_map.one_minus_abs(z), 1.0)),
                                p, r) ** p
            profile.append([r, val])
        sup = max(v for _, v in profile)
        if phi_map.kind == "scale":
            c = abs(phi_map.param)
            bound = phi(om, 1.0 - c) ** p if c < 1 else math.inf
            checks["closed_bound"] = {"passed": sup <= bound * (1 + 1e-10), "bound": bound}
    ok = hyp_ok and math.isfinite(sup) and all(c["passed"] for c in checks.values())
    detail = (f"hypothesis holds on grid; sup of Phi_Omega^p integral = {sup!r}" if ok else
              f"hypothesis fails at r={violation!r}" if not hyp_ok else "bound check failed")
    return EstimateReport(
        "cor43_audit", g.to_dsl(), grid.describe(), rows, "max",
        summarize([row.ratio for row in rows], "max"), "holds" if ok else "violated", detail,
        checks=checks,
        extra={"map": phi_map.to_dsl(), "Omega": om.to_dsl(), "p": p,
               "phi_omega_profile": profile, "phi_omega_sup": sup},
        provenance={"integral_mean_rtol": 1e-8, "singular_gap": SINGULAR_GAP})
