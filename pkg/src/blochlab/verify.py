"""Grid certifications of the quadratic-integral estimates.

Each function measures one inequality on an explicit grid and returns an
:class:`~blochlab.report.EstimateReport`.  Measured constants are the
extrema of the sampled ratios; nothing is extrapolated past the grid.
"""

import math

import numpy as np

from ._parallel import pmap
from ._quadrature import quad
from .errors import DomainError, PreconditionError, ResourceError
from .gauge import check_regularity, classify_dichotomy, dyadic_grid, phi, psi, quadratic_integral
from .lacunary import build_extremal, choose_order, l2_membership
from .means import RadialGrid, bloch_norm_estimate, hardy_bloch_norm_estimate, integral_mean
from .report import EstimateReport, Row, summarize
from .stochastic import MAX_EXACT_TERMS, RademacherFamily, moment_integral

#: Slack allowed when comparing a quadrature result against its bound.
QUAD_TOL = 1e-8


def _dyadic_radii(m_min, m_max):
    m = np.arange(m_min, m_max + 1)
    return -np.expm1(-m * math.log(2.0))


def _phi_at(g, r):
    """Phi(1 - r), with 1 - r taken exactly for dyadic radii."""
    return phi(g, 1.0 - r) if r > 0 else 1.0


def require_regular(g, depth=40):
    """Raise PreconditionError unless the gauge hypotheses hold on 2^-m, m <= depth."""
    rep = check_regularity(g, dyadic_grid(depth))
    for cond in rep.conditions:
        if not cond.passed:
            raise PreconditionError(cond.name, f"gauge {g.to_dsl()}, first violation "
                                               f"between t={cond.violation[0]!r} and {cond.violation[1]!r}")
    return rep


# --- gauge and extremal series summaries ------------------------------------

#: Absolute agreement required between quadrature and closed-form I(x).
CROSSCHECK_TOL = 1e-9


def gauge_report(g, m_min=1, m_max=30, depth=40):
    """Quadrature against closed-form I(2^-m), with the regularity scan and
    the dichotomy class.  Rows: r = 1 - x, lhs = quadrature, rhs = closed
    form, ratio = lhs - rhs (the signed error).  Custom gauges have no closed
    form and report the quadrature only.
    """
    if m_min < 1:
        raise DomainError("gauge report needs m_min >= 1 (x < 1)")
    reg = check_regularity(g, dyadic_grid(max(depth, m_max)))
    dich = classify_dichotomy(g)
    rows = []
    worst = 0.0
    for m in range(m_min, m_max + 1):
        x = 2.0 ** -m
        quadv = quadratic_integral(g, x, method="quadrature").value_I
        if g.has_closed_form:
            closed = quadratic_integral(g, x, method="closed").value_I
            worst = max(worst, abs(quadv - closed))
        else:
            closed = math.nan
        rows.append(Row(1.0 - x, None, quadv - closed, quadv, closed))
    cross_ok = worst <= CROSSCHECK_TOL
    ok = reg.passed and cross_ok
    failed = [c.name for c in reg.failed()]
    detail = (f"{dich.status}; max |quadrature - closed| = {worst!r}" if ok else
              f"regularity fails: {', '.join(failed)}" if failed else
              f"quadrature disagrees with closed form by {worst!r}")
    return EstimateReport(
        "gauge_report", g.to_dsl(), {"x": "2^-m", "m_min": m_min, "m_max": m_max},
        rows, "max", worst, "holds" if ok else "violated", detail,
        checks={"regularity": {"passed": reg.passed,
                               "conditions": {c.name: c.passed for c in reg.conditions},
                               "depth": max(depth, m_max)},
                "closed_form": {"passed": cross_ok, "tolerance": CROSSCHECK_TOL}},
        extra={"dichotomy": dich.status, "I_at_zero": dich.limit,
               "omega_at_1": float(g(1.0))},
        provenance={"quadrature_tol": 1e-11})


def extremal_report(g, K=None, rule="2^k", grid=None):
    """The series sum omega(2^-k) z^(n_k) and its Bloch ratio per radius.

    Rows: lhs = |Rf(r)| (1 - r), rhs = omega(1 - r), ratio = lhs / rhs (the
    coefficients are positive, so theta = 0 carries the circle max).
    """
    grid = grid or RadialGrid()
    if K is None:
        K = choose_order(float(grid.radii[-1]), float(g(1.0)), rule)
    s = build_extremal(g, K, rule)
    radii = grid.radii
    rf = np.abs(np.asarray(s.radial_derivative(radii.astype(complex))))
    lhs = rf * (1.0 - radii)
    rhs = g(1.0 - radii)
    rows = [Row(float(r), 0.0, float(a / b), float(a), float(b))
            for r, a, b in zip(radii, lhs, rhs)]
    norm = bloch_norm_estimate(s, g, grid)
    ok = math.isfinite(norm.value)
    membership = l2_membership(s)
    return EstimateReport(
        "extremal_build", g.to_dsl(), grid.describe(), rows, "max",
        summarize([row.ratio for row in rows], "max"), "holds" if ok else "violated",
        f"grid Bloch norm {norm.value!r}",
        extra={"series": s.to_dict(), "bloch_norm": norm.value, "norm_kind": norm.kind,
               "l2_membership": membership.status},
        provenance={"K": K, "rule": rule})


# --- Psi >= C Phi(1 - r) ------------------------------------------------------

def verify_lemma31(g, m_max=20, m_min=0):
    """min over r = 1 - 2^-m of Psi(r) / Phi(1 - r), plus the proof chain

        2 Psi(r) >= omega(1)^2 + (1/e) sum_{k<=n} omega(2^-k)^2

    where 2^-(n+1) <= 1 - r < 2^-n (so n = m - 1 on the dyadic grid).
    """
    rows = []
    chain_fail = []
    w1 = float(g(1.0)) ** 2
    partial = np.cumsum(g(2.0 ** -np.arange(m_max + 1)) ** 2)
    for m in range(m_min, m_max + 1):
        r = float(_dyadic_radii(m, m)[0])
        ps = psi(g, r).value
        ph = _phi_at(g, r)
        rows.append(Row(r, None, ps / ph, ps, ph))
        if m >= 1:
            rhs = w1 + partial[m - 1] / math.e
            if not 2 * ps >= rhs:
                chain_fail.append((m, 2 * ps, rhs))
    tau = summarize([row.ratio for row in rows], "min")
    chain_ok = not chain_fail
    ok = tau > 0 and chain_ok
    detail = f"min Psi/Phi = {tau!r}" if ok else (
        f"proof chain fails at m={chain_fail[0][0]}" if chain_fail else f"min ratio {tau!r} <= 0")
    return EstimateReport(
        "lemma31", g.to_dsl(), {"radii": "1 - 2^-m", "m_min": m_min, "m_max": m_max},
        rows, "min", tau, "holds" if ok else "violated", detail,
        checks={"proof_chain": {"passed": chain_ok,
                                "failures": [list(x) for x in chain_fail]}},
        provenance={"psi_tail_tol": 1e-12})


# --- reverse estimate --------------------------------------------------------

def verify_reverse(g, p, m_max=20, K=None, mode=None, m_min=0, angles=1, seed=0,
                   samples=100_000):
    """Measured tau: min over grid points z of int |F_y(z)|^(2p) dy / Phi^p(1 - |z|).

    F_y is the Rademacher family on omega(2^-k) z^(2^k - 1) with ``K`` terms
    (default: tail <= 1e-12 at the largest radius), divided by its grid
    Bloch norm so that every F_y has grid norm <= 1.  ``mode`` defaults to
    ``"closed"`` for p = 1 and ``"exact"`` otherwise.  ``angles`` sets how
    many uniformly spaced arguments are sampled per radius.
    """
    require_regular(g, max(40, m_max))
    if p <= 0:
        raise DomainError(f"p must be positive, got {p}")
    radii = _dyadic_radii(m_min, m_max)
    if K is None:
        K = choose_order(float(radii[-1]), float(g(1.0)), "2^k-1") + 1
    if mode is None:
        mode = "closed" if p == 1 else "exact"
    if mode == "exact" and K > MAX_EXACT_TERMS:
        raise ResourceError(f"exact enumeration needs K <= {MAX_EXACT_TERMS}, got {K}")
    base = build_extremal(g, K - 1, "2^k-1")
    fam = RademacherFamily(base)
    norm = bloch_norm_estimate(base, g, RadialGrid(0, m_max))
    scale = norm.value ** (2 * p)
    thetas = 2 * np.pi * np.arange(angles) / angles
    points = [(float(r), float(t)) for r in radii for t in thetas]

    def one(pt):
        r, t = pt
        mom = moment_integral(fam, r * np.exp(1j * t), p, mode, seed, samples)
        rhs = _phi_at(g, r) ** p
        lhs = mom / scale
        return Row(r, t, lhs / rhs, lhs, rhs)

    rows = pmap(one, points)
    tau = summarize([row.ratio for row in rows], "min")
    ok = tau > 0
    return EstimateReport(
        "reverse", g.to_dsl(),
        {"radii": "1 - 2^-m", "m_min": m_min, "m_max": m_max, "angles": angles},
        rows, "min", tau, "holds" if ok else "violated",
        f"measured tau = {tau!r}" if ok else "moment vanishes at a grid point",
        extra={"p": p, "normalization": norm.value, "normalization_argmax": list(norm.argmax),
               "K": K},
        provenance={"mode": mode, "K": K, "seed": seed if mode == "montecarlo" else None,
                    "samples": samples if mode == "montecarlo" else None})


# --- Phi doubling ------------------------------------------------------------

def default_doubling_radii(n=1000):
    """n radii in (2/3, 1), geometrically clustered at 1."""
    return 1.0 - np.geomspace(1.0 / 3.0 - 1e-9, 1e-12, n)


def verify_phi_doubling(g, radii=None):
    """max over the grid of Phi(1 - r) / Phi(1 - r^2); holds iff <= 4."""
    radii = default_doubling_radii() if radii is None else np.asarray(radii, dtype=float)
    if np.any((radii <= 2.0 / 3.0) | (radii >= 1.0)):
        raise DomainError("doubling radii must lie in (2/3, 1)")
    rows = []
    for r in radii:
        u = 1.0 - r
        lhs = phi(g, u)
        rhs = phi(g, u * (1.0 + r))
        rows.append(Row(float(r), None, lhs / rhs, lhs, rhs))
    worst = summarize([row.ratio for row in rows], "max")
    ok = worst <= 4.0
    bad = [row for row in rows if row.ratio > 4.0]
    return EstimateReport(
        "phi_doubling", g.to_dsl(), {"radii": "explicit", "n": len(rows),
                                     "r_min": float(radii.min()), "r_max": float(radii.max())},
        rows, "max", worst, "holds" if ok else "violated",
        f"max ratio {worst!r} <= 4" if ok else f"ratio > 4 at r={bad[0].r!r}")


# --- direct estimates --------------------------------------------------------

def _piecewise_moments(h, edges, tol):
    """For each piece [a, b] of ``edges``: (int h, int t h) by quadrature."""
    out = []
    for a, b in zip(edges[:-1], edges[1:]):
        i0, e0 = quad(h, a, b, tol=tol, rtol=1e-13)
        i1, e1 = quad(lambda t: t * h(t), a, b, tol=tol, rtol=1e-13)
        out.append((i0, i1, e0 + e1))
    return out


def _radial_integrals(h, radii, tol=1e-12):
    """int_0^r h(t) (r - t) dt for each radius, via per-piece moments."""
    edges = [0.0] + [float(r) for r in radii if r > 0]
    moments = _piecewise_moments(h, edges, tol)
    vals = {}
    a0 = a1 = err = 0.0
    vals[0.0] = (0.0, 0.0)
    for (i0, i1, e), r in zip(moments, edges[1:]):
        a0 += i0
        a1 += i1
        err += e
        vals[r] = (r * a0 - a1, err * (1 + r))
    return [vals[float(r)] for r in radii]


def _vectorize(fn):
    def h(t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        return np.array([fn(float(x)) for x in t])
    return h


def _direct_report(name, g, f, p, grid, norm, lhs_inner, extra):
    radii = grid.radii
    means = pmap(lambda r: integral_mean(f, p, float(r)), radii)
    rows = []
    step_fail = []
    for r, m, (inner, inner_err) in zip(radii, means, lhs_inner):
        ph = _phi_at(g, float(r))
        rhs = norm * math.sqrt(ph)
        rows.append(Row(float(r), None, m / rhs if rhs > 0 else math.inf, m, rhs))
        bound = norm ** 2 * ph
        if inner > bound * (1 + QUAD_TOL) + QUAD_TOL:
            step_fail.append((float(r), inner, bound))
    worst = summarize([row.ratio for row in rows], "max")
    step_ok = not step_fail
    ok = math.isfinite(worst) and step_ok
    detail = (f"max ratio {worst!r}" if ok else
              f"proof step fails at r={step_fail[0][0]!r}" if step_fail else "ratio unbounded")
    return EstimateReport(
        name, g.to_dsl(), grid.describe(), rows, "max", worst,
        "holds" if ok else "violated", detail,
        checks={"proof_step": {"passed": step_ok,
                               "failures": [list(x) for x in step_fail],
                               "tolerance": QUAD_TOL}},
        extra=extra, provenance={"integral_mean_rtol": 1e-8})


def verify_direct(g, f, p, grid=None):
    """max over grid radii of M_p(f, r) / (||f|| Phi^(1/2)(1 - r)).

    ||f|| is the grid Bloch norm.  Also checks, along the positive radius,
    int_0^r |Rf(t)|^2 (r - t) dt <= ||f||^2 Phi(1 - r).
    """
    grid = grid or RadialGrid()
    norm = bloch_norm_estimate(f, g, grid).value

    def h(t):
        return np.abs(np.asarray(f.radial_derivative(np.asarray(t, dtype=complex)))) ** 2

    inner = _radial_integrals(h, grid.radii)
    return _direct_report("direct", g, f, p, grid, norm, inner,
                          {"p": p, "norm": norm, "norm_kind": "grid sup"})


def verify_hardy_bloch(g, f, p, grid=None):
    """As :func:`verify_direct` but normalized by the Hardy-Bloch grid norm
    (p >= 2), with proof step int_0^r M_p^2(Rf, t) (r - t) dt <= ||f||_p^2 Phi(1 - r)."""
    if p < 2:
        raise PreconditionError("2 <= p < infinity", f"got p={p}")
    grid = grid or RadialGrid(m_max=12)
    norm = hardy_bloch_norm_estimate(f, g, p, grid).value
    rf = f.derivative_view()
    cache = {}

    def mp2(t):
        if t not in cache:
            cache[t] = integral_mean(rf, p, t) ** 2
        return cache[t]

    inner = _radial_integrals(_vectorize(mp2), grid.radii, tol=1e-10)
    return _direct_report("hardy_bloch", g, f, p, grid, norm, inner,
                          {"p": p, "norm": norm, "norm_kind": "grid sup (Hardy-Bloch)"})


# --- radial divergence demo ---------------------------------------------------

def default_rays(n=8, seed=0):
    return np.sort(np.random.default_rng(seed).uniform(0.0, 2 * np.pi, n))


def oscillation(values):
    """max - min of the real and imaginary parts (the larger of the two)."""
    v = np.asarray(values)
    return float(max(np.ptp(v.real), np.ptp(v.imag)))


def divergence_demo(g, rays=None, m_max=24, m_min=1, window=10, seed=0):
    """Oscillation of the extremal series along rays, next to the l2 verdict.

    For each ray and each end depth m, osc is taken over the last ``window``
    dyadic radii 1 - 2^-j, j <= m.  The l2 classification of the
    coefficients is the verdict; the oscillation profile is evidence only.
    """
    rays = default_rays(seed=seed) if rays is None else np.asarray(rays, dtype=float)
    radii = _dyadic_radii(m_min, m_max)
    K = choose_order(float(radii[-1]), float(g(1.0)))
    s = build_extremal(g, K)
    membership = l2_membership(s)
    vals = s(radii[:, None] * np.exp(1j * rays)[None, :])
    w = min(window, len(radii))
    rows = []
    profile = []
    for end in range(w - 1, len(radii)):
        block = vals[end - w + 1:end + 1]
        per_ray = [oscillation(block[:, i]) for i in range(len(rays))]
        profile.append(max(per_ray))
        for i, th in enumerate(rays):
            rows.append(Row(float(radii[end]), float(th), per_ray[i],
                            float(np.ptp(block[:, i].real)), float(np.ptp(block[:, i].imag))))
    final = [row.ratio for row in rows[-len(rays):]]
    tail = profile[-5:]
    decreasing = all(b < a for a, b in zip(tail, tail[1:]))
    if membership.status == "InL2":
        consistent = decreasing
    else:
        consistent = min(final) > 0.1 * float(g(1.0))
    return EstimateReport(
        "divergence_demo", g.to_dsl(),
        {"radii": "1 - 2^-m", "m_min": m_min, "m_max": m_max, "window": w,
         "rays": [float(x) for x in rays]},
        rows, "max", max(final), "holds" if consistent else "violated",
        f"{membership.status}: {membership.reason}",
        checks={"evidence_consistent": {"passed": consistent, "profile_decreasing": decreasing,
                                        "label": "numerical evidence, not a proof"}},
        extra={"l2_membership": membership.status, "profile": profile,
               "final_oscillation": final, "K": K},
        provenance={"seed": seed})
