"""Numerical verification of quadratic-integral estimates for weighted Bloch
spaces on the unit disk.

The building blocks are gauges and their quadratic integrals
(:mod:`blochlab.gauge`), lacunary series (:mod:`blochlab.lacunary`),
circle integral means (:mod:`blochlab.means`) and Rademacher-randomized
families (:mod:`blochlab.stochastic`).  :mod:`blochlab.verify` and
:mod:`blochlab.applications` turn them into grid reports.
"""

__version__ = "0.1.0"

from .applications import (CarlesonClass, RadialMeasure, SelfMap, carleson_classify,
                           carleson_necessity_probe, cor43_audit, hyperbolic_ratio,
                           parse_map, parse_measure)
from .errors import (BlochLabError, DomainError, NumericWarning, ParseError,
                     PreconditionError, QuadratureError, ResourceError, SingularityError,
                     UnsupportedError)
from .gauge import (Gauge, check_regularity, classify_dichotomy, eval_gauge, parse_gauge,
                    phi, psi, quadratic_integral)
from .lacunary import GapSeries, build_extremal, gap_eval, l2_membership, radial_derivative_eval
from .means import RadialGrid, bloch_norm_estimate, hardy_bloch_norm_estimate, integral_mean
from .report import EstimateReport
from .stochastic import RademacherFamily, family_eval, moment_integral, rademacher
from .verify import (divergence_demo, extremal_report, gauge_report, verify_direct,
                     verify_hardy_bloch, verify_lemma31, verify_phi_doubling, verify_reverse)

__all__ = [
    "BlochLabError", "CarlesonClass", "DomainError", "EstimateReport", "GapSeries", "Gauge",
    "NumericWarning", "ParseError", "PreconditionError", "QuadratureError", "RadialGrid",
    "RadialMeasure", "RademacherFamily", "ResourceError", "SelfMap", "SingularityError",
    "UnsupportedError", "bloch_norm_estimate", "build_extremal", "carleson_classify",
    "carleson_necessity_probe", "check_regularity", "classify_dichotomy", "cor43_audit",
    "divergence_demo", "eval_gauge", "extremal_report", "family_eval", "gap_eval",
    "gauge_report", "hardy_bloch_norm_estimate", "hyperbolic_ratio", "integral_mean",
    "l2_membership", "moment_integral", "parse_gauge", "parse_map", "parse_measure", "phi",
    "psi", "quadratic_integral", "rademacher", "radial_derivative_eval", "verify_direct",
    "verify_hardy_bloch", "verify_lemma31", "verify_phi_doubling", "verify_reverse",
]
