"""Command-line front end: one command runs one verification.

    blochlab verify-lemma31 --gauge const --mmax 20 --out reports/

Every run writes ``<command>.json`` and ``<command>.csv`` into ``--out``.
Exit status is 0 when the verdict is "holds", 2 when it is "violated" and
1 for usage, parse, precondition or numeric errors.
"""

import argparse
import sys
from dataclasses import asdict, dataclass
from typing import Optional

from . import __version__
from .applications import (carleson_necessity_probe, cor43_audit, parse_map,
                           parse_measure)
from .errors import BlochLabError, ParseError
from .gauge import parse_gauge
from .lacunary import build_extremal, choose_order
from .means import RadialGrid
from .verify import (divergence_demo, extremal_report, gauge_report, verify_direct,
                     verify_hardy_bloch, verify_lemma31, verify_phi_doubling,
                     verify_reverse)

COMMANDS = ("gauge-report", "extremal-build", "verify-lemma31", "verify-reverse",
            "verify-direct", "verify-hardy-bloch", "verify-phi-doubling",
            "divergence-demo", "carleson", "hyperbolic-audit")

EXIT_HOLDS, EXIT_ERROR, EXIT_VIOLATED = 0, 1, 2

_MODES = {"exact": "exact", "mc": "montecarlo", "closed": "closed"}


@dataclass(frozen=True)
class RunConfig:
    """Everything a run depends on; echoed verbatim into each report."""

    command: str
    gauge: str = "const"
    omega2: Optional[str] = None
    measure: Optional[str] = None
    map: Optional[str] = None
    p: float = 1.0
    q: float = 2.0
    m_min: Optional[int] = None
    m_max: Optional[int] = None
    angles: Optional[int] = None
    K: Optional[int] = None
    seed: int = 0
    mode: Optional[str] = None
    samples: int = 100_000
    out: str = "reports"

    def echo(self):
        return asdict(self)


def _number(x):
    """Integral floats print as ints so 'p=1' and 'p=1.0' behave alike."""
    return int(x) if float(x).is_integer() else float(x)


def _grid(cfg, m_min=0, m_max=20, angles=16):
    return RadialGrid(cfg.m_min if cfg.m_min is not None else m_min,
                      cfg.m_max if cfg.m_max is not None else m_max,
                      cfg.angles if cfg.angles is not None else angles)


def _series(g, grid):
    return build_extremal(g, choose_order(float(grid.radii[-1]), float(g(1.0))))


def _require(value, flag):
    if value is None:
        raise ValueError(f"{flag} is required for this command")
    return value


def execute(cfg):
    """Run the configured verification and return its report."""
    g = parse_gauge(cfg.gauge)
    p = _number(cfg.p)
    q = _number(cfg.q)
    mode = _MODES.get(cfg.mode) if cfg.mode else None
    c = cfg.command
    if c == "gauge-report":
        return gauge_report(g, cfg.m_min if cfg.m_min is not None else 1,
                            cfg.m_max if cfg.m_max is not None else 30)
    if c == "extremal-build":
        return extremal_report(g, cfg.K, grid=_grid(cfg))
    if c == "verify-lemma31":
        return verify_lemma31(g, cfg.m_max if cfg.m_max is not None else 20,
                              cfg.m_min if cfg.m_min is not None else 0)
    if c == "verify-reverse":
        return verify_reverse(g, p, cfg.m_max if cfg.m_max is not None else 20, cfg.K, mode,
                              cfg.m_min if cfg.m_min is not None else 0,
                              cfg.angles if cfg.angles is not None else 1,
                              cfg.seed, cfg.samples)
    if c == "verify-direct":
        grid = _grid(cfg)
        return verify_direct(g, _series(g, grid), p, grid)
    if c == "verify-hardy-bloch":
        grid = _grid(cfg, m_max=12)
        return verify_hardy_bloch(g, _series(g, grid), p, grid)
    if c == "verify-phi-doubling":
        return verify_phi_doubling(g)
    if c == "divergence-demo":
        return divergence_demo(g, m_max=cfg.m_max if cfg.m_max is not None else 24,
                               m_min=cfg.m_min if cfg.m_min is not None else 1, seed=cfg.seed)
    if c == "carleson":
        rho = parse_measure(_require(cfg.measure, "--measure"))
        return carleson_necessity_probe(g, q, rho, cfg.K if cfg.K is not None else 10,
                                        cfg.m_max if cfg.m_max is not None else 16,
                                        cfg.angles if cfg.angles is not None else 16)
    if c == "hyperbolic-audit":
        phi_map = parse_map(_require(cfg.map, "--map"))
        om = parse_gauge(_require(cfg.omega2, "--omega2"))
        return cor43_audit(phi_map, g, om, p, _grid(cfg, m_max=16))
    raise ValueError(f"unknown command {c!r}")


def run(cfg, stdout=None, stderr=None):
    """Execute ``cfg``, write the JSON and CSV reports, return the exit status."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        report = execute(cfg)
    except ParseError as exc:
        print(f"error: {exc}", file=stderr)
        if exc.text is not None:
            print(f"  {exc.text}\n  {' ' * (exc.position or 0)}^", file=stderr)
        return EXIT_ERROR
    except (BlochLabError, ValueError, ArithmeticError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=stderr)
        return EXIT_ERROR
    stem = cfg.command.replace("-", "_")
    json_path, csv_path = report.write(cfg.out, stem, config=cfg.echo(), version=__version__)
    print(f"{cfg.command}: {report.verdict} ({report.detail})", file=stdout)
    print(f"  {json_path}\n  {csv_path}", file=stdout)
    return EXIT_HOLDS if report.holds else EXIT_VIOLATED


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def build_parser():
    ap = _Parser(prog="blochlab", description="Grid verifications of weighted Bloch space "
                                              "estimates on the unit disk.")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--gauge", default="const", help="gauge DSL, e.g. 'pow:0.5;eps=0.25'")
    ap.add_argument("--omega2", help="auxiliary gauge Omega (hyperbolic-audit)")
    ap.add_argument("--measure", help="radial measure DSL (carleson)")
    ap.add_argument("--map", help="self-map DSL (hyperbolic-audit)")
    ap.add_argument("--p", type=float, default=1.0)
    ap.add_argument("--q", type=float, default=2.0)
    ap.add_argument("--mmin", type=int, dest="m_min")
    ap.add_argument("--mmax", type=int, dest="m_max")
    ap.add_argument("--angles", type=int)
    ap.add_argument("--K", type=int, dest="K")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--mode", choices=sorted(_MODES))
    ap.add_argument("--samples", type=int, default=100_000,
                    help="Monte Carlo sample count (--mode mc)")
    ap.add_argument("--out", default="reports", help="output directory")
    return ap


def main(argv=None):
    ns = build_parser().parse_args(argv)
    return run(RunConfig(**vars(ns)))


if __name__ == "__main__":
    sys.exit(main())
