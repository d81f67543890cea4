"""Estimate reports and their JSON / CSV serialization."""

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path

CSV_COLUMNS = ("r", "theta", "ratio", "lhs", "rhs")


@dataclass
class Row:
    r: float
    theta: object  # float or None
    ratio: float
    lhs: float
    rhs: float


@dataclass
class EstimateReport:
    """Outcome of one named inequality checked on a grid.

    ``extremum`` says whether ``extremal_constant`` is the min (lower-bound
    statements) or the max (upper-bound statements) of the ratios.
    ``checks`` holds auxiliary proof-step checks; the verdict is "holds"
    only if the main criterion and every check pass.
    """

    name: str
    gauge: str
    grid: dict
    rows: list
    extremum: str
    extremal_constant: float
    verdict: str
    detail: str = ""
    checks: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)
    provenance: dict = field(default_factory=dict)

    @property
    def ratios(self):
        return [row.ratio for row in self.rows]

    @property
    def holds(self):
        return self.verdict == "holds"

    def to_dict(self):
        out = asdict(self)
        out["rows"] = [asdict(r) for r in self.rows]
        out["ratios"] = self.ratios
        return out

    def to_json(self, **echo):
        data = self.to_dict()
        data.update(echo)
        return json.dumps(_clean(data), sort_keys=True, indent=2) + "\n"

    def to_csv(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for row in self.rows:
            writer.writerow([_cell(getattr(row, c)) for c in CSV_COLUMNS])
        return buf.getvalue()

    def write(self, out_dir, stem=None, **echo):
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        stem = stem or self.name
        json_path = out_dir / f"{stem}.json"
        csv_path = out_dir / f"{stem}.csv"
        json_path.write_text(self.to_json(**echo))
        csv_path.write_text(self.to_csv())
        return json_path, csv_path


def _cell(v):
    if v is None:
        return ""
    return repr(float(v))


def _clean(obj):
    """Make a structure JSON-safe: non-finite floats become strings."""
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else repr(obj)
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if hasattr(obj, "item") and not isinstance(obj, (str, bytes)):
        return _clean(obj.item())
    return obj


def summarize(ratios, extremum):
    finite = [x for x in ratios if not math.isnan(x)]
    if not finite:
        return math.nan
    return min(finite) if extremum == "min" else max(finite)
