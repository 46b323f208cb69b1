"""Rendering of estimation and passage-time results as CSV, JSON, and text.

CSV outputs open with ``# key=value`` comment lines carrying run metadata,
then a header row. Floats are written with ``repr`` so values survive a
round trip unchanged; the JSON documents hold the same Python floats, which
keeps the two formats numerically identical for a given run. Pretty text
renderers print probabilities at two decimals in an aligned grid, the way
such tables are usually published, with fallback rows starred.
"""

import csv
import io
import json

from .errors import InfiniteEfptError
from .fpt import check_well_defined, efpt_linear, efpt_series, fpt_distribution


def _fmt(x) -> str:
    return repr(float(x))


def _meta_block(items) -> str:
    return "".join(f"# {key}={value}\n" for key, value in items if value is not None)


def _cohort_doc(cohort):
    if cohort is None:
        return None
    return {
        "age_band": cohort.age_band.name if cohort.age_band is not None else None,
        "sex": cohort.sex.name if cohort.sex is not None else None,
        "citizen": (1 if cohort.citizen else 0) if cohort.citizen is not None else None,
        "region": cohort.region.name if cohort.region is not None else None,
    }


def to_json(doc) -> str:
    return json.dumps(doc, indent=2) + "\n"


# ---------------------------------------------------------------- matrices

def matrix_to_doc(m) -> dict:
    """JSON-ready document for a TransitionMatrix."""
    return {
        "states": list(m.states),
        "entries": [[float(v) for v in row] for row in m.entries],
        "row_counts": list(m.row_counts) if m.row_counts is not None else None,
        "fallback_rows": sorted(m.fallback_rows),
        "from_quarter": str(m.from_quarter) if m.from_quarter is not None else None,
        "to_quarter": str(m.to_quarter) if m.to_quarter is not None else None,
        "cohort": _cohort_doc(m.cohort),
        "provenance": m.provenance,
    }


def matrix_to_csv(m) -> str:
    doc = matrix_to_doc(m)
    buf = io.StringIO()
    buf.write(
        _meta_block(
            (
                ("from_quarter", doc["from_quarter"]),
                ("to_quarter", doc["to_quarter"]),
                ("cohort", m.cohort.describe() if m.cohort is not None else None),
                ("provenance", doc["provenance"] or None),
            )
        )
    )
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["state", *doc["states"], "row_count", "fallback"])
    fallback = set(doc["fallback_rows"])
    for i, name in enumerate(doc["states"]):
        count = "" if doc["row_counts"] is None else _fmt(doc["row_counts"][i])
        w.writerow([name, *(_fmt(v) for v in doc["entries"][i]), count, int(i in fallback)])
    return buf.getvalue()


def matrix_pretty(m) -> str:
    lines = []
    header = []
    if m.from_quarter is not None and m.to_quarter is not None:
        header.append(f"{m.from_quarter} -> {m.to_quarter}")
    if m.cohort is not None:
        header.append(f"cohort: {m.cohort.describe()}")
    if header:
        lines.append("  |  ".join(header))
    width = max(5, max(len(s) for s in m.states) + 1)
    label_w = max(len(s) for s in m.states) + 1
    lines.append(" " * label_w + "".join(f"{s:>{width}}" for s in m.states))
    for i, name in enumerate(m.states):
        star = "*" if i in m.fallback_rows else ""
        row = "".join(f"{v:>{width}.2f}" for v in m.entries[i])
        lines.append(f"{name + star:<{label_w}}{row}")
    if m.fallback_rows:
        lines.append("* no observed departures; row imputed")
    return "\n".join(lines) + "\n"


# ------------------------------------------------------------------ shares

def shares_to_doc(table) -> dict:
    return {
        "quarter": str(table.quarter),
        "cohort": _cohort_doc(table.cohort),
        "total_weight": float(table.total_weight),
        "shares": {s.name: float(table.shares[s]) for s in table.shares},
        "n_obs": {s.name: int(table.n_obs[s]) for s in table.n_obs},
    }


def shares_to_csv(table) -> str:
    doc = shares_to_doc(table)
    buf = io.StringIO()
    buf.write(
        _meta_block(
            (
                ("quarter", doc["quarter"]),
                ("cohort", table.cohort.describe()),
                ("total_weight", _fmt(doc["total_weight"])),
            )
        )
    )
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["state", "share", "n_obs"])
    for name, share in doc["shares"].items():
        w.writerow([name, _fmt(share), doc["n_obs"][name]])
    return buf.getvalue()


def shares_pretty(table) -> str:
    doc = shares_to_doc(table)
    lines = [f"{doc['quarter']}  |  cohort: {table.cohort.describe()}"]
    for name, share in doc["shares"].items():
        lines.append(f"{name:<7}{share:>8.4f}  (n={doc['n_obs'][name]})")
    lines.append(f"total weight {doc['total_weight']:.6g}")
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------- fpt

def _efpt_series_doc(m, source, target, epsilon, max_horizon):
    try:
        r = efpt_series(m, source, target, epsilon=epsilon, max_horizon=max_horizon)
    except InfiniteEfptError as exc:
        return {
            "quarters": None,
            "years": None,
            "n_terms": None,
            "infinite": True,
            "detail": str(exc),
        }
    return {
        "quarters": r.quarters,
        "years": r.efpt_years,
        "n_terms": r.n_terms,
        "infinite": False,
        "detail": None,
    }


def _efpt_linear_doc(m, source, target):
    try:
        r = efpt_linear(m, source, target)
    except InfiniteEfptError as exc:
        return {
            "quarters": None,
            "years": None,
            "infinite": True,
            "trapped_states": list(exc.trapped),
            "detail": str(exc),
        }
    return {
        "quarters": r.quarters,
        "years": r.efpt_years,
        "infinite": False,
        "trapped_states": [],
        "detail": None,
    }


def build_fpt_report(m, source, target, horizon, epsilon, max_horizon) -> dict:
    """Full passage-time report as a JSON-ready document.

    Contains the distribution f(n) with its cdf and survival companions up
    to ``horizon``, the expectation by both routes (series and linear
    system, each reported even when the other is infinite), and the
    well-definedness diagnosis at ``max_horizon``.
    """
    dist = fpt_distribution(m, source, target, horizon)
    cdf = dist.cdf()
    wd = check_well_defined(m, source, target, horizon=max_horizon)
    doc = {
        "source": dist.source,
        "target": dist.target,
        "horizon": int(horizon),
        "from_quarter": str(m.from_quarter) if getattr(m, "from_quarter", None) is not None else None,
        "to_quarter": str(m.to_quarter) if getattr(m, "to_quarter", None) is not None else None,
        "cohort": _cohort_doc(getattr(m, "cohort", None)),
        "well_defined": {
            "verdict": wd.verdict,
            "mass_at_horizon": float(wd.mass_at_horizon),
            "reachable": bool(wd.reachable),
            "horizon": int(wd.horizon),
        },
        "efpt": {
            "series": _efpt_series_doc(m, source, target, epsilon, max_horizon),
            "linear_system": _efpt_linear_doc(m, source, target),
        },
        "distribution": [float(v) for v in dist.probabilities],
        "cdf": [float(v) for v in cdf],
        "survival": [float(1.0 - v) for v in cdf],
    }
    return doc


def fpt_report_to_csv(doc: dict) -> str:
    """CSV rendering of a passage-time report, numerically identical to it."""
    series = doc["efpt"]["series"]
    linear = doc["efpt"]["linear_system"]
    buf = io.StringIO()
    buf.write(
        _meta_block(
            (
                ("source", doc["source"]),
                ("target", doc["target"]),
                ("from_quarter", doc["from_quarter"]),
                ("to_quarter", doc["to_quarter"]),
                ("verdict", doc["well_defined"]["verdict"]),
                ("efpt_series_quarters", "inf" if series["infinite"] else _fmt(series["quarters"])),
                ("efpt_linear_quarters", "inf" if linear["infinite"] else _fmt(linear["quarters"])),
                (
                    "trapped_states",
                    ";".join(linear["trapped_states"]) if linear["trapped_states"] else None,
                ),
            )
        )
    )
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "f", "cdf", "survival"])
    for k in range(doc["horizon"]):
        w.writerow(
            [k + 1, _fmt(doc["distribution"][k]), _fmt(doc["cdf"][k]), _fmt(doc["survival"][k])]
        )
    return buf.getvalue()


def fpt_report_pretty(doc: dict) -> str:
    series = doc["efpt"]["series"]
    linear = doc["efpt"]["linear_system"]
    lines = [f"first passage {doc['source']} -> {doc['target']}"]
    if doc["from_quarter"]:
        lines.append(f"chain quarter: {doc['from_quarter']} -> {doc['to_quarter']}")
    lines.append(f"verdict: {doc['well_defined']['verdict']}"
                 f" (mass {doc['well_defined']['mass_at_horizon']:.6f}"
                 f" by horizon {doc['well_defined']['horizon']})")
    if series["infinite"]:
        lines.append("EFPT (series): infinite or not converged")
    else:
        lines.append(
            f"EFPT (series): {series['quarters']:.4f} quarters = {series['years']:.4f} years"
            f" ({series['n_terms']} terms)"
        )
    if linear["infinite"]:
        trapped = ", ".join(linear["trapped_states"]) or "none identified"
        lines.append(f"EFPT (linear system): infinite (trapped states: {trapped})")
    else:
        lines.append(
            f"EFPT (linear system): {linear['quarters']:.4f} quarters = {linear['years']:.4f} years"
        )
    lines.append("")
    lines.append(f"{'n':>4}  {'f':>10}  {'cdf':>10}  {'survival':>10}")
    for k in range(doc["horizon"]):
        lines.append(
            f"{k + 1:>4}  {doc['distribution'][k]:>10.6f}  {doc['cdf'][k]:>10.6f}  "
            f"{doc['survival'][k]:>10.6f}"
        )
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- fixtures

def fixtures_to_doc(fixtures) -> dict:
    return {
        "fixtures": [
            {
                "name": f.name,
                "description": f.description,
                "states": list(f.states),
                "age_band": f.age_band.name if f.age_band is not None else None,
                "from_quarter": str(f.from_quarter) if f.from_quarter is not None else None,
                "to_quarter": str(f.to_quarter) if f.to_quarter is not None else None,
                "fallback_states": sorted(f.fallback_states),
            }
            for f in fixtures
        ]
    }


def fixtures_to_csv(fixtures) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["name", "states", "age_band", "from_quarter", "to_quarter", "fallback_states", "description"])
    for f in fixtures:
        w.writerow(
            [
                f.name,
                ";".join(f.states),
                f.age_band.name if f.age_band is not None else "",
                str(f.from_quarter) if f.from_quarter is not None else "",
                str(f.to_quarter) if f.to_quarter is not None else "",
                ";".join(sorted(f.fallback_states)),
                f.description,
            ]
        )
    return buf.getvalue()
