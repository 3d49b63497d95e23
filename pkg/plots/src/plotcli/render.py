"""Render growth-rate and norm-table figures from experiment CSV files.

Input files follow the evaluator CSV schema
``experiment,n,p,theta,structure,lower,upper,closed_form,rel_gap,method``.
Norm tables are drawn on log-log axes with the certified interval as a
shaded band and the closed form dashed on top; growth experiments are drawn
against a logarithmic n axis where the expected curves are straight lines.
Rendering is deterministic: fixed figure geometry, no timestamps, fixed
SVG hash salt.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402  (backend must be pinned first)

EXPECTED_COLUMNS = [
    "experiment",
    "n",
    "p",
    "theta",
    "structure",
    "lower",
    "upper",
    "closed_form",
    "rel_gap",
    "method",
]

GROWTH_EXPERIMENTS = {"GROWTH48", "GROWTH54"}

plt.rcParams["svg.hashsalt"] = "experiment-plots"


@dataclass(frozen=True)
class PlotSpec:
    csv_path: str
    experiment: str
    out_path: str
    x_axis: str = "n"  # "n" (log-log norms) or "log_n" (growth vs log n)
    series_key: str = "auto"  # auto | structure | p | theta

    def __post_init__(self):
        if self.x_axis not in ("n", "log_n"):
            raise ValueError(f"x_axis must be 'n' or 'log_n', got {self.x_axis!r}")
        if self.series_key not in ("auto", "structure", "p", "theta"):
            raise ValueError(f"unsupported series key {self.series_key!r}")


@dataclass(frozen=True)
class SeriesFit:
    label: str
    p: float | None
    theta: float | None
    slope: float | None
    points: int


@dataclass
class RenderResult:
    out_path: str
    rows: int
    fits: list[SeriesFit] = field(default_factory=list)
    warning: str | None = None


def _parse_optional(cell: str) -> float | None:
    return float(cell) if cell not in ("", None) else None


def read_rows(csv_path: str) -> list[dict]:
    with open(csv_path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        missing = [c for c in EXPECTED_COLUMNS if c not in header]
        if missing:
            raise ValueError(f"CSV {csv_path} is missing columns: {missing}")
        rows = []
        for rec in reader:
            rows.append(
                {
                    "experiment": rec["experiment"],
                    "n": int(rec["n"]),
                    "p": _parse_optional(rec["p"]),
                    "theta": _parse_optional(rec["theta"]),
                    "structure": rec["structure"],
                    "lower": float(rec["lower"]),
                    "upper": float(rec["upper"]),
                    "closed_form": _parse_optional(rec["closed_form"]),
                    "method": rec["method"],
                }
            )
    return rows


def _series_label(row: dict, key: str) -> str:
    if key == "structure":
        return row["structure"]
    if key == "p":
        return f"p={row['p']:g}" if row["p"] is not None else "p=-"
    if key == "theta":
        return f"theta={row['theta']:g}" if row["theta"] is not None else "theta=-"
    parts = [row["structure"]]
    if row["p"] is not None:
        parts.append(f"p={row['p']:g}")
    if row["theta"] is not None:
        parts.append(f"theta={row['theta']:g}")
    return " ".join(parts)


def _group(rows: list[dict], key: str) -> dict[str, list[dict]]:
    series: dict[str, list[dict]] = {}
    for row in rows:
        series.setdefault(_series_label(row, key), []).append(row)
    for group in series.values():
        group.sort(key=lambda r: r["n"])
    return series


def _midpoint(row: dict) -> float:
    if math.isfinite(row["upper"]):
        return 0.5 * (row["lower"] + row["upper"])
    return row["lower"]


def _loglog_slope(ns: list[int], values: list[float]) -> float | None:
    pts = [(math.log(n), math.log(v)) for n, v in zip(ns, values) if n > 0 and v > 0]
    if len({x for x, _ in pts}) < 2:
        return None
    mean_x = sum(x for x, _ in pts) / len(pts)
    mean_y = sum(y for _, y in pts) / len(pts)
    num = sum((x - mean_x) * (y - mean_y) for x, y in pts)
    den = sum((x - mean_x) ** 2 for x, _ in pts)
    return num / den


def render(spec: PlotSpec) -> RenderResult:
    rows = [r for r in read_rows(spec.csv_path) if r["experiment"] == spec.experiment.upper()]
    fig, ax = plt.subplots(figsize=(7.0, 5.0), dpi=120)
    result = RenderResult(out_path=spec.out_path, rows=len(rows))
    if not rows:
        result.warning = f"no rows for experiment {spec.experiment!r} in {spec.csv_path}"
        ax.text(0.5, 0.5, "no data", ha="center", va="center", transform=ax.transAxes)
        ax.set_axis_off()
        _save(fig, spec.out_path)
        return result

    growth = spec.experiment.upper() in GROWTH_EXPERIMENTS or spec.x_axis == "log_n"
    series = _group(rows, spec.series_key)
    for label, group in sorted(series.items()):
        ns = [r["n"] for r in group]
        if growth:
            closed = [r["closed_form"] if r["closed_form"] else 1.0 for r in group]
            ys = [r["lower"] / c for r, c in zip(group, closed)]
            ax.plot(ns, ys, marker="o", markersize=3, label=label)
            result.fits.append(
                SeriesFit(label, group[0]["p"], group[0]["theta"], _loglog_slope(ns, ys), len(ns))
            )
        else:
            mids = [_midpoint(r) for r in group]
            lows = [r["lower"] for r in group]
            highs = [r["upper"] if math.isfinite(r["upper"]) else r["lower"] for r in group]
            slope = _loglog_slope(ns, mids)
            tag = f"{label} (slope {slope:.3f})" if slope is not None else label
            line = ax.plot(ns, mids, marker="o", markersize=3, label=tag)[0]
            ax.fill_between(ns, lows, highs, alpha=0.25, color=line.get_color(), linewidth=0)
            closed = [(n, r["closed_form"]) for n, r in zip(ns, group) if r["closed_form"]]
            if closed:
                ax.plot([c[0] for c in closed], [c[1] for c in closed], linestyle="--",
                        color=line.get_color(), linewidth=1.0)
            result.fits.append(SeriesFit(label, group[0]["p"], group[0]["theta"], slope, len(ns)))

    ax.set_xscale("log")
    if not growth:
        ax.set_yscale("log")
        ax.set_ylabel("matrix norm (band: certified interval, dashed: closed form)")
    else:
        ax.set_ylabel("growth value / closed form")
    ax.set_xlabel("n")
    ax.set_title(spec.experiment.upper())
    ax.legend(fontsize=7)
    ax.grid(True, which="both", alpha=0.3)
    _save(fig, spec.out_path)
    return result


def _save(fig, out_path: str) -> None:
    path = Path(out_path)
    path.parent.mkdir(parents=True, exist_ok=True)
    suffix = path.suffix.lower()
    if suffix not in (".svg", ".png"):
        raise ValueError(f"output must be .svg or .png, got {out_path!r}")
    metadata = {"Date": None} if suffix == ".svg" else {}
    fig.savefig(path, format=suffix[1:], metadata=metadata)
    plt.close(fig)
