"""Named, reproducible experiment runs emitting CSV rows.

Each run pairs evaluator output (certified intervals or exact values) with
the corresponding closed-form value where one exists, so the tables and
growth curves can be checked and plotted downstream.  The closed-form
column is always populated from the analytic formulas, never from
evaluator output.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Iterable

from . import interp as interp_mod
from . import osnorm
from .osnorm import COL, OH, ROW, Interp, Max, Min, OptBudget
from .seqspace import MatrixSeq, first_row_matrix, full_basis_matrix, sign_matrix
from .linalg import operator_norm

CSV_HEADER = "experiment,n,p,theta,structure,lower,upper,closed_form,rel_gap,method"

EXPERIMENT_NAMES = (
    "LEMMA42",
    "LEMMA43",
    "LEMMA44",
    "LEMMA45",
    "LEMMA53_Y",
    "GROWTH48",
    "GROWTH54",
    "MULT62",
)


@dataclass(frozen=True)
class ExperimentRow:
    experiment: str
    n: int
    p: float | None
    theta: float | None
    structure: str
    lower: float
    upper: float
    closed_form: float | None
    method: str

    @property
    def rel_gap(self) -> float | None:
        if self.closed_form is None:
            return None
        return (self.upper - self.lower) / max(1.0, self.closed_form)

    def to_cells(self) -> list[str]:
        def fmt(v) -> str:
            if v is None:
                return ""
            if isinstance(v, float):
                return repr(float(v))  # shortest round-trip, plain-float repr
            return str(v)

        return [
            self.experiment,
            str(self.n),
            fmt(self.p),
            fmt(self.theta),
            self.structure,
            fmt(self.lower),
            fmt(self.upper),
            fmt(self.closed_form),
            fmt(self.rel_gap),
            self.method,
        ]


@dataclass(frozen=True)
class RunParams:
    n_values: tuple[int, ...] = (1, 2, 3, 4, 5, 6)
    p_values: tuple[float, ...] = (1.0, 4.0 / 3.0, 2.0, 4.0)
    theta_values: tuple[float, ...] = (0.25, 0.5, 0.75)
    seed: int = 0
    budget: OptBudget = field(default_factory=OptBudget)
    growth_constants: tuple[float, float] = (1.0, 1.0)  # (c_C, c_T) for GROWTH54


# -- closed forms ---------------------------------------------------------


def min_closed(n: int, p: float) -> float:
    return n ** (1.0 / p - 0.5) if p <= 2 else 1.0


def max_closed(n: int, p: float) -> float:
    return n**0.5 if p <= 2 else n ** (1.0 / p)


def interp_closed(n: int, p: float, theta: float) -> float:
    if p <= 2:
        return n ** (0.5 - (1.0 - theta) * (1.0 - 1.0 / p))
    return n ** (theta / p)


def lambda_growth(n: int, p: float) -> float:
    return n ** (1.0 - 1.0 / p) if p <= 2 else n ** (1.0 / p)


def growth54_value(n: int, c_c: float, c_t: float, theta: float = 0.5) -> float:
    beta = interp_mod.beta_of(theta)
    return 0.25 * (1.0 / c_c + beta * (math.log(n) - c_t))


def mult_growth_ratio(n: int, theta: float = 0.5) -> float:
    """Derived-space lower bound of the squared-witness product divided by √n."""
    beta = interp_mod.beta_of(theta)
    return 0.25 * (1.0 + beta * math.log(n))


def least_squares_slope(xs: Iterable[float], ys: Iterable[float]) -> float:
    xs, ys = list(xs), list(ys)
    mean_x = sum(xs) / len(xs)
    mean_y = sum(ys) / len(ys)
    num = sum((x - mean_x) * (y - mean_y) for x, y in zip(xs, ys))
    den = sum((x - mean_x) ** 2 for x in xs)
    return num / den


# -- caps ------------------------------------------------------------------

_CAPS = {
    "LEMMA42": 8,
    "LEMMA43": 12,
    "LEMMA44": 8,
    "LEMMA45": 8,
    "LEMMA53_Y": 6,
    "GROWTH48": 64,
    "GROWTH54": 1 << 20,
    "MULT62": 8,
}


def _check_cap(name: str, n_values: Iterable[int]) -> None:
    cap = _CAPS[name]
    for n in n_values:
        if n < 1 or n > cap:
            raise ValueError(f"{name} supports 1 <= n <= {cap}, got {n}")


# -- runs ------------------------------------------------------------------


def run(name: str, params: RunParams | None = None) -> list[ExperimentRow]:
    params = params or RunParams()
    name = name.upper()
    if name not in EXPERIMENT_NAMES:
        raise ValueError(f"unknown experiment {name!r}; choose from {EXPERIMENT_NAMES}")
    _check_cap(name, params.n_values)
    return _RUNNERS[name](params)


def _run_lemma42(params: RunParams) -> list[ExperimentRow]:
    rows = []
    for n in params.n_values:
        x = first_row_matrix(n)
        for p in params.p_values:
            est = osnorm.eval_min(p, x, params.budget)
            rows.append(
                ExperimentRow(
                    "LEMMA42", n, p, None, f"min:p={p:g}", est.lower, est.upper,
                    min_closed(n, p), f"{est.lower_method}|{est.upper_method}",
                )
            )
    return rows


def _run_lemma43(params: RunParams) -> list[ExperimentRow]:
    rows = []
    for n in params.n_values:
        a = sign_matrix(n)
        gram = a.T @ a
        max_off = max(
            (abs(gram[i, j]) for i in range(n) for j in range(n) if i != j),
            default=0.0,
        )
        norm = operator_norm(a)
        rows.append(
            ExperimentRow("LEMMA43", n, None, None, "scalar", norm, norm, 2 ** ((n - 1) / 2), "sign_design_norm")
        )
        rows.append(
            ExperimentRow(
                "LEMMA43", n, None, None, "scalar_gram_offdiag", max_off, max_off, 0.0,
                "column_orthogonality",
            )
        )
    return rows


def _run_lemma44(params: RunParams) -> list[ExperimentRow]:
    rows = []
    for n in params.n_values:
        x = first_row_matrix(n)
        for p in params.p_values:
            est = osnorm.eval_max(p, x, params.budget)
            rows.append(
                ExperimentRow(
                    "LEMMA44", n, p, None, f"max:p={p:g}", est.lower, est.upper,
                    max_closed(n, p), f"{est.lower_method}|{est.upper_method}",
                )
            )
    return rows


def _run_lemma45(params: RunParams) -> list[ExperimentRow]:
    rows = []
    for n in params.n_values:
        x = first_row_matrix(n)
        for p in params.p_values:
            for theta in params.theta_values:
                s = Interp(Min(p), Max(p), theta)
                est = osnorm.eval_interp(s, x, params.budget)
                rows.append(
                    ExperimentRow(
                        "LEMMA45", n, p, theta, osnorm.format_structure(s), est.lower, est.upper,
                        interp_closed(n, p, theta), f"{est.lower_method}|{est.upper_method}",
                    )
                )
    return rows


def _run_lemma53(params: RunParams) -> list[ExperimentRow]:
    rows = []
    for n in params.n_values:
        y = full_basis_matrix(n)
        for s, label in ((ROW, "row"), (COL, "col"), (OH, "oh")):
            v = osnorm.eval_exact(s, y)
            rows.append(ExperimentRow("LEMMA53_Y", n, 2.0, None, label, v, v, n**0.5, "exact"))
        est = osnorm.eval_min(2.0, y, params.budget)
        rows.append(
            ExperimentRow(
                "LEMMA53_Y", n, 2.0, None, "min:p=2", est.lower, est.upper, 1.0,
                f"{est.lower_method}|{est.upper_method}",
            )
        )
        est = osnorm.eval_max(2.0, y, params.budget)
        rows.append(
            ExperimentRow(
                "LEMMA53_Y", n, 2.0, None, "max:p=2", est.lower, est.upper, float(n),
                f"{est.lower_method}|{est.upper_method}",
            )
        )
    return rows


def _run_growth48(params: RunParams) -> list[ExperimentRow]:
    rows = []
    for theta in params.theta_values:
        beta = interp_mod.beta_of(theta)
        for p in params.p_values:
            if p == 1:
                continue  # the growth factor log λ_n vanishes at p = 1
            for n in params.n_values:
                base = interp_closed(n, p, theta)
                lam = lambda_growth(n, p)
                hi = (1.0 + beta * math.log(lam)) * base
                rows.append(
                    ExperimentRow(
                        "GROWTH48", n, p, theta, "derived", 0.25 * hi, hi, base,
                        "derived_sandwich_closed_form",
                    )
                )
    return rows


def _run_growth54(params: RunParams) -> list[ExperimentRow]:
    c_c, c_t = params.growth_constants
    if c_c <= 0 or c_t < 0:
        raise ValueError("growth constants must satisfy c_C > 0 and c_T >= 0")
    rows = []
    for n in params.n_values:
        val = growth54_value(n, c_c, c_t)
        rows.append(
            ExperimentRow(
                "GROWTH54", n, None, 0.5, "derived", val, math.inf, None,
                f"unbounded_ratio(c_C={c_c:g},c_T={c_t:g})",
            )
        )
    return rows


def _run_mult62(params: RunParams) -> list[ExperimentRow]:
    rows = []
    for n in params.n_values:
        x = first_row_matrix(n)
        product = x.matmul(x.transpose())
        oh_val = osnorm.eval_exact(OH, product)
        rows.append(
            ExperimentRow("MULT62", n, None, 0.5, "oh", oh_val, oh_val, n**0.5, "exact_product_norm")
        )
        ratio = mult_growth_ratio(n)
        rows.append(
            ExperimentRow(
                "MULT62", n, None, 0.5, "derived", ratio * n**0.5, math.inf, None,
                "derived_growth_vs_bounded_multiplication",
            )
        )
    return rows


_RUNNERS = {
    "LEMMA42": _run_lemma42,
    "LEMMA43": _run_lemma43,
    "LEMMA44": _run_lemma44,
    "LEMMA45": _run_lemma45,
    "LEMMA53_Y": _run_lemma53,
    "GROWTH48": _run_growth48,
    "GROWTH54": _run_growth54,
    "MULT62": _run_mult62,
}


def write_csv(rows: Iterable[ExperimentRow], stream) -> None:
    # Structure specs may contain commas (nested interpolation), so fields
    # are quoted per RFC 4180; the header itself never needs quotes.
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CSV_HEADER.split(","))
    for row in rows:
        writer.writerow(row.to_cells())


def rows_to_csv(rows: Iterable[ExperimentRow]) -> str:
    buf = io.StringIO()
    write_csv(rows, buf)
    return buf.getvalue()
