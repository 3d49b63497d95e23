"""Verification suites: the closed-form tables, growth arguments and
property checks exposed through ``osnorm verify`` and the acceptance tests.

Every check returns a :class:`CheckResult` so callers can print one
pass/fail line per criterion and aggregate an exit code.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from . import experiments, interp, osnorm, twist
from .linalg import operator_norm
from .osnorm import COL, OH, ROW, Interp, Max, Min, OptBudget
from .seqspace import (
    FinSeq,
    basis,
    first_row_matrix,
    flat_vector,
    full_basis_matrix,
    lp_norm,
    sign_matrix,
)


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.name}: {self.detail}" if self.detail else f"[{status}] {self.name}"


def _result(name: str, failures: list[str], detail: str = "") -> CheckResult:
    if failures:
        return CheckResult(name, False, "; ".join(failures[:4]))
    return CheckResult(name, True, detail)


_TABLE_BUDGET = OptBudget(starts=24, max_iter=300, tol=1e-11, seed=0)


def check_min_table(tol: float = 0.02) -> CheckResult:
    """Minimal-quantization table: lower bounds reach the closed form."""
    failures = []
    start = time.monotonic()
    for n in range(1, 7):
        x = first_row_matrix(n)
        for p in (1.0, 4.0 / 3.0, 2.0, 4.0):
            closed = experiments.min_closed(n, p)
            est = osnorm.eval_min(p, x, _TABLE_BUDGET)
            if est.lower < closed * (1 - tol):
                failures.append(f"n={n} p={p:g}: lower {est.lower:.6g} < {closed:.6g}·(1-{tol})")
            if est.lower > closed * (1 + 1e-6):
                failures.append(f"n={n} p={p:g}: lower {est.lower:.6g} overshoots {closed:.6g}")
    elapsed = time.monotonic() - start
    if elapsed > 60:
        failures.append(f"runtime {elapsed:.1f}s exceeds 60s")
    return _result("min_quantization_table", failures, f"24 cells in {elapsed:.2f}s")


def check_sign_design(n_max: int = 12) -> CheckResult:
    failures = []
    for n in range(1, n_max + 1):
        a = sign_matrix(n)
        gram = a.T @ a
        off = max((abs(gram[i, j]) for i in range(n) for j in range(n) if i != j), default=0.0)
        if off >= 1e-12:
            failures.append(f"n={n}: off-diagonal inner product {off}")
        norm = operator_norm(a)
        want = 2 ** ((n - 1) / 2)
        if abs(norm - want) > 1e-9 * max(1.0, want):
            failures.append(f"n={n}: norm {norm} vs {want}")
    return _result("sign_design_orthogonality_and_norm", failures, f"n ≤ {n_max}")


def check_max_table(rel_tol: float = 0.02, abs_gap: float = 1e-3) -> CheckResult:
    failures = []
    for n in range(1, 7):
        x = first_row_matrix(n)
        for p in (1.0, 4.0 / 3.0, 2.0, 4.0):
            closed = experiments.max_closed(n, p)
            est = osnorm.eval_max(p, x, _TABLE_BUDGET)
            if not (est.lower <= closed * (1 + 1e-9) and est.upper >= closed * (1 - 1e-9)):
                failures.append(f"n={n} p={p:g}: [{est.lower:.6g},{est.upper:.6g}] misses {closed:.6g}")
            if p <= 2:
                if est.gap > abs_gap:
                    failures.append(f"n={n} p={p:g}: gap {est.gap:.3g} > {abs_gap}")
            elif est.gap > rel_tol * closed:
                failures.append(f"n={n} p={p:g}: gap {est.gap:.3g} > {rel_tol}·{closed:.6g}")
    return _result("max_quantization_table", failures)


def check_interp_table(rel_tol: float = 0.02) -> CheckResult:
    failures = []
    for n in range(1, 7):
        x = first_row_matrix(n)
        for p in (4.0 / 3.0, 2.0, 4.0):
            for theta in (0.25, 0.5, 0.75):
                closed = experiments.interp_closed(n, p, theta)
                est = osnorm.eval_interp(Interp(Min(p), Max(p), theta), x, _TABLE_BUDGET)
                if not (est.lower <= closed * (1 + 1e-9) and est.upper >= closed * (1 - 1e-9)):
                    failures.append(
                        f"n={n} p={p:g} θ={theta}: [{est.lower:.6g},{est.upper:.6g}] misses {closed:.6g}"
                    )
                if est.gap > rel_tol * closed:
                    failures.append(f"n={n} p={p:g} θ={theta}: gap {est.gap:.3g} > {rel_tol}·{closed:.6g}")
    return _result("interpolated_table", failures)


def check_full_basis_table(rel_tol: float = 0.02) -> CheckResult:
    failures = []
    for n in range(1, 6):
        y = full_basis_matrix(n)
        want = n**0.5
        for s, label in ((ROW, "row"), (COL, "col"), (OH, "oh")):
            v = osnorm.eval_exact(s, y)
            if abs(v - want) > 1e-9 * max(1.0, want):
                failures.append(f"n={n} {label}: {v} vs {want}")
        est = osnorm.eval_min(2.0, y, _TABLE_BUDGET)
        if est.lower < 1 - rel_tol or est.lower > 1 + 1e-6:
            failures.append(f"n={n} min lower {est.lower}")
        est = osnorm.eval_max(2.0, y, _TABLE_BUDGET)
        if not (est.lower <= n * (1 + 1e-9) and est.upper >= n * (1 - 1e-9)):
            failures.append(f"n={n} max interval [{est.lower},{est.upper}] misses {n}")
        if est.gap > rel_tol * n:
            failures.append(f"n={n} max gap {est.gap}")
    return _result("full_basis_witness_table", failures)


def check_pairing_oracles() -> CheckResult:
    failures = []
    for n in range(1, 6):
        x = first_row_matrix(n)
        val = operator_norm(osnorm.pairing_amplified(x, x))
        if abs(val - n**0.5) > 1e-9 * max(1.0, n**0.5):
            failures.append(f"first-row n={n}: {val} vs {n ** 0.5}")
        y = full_basis_matrix(n)
        val = operator_norm(osnorm.pairing_amplified(y, y))
        if abs(val - n) > 1e-9 * n:
            failures.append(f"full-basis n={n}: {val} vs {n}")
    return _result("pairing_oracles", failures)


def _interp_upper_evaluator(budget: OptBudget):
    def ev(s, z):
        return osnorm.upper_bound(s, z, budget)

    return ev


def check_derived_growth(rel_tol: float = 0.01) -> CheckResult:
    failures = []
    geometry = interp.StripGeometry(0.5)
    beta = geometry.beta

    # Conformal constant against central differences.
    h = 1e-6
    numeric = abs(geometry.phi(0.5 + h) - geometry.phi(0.5 - h)) / (2 * h)
    if abs(1.0 / numeric - beta) > 1e-8:
        failures.append(f"beta {beta} vs numeric {1.0 / numeric}")

    ev = _interp_upper_evaluator(_TABLE_BUDGET)
    prev = 0.0
    for n in range(2, 9):
        x = first_row_matrix(n)
        zero = x.scale(0.0)
        val = interp.derived_upper(x, zero, geometry, Min(2.0), Max(2.0), _TABLE_BUDGET, evaluator=ev)
        cap = (1.0 + beta * math.log(math.sqrt(n))) * n**0.25
        if val > cap * (1 + rel_tol):
            failures.append(f"n={n}: derived upper {val:.6g} > {cap:.6g}·(1+{rel_tol})")
        sandwich_lo = 0.25 * cap
        if sandwich_lo <= prev:
            failures.append(f"n={n}: sandwich lower not increasing")
        prev = sandwich_lo

    ns = range(2, 65)
    slope = experiments.least_squares_slope(
        [math.log(n) for n in ns],
        [0.25 * (1.0 + beta * math.log(math.sqrt(n))) for n in ns],
    )
    if abs(slope - beta / 8) > 0.05 * beta / 8:
        failures.append(f"growth slope {slope} vs {beta / 8}")
    return _result("derived_space_growth", failures, f"beta={beta:.6f}")


def check_multiplication_growth() -> CheckResult:
    failures = []
    for n in range(1, 9):
        x = first_row_matrix(n)
        prod = x.matmul(x.transpose())
        val = osnorm.eval_exact(OH, prod)
        if abs(val - n**0.5) > 1e-9 * max(1.0, n**0.5):
            failures.append(f"n={n}: product OH norm {val} vs {n ** 0.5}")
    ratios = [experiments.mult_growth_ratio(n) for n in range(2, 1025)]
    if any(b <= a for a, b in zip(ratios, ratios[1:])):
        failures.append("growth ratio not strictly increasing")
    beta = interp.beta_of(0.5)
    if ratios[-1] - ratios[0] < beta * math.log(512) / 4 - 1e-9:
        failures.append(f"ratio increase {ratios[-1] - ratios[0]} below {beta * math.log(512) / 4}")
    return _result("multiplication_growth", failures)


def check_axioms(samples: int = 200, seed: int = 0) -> CheckResult:
    failures = []
    small = OptBudget(starts=4, max_iter=80, tol=1e-8, seed=seed)
    for s in (ROW, COL, OH, Min(2.0), Max(2.0)):
        report = osnorm.check_ruan(s, samples, seed=seed, budget=small)
        if not report.passed:
            failures.append(f"{report.structure}: {report.violations[0]} (+{len(report.violations) - 1} more)")
    return _result("axiom_checker", failures, f"{samples} samples per structure")


def check_schwarz_pick(samples: int = 100, seed: int = 0) -> CheckResult:
    failures = []
    root = np.random.SeedSequence(seed)
    for idx, child in enumerate(root.spawn(samples)):
        rng = np.random.default_rng(child)
        side = int(rng.integers(1, 5))
        degree = 3
        coeffs = [
            rng.standard_normal((side, side)) + 1j * rng.standard_normal((side, side))
            for _ in range(degree + 1)
        ]
        coeffs = interp.scale_into_unit_ball(coeffs)
        report = interp.schwarz_pick_check(coeffs)
        if not report.passed:
            failures.append(f"sample {idx}: {report.violations[0]}")
    return _result("schwarz_pick_checker", failures, f"{samples} polynomials")


def check_ker_derivative(samples: int = 50, seed: int = 0) -> CheckResult:
    failures = []
    geometry = interp.StripGeometry(0.5)
    s0, s1 = Min(2.0), Max(2.0)
    ev = _interp_upper_evaluator(_TABLE_BUDGET)

    def interp_upper(w):
        return osnorm.eval_interp(Interp(s0, s1, geometry.theta), w, _TABLE_BUDGET).upper

    root = np.random.SeedSequence(seed)
    for idx, child in enumerate(root.spawn(samples)):
        rng = np.random.default_rng(child)
        v = osnorm._random_matrixseq(rng, max_side=3, max_key=5)
        mu = float(rng.uniform(-2.0, 2.0))
        candidate = interp.ExpCandidate((interp.ExpTerm(mu, v, power=1),))
        report = interp.ker_derivative_check(candidate, geometry, s0, s1, ev, interp_upper)
        if not report.passed:
            failures.append(f"sample {idx}: {report.violations[0]}")
    return _result("ker_derivative_checker", failures, f"{samples} candidates")


def check_kalton_peck() -> CheckResult:
    failures = []
    rng = np.random.default_rng(np.random.SeedSequence(7))
    for _ in range(100):
        v = twist._random_seq(rng, max_support=16)
        c = complex(rng.standard_normal(), rng.standard_normal())
        left = twist.kp_map(v.scale(c), 2.0)
        right = twist.kp_map(v, 2.0).scale(c)
        diff = left.sub(right)
        scale = max(1.0, lp_norm(right, 2.0))
        if lp_norm(diff, 2.0) > 1e-12 * scale:
            failures.append(f"homogeneity defect {lp_norm(diff, 2.0)}")
            break
    for n in range(2, 257):
        got = twist.kp_quasinorm(FinSeq(), flat_vector(n), 2.0)
        want = math.sqrt(n) * (1.0 + math.log(n) / 2.0)
        if abs(got - want) > 1e-10 * max(1.0, want):
            failures.append(f"log growth at n={n}: {got} vs {want}")
            break
    span = 256
    probe = twist.triviality_probe(2.0, np.zeros((span, span)), [flat_vector(n) for n in range(1, 257)])
    want = math.log(256) / 2.0
    if abs(probe - want) > 1e-10 * max(1.0, want):
        failures.append(f"triviality probe {probe} vs {want}")
    return _result("kalton_peck", failures)


CRITERIA = {
    1: check_min_table,
    2: check_sign_design,
    3: check_max_table,
    4: check_interp_table,
    5: check_full_basis_table,
    6: check_pairing_oracles,
    7: check_derived_growth,
    8: check_multiplication_growth,
    9: None,  # expanded below into the three property checkers
    10: check_kalton_peck,
}

SUITES = {
    "lemmas": (
        check_min_table,
        check_sign_design,
        check_max_table,
        check_interp_table,
        check_full_basis_table,
        check_pairing_oracles,
    ),
    "growth": (check_derived_growth, check_multiplication_growth),
    "ruan": (check_axioms, check_schwarz_pick, check_ker_derivative),
    "kp": (check_kalton_peck,),
}
SUITES["all"] = SUITES["lemmas"] + SUITES["growth"] + SUITES["ruan"] + SUITES["kp"]


def run_suite(name: str) -> list[CheckResult]:
    try:
        checks = SUITES[name]
    except KeyError:
        raise ValueError(f"unknown suite {name!r}; choose from {sorted(SUITES)}") from None
    return [check() for check in checks]
