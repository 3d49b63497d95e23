import math

import numpy as np
import pytest

from opspace import osnorm
from opspace.linalg import operator_norm
from opspace.osnorm import check_ruan, pairing_amplified, Min, Max, OH, ROW, COL, OptBudget
from opspace.seqspace import MatrixSeq, basis, first_row_matrix, full_basis_matrix


def test_first_row_pairing_values():
    for n in range(1, 6):
        x = first_row_matrix(n)
        assert operator_norm(pairing_amplified(x, x)) == pytest.approx(math.sqrt(n), rel=1e-9)


def test_full_basis_pairing_values():
    for n in range(1, 6):
        y = full_basis_matrix(n)
        assert operator_norm(pairing_amplified(y, y)) == pytest.approx(float(n), rel=1e-9)


def test_disjoint_supports_pair_to_zero():
    x = MatrixSeq.from_entries(2, {(0, 0): basis(1)})
    z = MatrixSeq.from_entries(2, {(1, 1): basis(5)})
    assert np.all(pairing_amplified(x, z) == 0)


def test_pairing_shape():
    x = first_row_matrix(2)
    z = first_row_matrix(3)
    assert pairing_amplified(x, z).shape == (6, 6)


def test_pairing_matches_oh_construction():
    rng = np.random.default_rng(1)
    n = 3
    comps = {
        int(k): rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        for k in (1, 2, 5)
    }
    x = MatrixSeq(n, comps)
    via_pairing = operator_norm(pairing_amplified(x, x.conj()))
    assert osnorm.eval_exact(OH, x) ** 2 == pytest.approx(via_pairing, rel=1e-9)


def test_ruan_checker_exact_structures_clean():
    budget = OptBudget(starts=4, max_iter=60, tol=1e-8, seed=0)
    for s in (ROW, COL, OH):
        report = check_ruan(s, samples=25, seed=1, budget=budget)
        assert report.passed, report.violations[:3]
        assert report.checks > 0


def test_ruan_checker_interval_structures_clean():
    budget = OptBudget(starts=4, max_iter=60, tol=1e-8, seed=0)
    for s in (Min(2.0), Max(2.0)):
        report = check_ruan(s, samples=15, seed=2, budget=budget)
        assert report.passed, report.violations[:3]


def test_ruan_report_serializable():
    report = check_ruan(ROW, samples=3, seed=0)
    data = report.to_dict()
    assert data["structure"] == "row"
    assert data["violations"] == []
