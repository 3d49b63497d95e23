import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from opspace.seqspace import FinSeq, MatrixSeq, basis, first_row_matrix, flat_vector, lp_norm
from opspace.twist import (
    amplify,
    default_test_set,
    disjoint_pair_ratio,
    interpolating_linear_map,
    kp_map,
    kp_quasinorm,
    quasilinearity_probe,
    triviality_probe,
)


def kp_oracle(coords: dict, p: float) -> dict:
    """Plain-python recomputation of the quasilinear map, coordinate by coordinate."""
    total = sum(abs(v) ** p for v in coords.values()) ** (1.0 / p)
    return {k: v * math.log(abs(v) / total) for k, v in coords.items() if v != 0}


def seqs_close(a: FinSeq, b: FinSeq, tol=1e-12) -> bool:
    keys = set(a.support) | set(b.support)
    return all(abs(a[k] - b[k]) <= tol * max(1.0, abs(b[k])) for k in keys)


# -- kp_map ---------------------------------------------------------------


def test_basis_vector_maps_to_zero():
    assert not kp_map(basis(1), 2.0)


def test_two_point_vector():
    got = kp_map(basis(1).add(basis(2)), 2.0)
    want = FinSeq({1: -math.log(2) / 2, 2: -math.log(2) / 2})
    assert seqs_close(got, want)


def test_flat_vectors_match_scalar_oracle():
    for n in (2, 4, 8):
        got = kp_map(flat_vector(n), 2.0)
        oracle = kp_oracle({k: 1.0 for k in range(1, n + 1)}, 2.0)
        assert seqs_close(got, FinSeq(oracle))
        # closed form −(log n)/2·u_n
        assert seqs_close(got, flat_vector(n).scale(-math.log(n) / 2))


def test_random_vectors_match_scalar_oracle():
    rng = np.random.default_rng(0)
    for _ in range(20):
        coords = {
            int(k): complex(rng.standard_normal(), rng.standard_normal())
            for k in rng.choice(np.arange(1, 40), size=6, replace=False)
        }
        for p in (1.5, 2.0, 3.0):
            assert seqs_close(kp_map(FinSeq(coords), p), FinSeq(kp_oracle(coords, p)), tol=1e-11)


@settings(max_examples=80, deadline=None)
@given(
    st.complex_numbers(min_magnitude=1e-3, max_magnitude=1e3, allow_nan=False, allow_infinity=False),
    st.integers(min_value=1, max_value=12),
)
def test_homogeneity(c, n):
    x = FinSeq({k: 1.0 + 0.5j * k for k in range(1, n + 1)})
    left = kp_map(x.scale(c), 2.0)
    right = kp_map(x, 2.0).scale(c)
    assert seqs_close(left, right, tol=1e-12)


def test_zero_maps_to_zero():
    assert not kp_map(FinSeq(), 2.0)


def test_kp_map_rejects_bad_exponent():
    for p in (1.0, 0.5, math.inf):
        with pytest.raises(ValueError):
            kp_map(basis(1), p)


# -- quasinorm -------------------------------------------------------------


def test_quasinorm_first_component_only():
    x = FinSeq({1: 3.0, 5: 4.0})
    assert kp_quasinorm(x, FinSeq(), 2.0) == pytest.approx(5.0)


def test_quasinorm_basis_second_component():
    assert kp_quasinorm(FinSeq(), basis(1), 2.0) == pytest.approx(1.0)


def test_quasinorm_flat_vector_closed_form():
    got = kp_quasinorm(FinSeq(), flat_vector(4), 2.0)
    assert got == pytest.approx(2 * math.log(2) + 2, rel=1e-12)


def test_quasinorm_zero_iff_both_zero():
    assert kp_quasinorm(FinSeq(), FinSeq(), 2.0) == 0.0
    assert kp_quasinorm(basis(1), FinSeq(), 2.0) > 0
    assert kp_quasinorm(FinSeq(), basis(1), 2.0) > 0


def test_quasinorm_scaling():
    rng = np.random.default_rng(1)
    x = FinSeq({1: 1.2, 3: -0.7})
    y = FinSeq({2: 0.4, 3: 2.2})
    for _ in range(5):
        c = complex(rng.standard_normal(), rng.standard_normal())
        got = kp_quasinorm(x.scale(c), y.scale(c), 2.0)
        assert got == pytest.approx(abs(c) * kp_quasinorm(x, y, 2.0), rel=1e-12)


def test_log_growth_identity():
    for n in range(2, 257):
        got = kp_quasinorm(FinSeq(), flat_vector(n), 2.0)
        want = math.sqrt(n) * (1 + math.log(n) / 2)
        assert got == pytest.approx(want, rel=1e-10)


# -- amplification -----------------------------------------------------------


def test_amplify_kills_first_row_witness():
    out = amplify(lambda v: kp_map(v, 2.0), first_row_matrix(4))
    assert out.is_zero


def test_amplify_identity():
    x = first_row_matrix(3)
    assert amplify(lambda v: v, x) == x


def test_amplify_flat_entry():
    m = MatrixSeq.from_entries(2, {(0, 0): flat_vector(2)})
    out = amplify(lambda v: kp_map(v, 2.0), m)
    assert seqs_close(out.entry(0, 0), flat_vector(2).scale(-math.log(2) / 2))


def test_amplified_defect_bounded_by_entry_count():
    # entrywise quasilinearity: the defect ratio of the amplified map is at
    # most n² times the worst scalar ratio on the entries involved
    rng = np.random.default_rng(2)
    n = 2
    scalar_max = 0.0
    for _ in range(30):
        a = FinSeq({int(k): complex(rng.standard_normal(), rng.standard_normal()) for k in range(1, 5)})
        b = FinSeq({int(k): complex(rng.standard_normal(), rng.standard_normal()) for k in range(1, 5)})
        den = lp_norm(a, 2.0) + lp_norm(b, 2.0)
        if den > 0:
            defect = kp_map(a.add(b), 2.0).sub(kp_map(a, 2.0)).sub(kp_map(b, 2.0))
            scalar_max = max(scalar_max, lp_norm(defect, 2.0) / den)
    x = MatrixSeq.from_entries(
        n, {(i, j): FinSeq({k: complex(*rng.standard_normal(2)) for k in range(1, 5)}) for i in range(n) for j in range(n)}
    )
    y = MatrixSeq.from_entries(
        n, {(i, j): FinSeq({k: complex(*rng.standard_normal(2)) for k in range(1, 5)}) for i in range(n) for j in range(n)}
    )
    kp2 = lambda v: kp_map(v, 2.0)
    defect = amplify(kp2, x.add(y)).sub(amplify(kp2, x)).sub(amplify(kp2, y))
    num = max(lp_norm(defect.entry(i, j), 2.0) for i in range(n) for j in range(n))
    den = sum(
        lp_norm(x.entry(i, j), 2.0) + lp_norm(y.entry(i, j), 2.0) for i in range(n) for j in range(n)
    )
    assert num / den <= n * n * max(scalar_max, disjoint_pair_ratio(2.0)) * n * n + 1e-9


# -- probes -------------------------------------------------------------------


def test_probe_empty():
    report = quasilinearity_probe(2.0, 0, seed=0)
    assert report.max_ratio == 0.0
    assert report.arg_max is None


def test_probe_contains_disjoint_closed_form():
    report = quasilinearity_probe(2.0, 1, seed=0)
    assert report.pair_max >= disjoint_pair_ratio(2.0) - 1e-12
    got = quasilinearity_probe(2.0, 50, seed=0)
    assert got.max_ratio >= got.pair_max >= disjoint_pair_ratio(2.0) - 1e-12


def test_probe_deterministic():
    a = quasilinearity_probe(2.0, 40, seed=5)
    b = quasilinearity_probe(2.0, 40, seed=5)
    assert a.max_ratio == b.max_ratio
    assert a.triple_max == b.triple_max


def test_equal_arguments_have_zero_defect():
    # direct evaluation: K(2x) − 2K(x) vanishes by homogeneity
    x = FinSeq({1: 0.3, 2: -1.1, 7: 2.0})
    defect = kp_map(x.add(x), 2.0).sub(kp_map(x, 2.0)).sub(kp_map(x, 2.0))
    assert lp_norm(defect, 2.0) == pytest.approx(0.0, abs=1e-14)


def test_disjoint_ratio_closed_form():
    for p in (1.5, 2.0, 3.0):
        x, y = basis(1), basis(2)
        defect = kp_map(x.add(y), p).sub(kp_map(x, p)).sub(kp_map(y, p))
        got = lp_norm(defect, p) / (lp_norm(x, p) + lp_norm(y, p))
        assert got == pytest.approx(disjoint_pair_ratio(p), rel=1e-12)


# -- triviality ----------------------------------------------------------------


def test_triviality_zero_map_on_flat_vectors():
    vectors = [flat_vector(n) for n in range(1, 65)]
    got = triviality_probe(2.0, np.zeros((64, 64)), vectors)
    assert got == pytest.approx(math.log(64) / 2, rel=1e-12)


def test_triviality_interpolating_map_still_grows():
    span = 64
    lin = interpolating_linear_map(span)
    vectors = [flat_vector(n) for n in range(1, span + 1)]
    got = triviality_probe(2.0, lin, vectors)
    assert got == pytest.approx(math.log(span) / 2, rel=1e-12)
    # ratio on basis vectors alone would be zero
    assert triviality_probe(2.0, lin, [basis(k) for k in range(1, 9)]) == pytest.approx(0.0, abs=1e-14)


def test_triviality_probe_growth_when_range_doubles():
    for span in (16, 32, 64, 128):
        small = triviality_probe(2.0, np.zeros((2 * span, 2 * span)), [flat_vector(n) for n in range(1, span + 1)])
        large = triviality_probe(2.0, np.zeros((2 * span, 2 * span)), [flat_vector(n) for n in range(1, 2 * span + 1)])
        assert large - small >= math.log(2) / 2 - 1e-12


def test_triviality_empty_test_set():
    assert triviality_probe(2.0, np.zeros((4, 4)), []) == 0.0


def test_triviality_dimension_mismatch():
    with pytest.raises(ValueError):
        triviality_probe(2.0, np.zeros((2, 2)), [flat_vector(5)])


def test_default_test_set_contents():
    vectors = default_test_set(max_n=8, seed=0, randoms=2)
    assert flat_vector(8) in vectors
    assert basis(1) in vectors
