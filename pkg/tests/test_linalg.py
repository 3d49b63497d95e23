import numpy as np
import pytest

from opspace.linalg import direct_sum, kron, operator_norm, scalar_lp


def rand_complex(rng, shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def test_identity_norm():
    assert operator_norm(np.eye(3)) == pytest.approx(1.0)


def test_rank_one_norm():
    rng = np.random.default_rng(0)
    u = rand_complex(rng, 5)
    v = rand_complex(rng, 5)
    u /= np.linalg.norm(u)
    v /= np.linalg.norm(v)
    assert operator_norm(np.outer(u, v.conj())) == pytest.approx(1.0, abs=1e-12)


def test_empty_matrix_rejected():
    with pytest.raises(ValueError):
        operator_norm(np.zeros((0, 3)))


def test_scaling_and_adjoint_invariance():
    rng = np.random.default_rng(1)
    for _ in range(20):
        m = rand_complex(rng, (4, 6))
        c = complex(rng.standard_normal(), rng.standard_normal())
        base = operator_norm(m)
        assert operator_norm(c * m) == pytest.approx(abs(c) * base, rel=1e-12)
        assert operator_norm(m.conj().T) == pytest.approx(base, rel=1e-12)


def test_direct_sum_norm_is_max():
    rng = np.random.default_rng(2)
    for _ in range(10):
        a = rand_complex(rng, (3, 3))
        b = rand_complex(rng, (2, 4))
        want = max(operator_norm(a), operator_norm(b))
        assert operator_norm(direct_sum(a, b)) == pytest.approx(want, abs=1e-12)


def test_direct_sum_shapes_and_identity_blocks():
    out = direct_sum(np.eye(2), np.zeros((1, 1)))
    assert out.shape == (3, 3)
    assert out[0, 0] == 1 and out[1, 1] == 1 and out[2, 2] == 0
    out = direct_sum(np.zeros((2, 2)), np.zeros((3, 3)))
    assert out.shape == (5, 5)


def test_kron_identity_and_elementary():
    assert np.array_equal(kron(np.eye(2), np.eye(3)), np.eye(6))
    e11 = np.zeros((2, 2))
    e11[0, 0] = 1
    out = kron(e11, e11)
    expect = np.zeros((4, 4))
    expect[0, 0] = 1
    assert np.array_equal(out, expect)


def test_kron_norm_multiplicative_against_svd_oracle():
    rng = np.random.default_rng(3)
    for _ in range(10):
        a = rand_complex(rng, (3, 4))
        b = rand_complex(rng, (2, 5))
        # Oracle: full SVD of the explicitly assembled Kronecker matrix.
        explicit = float(np.linalg.svd(np.kron(a, b), compute_uv=False)[0])
        assert operator_norm(kron(a, b)) == pytest.approx(explicit, rel=1e-11)
        assert explicit == pytest.approx(operator_norm(a) * operator_norm(b), rel=1e-11)


def test_norm_squared_matches_gram_eigenvalue():
    rng = np.random.default_rng(4)
    for _ in range(10):
        m = rand_complex(rng, (6, 5))
        top = float(np.linalg.eigvalsh(m.conj().T @ m)[-1])
        assert operator_norm(m) ** 2 == pytest.approx(top, rel=1e-9)


def test_power_iteration_path_matches_oracle():
    rng = np.random.default_rng(5)
    m = rand_complex(rng, (90, 90))
    # boost the spectral gap so the iteration converges crisply
    u = rand_complex(rng, 90)
    m = m + 3.0 * np.outer(u, u.conj()) / np.linalg.norm(u) ** 2 * operator_norm_eig(m)
    want = operator_norm_eig(m)
    assert operator_norm(m) == pytest.approx(want, rel=1e-9)


def operator_norm_eig(m):
    return float(np.sqrt(np.linalg.eigvalsh(m.conj().T @ m)[-1]))


def test_scalar_lp_edges():
    assert scalar_lp([3, 4], 2) == pytest.approx(5.0)
    assert scalar_lp([1, -2, 3], np.inf) == pytest.approx(3.0)
    assert scalar_lp([], 1) == 0.0
    with pytest.raises(ValueError):
        scalar_lp([1.0], 0.5)
