"""Kalton–Peck quasilinear map, twisted-sum quasinorms and nontriviality probes."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from .seqspace import FinSeq, MatrixSeq, basis, flat_vector, lp_norm


def _check_exponent(p: float) -> None:
    if not (1.0 < p < math.inf):
        raise ValueError(f"the quasilinear map needs p in (1, inf), got {p}")


def kp_map(x: FinSeq, p: float) -> FinSeq:
    """Coordinate i maps to x_i·log(|x_i|/‖x‖_p); homogeneous of degree 1."""
    _check_exponent(p)
    norm = lp_norm(x, p)
    if norm == 0.0:
        return FinSeq()
    return FinSeq({k: v * math.log(abs(v) / norm) for k, v in x.coords.items()})


def kp_quasinorm(x: FinSeq, y: FinSeq, p: float) -> float:
    """‖x − K(y)‖_p + ‖y‖_p, the twisted-sum quasinorm of the pair (x, y)."""
    _check_exponent(p)
    return lp_norm(x.sub(kp_map(y, p)), p) + lp_norm(y, p)


def amplify(map_fn: Callable[[FinSeq], FinSeq], m: MatrixSeq) -> MatrixSeq:
    """Apply a scalar-sequence map to every entry of the matrix independently."""
    entries = {}
    for i in range(m.n):
        for j in range(m.n):
            image = map_fn(m.entry(i, j))
            if image:
                entries[(i, j)] = image
    return MatrixSeq.from_entries(m.n, entries)


@dataclass(frozen=True)
class QuasilinearReport:
    max_ratio: float
    arg_max: tuple[FinSeq, ...] | None
    samples: int
    seed: int
    pair_max: float
    triple_max: float

    def to_dict(self) -> dict:
        return {
            "max_ratio": self.max_ratio,
            "samples": self.samples,
            "seed": self.seed,
            "pair_max": self.pair_max,
            "triple_max": self.triple_max,
        }


def _random_seq(rng: np.random.Generator, max_support: int = 32) -> FinSeq:
    size = int(rng.integers(1, max_support + 1))
    keys = rng.choice(np.arange(1, 2 * max_support + 1), size=size, replace=False)
    return FinSeq({int(k): complex(rng.standard_normal(), rng.standard_normal()) for k in keys})


def disjoint_pair_ratio(p: float) -> float:
    """Additivity defect on disjointly supported equal-norm vectors.

    For disjoint x, y with ‖x‖ = ‖y‖: K(x+y) − K(x) − K(y) = −(log2/p)(x+y),
    giving ratio (log2/p)·2^{1/p−1}.
    """
    _check_exponent(p)
    return (math.log(2.0) / p) * 2.0 ** (1.0 / p - 1.0)


def quasilinearity_probe(p: float, samples: int, seed: int = 0) -> QuasilinearReport:
    """Empirical additivity defect of the quasilinear map.

    Over seeded random pairs records ‖K(x+y) − K(x) − K(y)‖/(‖x‖+‖y‖); over
    random zero-sum triples records ‖ΣK(z_i)‖/Σ‖z_i‖.  The closed-form
    disjoint-support pair is always included as a deterministic sample.
    """
    _check_exponent(p)
    if samples < 0:
        raise ValueError("samples must be >= 0")
    best = 0.0
    arg = None
    pair_max = 0.0
    triple_max = 0.0
    if samples > 0:
        # Deterministic disjoint sample with the known closed-form ratio.
        x0, y0 = basis(1), basis(2)
        defect = kp_map(x0.add(y0), p).sub(kp_map(x0, p)).sub(kp_map(y0, p))
        ratio = lp_norm(defect, p) / (lp_norm(x0, p) + lp_norm(y0, p))
        pair_max = ratio
        best, arg = ratio, (x0, y0)

        root = np.random.SeedSequence(seed)
        for child in root.spawn(samples):
            rng = np.random.default_rng(child)
            x, y = _random_seq(rng), _random_seq(rng)
            den = lp_norm(x, p) + lp_norm(y, p)
            if den > 0:
                defect = kp_map(x.add(y), p).sub(kp_map(x, p)).sub(kp_map(y, p))
                ratio = lp_norm(defect, p) / den
                pair_max = max(pair_max, ratio)
                if ratio > best:
                    best, arg = ratio, (x, y)
            z1, z2 = _random_seq(rng), _random_seq(rng)
            z3 = z1.add(z2).scale(-1)  # zero-sum triple
            den = lp_norm(z1, p) + lp_norm(z2, p) + lp_norm(z3, p)
            if den > 0:
                total = kp_map(z1, p).add(kp_map(z2, p)).add(kp_map(z3, p))
                ratio = lp_norm(total, p) / den
                triple_max = max(triple_max, ratio)
                if ratio > best:
                    best, arg = ratio, (z1, z2, z3)
    return QuasilinearReport(
        max_ratio=best, arg_max=arg, samples=samples, seed=seed, pair_max=pair_max, triple_max=triple_max
    )


def default_test_set(max_n: int = 64, seed: int = 0, randoms: int = 8) -> list[FinSeq]:
    """Flat vectors, basis vectors and seeded random unit vectors."""
    out: list[FinSeq] = [flat_vector(n) for n in range(1, max_n + 1)]
    out.extend(basis(k) for k in range(1, min(max_n, 8) + 1))
    root = np.random.SeedSequence(seed)
    for child in root.spawn(randoms):
        rng = np.random.default_rng(child)
        v = _random_seq(rng, max_support=min(max_n, 16))
        norm = lp_norm(v, 2)
        if norm > 0:
            out.append(v.scale(1.0 / norm))
    return out


def triviality_probe(p: float, linear_map: np.ndarray, test_set: Iterable[FinSeq] | None = None) -> float:
    """max over the test set of ‖K(z) − L(z)‖_p/‖z‖_p for a linear L on span(e_1..e_N).

    A finite maximum over an exhaustive test family would witness triviality
    of the twisted sum; unbounded growth (e.g. on the flat vectors) witnesses
    that L fails to approximate K.
    """
    _check_exponent(p)
    linear_map = np.asarray(linear_map, dtype=np.complex128)
    if linear_map.ndim != 2 or linear_map.shape[0] != linear_map.shape[1]:
        raise ValueError("the linear map must be a square matrix on span(e_1..e_N)")
    n_span = linear_map.shape[0]
    if test_set is None:
        test_set = default_test_set(max_n=max(n_span, 1))
    best = 0.0
    for z in test_set:
        norm = lp_norm(z, p)
        if norm == 0:
            continue
        if z.support and max(z.support) > n_span:
            raise ValueError(
                f"test vector supported up to {max(z.support)} exceeds the span dimension {n_span}"
            )
        coords = z.values_on(range(1, n_span + 1))
        image = linear_map @ coords
        lz = FinSeq({k + 1: image[k] for k in range(n_span)})
        best = max(best, lp_norm(kp_map(z, p).sub(lz), p) / norm)
    return best


def interpolating_linear_map(n_span: int) -> np.ndarray:
    """The linear extension of K from the basis vectors: K(e_i) = 0, so L = 0."""
    return np.zeros((n_span, n_span), dtype=np.complex128)
