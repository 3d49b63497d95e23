"""Finitely supported sequences, matrices over them, and witness builders.

A :class:`FinSeq` is a finitely supported complex sequence indexed from 1
(the coordinates of an element of the dense subspace of ℓ_p).  A
:class:`MatrixSeq` is an n×n matrix whose entries are such sequences,
stored component-wise: x = Σ_k X_k ⊗ e_k with X_k complex n×n matrices.
Both views (entries and components) are available and kept consistent.
"""

from __future__ import annotations

import json
import math
from types import MappingProxyType
from typing import Callable, Iterable, Mapping

import numpy as np

from .linalg import as_matrix, scalar_lp


class FinSeq:
    """Finitely supported complex sequence; zero coordinates are dropped."""

    __slots__ = ("_coords",)

    def __init__(self, coords: Mapping[int, complex] | None = None):
        clean: dict[int, complex] = {}
        if coords:
            for k, v in coords.items():
                k = int(k)
                if k < 1:
                    raise ValueError(f"sequence indices are 1-based, got {k}")
                v = complex(v)
                if v != 0:
                    clean[k] = v
        self._coords = clean

    @property
    def coords(self) -> Mapping[int, complex]:
        return MappingProxyType(self._coords)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(sorted(self._coords))

    def __getitem__(self, k: int) -> complex:
        return self._coords.get(int(k), 0j)

    def __bool__(self) -> bool:
        return bool(self._coords)

    def __eq__(self, other) -> bool:
        return isinstance(other, FinSeq) and self._coords == other._coords

    def __hash__(self):
        return hash(frozenset(self._coords.items()))

    def __repr__(self) -> str:
        items = ", ".join(f"{k}: {v}" for k, v in sorted(self._coords.items()))
        return f"FinSeq({{{items}}})"

    def add(self, other: "FinSeq") -> "FinSeq":
        out = dict(self._coords)
        for k, v in other._coords.items():
            out[k] = out.get(k, 0j) + v
        return FinSeq(out)

    def sub(self, other: "FinSeq") -> "FinSeq":
        return self.add(other.scale(-1))

    def scale(self, c: complex) -> "FinSeq":
        return FinSeq({k: c * v for k, v in self._coords.items()})

    def conj(self) -> "FinSeq":
        return FinSeq({k: v.conjugate() for k, v in self._coords.items()})

    def pointwise_mul(self, other: "FinSeq") -> "FinSeq":
        keys = set(self._coords) & set(other._coords)
        return FinSeq({k: self._coords[k] * other._coords[k] for k in keys})

    def values_on(self, indices: Iterable[int]) -> np.ndarray:
        return np.array([self[k] for k in indices], dtype=np.complex128)


def basis(k: int) -> FinSeq:
    return FinSeq({k: 1.0})


def lp_norm(v: FinSeq, p: float) -> float:
    """Standard ℓ_p norm of the coordinates, p ∈ [1, ∞]."""
    if p < 1:
        raise ValueError(f"lp norm requires p >= 1, got {p}")
    return scalar_lp(list(v.coords.values()), p)


class MatrixSeq:
    """n×n matrix over finitely supported sequences, stored as Σ_k X_k ⊗ e_k.

    ``components`` maps the sequence index k (1-based) to the complex n×n
    matrix X_k of k-th coordinates.  Zero components are never stored.
    Matrix positions use 0-based (i, j) as everywhere in numpy code.
    """

    __slots__ = ("_n", "_components")

    def __init__(self, n: int, components: Mapping[int, np.ndarray]):
        n = int(n)
        if n < 1:
            raise ValueError(f"matrix side must be >= 1, got {n}")
        store: dict[int, np.ndarray] = {}
        for k, mat in components.items():
            k = int(k)
            if k < 1:
                raise ValueError(f"sequence indices are 1-based, got {k}")
            a = as_matrix(mat)
            if a.shape != (n, n):
                raise ValueError(f"component {k} has shape {a.shape}, expected ({n}, {n})")
            if np.any(a != 0):
                c = a.astype(np.complex128).copy()
                c.setflags(write=False)
                store[k] = c
        self._n = n
        self._components = store

    @property
    def n(self) -> int:
        return self._n

    @property
    def components(self) -> Mapping[int, np.ndarray]:
        return MappingProxyType(self._components)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(sorted(self._components))

    @property
    def support_dim(self) -> int:
        return len(self._components)

    @property
    def is_zero(self) -> bool:
        return not self._components

    def __eq__(self, other) -> bool:
        if not isinstance(other, MatrixSeq) or self._n != other._n:
            return False
        if self.support != other.support:
            return False
        return all(np.array_equal(self._components[k], other._components[k]) for k in self.support)

    def __repr__(self) -> str:
        return f"MatrixSeq(n={self._n}, support={list(self.support)})"

    # -- views ---------------------------------------------------------

    def entry(self, i: int, j: int) -> FinSeq:
        """Entry (i, j) as a sequence: coordinate k equals (X_k)[i, j]."""
        return FinSeq({k: mat[i, j] for k, mat in self._components.items()})

    @staticmethod
    def from_entries(n: int, entries: Mapping[tuple[int, int], FinSeq]) -> "MatrixSeq":
        comps: dict[int, np.ndarray] = {}
        for (i, j), seq in entries.items():
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"entry position ({i}, {j}) outside a {n}×{n} matrix")
            for k, v in seq.coords.items():
                comps.setdefault(k, np.zeros((n, n), dtype=np.complex128))[i, j] = v
        return MatrixSeq(n, comps)

    def component_stack(self) -> tuple[tuple[int, ...], np.ndarray]:
        """Sorted support and the stacked (d, n, n) array of components."""
        keys = self.support
        if not keys:
            return keys, np.zeros((0, self._n, self._n), dtype=np.complex128)
        return keys, np.stack([self._components[k] for k in keys])

    # -- arithmetic ----------------------------------------------------

    def scale(self, c: complex) -> "MatrixSeq":
        return MatrixSeq(self._n, {k: c * m for k, m in self._components.items()})

    def add(self, other: "MatrixSeq") -> "MatrixSeq":
        if other._n != self._n:
            raise ValueError("matrix sides differ")
        comps = {k: np.array(m) for k, m in self._components.items()}
        for k, m in other._components.items():
            comps[k] = comps.get(k, 0) + m
        return MatrixSeq(self._n, comps)

    def sub(self, other: "MatrixSeq") -> "MatrixSeq":
        return self.add(other.scale(-1))

    def transpose(self) -> "MatrixSeq":
        return MatrixSeq(self._n, {k: m.T for k, m in self._components.items()})

    def conj(self) -> "MatrixSeq":
        """Entrywise complex conjugation (sequence coordinates conjugated)."""
        return MatrixSeq(self._n, {k: np.conj(m) for k, m in self._components.items()})

    def compress(self, alpha, beta) -> "MatrixSeq":
        """Scalar compression α·x·β with α (m×n) and β (n×m) scalar matrices."""
        alpha, beta = as_matrix(alpha), as_matrix(beta)
        if alpha.shape[1] != self._n or beta.shape[0] != self._n:
            raise ValueError("compression shapes do not match the matrix side")
        if alpha.shape[0] != beta.shape[1]:
            raise ValueError("compression must produce a square matrix")
        return MatrixSeq(alpha.shape[0], {k: alpha @ m @ beta for k, m in self._components.items()})

    def direct_sum(self, other: "MatrixSeq") -> "MatrixSeq":
        n = self._n + other._n
        comps: dict[int, np.ndarray] = {}
        for k, m in self._components.items():
            blk = np.zeros((n, n), dtype=np.complex128)
            blk[: self._n, : self._n] = m
            comps[k] = blk
        for k, m in other._components.items():
            blk = comps.setdefault(k, np.zeros((n, n), dtype=np.complex128))
            blk[self._n :, self._n :] = m
        return MatrixSeq(n, comps)

    def permute_seq(self, perm: Callable[[int], int]) -> "MatrixSeq":
        """Relabel sequence coordinates by an injective index map."""
        comps: dict[int, np.ndarray] = {}
        for k, m in self._components.items():
            k2 = int(perm(k))
            if k2 in comps:
                raise ValueError("sequence permutation is not injective on the support")
            comps[k2] = m
        return MatrixSeq(self._n, comps)

    def matmul(self, other: "MatrixSeq") -> "MatrixSeq":
        """Matrix product with pointwise multiplication of sequence entries."""
        if other._n != self._n:
            raise ValueError("matrix sides differ")
        n = self._n
        entries: dict[tuple[int, int], FinSeq] = {}
        for i in range(n):
            for j in range(n):
                acc = FinSeq()
                for k in range(n):
                    acc = acc.add(self.entry(i, k).pointwise_mul(other.entry(k, j)))
                if acc:
                    entries[(i, j)] = acc
        return MatrixSeq.from_entries(n, entries)

    # -- entry norms ---------------------------------------------------

    def entry_lp_norms(self, p: float) -> np.ndarray:
        """Matrix of ℓ_p norms of the entries."""
        if p < 1:
            raise ValueError(f"lp norm requires p >= 1, got {p}")
        _, stack = self.component_stack()
        if stack.shape[0] == 0:
            return np.zeros((self._n, self._n))
        a = np.abs(stack)
        if math.isinf(p):
            return a.max(axis=0)
        return (a**p).sum(axis=0) ** (1.0 / p)

    def max_entry_lp(self, p: float) -> float:
        norms = self.entry_lp_norms(p)
        return float(norms.max()) if norms.size else 0.0

    def sum_entry_lp(self, p: float) -> float:
        return float(self.entry_lp_norms(p).sum())


# -- witnesses ----------------------------------------------------------


def sign_matrix(n: int) -> np.ndarray:
    """Recursive ±1 design with pairwise-orthogonal columns, shape 2^{n-1}×n."""
    if n < 1:
        raise ValueError("sign matrix needs n >= 1")
    if n > 20:
        raise ValueError(f"sign matrix with n={n} has 2^{n - 1} rows; capped at n = 20")
    a = np.ones((1, 1))
    for _ in range(n - 1):
        rows = a.shape[0]
        a = np.block([[np.ones((2 * rows, 1)), np.vstack([a, -a])]])
    return a


def first_row_matrix(n: int) -> MatrixSeq:
    """n×n matrix with first row (e_1, …, e_n) and zeros elsewhere."""
    if n < 1:
        raise ValueError("witness needs n >= 1")
    comps = {}
    for k in range(1, n + 1):
        m = np.zeros((n, n), dtype=np.complex128)
        m[0, k - 1] = 1.0
        comps[k] = m
    return MatrixSeq(n, comps)


def full_basis_matrix(n: int) -> MatrixSeq:
    """n×n matrix with entry (i, j) = e_{(i-1)n+j} in row-major order."""
    if n < 1:
        raise ValueError("witness needs n >= 1")
    comps = {}
    for i in range(n):
        for j in range(n):
            m = np.zeros((n, n), dtype=np.complex128)
            m[i, j] = 1.0
            comps[i * n + j + 1] = m
    return MatrixSeq(n, comps)


def flat_vector(n: int) -> FinSeq:
    """e_1 + … + e_n."""
    if n < 1:
        raise ValueError("witness needs n >= 1")
    return FinSeq({k: 1.0 for k in range(1, n + 1)})


_WITNESS_BUILDERS = {
    "XN": first_row_matrix,
    "XN_TRANSPOSE": lambda n: first_row_matrix(n).transpose(),
    "YN": full_basis_matrix,
    "AN": sign_matrix,
    "UN": flat_vector,
}

_WITNESS_ALIASES = {
    "xn": "XN",
    "xnt": "XN_TRANSPOSE",
    "xn_transpose": "XN_TRANSPOSE",
    "yn": "YN",
    "an": "AN",
    "un": "UN",
}


def witness(kind: str, n: int):
    """Build a named witness object (matrix-of-sequences, sign matrix or vector)."""
    key = _WITNESS_ALIASES.get(str(kind).lower(), str(kind).upper())
    try:
        builder = _WITNESS_BUILDERS[key]
    except KeyError:
        raise ValueError(f"unknown witness kind {kind!r}") from None
    return builder(int(n))


# -- JSON wire format ----------------------------------------------------


def matrixseq_to_dict(x: MatrixSeq) -> dict:
    return {
        "n": x.n,
        "components": [
            {
                "k": k,
                "re": [[float(v.real) for v in row] for row in x.components[k]],
                "im": [[float(v.imag) for v in row] for row in x.components[k]],
            }
            for k in x.support
        ],
    }


def matrixseq_from_dict(data: Mapping) -> MatrixSeq:
    try:
        n = int(data["n"])
        comps = {}
        for item in data["components"]:
            re = np.asarray(item["re"], dtype=float)
            im = np.asarray(item["im"], dtype=float)
            comps[int(item["k"])] = re + 1j * im
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed matrix-sequence payload: {exc}") from exc
    return MatrixSeq(n, comps)


def matrixseq_to_json(x: MatrixSeq) -> str:
    return json.dumps(matrixseq_to_dict(x))


def matrixseq_from_json(text: str) -> MatrixSeq:
    return matrixseq_from_dict(json.loads(text))


def finseq_to_dict(v: FinSeq) -> dict:
    return {
        "coords": [
            {"k": k, "re": float(c.real), "im": float(c.imag)}
            for k, c in sorted(v.coords.items())
        ]
    }


def finseq_from_dict(data: Mapping) -> FinSeq:
    try:
        return FinSeq({int(item["k"]): float(item["re"]) + 1j * float(item["im"]) for item in data["coords"]})
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed sequence payload: {exc}") from exc
