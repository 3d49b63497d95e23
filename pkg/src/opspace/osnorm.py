"""Matrix-level norms for operator-space structures on sequence spaces.

Exact evaluators exist for the row, column and self-dual Hilbertian (OH)
structures.  The minimal and maximal quantizations of ℓ_p and structures
obtained by complex interpolation are NP-hard to evaluate exactly, so
those evaluators return a certified interval: every reported lower bound
comes from an explicit feasible point (a pair of unit vectors, a unit
functional, or a duality pairing against a concrete test element), and
every upper bound from an explicit relaxation or factorization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np

from . import interp as _interp
from .linalg import direct_sum as _mat_direct_sum
from .linalg import kron, operator_norm, scalar_lp
from .seqspace import (
    FinSeq,
    MatrixSeq,
    basis,
    first_row_matrix,
    flat_vector,
    full_basis_matrix,
    sign_matrix,
)

# --------------------------------------------------------------------------
# Structure tags
# --------------------------------------------------------------------------


def conjugate_index(p: float) -> float:
    """Hölder conjugate: 1/p + 1/q = 1, with 1 ↔ ∞."""
    _check_p(p)
    if p == 1:
        return math.inf
    if math.isinf(p):
        return 1.0
    return p / (p - 1.0)


def _check_p(p: float) -> None:
    if not (p >= 1):
        raise ValueError(f"structure index must satisfy p >= 1 (or inf), got {p}")


@dataclass(frozen=True)
class Min:
    p: float

    def __post_init__(self):
        _check_p(self.p)


@dataclass(frozen=True)
class Max:
    p: float

    def __post_init__(self):
        _check_p(self.p)


@dataclass(frozen=True)
class Row:
    pass


@dataclass(frozen=True)
class Col:
    pass


@dataclass(frozen=True)
class Oh:
    pass


ROW = Row()
COL = Col()
OH = Oh()


@dataclass(frozen=True)
class Interp:
    s0: "Structure"
    s1: "Structure"
    theta: float

    def __post_init__(self):
        if not (0.0 < self.theta < 1.0):
            raise ValueError(f"interpolation parameter must lie in (0, 1), got {self.theta}")


Structure = Union[Min, Max, Row, Col, Oh, Interp]


def dual(s: Structure) -> Structure:
    """Dual structure; an involution."""
    if isinstance(s, Min):
        return Max(conjugate_index(s.p))
    if isinstance(s, Max):
        return Min(conjugate_index(s.p))
    if isinstance(s, Row):
        return COL
    if isinstance(s, Col):
        return ROW
    if isinstance(s, Oh):
        return OH
    if isinstance(s, Interp):
        return Interp(dual(s.s0), dual(s.s1), s.theta)
    raise TypeError(f"not a structure: {s!r}")


def base_index(s: Structure) -> float:
    """Exponent of the underlying sequence-space norm (ℓ_p scale)."""
    if isinstance(s, (Min, Max)):
        return s.p
    if isinstance(s, (Row, Col, Oh)):
        return 2.0
    if isinstance(s, Interp):
        r0, r1 = base_index(s.s0), base_index(s.s1)
        inv = (1.0 - s.theta) / r0 + s.theta / r1
        return math.inf if inv == 0 else 1.0 / inv
    raise TypeError(f"not a structure: {s!r}")


def _parse_p(text: str) -> float:
    text = text.strip()
    if text in ("inf", "infinity", "oo"):
        return math.inf
    if "/" in text:
        num, den = text.split("/", 1)
        return float(num) / float(den)
    return float(text)


def parse_structure(text: str) -> Structure:
    """Parse a structure spec: ``min:p=2``, ``row``, ``interp:(min:p=2,max:p=2,theta=0.5)``."""
    text = text.strip()
    low = text.lower()
    if low == "row":
        return ROW
    if low == "col":
        return COL
    if low == "oh":
        return OH
    if low.startswith("min:") or low.startswith("max:"):
        head, _, arg = text.partition(":")
        arg = arg.strip()
        if not arg.startswith("p="):
            raise ValueError(f"expected p=<value> in structure spec {text!r}")
        p = _parse_p(arg[2:])
        return Min(p) if head.lower() == "min" else Max(p)
    if low.startswith("interp:"):
        body = text[len("interp:") :].strip()
        if not (body.startswith("(") and body.endswith(")")):
            raise ValueError(f"expected interp:(S0,S1,theta=t) in {text!r}")
        parts, depth, cur = [], 0, []
        for ch in body[1:-1]:
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
            if ch == "," and depth == 0:
                parts.append("".join(cur))
                cur = []
            else:
                cur.append(ch)
        parts.append("".join(cur))
        if len(parts) != 3 or not parts[2].strip().lower().startswith("theta="):
            raise ValueError(f"expected interp:(S0,S1,theta=t) in {text!r}")
        theta = float(parts[2].strip()[len("theta=") :])
        return Interp(parse_structure(parts[0]), parse_structure(parts[1]), theta)
    raise ValueError(f"unknown structure spec {text!r}")


def _fmt_index(p: float) -> str:
    if math.isinf(p):
        return "inf"
    return repr(float(p))  # shortest round-trip decimal


def format_structure(s: Structure) -> str:
    if isinstance(s, Min):
        return f"min:p={_fmt_index(s.p)}"
    if isinstance(s, Max):
        return f"max:p={_fmt_index(s.p)}"
    if isinstance(s, Row):
        return "row"
    if isinstance(s, Col):
        return "col"
    if isinstance(s, Oh):
        return "oh"
    if isinstance(s, Interp):
        return f"interp:({format_structure(s.s0)},{format_structure(s.s1)},theta={_fmt_index(s.theta)})"
    raise TypeError(f"not a structure: {s!r}")


# --------------------------------------------------------------------------
# Certified intervals and optimizer budgets
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class NormEstimate:
    lower: float
    upper: float
    lower_method: str = ""
    upper_method: str = ""

    def __post_init__(self):
        if self.lower < 0 or self.upper < 0:
            raise ValueError("norm bounds must be nonnegative")
        if self.lower > self.upper + 1e-9 * max(1.0, self.upper):
            raise ValueError(f"inconsistent interval [{self.lower}, {self.upper}]")

    @property
    def gap(self) -> float:
        return self.upper - self.lower

    def to_dict(self) -> dict:
        return {
            "lower": self.lower,
            "upper": self.upper,
            "lower_method": self.lower_method,
            "upper_method": self.upper_method,
        }


@dataclass(frozen=True)
class OptBudget:
    """Search budget for the nonconvex lower-bound optimizers."""

    starts: int = 32
    max_iter: int = 400
    tol: float = 1e-10
    seed: int = 0

    @staticmethod
    def from_dict(data: dict) -> "OptBudget":
        known = {k: data[k] for k in ("starts", "max_iter", "tol", "seed") if k in data}
        unknown = set(data) - {"starts", "max_iter", "tol", "seed"}
        if unknown:
            raise ValueError(f"unknown budget keys: {sorted(unknown)}")
        return OptBudget(**known)


DEFAULT_BUDGET = OptBudget()


# --------------------------------------------------------------------------
# Exact evaluators (row / column / OH)
# --------------------------------------------------------------------------


def eval_exact(s: Structure, x: MatrixSeq) -> float:
    """Exact matrix norm for the row, column or OH structure."""
    if x.is_zero:
        if isinstance(s, (Row, Col, Oh)):
            return 0.0
    _, stack = x.component_stack()
    if isinstance(s, Row):
        g = np.einsum("kij,klj->il", stack, stack.conj())
        return float(np.sqrt(operator_norm(g)))
    if isinstance(s, Col):
        g = np.einsum("kji,kjl->il", stack.conj(), stack)
        return float(np.sqrt(operator_norm(g)))
    if isinstance(s, Oh):
        acc = np.zeros((x.n * x.n, x.n * x.n), dtype=np.complex128)
        for comp in stack:
            acc += np.kron(comp, comp.conj())
        return float(np.sqrt(operator_norm(acc)))
    raise ValueError(f"eval_exact supports row/col/oh, got {format_structure(s)}")


# --------------------------------------------------------------------------
# Amplified duality pairing
# --------------------------------------------------------------------------


def pairing_amplified(x: MatrixSeq, z: MatrixSeq) -> np.ndarray:
    """Bilinear pairing Σ_s X_s ⊗ Z_s, an nm×nm scalar matrix.

    Entry ((i,k),(j,l)) = Σ_s x[i,j][s]·z[k,l][s]; no conjugation.
    """
    out = np.zeros((x.n * z.n, x.n * z.n), dtype=np.complex128)
    shared = set(x.support) & set(z.support)
    for s in shared:
        out += np.kron(np.asarray(x.components[s]), np.asarray(z.components[s]))
    return out


# --------------------------------------------------------------------------
# Closed-form upper bounds for min(ℓ_p)
# --------------------------------------------------------------------------


def _component_op_norms(x: MatrixSeq) -> list[float]:
    return [operator_norm(x.components[k]) for k in x.support]


def _gram_sigma(x: MatrixSeq) -> float:
    """Largest singular value of the n²×d matrix of vectorized components."""
    keys, stack = x.component_stack()
    if not keys:
        return 0.0
    w = stack.reshape(len(keys), -1).T
    return operator_norm(w)


def min_upper(x: MatrixSeq, p: float) -> tuple[float, str]:
    """Certified upper bound for the min(ℓ_p) matrix norm.

    Two valid relaxations are combined: the ℓ_p norm of the component
    operator norms (‖Σ f_k X_k‖ ≤ ‖f‖_q·‖(‖X_k‖)‖_p), and a spectral
    relaxation — the coefficient vector (λᵀX_kμ)_k has ℓ_2 norm at most
    σ_max of the stacked components, and d^{1/p−1/2} converts ℓ_2 to ℓ_p
    on a support of size d.
    """
    _check_p(p)
    if x.is_zero:
        return 0.0, "zero"
    lp = scalar_lp(_component_op_norms(x), p)
    d = x.support_dim
    factor = d ** (1.0 / p - 0.5) if (not math.isinf(p) and p < 2) else 1.0
    spectral = factor * _gram_sigma(x)
    if spectral <= lp:
        return spectral, "spectral_relaxation"
    return lp, "lp_of_component_norms"


# --------------------------------------------------------------------------
# min(ℓ_p) lower-bound searches
# --------------------------------------------------------------------------


def _unit(v: np.ndarray) -> np.ndarray:
    n = np.linalg.norm(v)
    return v / n if n > 0 else v


def _random_unit(rng: np.random.Generator, n: int) -> np.ndarray:
    return _unit(rng.standard_normal(n) + 1j * rng.standard_normal(n))


def _lp_dual_shape(c: np.ndarray, p: float) -> np.ndarray:
    """Unit-ℓ_q vector s with Re⟨s, c⟩ = ‖c‖_p (q the conjugate of p)."""
    a = np.abs(c)
    total = scalar_lp(c, p)
    s = np.zeros_like(c)
    if total == 0 or not np.isfinite(total):
        s[0] = 1.0
        return s
    # Coordinates far below the norm scale contribute nothing; dropping them
    # keeps the dual vector inside the unit ball and avoids denormal overflow.
    mask = a > total * 1e-18
    phase = np.zeros_like(c)
    phase[mask] = np.conj(c[mask]) / a[mask]
    if math.isinf(p):
        k = int(np.argmax(a))
        s[k] = phase[k]
        return s
    if p == 1:
        return phase
    return phase * (a / total) ** (p - 1.0)


def _search_bilinear(x: MatrixSeq, p: float, budget: OptBudget, seed_seq) -> float:
    """sup over unit λ, μ of ‖(λᵀ X_k μ)_k‖_p by block ascent on the spheres."""
    keys, stack = x.component_stack()
    if not keys:
        return 0.0
    n = x.n
    best = 0.0
    for child in seed_seq.spawn(budget.starts):
        rng = np.random.default_rng(child)
        lam, mu = _random_unit(rng, n), _random_unit(rng, n)
        val = 0.0
        for _ in range(budget.max_iter):
            c = np.einsum("i,kij,j->k", lam, stack, mu)
            s = _lp_dual_shape(c, p)
            v = np.einsum("k,kij,j->i", s, stack, mu)
            if np.linalg.norm(v) > 0:
                lam = _unit(np.conj(v))
            w = np.einsum("k,kij,i->j", s, stack, lam)
            if np.linalg.norm(w) > 0:
                mu = _unit(np.conj(w))
            new = scalar_lp(np.einsum("i,kij,j->k", lam, stack, mu), p)
            if new - val <= budget.tol * max(1.0, new):
                val = new
                break
            val = new
        best = max(best, val)
    return best


def _search_functional(x: MatrixSeq, p: float, budget: OptBudget, seed_seq) -> float:
    """sup over unit f ∈ ℓ_q of ‖Σ_k f_k X_k‖ by alternating with singular pairs."""
    keys, stack = x.component_stack()
    if not keys:
        return 0.0
    d = len(keys)
    q = conjugate_index(p)
    best = 0.0
    for child in seed_seq.spawn(budget.starts):
        rng = np.random.default_rng(child)
        f = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        nq = scalar_lp(f, q)
        f = f / nq if nq > 0 else f
        val = 0.0
        for _ in range(budget.max_iter):
            m = np.einsum("k,kij->ij", f, stack)
            u_mat, sig, vh = np.linalg.svd(m)
            u, v = u_mat[:, 0], vh[0].conj()
            t = np.einsum("i,kij,j->k", u.conj(), stack, v)
            f = _lp_dual_shape(t, q)  # unit in ℓ_q, aligned with t
            new = operator_norm(np.einsum("k,kij->ij", f, stack))
            if new - val <= budget.tol * max(1.0, new):
                val = new
                break
            val = new
        best = max(best, val)
    return best


def eval_min(p: float, x: MatrixSeq, budget: OptBudget | None = None) -> NormEstimate:
    """Certified interval for the min(ℓ_p) matrix norm."""
    _check_p(p)
    budget = budget or DEFAULT_BUDGET
    up, up_method = min_upper(x, p)
    if x.is_zero:
        return NormEstimate(0.0, 0.0, "zero", "zero")
    root = np.random.SeedSequence(budget.seed)
    lo13 = _search_bilinear(x, p, budget, root.spawn(1)[0])
    lo14 = _search_functional(x, p, budget, root.spawn(2)[1])
    if lo13 >= lo14:
        lo, lo_method = lo13, "bilinear_sphere_ascent"
    else:
        lo, lo_method = lo14, "functional_ball_ascent"
    lo = min(lo, up)  # guard float fuzz at exact instances
    return NormEstimate(lo, up, lo_method, up_method)


# --------------------------------------------------------------------------
# max(ℓ_p): factorization uppers and pairing lowers
# --------------------------------------------------------------------------


def _fact_entry_balanced(x: MatrixSeq, p: float) -> float:
    """x = A·D·B listing the nonzero entries with balanced √-scalings."""
    norms = x.entry_lp_norms(p)
    row = norms.sum(axis=1).max()
    col = norms.sum(axis=0).max()
    return float(np.sqrt(row * col))


def _fact_entry_refined(x: MatrixSeq, p: float) -> float:
    """Entry-listing factorization with row/column rescalings optimized out.

    Rescaling A's rows by 1/a_k and B's columns by 1/b_l moves the weight
    onto the diagonal; only positions that actually hold a nonzero entry
    contribute, so the bound is min over γ of max_{(k,l) nonzero} a_k(γ)·b_l(γ).
    """
    norms = x.entry_lp_norms(p)
    mask = norms > 0
    if not mask.any():
        return 0.0

    def bound(gamma: float) -> float:
        a = np.sqrt((norms ** (2 * gamma) * mask).sum(axis=1))
        b = np.sqrt((norms ** (2 * (1 - gamma)) * mask).sum(axis=0))
        prod = np.outer(a, b)[mask]
        return float(prod.max())

    gammas = np.linspace(0.0, 1.0, 21)
    vals = [bound(g) for g in gammas]
    g0 = float(gammas[int(np.argmin(vals))])
    lo, hi = max(0.0, g0 - 0.05), min(1.0, g0 + 0.05)
    g_ref, v_ref = _interp.golden_min(bound, lo, hi, iters=40)
    return min(min(vals), v_ref)


def _single_row_entries(x: MatrixSeq):
    """If all components live in one row, return (row, columns, entry FinSeqs)."""
    rows = set()
    for m in x.components.values():
        nz = np.nonzero(m)[0]
        rows.update(int(i) for i in nz)
        if len(rows) > 1:
            return None
    if len(rows) != 1:
        return None
    r = rows.pop()
    cols = sorted({int(j) for m in x.components.values() for j in np.nonzero(m[r])[0]})
    return r, cols, [x.entry(r, j) for j in cols]


def _fact_sign_stack(x: MatrixSeq, p: float) -> float | None:
    """The orthogonal ±1-design factorization for single-row (or -column) inputs.

    Writes x = A·D·S with S the 2^{m-1}×m sign design; D's diagonal holds the
    signed sums Σ_l ±v_l, so the bound is max over sign rows of ‖Σ_l ±v_l‖_p.
    """
    info = _single_row_entries(x)
    if info is None:
        info = _single_row_entries(x.transpose())
        if info is None:
            return None
    _, _, entries = info
    m = len(entries)
    if m > 12:
        return None
    signs = sign_matrix(m)
    support = sorted({k for e in entries for k in e.support})
    coords = np.array([[e[k] for k in support] for e in entries])  # m × |support|
    combos = signs @ coords
    if math.isinf(p):
        vals = np.abs(combos).max(axis=1) if combos.size else np.zeros(signs.shape[0])
    else:
        vals = (np.abs(combos) ** p).sum(axis=1) ** (1.0 / p) if combos.size else np.zeros(signs.shape[0])
    return float(vals.max())


def max_upper(x: MatrixSeq, p: float) -> tuple[float, str]:
    """Best factorization upper bound found for the max(ℓ_p) matrix norm."""
    _check_p(p)
    if x.is_zero:
        return 0.0, "zero"
    best, method = _fact_entry_balanced(x, p), "entry_factorization"
    refined = _fact_entry_refined(x, p)
    if refined < best:
        best, method = refined, "entry_factorization_rebalanced"
    stacked = _fact_sign_stack(x, p)
    if stacked is not None and stacked < best:
        best, method = stacked, "sign_design_factorization"
    return best, method


def _pairing_pool(n: int, seed: int, randoms: int = 16) -> list[tuple[str, MatrixSeq]]:
    """Test elements for duality lower bounds: witnesses, units, seeded noise."""
    pool: list[tuple[str, MatrixSeq]] = []
    for m in range(1, n + 1):
        pool.append((f"first_row_{m}", first_row_matrix(m)))
        pool.append((f"first_col_{m}", first_row_matrix(m).transpose()))
        pool.append((f"full_basis_{m}", full_basis_matrix(m)))
    for k in range(1, 4):
        pool.append((f"unit_e{k}", MatrixSeq.from_entries(1, {(0, 0): basis(k)})))
    for m in (2, 3):
        pool.append((f"unit_flat{m}", MatrixSeq.from_entries(1, {(0, 0): flat_vector(m)})))
    root = np.random.SeedSequence(seed)
    for idx, child in enumerate(root.spawn(randoms)):
        rng = np.random.default_rng(child)
        side = int(rng.integers(1, min(n, 3) + 1))
        support = rng.choice(np.arange(1, 7), size=int(rng.integers(1, 5)), replace=False)
        comps = {
            int(k): rng.standard_normal((side, side)) + 1j * rng.standard_normal((side, side))
            for k in support
        }
        pool.append((f"random_{idx}", MatrixSeq(side, comps)))
    return pool


def _pairing_lower(
    x: MatrixSeq,
    dual_upper: Callable[[MatrixSeq], float],
    pool: list[tuple[str, MatrixSeq]],
) -> tuple[float, str]:
    best, label = 0.0, "pairing"
    for name, z in pool:
        den = dual_upper(z)
        if den <= 0:
            continue
        val = operator_norm(pairing_amplified(x, z)) / den
        if val > best:
            best, label = val, f"pairing:{name}"
    return best, label


def eval_max(p: float, x: MatrixSeq, budget: OptBudget | None = None) -> NormEstimate:
    """Certified interval for the max(ℓ_p) matrix norm."""
    _check_p(p)
    budget = budget or DEFAULT_BUDGET
    if x.is_zero:
        return NormEstimate(0.0, 0.0, "zero", "zero")
    up, up_method = max_upper(x, p)
    q = conjugate_index(p)
    pool = [("self", x), ("self_transpose", x.transpose())] + _pairing_pool(x.n, budget.seed)
    lo, lo_method = _pairing_lower(x, lambda z: min_upper(z, q)[0], pool)
    if p <= 2:
        exact2 = max(eval_exact(ROW, x), eval_exact(COL, x), eval_exact(OH, x))
        if exact2 > lo:
            lo, lo_method = exact2, "dominates_level2_structures"
    lo = min(lo, up)
    return NormEstimate(lo, up, lo_method, up_method)


# --------------------------------------------------------------------------
# Interpolated structures
# --------------------------------------------------------------------------


def upper_bound(s: Structure, x: MatrixSeq, budget: OptBudget | None = None) -> float:
    """Certified upper bound of the matrix norm of x in structure s."""
    if isinstance(s, (Row, Col, Oh)):
        return eval_exact(s, x)
    if isinstance(s, Min):
        return min_upper(x, s.p)[0]
    if isinstance(s, Max):
        return max_upper(x, s.p)[0]
    if isinstance(s, Interp):
        # Candidate-family bound only: the duality lower bound is not needed
        # here and would recurse through the dual structure.
        return _interp_candidates(s, x, budget or DEFAULT_BUDGET)[0]
    raise TypeError(f"not a structure: {s!r}")


def _interp_candidates(s: Interp, x: MatrixSeq, budget: OptBudget) -> tuple[float, str]:
    """Boundary-norm upper bounds over exponential candidate families."""
    u0 = upper_bound(s.s0, x, budget)
    u1 = upper_bound(s.s1, x, budget)
    theta = s.theta
    if u0 == 0 or u1 == 0:
        return 0.0, "zero_endpoint"
    best = u0 ** (1 - theta) * u1**theta
    method = "single_exponential"

    def one_term(mu: float) -> float:
        return max(math.exp(-theta * mu) * u0, math.exp((1 - theta) * mu) * u1)

    _, refined = _interp.golden_min(one_term, -math.log(1e4), math.log(1e4), iters=60)
    if refined < best:
        best, method = refined, "single_exponential_search"

    # Two-term family: split the components into halves with separate exponents.
    keys = x.support
    if len(keys) >= 2:
        half = len(keys) // 2
        part_a = MatrixSeq(x.n, {k: x.components[k] for k in keys[:half]})
        part_b = MatrixSeq(x.n, {k: x.components[k] for k in keys[half:]})
        ua = (upper_bound(s.s0, part_a, budget), upper_bound(s.s1, part_a, budget))
        ub = (upper_bound(s.s0, part_b, budget), upper_bound(s.s1, part_b, budget))

        def two_term(mu_a: float, mu_b: float) -> float:
            side0 = math.exp(-theta * mu_a) * ua[0] + math.exp(-theta * mu_b) * ub[0]
            side1 = math.exp((1 - theta) * mu_a) * ua[1] + math.exp((1 - theta) * mu_b) * ub[1]
            return max(side0, side1)

        mu_a = mu_b = math.log(u0 / u1)
        val = two_term(mu_a, mu_b)
        for _ in range(3):
            mu_a, _ = _interp.golden_min(lambda m: two_term(m, mu_b), mu_a - 4, mu_a + 4, iters=40)
            mu_b, val = _interp.golden_min(lambda m: two_term(mu_a, m), mu_b - 4, mu_b + 4, iters=40)
        if val < best:
            best, method = val, "two_exponential_split"
    return best, method


def _nested_minmax_index(s: Interp) -> float | None:
    """Index p when the couple is (min(ℓ_p), max(ℓ_p)) in either order."""
    pair = (s.s0, s.s1)
    for a, b in (pair, pair[::-1]):
        if isinstance(a, Min) and isinstance(b, Max) and a.p == b.p:
            return a.p
    return None


def eval_interp(s: Interp, x: MatrixSeq, budget: OptBudget | None = None) -> NormEstimate:
    """Certified interval for the norm in the interpolated structure."""
    budget = budget or DEFAULT_BUDGET
    if x.is_zero:
        return NormEstimate(0.0, 0.0, "zero", "zero")
    up, up_method = _interp_candidates(s, x, budget)
    dual_s = dual(s)
    pool = [
        ("self", x),
        ("self_transpose", x.transpose()),
        ("self_conj", x.conj()),
    ] + _pairing_pool(x.n, budget.seed)
    lo, lo_method = _pairing_lower(x, lambda z: upper_bound(dual_s, z, budget), pool)
    p_nested = _nested_minmax_index(s)
    if p_nested is not None:
        # min(ℓ_p) ⊆ X_θ ⊆ max(ℓ_p) with contractive identities, so the
        # minimal-structure norm bounds the interpolated norm from below.
        floor = eval_min(p_nested, x, budget).lower
        if floor > lo:
            lo, lo_method = floor, "dominates_minimal_structure"
    lo = min(lo, up)
    return NormEstimate(lo, up, lo_method, up_method)


def evaluate(s: Structure, x: MatrixSeq, budget: OptBudget | None = None) -> NormEstimate:
    """Dispatch to the exact or interval evaluator for the given structure."""
    if isinstance(s, (Row, Col, Oh)):
        v = eval_exact(s, x)
        return NormEstimate(v, v, "exact", "exact")
    if isinstance(s, Min):
        return eval_min(s.p, x, budget)
    if isinstance(s, Max):
        return eval_max(s.p, x, budget)
    if isinstance(s, Interp):
        return eval_interp(s, x, budget)
    raise TypeError(f"not a structure: {s!r}")


# --------------------------------------------------------------------------
# Axiom checker
# --------------------------------------------------------------------------


@dataclass
class RuanReport:
    structure: str
    samples: int
    seed: int
    violations: list[str] = field(default_factory=list)
    checks: int = 0

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "structure": self.structure,
            "samples": self.samples,
            "seed": self.seed,
            "checks": self.checks,
            "violations": list(self.violations),
        }


_RUAN_BUDGET = OptBudget(starts=6, max_iter=120, tol=1e-9, seed=0)


def _random_matrixseq(rng: np.random.Generator, max_side: int = 4, max_key: int = 6) -> MatrixSeq:
    side = int(rng.integers(1, max_side + 1))
    count = int(rng.integers(1, 4))
    keys = rng.choice(np.arange(1, max_key + 1), size=count, replace=False)
    comps = {
        int(k): rng.standard_normal((side, side)) + 1j * rng.standard_normal((side, side))
        for k in keys
    }
    return MatrixSeq(side, comps)


def _sandwich_violation(s: Structure, x: MatrixSeq, lower: float, upper: float, tol: float = 1e-9) -> str | None:
    r = base_index(s)
    mx = x.max_entry_lp(r)
    sm = x.sum_entry_lp(r)
    if upper < mx - tol * max(1.0, mx):
        return f"upper {upper} below max entry norm {mx}"
    if lower > sm + tol * max(1.0, sm):
        return f"lower {lower} above entry-norm sum {sm}"
    return None


def check_ruan(s: Structure, samples: int, seed: int = 0, budget: OptBudget | None = None) -> RuanReport:
    """Randomized check of the direct-sum and compression axioms plus the
    entrywise sandwich, in equality form for exact structures and interval
    containment form for min/max."""
    exact = isinstance(s, (Row, Col, Oh))
    budget = budget or _RUAN_BUDGET
    report = RuanReport(structure=format_structure(s), samples=samples, seed=seed)
    tol = 1e-9

    def bounds(y: MatrixSeq) -> tuple[float, float]:
        if exact:
            v = eval_exact(s, y)
            est = (v, v)
        else:
            e = evaluate(s, y, budget)
            est = (e.lower, e.upper)
        report.checks += 1
        bad = _sandwich_violation(s, y, est[0], est[1], tol)
        if bad:
            report.violations.append(f"sandwich: {bad}")
        return est

    root = np.random.SeedSequence(seed)
    for idx, child in enumerate(root.spawn(samples)):
        rng = np.random.default_rng(child)
        v = _random_matrixseq(rng)
        w = _random_matrixseq(rng)
        lv, uv = bounds(v)
        lw, uw = bounds(w)

        ls, us = bounds(v.direct_sum(w))
        if exact:
            want = max(uv, uw)
            if abs(us - want) > tol * max(1.0, want):
                report.violations.append(f"sample {idx}: O1 equality {us} vs {want}")
        else:
            if ls > max(uv, uw) + tol * max(1.0, max(uv, uw)):
                report.violations.append(f"sample {idx}: O1 lower {ls} above max upper {max(uv, uw)}")
            if us < max(lv, lw) - tol * max(1.0, max(lv, lw)):
                report.violations.append(f"sample {idx}: O1 upper {us} below max lower {max(lv, lw)}")

        side = int(rng.integers(1, 5))
        alpha = rng.standard_normal((side, v.n)) + 1j * rng.standard_normal((side, v.n))
        beta = rng.standard_normal((v.n, side)) + 1j * rng.standard_normal((v.n, side))
        compressed = v.compress(alpha, beta)
        cap = operator_norm(alpha) * uv * operator_norm(beta)
        lc, _ = bounds(compressed)
        if lc > cap + tol * max(1.0, cap):
            report.violations.append(f"sample {idx}: O2 lower {lc} above cap {cap}")

        c = complex(rng.standard_normal(), rng.standard_normal())
        lsc, usc = bounds(v.scale(c))
        if exact:
            if abs(usc - abs(c) * uv) > tol * max(1.0, abs(c) * uv):
                report.violations.append(f"sample {idx}: homogeneity {usc} vs {abs(c) * uv}")
        else:
            if lsc > abs(c) * uv + tol * max(1.0, abs(c) * uv) or usc < abs(c) * lv - tol * max(1.0, abs(c) * lv):
                report.violations.append(f"sample {idx}: homogeneity interval mismatch")
    return report
