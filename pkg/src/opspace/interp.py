"""Complex-interpolation machinery on the unit strip.

The strip {0 ≤ Re z ≤ 1} maps conformally onto the unit disk by a map φ
vanishing at the interpolation point θ.  Analytic candidates on the strip
(exponential polynomials with optional φ-factors and Gaussian boundary
damping) give upper bounds for interpolation norms, and constrained
two-block candidates bound the derived-space (twisted-sum) quasinorm
‖(x, y)‖ = inf{‖f‖ : f(θ) = x, f'(θ) = y}.

This module is evaluator-agnostic: any function mapping (structure,
matrix-sequence) to a certified norm upper bound can be plugged into the
boundary suprema.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .linalg import as_matrix, operator_norm
from .seqspace import MatrixSeq

Evaluator = Callable[[object, MatrixSeq], float]


def golden_min(f: Callable[[float], float], a: float, b: float, iters: int = 60) -> tuple[float, float]:
    """Golden-section minimization on [a, b]; returns (argmin, min)."""
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    c = b - inv_phi * (b - a)
    d = a + inv_phi * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = f(d)
    if fc <= fd:
        return c, fc
    return d, fd


# --------------------------------------------------------------------------
# Conformal geometry
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class StripGeometry:
    """Conformal equivalence of the strip onto the disk with φ(θ) = 0.

    φ(z) = (e^{iπz} − e^{iπθ}) / (e^{iπz} − e^{−iπθ}); the exponential sends
    the strip to the upper half-plane and the Möbius factor to the disk.
    """

    theta: float

    def __post_init__(self):
        if not (0.0 < self.theta < 1.0):
            raise ValueError(f"theta must lie in (0, 1), got {self.theta}")

    def phi(self, z):
        w = np.exp(1j * math.pi * np.asarray(z, dtype=np.complex128))
        w0 = cmath.exp(1j * math.pi * self.theta)
        out = (w - w0) / (w - w0.conjugate())
        return complex(out) if np.isscalar(z) or np.ndim(z) == 0 else out

    def phi_prime(self, z):
        w = np.exp(1j * math.pi * np.asarray(z, dtype=np.complex128))
        w0 = cmath.exp(1j * math.pi * self.theta)
        out = 1j * math.pi * w * (w0 - w0.conjugate()) / (w - w0.conjugate()) ** 2
        return complex(out) if np.isscalar(z) or np.ndim(z) == 0 else out

    @property
    def beta(self) -> float:
        return 1.0 / abs(self.phi_prime(self.theta))


def beta_of(theta: float) -> float:
    """1/|φ'(θ)| for the canonical strip-to-disk map."""
    return StripGeometry(theta).beta


# --------------------------------------------------------------------------
# Candidate families
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ExpTerm:
    mu: complex
    v: MatrixSeq
    power: int = 0  # multiplicity of the φ(z) factor

    def __post_init__(self):
        if self.power < 0:
            raise ValueError("φ-power must be nonnegative")


@dataclass(frozen=True)
class ExpCandidate:
    """Σ_k e^{μ_k(z−θ)} φ(z)^{p_k} g_δ(z) v_k with Gaussian boundary damping.

    The damping factor g_δ(z) = exp(−δ(z−θ)²) has boundary modulus
    e^{δt²}·e^{−δ(j−θ)²} on the line Re z = j, so δ ≤ 0 suppresses the tails;
    g_δ(θ) = 1 and g_δ'(θ) = 0, so values and derivatives at θ are untouched.
    """

    terms: tuple[ExpTerm, ...]
    damping: float = 0.0

    def __post_init__(self):
        if self.damping > 0:
            raise ValueError("damping must be <= 0")
        sides = {t.v.n for t in self.terms}
        if len(sides) > 1:
            raise ValueError("all candidate terms must share one matrix side")

    @property
    def side(self) -> int | None:
        return self.terms[0].v.n if self.terms else None

    def is_bounded(self) -> bool:
        return self.damping < 0 or all(t.mu.imag == 0 for t in self.terms)

    def value_at(self, z: complex, geometry: StripGeometry) -> MatrixSeq:
        if not self.terms:
            raise ValueError("empty candidate has no value")
        theta = geometry.theta
        damp = cmath.exp(-self.damping * (z - theta) ** 2)
        out = MatrixSeq(self.side, {})
        for t in self.terms:
            coef = cmath.exp(t.mu * (z - theta)) * geometry.phi(z) ** t.power * damp
            out = out.add(t.v.scale(coef))
        return out

    def value_at_theta(self) -> MatrixSeq:
        if not self.terms:
            raise ValueError("empty candidate has no value")
        out = MatrixSeq(self.side, {})
        for t in self.terms:
            if t.power == 0:
                out = out.add(t.v)
        return out

    def derivative_at_theta(self, geometry: StripGeometry) -> MatrixSeq:
        if not self.terms:
            raise ValueError("empty candidate has no value")
        dphi = geometry.phi_prime(geometry.theta)
        out = MatrixSeq(self.side, {})
        for t in self.terms:
            if t.power == 0:
                out = out.add(t.v.scale(t.mu))
            elif t.power == 1:
                out = out.add(t.v.scale(dphi))
        return out

    def describe(self) -> list[dict]:
        return [
            {"mu": [t.mu.real, t.mu.imag], "power": t.power, "side": t.v.n, "support": list(t.v.support)}
            for t in self.terms
        ]


@dataclass(frozen=True)
class GridConfig:
    """Symmetric boundary grid, geometrically clustered at t = 0."""

    points_per_side: int = 4096
    t_min: float = 1e-6
    t_max: float | None = None  # None: derived from the damping cutoff

    def resolve_t_max(self, damping: float) -> float:
        if self.t_max is not None:
            return min(self.t_max, 200.0)  # keep e^{±πt} inside float range
        if damping < 0:
            return min(math.sqrt(math.log(1e-12) / damping), 200.0)
        return 24.0

    def points(self, damping: float) -> np.ndarray:
        t_hi = self.resolve_t_max(damping)
        half = max(2, self.points_per_side // 2)
        ratio = (self.t_min / t_hi) ** (1.0 / (half - 1))
        pos = t_hi * ratio ** np.arange(half)
        return np.unique(np.concatenate([-pos, [0.0], pos]))


DEFAULT_GRID = GridConfig()


def boundary_norm(
    c: ExpCandidate,
    geometry: StripGeometry,
    s0,
    s1,
    grid: GridConfig | None = None,
    evaluator: Evaluator | None = None,
) -> float:
    """Upper bound for max_j sup_t ‖c(j+it)‖_{S_j} over the boundary grid.

    Each term contributes |coefficient(j+it)|·U_j(v) with U_j the injected
    norm upper bound, which bounds the true boundary norm by the triangle
    inequality; for one-term candidates with real exponent the grid value
    is the exact supremum (the modulus is constant in t).
    """
    if evaluator is None:
        raise ValueError("boundary_norm needs a norm-upper-bound evaluator")
    grid = grid or DEFAULT_GRID
    if not c.terms:
        return 0.0
    if not c.is_bounded():
        raise ValueError("unbounded candidate: complex exponents require damping < 0")
    return max(
        _side_value(c, geometry, 0, s0, grid, evaluator),
        _side_value(c, geometry, 1, s1, grid, evaluator),
    )


def _side_value(c: ExpCandidate, geometry: StripGeometry, j: int, s, grid: GridConfig, evaluator: Evaluator) -> float:
    theta = geometry.theta
    t = grid.points(c.damping)
    # |exp(-δ(z-θ)²)| on Re z = j: e^{δt²}·e^{-δ(j-θ)²}
    damp = np.exp(c.damping * t**2 - c.damping * (j - theta) ** 2)
    env = np.zeros_like(t)
    for term in c.terms:
        u = evaluator(s, term.v)
        coef = np.exp(term.mu.real * (j - theta) - term.mu.imag * t)
        if term.power:
            phi_abs = np.abs(geometry.phi(j + 1j * t)) ** term.power
        else:
            phi_abs = 1.0
        env = env + u * coef * phi_abs * damp
    return float(env.max())


def boundary_report(
    c: ExpCandidate,
    geometry: StripGeometry,
    s0,
    s1,
    grid: GridConfig | None = None,
    evaluator: Evaluator | None = None,
) -> dict:
    """JSON-able record of a boundary-norm evaluation: candidate description,
    per-side suprema, the achieved bound and the grid parameters."""
    grid = grid or DEFAULT_GRID
    if c.terms and not c.is_bounded():
        raise ValueError("unbounded candidate: complex exponents require damping < 0")
    if c.terms:
        sides = {
            "0": _side_value(c, geometry, 0, s0, grid, evaluator),
            "1": _side_value(c, geometry, 1, s1, grid, evaluator),
        }
    else:
        sides = {"0": 0.0, "1": 0.0}
    value = max(sides.values())
    return {
        "candidate": c.describe(),
        "damping": c.damping,
        "theta": geometry.theta,
        "side_values": sides,
        "bound": value,
        "grid": {
            "points_per_side": grid.points_per_side,
            "t_min": grid.t_min,
            "t_max": grid.resolve_t_max(c.damping),
        },
    }


def single_exp_candidate(x: MatrixSeq, n0: float, n1: float, theta: float) -> ExpCandidate:
    """e^{(z−θ)log(n0/n1)}·x: boundary values n0 on side 0 and n1 on side 1
    (relative to bounds ‖x‖_{S0} ≤ n0, ‖x‖_{S1} ≤ n1), value x at θ."""
    if n0 <= 0 or n1 <= 0:
        raise ValueError("endpoint norms must be positive")
    if not (0.0 < theta < 1.0):
        raise ValueError(f"theta must lie in (0, 1), got {theta}")
    return ExpCandidate((ExpTerm(math.log(n0 / n1), x, 0),))


# --------------------------------------------------------------------------
# Derived space (twisted sum) bounds
# --------------------------------------------------------------------------


def derived_sandwich(norm_x: float, y_minus_y0_norm: float, geometry: StripGeometry) -> tuple[float, float]:
    """Two-sided bound for ‖(x, y)‖ when an extremal candidate for x exists
    with derivative y₀ at θ: (1/4)(‖x‖ + β‖y−y₀‖) ≤ ‖(x,y)‖ ≤ ‖x‖ + β‖y−y₀‖."""
    if norm_x < 0 or y_minus_y0_norm < 0:
        raise ValueError("norms must be nonnegative")
    if norm_x == 0:
        raise ValueError("the sandwich requires x != 0")
    hi = norm_x + geometry.beta * y_minus_y0_norm
    return 0.25 * hi, hi


def derived_upper(
    x: MatrixSeq,
    y: MatrixSeq,
    geometry: StripGeometry,
    s0,
    s1,
    budget=None,
    evaluator: Evaluator | None = None,
    grid: GridConfig | None = None,
) -> float:
    """Upper bound for the derived-space quasinorm inf{‖f‖ : f(θ)=x, f'(θ)=y}.

    Candidates have the form f = g + φ·h with g = e^{μ(z−θ)}x and h the
    exponential candidate pinned to h(θ) = (y − g'(θ))/φ'(θ); both real
    exponents are searched by golden section.
    """
    if evaluator is None:
        raise ValueError("derived_upper needs a norm-upper-bound evaluator")
    if x.n != y.n:
        raise ValueError("x and y must share one matrix side")
    theta = geometry.theta
    dphi = geometry.phi_prime(theta)
    ux = (evaluator(s0, x), evaluator(s1, x))
    cache: dict[float, tuple[float, float]] = {}

    def h_norms(mu: float) -> tuple[float, float]:
        if mu not in cache:
            w = y.sub(x.scale(mu)).scale(1.0 / dphi)
            cache[mu] = (evaluator(s0, w), evaluator(s1, w))
        return cache[mu]

    def value(mu: float, nu: float) -> float:
        uw = h_norms(mu)
        side0 = math.exp(-theta * mu) * ux[0] + math.exp(-theta * nu) * uw[0]
        side1 = math.exp((1 - theta) * mu) * ux[1] + math.exp((1 - theta) * nu) * uw[1]
        return max(side0, side1)

    def best_nu(mu: float) -> tuple[float, float]:
        uw = h_norms(mu)
        if uw[0] == 0 and uw[1] == 0:
            side0 = math.exp(-theta * mu) * ux[0]
            side1 = math.exp((1 - theta) * mu) * ux[1]
            return 0.0, max(side0, side1)
        if uw[0] == 0 or uw[1] == 0:
            # one boundary side free: push the exponent toward it
            span = math.log(1e4)
            nu, val = golden_min(lambda s: value(mu, s), -span, span, iters=60)
            return nu, val
        seed = math.log(uw[0] / uw[1])
        nu, val = golden_min(lambda s: value(mu, s), seed - 6, seed + 6, iters=60)
        seeded = value(mu, seed)
        return (seed, seeded) if seeded < val else (nu, val)

    if x.is_zero or (ux[0] == 0 and ux[1] == 0):
        return best_nu(0.0)[1]

    span = math.log(1e4)
    mu_seed = math.log(ux[0] / ux[1]) if ux[0] > 0 and ux[1] > 0 else 0.0
    mu_star, val_star = golden_min(lambda m: best_nu(m)[1], max(-span, mu_seed - 6), min(span, mu_seed + 6), iters=40)
    val_seed = best_nu(mu_seed)[1]
    return min(val_star, val_seed)


# --------------------------------------------------------------------------
# Checkers
# --------------------------------------------------------------------------


@dataclass
class CheckReport:
    name: str
    checks: int = 0
    violations: list[str] = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "checks": self.checks,
            "violations": list(self.violations),
            "details": dict(self.details),
        }


@dataclass(frozen=True)
class DiskGrid:
    radii: int = 20
    angles: int = 32
    r_max: float = 0.95

    def points(self) -> np.ndarray:
        r = np.linspace(0.0, self.r_max, self.radii)
        a = np.linspace(0.0, 2 * math.pi, self.angles, endpoint=False)
        return (r[:, None] * np.exp(1j * a)[None, :]).ravel()


def poly_eval(coeffs: list[np.ndarray], z: complex) -> np.ndarray:
    acc = np.zeros_like(as_matrix(coeffs[0]))
    for c in reversed(coeffs):
        acc = acc * z + as_matrix(c)
    return acc


def poly_eval_batch(coeffs: list[np.ndarray], zs: np.ndarray) -> np.ndarray:
    """Evaluate a matrix polynomial at every point of a 1-D array at once."""
    stack = np.stack([as_matrix(c) for c in coeffs])  # (deg+1, n, n)
    powers = np.vander(np.asarray(zs, dtype=np.complex128), N=stack.shape[0], increasing=True)
    return np.einsum("zd,dij->zij", powers, stack)


def _batch_norms(mats: np.ndarray) -> np.ndarray:
    return np.linalg.svd(mats, compute_uv=False)[..., 0]


def poly_derivative(coeffs: list[np.ndarray]) -> list[np.ndarray]:
    return [d * as_matrix(c) for d, c in enumerate(coeffs) if d >= 1]


def schwarz_pick_check(
    coeffs: list[np.ndarray],
    grid: DiskGrid | None = None,
    tolerance: float = 1e-9,
) -> CheckReport:
    """For a matrix polynomial with sup-norm ≤ 1 on the disk, check the
    derivative bound ‖F'(z)‖ ≤ 1/(1−|z|²) on a grid of interior points."""
    grid = grid or DiskGrid()
    report = CheckReport(name="schwarz_pick", details={"radii": grid.radii, "angles": grid.angles, "r_max": grid.r_max})
    pts = grid.points()
    sup = float(_batch_norms(poly_eval_batch(coeffs, pts)).max())
    if sup > 1.0 + 1e-9:
        raise ValueError(f"polynomial not scaled into the unit ball: grid sup {sup}")
    deriv = poly_derivative(coeffs)
    bounds = 1.0 / (1.0 - np.abs(pts) ** 2)
    vals = _batch_norms(poly_eval_batch(deriv, pts)) if deriv else np.zeros(len(pts))
    report.checks = len(pts)
    for z, val, bound in zip(pts, vals, bounds):
        if val > bound + tolerance:
            report.violations.append(f"z={z}: ‖F'‖={val} > {bound}")
    return report


def scale_into_unit_ball(coeffs: list[np.ndarray], boundary_points: int = 4096, margin: float = 1e-3) -> list[np.ndarray]:
    """Scale a matrix polynomial so its sup over the closed disk is ≤ 1.

    The sup over the disk equals the sup on the circle; a dense circle grid
    plus a small margin covers the residual interpolation error for the low
    degrees used here.
    """
    angles = np.exp(2j * math.pi * np.arange(boundary_points) / boundary_points)
    sup = float(_batch_norms(poly_eval_batch(coeffs, angles)).max())
    scale = 1.0 / (sup * (1.0 + margin)) if sup > 0 else 1.0
    return [scale * as_matrix(c) for c in coeffs]


def ker_derivative_check(
    c: ExpCandidate,
    geometry: StripGeometry,
    s0,
    s1,
    evaluator: Evaluator,
    interp_upper: Callable[[MatrixSeq], float],
    tolerance: float = 1e-9,
    grid: GridConfig | None = None,
) -> CheckReport:
    """For candidates vanishing at θ, check that the derivative evaluation is
    bounded: (interp upper of c'(θ)) ≤ |φ'(θ)|·‖c‖ + tolerance."""
    report = CheckReport(name="ker_derivative")
    value = c.value_at_theta()
    if value.max_entry_lp(2) > 1e-10:
        raise ValueError("candidate does not vanish at theta")
    w = c.derivative_at_theta(geometry)
    lhs = interp_upper(w)
    bn = boundary_norm(c, geometry, s0, s1, grid, evaluator)
    rhs = abs(geometry.phi_prime(geometry.theta)) * bn
    report.checks = 1
    report.details = {"derivative_upper": lhs, "boundary_norm": bn, "bound": rhs}
    if lhs > rhs + tolerance * max(1.0, rhs):
        report.violations.append(f"derivative bound violated: {lhs} > {rhs}")
    return report
