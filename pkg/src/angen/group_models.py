"""Finite-dimensional one-parameter isometry groups with exact complex time.

Two model kinds are provided.  A Diagonal model is given by real exponents
h_1..h_n and acts as (U_z x)_k = exp(i*z*h_k) * x_k.  A Hermitian model is
given by a Hermitian matrix H and acts as U_z = exp(i*z*H), evaluated
through the eigendecomposition of H (numerically the most accurate route
for Hermitian inputs; scaling-and-squaring is kept test-side as a cross
check).  For real z both are isometries of l2; for complex z they realize
the analytic continuation exactly, which makes them ground-truth oracles
for every quadrature-based construction in this package.

The analytic generator is U at z = i, a positive definite matrix with
eigenvalues nu_k = exp(-h_k).  Pairs (x, U_i x) form its graph; the block
constructions downstream act on such pairs.

Every vector here is an entire analytic vector: in finite dimension the
orbit z -> U_z x is entire, so the domain subtleties of the general theory
collapse and identities can be tested against closed forms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import GraphMembershipViolation, OverflowRisk

# cap on |h_k| (or ||H||) so exp(2H) stays well inside double range
H_MAX = 20.0
# cap on |Im z| * H_MAX; exp(40) ~ 2.4e17 leaves headroom in double precision
OVERFLOW_GUARD = 40.0
# relative tolerance for the graph membership test
GRAPH_TOL = 1e-8

_HERMITICITY_TOL = 1e-12

# StateVector: plain 1-d complex ndarray whose length matches the model
StateVector = np.ndarray


@dataclass(frozen=True)
class GroupModel:
    """A one-parameter isometry group on C^n with exact U_z evaluation.

    exponents holds the real eigenvalues h_k of the Hamiltonian; basis is
    the eigenvector matrix V (None for a Diagonal model, where V = I);
    generator_matrix keeps the original H of a Hermitian model.
    """

    kind: str
    exponents: np.ndarray
    basis: np.ndarray | None = None
    generator_matrix: np.ndarray | None = None

    @staticmethod
    def diagonal(exponents) -> "GroupModel":
        h = np.atleast_1d(np.asarray(exponents, dtype=float)).ravel()
        if h.size == 0:
            raise ValueError("a model needs at least one exponent")
        if not np.all(np.isfinite(h)):
            raise ValueError("exponents must be finite")
        if float(np.max(np.abs(h))) > H_MAX:
            raise OverflowRisk(
                f"max |h_k| = {np.max(np.abs(h)):.3f} exceeds the cap {H_MAX}"
            )
        return GroupModel("diagonal", h)

    @staticmethod
    def hermitian(H) -> "GroupModel":
        H = np.asarray(H, dtype=complex)
        if H.ndim != 2 or H.shape[0] != H.shape[1]:
            raise ValueError(f"generator must be square, got shape {H.shape}")
        scale = max(float(np.linalg.norm(H)), 1e-30)
        defect = float(np.linalg.norm(H - H.conj().T))
        if defect > _HERMITICITY_TOL * scale:
            raise ValueError(
                f"generator is not Hermitian: ||H - H*|| = {defect:.3e} "
                f"exceeds {_HERMITICITY_TOL:.0e} * ||H||"
            )
        evals, V = np.linalg.eigh(0.5 * (H + H.conj().T))
        if float(np.max(np.abs(evals))) > H_MAX:
            raise OverflowRisk(
                f"||H||_2 = {np.max(np.abs(evals)):.3f} exceeds the cap {H_MAX}"
            )
        return GroupModel("hermitian", evals, V, H)

    @property
    def dim(self) -> int:
        return int(self.exponents.size)

    @property
    def max_exponent(self) -> float:
        return float(np.max(np.abs(self.exponents)))


def as_state(g: GroupModel, x) -> np.ndarray:
    """Validate and normalize x to a finite complex vector of the model's dimension."""
    x = np.asarray(x, dtype=complex).ravel()
    if x.size != g.dim:
        raise ValueError(f"vector has length {x.size}, model dimension is {g.dim}")
    if not np.all(np.isfinite(x)):
        raise ValueError("vector entries must be finite")
    return x


def _check_overflow(z: complex) -> None:
    if abs(complex(z).imag) * H_MAX > OVERFLOW_GUARD + 1e-12:
        raise OverflowRisk(
            f"|Im z| = {abs(complex(z).imag):.3f} exceeds "
            f"{OVERFLOW_GUARD / H_MAX:.1f} allowed by the overflow guard"
        )


def apply_Uz(g: GroupModel, z: complex, x) -> np.ndarray:
    """Exact U_z x.  Diagonal: componentwise phases; Hermitian: eigenbasis."""
    z = complex(z)
    _check_overflow(z)
    x = as_state(g, x)
    phases = np.exp(1j * z * g.exponents)
    if g.kind == "diagonal":
        return phases * x
    c = g.basis.conj().T @ x
    return g.basis @ (phases * c)


def apply_Uz_batch(g: GroupModel, zs, x) -> np.ndarray:
    """U_z x for an array of (possibly complex) times; rows follow zs."""
    zs = np.asarray(zs, dtype=complex).ravel()
    if zs.size:
        _check_overflow(1j * float(np.max(np.abs(zs.imag))))
    x = as_state(g, x)
    phases = np.exp(1j * np.multiply.outer(zs, g.exponents))
    if g.kind == "diagonal":
        return phases * x[None, :]
    c = g.basis.conj().T @ x
    return (phases * c[None, :]) @ g.basis.T


def group_matrix(g: GroupModel, z: complex) -> np.ndarray:
    """The matrix of U_z."""
    z = complex(z)
    _check_overflow(z)
    phases = np.exp(1j * z * g.exponents)
    if g.kind == "diagonal":
        return np.diag(phases)
    return (g.basis * phases[None, :]) @ g.basis.conj().T


def analytic_generator(g: GroupModel) -> np.ndarray:
    """The matrix of U_i = exp(-H); positive definite with eigenvalues exp(-h_k)."""
    return group_matrix(g, 1j)


def generator_spectrum(g: GroupModel) -> np.ndarray:
    """Eigenvalues nu_k = exp(-h_k) of the analytic generator."""
    return np.exp(-g.exponents)


@dataclass(frozen=True)
class GraphVector:
    """A pair (x, y) intended to satisfy y = U_i x."""

    first: np.ndarray
    second: np.ndarray

    def stacked(self) -> np.ndarray:
        return np.concatenate([self.first, self.second])


def make_graph_vector(g: GroupModel, x) -> GraphVector:
    x = as_state(g, x)
    return GraphVector(x, apply_Uz(g, 1j, x))


def graph_defect(g: GroupModel, v: GraphVector) -> float:
    """Relative defect ||y - U_i x|| / ||x|| of a candidate graph pair."""
    x = as_state(g, v.first)
    y = as_state(g, v.second)
    nx = float(np.linalg.norm(x))
    if nx == 0.0:
        return float(np.linalg.norm(y))
    return float(np.linalg.norm(y - apply_Uz(g, 1j, x))) / nx


def require_graph_vector(g: GroupModel, v: GraphVector) -> None:
    d = graph_defect(g, v)
    if d > GRAPH_TOL:
        raise GraphMembershipViolation(
            f"pair fails the graph condition: relative defect {d:.3e} > {GRAPH_TOL:.0e}"
        )


@dataclass(frozen=True)
class StripReport:
    """Residuals of the interpolation checks along a horizontal strip."""

    group_law_residual: float
    cauchy_riemann_residual: float


def strip_continuation_check(
    g: GroupModel, x, z: complex, num_boundary_samples: int = 10
) -> StripReport:
    """Consistency of the continuation t -> U_{t+is} x across the strip.

    Checks the interpolation property U_t (U_{is} x) = U_{t+is} x at sampled
    real t, and discrete Cauchy-Riemann equations for F(z) = U_z x by
    central finite differences in both coordinate directions.
    """
    z = complex(z)
    _check_overflow(z)
    x = as_state(g, x)
    nx = max(float(np.linalg.norm(x)), 1e-30)
    s = z.imag
    half_span = abs(z.real) + 1.0
    ts = np.linspace(-half_span, half_span, max(2, int(num_boundary_samples)))

    shifted = apply_Uz(g, 1j * s, x)
    group_law = 0.0
    for t in ts:
        lhs = apply_Uz(g, t, shifted)
        rhs = apply_Uz(g, t + 1j * s, x)
        group_law = max(group_law, float(np.linalg.norm(lhs - rhs)) / nx)

    step = 1e-5 / (1.0 + g.max_exponent)
    cr = 0.0
    for t in ts:
        w = t + 1j * s
        d_re = (apply_Uz(g, w + step, x) - apply_Uz(g, w - step, x)) / (2.0 * step)
        d_im = (apply_Uz(g, w + 1j * step, x) - apply_Uz(g, w - 1j * step, x)) / (
            2.0 * step
        )
        cr = max(cr, float(np.linalg.norm(d_im - 1j * d_re)) / nx)

    return StripReport(group_law, cr)
