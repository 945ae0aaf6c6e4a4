"""Finite-dimensional *-algebras given inside a faithful matrix representation.

An algebra is stored as an orthonormal basis (trace inner product) of a
product- and adjoint-closed span of n x n matrices, together with its
unit.  The unit need not be the ambient identity: fibers cut out by a
central projection p carry p as their unit.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import expm

from .linalg import (
    RealSpan,
    Subspace,
    adjoint,
    as_cmatrix,
    commutator,
    frobenius,
    nullspace,
    op_norm,
    trace_inner,
)

__all__ = [
    "AlgebraError",
    "NotClosed",
    "NonCommutative",
    "DegenerateDraw",
    "FiniteStarAlgebra",
    "ProjectionFamily",
    "subalgebra_from_span",
    "full_matrix_algebra",
    "diagonal_algebra",
    "block_diagonal_algebra",
    "center",
    "minimal_projections",
    "skew_hermitian_basis",
    "random_unitary",
]


class AlgebraError(Exception):
    """Base class for algebra construction failures."""


class NotClosed(AlgebraError):
    """The candidate span is not closed under products/adjoints, or has no unit."""


class NonCommutative(AlgebraError):
    """A commutative algebra was required."""


class DegenerateDraw(AlgebraError):
    """Random spectral draws kept producing clustered eigenvalues."""


class FiniteStarAlgebra:
    """A *-closed span of matrices with its unit.

    Closure and the unit property are verified at construction; pass
    pre-verified data only through :func:`subalgebra_from_span`.
    """

    def __init__(self, basis: list[np.ndarray], unit: np.ndarray, label: str = "",
                 tol: float = 1e-8, _verify: bool = True):
        self.basis = [as_cmatrix(b) for b in basis]
        self.unit = as_cmatrix(unit)
        self.label = label
        if not self.basis:
            raise NotClosed("an algebra needs at least one basis element")
        self.ambient = self.basis[0].shape[0]
        self._stack = np.stack([b.ravel() for b in self.basis])
        if _verify:
            self._verify(tol)

    # -- structure ---------------------------------------------------------

    @property
    def dim(self) -> int:
        return len(self.basis)

    def coordinates(self, a: np.ndarray) -> np.ndarray:
        return self._stack.conj() @ np.ravel(as_cmatrix(a))

    def project(self, a: np.ndarray) -> np.ndarray:
        return (self.coordinates(a) @ self._stack).reshape(self.ambient, self.ambient)

    def residual(self, a: np.ndarray) -> float:
        return frobenius(as_cmatrix(a) - self.project(a))

    def contains(self, a: np.ndarray, tol: float = 1e-8) -> bool:
        return self.residual(a) <= tol * max(1.0, frobenius(a))

    def span(self) -> Subspace:
        return Subspace(self._stack.copy(), (self.ambient, self.ambient))

    def is_commutative(self, tol: float = 1e-10) -> bool:
        return all(
            op_norm(commutator(a, b)) <= tol
            for i, a in enumerate(self.basis)
            for b in self.basis[i + 1:]
        )

    def random_element(self, seed: int = 0, hermitian: bool = False) -> np.ndarray:
        rng = np.random.default_rng(seed)
        c = rng.standard_normal(self.dim) + 1j * rng.standard_normal(self.dim)
        a = (c @ self._stack).reshape(self.ambient, self.ambient)
        if hermitian:
            a = (a + adjoint(a)) / 2
        return a

    def __repr__(self) -> str:  # pragma: no cover
        tag = f" {self.label!r}" if self.label else ""
        return f"FiniteStarAlgebra(dim={self.dim}, ambient={self.ambient}{tag})"

    # -- verification ------------------------------------------------------

    def _verify(self, tol: float) -> None:
        b = np.stack(self.basis)
        d, n = self.dim, self.ambient
        prods = np.einsum("aij,bjk->abik", b, b).reshape(d * d, n * n)
        resid = prods - (prods @ self._stack.conj().T) @ self._stack
        worst = float(np.max(np.linalg.norm(resid, axis=1))) if resid.size else 0.0
        if worst > tol:
            raise NotClosed(f"span not closed under products (residual {worst:.2e})")
        adj = np.conj(np.swapaxes(b, 1, 2)).reshape(d, n * n)
        resid = adj - (adj @ self._stack.conj().T) @ self._stack
        worst = float(np.max(np.linalg.norm(resid, axis=1)))
        if worst > tol:
            raise NotClosed(f"span not closed under adjoints (residual {worst:.2e})")
        gram = self._stack @ self._stack.conj().T
        if op_norm(gram - np.eye(d)) > 1e-9:
            raise NotClosed("basis is not orthonormal in the trace inner product")
        worst = max(
            max(op_norm(self.unit @ x - x), op_norm(x @ self.unit - x))
            for x in self.basis
        )
        if worst > 1e-9:
            raise NotClosed(f"stored unit does not act as the identity (residual {worst:.2e})")
        if not self.contains(self.unit, 1e-9):
            raise NotClosed("stored unit lies outside the span")


def _find_unit(stack: np.ndarray, ambient: int) -> np.ndarray:
    """Solve e b = b = b e for e inside the span; raise if no solution."""
    d = stack.shape[0]
    basis = stack.reshape(d, ambient, ambient)
    rows = []
    rhs = []
    for b in basis:
        rows.append(np.stack([(x @ b).ravel() for x in basis]).T)  # columns indexed by k
        rhs.append(b.ravel())
        rows.append(np.stack([(b @ x).ravel() for x in basis]).T)
        rhs.append(b.ravel())
    a = np.vstack(rows)
    y = np.concatenate(rhs)
    c, *_ = np.linalg.lstsq(a, y, rcond=None)
    e = (c @ stack).reshape(ambient, ambient)
    worst = max(
        max(op_norm(e @ b - b), op_norm(b @ e - b)) for b in basis
    )
    if worst > 1e-9:
        raise NotClosed(f"span has no unit (best residual {worst:.2e})")
    return e


def subalgebra_from_span(span, label: str = "", tol: float = 1e-8) -> FiniteStarAlgebra:
    """Verify a span is a unital *-subalgebra and wrap it.

    Accepts a :class:`~ncgauge.linalg.Subspace` or a list of matrices.
    Closure is verified, not assumed.
    """
    if isinstance(span, Subspace):
        sub = span
    else:
        sub = Subspace.from_spanning(list(span))
    if sub.dim == 0:
        raise NotClosed("empty span")
    stack = np.stack([b.ravel() for b in sub.basis])
    ambient = sub.shape[0]
    if sub.shape[0] != sub.shape[1]:
        raise NotClosed("algebra elements must be square matrices")
    unit = _find_unit(stack, ambient)
    return FiniteStarAlgebra(sub.basis, unit, label=label, tol=tol)


def full_matrix_algebra(n: int, label: str = "") -> FiniteStarAlgebra:
    """M_n with the matrix-unit basis (already orthonormal)."""
    basis = []
    for i in range(n):
        for j in range(n):
            e = np.zeros((n, n), dtype=complex)
            e[i, j] = 1.0
            basis.append(e)
    return FiniteStarAlgebra(basis, np.eye(n, dtype=complex), label=label or f"M{n}")


def diagonal_algebra(n: int, label: str = "") -> FiniteStarAlgebra:
    basis = []
    for i in range(n):
        e = np.zeros((n, n), dtype=complex)
        e[i, i] = 1.0
        basis.append(e)
    return FiniteStarAlgebra(basis, np.eye(n, dtype=complex), label=label or f"C^{n}")


def block_diagonal_algebra(sizes: list[int], label: str = "") -> FiniteStarAlgebra:
    """Direct sum of full matrix blocks along the diagonal."""
    total = sum(sizes)
    basis = []
    off = 0
    for sz in sizes:
        for i in range(sz):
            for j in range(sz):
                e = np.zeros((total, total), dtype=complex)
                e[off + i, off + j] = 1.0
                basis.append(e)
        off += sz
    return FiniteStarAlgebra(basis, np.eye(total, dtype=complex),
                             label=label or "+".join(f"M{s}" for s in sizes))


def center(algebra: FiniteStarAlgebra) -> FiniteStarAlgebra:
    """Elements commuting with the whole algebra, as a subalgebra.

    Computed as the nullspace of a -> ([a, b_1], ..., [a, b_d]) restricted
    to the span.  The center of a *-closed algebra is itself *-closed and
    contains the unit, so the wrap step cannot fail on consistent input.
    """
    images = []
    for a in algebra.basis:
        images.append(np.stack([commutator(a, b) for b in algebra.basis]))
    sub = nullspace(algebra.basis, images)
    return subalgebra_from_span(sub, label=f"Z({algebra.label})" if algebra.label else "center")


class ProjectionFamily:
    """Pairwise orthogonal self-adjoint idempotents summing to a unit."""

    def __init__(self, projections: list[np.ndarray], labels: list[str] | None = None,
                 unit: np.ndarray | None = None, tol: float = 1e-9):
        self.projections = [as_cmatrix(p) for p in projections]
        self.labels = labels or [f"x{i}" for i in range(len(self.projections))]
        if len(self.labels) != len(self.projections):
            raise ValueError("label/projection count mismatch")
        for p in self.projections:
            if op_norm(p @ p - p) > tol or op_norm(p - adjoint(p)) > tol:
                raise AlgebraError("family member is not a self-adjoint idempotent")
        for i, p in enumerate(self.projections):
            for q in self.projections[i + 1:]:
                if op_norm(p @ q) > tol:
                    raise AlgebraError("projections are not pairwise orthogonal")
        if unit is not None:
            total = sum(self.projections)
            if op_norm(total - unit) > tol:
                raise AlgebraError("projections do not sum to the unit")

    def __len__(self) -> int:
        return len(self.projections)

    def __iter__(self):
        return iter(zip(self.labels, self.projections))


def _self_adjoint_basis(algebra: FiniteStarAlgebra) -> list[np.ndarray]:
    cands = []
    for b in algebra.basis:
        cands.append((b + adjoint(b)) / 2)
        cands.append((b - adjoint(b)) / 2j)
    span = RealSpan.from_spanning(cands, (algebra.ambient, algebra.ambient))
    return span.basis


def minimal_projections(algebra: FiniteStarAlgebra, seed: int = 0, max_tries: int = 10,
                        gap: float = 1e-6) -> ProjectionFamily:
    """Minimal projections of a commutative *-algebra.

    A generic self-adjoint element of a commutative algebra with minimal
    projections p_x has the form sum_x c_x p_x with distinct real c_x, so
    its spectral projections recover the p_x exactly.  The eigenvalue 0 on
    the complement of the algebra unit (when the unit is not the ambient
    identity) yields a candidate outside the span, which is dropped by the
    membership filter.  Draws whose eigenvalue clusters are separated by
    less than ``gap`` are retried; after ``max_tries`` failures a
    :class:`DegenerateDraw` is raised.
    """
    zdim = center(algebra).dim
    if zdim != algebra.dim:
        raise NonCommutative(f"algebra of dim {algebra.dim} has center of dim {zdim}")
    sa = _self_adjoint_basis(algebra)
    rng = np.random.default_rng(seed)
    for _ in range(max_tries):
        coeff = rng.standard_normal(len(sa))
        h = sum(c * s for c, s in zip(coeff, sa))
        vals, vecs = np.linalg.eigh(h)
        # cluster eigenvalues; identical values must share a cluster
        clusters: list[list[int]] = [[0]]
        for i in range(1, len(vals)):
            if vals[i] - vals[clusters[-1][-1]] < 1e-8:
                clusters[-1].append(i)
            else:
                clusters.append([i])
        seps = [vals[clusters[i + 1][0]] - vals[clusters[i][-1]] for i in range(len(clusters) - 1)]
        if any(s < gap for s in seps):
            continue
        projs = []
        for idx in clusters:
            v = vecs[:, idx]
            p = v @ adjoint(v)
            if algebra.contains(p, 1e-8):
                projs.append(p)
        total = sum(projs) if projs else np.zeros_like(algebra.unit)
        if op_norm(total - algebra.unit) > 1e-9:
            continue
        order = sorted(range(len(projs)),
                       key=lambda i: tuple(np.round(-np.real(np.diag(projs[i])), 6)))
        projs = [projs[i] for i in order]
        return ProjectionFamily(projs, unit=algebra.unit)
    raise DegenerateDraw(f"no well-separated spectral draw in {max_tries} tries")


def skew_hermitian_basis(algebra: FiniteStarAlgebra) -> list[np.ndarray]:
    """Real-orthonormal basis of the skew-hermitian part u(A) = {a : a* = -a}.

    A *-closed complex algebra splits over R as u(A) + i u(A), so the real
    dimension of u(A) equals the complex dimension of A; this is asserted.
    """
    cands = []
    for b in algebra.basis:
        cands.append((b - adjoint(b)) / 2)
        cands.append(1j * (b + adjoint(b)) / 2)
    span = RealSpan.from_spanning(cands, (algebra.ambient, algebra.ambient))
    if span.dim != algebra.dim:
        raise AlgebraError(
            f"skew-hermitian part has real dim {span.dim}, expected {algebra.dim}")
    return span.basis


def random_unitary(algebra: FiniteStarAlgebra, seed: int = 0) -> np.ndarray:
    """exp(X) for a random skew-hermitian X in the algebra.

    Returns u with u u* equal to the algebra unit.  For a non-ambient unit
    e the exponential is taken inside the algebra: e + X + X^2/2 + ...,
    which equals expm(X) - 1 + e since X e = e X = X.
    """
    rng = np.random.default_rng(seed)
    skew = skew_hermitian_basis(algebra)
    coeff = rng.standard_normal(len(skew)) / np.sqrt(len(skew))
    x = sum(c * s for c, s in zip(coeff, skew))
    u = expm(x) - np.eye(algebra.ambient) + algebra.unit
    if op_norm(u @ adjoint(u) - algebra.unit) > 1e-9:
        raise AlgebraError("exponential drifted off the unitary group")
    if not algebra.contains(u, 1e-8):
        raise AlgebraError("exponential drifted out of the algebra span")
    return u
