"""Dense complex linear algebra kernels shared by every other module.

Conventions
-----------
* Matrices are plain ``numpy`` arrays with ``complex`` dtype.
* Every subspace computation runs in the trace inner product
  ``<a, b> = tr(a^* b)``.  Row-major vectorisation is an isometry from
  matrix space to ``C^(r*c)`` for this inner product, so orthonormal
  bases, projections and nullspaces all reduce to SVD calls on stacked
  vectorised matrices.
* Anti-linear operators are never stored as "matrices of an anti-linear
  map".  Only the unitary kernel ``K`` of ``v -> K conj(v)`` is kept,
  and operator identities are rewritten as linear matrix identities in
  ``K`` before they are evaluated (see :class:`AntiLinearOp`).

Tolerance ladder: construction-level identities are expected to hold at
``TOL_CONSTRUCT``, identities that chain a few operations at
``TOL_DERIVED``, and grid continuity statistics at ``TOL_GRID``.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import null_space

TOL_CONSTRUCT = 1e-10
TOL_DERIVED = 1e-8
TOL_GRID = 1e-4

__all__ = [
    "TOL_CONSTRUCT",
    "TOL_DERIVED",
    "TOL_GRID",
    "as_cmatrix",
    "adjoint",
    "commutator",
    "trace_inner",
    "frobenius",
    "op_norm",
    "left_mult_matrix",
    "right_mult_matrix",
    "Subspace",
    "RealSpan",
    "nullspace",
    "generated_algebra",
    "AntiLinearOp",
]


def as_cmatrix(m) -> np.ndarray:
    """Coerce to a 2d complex array."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise ValueError(f"expected a matrix, got array of shape {a.shape}")
    return a


def adjoint(m: np.ndarray) -> np.ndarray:
    return np.conj(m).T


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def trace_inner(a: np.ndarray, b: np.ndarray) -> complex:
    """tr(a^* b).  Equals the standard inner product of the vectorisations."""
    return complex(np.vdot(np.ravel(a), np.ravel(b)))


def frobenius(m: np.ndarray) -> float:
    return float(np.linalg.norm(m))


def op_norm(m: np.ndarray) -> float:
    """Largest singular value."""
    m = np.asarray(m, dtype=complex)
    if m.size == 0:
        return 0.0
    return float(np.linalg.svd(m, compute_uv=False)[0])


def left_mult_matrix(a: np.ndarray) -> np.ndarray:
    """Matrix of x -> a x on row-major vectorised matrix space."""
    a = as_cmatrix(a)
    return np.kron(a, np.eye(a.shape[1], dtype=complex))


def right_mult_matrix(b: np.ndarray) -> np.ndarray:
    """Matrix of x -> x b on row-major vectorised matrix space."""
    b = as_cmatrix(b)
    return np.kron(np.eye(b.shape[0], dtype=complex), b.T)


def _orthonormal_rows(stack: np.ndarray, rtol: float = 1e-10, floor: float = 0.0) -> np.ndarray:
    """Orthonormal basis (as rows) of the row space of ``stack``.

    Singular values below ``max(rtol * s_max, floor)`` are treated as zero.
    """
    stack = np.atleast_2d(np.asarray(stack, dtype=complex))
    if stack.shape[0] == 0 or stack.size == 0:
        return np.zeros((0, stack.shape[-1]), dtype=complex)
    _, s, vh = np.linalg.svd(stack, full_matrices=False)
    if s.size == 0:
        return np.zeros((0, stack.shape[-1]), dtype=complex)
    cut = max(rtol * s[0], floor)
    rank = int(np.sum(s > cut))
    return vh[:rank]


class Subspace:
    """Complex-linear span of matrices, orthonormal in the trace inner product."""

    def __init__(self, stack: np.ndarray, shape: tuple[int, int]):
        self._stack = np.asarray(stack, dtype=complex).reshape(-1, shape[0] * shape[1])
        self.shape = shape

    @classmethod
    def from_spanning(cls, mats, shape: tuple[int, int] | None = None, rtol: float = 1e-10) -> "Subspace":
        mats = [as_cmatrix(m) for m in mats]
        if shape is None:
            if not mats:
                raise ValueError("cannot infer the ambient shape from an empty list")
            shape = mats[0].shape
        for m in mats:
            if m.shape != shape:
                raise ValueError("mixed matrix shapes in spanning set")
        if not mats:
            return cls(np.zeros((0, shape[0] * shape[1])), shape)
        stack = np.stack([m.ravel() for m in mats])
        return cls(_orthonormal_rows(stack, rtol), shape)

    @property
    def dim(self) -> int:
        return self._stack.shape[0]

    @property
    def basis(self) -> list[np.ndarray]:
        return [row.reshape(self.shape) for row in self._stack]

    def coordinates(self, m: np.ndarray) -> np.ndarray:
        return self._stack.conj() @ np.ravel(m)

    def project(self, m: np.ndarray) -> np.ndarray:
        return (self.coordinates(m) @ self._stack).reshape(self.shape)

    def residual(self, m: np.ndarray) -> float:
        return frobenius(as_cmatrix(m) - self.project(m))

    def contains(self, m: np.ndarray, tol: float = TOL_DERIVED) -> bool:
        scale = max(1.0, frobenius(m))
        return self.residual(m) <= tol * scale

    def union(self, other: "Subspace", rtol: float = 1e-10) -> "Subspace":
        if other.shape != self.shape:
            raise ValueError("shape mismatch")
        stack = np.vstack([self._stack, other._stack])
        return Subspace(_orthonormal_rows(stack, rtol), self.shape)

    def intersection_dim(self, other: "Subspace") -> int:
        return self.dim + other.dim - self.union(other).dim


def _to_real_vec(m: np.ndarray) -> np.ndarray:
    v = np.ravel(m)
    return np.concatenate([v.real, v.imag])


class RealSpan:
    """Real-linear span of complex matrices, orthonormal in Re tr(a^* b).

    Needed for skew-hermitian and gauge Lie algebra spans, which are real
    vector spaces not closed under multiplication by i.
    """

    def __init__(self, stack: np.ndarray, shape: tuple[int, int]):
        self._stack = np.asarray(stack, dtype=float)
        self.shape = shape

    @classmethod
    def from_spanning(cls, mats, shape: tuple[int, int] | None = None, rtol: float = 1e-10) -> "RealSpan":
        mats = [as_cmatrix(m) for m in mats]
        if shape is None:
            if not mats:
                raise ValueError("cannot infer the ambient shape from an empty list")
            shape = mats[0].shape
        if not mats:
            return cls(np.zeros((0, 2 * shape[0] * shape[1])), shape)
        stack = np.stack([_to_real_vec(m) for m in mats])
        u, s, vh = np.linalg.svd(stack, full_matrices=False)
        rank = 0 if s.size == 0 or s[0] == 0 else int(np.sum(s > rtol * s[0]))
        return cls(vh[:rank], shape)

    @property
    def dim(self) -> int:
        return self._stack.shape[0]

    @property
    def basis(self) -> list[np.ndarray]:
        n = self.shape[0] * self.shape[1]
        out = []
        for row in self._stack:
            out.append((row[:n] + 1j * row[n:]).reshape(self.shape))
        return out

    def project(self, m: np.ndarray) -> np.ndarray:
        v = _to_real_vec(as_cmatrix(m))
        w = (self._stack @ v) @ self._stack
        n = self.shape[0] * self.shape[1]
        return (w[:n] + 1j * w[n:]).reshape(self.shape)

    def residual(self, m: np.ndarray) -> float:
        return frobenius(as_cmatrix(m) - self.project(m))

    def contains(self, m: np.ndarray, tol: float = TOL_DERIVED) -> bool:
        return self.residual(m) <= tol * max(1.0, frobenius(m))


def nullspace(domain_basis, images, rcond: float = 1e-9) -> Subspace:
    """Nullspace of a linear map given on an orthonormal basis of its domain.

    ``domain_basis`` is an orthonormal family of matrices and ``images[i]``
    is the image of ``domain_basis[i]`` (any array; it is only ravelled).
    A combination v = sum c_i e_i is kept when ||L(v)|| falls below
    ``rcond`` times the largest singular value of L, matching a relative
    threshold ||L(v)|| < rcond * ||L|| * ||v||.  Rank plus nullity equals
    the domain dimension by construction.
    """
    domain = [as_cmatrix(m) for m in domain_basis]
    if len(domain) != len(images):
        raise ValueError("domain basis and image list disagree in length")
    if not domain:
        raise ValueError("empty domain")
    shape = domain[0].shape
    a = np.stack([np.ravel(np.asarray(img, dtype=complex)) for img in images])
    ns = null_space(a.T, rcond=rcond)  # columns: coefficient vectors c with sum c_i images[i] = 0
    dom_stack = np.stack([m.ravel() for m in domain])
    # orthonormal coefficient columns against an orthonormal domain basis
    # give orthonormal nullspace matrices, no re-orthonormalisation needed
    return Subspace(ns.T @ dom_stack, shape)


def generated_algebra(generators, include_unit: bool = False, rtol: float = 1e-9) -> Subspace:
    """Smallest product- and adjoint-closed span containing the generators.

    Closure under products of an adjoint-closed spanning set is
    automatically adjoint-closed, so the seed is generators plus their
    adjoints (plus the identity when requested) and the iteration only
    multiplies.  The dimension is capped by n^2, which bounds the loop.
    """
    mats = [as_cmatrix(g) for g in generators]
    if not mats:
        raise ValueError("no generators")
    n = mats[0].shape[0]
    for m in mats:
        if m.shape != (n, n):
            raise ValueError("generators must be square matrices of equal size")
    seed = mats + [adjoint(m) for m in mats]
    if include_unit:
        seed.append(np.eye(n, dtype=complex))
    stack = _orthonormal_rows(np.stack([m.ravel() for m in seed]), rtol)
    fresh_from = 0
    for _ in range(n * n + 2):
        basis = stack.reshape(-1, n, n)
        d = basis.shape[0]
        if d == 0 or d >= n * n:
            break
        new = basis[fresh_from:]
        if new.shape[0] == 0:
            break
        old = basis[:fresh_from]
        blocks = [np.einsum("aij,bjk->abik", new, basis).reshape(-1, n * n)]
        if old.shape[0]:
            blocks.append(np.einsum("aij,bjk->abik", old, new).reshape(-1, n * n))
        prods = np.concatenate(blocks)
        resid = prods - (prods @ stack.conj().T) @ stack
        extra = _orthonormal_rows(resid, rtol, floor=rtol)
        if extra.shape[0] == 0:
            break
        fresh_from = d
        stack = np.vstack([stack, extra])
    return Subspace(stack, (n, n))


class AntiLinearOp:
    """Anti-linear operator v -> K conj(v), stored through its kernel K.

    For an invertible kernel the inverse is w -> conj(K^-1 w), so for
    unitary K the conjugation J m J^-1 of a linear operator m is the
    linear operator with matrix K conj(m) K^adj.  When the kernel also
    satisfies K conj(K) = eps 1 (the sign of J^2), this coincides with
    eps K conj(m) conj(K), since conj(K) = eps K^adj there.
    """

    def __init__(self, kernel):
        k = as_cmatrix(kernel)
        if k.shape[0] != k.shape[1]:
            raise ValueError("kernel must be square")
        self.kernel = k

    @property
    def dim(self) -> int:
        return self.kernel.shape[0]

    def apply(self, v: np.ndarray) -> np.ndarray:
        return self.kernel @ np.conj(np.asarray(v, dtype=complex))

    def apply_inverse(self, w: np.ndarray) -> np.ndarray:
        # conj(K^-1 w) with K^-1 = K^adj for unitary kernels
        return np.conj(adjoint(self.kernel) @ np.asarray(w, dtype=complex))

    def conjugate(self, m: np.ndarray) -> np.ndarray:
        """Matrix of the linear operator J m J^-1."""
        return self.kernel @ np.conj(as_cmatrix(m)) @ adjoint(self.kernel)

    def unitarity_residual(self) -> float:
        k = self.kernel
        return op_norm(adjoint(k) @ k - np.eye(self.dim))

    def is_isometry(self, tol: float = TOL_CONSTRUCT) -> bool:
        return self.unitarity_residual() <= tol

    def square_sign(self) -> tuple[int, float]:
        """Best sign eps and the residual of K conj(K) = eps 1."""
        kk = self.kernel @ np.conj(self.kernel)
        eye = np.eye(self.dim)
        r_plus = op_norm(kk - eye)
        r_minus = op_norm(kk + eye)
        return (1, r_plus) if r_plus <= r_minus else (-1, r_minus)

    def __repr__(self) -> str:  # pragma: no cover
        return f"AntiLinearOp(dim={self.dim})"
