"""Real spectral triples at finite dimension.

A triple bundles a finite *-algebra A (in its defining matrix ambient),
a faithful unital *-representation pi into B(H) for a finite H, a
self-adjoint operator D, an anti-linear real structure J given through
its unitary kernel K (J v = K conj(v)), and the two signs eps = J^2,
eps' relating JD and DJ.

Everything anti-linear is rewritten in terms of K before evaluation:

    J D = eps' D J           <=>  K conj(D) = eps' D K
    b_opp = J b* J^-1             has matrix  eps K transpose(pi(b)) conj(K)
    a J = J a*               <=>  pi(a) K = K transpose(pi(a))
    U J U* (U linear unitary)     has kernel U K transpose(U)

The last line is where anti-linearity bites: conj(U* v) inserts a
transpose, not an adjoint.  Each rewrite is tested against a direct
anti-linear action oracle on random vectors in the test suite.

Axiom failures surface as report records, never exceptions, so candidate
triples can be fuzzed; constructors only reject structural nonsense
(shape mismatches, sign values outside {-1, +1}).
"""

from __future__ import annotations

import numpy as np

from .linalg import (
    TOL_CONSTRUCT,
    TOL_DERIVED,
    AntiLinearOp,
    Subspace,
    adjoint,
    as_cmatrix,
    commutator,
    frobenius,
    generated_algebra,
    nullspace,
    op_norm,
)
from .reporting import SCOPE_EXACT, CheckRecord, Report
from .staralg import AlgebraError, FiniteStarAlgebra, NotClosed, center

__all__ = [
    "SpectralInputError",
    "DimensionMismatch",
    "RealSpectralTriple",
    "OneForm",
    "check_axioms",
    "one_form_space",
    "c_d_algebra",
    "compute_aj",
    "verify_aj_properties",
    "unitary_equivalent",
    "conjugate_triple",
    "transpose_permutation",
]

_J_AXIOM_TOL = 1e-9


class SpectralInputError(ValueError):
    """Structurally malformed triple data (shapes, counts, signs)."""


class DimensionMismatch(SpectralInputError):
    """Two triples live on Hilbert spaces of different dimension."""


def transpose_permutation(n: int) -> np.ndarray:
    """Permutation P with P vec(x) = vec(transpose(x)), row-major vec."""
    p = np.zeros((n * n, n * n), dtype=complex)
    for i in range(n):
        for j in range(n):
            p[i * n + j, j * n + i] = 1.0
    return p


class RealSpectralTriple:
    """Validated container; all verification lives in module functions."""

    def __init__(self, algebra: FiniteStarAlgebra, pi_images: list[np.ndarray],
                 dirac: np.ndarray, real_structure, eps: int = 1, eps_prime: int = 1,
                 label: str = ""):
        self.algebra = algebra
        self.pi_images = [as_cmatrix(m) for m in pi_images]
        if len(self.pi_images) != algebra.dim:
            raise SpectralInputError(
                f"{len(self.pi_images)} representation images for {algebra.dim} basis elements")
        n = self.pi_images[0].shape[0]
        for m in self.pi_images:
            if m.shape != (n, n):
                raise SpectralInputError("representation images must be square and equal-sized")
        self.dirac = as_cmatrix(dirac)
        if self.dirac.shape != (n, n):
            raise SpectralInputError(f"dirac shape {self.dirac.shape} does not match H dim {n}")
        self.real_structure = (real_structure if isinstance(real_structure, AntiLinearOp)
                               else AntiLinearOp(real_structure))
        if self.real_structure.dim != n:
            raise SpectralInputError("real structure kernel does not match H dim")
        if eps not in (-1, 1) or eps_prime not in (-1, 1):
            raise SpectralInputError("signs must be -1 or +1")
        self.eps = int(eps)
        self.eps_prime = int(eps_prime)
        self.label = label
        self.hilbert_dim = n
        self._pi_stack = np.stack([m.ravel() for m in self.pi_images])
        self._omega1: Subspace | None = None
        self._cd: tuple[FiniteStarAlgebra, Report] | None = None
        self._aj: FiniteStarAlgebra | None = None

    # -- representation ------------------------------------------------

    def pi(self, a: np.ndarray) -> np.ndarray:
        """Image of an algebra element; rejects input outside the span."""
        a = as_cmatrix(a)
        if self.algebra.residual(a) > 1e-6 * max(1.0, frobenius(a)):
            raise AlgebraError("element lies outside the algebra span")
        coords = self.algebra.coordinates(a)
        n = self.hilbert_dim
        return (coords @ self._pi_stack).reshape(n, n)

    def b_opposite(self, b: np.ndarray) -> np.ndarray:
        """Matrix of J b* J^-1, the right-action copy of b."""
        k = self.real_structure.kernel
        return self.eps * k @ self.pi(b).T @ np.conj(k)

    def dirac_commutator(self, a: np.ndarray) -> np.ndarray:
        return commutator(self.dirac, self.pi(a))

    def j_conjugate(self, m: np.ndarray) -> np.ndarray:
        """Matrix of J m J^-1 for a linear operator m on H."""
        return self.real_structure.conjugate(m)

    def __repr__(self) -> str:  # pragma: no cover
        tag = f" {self.label!r}" if self.label else ""
        return (f"RealSpectralTriple(dim A={self.algebra.dim}, dim H={self.hilbert_dim}, "
                f"eps={self.eps:+d}, eps'={self.eps_prime:+d}{tag})")


class OneForm:
    """Sum of terms a [D, b] with a, b in the algebra.

    Terms are kept symbolically (pairs of algebra elements) so gauge
    transformations can act on them; ``matrix`` is the evaluated operator
    on H.
    """

    def __init__(self, triple: RealSpectralTriple, terms: list[tuple[np.ndarray, np.ndarray]]):
        self.triple = triple
        self.terms = [(as_cmatrix(a), as_cmatrix(b)) for a, b in terms]
        self._matrix: np.ndarray | None = None

    @property
    def matrix(self) -> np.ndarray:
        if self._matrix is None:
            n = self.triple.hilbert_dim
            out = np.zeros((n, n), dtype=complex)
            for a, b in self.terms:
                out += self.triple.pi(a) @ self.triple.dirac_commutator(b)
            self._matrix = out
        return self._matrix

    def self_adjoint_residual(self) -> float:
        m = self.matrix
        return op_norm(m - adjoint(m))

    def span_residual(self) -> float:
        return one_form_space(self.triple).residual(self.matrix)

    def __add__(self, other: "OneForm") -> "OneForm":
        if other.triple is not self.triple:
            raise ValueError("one-forms belong to different triples")
        return OneForm(self.triple, self.terms + other.terms)

    def __neg__(self) -> "OneForm":
        return OneForm(self.triple, [(-a, b) for a, b in self.terms])

    @classmethod
    def zero(cls, triple: RealSpectralTriple) -> "OneForm":
        return cls(triple, [])


# -- axiom verification ------------------------------------------------------


def check_axioms(triple: RealSpectralTriple, tol: float | None = None) -> Report:
    """Full axiom suite as a report; never raises on mathematical failure.

    The ladder: construction-level identities at 1e-10/1e-9, the
    commutant and order-one conditions (which chain several products) at
    1e-8.  Passing ``tol`` overrides every rung uniformly.
    """
    t_con = tol if tol is not None else TOL_CONSTRUCT
    t_j = tol if tol is not None else _J_AXIOM_TOL
    t_der = tol if tol is not None else TOL_DERIVED

    alg = triple.algebra
    n = triple.hilbert_dim
    k = triple.real_structure.kernel
    d = triple.dirac
    rep = Report(f"axioms[{triple.label or 'triple'}]",
                 context={"model": triple.label, "algebra_dim": alg.dim,
                          "hilbert_dim": n, "eps": triple.eps, "eps_prime": triple.eps_prime})

    pi_b = triple.pi_images
    rep.add(CheckRecord.from_residual(
        "representation-unital", "the unit of A acts as the identity on H",
        op_norm(triple.pi(alg.unit) - np.eye(n)), t_j, SCOPE_EXACT))

    worst_mult = 0.0
    for i, bi in enumerate(alg.basis):
        for j, bj in enumerate(alg.basis):
            prod = bi @ bj
            worst_mult = max(worst_mult, op_norm(triple.pi(prod) - pi_b[i] @ pi_b[j]))
    rep.add(CheckRecord.from_residual(
        "representation-multiplicative", "pi(ab) = pi(a) pi(b) on a basis",
        worst_mult, t_j, SCOPE_EXACT))

    worst_star = max(op_norm(triple.pi(adjoint(b)) - adjoint(pi_b[i]))
                     for i, b in enumerate(alg.basis))
    rep.add(CheckRecord.from_residual(
        "representation-star", "pi(a*) = pi(a)*", worst_star, t_j, SCOPE_EXACT))

    rank = int(np.linalg.matrix_rank(triple._pi_stack, tol=1e-10))
    rep.add(CheckRecord.from_residual(
        "representation-injective", "pi has full rank on the algebra basis",
        float(alg.dim - rank), 0.5, SCOPE_EXACT))

    rep.add(CheckRecord.from_residual(
        "dirac-self-adjoint", "D = D*", op_norm(d - adjoint(d)), t_con, SCOPE_EXACT))

    rep.add(CheckRecord.from_residual(
        "real-structure-isometry", "the kernel K of J is unitary",
        triple.real_structure.unitarity_residual(), t_j, SCOPE_EXACT))

    rep.add(CheckRecord.from_residual(
        "real-structure-square", "J^2 = eps, i.e. K conj(K) = eps 1",
        op_norm(k @ np.conj(k) - triple.eps * np.eye(n)), t_j, SCOPE_EXACT))

    rep.add(CheckRecord.from_residual(
        "real-structure-dirac-sign", "JD = eps' DJ, i.e. K conj(D) = eps' D K",
        op_norm(k @ np.conj(d) - triple.eps_prime * d @ k), t_j, SCOPE_EXACT))

    b_opp = [triple.b_opposite(b) for b in alg.basis]
    worst_comm = 0.0
    worst_ord1 = 0.0
    d_comms = [commutator(d, m) for m in pi_b]
    for i in range(alg.dim):
        for j in range(alg.dim):
            worst_comm = max(worst_comm, op_norm(commutator(pi_b[i], b_opp[j])))
            worst_ord1 = max(worst_ord1, op_norm(commutator(d_comms[i], b_opp[j])))
    rep.add(CheckRecord.from_residual(
        "commutant-property", "[pi(a), Jb*J^-1] = 0 for all basis pairs",
        worst_comm, t_der, SCOPE_EXACT))
    rep.add(CheckRecord.from_residual(
        "order-one-condition", "[[D, pi(a)], Jb*J^-1] = 0 for all basis pairs",
        worst_ord1, t_der, SCOPE_EXACT))
    return rep


# -- derived structures ------------------------------------------------------


def one_form_space(triple: RealSpectralTriple) -> Subspace:
    """Span of pi(a) [D, pi(b)] over basis pairs; cached on the triple."""
    if triple._omega1 is None:
        n = triple.hilbert_dim
        d_comms = [triple.dirac_commutator(b) for b in triple.algebra.basis]
        prods = [p @ c for p in triple.pi_images for c in d_comms]
        triple._omega1 = Subspace.from_spanning(prods, shape=(n, n))
    return triple._omega1


def c_d_algebra(triple: RealSpectralTriple) -> tuple[FiniteStarAlgebra, Report]:
    """The algebra generated by pi(A) and [D, pi(A)], with its parity split.

    Words are graded by the number of [D, .] letters mod 2.  The even and
    odd spans are grown together until stable; the grading is consistent
    exactly when they intersect trivially, which can fail at finite
    dimension (the even and odd words may collide).  Consistency is
    reported, not asserted.
    """
    if triple._cd is not None:
        return triple._cd
    n = triple.hilbert_dim
    even = Subspace.from_spanning(
        triple.pi_images + [np.eye(n, dtype=complex)], shape=(n, n))
    odd = Subspace.from_spanning(
        [triple.dirac_commutator(b) for b in triple.algebra.basis], shape=(n, n))

    def _products(x: Subspace, y: Subspace) -> list[np.ndarray]:
        if x.dim == 0 or y.dim == 0:
            return []
        xs = np.stack([m for m in x.basis])
        ys = np.stack([m for m in y.basis])
        return list(np.einsum("aij,bjk->abik", xs, ys).reshape(-1, n, n))

    for _ in range(n * n + 2):
        new_even = Subspace.from_spanning(
            even.basis + _products(even, even) + _products(odd, odd), shape=(n, n))
        new_odd_mats = odd.basis + _products(even, odd) + _products(odd, even)
        new_odd = (Subspace.from_spanning(new_odd_mats, shape=(n, n))
                   if new_odd_mats else odd)
        if new_even.dim == even.dim and new_odd.dim == odd.dim:
            even, odd = new_even, new_odd
            break
        even, odd = new_even, new_odd

    total = even.union(odd)
    cross = generated_algebra(
        triple.pi_images + [triple.dirac_commutator(b) for b in triple.algebra.basis],
        include_unit=True)
    rep = Report(f"c_d_algebra[{triple.label or 'triple'}]",
                 context={"even_dim": even.dim, "odd_dim": odd.dim, "total_dim": total.dim,
                          "grading_consistent": even.dim + odd.dim == total.dim})
    rep.add(CheckRecord.from_residual(
        "generated-closure", "the graded closure equals the two-sided generated span",
        float(abs(total.dim - cross.dim)), 0.5, SCOPE_EXACT))

    algebra = FiniteStarAlgebra(total.basis, np.eye(n, dtype=complex),
                                label=f"C_D({triple.label or 'A'})")
    triple._cd = (algebra, rep)
    return triple._cd


def compute_aj(triple: RealSpectralTriple) -> FiniteStarAlgebra:
    """The subalgebra {a : aJ = Ja*}, cut out by pi(a) K = K transpose(pi(a)).

    Solved as a nullspace inside A and wrapped as a *-algebra; closure of
    the wrap is re-verified, so a kernel K violating the axioms can make
    this raise :class:`~ncgauge.staralg.NotClosed`.
    """
    if triple._aj is not None:
        return triple._aj
    k = triple.real_structure.kernel
    images = [triple.pi_images[i] @ k - k @ triple.pi_images[i].T
              for i in range(triple.algebra.dim)]
    sub = nullspace(triple.algebra.basis, images)
    if sub.dim == 0:
        raise NotClosed("the real-structure condition has trivial solution space")
    alg = FiniteStarAlgebra(sub.basis, triple.algebra.unit,
                            label=f"A_J({triple.label or 'A'})")
    triple._aj = alg
    return alg


def verify_aj_properties(triple: RealSpectralTriple, tol: float = TOL_DERIVED) -> Report:
    """The structural facts about A_J, with the real-structure premise.

    The three headline assertions (central, *-closed, commutes with
    one-forms) are all trivially true of the scalar algebra, so a
    corrupted real structure that merely shrinks A_J would slip through
    them; the premise record pins the J axioms themselves.
    """
    n = triple.hilbert_dim
    k = triple.real_structure.kernel
    d = triple.dirac
    rep = Report(f"aj_properties[{triple.label or 'triple'}]")
    premise = max(
        triple.real_structure.unitarity_residual(),
        op_norm(k @ np.conj(k) - triple.eps * np.eye(n)),
        op_norm(k @ np.conj(d) - triple.eps_prime * d @ k),
    )
    rep.add(CheckRecord.from_residual(
        "real-structure-premise", "the real-structure axioms behind the construction hold",
        premise, tol, SCOPE_EXACT))
    try:
        aj = compute_aj(triple)
    except NotClosed as exc:
        rep.add(CheckRecord("subalgebra-closure", "the solution span is a *-algebra",
                            float("inf"), tol, False, SCOPE_EXACT))
        rep.context["closure_error"] = str(exc)
        return rep

    rep.context["aj_dim"] = aj.dim
    worst = max(op_norm(triple.pi(a) @ k - k @ triple.pi(a).T) for a in aj.basis)
    rep.add(CheckRecord.from_residual(
        "defining-condition", "every returned element satisfies aJ = Ja*",
        worst, tol, SCOPE_EXACT))

    z = center(triple.algebra)
    worst = max(z.residual(a) for a in aj.basis)
    rep.add(CheckRecord.from_residual(
        "inside-center", "A_J sits inside the center of A", worst, tol, SCOPE_EXACT))

    worst = max(aj.residual(adjoint(a)) for a in aj.basis)
    rep.add(CheckRecord.from_residual(
        "star-closed", "A_J is closed under the adjoint", worst, tol, SCOPE_EXACT))

    omega = one_form_space(triple)
    if omega.dim == 0:
        worst = 0.0
    else:
        worst = max(op_norm(commutator(triple.pi(a), w))
                    for a in aj.basis for w in omega.basis)
    rep.add(CheckRecord.from_residual(
        "commutes-with-one-forms", "A_J commutes with every one-form a[D,b]",
        worst, tol, SCOPE_EXACT))
    return rep


# -- unitary equivalence -----------------------------------------------------


def unitary_equivalent(t1: RealSpectralTriple, t2: RealSpectralTriple,
                       u: np.ndarray, tol: float = TOL_DERIVED) -> Report:
    """Whether u intertwines the two triples: representation, D, and J.

    The J condition in kernel form is U K1 transpose(U) = K2: conjugating
    the anti-linear J by a linear unitary transposes, it does not adjoint.
    """
    u = as_cmatrix(u)
    if t1.hilbert_dim != t2.hilbert_dim or u.shape != (t1.hilbert_dim, t1.hilbert_dim):
        raise DimensionMismatch("triples/conjugator disagree on the Hilbert dimension")
    rep = Report("unitary_equivalence")
    rep.add(CheckRecord.from_residual(
        "conjugator-unitary", "U U* = 1",
        op_norm(u @ adjoint(u) - np.eye(t1.hilbert_dim)), 1e-9, SCOPE_EXACT))
    worst = max(op_norm(u @ t1.pi_images[i] @ adjoint(u) - t2.pi(b))
                for i, b in enumerate(t1.algebra.basis))
    rep.add(CheckRecord.from_residual(
        "intertwines-representation", "U pi1(a) U* = pi2(a) on a basis",
        worst, tol, SCOPE_EXACT))
    rep.add(CheckRecord.from_residual(
        "intertwines-dirac", "U D1 U* = D2",
        op_norm(u @ t1.dirac @ adjoint(u) - t2.dirac), tol, SCOPE_EXACT))
    rep.add(CheckRecord.from_residual(
        "intertwines-real-structure", "U J1 U* = J2 as kernels: U K1 transpose(U) = K2",
        op_norm(u @ t1.real_structure.kernel @ u.T - t2.real_structure.kernel),
        tol, SCOPE_EXACT))
    return rep


def conjugate_triple(triple: RealSpectralTriple, u: np.ndarray, label: str = "") -> RealSpectralTriple:
    """The triple carried along a unitary of H: same A, conjugated pi, D, J."""
    u = as_cmatrix(u)
    n = triple.hilbert_dim
    if op_norm(u @ adjoint(u) - np.eye(n)) > 1e-9:
        raise SpectralInputError("conjugator is not unitary")
    return RealSpectralTriple(
        triple.algebra,
        [u @ m @ adjoint(u) for m in triple.pi_images],
        u @ triple.dirac @ adjoint(u),
        AntiLinearOp(u @ triple.real_structure.kernel @ u.T),
        eps=triple.eps, eps_prime=triple.eps_prime,
        label=label or (triple.label + "~conj" if triple.label else "conjugated"),
    )
