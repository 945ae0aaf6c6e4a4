"""Polynomial algebras of the toric 3- and 4-spheres.

Generators: alpha, beta (and their stars) plus, for the 4-sphere, a
central self-adjoint x.  The two pairs each commute internally
(alpha alpha* = alpha* alpha, same for beta); the cross relations twist
by the torus phase t:

    beta  alpha  = t   alpha  beta       beta  alpha* = t^-1 alpha* beta
    beta* alpha  = t^-1 alpha  beta*     beta* alpha* = t    alpha* beta*

Monomials are kept in the normal order alpha^a alpha*^a' beta^b beta*^b'
x^c with exponents in N, so an element is a dict mapping the 5-tuple
(a, a', b, b', c) to a :class:`~ncgauge.torus.PhaseScalar` coefficient.
Reordering a product only needs the net alpha-degree of the right factor
to cross the net beta-degree of the left factor:

    phase exponent = (b1 - b1') * (a2 - a2')

The sphere relation alpha alpha* + beta beta* (+ x^2) = 1 is never used
to rewrite monomials; it is only checked under the matrix evaluation
maps, which satisfy it identically.  3-sphere elements are the ones with
no x letter (c = 0 throughout).
"""

from __future__ import annotations

from .torus import ModeMismatch, PhaseMode, PhaseScalar

__all__ = [
    "SphereElement",
    "sphere_one",
    "sphere_alpha",
    "sphere_beta",
    "sphere_x",
    "invariant_monomial",
]

MonKey = tuple[int, int, int, int, int]


class SphereElement:
    """Finite sum of normal-ordered monomials over PhaseScalar coefficients."""

    __slots__ = ("mode", "terms")

    def __init__(self, mode: PhaseMode, terms: dict[MonKey, PhaseScalar] | None = None):
        self.mode = mode
        self.terms: dict[MonKey, PhaseScalar] = {}
        for key, c in (terms or {}).items():
            key = tuple(int(e) for e in key)
            if len(key) != 5 or any(e < 0 for e in key):
                raise ValueError(f"monomial exponents must be 5 nonnegative integers, got {key}")
            if c.mode != mode:
                raise ModeMismatch("coefficient mode differs from element mode")
            if not c.is_zero():
                self.terms[key] = c

    @classmethod
    def monomial(cls, mode: PhaseMode, key: MonKey, coeff=1.0) -> "SphereElement":
        c = coeff if isinstance(coeff, PhaseScalar) else PhaseScalar.const(mode, coeff)
        return cls(mode, {tuple(key): c})

    def _check(self, other: "SphereElement") -> None:
        if self.mode != other.mode:
            raise ModeMismatch(f"{self.mode} vs {other.mode}")

    def __add__(self, other: "SphereElement") -> "SphereElement":
        self._check(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out[k] + c if k in out else c
        return SphereElement(self.mode, out)

    def __neg__(self) -> "SphereElement":
        return SphereElement(self.mode, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "SphereElement") -> "SphereElement":
        return self + (-other)

    def scale(self, c) -> "SphereElement":
        s = c if isinstance(c, PhaseScalar) else PhaseScalar.const(self.mode, c)
        return SphereElement(self.mode, {k: s * v for k, v in self.terms.items()})

    def __mul__(self, other: "SphereElement") -> "SphereElement":
        self._check(other)
        out: dict[MonKey, PhaseScalar] = {}
        for (a1, a1p, b1, b1p, c1), u in self.terms.items():
            for (a2, a2p, b2, b2p, c2), v in other.terms.items():
                key = (a1 + a2, a1p + a2p, b1 + b2, b1p + b2p, c1 + c2)
                phase = PhaseScalar.t_power(self.mode, (b1 - b1p) * (a2 - a2p))
                contrib = u * v * phase
                out[key] = out[key] + contrib if key in out else contrib
        return SphereElement(self.mode, out)

    def adjoint(self) -> "SphereElement":
        """Star: flip each exponent pair, then re-normal-order the alpha block.

        (alpha^a alpha*^a' beta^b beta*^b' x^c)* reverses to the beta block
        first; pushing alpha*^a alpha^a' back to the left crosses net
        beta-degree (b' - b), giving phase t^((b'-b)(a'-a)) on top of the
        conjugated coefficient.
        """
        out: dict[MonKey, PhaseScalar] = {}
        for (a, ap, b, bp, c), u in self.terms.items():
            key = (ap, a, bp, b, c)
            contrib = u.conj() * PhaseScalar.t_power(self.mode, (bp - b) * (ap - a))
            out[key] = out[key] + contrib if key in out else contrib
        return SphereElement(self.mode, out)

    @property
    def support(self) -> set[MonKey]:
        return set(self.terms)

    def coefficient(self, key: MonKey) -> PhaseScalar:
        return self.terms.get(tuple(key), PhaseScalar(self.mode))

    def is_zero(self, tol: float = 1e-14) -> bool:
        return all(c.is_zero(tol) for c in self.terms.values())

    def allclose(self, other: "SphereElement", tol: float = 1e-12) -> bool:
        self._check(other)
        keys = set(self.terms) | set(other.terms)
        zero = PhaseScalar(self.mode)
        return all(
            self.terms.get(k, zero).allclose(other.terms.get(k, zero), tol) for k in keys
        )

    @property
    def uses_x(self) -> bool:
        return any(k[4] > 0 for k in self.terms)

    @property
    def is_torus_invariant(self) -> bool:
        """True when every monomial balances alpha against alpha*, beta against beta*."""
        return all(a == ap and b == bp for (a, ap, b, bp, _) in self.terms)

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        names = ("a", "ad", "b", "bd", "x")
        bits = []
        for key in sorted(self.terms):
            mon = "*".join(f"{n}^{e}" for n, e in zip(names, key) if e) or "1"
            bits.append(f"[{self.terms[key]!r}]*{mon}")
        return " + ".join(bits)


def sphere_one(mode: PhaseMode) -> SphereElement:
    return SphereElement.monomial(mode, (0, 0, 0, 0, 0))


def sphere_alpha(mode: PhaseMode) -> SphereElement:
    return SphereElement.monomial(mode, (1, 0, 0, 0, 0))


def sphere_beta(mode: PhaseMode) -> SphereElement:
    return SphereElement.monomial(mode, (0, 0, 1, 0, 0))


def sphere_x(mode: PhaseMode) -> SphereElement:
    return SphereElement.monomial(mode, (0, 0, 0, 0, 1))


def invariant_monomial(mode: PhaseMode, a: int, b: int, c: int = 0) -> SphereElement:
    """The torus-invariant monomial (alpha alpha*)^a (beta beta*)^b x^c."""
    return SphereElement.monomial(mode, (a, a, b, b, c))
