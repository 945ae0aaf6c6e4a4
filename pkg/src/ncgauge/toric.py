"""Rational-parameter matrix fibers of the toric 3- and 4-spheres.

Base points carry the angles and a pair of unit torus coordinates; at
rational phase p/q every sphere polynomial evaluates into M_q through

    alpha -> (cos chi [cos psi]) z1 R1      beta -> (sin chi [cos psi]) z2 R2
    x     -> (sin psi) 1                    (4-sphere only)

with (R1, R2) the clock/shift pair.  The stratum of a base point is read
off from which radii vanish, and the fiber at a point is the algebra
generated by the evaluated generators; its dimension depends only on
the stratum (scaling a generator by a nonzero scalar never changes a
generated span).  Norms at a point are maximized over the q*q
root-of-unity torus coordinates, which at rational phase exhausts the
fiber norm.

The numbers produced here are rational shadows: the irrational-phase
fibers are infinite-dimensional algebras this module cannot represent,
and the grid statistics are continuity evidence, not proofs.  Reports
carry those scope labels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import generated_algebra, op_norm
from .reporting import SCOPE_CONTINUITY, SCOPE_RATIONAL, CheckRecord, Report
from .spheres import SphereElement, sphere_one
from .torus import (
    ModeMismatch,
    NotOnTorus,
    PhaseMode,
    TorusElement,
    VanishingTrace,
    clock_shift,
    phase_map,
    rational_mode,
    torus_rep,
    trace_state,
)

__all__ = [
    "BasePoint3",
    "BasePoint4",
    "stratum3",
    "stratum4",
    "s3_eval",
    "s4_eval",
    "s3_fiber_dimension",
    "s4_fiber_dimension",
    "invariant_subalgebra",
    "fiber_norm3",
    "fiber_norm4",
    "norm_profile",
    "jump_ratio",
    "covering_slice_check",
    "stratum_scan",
    "continuity_report",
]

_RADIUS_TOL = 1e-12
_FLAT_JUMP = 1e-12


def _check_unit(z: complex) -> complex:
    if abs(abs(z) - 1.0) > 1e-12:
        raise NotOnTorus(f"|z| = {abs(z)!r} is not 1")
    return complex(z)


@dataclass(frozen=True)
class BasePoint3:
    """Angle chi in [0, pi/2] plus torus coordinates."""

    chi: float
    z1: complex = 1.0
    z2: complex = 1.0

    def __post_init__(self):
        if not 0.0 <= self.chi <= math.pi / 2:
            raise ValueError(f"chi = {self.chi} outside [0, pi/2]")
        object.__setattr__(self, "z1", _check_unit(self.z1))
        object.__setattr__(self, "z2", _check_unit(self.z2))

    @property
    def radii(self) -> tuple[float, float]:
        return (math.cos(self.chi), math.sin(self.chi))


@dataclass(frozen=True)
class BasePoint4:
    """Angles (chi, psi) in [0, pi/2]^2 with (r, s, x) derived."""

    chi: float
    psi: float
    z1: complex = 1.0
    z2: complex = 1.0

    def __post_init__(self):
        for name, v in (("chi", self.chi), ("psi", self.psi)):
            if not 0.0 <= v <= math.pi / 2:
                raise ValueError(f"{name} = {v} outside [0, pi/2]")
        object.__setattr__(self, "z1", _check_unit(self.z1))
        object.__setattr__(self, "z2", _check_unit(self.z2))

    @property
    def rsx(self) -> tuple[float, float, float]:
        return (math.cos(self.chi) * math.cos(self.psi),
                math.sin(self.chi) * math.cos(self.psi),
                math.sin(self.psi))


def _stratum_from_radii(r: float, s: float, allow_pole: bool) -> tuple[str, str]:
    """Label plus the fiber-dimension law 'q2' | 'q' | '1'."""
    r0 = abs(r) < _RADIUS_TOL
    s0 = abs(s) < _RADIUS_TOL
    if r0 and s0:
        if not allow_pole:
            raise ValueError("both radii vanish on the 3-sphere")
        return "Pole", "1"
    if s0:
        return "EdgeAlpha", "q"
    if r0:
        return "EdgeBeta", "q"
    return "Interior", "q2"


def _expected_dim(law: str, q: int) -> int:
    return {"q2": q * q, "q": q, "1": 1}[law]


def stratum3(pt: BasePoint3, q: int) -> tuple[str, int]:
    r, s = pt.radii
    label, law = _stratum_from_radii(r, s, allow_pole=False)
    return label, _expected_dim(law, q)


def stratum4(pt: BasePoint4, q: int) -> tuple[str, int]:
    r, s, _ = pt.rsx
    label, law = _stratum_from_radii(r, s, allow_pole=True)
    return label, _expected_dim(law, q)


def _mode_of(e: SphereElement, p: int, q: int) -> PhaseMode:
    mode = rational_mode(p, q)
    if e.mode != mode:
        raise ModeMismatch(f"element mode {e.mode} does not match ({p}, {q})")
    return mode


def _eval_monomials(e: SphereElement, ra: float, rb: float, rx: float,
                    z1: complex, z2: complex, q: int, p: int) -> np.ndarray:
    r1, r2 = clock_shift(q, p)
    pow1 = [np.eye(q, dtype=complex)]
    pow2 = [np.eye(q, dtype=complex)]
    for _ in range(q - 1):
        pow1.append(pow1[-1] @ r1)
        pow2.append(pow2[-1] @ r2)
    out = np.zeros((q, q), dtype=complex)
    for (a, ap, b, bp, c), coeff in e.terms.items():
        scalar = (coeff.value() * ra ** (a + ap) * rb ** (b + bp) * rx ** c
                  * z1 ** (a - ap) * z2 ** (b - bp))
        out += scalar * (pow1[(a - ap) % q] @ pow2[(b - bp) % q])
    return out


def s3_eval(e: SphereElement, pt: BasePoint3, p: int, q: int) -> np.ndarray:
    """Evaluate a 3-sphere polynomial at a base point; x-letters are rejected."""
    _mode_of(e, p, q)
    if e.uses_x:
        raise ValueError("3-sphere elements cannot contain the x letter")
    r, s = pt.radii
    return _eval_monomials(e, r, s, 1.0, pt.z1, pt.z2, q, p)


def s4_eval(e: SphereElement, pt: BasePoint4, p: int, q: int) -> np.ndarray:
    _mode_of(e, p, q)
    r, s, x = pt.rsx
    return _eval_monomials(e, r, s, x, pt.z1, pt.z2, q, p)


def _fiber_dim(gens: list[np.ndarray]) -> int:
    return generated_algebra(gens, include_unit=True).dim


def s3_fiber_dimension(chi: float, p: int, q: int,
                       z1: complex = 1.0, z2: complex = 1.0) -> int:
    """Dimension of the algebra generated by the evaluated generators.

    Computed honestly from the given data, including the torus
    coordinates, so independence from z is a checkable statement rather
    than a baked-in assumption.
    """
    pt = BasePoint3(chi, z1, z2)
    r1, r2 = clock_shift(q, p)
    r, s = pt.radii
    return _fiber_dim([r * pt.z1 * r1, s * pt.z2 * r2])


def s4_fiber_dimension(chi: float, psi: float, p: int, q: int,
                       z1: complex = 1.0, z2: complex = 1.0) -> int:
    pt = BasePoint4(chi, psi, z1, z2)
    r1, r2 = clock_shift(q, p)
    r, s, x = pt.rsx
    return _fiber_dim([r * pt.z1 * r1, s * pt.z2 * r2, x * np.eye(q, dtype=complex)])


def invariant_subalgebra(mode: PhaseMode, degree: int, which: str = "s3") -> list[SphereElement]:
    """Monomials fixed by the torus action, up to the degree bound.

    The rotation (alpha, beta) -> (e^{it1} alpha, e^{it2} beta) scales a
    monomial by e^{i(t1(a - a') + t2(b - b'))}, so the fixed monomials
    are the balanced ones (alpha alpha*)^a (beta beta*)^b x^c with
    a + b + c <= degree (x only on the 4-sphere).  The returned family
    commutes: balanced monomials carry zero net degree, so every
    reordering phase exponent vanishes.
    """
    if which not in ("s3", "s4"):
        raise ValueError("which must be 's3' or 's4'")
    if degree < 0:
        raise ValueError("degree bound must be >= 0")
    out = []
    for a in range(degree + 1):
        for b in range(degree + 1 - a):
            c_range = range(degree + 1 - a - b) if which == "s4" else (0,)
            for c in c_range:
                out.append(SphereElement.monomial(mode, (a, a, b, b, c)))
    for i, e in enumerate(out):
        for f in out[i + 1:]:
            if not (e * f - f * e).is_zero():
                raise ArithmeticError("invariant monomials failed to commute")
    return out


def _root_points(q: int) -> list[tuple[complex, complex]]:
    roots = [np.exp(2j * np.pi * k / q) for k in range(q)]
    return [(z1, z2) for z1 in roots for z2 in roots]


def fiber_norm3(e: SphereElement, chi: float, p: int, q: int) -> float:
    """Max evaluation norm over the q^2 root-of-unity torus points."""
    return max(op_norm(s3_eval(e, BasePoint3(chi, z1, z2), p, q))
               for z1, z2 in _root_points(q))


def fiber_norm4(e: SphereElement, chi: float, psi: float, p: int, q: int) -> float:
    return max(op_norm(s4_eval(e, BasePoint4(chi, psi, z1, z2), p, q))
               for z1, z2 in _root_points(q))


def _grid_count(h: float) -> int:
    if h <= 0:
        raise ValueError("grid step must be positive")
    return max(1, round((math.pi / 2) / h))


def _max_jump(values: np.ndarray) -> float:
    if values.ndim == 1:
        return float(np.abs(np.diff(values)).max()) if values.size > 1 else 0.0
    return float(max(np.abs(np.diff(values, axis=0)).max(initial=0.0),
                     np.abs(np.diff(values, axis=1)).max(initial=0.0)))


def _jump_stats(h: float, fine: np.ndarray, points: int) -> dict:
    coarse = fine[::2] if fine.ndim == 1 else fine[::2, ::2]
    big = _max_jump(coarse)
    small = _max_jump(fine)
    ratio = small / big if big > 0 else (0.0 if small == 0 else float("inf"))
    return {"h": h, "points": points, "max_jump": big,
            "max_jump_half_step": small, "jump_ratio": ratio}


def norm_profile(e: SphereElement, h: float, p: int, q: int,
                 which: str = "s3") -> tuple[list[dict], dict]:
    """Fiber norms over an angle grid, with a two-resolution jump statistic.

    Returns (rows, stats).  Rows carry the base coordinates, the norm,
    the stratum label, and the honestly computed fiber dimension at step
    h.  Stats holds the maximal adjacent norm jump at steps h and h/2
    (the fine grid contains the coarse one exactly) and their ratio;
    jumps shrinking roughly in half is continuity evidence, a ratio near
    1 flags a discontinuity.
    """
    _mode_of(e, p, q)
    n = _grid_count(h)
    angles = np.linspace(0.0, math.pi / 2, 2 * n + 1)
    rows = []
    if which == "s3":
        fine = np.array([fiber_norm3(e, chi, p, q) for chi in angles])
        for i in range(0, 2 * n + 1, 2):
            chi = float(angles[i])
            label, _ = stratum3(BasePoint3(chi), q)
            rows.append({
                "chi": chi, "r": math.cos(chi), "s": math.sin(chi), "x": 0.0,
                "norm": float(fine[i]), "stratum": label,
                "fiber_dim": s3_fiber_dimension(chi, p, q),
            })
    elif which == "s4":
        fine = np.array([[fiber_norm4(e, chi, psi, p, q) for psi in angles]
                         for chi in angles])
        for i in range(0, 2 * n + 1, 2):
            for j in range(0, 2 * n + 1, 2):
                pt = BasePoint4(float(angles[i]), float(angles[j]))
                label, _ = stratum4(pt, q)
                r, s, x = pt.rsx
                rows.append({
                    "chi": pt.chi, "psi": pt.psi, "r": r, "s": s, "x": x,
                    "norm": float(fine[i, j]), "stratum": label,
                    "fiber_dim": s4_fiber_dimension(pt.chi, pt.psi, p, q),
                })
    else:
        raise ValueError("which must be 's3' or 's4'")
    return rows, _jump_stats(h, fine, len(rows))


def jump_ratio(e: SphereElement, h: float, p: int, q: int, which: str = "s3") -> dict:
    """The two-resolution jump statistic alone, without the row table."""
    _, stats = norm_profile(e, h, p, q, which)
    return stats


def covering_slice_check(u: TorusElement, p: int, q: int, tol: float = 1e-8) -> Report:
    """Phase-of-trace diagnostics for a torus element.

    Computes phi(u) = tau(u)/|tau(u)| when the trace does not vanish,
    verifies unitarity of the matrix evaluations at the root-of-unity
    points, and runs the kernel argument at matrix scale: an element
    that is a scalar within tolerance and has phase 1 must be the unit.
    When the trace vanishes the phase is undefined and the report says
    so instead of guessing.
    """
    mode = rational_mode(p, q)
    if u.mode != mode:
        raise ModeMismatch(f"element mode {u.mode} does not match ({p}, {q})")
    rep = Report("covering_slice", context={"mode": str(u.mode)})
    worst = 0.0
    for z1, z2 in _root_points(q):
        m = torus_rep(u, z1, z2)
        worst = max(worst, op_norm(m @ m.conj().T - np.eye(q)))
    rep.add(CheckRecord.from_residual(
        "unitary-at-samples", "the matrix evaluations of u are unitary",
        worst, tol, SCOPE_RATIONAL))

    try:
        phi = phase_map(u)
    except VanishingTrace:
        rep.context["applicable"] = False
        rep.context["note"] = "trace numerically zero; the phase map is undefined here"
        rep.add(CheckRecord(
            "kernel-argument", "a scalar element with trivial phase is the unit "
            "(inapplicable: the trace vanishes)",
            0.0, tol, True, SCOPE_RATIONAL))
        return rep
    rep.context["applicable"] = True
    rep.context["phase"] = phi

    off_scalar = 0.0
    for key, c in u.terms.items():
        if key != (0, 0):
            off_scalar = max(off_scalar, abs(c.value()))
    is_scalar = off_scalar <= tol
    phase_is_one = abs(phi - 1.0) <= tol
    if is_scalar and phase_is_one:
        dist = abs(trace_state(u).value() - 1.0) + off_scalar
        rep.add(CheckRecord.from_residual(
            "kernel-argument", "a scalar element with trivial phase is the unit",
            dist, 1e-7, SCOPE_RATIONAL))
    else:
        rep.add(CheckRecord(
            "kernel-argument", "a scalar element with trivial phase is the unit "
            "(vacuous here: premise not met)",
            0.0, tol, True, SCOPE_RATIONAL))
        rep.context["kernel_premise"] = {"is_scalar": is_scalar,
                                         "phase_is_one": phase_is_one}
    return rep


def stratum_scan(p: int, q: int, which: str = "s3") -> Report:
    """Fiber dimensions per stratum, checked over all q^2 torus points.

    A representative angle per stratum is scanned across every
    root-of-unity coordinate pair; the dimension must match the stratum
    law and never depend on the coordinates.
    """
    rep = Report(f"strata[{which},p={p},q={q}]", context={
        "p": p, "q": q,
        "scope_note": "rational-parameter shadow: at irrational parameter the "
                      "interior fibers are infinite-dimensional and cannot be "
                      "represented here; only the rational dimensions are computed",
    })
    interior = math.pi / 4
    if which == "s3":
        cases = [("EdgeAlpha", (0.0,)), ("EdgeBeta", (math.pi / 2,)),
                 ("Interior", (interior,))]
        def dim_at(angles, z1, z2):
            return s3_fiber_dimension(*angles, p, q, z1=z1, z2=z2)
        def expected(angles):
            return stratum3(BasePoint3(*angles), q)
    elif which == "s4":
        cases = [("EdgeAlpha", (0.0, interior)), ("EdgeBeta", (math.pi / 2, interior)),
                 ("Interior", (interior, interior)), ("Pole", (interior, math.pi / 2))]
        def dim_at(angles, z1, z2):
            return s4_fiber_dimension(*angles, p, q, z1=z1, z2=z2)
        def expected(angles):
            return stratum4(BasePoint4(*angles), q)
    else:
        raise ValueError("which must be 's3' or 's4'")

    dims = {}
    for label, angles in cases:
        got_label, want = expected(angles)
        seen = {dim_at(angles, z1, z2) for z1, z2 in _root_points(q)}
        dims[label] = sorted(seen)
        rep.add(CheckRecord.from_residual(
            f"stratum-{label}", f"the {label} fiber dimension is {want} at every "
            "torus coordinate",
            float(0 if seen == {want} and got_label == label else 1), 0.5,
            SCOPE_RATIONAL))
    rep.context["dims"] = dims
    return rep


def continuity_report(polynomials: list[SphereElement], h: float, p: int, q: int,
                      which: str = "s3", lo: float = 0.3, hi: float = 0.7) -> Report:
    """Jump-halving evidence for a family of polynomials.

    Each record passes when the fine/coarse jump ratio falls inside
    [lo, hi]; a constant profile (zero jumps) counts as continuous.
    """
    rep = Report(f"continuity[{which},p={p},q={q},h={h}]", context={
        "h": h, "p": p, "q": q,
        "scope_note": "grid statistics are evidence for norm continuity over the "
                      "base, not a proof",
    })
    ratios = []
    for i, e in enumerate(polynomials):
        stats = jump_ratio(e, h, p, q, which)
        ratios.append(stats)
        # a flat profile only jumps by float noise; its ratio is meaningless
        if stats["max_jump"] <= _FLAT_JUMP and stats["max_jump_half_step"] <= _FLAT_JUMP:
            ok = True
            resid = 0.0
        else:
            ok = lo <= stats["jump_ratio"] <= hi
            resid = abs(stats["jump_ratio"] - 0.5)
        rep.add(CheckRecord(
            f"jump-halving-{i}", "halving the grid step roughly halves the largest "
            "adjacent norm jump",
            resid, hi - 0.5, ok, SCOPE_CONTINUITY))
    rep.context["ratios"] = ratios
    return rep
