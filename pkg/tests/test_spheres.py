import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ncgauge.spheres import (
    SphereElement,
    invariant_monomial,
    sphere_alpha,
    sphere_beta,
    sphere_one,
    sphere_x,
)
from ncgauge.torus import SYMBOLIC, ModeMismatch, PhaseScalar, rational_mode

# ---------------------------------------------------------------------------
# oracle: letters with explicit bubble-sort reordering
# ---------------------------------------------------------------------------

RANK = {"a": 0, "A": 1, "b": 2, "B": 3, "x": 4}
GROUP = {"a": ("alpha", 0), "A": ("alpha", 1), "b": ("beta", 0), "B": ("beta", 1),
         "x": ("x", 0)}


def word_of(key):
    a, ap, b, bp, c = key
    return ["a"] * a + ["A"] * ap + ["b"] * b + ["B"] * bp + ["x"] * c


def swap_cost(left, right):
    """Phase power for moving ``right`` one slot to the left past ``left``."""
    gl, sl = GROUP[left]
    gr, sr = GROUP[right]
    if gl == "beta" and gr == "alpha":
        return 1 if sl == sr else -1
    return 0


def normal_order(word):
    letters = list(word)
    power = 0
    changed = True
    while changed:
        changed = False
        for i in range(len(letters) - 1):
            if RANK[letters[i]] > RANK[letters[i + 1]]:
                power += swap_cost(letters[i], letters[i + 1])
                letters[i], letters[i + 1] = letters[i + 1], letters[i]
                changed = True
    key = tuple(letters.count(ch) for ch in "aAbBx")
    return key, power


def star_word(word):
    flip = {"a": "A", "A": "a", "b": "B", "B": "b", "x": "x"}
    return [flip[ch] for ch in reversed(word)]


small = st.integers(min_value=0, max_value=2)
keys = st.tuples(small, small, small, small, small)


@given(keys, keys)
def test_product_phase_matches_swap_oracle(k1, k2):
    e = SphereElement.monomial(SYMBOLIC, k1)
    f = SphereElement.monomial(SYMBOLIC, k2)
    key, power = normal_order(word_of(k1) + word_of(k2))
    prod = e * f
    assert prod.support == {key}
    assert prod.coefficient(key).allclose(PhaseScalar.t_power(SYMBOLIC, power))


@given(keys)
def test_adjoint_matches_swap_oracle(k):
    e = SphereElement.monomial(SYMBOLIC, k)
    key, power = normal_order(star_word(word_of(k)))
    st_e = e.adjoint()
    assert st_e.support == {key}
    assert st_e.coefficient(key).allclose(PhaseScalar.t_power(SYMBOLIC, power))


def small_elements(mode):
    coeff = st.complex_numbers(max_magnitude=2, allow_nan=False, allow_infinity=False)

    def build(pairs):
        out = SphereElement(mode)
        for key, c in pairs:
            out = out + SphereElement.monomial(mode, key).scale(c)
        return out

    return st.lists(st.tuples(keys, coeff), min_size=1, max_size=3).map(build)


@settings(max_examples=50)
@given(small_elements(SYMBOLIC), small_elements(SYMBOLIC), small_elements(SYMBOLIC))
def test_associativity_and_distributivity(e, f, g):
    assert ((e * f) * g).allclose(e * (f * g), tol=1e-9)
    assert (e * (f + g)).allclose(e * f + e * g, tol=1e-9)


@settings(max_examples=50)
@given(small_elements(SYMBOLIC), small_elements(SYMBOLIC))
def test_star_antimultiplicative(e, f):
    assert (e * f).adjoint().allclose(f.adjoint() * e.adjoint(), tol=1e-9)
    assert e.adjoint().adjoint().allclose(e, tol=1e-12)


def test_cross_relations():
    al, be = sphere_alpha(SYMBOLIC), sphere_beta(SYMBOLIC)
    ad, bd = al.adjoint(), be.adjoint()
    one_t = PhaseScalar.t_power(SYMBOLIC, 1)
    one_tinv = PhaseScalar.t_power(SYMBOLIC, -1)
    ba = be * al
    assert ba.coefficient((1, 0, 1, 0, 0)).allclose(one_t)
    bad = be * ad
    assert bad.coefficient((0, 1, 1, 0, 0)).allclose(one_tinv)
    bda = bd * al
    assert bda.coefficient((1, 0, 0, 1, 0)).allclose(one_tinv)
    bdad = bd * ad
    assert bdad.coefficient((0, 1, 0, 1, 0)).allclose(one_t)


def test_pairs_commute_internally_and_x_is_central():
    al, be, x = sphere_alpha(SYMBOLIC), sphere_beta(SYMBOLIC), sphere_x(SYMBOLIC)
    assert (al * al.adjoint() - al.adjoint() * al).is_zero()
    assert (be * be.adjoint() - be.adjoint() * be).is_zero()
    for g in (al, be, al.adjoint(), be.adjoint()):
        assert (x * g - g * x).is_zero()


def test_sphere_relation_is_not_a_rewrite():
    al, be = sphere_alpha(SYMBOLIC), sphere_beta(SYMBOLIC)
    rel = al * al.adjoint() + be * be.adjoint() - sphere_one(SYMBOLIC)
    assert not rel.is_zero()


def test_uses_x_and_invariance_flags():
    al = sphere_alpha(SYMBOLIC)
    assert not al.uses_x
    assert sphere_x(SYMBOLIC).uses_x
    assert not al.is_torus_invariant
    assert invariant_monomial(SYMBOLIC, 1, 2, 3).is_torus_invariant
    assert invariant_monomial(SYMBOLIC, 1, 2).support == {(1, 1, 2, 2, 0)}


def test_mode_mixing_rejected():
    with pytest.raises(ModeMismatch):
        sphere_alpha(SYMBOLIC) * sphere_alpha(rational_mode(1, 2))


def test_negative_or_short_keys_rejected():
    with pytest.raises(ValueError):
        SphereElement.monomial(SYMBOLIC, (1, -1, 0, 0, 0))
    with pytest.raises(ValueError):
        SphereElement.monomial(SYMBOLIC, (1, 0, 0))
