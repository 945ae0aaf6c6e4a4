import numpy as np
import pytest

from ncgauge.linalg import AntiLinearOp, adjoint, commutator, op_norm
from ncgauge.models import build_finite_ym, build_hs_model, triple_from_config
from ncgauge.spectral import (
    DimensionMismatch,
    OneForm,
    RealSpectralTriple,
    SpectralInputError,
    c_d_algebra,
    check_axioms,
    compute_aj,
    conjugate_triple,
    one_form_space,
    transpose_permutation,
    unitary_equivalent,
    verify_aj_properties,
)
from ncgauge.staralg import AlgebraError, full_matrix_algebra, random_unitary


def test_transpose_permutation_acts_on_vec():
    rng = np.random.default_rng(0)
    for n in (2, 3):
        p = transpose_permutation(n)
        m = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        assert np.allclose(p @ m.reshape(-1), m.T.reshape(-1))
        assert np.allclose(p @ p, np.eye(n * n))


def functional_opposite(triple, b):
    """Oracle: J pi(b)* J^-1 evaluated column by column through the
    anti-linear action, never through the kernel identity being tested."""
    j = triple.real_structure
    pb_star = adjoint(triple.pi(b))
    n = triple.hilbert_dim
    cols = []
    for i in range(n):
        v = np.zeros(n, dtype=complex)
        v[i] = 1.0
        cols.append(j.apply(pb_star @ j.apply_inverse(v)))
    return np.stack(cols, axis=1)


def test_opposite_action_matches_functional_oracle():
    t = build_hs_model(2, seed=3)
    rng = np.random.default_rng(5)
    for _ in range(4):
        b = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        assert op_norm(t.b_opposite(b) - functional_opposite(t, b)) < 1e-12


def test_j_conjugate_matches_functional_oracle():
    t = build_hs_model(2, seed=3)
    rng = np.random.default_rng(6)
    m = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    j = t.real_structure
    cols = []
    for i in range(4):
        v = np.zeros(4, dtype=complex)
        v[i] = 1.0
        cols.append(j.apply(m @ j.apply_inverse(v)))
    assert op_norm(t.j_conjugate(m) - np.stack(cols, axis=1)) < 1e-12


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_hs_axioms(n):
    rep = check_axioms(build_hs_model(n, seed=n))
    assert rep.passed
    assert rep.max_residual() < 1e-9


@pytest.mark.parametrize("k,n", [(2, 1), (2, 2), (3, 2)])
def test_ym_axioms(k, n):
    rep = check_axioms(build_finite_ym(k, n, seed=k + n))
    assert rep.passed
    assert rep.max_residual() < 1e-9


def brute_force_one_form_dim(triple):
    vecs = []
    for a in triple.algebra.basis:
        for b in triple.algebra.basis:
            vecs.append((triple.pi(a) @ triple.dirac_commutator(b)).reshape(-1))
    stack = np.stack(vecs)
    s = np.linalg.svd(stack, compute_uv=False)
    return int(np.sum(s > 1e-9 * max(1.0, s[0])))


def test_hs_one_form_dimension():
    # N = 2: the commutator image of a generic M is not closed under left
    # multiplication, products a[M,b] fill all of M_2
    t = build_hs_model(2, seed=0)
    assert brute_force_one_form_dim(t) == 4
    assert one_form_space(t).dim == 4
    t1 = build_hs_model(1, seed=0)
    assert one_form_space(t1).dim == 0
    t3 = build_hs_model(3, seed=1)
    assert one_form_space(t3).dim == brute_force_one_form_dim(t3) == 9


def brute_force_aj_dim(triple):
    k = triple.real_structure.kernel
    rows = []
    for b in triple.algebra.basis:
        pb = triple.pi(b)
        rows.append((pb @ k - k @ pb.T).reshape(-1))
    stack = np.stack(rows)
    s = np.linalg.svd(stack, compute_uv=False)
    rank = int(np.sum(s > 1e-9 * max(1.0, s[0])))
    return len(triple.algebra.basis) - rank


@pytest.mark.parametrize("make,expect", [
    (lambda: build_hs_model(2, seed=0), 1),
    (lambda: build_hs_model(3, seed=0), 1),
    (lambda: build_finite_ym(2, 2, seed=0), 2),
    (lambda: build_finite_ym(3, 2, seed=0), 3),
    (lambda: build_finite_ym(3, 1, seed=0), 3),
])
def test_aj_dimension_matches_nullspace_oracle(make, expect):
    t = make()
    assert brute_force_aj_dim(t) == expect
    assert compute_aj(t).dim == expect


def test_aj_properties_reports_pass():
    for t in (build_hs_model(2, seed=1), build_finite_ym(2, 2, seed=1)):
        rep = verify_aj_properties(t)
        assert rep.passed
        for name in ("real-structure-premise", "defining-condition",
                     "inside-center", "star-closed", "commutes-with-one-forms"):
            assert rep.record(name).passed


def test_corrupted_real_structure_is_flagged():
    t = build_hs_model(2, seed=0)
    rng = np.random.default_rng(9)
    x = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    q, _ = np.linalg.qr(x)
    bad = RealSpectralTriple(t.algebra, t.pi_images, t.dirac, AntiLinearOp(q),
                             eps=1, eps_prime=1, label="bad-J")
    ax = check_axioms(bad)
    assert not ax.passed
    rep = verify_aj_properties(bad)
    assert not rep.record("real-structure-premise").passed


def test_axioms_fail_for_complex_dirac_with_conjugation_j():
    cfg = {
        "schema": "ncgauge.triple/1",
        "algebra": {"kind": "diagonal", "n": 2},
        "representation": "defining",
        "dirac": {"re": [[0.3, 0.1], [0.1, -0.7]], "im": [[0.0, 0.4], [-0.4, 0.0]]},
        "real_structure": {"preset": "conjugation"},
    }
    rep = check_axioms(triple_from_config(cfg))
    assert not rep.record("real-structure-dirac-sign").passed


def test_real_diagonal_dirac_with_conjugation_j_passes():
    cfg = {
        "schema": "ncgauge.triple/1",
        "algebra": {"kind": "diagonal", "n": 2},
        "representation": "defining",
        "dirac": {"re": [[0.3, 0.0], [0.0, -0.7]]},
        "real_structure": {"preset": "conjugation"},
    }
    t = triple_from_config(cfg)
    rep = check_axioms(t)
    assert rep.passed
    # the whole commutative algebra satisfies the defining condition here
    assert compute_aj(t).dim == 2


def test_order_one_fails_for_offdiagonal_real_dirac_with_conjugation_j():
    # [D, a] is off-diagonal for diagonal a, and off-diagonal matrices do
    # not commute with the conjugated algebra
    cfg = {
        "schema": "ncgauge.triple/1",
        "algebra": {"kind": "diagonal", "n": 2},
        "representation": "defining",
        "dirac": {"re": [[0.0, 1.0], [1.0, 0.0]]},
        "real_structure": {"preset": "conjugation"},
    }
    rep = check_axioms(triple_from_config(cfg))
    assert not rep.record("order-one-condition").passed
    assert rep.record("real-structure-dirac-sign").passed


def test_unitary_equivalence_of_conjugated_triple():
    t = build_hs_model(2, seed=4)
    rng = np.random.default_rng(11)
    x = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    u, _ = np.linalg.qr(x)
    t2 = conjugate_triple(t, u, label="moved")
    rep = unitary_equivalent(t, t2, u)
    assert rep.passed
    assert check_axioms(t2).passed
    other = build_hs_model(2, seed=5)
    rep_bad = unitary_equivalent(t, other, np.eye(4, dtype=complex))
    assert not rep_bad.record("intertwines-dirac").passed


def test_unitary_equivalence_dimension_guard():
    with pytest.raises(DimensionMismatch):
        unitary_equivalent(build_hs_model(2), build_hs_model(3), np.eye(4))


def test_cd_algebra_dims_and_closure_record():
    t = build_hs_model(2, seed=0)
    cd, rep = c_d_algebra(t)
    assert cd.dim == 4
    assert rep.record("generated-closure").passed
    assert "even_dim" in rep.context and "odd_dim" in rep.context
    t2 = build_finite_ym(2, 2, seed=1)
    cd2, rep2 = c_d_algebra(t2)
    assert cd2.dim == 8
    assert rep2.record("generated-closure").passed


def test_one_form_self_adjointness_of_pure_gauge():
    t = build_hs_model(2, seed=2)
    u = random_unitary(t.algebra, seed=3)
    w = OneForm(t, [(u, adjoint(u))])
    assert w.self_adjoint_residual() < 1e-12
    assert w.span_residual() < 1e-10
    assert op_norm(OneForm.zero(t).matrix) == 0.0


def test_pi_rejects_elements_outside_algebra():
    cfg = {
        "schema": "ncgauge.triple/1",
        "algebra": {"kind": "diagonal", "n": 2},
        "representation": "defining",
        "dirac": {"preset": "zero"},
        "real_structure": {"preset": "conjugation"},
    }
    t = triple_from_config(cfg)
    off = np.array([[0, 1], [0, 0]], dtype=complex)
    with pytest.raises(AlgebraError):
        t.pi(off)


def test_constructor_shape_guards():
    alg = full_matrix_algebra(2)
    with pytest.raises(SpectralInputError):
        RealSpectralTriple(alg, [np.eye(4)] * 3, np.eye(4, dtype=complex),
                           AntiLinearOp(np.eye(4)), eps=1, eps_prime=1)
    with pytest.raises(SpectralInputError):
        RealSpectralTriple(alg, [np.eye(4, dtype=complex)] * 4,
                           np.eye(4, dtype=complex), AntiLinearOp(np.eye(4)),
                           eps=2, eps_prime=1)
