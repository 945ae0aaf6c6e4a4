"""Model builders: orbifold equivariance, hopping effects, preset/config parsing."""

import json

import numpy as np
import pytest

from ncgauge import (
    BadHopping,
    BadModelSpec,
    BadParameters,
    build_finite_ym,
    build_hs_model,
    build_orbifold_algebra,
    check_axioms,
    clock_shift,
    compute_aj,
    gauge_lie_algebra,
    load_model,
    model_from_string,
    one_form_space,
    triple_from_config,
    TRIPLE_SCHEMA_TAG,
)


# -- orbifold oracle ----------------------------------------------------------
#
# A block-diagonal matrix with q x q blocks B_y at points y = j*q + g is
# equivariant iff B_{j,g+1} = w B_{j,g} w* for all j, g (indices mod q).
# The oracle parametrizes ALL block diagonals and counts the nullity of
# the stacked constraint map, independent of the builder's seed trick.


def equivariance_nullity(q, p, m):
    _, w = clock_shift(q, p)
    nblocks = m * q
    nparams = nblocks * q * q
    rows = []
    for j in range(m):
        for g in range(q):
            src = j * q + g
            dst = j * q + (g + 1) % q
            row = np.zeros((q * q, nparams), dtype=complex)
            row[:, dst * q * q:(dst + 1) * q * q] += np.eye(q * q)
            # row-major vec: vec(w B w*) = kron(w, conj(w)) vec(B)
            row[:, src * q * q:(src + 1) * q * q] -= np.kron(w, np.conj(w))
            rows.append(row)
    mat = np.vstack(rows)
    rank = int(np.linalg.matrix_rank(mat, tol=1e-10))
    return nparams - rank


def center_dim_oracle(basis):
    cols = []
    for b in basis:
        cols.append(np.concatenate([(b @ c - c @ b).reshape(-1) for c in basis]))
    mat = np.array(cols).T
    return len(basis) - int(np.linalg.matrix_rank(mat, tol=1e-10))


def diagonal_blocks(mat, nblocks, q):
    return [mat[y * q:(y + 1) * q, y * q:(y + 1) * q].copy() for y in range(nblocks)]


@pytest.mark.parametrize("q,p,m", [(2, 1, 1), (3, 2, 2), (1, 1, 3)])
def test_orbifold_dimension_matches_constraint_nullity(q, p, m):
    alg, rep = build_orbifold_algebra(q, p, m)
    nullity = equivariance_nullity(q, p, m)
    assert nullity == m * q * q
    assert alg.dim == nullity
    assert rep.passed
    assert rep.context["dim"] == m * q * q
    assert rep.context["center_dim"] == m


@pytest.mark.parametrize("q,p,m", [(2, 1, 1), (3, 2, 2)])
def test_orbifold_basis_elements_are_equivariant(q, p, m):
    alg, _ = build_orbifold_algebra(q, p, m)
    _, w = clock_shift(q, p)
    wh = w.conj().T
    for b in alg.basis:
        off = b.copy()
        blocks = diagonal_blocks(b, m * q, q)
        for y in range(m * q):
            off[y * q:(y + 1) * q, y * q:(y + 1) * q] = 0
        assert np.max(np.abs(off)) < 1e-12
        for j in range(m):
            for g in range(q):
                cur = blocks[j * q + g]
                nxt = blocks[j * q + (g + 1) % q]
                assert np.max(np.abs(nxt - w @ cur @ wh)) < 1e-12


@pytest.mark.parametrize("q,p,m", [(2, 1, 1), (3, 2, 2), (1, 1, 3)])
def test_orbifold_center_brute_force(q, p, m):
    alg, _ = build_orbifold_algebra(q, p, m)
    assert center_dim_oracle(alg.basis) == m


def test_orbifold_rejects_bad_parameters():
    with pytest.raises(BadParameters):
        build_orbifold_algebra(2, 2, 1)
    with pytest.raises(BadParameters):
        build_orbifold_algebra(0, 1, 1)
    with pytest.raises(BadParameters):
        build_orbifold_algebra(2, 1, 0)


# -- hopping ------------------------------------------------------------------


def test_real_hopping_breaks_order_one_only():
    lam = 0.3 * (np.ones((2, 2)) - np.eye(2))
    t = build_finite_ym(2, 2, hopping=lam)
    rep = check_axioms(t)
    assert not rep.record("order-one-condition").passed
    assert rep.record("order-one-condition").residual > 0.01
    assert rep.record("real-structure-dirac-sign").passed
    assert rep.record("commutant-property").passed
    assert not rep.passed


def test_complex_hopping_also_breaks_dirac_sign():
    lam = np.array([[0.0, 1j], [-1j, 0.0]])
    t = build_finite_ym(2, 2, hopping=lam)
    rep = check_axioms(t)
    assert not rep.record("real-structure-dirac-sign").passed
    assert not rep.record("order-one-condition").passed


def test_hopping_enlarges_one_forms():
    lam = 0.3 * (np.ones((2, 2)) - np.eye(2))
    t = build_finite_ym(2, 1, hopping=lam)
    # brute force rank of the products pi(a) [D, pi(b)]
    cols = []
    for a in t.algebra.basis:
        for b in t.algebra.basis:
            m = t.pi(a) @ (t.dirac @ t.pi(b) - t.pi(b) @ t.dirac)
            cols.append(m.reshape(-1))
    rank = int(np.linalg.matrix_rank(np.array(cols).T, tol=1e-10))
    assert rank == 2
    assert one_form_space(t).dim == 2
    # without hopping the fibers are scalars and D commutes with pi(A)
    assert one_form_space(build_finite_ym(2, 1)).dim == 0


def test_hopping_validation():
    with pytest.raises(BadHopping):
        build_finite_ym(2, 2, hopping=np.array([[0.0, 1.0], [0.0, 0.0]]))
    with pytest.raises(BadHopping):
        build_finite_ym(2, 2, hopping=np.eye(2))
    with pytest.raises(BadHopping):
        build_finite_ym(2, 2, hopping=np.zeros((3, 3)))


def test_single_point_ym_matches_hs():
    t = build_finite_ym(1, 2)
    assert check_axioms(t).passed
    assert compute_aj(t).dim == 1
    assert gauge_lie_algebra(t).dim == 3
    h = build_hs_model(2)
    assert compute_aj(h).dim == 1
    assert gauge_lie_algebra(h).dim == 3


# -- preset strings -----------------------------------------------------------


def test_preset_hs_and_alias():
    t = model_from_string("hs:N=3")
    assert t.algebra.dim == 9
    t2 = model_from_string("hs:n=3")
    assert t2.algebra.dim == 9
    assert np.allclose(t.dirac, t2.dirac)


def test_preset_duplicate_parameter():
    with pytest.raises(BadModelSpec):
        model_from_string("hs:N=2,n=3")


def test_preset_ym_lam_fills_off_diagonal():
    t = model_from_string("ym:k=2,N=2,lam=0.25")
    block = t.dirac[0:4, 4:8]
    assert np.allclose(block, 0.25 * np.eye(4))


def test_preset_orbifold_returns_pair():
    alg, rep = model_from_string("orbifold:q=2,m=1")
    assert alg.dim == 4
    assert rep.passed


def test_preset_errors():
    with pytest.raises(BadModelSpec):
        model_from_string("foo:N=2")
    with pytest.raises(BadModelSpec):
        model_from_string("hs:bogus=1")
    with pytest.raises(BadModelSpec):
        model_from_string("hs:N=two")
    with pytest.raises(BadModelSpec):
        model_from_string("hs:N")
    with pytest.raises(BadModelSpec):
        model_from_string("hs:N=0")
    with pytest.raises(BadModelSpec):
        model_from_string("orbifold:q=2,p=2")


def test_preset_tolerates_whitespace():
    t = model_from_string("hs: N = 3 ")
    assert t.algebra.dim == 9


# -- config documents ---------------------------------------------------------


def make_custom_config():
    return {
        "schema": TRIPLE_SCHEMA_TAG,
        "label": "two-point",
        "algebra": {"kind": "diagonal", "n": 2},
        "representation": "defining",
        "dirac": {"preset": "zero"},
        "real_structure": {"preset": "conjugation"},
    }


def test_config_preset_document():
    t = triple_from_config({"schema": TRIPLE_SCHEMA_TAG,
                            "preset": "hs", "params": {"N": 2}})
    assert t.algebra.dim == 4
    assert check_axioms(t).passed


def test_config_custom_document_passes_axioms():
    t = triple_from_config(make_custom_config())
    assert t.hilbert_dim == 2
    assert check_axioms(t).passed


def test_config_explicit_entries():
    cfg = make_custom_config()
    cfg["dirac"] = {"re": [[0.0, 1.0], [1.0, 0.0]]}
    cfg["real_structure"] = {"kernel": {"re": [[1.0, 0.0], [0.0, 1.0]]}}
    t = triple_from_config(cfg)
    rep = check_axioms(t)
    # off-diagonal real D on the diagonal algebra: sign axiom holds,
    # order one does not
    assert rep.record("real-structure-dirac-sign").passed
    assert not rep.record("order-one-condition").passed


def test_config_errors():
    with pytest.raises(BadModelSpec):
        triple_from_config({"schema": "ncgauge.triple/9", "preset": "hs"})
    with pytest.raises(BadModelSpec):
        triple_from_config([1, 2])
    cfg = make_custom_config()
    del cfg["dirac"]
    with pytest.raises(BadModelSpec):
        triple_from_config(cfg)
    cfg = make_custom_config()
    cfg["algebra"] = {"kind": "weird", "n": 2}
    with pytest.raises(BadModelSpec):
        triple_from_config(cfg)
    cfg = make_custom_config()
    cfg["representation"] = "right-multiplication"
    with pytest.raises(BadModelSpec):
        triple_from_config(cfg)
    cfg = make_custom_config()
    cfg["real_structure"] = {"preset": "adjoint-flip"}
    with pytest.raises(BadModelSpec):
        triple_from_config(cfg)
    cfg = make_custom_config()
    cfg["dirac"] = {"preset": "left-right-random"}
    with pytest.raises(BadModelSpec):
        triple_from_config(cfg)
    cfg = make_custom_config()
    cfg["real_structure"] = {}
    with pytest.raises(BadModelSpec):
        triple_from_config(cfg)
    cfg = make_custom_config()
    cfg["dirac"] = {"re": [[0.0, 1.0]]}
    with pytest.raises(BadModelSpec):
        triple_from_config(cfg)
    with pytest.raises(BadModelSpec):
        triple_from_config({"schema": TRIPLE_SCHEMA_TAG,
                            "preset": "hs", "params": [1]})


def test_load_model_round_trip(tmp_path):
    path = tmp_path / "model.json"
    path.write_text(json.dumps({"schema": TRIPLE_SCHEMA_TAG,
                                "preset": "ym", "params": {"k": 2, "N": 2}}))
    t = load_model(str(path))
    assert t.algebra.dim == 8
    assert check_axioms(t).passed


def test_load_model_bad_file(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    with pytest.raises(BadModelSpec):
        load_model(str(path))
    with pytest.raises(BadModelSpec):
        load_model(str(tmp_path / "missing.json"))


def test_load_model_preset_passthrough():
    t = load_model("hs:N=2")
    assert t.algebra.dim == 4
