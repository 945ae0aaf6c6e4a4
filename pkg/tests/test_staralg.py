import numpy as np
import pytest

from ncgauge.linalg import Subspace, adjoint, op_norm
from ncgauge.staralg import (
    FiniteStarAlgebra,
    NotClosed,
    block_diagonal_algebra,
    center,
    diagonal_algebra,
    full_matrix_algebra,
    minimal_projections,
    random_unitary,
    skew_hermitian_basis,
    subalgebra_from_span,
)


def test_full_algebra_shape():
    alg = full_matrix_algebra(3)
    assert alg.dim == 9
    assert alg.ambient == 3
    assert not alg.is_commutative()
    assert np.allclose(alg.unit, np.eye(3))


def test_diagonal_algebra_is_commutative():
    alg = diagonal_algebra(4)
    assert alg.dim == 4
    assert alg.is_commutative()
    assert center(alg).dim == 4


def test_block_diagonal_dims_and_center():
    alg = block_diagonal_algebra([2, 2, 1])
    assert alg.ambient == 5
    assert alg.dim == 9
    z = center(alg)
    assert z.dim == 3
    for c in z.basis:
        for b in alg.basis:
            assert op_norm(c @ b - b @ c) < 1e-10


def test_center_of_full_algebra_is_scalars():
    z = center(full_matrix_algebra(3))
    assert z.dim == 1
    v = z.basis[0]
    off = v - np.trace(v) / 3 * np.eye(3)
    assert op_norm(off) < 1e-10


def test_coordinates_roundtrip():
    alg = full_matrix_algebra(2)
    rng = np.random.default_rng(3)
    m = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    coords = alg.coordinates(m)
    rebuilt = sum(c * b for c, b in zip(coords, alg.basis))
    assert op_norm(rebuilt - m) < 1e-12
    assert alg.contains(m)


def test_contains_rejects_outside():
    alg = diagonal_algebra(2)
    off = np.array([[0, 1], [0, 0]], dtype=complex)
    assert not alg.contains(off)
    assert alg.residual(off) > 0.5


def test_subalgebra_from_span_requires_closure():
    e12 = np.array([[0, 1], [0, 0]], dtype=complex)
    with pytest.raises(NotClosed):
        subalgebra_from_span(Subspace.from_spanning([e12], shape=(2, 2)))


def test_minimal_projections_of_diagonal():
    alg = diagonal_algebra(3)
    fam = minimal_projections(alg, seed=0)
    labels = list(fam.labels)
    assert len(labels) == 3
    total = sum(p for _, p in fam)
    assert op_norm(total - np.eye(3)) < 1e-10
    for _, p in fam:
        assert op_norm(p @ p - p) < 1e-10
        assert op_norm(p - adjoint(p)) < 1e-10
        assert abs(np.trace(p).real - 1.0) < 1e-10


def test_minimal_projections_deterministic_across_seeds():
    alg = block_diagonal_algebra([1, 1])
    a = minimal_projections(alg, seed=1)
    b = minimal_projections(alg, seed=5)
    for (_, p), (_, r) in zip(a, b):
        assert op_norm(p - r) < 1e-9


def test_skew_hermitian_basis_counts():
    alg = full_matrix_algebra(2)
    skew = skew_hermitian_basis(alg)
    assert len(skew) == 4
    for x in skew:
        assert op_norm(x + adjoint(x)) < 1e-10
        assert alg.contains(x)


def test_random_unitary_lives_in_algebra():
    alg = block_diagonal_algebra([2, 1])
    u = random_unitary(alg, seed=11)
    assert op_norm(u @ adjoint(u) - np.eye(3)) < 1e-10
    assert alg.contains(u)


def test_random_unitary_deterministic():
    alg = full_matrix_algebra(2)
    assert np.allclose(random_unitary(alg, seed=3), random_unitary(alg, seed=3))


def test_random_element_spans_algebra():
    alg = full_matrix_algebra(2)
    els = [alg.random_element(seed=s) for s in range(6)]
    sp = Subspace.from_spanning(els, shape=(2, 2))
    assert sp.dim == 4
