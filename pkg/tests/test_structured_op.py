import numpy as np
import pytest

from core.errors import ArityMismatch, TooLarge
from core.structured_op import (ComposeOf, Gf2BasisGather, Gf2BasisMap, HLayer, OpSumApply, PauliApply,
                                Permute, Scale, SumOf, identity_op, structured_to_dense)
from utils.bit_kernels import basis_state, random_state
from utils.gf2 import BitMatrix
from utils.pauli import OperatorSum, PauliString

H = np.array([[1, 1], [1, -1]]) / np.sqrt(2)


def test_gf2_basis_map():
    A = BitMatrix.from_dense([[1, 1]])
    np.testing.assert_allclose(structured_to_dense(Gf2BasisMap(A)), [[1, 0, 0, 1], [0, 1, 1, 0]])
    np.testing.assert_allclose(structured_to_dense(Gf2BasisGather(A)), [[1, 0], [0, 1], [0, 1], [1, 0]])


def test_gf2_basis_map_accumulates_complex_amplitudes():
    A = BitMatrix.from_dense([[1, 1]])
    out = Gf2BasisMap(A).apply(np.array([1j, 1, 2, 1j]))
    np.testing.assert_allclose(out, [2j, 3])


def test_hadamard_layer():
    np.testing.assert_allclose(structured_to_dense(HLayer(2)), np.kron(H, H), atol=1e-12)
    np.testing.assert_allclose(structured_to_dense(HLayer(2, qubits=(0,))), np.kron(H, np.eye(2)), atol=1e-12)


def test_permute_moves_qubit_to_position():
    # qubit 0 -> position 1, so |01> becomes |10>
    np.testing.assert_allclose(Permute([1, 0]).apply(basis_state(2, 1)), basis_state(2, 2))
    with pytest.raises(ValueError):
        Permute([0, 0])


def test_permute_algebra():
    p = Permute([1, 2, 0])
    q = Permute([2, 1, 0])
    assert p.power(3).perm == (0, 1, 2)
    assert p.inverse().compose(p).perm == (0, 1, 2)
    assert p.power(-1) == p.inverse()
    np.testing.assert_allclose(structured_to_dense(p.compose(q)),
                               structured_to_dense(p) @ structured_to_dense(q), atol=1e-12)


def test_compose_order_is_first_to_last():
    x = PauliApply(PauliString.from_label("X"))
    h = HLayer(1)
    dense = structured_to_dense(ComposeOf([x, h]))
    np.testing.assert_allclose(dense, H @ np.array([[0, 1], [1, 0]]), atol=1e-12)
    np.testing.assert_allclose(structured_to_dense(h @ x), dense, atol=1e-12)


def test_sum_and_scale():
    x = PauliApply(PauliString.from_label("X"))
    s = SumOf([(1.0, identity_op(1)), (1.0, x)])
    np.testing.assert_allclose(structured_to_dense(s), [[1, 1], [1, 1]])
    np.testing.assert_allclose(structured_to_dense(Scale(2j, 1)), 2j * np.eye(2))


def test_opsum_primitive(rng):
    h = OperatorSum(2, [(0.5, PauliString.from_label("XZ")), (1j, PauliString.from_label("YY"))])
    psi = random_state(2, rng)
    np.testing.assert_allclose(OpSumApply(h).apply(psi), h.apply(psi), atol=1e-12)


def test_adjoint_is_conjugate_transpose():
    A = BitMatrix.from_dense([[1, 0, 1], [0, 1, 1]])
    op = ComposeOf([Gf2BasisMap(A), HLayer(2), Permute([1, 0]), Scale(1j, 2)])
    np.testing.assert_allclose(structured_to_dense(op.adjoint()), structured_to_dense(op).conj().T, atol=1e-12)


def test_arity_checks():
    with pytest.raises(ArityMismatch):
        ComposeOf([HLayer(2), HLayer(3)])
    with pytest.raises(ArityMismatch):
        SumOf([(1.0, HLayer(2)), (1.0, HLayer(3))])
    with pytest.raises(ArityMismatch):
        HLayer(2).apply(np.ones(8))
    with pytest.raises(ValueError):
        ComposeOf([])


def test_dense_cap():
    with pytest.raises(TooLarge):
        structured_to_dense(HLayer(5), cap=4)


def test_batched_columns_match_single_states(rng):
    A = BitMatrix.from_dense([[1, 1, 0], [0, 1, 1], [1, 0, 1]])
    wide = OperatorSum(3)
    for k in range(1, 8):
        wide.add_term(0.5, PauliString.x_string(3, [q for q in range(3) if (k >> q) & 1]))
    wide.add_term(0.25, PauliString.z_string(3, [0, 2]))
    op = ComposeOf([Gf2BasisMap(A), HLayer(3, qubits=(1,)), Permute((2, 0, 1)),
                    PauliApply(PauliString.x_string(3, [1])), OpSumApply(wide), Gf2BasisGather(A), Scale(2.0, 3)])
    batch = np.stack([random_state(3, rng) for _ in range(4)], axis=1)
    out = op.apply(batch)
    assert out.shape == (8, 4)
    for j in range(4):
        np.testing.assert_allclose(out[:, j], op.apply(batch[:, j]), atol=1e-12)


def test_real_batch_through_basis_map():
    A = BitMatrix.from_dense([[1, 1]])
    out = Gf2BasisMap(A).apply(np.array([[1.0, 0.0], [2.0, 1.0], [3.0, 0.0], [4.0, 1.0]]))
    np.testing.assert_allclose(out, [[5.0, 1.0], [5.0, 1.0]])
