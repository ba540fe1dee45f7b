import numpy as np
import pytest

from core.errors import DimensionMismatch, KernelTooLarge
from utils.gf2 import BitMatrix, BitVector, gray_code_span


def test_bitvector_basics():
    v = BitVector.from_indices(70, [0, 3, 69])
    assert v.weight() == 3
    assert v.support() == [0, 3, 69]
    assert v[69] == 1 and v[68] == 0
    w = BitVector.from_indices(70, [3, 5])
    assert (v ^ w).support() == [0, 5, 69]
    assert v.dot(w) == 1
    assert (v & w).support() == [3]
    with pytest.raises(DimensionMismatch):
        v ^ BitVector(3)


def test_mask_round_trip_uses_msb_first():
    v = BitVector.from_bits([1, 0, 1, 1])
    assert v.to_mask() == 0b1011
    assert BitVector.from_mask(4, 0b1011) == v


def test_from_indices_xors_repeats():
    assert BitVector.from_indices(4, [1, 1, 2]).support() == [2]


def test_rank_and_kernel():
    A = BitMatrix.from_dense([[1, 1, 0], [0, 1, 1]])
    assert A.rank() == 2
    (k,) = A.kernel_basis()
    assert k.to_list() == [1, 1, 1]
    assert A.matvec(BitVector.from_bits([1, 1, 0])).to_list() == [0, 1]


def test_kernel_of_full_rank_matrix_is_empty():
    assert BitMatrix.identity(5).kernel_basis() == []


def test_kernel_vectors_multiword(rng):
    dense = rng.integers(0, 2, size=(40, 130))
    A = BitMatrix.from_dense(dense)
    basis = A.kernel_basis()
    assert len(basis) == 130 - A.rank()
    for x in basis:
        assert A.matvec(x).is_zero()
        np.testing.assert_array_equal(dense @ x.to_array() % 2, 0)


def test_transpose_and_entries():
    dense = np.array([[1, 0, 1], [0, 0, 1]])
    A = BitMatrix.from_dense(dense)
    assert A[0, 2] == 1 and A[1, 0] == 0
    np.testing.assert_array_equal(A.transpose().to_dense(), dense.T)
    assert A.nonzero() == [(0, 0), (0, 2), (1, 2)]
    np.testing.assert_array_equal(A.row_weights(), [2, 1])


def test_enumerate_kernel_visits_every_element_once():
    # three copies of the even-parity code on 2 bits
    A = BitMatrix.from_dense([[1, 1, 0, 0, 0, 0], [0, 0, 1, 1, 0, 0], [0, 0, 0, 0, 1, 1]])
    elements = list(A.enumerate_kernel(cap=64))
    assert len(elements) == 8
    assert len(set(elements)) == 8
    assert all(A.matvec(x).is_zero() for x in elements)


def test_enumerate_kernel_cap_raises_before_iteration():
    A = BitMatrix.zeros(1, 20)
    with pytest.raises(KernelTooLarge):
        A.enumerate_kernel(cap=1000)


def test_gray_code_span_consecutive_differ_by_one_generator():
    basis = [BitVector.from_indices(5, [i]) for i in range(3)]
    span = list(gray_code_span(basis, 5))
    assert len(span) == 8
    for a, b in zip(span, span[1:]):
        assert (a ^ b).weight() == 1


def test_image_table_matches_matvec():
    A = BitMatrix.from_dense([[1, 1, 0], [0, 1, 1]])
    table = A.image_table()
    for m in range(8):
        assert table[m] == A.matvec(BitVector.from_mask(3, m)).to_mask()
