"""GF(2) bit vectors and row-packed bit matrices.

Bit j of a row lives in word j // 64 at position j % 64. Elimination XORs whole
word rows at once.
"""
import logging

import numpy as np

from core.errors import DimensionMismatch, KernelTooLarge
from .bit_kernels import popcount

logger = logging.getLogger(__name__)

WORD = 64


def _n_words(length):
    return max(1, (length + WORD - 1) // WORD)


def _pack(bits, length):
    bits = np.atleast_2d(np.asarray(bits, dtype=np.uint8))
    padded = np.zeros((bits.shape[0], _n_words(length) * WORD), dtype=np.uint8)
    if length:
        padded[:, :length] = bits[:, :length] & 1
    packed = np.ascontiguousarray(np.packbits(padded, axis=1, bitorder='little'))
    return packed.view('<u8').astype(np.uint64)


def _unpack(words, length):
    words = np.ascontiguousarray(words, dtype='<u8')
    raw = np.unpackbits(words.view(np.uint8).reshape(words.shape[0], -1), axis=1, bitorder='little')
    return raw[:, :length]


class BitVector:
    __slots__ = ("length", "words")

    def __init__(self, length, words=None):
        self.length = length
        if words is None:
            words = np.zeros(_n_words(length), dtype=np.uint64)
        self.words = np.asarray(words, dtype=np.uint64).reshape(_n_words(length))

    @classmethod
    def from_bits(cls, bits):
        bits = list(bits)
        return cls(len(bits), _pack([bits], len(bits))[0]) if bits else cls(0)

    @classmethod
    def from_indices(cls, length, indices):
        bits = np.zeros(length, dtype=np.uint8)
        for i in indices:
            if not 0 <= i < length:
                raise IndexError(f"bit {i} out of range for length {length}")
            bits[i] ^= 1
        return cls.from_bits(bits)

    @classmethod
    def zeros(cls, length):
        return cls(length)

    @classmethod
    def ones(cls, length):
        return cls.from_bits([1] * length)

    @classmethod
    def from_mask(cls, length, mask):
        """Inverse of to_mask (qubit 0 = most significant bit)"""
        return cls.from_bits([(mask >> (length - 1 - i)) & 1 for i in range(length)])

    def to_list(self):
        if self.length == 0:
            return []
        return [int(b) for b in _unpack(self.words[None, :], self.length)[0]]

    def to_array(self):
        return np.array(self.to_list(), dtype=np.uint8)

    def support(self):
        return [i for i, b in enumerate(self.to_list()) if b]

    def to_mask(self):
        mask = 0
        for b in self.to_list():
            mask = (mask << 1) | b
        return mask

    def __getitem__(self, i):
        if not 0 <= i < self.length:
            raise IndexError(i)
        return int((int(self.words[i // WORD]) >> (i % WORD)) & 1)

    def weight(self):
        return int(popcount(self.words).sum())

    def is_zero(self):
        return not self.words.any()

    def dot(self, other):
        self._check(other)
        return int(popcount(self.words & other.words).sum()) & 1

    def _check(self, other):
        if self.length != other.length:
            raise DimensionMismatch(f"bit vectors of length {self.length} and {other.length}")

    def __xor__(self, other):
        self._check(other)
        return BitVector(self.length, self.words ^ other.words)

    def __and__(self, other):
        self._check(other)
        return BitVector(self.length, self.words & other.words)

    def __eq__(self, other):
        return isinstance(other, BitVector) and self.length == other.length and np.array_equal(self.words, other.words)

    def __hash__(self):
        return hash((self.length, self.words.tobytes()))

    def __lt__(self, other):
        return self.to_list() < other.to_list()

    def __repr__(self):
        return "BitVector(" + "".join(map(str, self.to_list())) + ")"


class BitMatrix:
    """rows x cols over GF(2), rows packed into uint64 words"""

    def __init__(self, rows, cols, data=None):
        self.rows = rows
        self.cols = cols
        if data is None:
            data = np.zeros((rows, _n_words(cols)), dtype=np.uint64)
        self.data = np.asarray(data, dtype=np.uint64).reshape(rows, _n_words(cols))
        self._image_table = None

    @classmethod
    def from_dense(cls, array):
        array = np.asarray(array)
        if array.ndim != 2:
            raise DimensionMismatch("expected a 2d array")
        rows, cols = array.shape
        if rows == 0:
            return cls(0, cols)
        return cls(rows, cols, _pack(array % 2, cols))

    @classmethod
    def from_rows(cls, rows, cols=None):
        rows = list(rows)
        if cols is None:
            cols = rows[0].length if rows else 0
        if not rows:
            return cls(0, cols)
        data = np.stack([r.words if isinstance(r, BitVector) else _pack([r], cols)[0] for r in rows])
        return cls(len(rows), cols, data)

    @classmethod
    def identity(cls, n):
        return cls.from_dense(np.eye(n, dtype=np.uint8))

    @classmethod
    def zeros(cls, rows, cols):
        return cls(rows, cols)

    def to_dense(self):
        if self.rows == 0:
            return np.zeros((0, self.cols), dtype=np.uint8)
        return _unpack(self.data, self.cols).astype(np.uint8)

    def row(self, i):
        return BitVector(self.cols, self.data[i].copy())

    def column(self, j):
        return BitVector.from_bits(self.to_dense()[:, j])

    def transpose(self):
        return BitMatrix.from_dense(self.to_dense().T)

    def __getitem__(self, ij):
        i, j = ij
        return int((int(self.data[i, j // WORD]) >> (j % WORD)) & 1)

    def __eq__(self, other):
        return (isinstance(other, BitMatrix) and self.rows == other.rows and self.cols == other.cols
                and np.array_equal(self.data, other.data))

    def __repr__(self):
        return f"BitMatrix({self.rows}x{self.cols})"

    def row_weights(self):
        return popcount(self.data).sum(axis=1)

    def nonzero(self):
        """(row, col) pairs with a 1, row-major"""
        dense = self.to_dense()
        return [(int(i), int(j)) for i, j in zip(*np.nonzero(dense))]

    # ----- linear algebra -----
    def matvec(self, x):
        if x.length != self.cols:
            raise DimensionMismatch(f"{self.rows}x{self.cols} matrix times length-{x.length} vector")
        if self.rows == 0:
            return BitVector(0)
        bits = popcount(self.data & x.words[None, :]).sum(axis=1) & 1
        return BitVector.from_bits(bits)

    def rref(self):
        """Reduced row echelon form and pivot columns"""
        data = self.data.copy()
        pivots = []
        r = 0
        for col in range(self.cols):
            if r >= self.rows:
                break
            w, b = divmod(col, WORD)
            bit = np.uint64(1) << np.uint64(b)
            has = (data[r:, w] & bit) != 0
            if not has.any():
                continue
            pivot = r + int(np.argmax(has))
            if pivot != r:
                data[[r, pivot]] = data[[pivot, r]]
            hits = (data[:, w] & bit) != 0
            hits[r] = False
            data[hits] ^= data[r]
            pivots.append(col)
            r += 1
        return BitMatrix(self.rows, self.cols, data), pivots

    def rank(self):
        return len(self.rref()[1])

    def kernel_basis(self):
        """Canonical GF(2) basis of {x : A x = 0}"""
        reduced, pivots = self.rref()
        dense = reduced.to_dense()
        pivot_set = set(pivots)
        basis = []
        for f in range(self.cols):
            if f in pivot_set:
                continue
            x = np.zeros(self.cols, dtype=np.uint8)
            x[f] = 1
            for r, p in enumerate(pivots):
                x[p] = dense[r, f]
            basis.append(x)
        if not basis:
            return []
        canon, _ = BitMatrix.from_dense(np.array(basis)).rref()
        return [canon.row(i) for i in range(len(basis))]

    def enumerate_kernel(self, cap):
        basis = self.kernel_basis()
        if (1 << len(basis)) > cap:
            raise KernelTooLarge(f"kernel of dimension {len(basis)} exceeds enumeration cap {cap}")
        return gray_code_span(basis, self.cols)

    def image_table(self):
        """A·m as a basis index for every input index m (qubit 0 = MSB on both sides)"""
        if self._image_table is None:
            dense = self.to_dense()
            k = self.rows
            weights = np.array([1 << (k - 1 - i) for i in range(k)], dtype=np.int64)
            col_images = [int((dense[:, j].astype(np.int64) * weights).sum()) for j in range(self.cols)]
            table = np.zeros(1 << self.cols, dtype=np.int64)
            size = 1
            # bit j of the index is qubit cols-1-j; double the table one bit at a time
            for j in range(self.cols):
                table[size:2 * size] = table[:size] ^ col_images[self.cols - 1 - j]
                size *= 2
            self._image_table = table
        return self._image_table


def gray_code_span(basis, length):
    """All 2^k combinations of the basis, each once, Gray-code order"""
    current = BitVector(length)
    yield current
    for i in range(1, 1 << len(basis)):
        flip = (i & -i).bit_length() - 1
        current = current ^ basis[flip]
        yield current


def matvec(A, x):
    return A.matvec(x)


def kernel_basis(A):
    return A.kernel_basis()


def enumerate_kernel(A, cap):
    return A.enumerate_kernel(cap)


def rank(A):
    return A.rank()
