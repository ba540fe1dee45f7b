"""Matrix-free structured operators acting on state vectors.

A StructuredOp is a small tree of primitives. ComposeOf applies its list
first-to-last, so ComposeOf([A, B]) is the operator B·A.
"""
import logging
from dataclasses import dataclass, field

import numpy as np

from config import get_config
from utils.bit_kernels import fwht
from .errors import ArityMismatch, TooLarge

logger = logging.getLogger(__name__)


class StructuredOp:
    n_in = 0
    n_out = 0

    def apply(self, psi):
        raise NotImplementedError

    def adjoint(self):
        raise NotImplementedError

    def _check(self, psi):
        # a 2-D psi is a batch of states stored as columns
        if psi.ndim not in (1, 2) or psi.shape[0] != 1 << self.n_in:
            raise ArityMismatch(
                f"{type(self).__name__} expects {self.n_in} qubits, got a length-{psi.shape[0]} state")

    def __matmul__(self, other):
        """self @ other = self·other (other applied first)"""
        return ComposeOf([other, self])


@dataclass
class Gf2BasisMap(StructuredOp):
    """|m> -> |A m>, amplitudes accumulated on collisions"""
    matrix: object

    def __post_init__(self):
        self.n_in = self.matrix.cols
        self.n_out = self.matrix.rows

    def apply(self, psi):
        self._check(psi)
        table = self.matrix.image_table()
        size = 1 << self.n_out
        dtype = np.result_type(psi, np.float64)
        flat = np.ascontiguousarray(psi, dtype=dtype)
        flat = (flat.view(np.float64) if np.iscomplexobj(flat) else flat).reshape(len(table), -1)
        width = flat.shape[1]
        # one bincount over every float column: row m, column j lands in slot (A m) * width + j
        slots = table if width == 1 else (table[:, None] * width + np.arange(width)).ravel()
        out = np.bincount(slots, weights=flat.ravel(), minlength=size * width)
        shape = (size,) + psi.shape[1:]
        return (out.view(dtype) if dtype != out.dtype else out).reshape(shape)

    def adjoint(self):
        return Gf2BasisGather(self.matrix)


@dataclass
class Gf2BasisGather(StructuredOp):
    """Adjoint of Gf2BasisMap: out[m] = in[A m]"""
    matrix: object

    def __post_init__(self):
        self.n_in = self.matrix.rows
        self.n_out = self.matrix.cols

    def apply(self, psi):
        self._check(psi)
        return psi[self.matrix.image_table()]

    def adjoint(self):
        return Gf2BasisMap(self.matrix)


@dataclass
class HLayer(StructuredOp):
    n: int
    qubits: tuple = None

    def __post_init__(self):
        self.n_in = self.n_out = self.n

    def apply(self, psi):
        self._check(psi)
        return fwht(psi, normalize=True, qubits=self.qubits)

    def adjoint(self):
        return self


@dataclass
class PauliApply(StructuredOp):
    pauli: object

    def __post_init__(self):
        self.n_in = self.n_out = self.pauli.n_qubits

    def apply(self, psi):
        self._check(psi)
        return self.pauli.apply(psi)

    def adjoint(self):
        return PauliApply(self.pauli.dagger())


@dataclass
class OpSumApply(StructuredOp):
    """An OperatorSum wrapped as a primitive"""
    opsum: object

    def __post_init__(self):
        self.n_in = self.n_out = self.opsum.n_qubits

    def apply(self, psi):
        self._check(psi)
        return self.opsum.apply(psi)

    def adjoint(self):
        return OpSumApply(self.opsum.dagger())


@dataclass
class Permute(StructuredOp):
    """Moves the qubit at position q to position perm[q]"""
    perm: tuple

    def __post_init__(self):
        self.perm = tuple(int(p) for p in self.perm)
        if sorted(self.perm) != list(range(len(self.perm))):
            raise ValueError(f"not a permutation: {self.perm}")
        self.n_in = self.n_out = len(self.perm)

    def apply(self, psi):
        self._check(psi)
        n = self.n_in
        if n == 0:
            return psi.copy()
        inverse = [0] * n
        for q, p in enumerate(self.perm):
            inverse[p] = q
        tail = psi.shape[1:]
        axes = inverse + list(range(n, n + len(tail)))
        return np.ascontiguousarray(psi.reshape((2,) * n + tail).transpose(axes)).reshape(psi.shape)

    def inverse(self):
        inv = [0] * len(self.perm)
        for q, p in enumerate(self.perm):
            inv[p] = q
        return Permute(tuple(inv))

    def compose(self, other):
        """Permutation applying other first, then self"""
        return Permute(tuple(self.perm[other.perm[q]] for q in range(len(self.perm))))

    def power(self, k):
        result = Permute(tuple(range(len(self.perm))))
        base = self if k >= 0 else self.inverse()
        for _ in range(abs(k)):
            result = base.compose(result)
        return result

    def adjoint(self):
        return self.inverse()


@dataclass
class Scale(StructuredOp):
    factor: complex
    n: int

    def __post_init__(self):
        self.n_in = self.n_out = self.n

    def apply(self, psi):
        self._check(psi)
        return psi * self.factor

    def adjoint(self):
        return Scale(np.conj(self.factor), self.n)


@dataclass
class SumOf(StructuredOp):
    """Weighted sum, reduced in list order"""
    terms: list = field(default_factory=list)

    def __post_init__(self):
        if not self.terms:
            raise ValueError("SumOf needs at least one term")
        self.n_in = self.terms[0][1].n_in
        self.n_out = self.terms[0][1].n_out
        for _, op in self.terms:
            if (op.n_in, op.n_out) != (self.n_in, self.n_out):
                raise ArityMismatch("SumOf terms must share arities")

    def apply(self, psi):
        self._check(psi)
        out = None
        for weight, op in self.terms:
            part = weight * op.apply(psi)
            out = part if out is None else out + part
        return out

    def adjoint(self):
        return SumOf([(np.conj(w), op.adjoint()) for w, op in self.terms])


@dataclass
class ComposeOf(StructuredOp):
    ops: list = field(default_factory=list)

    def __post_init__(self):
        if not self.ops:
            raise ValueError("ComposeOf needs at least one operator")
        for first, second in zip(self.ops, self.ops[1:]):
            if first.n_out != second.n_in:
                raise ArityMismatch(
                    f"{type(first).__name__} outputs {first.n_out} qubits but "
                    f"{type(second).__name__} takes {second.n_in}")
        self.n_in = self.ops[0].n_in
        self.n_out = self.ops[-1].n_out

    def apply(self, psi):
        self._check(psi)
        for op in self.ops:
            psi = op.apply(psi)
        return psi

    def adjoint(self):
        return ComposeOf([op.adjoint() for op in reversed(self.ops)])


def identity_op(n):
    return Scale(1.0, n)


def apply_structured(op, psi):
    psi = np.asarray(psi)
    return op.apply(psi)


def structured_to_dense(op, n=None, cap=None):
    n = op.n_in if n is None else n
    if n != op.n_in:
        raise ArityMismatch(f"operator takes {op.n_in} qubits, not {n}")
    cap = get_config().dense_cap if cap is None else cap
    if max(op.n_in, op.n_out) > cap:
        raise TooLarge(f"{max(op.n_in, op.n_out)} qubits exceeds dense cap {cap}")
    dim = 1 << n
    eye = np.eye(dim, dtype=np.complex128)
    return np.stack([op.apply(eye[:, k]) for k in range(dim)], axis=1)
