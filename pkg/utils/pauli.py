"""Symplectic Pauli strings and complex-weighted operator sums.

Convention: a PauliString is i^phase * prod_q X_q^{x_q} Z_q^{z_q}, X before Z on
every qubit. So Y = i X Z. State application follows utils.bit_kernels
(qubit 0 is the most significant index bit).
"""
import logging
from functools import cached_property

import numpy as np

from core.errors import DimensionMismatch, TooLarge, ZeroState
from .bit_kernels import along_rows, basis_indices, fwht, sign_vector
from .gf2 import BitVector

logger = logging.getLogger(__name__)

COEFF_TOL = 1e-13
# beyond this many X patterns an X-only sum is applied through the Walsh-Hadamard basis
WHT_GROUP_THRESHOLD = 64

_I_POWERS = (1, 1j, -1, -1j)


class PauliString:

    def __init__(self, n_qubits, x_bits=None, z_bits=None, phase=0):
        self.n_qubits = n_qubits
        self.x_bits = x_bits if x_bits is not None else BitVector(n_qubits)
        self.z_bits = z_bits if z_bits is not None else BitVector(n_qubits)
        if self.x_bits.length != n_qubits or self.z_bits.length != n_qubits:
            raise DimensionMismatch("x/z bit vectors must have n_qubits bits")
        self.phase = phase % 4

    # ----- constructors -----
    @classmethod
    def identity(cls, n):
        return cls(n)

    @classmethod
    def from_label(cls, label):
        """'XIZY' style label, qubit 0 first"""
        n = len(label)
        xs, zs, phase = [], [], 0
        for ch in label.upper():
            if ch not in "IXYZ":
                raise ValueError(f"bad Pauli letter {ch!r}")
            xs.append(1 if ch in "XY" else 0)
            zs.append(1 if ch in "ZY" else 0)
            phase += 1 if ch == "Y" else 0
        return cls(n, BitVector.from_bits(xs), BitVector.from_bits(zs), phase)

    @classmethod
    def from_sparse(cls, n, ops):
        """ops: {qubit: 'X'|'Y'|'Z'}"""
        label = ["I"] * n
        for q, ch in ops.items():
            label[q] = ch
        return cls.from_label("".join(label))

    @classmethod
    def x_string(cls, n, qubits):
        return cls(n, BitVector.from_indices(n, qubits), BitVector(n))

    @classmethod
    def z_string(cls, n, qubits):
        return cls(n, BitVector(n), BitVector.from_indices(n, qubits))

    # ----- masks -----
    @cached_property
    def x_mask(self):
        return self.x_bits.to_mask()

    @cached_property
    def z_mask(self):
        return self.z_bits.to_mask()

    def key(self):
        return (self.x_mask, self.z_mask)

    def is_identity(self):
        return self.x_bits.is_zero() and self.z_bits.is_zero()

    def is_x_type(self):
        return self.z_bits.is_zero()

    def is_z_type(self):
        return self.x_bits.is_zero()

    def weight(self):
        return (self.x_bits.to_array() | self.z_bits.to_array()).sum()

    # ----- algebra -----
    def _check(self, other):
        if self.n_qubits != other.n_qubits:
            raise DimensionMismatch(f"{self.n_qubits}-qubit vs {other.n_qubits}-qubit Pauli strings")

    def __mul__(self, other):
        return multiply(self, other)

    def commutes(self, other):
        return commutes(self, other)

    def dagger(self):
        overlap = (self.x_bits & self.z_bits).weight()
        return PauliString(self.n_qubits, self.x_bits, self.z_bits, -self.phase + 2 * overlap)

    def is_hermitian(self):
        return (self.phase - (self.x_bits & self.z_bits).weight()) % 2 == 0

    def to_dense(self):
        n = self.n_qubits
        dim = 1 << n
        cols = np.eye(dim, dtype=np.complex128)
        return np.stack([self.apply(cols[:, k]) for k in range(dim)], axis=1)

    def apply(self, psi):
        psi = np.asarray(psi)
        n = self.n_qubits
        if psi.shape[0] != 1 << n:
            raise DimensionMismatch(f"{n}-qubit Pauli on a length-{psi.shape[0]} state")
        phi = psi
        if self.z_mask:
            phi = phi * along_rows(sign_vector(n, self.z_mask), psi)
        if self.x_mask:
            phi = flip_bits(phi, n, self.x_mask)
        if self.phase:
            phi = phi * _I_POWERS[self.phase]
        return np.array(phi, copy=True) if phi is psi else phi

    def __eq__(self, other):
        return (isinstance(other, PauliString) and self.n_qubits == other.n_qubits
                and self.phase == other.phase and self.x_bits == other.x_bits and self.z_bits == other.z_bits)

    def __hash__(self):
        return hash((self.n_qubits, self.phase, self.x_bits, self.z_bits))

    def label(self):
        xs, zs = self.x_bits.to_list(), self.z_bits.to_list()
        letters = []
        for x, z in zip(xs, zs):
            letters.append({(0, 0): "I", (1, 0): "X", (0, 1): "Z", (1, 1): "Y"}[(x, z)])
        # Y letters carry i^-1 relative to X Z
        phase = (self.phase - sum(x & z for x, z in zip(xs, zs))) % 4
        prefix = {0: "", 1: "i", 2: "-", 3: "-i"}[phase]
        return prefix + "".join(letters)

    def __repr__(self):
        return f"PauliString({self.label()})"


def flip_bits(psi, n, x_mask):
    """psi[m ^ x_mask] for every m, as a flip of the qubit axes (columns of a batch flip together)"""
    axes = tuple(q for q in range(n) if (x_mask >> (n - 1 - q)) & 1)
    return np.flip(psi.reshape((2,) * n + psi.shape[1:]), axis=axes).reshape(psi.shape)


def multiply(a, b):
    a._check(b)
    # Z^za X^xb = (-1)^{za.xb} X^xb Z^za
    swap_sign = 2 * (a.z_bits & b.x_bits).weight()
    return PauliString(a.n_qubits, a.x_bits ^ b.x_bits, a.z_bits ^ b.z_bits, a.phase + b.phase + swap_sign)


def commutes(a, b):
    a._check(b)
    return ((a.x_bits & b.z_bits).weight() + (a.z_bits & b.x_bits).weight()) % 2 == 0


class OperatorSum:
    """Sum of c_k P_k; kept lazy until combine() is called"""

    def __init__(self, n_qubits, terms=None):
        self.n_qubits = n_qubits
        self.terms = []
        self._combined = None
        self._kernel = None
        for coef, p in terms or ():
            self.add_term(coef, p)

    @classmethod
    def identity(cls, n, coef=1.0):
        return cls(n, [(coef, PauliString.identity(n))])

    @classmethod
    def from_pauli(cls, p, coef=1.0):
        return cls(p.n_qubits, [(coef, p)])

    def add_term(self, coef, p):
        if p.n_qubits != self.n_qubits:
            raise DimensionMismatch(f"{p.n_qubits}-qubit term in a {self.n_qubits}-qubit sum")
        self.terms.append((complex(coef), p))
        self._combined = None
        self._kernel = None
        return self

    def __len__(self):
        return len(self.terms)

    def combine(self):
        """Canonical form: phases folded into coefficients, sorted by bit pattern, zeros dropped"""
        if self._combined is not None:
            return self._combined
        acc = {}
        strings = {}
        for coef, p in self.terms:
            key = p.key()
            acc[key] = acc.get(key, 0j) + coef * _I_POWERS[p.phase]
            if key not in strings:
                strings[key] = PauliString(self.n_qubits, p.x_bits, p.z_bits, 0)
        out = OperatorSum(self.n_qubits)
        out.terms = [(acc[k], strings[k]) for k in sorted(acc) if abs(acc[k]) > COEFF_TOL]
        out._combined = out
        self._combined = out
        return out

    def __add__(self, other):
        if not isinstance(other, OperatorSum):
            other = OperatorSum.identity(self.n_qubits, other)
        if other.n_qubits != self.n_qubits:
            raise DimensionMismatch("operator sums on different qubit counts")
        return OperatorSum(self.n_qubits, self.terms + other.terms)

    __radd__ = __add__

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, OperatorSum):
            return self.product(other)
        if isinstance(other, PauliString):
            return self.product(OperatorSum.from_pauli(other))
        return OperatorSum(self.n_qubits, [(c * other, p) for c, p in self.terms])

    def __rmul__(self, other):
        if isinstance(other, PauliString):
            return OperatorSum.from_pauli(other).product(self)
        return self * other

    def product(self, other):
        """Operator product, expanded and combined"""
        if other.n_qubits != self.n_qubits:
            raise DimensionMismatch("operator sums on different qubit counts")
        left = self.combine().terms
        right = other.combine().terms
        out = OperatorSum(self.n_qubits)
        for c1, p1 in left:
            for c2, p2 in right:
                out.terms.append((c1 * c2, multiply(p1, p2)))
        return out.combine()

    def dagger(self):
        return OperatorSum(self.n_qubits, [(c.conjugate(), p.dagger()) for c, p in self.terms])

    def is_hermitian(self, tol=1e-12):
        a = dict((p.key(), c) for c, p in self.combine().terms)
        b = dict((p.key(), c) for c, p in self.dagger().combine().terms)
        keys = set(a) | set(b)
        return all(abs(a.get(k, 0) - b.get(k, 0)) <= tol for k in keys)

    def is_x_type(self):
        return all(p.is_x_type() for _, p in self.terms)

    def is_z_type(self):
        return all(p.is_z_type() for _, p in self.terms)

    def to_dense(self, cap=12):
        if self.n_qubits > cap:
            raise TooLarge(f"{self.n_qubits} qubits exceeds dense cap {cap}")
        dim = 1 << self.n_qubits
        eye = np.eye(dim, dtype=np.complex128)
        return np.stack([self.apply(eye[:, k]) for k in range(dim)], axis=1)

    def kernel(self):
        if self._kernel is None:
            self._kernel = PauliKernel(self)
        return self._kernel

    def apply(self, psi):
        return opsum_apply(self, psi)

    def __repr__(self):
        return f"OperatorSum(n={self.n_qubits}, terms={len(self.terms)})"


class PauliKernel:
    """An OperatorSum compiled for repeated application.

    Terms are grouped by X pattern; each group is a diagonal D_x (sum of Z
    strings) followed by a bit flip. Sign vectors of repeated Z masks are
    cached as int8 up to the cache budget.
    """

    def __init__(self, opsum, cache_mb=512):
        combined = opsum.combine()
        self.n = opsum.n_qubits
        self.terms = combined.terms
        self.real = all(abs(c.imag) <= COEFF_TOL for c, _ in self.terms)
        groups = {}
        for coef, p in self.terms:
            groups.setdefault(p.x_mask, []).append((coef.real if self.real else coef, p.z_mask))
        self.groups = sorted(groups.items())
        self.x_only = all(z == 0 for _, g in self.groups for _, z in g)
        self.z_only = len(self.groups) == 1 and self.groups[0][0] == 0 if self.groups else True
        self._cache = {}
        self._cache_budget = (cache_mb << 20) // max(1, 1 << self.n)
        self._wht_diag = None

    def _signs(self, mask):
        s = self._cache.get(mask)
        if s is None:
            s = sign_vector(self.n, mask)
            if len(self._cache) < self._cache_budget:
                self._cache[mask] = s
        return s

    def _walsh_diagonal(self, entries):
        dense = np.zeros(1 << self.n, dtype=np.float64 if self.real else np.complex128)
        for coef, mask in entries:
            dense[mask] += coef
        return fwht(dense, normalize=False)

    def _diagonal_apply(self, psi, entries):
        c0 = sum(c for c, z in entries if z == 0)
        rest = [(c, z) for c, z in entries if z != 0]
        out = psi * c0 if c0 else np.zeros_like(psi)
        if not rest:
            return out
        coefs = {c for c, _ in rest}
        if len(coefs) == 1 and len(rest) < 32000:
            acc_type = np.int8 if len(rest) < 128 else np.int32
            total = np.zeros(1 << self.n, dtype=acc_type)
            for _, z in rest:
                np.add(total, self._signs(z), out=total, casting="unsafe")
            out += coefs.pop() * (along_rows(total, psi) * psi)
        else:
            for c, z in rest:
                out += c * (along_rows(self._signs(z), psi) * psi)
        return out

    def apply(self, psi):
        psi = np.asarray(psi)
        if psi.shape[0] != 1 << self.n:
            raise DimensionMismatch(f"{self.n}-qubit sum applied to a length-{psi.shape[0]} state")
        dtype = np.result_type(psi, np.float64 if self.real else np.complex128)
        psi = psi.astype(dtype, copy=False)
        if not self.groups:
            return np.zeros_like(psi)
        if self.x_only and len(self.groups) > WHT_GROUP_THRESHOLD:
            if self._wht_diag is None:
                self._wht_diag = self._walsh_diagonal([(g[0][0], x) for x, g in self.groups])
            phi = fwht(psi)
            phi *= along_rows(self._wht_diag, phi)
            return fwht(phi, copy=False)
        if self.z_only and len(self.groups[0][1]) > WHT_GROUP_THRESHOLD:
            if self._wht_diag is None:
                self._wht_diag = self._walsh_diagonal(self.groups[0][1])
            return along_rows(self._wht_diag, psi) * psi
        out = np.zeros_like(psi)
        for x_mask, entries in self.groups:
            phi = self._diagonal_apply(psi, entries)
            out += flip_bits(phi, self.n, x_mask) if x_mask else phi
        return out


def opsum_apply(h, psi):
    return h.kernel().apply(psi)


def expectation(h, psi):
    psi = np.asarray(psi)
    norm2 = np.vdot(psi, psi).real
    if norm2 == 0:
        raise ZeroState("expectation value of the zero vector")
    return complex(np.vdot(psi, opsum_apply(h, psi)) / norm2)


def product_of_sums(n, factors):
    out = OperatorSum.identity(n)
    for f in factors:
        out = out.product(f)
    return out


def coefficient_distance(a, b):
    """Largest coefficient difference between two sums after combining"""
    if a.n_qubits != b.n_qubits:
        raise DimensionMismatch("operator sums on different qubit counts")
    left = {p.key(): c for c, p in a.combine().terms}
    right = {p.key(): c for c, p in b.combine().terms}
    return max((abs(left.get(k, 0) - right.get(k, 0)) for k in set(left) | set(right)), default=0.0)
