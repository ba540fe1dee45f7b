"""Bit-level state-vector kernels: index tables, parities and the fast Walsh-Hadamard transform.

Qubit q of an n-qubit register is bit (n - 1 - q) of the basis index.
"""
import logging
from functools import lru_cache

import numpy as np

logger = logging.getLogger(__name__)

INV_SQRT2 = 1.0 / np.sqrt(2.0)


def qubit_bit(n, q):
    return 1 << (n - 1 - q)


def mask_from_qubits(n, qubits):
    mask = 0
    for q in qubits:
        mask |= qubit_bit(n, q)
    return mask


@lru_cache(maxsize=4)
def basis_indices(n):
    """0..2^n-1 as int64, cached (read-only)"""
    idx = np.arange(1 << n, dtype=np.int64)
    idx.setflags(write=False)
    return idx


def popcount(arr):
    arr = np.asarray(arr)
    if hasattr(np, "bitwise_count"):
        return np.bitwise_count(arr.astype(np.uint64, copy=False)).astype(np.int64)
    # numpy < 2.0
    as_bytes = arr.astype(np.uint64, copy=False).view(np.uint8).reshape(arr.shape + (8,))
    return np.unpackbits(as_bytes, axis=-1).sum(axis=-1).astype(np.int64)


def parity(arr):
    return popcount(arr) & 1


def sign_vector(n, mask, dtype=np.int8):
    """(-1)^{popcount(m & mask)} for every basis index m"""
    if mask == 0:
        return np.ones(1 << n, dtype=dtype)
    return (1 - 2 * parity(basis_indices(n) & mask)).astype(dtype)


def fwht(vec, normalize=True, qubits=None, copy=True):
    """Walsh-Hadamard transform along axis 0 over the given qubits (all by default).

    A 2-D input is a batch of states stored as columns. Works on a fresh copy
    unless copy=False and vec is already a C-contiguous float64/complex128 array,
    in which case vec is transformed in place. One scratch buffer of half the
    state is reused across qubits.
    """
    dtype = np.result_type(vec, np.float64)
    if copy or not (isinstance(vec, np.ndarray) and vec.dtype == dtype and vec.flags.c_contiguous):
        out = np.array(vec, dtype=dtype, order="C", copy=True)
    else:
        out = vec
    size = out.shape[0]
    n = size.bit_length() - 1
    if 1 << n != size:
        raise ValueError(f"length {size} is not a power of two")
    targets = list(range(n)) if qubits is None else list(qubits)
    # complex amplitudes are butterflied as (re, im) float pairs
    flat = (out.view(np.float64) if np.iscomplexobj(out) else out).reshape(size, -1)
    width = flat.shape[1]
    scratch = np.empty((size >> 1) * width, dtype=flat.dtype)
    for q in targets:
        block = (size >> (q + 1)) * width
        pairs = flat.reshape(1 << q, 2, block)
        low, high = pairs[:, 0, :], pairs[:, 1, :]
        saved = scratch.reshape(1 << q, block)
        np.copyto(saved, low)
        low += high
        np.subtract(saved, high, out=high)
    if normalize and targets:
        out *= INV_SQRT2 ** len(targets)
    return out


def along_rows(vec, psi):
    """Shape a per-basis-state vector to broadcast against psi (a state or a batch of columns)"""
    return vec if psi.ndim == 1 else vec.reshape((-1,) + (1,) * (psi.ndim - 1))


def random_state(n, rng, real=False):
    """Complex-Gaussian (or real Gaussian) state, normalized"""
    psi = rng.standard_normal(1 << n)
    if not real:
        psi = psi + 1j * rng.standard_normal(1 << n)
    return psi / np.linalg.norm(psi)


def basis_state(n, index, dtype=np.complex128):
    psi = np.zeros(1 << n, dtype=dtype)
    psi[index] = 1.0
    return psi


def bits_to_index(bits):
    """Qubit-0-first bit sequence to basis index"""
    index = 0
    for b in bits:
        index = (index << 1) | (int(b) & 1)
    return index


def plus_state(n):
    return np.full(1 << n, 2.0 ** (-n / 2), dtype=np.complex128)


def relative_error(a, b):
    scale = max(np.linalg.norm(b), 1e-300)
    return float(np.linalg.norm(np.asarray(a) - np.asarray(b)) / scale)


def max_abs_diff(a, b):
    a = np.asarray(a)
    b = np.asarray(b)
    if a.size == 0:
        return 0.0
    return float(np.max(np.abs(a - b)))
