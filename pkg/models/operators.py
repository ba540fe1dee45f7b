"""Symmetry, duality, translation and condensation operators of a bipartite model.

The duality operator of a reversing automorphism rho is built matrix-free:

    D_rho = 2^{kappa + (|V^| - |E|)/2} · Permute(rho on V^) ∘ H^{⊗|V^|} ∘ |m> -> |sigma m>

so D_rho X_v = B_{rho(v)} D_rho and D_rho B_vhat = X_{rho(vhat)} D_rho.
"""
import logging

import numpy as np

from config import get_config
from core.errors import NotASymmetry
from core.structured_op import ComposeOf, Gf2BasisMap, HLayer, Permute, Scale
from utils.bit_kernels import basis_state, bits_to_index, fwht, plus_state
from utils.gf2 import BitVector
from utils.pauli import OperatorSum, PauliString
from .bipartite import REVERSING

logger = logging.getLogger(__name__)


def _power_of_sqrt2(exponent_times_two):
    k = int(exponent_times_two)
    if k != exponent_times_two:
        raise ValueError(f"2^({exponent_times_two}/2) is not a power of sqrt(2)")
    return float(np.sqrt(2.0) ** k)


# ----- symmetries -----
def eta_for(m, a):
    """eta_a = prod_v X_v^{a_v}; a must lie in ker sigma"""
    if not isinstance(a, BitVector):
        a = BitVector.from_bits(a)
    if a.length != m.n_v:
        raise NotASymmetry(f"indicator of length {a.length} for a model with {m.n_v} qubits")
    if not m.sigma.matvec(a).is_zero():
        raise NotASymmetry(f"{a!r} is not in the kernel of sigma for {m.name}")
    return PauliString(m.n_v, x_bits=a)


def symmetry_ops(m):
    return [eta_for(m, a) for a in m.kernel_basis]


# ----- duality -----
def duality_prefactor(m):
    return _power_of_sqrt2(2 * m.kappa + m.n_vhat - m.n_edges)


def duality_op(m, rho):
    """Structured D_rho for a reversing automorphism (object or name)"""
    if isinstance(rho, str):
        rho = m.automorphism(rho)
    rho.validate(m.sigma)
    ops = [Gf2BasisMap(m.sigma), HLayer(m.n_vhat), Permute(rho.perm_vhat)]
    factor = duality_prefactor(m)
    if factor != 1.0:
        ops.append(Scale(factor, m.n_v))
    return ComposeOf(ops)


def translation_op(m, rho, rho_prime):
    """T_{rho∘rho'} as a qubit permutation: v -> rho(rho'(v))"""
    if isinstance(rho, str):
        rho = m.automorphism(rho)
    if isinstance(rho_prime, str):
        rho_prime = m.automorphism(rho_prime)
    return Permute([rho.perm_vhat[rho_prime.perm_v[v]] for v in range(m.n_v)])


def vertex_permutation(m, pi):
    """Qubit permutation of a preserving automorphism"""
    if isinstance(pi, str):
        pi = m.automorphism(pi)
    if pi.kind == REVERSING:
        raise ValueError(f"{pi.name} is reversing; it has no qubit permutation of its own")
    return Permute(pi.perm_v)


# ----- condensation -----
def condensation_coefficient(m):
    """C = coefficient · sum over ker sigma of eta_a"""
    return 2.0 ** float(2 * m.kappa - m.n_edges + m.n_v)


def absorption_coefficient(m):
    """D C = C D = coefficient · D"""
    return 2.0 ** float(2 * m.kappa + m.kernel_dim - m.n_edges + m.n_v)


def condensation_op(m, cap=None):
    cap = get_config().enum_cap if cap is None else cap
    coef = condensation_coefficient(m)
    terms = [(coef, PauliString(m.n_v, x_bits=a)) for a in m.sigma.enumerate_kernel(cap)]
    logger.debug(f"📊 condensation operator of {m.name}: {len(terms)} terms, coefficient {coef}")
    return OperatorSum(m.n_v, terms)


def hamiltonian_symmetric_terms(m):
    """Ising and transverse terms, the pieces D exchanges"""
    return ([m.ising_term(i) for i in range(m.n_vhat)], [m.transverse_term(v) for v in range(m.n_v)])


# ----- 1+1d extras -----
def parity_op(L):
    """Qubit i -> qubit -i"""
    return Permute([(-i) % L for i in range(L)])


def translation_1d(L, steps=1):
    return Permute([(i + steps) % L for i in range(L)])


def modified_duality(m):
    """D' = D_{reflection} = D_{half_translation} · P, a non-invertible parity"""
    return duality_op(m, "reflection")


def ghz_state(L, sign=1):
    psi = np.zeros(1 << L, dtype=np.complex128)
    psi[0] = 1.0
    psi[-1] += sign
    return psi / np.linalg.norm(psi)


def product_state(bits):
    psi = np.zeros(1 << len(bits), dtype=np.complex128)
    psi[bits_to_index(bits)] = 1.0
    return psi


def duality_eigenbasis_1d(L):
    """(state, D eigenvalue, eta eigenvalue) for the three D-diagonal combinations"""
    plus = plus_state(L)
    ghz = ghz_state(L, 1)
    return [
        ((plus + ghz) / np.sqrt(2.0), np.sqrt(2.0), 1),
        ((plus - ghz) / np.sqrt(2.0), -np.sqrt(2.0), 1),
        (ghz_state(L, -1), 0.0, -1),
    ]


def cn_operator(L, n):
    """1 + (-1)^n eta as a Pauli sum"""
    eta = PauliString.x_string(L, range(L))
    return OperatorSum(L, [(1.0, PauliString.identity(L)), ((-1.0) ** n, eta)])


def kw_matrix(L):
    """Dense sum_m |{(-)^{m_{i-1}+m_i}}><m|, the lattice Kramers-Wannier map"""
    dim = 1 << L
    out = np.zeros((dim, dim), dtype=np.complex128)
    for k in range(dim):
        m = [(k >> (L - 1 - q)) & 1 for q in range(L)]
        signs = [m[(i - 1) % L] ^ m[i] for i in range(L)]
        out[:, k] = fwht(basis_state(L, bits_to_index(signs)))
    return out
