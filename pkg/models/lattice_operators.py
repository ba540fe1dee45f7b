"""Operators and states of the 3+1d Z2 gauge theory on a Lattice3.

Qubits are links. The three non-contractible dual planes are indexed in the
cyclic order of PLANES (xy, yz, zx); membrane labels xi and their dual labels
zeta are 3-tuples of bits in that order.
"""
import itertools
import logging

import numpy as np

from config import get_config
from core.errors import BadCurve, BadSurface
from core.structured_op import ComposeOf, PauliApply, Permute, Scale, SumOf, identity_op
from utils.bit_kernels import basis_state, plus_state
from utils.pauli import OperatorSum, PauliString, product_of_sums
from .lattice3 import CYCLIC_WILSON, PLANES, SurfacePath

logger = logging.getLogger(__name__)

LABELS = tuple(itertools.product((0, 1), repeat=3))


def _labels(bits, what):
    bits = tuple(int(b) for b in bits)
    if len(bits) != 3 or any(b not in (0, 1) for b in bits):
        raise ValueError(f"{what} must be three bits, got {bits}")
    return bits


def _project(psi, paulis, signs=None):
    """prod (1 + s P)/2 applied to psi, for commuting Paulis"""
    signs = signs or [1] * len(paulis)
    for p, s in zip(paulis, signs):
        psi = 0.5 * (psi + s * p.apply(psi))
    return psi


def projector_op(paulis, signs=None):
    """prod (1 + s P)/2 as a structured operator"""
    signs = signs or [1] * len(paulis)
    n = paulis[0].n_qubits
    return ComposeOf([SumOf([(0.5, identity_op(n)), (0.5 * s, PauliApply(p))]) for p, s in zip(paulis, signs)])


class LatticeOperators:

    def __init__(self, lat):
        self.lat = lat
        self.n = lat.n_links
        self._toric = {}
        self._flux_free_plus = None

    # ----- Pauli operators -----
    def gauss(self, s):
        """G_s = prod of X over the six links at site s"""
        return PauliString.x_string(self.n, self.lat.links_of_site(s))

    def flux(self, p):
        """B_p = prod of Z around plaquette p"""
        return PauliString.z_string(self.n, self.lat.links_of_plaquette(p))

    def _surface(self, sigma_hat):
        if isinstance(sigma_hat, SurfacePath):
            if sigma_hat.kind != "dual_surface" or sigma_hat.lattice != self.lat:
                raise BadSurface(f"expected a dual surface on {self.lat!r}, got a {sigma_hat.kind}")
            return sigma_hat
        return SurfacePath.from_cells(self.lat, "dual_surface", sigma_hat)

    def _curve(self, gamma):
        if isinstance(gamma, SurfacePath):
            if gamma.kind != "curve" or gamma.lattice != self.lat:
                raise BadCurve(f"expected a curve on {self.lat!r}, got a {gamma.kind}")
            return gamma
        return SurfacePath.from_cells(self.lat, "curve", gamma)

    def eta_surface(self, sigma_hat, truncated=False):
        """eta(Sigma-hat) = prod of X over the links crossing the dual surface.

        An open surface gives a truncated operator that is not a symmetry;
        it is only built when asked for with truncated=True.
        """
        surface = self._surface(sigma_hat)
        if not surface.is_closed():
            if not truncated:
                raise BadSurface("dual surface is open; pass truncated=True for a truncated operator")
            logger.debug(f"⚠️ truncated 1-form operator on {len(surface.cells)} links")
        return PauliString.x_string(self.n, surface.cells)

    def eta_plane(self, i, j):
        return self.eta_surface(self.lat.dual_plane(i, j))

    def planes(self):
        return [self.eta_plane(i, j) for i, j in PLANES]

    def wilson(self, gamma):
        """W(gamma) = prod of Z over the links of the curve; open curves allowed"""
        return PauliString.z_string(self.n, self._curve(gamma).cells)

    def wilson_lines(self):
        """W_k paired with the planes in PLANES order: xy <-> z, yz <-> x, zx <-> y"""
        return [self.wilson(self.lat.wilson_line(CYCLIC_WILSON[plane])) for plane in PLANES]

    # ----- lattice symmetries -----
    def translation(self, a):
        return Permute(self.lat.translation_links(tuple(a)))

    def t111(self):
        return self.translation((1, 1, 1))

    def parity(self):
        return Permute(self.lat.parity_links)

    def rotation(self):
        """2pi/3 rotation about the (1,1,1) axis; needs a cubic lattice"""
        return Permute(self.lat.rotation_links)

    # ----- toric code states -----
    def toric_support(self, xi):
        """(basis indices, amplitudes) of |xi>; it has 2^{V-1} nonzero entries"""
        xi = _labels(xi, "xi")
        if xi not in self._toric:
            V = self.lat.n_sites
            psi = _project(basis_state(self.n, 0), [self.gauss(s) for s in range(V)])
            for bit, eta in zip(xi, self.planes()):
                if bit:
                    psi = eta.apply(psi)
            psi *= 2.0 ** ((V - 1) / 2)
            index = np.flatnonzero(np.abs(psi) > 1e-14)
            self._toric[xi] = (index, psi[index].copy())
        return self._toric[xi]

    def toric_state(self, xi):
        """|xi> = 2^{(V-1)/2} prod eta_ij^{xi_ij} prod_s (1+G_s)/2 |0...0>, normalized"""
        index, amps = self.toric_support(xi)
        psi = np.zeros(1 << self.n, dtype=np.complex128)
        psi[index] = amps
        return psi

    def zeta_state(self, zeta):
        """(1/2sqrt2) sum_xi (-1)^{zeta.xi} |xi>, diagonalizing the three eta_ij"""
        zeta = _labels(zeta, "zeta")
        out = np.zeros(1 << self.n, dtype=np.complex128)
        for xi in LABELS:
            sign = (-1) ** sum(a * b for a, b in zip(zeta, xi))
            index, amps = self.toric_support(xi)
            out[index] += sign * amps
        return out / (2.0 * np.sqrt(2.0))

    def membrane_gas_state(self, zeta):
        """2 * 2^{V/2} prod (1 + (-1)^{zeta_ij} eta_ij)/2 prod_s (1+G_s)/2 |0...0>"""
        zeta = _labels(zeta, "zeta")
        V = self.lat.n_sites
        psi = _project(basis_state(self.n, 0), [self.gauss(s) for s in range(V)])
        psi = _project(psi, self.planes(), [(-1) ** b for b in zeta])
        return psi * 2.0 * 2.0 ** (V / 2)

    def flux_free_plus(self):
        """prod_p (1+B_p)/2 |+...+>, computed once"""
        if self._flux_free_plus is None:
            self._flux_free_plus = _project(plus_state(self.n), [self.flux(p) for p in range(self.lat.n_plaquettes)])
        return self._flux_free_plus.copy()

    def loop_gas_state(self, zeta):
        """2^{V-1} prod W_k^{zeta_ij} prod_p (1+B_p)/2 |+...+>"""
        zeta = _labels(zeta, "zeta")
        V = self.lat.n_sites
        psi = self.flux_free_plus()
        for bit, w in zip(zeta, self.wilson_lines()):
            if bit:
                psi = w.apply(psi)
        return psi * 2.0 ** (V - 1)

    def toric_state_loop_form(self, xi):
        """sqrt2 * 2^V prod (1 + (-1)^{xi_ij} W_k)/2 prod_p (1+B_p)/2 |+...+>, equal to |xi>"""
        xi = _labels(xi, "xi")
        V = self.lat.n_sites
        psi = self.flux_free_plus()
        psi = _project(psi, self.wilson_lines(), [(-1) ** b for b in xi])
        return psi * np.sqrt(2.0) * 2.0 ** V

    def duality_eigenbasis(self):
        """Yields (state, D eigenvalue): (|+> ± |zeta=0>) with ±2, the seven |zeta != 0> with 0"""
        plus = plus_state(self.n)
        zeta0 = self.zeta_state((0, 0, 0))
        for sign in (1, -1):
            v = plus + sign * zeta0
            yield v / np.linalg.norm(v), 2.0 * sign
        del plus, zeta0
        for zeta in LABELS[1:]:
            yield self.zeta_state(zeta), 0.0

    # ----- condensation operators -----
    def _two_term(self, p, sign=1, scale=0.5):
        return OperatorSum(self.n, [(scale, PauliString.identity(self.n)), (scale * sign, p)])

    def condensation_pauli_form(self):
        """C = 1/2 prod_{i<j} (1 + eta_ij) prod_s (1+G_s)/2"""
        factors = [self._two_term(eta, scale=1.0) for eta in self.planes()]
        factors += [self._two_term(self.gauss(s)) for s in range(self.lat.n_sites)]
        return product_of_sums(self.n, factors) * 0.5

    def condensation_surface_sum(self, cap=None):
        """C = 2^{-V} sum over closed dual surfaces of eta(Sigma-hat)"""
        cap = get_config().enum_cap if cap is None else cap
        coef = 2.0 ** -self.lat.n_sites
        surfaces = self.lat.plaquette_link_matrix.enumerate_kernel(cap)
        return OperatorSum(self.n, [(coef, PauliString(self.n, x_bits=a)) for a in surfaces])

    def higher_condensation(self, gamma):
        """C(gamma): what C becomes after a Wilson line W(gamma) is pushed through it.

        C(gamma) = 1/2 prod_{i<j} [1 + (-1)^{<gamma, Sigma_ij>} eta_ij]
                   prod_s (1 + (-1)^{d gamma(s)} G_s)/2
        so that C W(gamma) = W(gamma) C(gamma).
        """
        curve = self._curve(gamma)
        factors = []
        for i, j in PLANES:
            crossing = curve.intersection(self.lat.dual_plane(i, j))
            factors.append(self._two_term(self.eta_plane(i, j), (-1) ** crossing, 1.0))
        ends = curve.boundary()
        for s in range(self.lat.n_sites):
            factors.append(self._two_term(self.gauss(s), (-1) ** ends[s]))
        return product_of_sums(self.n, factors) * 0.5

    def two_form_condensation(self, cap=None):
        """C2 = 2^{-2V} sum over closed curves of W(gamma)"""
        cap = get_config().enum_cap if cap is None else cap
        coef = 2.0 ** (-2 * self.lat.n_sites)
        curves = self.lat.site_link_matrix.enumerate_kernel(cap)
        out = OperatorSum(self.n, [(coef, PauliString(self.n, z_bits=c)) for c in curves])
        logger.debug(f"📊 two-form condensation on {self.lat!r}: {len(out)} closed curves")
        return out

    def two_form_condensation_op(self):
        """C2 = 1/4 prod_k (1 + W_k) prod_p (1+B_p)/2, matrix-free"""
        n_plaq = self.lat.n_plaquettes
        return ComposeOf([
            projector_op([self.flux(p) for p in range(n_plaq)]),
            projector_op(self.wilson_lines()),
            Scale(2.0, self.n),
        ])

    def condensation_projector_op(self):
        """C = 4 prod_{i<j} (1+eta_ij)/2 prod_s (1+G_s)/2, matrix-free"""
        return ComposeOf([
            projector_op([self.gauss(s) for s in range(self.lat.n_sites)]),
            projector_op(self.planes()),
            Scale(4.0, self.n),
        ])


def lattice_operators(lat):
    return LatticeOperators(lat)
