"""Hamiltonians as Pauli sums: generalized TFIM, deformations, Gauss law and defects."""
import logging

from core.errors import BadSurface
from utils.pauli import OperatorSum, PauliString
from .lattice3 import SurfacePath

logger = logging.getLogger(__name__)


def hamiltonian(m, J=1.0, h=1.0):
    """-J sum B_vhat - h sum X_v"""
    H = OperatorSum(m.n_v)
    for i in range(m.n_vhat):
        H.add_term(-J, m.ising_term(i))
    for v in range(m.n_v):
        H.add_term(-h, m.transverse_term(v))
    return H


def deformed_1d(L, J=1.0, lam=0.0):
    """-J [sum (Z_i Z_{i+1} + X_i) - lam/2 sum (X_{i-1} Z_i Z_{i+1} + Z_i Z_{i+1} X_{i+2})]"""
    H = OperatorSum(L)
    for i in range(L):
        H.add_term(-J, PauliString.z_string(L, [i, (i + 1) % L]))
        H.add_term(-J, PauliString.x_string(L, [i]))
    if lam:
        for i in range(L):
            zz = PauliString.z_string(L, [i, (i + 1) % L])
            H.add_term(J * lam / 2, PauliString.x_string(L, [(i - 1) % L]) * zz)
            H.add_term(J * lam / 2, zz * PauliString.x_string(L, [(i + 2) % L]))
    return H


def flux_term(lat, p):
    return PauliString.z_string(lat.n_links, lat.links_of_plaquette(p))


def gauss_term(lat, s):
    return PauliString.x_string(lat.n_links, lat.links_of_site(s))


def gauge3d_with_gauss(lat, J=1.0, h=1.0, g=0.0):
    """-J sum_p prod Z - h sum_l X_l - g sum_s G_s, Gauss law imposed energetically"""
    H = OperatorSum(lat.n_links)
    for p in range(lat.n_plaquettes):
        H.add_term(-J, flux_term(lat, p))
    for ell in range(lat.n_links):
        H.add_term(-h, PauliString.x_string(lat.n_links, [ell]))
    if g:
        for s in range(lat.n_sites):
            H.add_term(-g, gauss_term(lat, s))
    return H


def deformation_terms_3d(lat):
    """X_l prod_{l' in p} Z_l' for every link l orthogonal to p and meeting it at a corner"""
    terms = []
    for p in range(lat.n_plaquettes):
        plaq = flux_term(lat, p)
        for ell in lat.orthogonal_links(p):
            terms.append(PauliString.x_string(lat.n_links, [ell]) * plaq)
    return terms


def deformed_3d(lat, J=1.0, lam=0.0):
    """-J (sum_p prod Z + sum_l X_l - lam/8 sum_{l ⊥ p} X_l prod_p Z)"""
    H = gauge3d_with_gauss(lat, J, J, 0.0)
    if lam:
        for term in deformation_terms_3d(lat):
            H.add_term(J * lam / 8, term)
    return H


def _dual_curve(lat, gamma_hat):
    if isinstance(gamma_hat, SurfacePath):
        if gamma_hat.kind != "dual_curve" or gamma_hat.lattice != lat:
            raise BadSurface(f"defect needs a dual curve on {lat!r}, got a {gamma_hat.kind}")
        return gamma_hat
    return SurfacePath.from_cells(lat, "dual_curve", gamma_hat)


def defect(lat, J=1.0, h=1.0, g=0.0, gamma_hat=()):
    """Plaquette terms crossed by the dual curve change sign"""
    gamma_hat = _dual_curve(lat, gamma_hat)
    crossed = set(gamma_hat.cells)
    H = OperatorSum(lat.n_links)
    for p in range(lat.n_plaquettes):
        H.add_term(J if p in crossed else -J, flux_term(lat, p))
    for ell in range(lat.n_links):
        H.add_term(-h, PauliString.x_string(lat.n_links, [ell]))
    if g:
        for s in range(lat.n_sites):
            H.add_term(-g, gauss_term(lat, s))
    return H


def move_defect(lat, surface):
    """prod_{l in Sigma-hat} X_l; conjugating H_eta(gamma) by it moves the defect across Sigma-hat"""
    if isinstance(surface, SurfacePath):
        if surface.kind != "dual_surface":
            raise BadSurface(f"a defect moves across a dual surface, not a {surface.kind}")
        cells = surface.cells
    else:
        cells = SurfacePath.from_cells(lat, "dual_surface", surface).cells
    return PauliString.x_string(lat.n_links, cells)


def conjugate_by(H, U):
    """U H U^dagger for a Pauli U, term by term"""
    Ud = U.dagger()
    out = OperatorSum(H.n_qubits)
    for c, p in H.terms:
        out.add_term(c, U * p * Ud)
    return out.combine()
