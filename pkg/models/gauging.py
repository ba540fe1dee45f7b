"""Gauging the internal symmetry of a bipartite model, and the unitary gauge that undoes it.

Gauge qubits sit on V-hat. With qubits ordered (V, V-hat):
    Gauss law        G_v    = X_v prod_{vhat ∋ v} Z_vhat
    minimal coupling B_vhat -> X_vhat B_vhat
    flux terms       prod_vhat X_vhat^{b}  for b in ker sigma^T
Fixing the gauge Z_v = 1 maps the gauge-invariant algebra onto V-hat alone
and turns the gauged Hamiltonian into the dual model with J and h exchanged.
"""
import logging
from dataclasses import dataclass, field

from core.errors import NotASymmetry
from utils.gf2 import BitVector
from utils.pauli import OperatorSum, PauliString

logger = logging.getLogger(__name__)


@dataclass
class GaugedSystem:
    model: object
    hamiltonian: OperatorSum
    gauss: list = field(default_factory=list)
    flux: list = field(default_factory=list)

    @property
    def n_qubits(self):
        return self.model.n_v + self.model.n_vhat

    def is_gauge_invariant(self, p):
        return all(p.commutes(g) for g in self.gauss)


def _embed(m, x_v=(), z_v=(), x_vhat=(), z_vhat=()):
    n = m.n_v + m.n_vhat
    xs = list(x_v) + [m.n_v + j for j in x_vhat]
    zs = list(z_v) + [m.n_v + j for j in z_vhat]
    return PauliString(n, BitVector.from_indices(n, xs), BitVector.from_indices(n, zs))


def gauge_model(m, J=1.0, h=1.0, g_hat=1.0, flux=None):
    """flux: V-hat indicator lists spanning ker sigma^T (its basis by default)"""
    sigma_t = m.sigma.transpose()
    if flux is None:
        flux = [b.support() for b in sigma_t.kernel_basis()]
    gauss = []
    for v in range(m.n_v):
        rows = [i for i, j in m.edges if j == v]
        gauss.append(_embed(m, x_v=[v], z_vhat=rows))
    H = OperatorSum(m.n_v + m.n_vhat)
    for i in range(m.n_vhat):
        H.add_term(-J, _embed(m, z_v=m.sigma.row(i).support(), x_vhat=[i]))
    for v in range(m.n_v):
        H.add_term(-h, _embed(m, x_v=[v]))
    flux_terms = []
    for cells in flux:
        if not sigma_t.matvec(BitVector.from_indices(m.n_vhat, cells)).is_zero():
            raise NotASymmetry(f"flux term on {cells} does not commute with the Gauss law")
        term = _embed(m, x_vhat=cells)
        flux_terms.append(term)
        if g_hat:
            H.add_term(-g_hat, term)
    logger.debug(f"🔄 gauged {m.name}: {len(H)} terms, {len(gauss)} Gauss operators")
    return GaugedSystem(m, H, gauss, flux_terms)


def unitary_gauge(system, p):
    """Gauge-invariant Pauli on (V, V-hat) -> Pauli on V-hat, using G_v and Z_v = 1"""
    m = system.model
    if not system.is_gauge_invariant(p):
        raise NotASymmetry(f"{p!r} does not commute with the Gauss law")
    for v in p.x_bits.support():
        if v < m.n_v:
            p = p * system.gauss[v]
    xs = [q - m.n_v for q in p.x_bits.support()]
    zs = [q - m.n_v for q in p.z_bits.support() if q >= m.n_v]
    # no X is left on V, so the Z_v factors commute out and the gauge sets them to one
    return PauliString(m.n_vhat, BitVector.from_indices(m.n_vhat, xs), BitVector.from_indices(m.n_vhat, zs), p.phase)


def fixed_hamiltonian(system):
    out = OperatorSum(system.model.n_vhat)
    for c, p in system.hamiltonian.terms:
        out.add_term(c, unitary_gauge(system, p))
    return out.combine()


def gauged_gauge3d(lat, J=1.0, h=1.0, g_hat=1.0):
    """Gauge fields on plaquettes, one flux term per cube"""
    from .builders import gauge3d
    m = gauge3d(lat.Lx, lat.Ly, lat.Lz)
    return gauge_model(m, J, h, g_hat, flux=[lat.plaquettes_of_cube(c) for c in range(lat.n_cubes)])
