import pytest

from core.errors import NotASymmetry
from models.bipartite import gauged
from models.builders import build_model
from models.gauging import fixed_hamiltonian, gauge_model, gauged_gauge3d, unitary_gauge
from models.hamiltonians import hamiltonian
from models.lattice3 import Lattice3
from utils.pauli import PauliString, coefficient_distance


@pytest.mark.parametrize("kind, args", [
    ("ising_chain", (4,)),
    ("three_spin", (6,)),
    ("ising_square", (2, 2)),
    ("plaquette_ising", (2, 3)),
])
def test_gauging_then_fixing_gives_the_dual_model(kind, args):
    m = build_model(kind, *args)
    system = gauge_model(m, J=1.0, h=0.7, g_hat=0.0)
    assert coefficient_distance(fixed_hamiltonian(system), hamiltonian(gauged(m), J=0.7, h=1.0)) <= 1e-12


def test_gauss_law_commutes_with_every_term():
    system = gauge_model(build_model("ising_square", 2, 2))
    assert all(system.is_gauge_invariant(p) for _, p in system.hamiltonian.terms)
    assert len(system.gauss) == 4
    # ker sigma^T of the 2x2 square lattice: one flux per plaquette up to the global relation, plus two cycles
    assert len(system.flux) == 5
    assert system.n_qubits == 12


def test_unitary_gauge_rejects_charged_operators():
    m = build_model("ising_chain", 4)
    system = gauge_model(m)
    with pytest.raises(NotASymmetry):
        unitary_gauge(system, PauliString.z_string(system.n_qubits, [0]))


def test_flux_terms_must_commute_with_gauss_law():
    with pytest.raises(NotASymmetry):
        gauge_model(build_model("ising_chain", 4), flux=[[0]])


def test_gauged_gauge3d():
    lat = Lattice3(2, 2, 2)
    system = gauged_gauge3d(lat)
    assert system.n_qubits == 48
    assert len(system.flux) == lat.n_cubes
    assert all(system.is_gauge_invariant(p) for _, p in system.hamiltonian.terms)
    fixed = fixed_hamiltonian(gauge_model(system.model, 1.0, 0.5, g_hat=0.0))
    assert coefficient_distance(fixed, hamiltonian(gauged(system.model), J=0.5, h=1.0)) <= 1e-12
