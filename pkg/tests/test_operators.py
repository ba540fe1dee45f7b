import numpy as np
import pytest

from core.errors import NotASymmetry, NotReversing
from core.structured_op import structured_to_dense
from core.zx_eval import contract
from models.builders import build_model, ising_chain
from models.operators import (absorption_coefficient, cn_operator, condensation_coefficient, condensation_op,
                              duality_eigenbasis_1d, duality_op, eta_for, ghz_state, kw_matrix,
                              modified_duality, parity_op, symmetry_ops, translation_1d, translation_op,
                              vertex_permutation)
from models.zx_builders import graph_duality_diagram
from utils.bit_kernels import basis_state, plus_state, random_state


def _dense(op):
    return structured_to_dense(op)


@pytest.mark.parametrize("L", [2, 3, 4, 5, 6])
def test_duality_is_the_kw_map(L):
    m = ising_chain(L)
    np.testing.assert_allclose(_dense(duality_op(m, "half_translation")), kw_matrix(L), atol=1e-12)


@pytest.mark.parametrize("L", [3, 4, 5, 6])
def test_1d_fusion_dense(L):
    m = ising_chain(L)
    rho = m.automorphism("half_translation")
    D = _dense(duality_op(m, rho))
    T = _dense(translation_op(m, rho, rho))
    C = condensation_op(m).to_dense()
    eta = symmetry_ops(m)[0].to_dense()
    np.testing.assert_allclose(D @ D, (np.eye(1 << L) + eta) @ T, atol=1e-12)
    np.testing.assert_allclose(C, cn_operator(L, 0).to_dense(), atol=1e-12)
    np.testing.assert_allclose(D @ eta, D, atol=1e-12)
    np.testing.assert_allclose(eta @ D, D, atol=1e-12)
    np.testing.assert_allclose(D @ C, 2 * D, atol=1e-12)
    np.testing.assert_allclose(C @ D, 2 * D, atol=1e-12)


def test_1d_fusion_structured(rng):
    L = 12
    m = ising_chain(L)
    rho = m.automorphism("half_translation")
    D = duality_op(m, rho)
    T = translation_op(m, rho, rho)
    C = condensation_op(m)
    for _ in range(5):
        psi = random_state(L, rng)
        np.testing.assert_allclose(D.apply(D.apply(psi)), T.apply(C.apply(psi)), atol=1e-10)


def test_1d_special_states():
    L = 5
    D = duality_op(ising_chain(L), "half_translation")
    zeros, ones = basis_state(L, 0), basis_state(L, (1 << L) - 1)
    np.testing.assert_allclose(D.apply(zeros), plus_state(L), atol=1e-12)
    np.testing.assert_allclose(D.apply(plus_state(L)), zeros + ones, atol=1e-12)
    np.testing.assert_allclose(D.apply(ghz_state(L)), np.sqrt(2) * plus_state(L), atol=1e-12)


def test_1d_eigenbasis():
    L = 4
    D = duality_op(ising_chain(L), "half_translation")
    for state, value, _ in duality_eigenbasis_1d(L):
        np.testing.assert_allclose(D.apply(state), value * state, atol=1e-12)


def test_intertwining(rng):
    m = build_model("three_spin", 6)
    rho = m.automorphism("reflection")
    D = duality_op(m, rho)
    psi = random_state(m.n_v, rng)
    d_psi = D.apply(psi)
    for v in range(m.n_v):
        np.testing.assert_allclose(D.apply(m.transverse_term(v).apply(psi)),
                                   m.ising_term(rho.perm_v[v]).apply(d_psi), atol=1e-12)
        np.testing.assert_allclose(D.apply(m.ising_term(v).apply(psi)),
                                   m.transverse_term(rho.perm_vhat[v]).apply(d_psi), atol=1e-12)


@pytest.mark.parametrize("kind, args, rho, coefficient", [
    ("ising_chain", (4,), "half_translation", 2),
    ("ashkin_teller", (4,), "reflection", 4),
    ("three_spin", (6,), "reflection", 4),
    ("plaquette_ising", (2, 2), "half_translation", 8),
])
def test_condensation_absorption(kind, args, rho, coefficient):
    m = build_model(kind, *args)
    assert absorption_coefficient(m) == coefficient
    D = _dense(duality_op(m, rho))
    C = condensation_op(m).to_dense()
    np.testing.assert_allclose(D @ C, coefficient * D, atol=1e-9)
    np.testing.assert_allclose(C @ D, coefficient * D, atol=1e-9)


@pytest.mark.parametrize("kind, args", [("ashkin_teller", (4,)), ("three_spin", (6,))])
def test_involution_squares_to_condensation(kind, args):
    m = build_model(kind, *args)
    D = _dense(duality_op(m, "reflection"))
    np.testing.assert_allclose(D @ D, condensation_op(m).to_dense(), atol=1e-9)


def test_plaquette_fusion_has_translation():
    m = build_model("plaquette_ising", 2, 2)
    rho = m.automorphism("half_translation")
    D = _dense(duality_op(m, rho))
    T = _dense(translation_op(m, rho, rho))
    np.testing.assert_allclose(D @ D, T @ condensation_op(m).to_dense(), atol=1e-9)
    assert condensation_coefficient(m) == 2.0 ** (12 - 16 + 4)


@pytest.mark.parametrize("kind, args, rho", [
    ("ising_chain", (4,), "half_translation"),
    ("ising_chain", (5,), "reflection"),
    ("ashkin_teller", (4,), "reflection"),
    ("three_spin", (6,), "reflection"),
    ("plaquette_ising", (2, 2), "parity"),
])
def test_structured_duality_matches_diagram(kind, args, rho):
    m = build_model(kind, *args)
    np.testing.assert_allclose(_dense(duality_op(m, rho)), contract(graph_duality_diagram(m, rho)), atol=1e-10)


@pytest.mark.parametrize("L", [4, 5, 6])
def test_non_invertible_parity(L):
    m = ising_chain(L)
    Dp = _dense(modified_duality(m))
    eta = symmetry_ops(m)[0].to_dense()
    T = _dense(translation_1d(L))
    np.testing.assert_allclose(Dp @ Dp, np.eye(1 << L) + eta, atol=1e-12)
    np.testing.assert_allclose(Dp @ T, T.conj().T @ Dp, atol=1e-12)
    D = _dense(duality_op(m, "half_translation"))
    np.testing.assert_allclose(Dp, D @ _dense(parity_op(L)), atol=1e-12)


def test_eta_requires_kernel_vector():
    m = ising_chain(4)
    assert eta_for(m, [1, 1, 1, 1]).label() == "XXXX"
    with pytest.raises(NotASymmetry):
        eta_for(m, [1, 0, 0, 0])
    with pytest.raises(NotASymmetry):
        eta_for(m, [1, 1])


def test_duality_needs_a_reversing_automorphism():
    m = build_model("gauge3d", 2, 2, 2)
    with pytest.raises(NotReversing):
        duality_op(m, "spatial_parity")
    with pytest.raises(ValueError):
        vertex_permutation(m, "parity")
    assert vertex_permutation(m, "spatial_parity").n_in == 24
