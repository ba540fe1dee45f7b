import numpy as np
import pytest

from core.errors import ArityMismatch, TooLarge
from core.phase import Phase
from core.zx_diagram import compose, tensor, x_spider, z_spider
from core.zx_eval import (apply_diagram, basis_state_diagram, contract, dense_state, diagram_column,
                          scalar_value, spider_tensor)
from models.operators import cn_operator, kw_matrix
from models.zx_builders import cn_diagram, kw_diagram


def test_spider_tensors():
    np.testing.assert_allclose(spider_tensor("Z", Phase.pi(), 2), np.diag([1, -1]))
    np.testing.assert_allclose(spider_tensor("X", Phase.zero(), 2), np.eye(2), atol=1e-12)
    assert spider_tensor("Z", Phase.pi(), 0) == pytest.approx(0)


@pytest.mark.parametrize("bits", [[0], [1, 0], [1, 1, 0]])
def test_basis_state_diagram(bits):
    psi = dense_state(basis_state_diagram(bits))
    index = int("".join(map(str, bits)), 2)
    expected = np.zeros(1 << len(bits))
    expected[index] = 1
    np.testing.assert_allclose(psi, expected, atol=1e-12)


@pytest.mark.parametrize("L", [2, 3, 4, 5, 6])
def test_kw_diagram_matches_kw_matrix(L):
    np.testing.assert_allclose(contract(kw_diagram(L)), kw_matrix(L), atol=1e-12)


def test_colour_changed_kw_diagram_is_the_same_map():
    np.testing.assert_allclose(contract(kw_diagram(4, colour_changed=True)), kw_matrix(4), atol=1e-12)


@pytest.mark.parametrize("n", [0, 1])
def test_cn_diagram(n):
    np.testing.assert_allclose(contract(cn_diagram(4, n)), cn_operator(4, n).to_dense(), atol=1e-12)


def test_apply_diagram_matches_contract(rng):
    d = kw_diagram(4)
    psi = rng.standard_normal(16) + 1j * rng.standard_normal(16)
    np.testing.assert_allclose(apply_diagram(d, psi), contract(d) @ psi, atol=1e-12)
    with pytest.raises(ArityMismatch):
        apply_diagram(d, np.ones(8))


def test_diagram_column():
    d = kw_diagram(4)
    full = contract(d)
    for k in (0, 5, 15):
        np.testing.assert_allclose(diagram_column(d, k), full[:, k], atol=1e-12)
        np.testing.assert_allclose(diagram_column(d, k, simplify_first=False), full[:, k], atol=1e-12)


def test_random_contraction_order_agrees(rng):
    d = kw_diagram(5)
    np.testing.assert_allclose(contract(d, rng=rng), contract(d), atol=1e-12)


def test_dense_cap():
    with pytest.raises(TooLarge):
        contract(kw_diagram(4), dense_cap=6)


def test_scalar_and_state_arity_errors():
    with pytest.raises(ArityMismatch):
        scalar_value(z_spider(0, 1))
    with pytest.raises(ArityMismatch):
        dense_state(z_spider(1, 1))


def test_hopf_pair_contracts_to_disconnected_map():
    # Z copy then X merge through two parallel wires
    d = compose(x_spider(2, 1), z_spider(1, 2))
    m = contract(d)
    assert np.linalg.matrix_rank(m) == 1
    np.testing.assert_allclose(contract(tensor(z_spider(1, 0), z_spider(0, 1))).shape, m.shape)
