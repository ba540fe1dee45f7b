import numpy as np
import pytest

from core.errors import ArityMismatch, GluingMismatch
from core.phase import Phase
from core.zx_diagram import (X, Z, ZxDiagram, adjoint, cap, compose, cup, hadamard, identity,
                             identity_wires, make_generator, port_end, replicate_periodic, spider_end,
                             swap, tensor, x_spider, z_spider)
from core.zx_eval import contract, scalar_value

H = np.array([[1, 1], [1, -1]]) / np.sqrt(2)


def test_generators():
    np.testing.assert_allclose(contract(z_spider(1, 1, Phase.pi())), np.diag([1, -1]), atol=1e-12)
    np.testing.assert_allclose(contract(x_spider(1, 1, Phase.pi())), [[0, 1], [1, 0]], atol=1e-12)
    np.testing.assert_allclose(contract(hadamard()), H, atol=1e-12)
    np.testing.assert_allclose(contract(cup()).reshape(-1), [1, 0, 0, 1], atol=1e-12)
    np.testing.assert_allclose(contract(z_spider(0, 1)).reshape(-1), [1, 1], atol=1e-12)
    np.testing.assert_allclose(contract(x_spider(0, 1)).reshape(-1), [np.sqrt(2), 0], atol=1e-12)


def test_swap_matrix():
    expected = np.eye(4)[[0, 2, 1, 3]]
    np.testing.assert_allclose(contract(swap()), expected, atol=1e-12)


def test_compose_and_tensor():
    hh = compose(hadamard(), hadamard())
    np.testing.assert_allclose(contract(hh), np.eye(2), atol=1e-12)
    zi = tensor(z_spider(1, 1, Phase.pi()), identity())
    np.testing.assert_allclose(contract(zi), np.kron(np.diag([1, -1]), np.eye(2)), atol=1e-12)
    s = compose(z_spider(1, 1, Phase.from_quarters(2)), z_spider(1, 1, Phase.from_quarters(2)))
    np.testing.assert_allclose(contract(s), np.diag([1, -1]), atol=1e-12)


def test_compose_arity_mismatch():
    with pytest.raises(ArityMismatch):
        compose(z_spider(2, 1), z_spider(1, 1))


def test_closed_loop_scalar():
    assert scalar_value(compose(cap(), cup())) == pytest.approx(2.0)


def test_adjoint_conjugates_phases():
    d = z_spider(1, 1, Phase.from_quarters(1))
    np.testing.assert_allclose(contract(adjoint(d)), contract(d).conj().T, atol=1e-12)


def test_identity_wires():
    assert contract(identity_wires(3)).shape == (8, 8)
    np.testing.assert_allclose(contract(identity_wires(3)), np.eye(8), atol=1e-12)


def test_make_generator_rejects_unknown_kind():
    assert len(make_generator("z_spider", 2, 1).inputs) == 2
    with pytest.raises(ValueError):
        make_generator("w_spider")


def test_wires_and_degree():
    d = ZxDiagram()
    a = d.add_spider(Z)
    b = d.add_spider(X, Phase.pi())
    d.add_wire(spider_end(a), spider_end(b))
    d.add_wire(spider_end(a), spider_end(b), hadamard=True)
    d.add_wire(spider_end(a), spider_end(a))
    assert d.degree(a) == 4
    assert len(d.wires_between(spider_end(a), spider_end(b))) == 2
    assert [end for _, end in d.neighbors(a)] == [spider_end(b), spider_end(b)]
    d.remove_spider(b)
    assert d.degree(a) == 2


def test_copy_is_independent():
    d = z_spider(1, 1)
    e = d.copy()
    e.spiders[0].phase = Phase.pi()
    assert d.spiders[0].phase == Phase.zero()
    assert d != e


def test_measure_orders_lexicographically():
    d = compose(z_spider(1, 1), z_spider(1, 1))
    assert d.measure() > z_spider(1, 1).measure()


def test_replicate_periodic_ring():
    # a ring of identity cells glued east to west closes into one loop: trace of I on one qubit
    cell = identity()
    east, west = cell.outputs[0], cell.inputs[0]
    ring = replicate_periodic(cell, 3, [east], [west])
    assert ring.n_boundary() == 0
    assert scalar_value(ring) == pytest.approx(2.0)


def test_replicate_periodic_open_chain():
    cell = identity()
    chain = replicate_periodic(cell, 4, [cell.outputs[0]], [cell.inputs[0]], periodic=False)
    np.testing.assert_allclose(contract(chain), np.eye(2), atol=1e-12)


def test_replicate_rejects_interior_ports():
    cell = z_spider(1, 1)
    with pytest.raises(GluingMismatch):
        replicate_periodic(cell, 2, [cell.outputs[0]], [])
    d = ZxDiagram()
    p = d.add_port()
    d.add_wire(port_end(p), spider_end(d.add_spider(Z)))
    with pytest.raises(GluingMismatch):
        replicate_periodic(cell, 2, [p], [cell.inputs[0]])


def test_replicate_rejects_overlapping_or_repeated_ports():
    cell = z_spider(2, 2)
    with pytest.raises(GluingMismatch):
        replicate_periodic(cell, 3, [cell.inputs[0]], [cell.inputs[0]])
    with pytest.raises(GluingMismatch):
        replicate_periodic(cell, 3, [cell.outputs[0], cell.inputs[1]], [cell.inputs[0], cell.inputs[1]])
    with pytest.raises(GluingMismatch):
        replicate_periodic(cell, 3, [cell.outputs[0], cell.outputs[0]], cell.inputs)
    with pytest.raises(GluingMismatch):
        replicate_periodic(cell, 3, cell.outputs, [cell.inputs[1], cell.inputs[1]])
