import numpy as np
import pytest

from utils.bit_kernels import (basis_state, bits_to_index, fwht, mask_from_qubits, max_abs_diff, plus_state,
                               popcount, qubit_bit, random_state, relative_error, sign_vector)


def test_qubit_zero_is_most_significant():
    assert qubit_bit(3, 0) == 4
    assert mask_from_qubits(3, [0, 2]) == 5
    assert bits_to_index([1, 0, 1]) == 5


def test_popcount():
    np.testing.assert_array_equal(popcount(np.array([0, 1, 3, 255, 1 << 40])), [0, 1, 2, 8, 1])


def test_sign_vector():
    np.testing.assert_array_equal(sign_vector(2, 0b01), [1, -1, 1, -1])
    np.testing.assert_array_equal(sign_vector(2, 0), [1, 1, 1, 1])


@pytest.mark.parametrize("n", [1, 3, 6])
def test_fwht_is_the_hadamard_layer(n):
    H = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    layer = np.array([[1.0]])
    for _ in range(n):
        layer = np.kron(layer, H)
    psi = random_state(n, np.random.default_rng(n))
    np.testing.assert_allclose(fwht(psi), layer @ psi, atol=1e-12)
    np.testing.assert_allclose(fwht(fwht(psi)), psi, atol=1e-12)


def test_fwht_on_selected_qubits():
    psi = basis_state(2, 0)
    out = fwht(psi, qubits=[1])
    np.testing.assert_allclose(out, [1 / np.sqrt(2), 1 / np.sqrt(2), 0, 0])


def test_fwht_of_zero_state_is_plus():
    np.testing.assert_allclose(fwht(basis_state(4, 0)), plus_state(4), atol=1e-12)


def test_fwht_rejects_bad_length():
    with pytest.raises(ValueError):
        fwht(np.ones(6))


def test_random_state_is_normalized(rng):
    assert np.linalg.norm(random_state(5, rng)) == pytest.approx(1.0)
    assert np.isrealobj(random_state(3, rng, real=True))


def test_errors():
    a = np.array([1.0, 2.0])
    assert relative_error(a, a) == 0
    assert max_abs_diff(a, a + [0, 0.5]) == pytest.approx(0.5)


def test_fwht_leaves_input_alone_unless_asked(rng):
    psi = random_state(5, rng)
    before = psi.copy()
    out = fwht(psi)
    np.testing.assert_array_equal(psi, before)
    same = fwht(psi, copy=False)
    assert same is psi
    np.testing.assert_allclose(psi, out, atol=1e-12)


def test_fwht_transforms_columns_independently(rng):
    batch = np.stack([random_state(4, rng) for _ in range(3)], axis=1)
    out = fwht(batch, qubits=[0, 2])
    assert out.shape == (16, 3)
    for j in range(3):
        np.testing.assert_allclose(out[:, j], fwht(batch[:, j], qubits=[0, 2]), atol=1e-12)
