import cmath
import math

import pytest

from core.phase import Phase, Scalar


def test_phase_reduces_mod_two_pi():
    assert Phase.from_quarters(8) == Phase.zero()
    assert Phase(2, 1) == Phase.pi()
    assert Phase.from_quarters(-1).quarters == 7


def test_phase_arithmetic():
    assert Phase.from_quarters(1) + Phase.from_quarters(7) == Phase.zero()
    assert (Phase.pi() - Phase.from_quarters(2)).quarters == 2
    assert (-Phase.from_quarters(3)).quarters == 5


def test_phase_classes():
    assert Phase.pi().is_pauli() and Phase.pi().is_clifford()
    assert Phase.from_quarters(2).is_clifford() and not Phase.from_quarters(2).is_pauli()
    assert not Phase.from_quarters(1).is_clifford()
    assert Phase.zero().is_zero()


def test_from_radians_snaps_to_grid():
    assert Phase.from_radians(math.pi / 2).quarters == 2
    odd = Phase.from_radians(0.3)
    assert not odd.is_exact
    assert odd.radians == pytest.approx(0.3)
    with pytest.raises(ValueError):
        odd.quarters


def test_phase_exp():
    assert Phase.from_quarters(2).exp() == pytest.approx(1j)


def test_bad_denominator():
    with pytest.raises(ValueError):
        Phase(1, 3)


def test_scalar_values():
    assert Scalar.sqrt2_power(2).value() == pytest.approx(2.0)
    assert Scalar.root_of_unity(4).value() == pytest.approx(-1.0)
    assert Scalar.zero().value() == 0
    assert complex(Scalar.sqrt2_power(-1) * Scalar.sqrt2_power(-1)) == pytest.approx(0.5)


def test_scalar_from_complex_snaps_clifford_values():
    s = Scalar.from_complex(cmath.exp(1j * math.pi / 4) / math.sqrt(2))
    assert (s.half_power, s.eighth_root) == (-1, 1)
    assert s.is_clifford()
    assert Scalar.from_complex(0).is_zero
    generic = Scalar.from_complex(0.3 + 0.1j)
    assert not generic.is_clifford()
    assert generic.value() == pytest.approx(0.3 + 0.1j)


def test_scalar_product_with_zero_and_conjugate():
    assert (Scalar.sqrt2_power(3) * Scalar.zero()).is_zero
    s = Scalar(half_power=1, eighth_root=1)
    assert s.conjugate().value() == pytest.approx(s.value().conjugate())
