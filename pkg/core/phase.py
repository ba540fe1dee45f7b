"""Exact spider phases (multiples of pi/4) and exact Clifford scalars."""
import cmath
import math
from dataclasses import dataclass

SNAP_TOL = 1e-12


@dataclass(frozen=True)
class Phase:
    """numerator * pi / 2**log2_denominator, reduced mod 2pi; float fallback when inexact"""
    numerator: int = 0
    log2_denominator: int = 0
    is_exact: bool = True
    float_value: float = 0.0

    def __post_init__(self):
        if not self.is_exact:
            object.__setattr__(self, "numerator", 0)
            object.__setattr__(self, "log2_denominator", 0)
            object.__setattr__(self, "float_value", math.remainder(self.float_value, 2 * math.pi) % (2 * math.pi))
            return
        if not 0 <= self.log2_denominator <= 2:
            raise ValueError(f"log2_denominator must be in 0..2, got {self.log2_denominator}")
        quarters = (self.numerator << (2 - self.log2_denominator)) % 8
        num, log2 = quarters, 2
        while log2 > 0 and num % 2 == 0:
            num //= 2
            log2 -= 1
        object.__setattr__(self, "numerator", num)
        object.__setattr__(self, "log2_denominator", log2)
        object.__setattr__(self, "float_value", 0.0)

    @classmethod
    def zero(cls):
        return cls(0, 0)

    @classmethod
    def pi(cls):
        return cls(1, 0)

    @classmethod
    def from_quarters(cls, quarters):
        return cls(quarters, 2)

    @classmethod
    def from_radians(cls, value):
        """Snap to the pi/4 grid when possible"""
        q = value / (math.pi / 4)
        if abs(q - round(q)) < SNAP_TOL:
            return cls.from_quarters(int(round(q)))
        return cls(is_exact=False, float_value=value)

    @property
    def quarters(self):
        if not self.is_exact:
            raise ValueError("inexact phase has no quarter-pi representation")
        return self.numerator << (2 - self.log2_denominator)

    @property
    def radians(self):
        if self.is_exact:
            return self.quarters * math.pi / 4
        return self.float_value

    def is_zero(self):
        return self.is_exact and self.numerator == 0

    def is_pi(self):
        return self.is_exact and self.quarters == 4

    def is_pauli(self):
        return self.is_exact and self.quarters % 4 == 0

    def is_clifford(self):
        return self.is_exact and self.quarters % 2 == 0

    def exp(self):
        """e^{i alpha}"""
        return cmath.exp(1j * self.radians)

    def __add__(self, other):
        if self.is_exact and other.is_exact:
            return Phase.from_quarters(self.quarters + other.quarters)
        return Phase.from_radians(self.radians + other.radians)

    def __neg__(self):
        if self.is_exact:
            return Phase.from_quarters(-self.quarters)
        return Phase(is_exact=False, float_value=-self.float_value)

    def __sub__(self, other):
        return self + (-other)

    def __str__(self):
        if not self.is_exact:
            return f"{self.float_value:.6g}"
        if self.numerator == 0:
            return "0"
        den = 1 << self.log2_denominator
        num = "π" if self.numerator == 1 else f"{self.numerator}π"
        return num if den == 1 else f"{num}/{den}"


@dataclass(frozen=True)
class Scalar:
    """2^{half_power/2} * e^{i pi eighth_root/4} * residual, or exactly zero"""
    is_zero: bool = False
    half_power: int = 0
    eighth_root: int = 0
    residual: complex = 1.0 + 0.0j

    def __post_init__(self):
        if self.is_zero:
            object.__setattr__(self, "half_power", 0)
            object.__setattr__(self, "eighth_root", 0)
            object.__setattr__(self, "residual", 1.0 + 0.0j)
        else:
            object.__setattr__(self, "eighth_root", self.eighth_root % 8)
            object.__setattr__(self, "residual", complex(self.residual))

    @classmethod
    def one(cls):
        return cls()

    @classmethod
    def zero(cls):
        return cls(is_zero=True)

    @classmethod
    def sqrt2_power(cls, k):
        return cls(half_power=k)

    @classmethod
    def root_of_unity(cls, m):
        """e^{i pi m / 4}"""
        return cls(eighth_root=m)

    @classmethod
    def from_phase(cls, phase):
        if phase.is_exact:
            return cls(eighth_root=phase.quarters)
        return cls(residual=phase.exp())

    @classmethod
    def from_complex(cls, value, tol=SNAP_TOL):
        """Exact form when value is 2^{k/2} e^{i pi m/4}, residual otherwise"""
        value = complex(value)
        if abs(value) < tol:
            return cls.zero()
        k = 2 * math.log2(abs(value))
        m = cmath.phase(value) / (math.pi / 4)
        if abs(k - round(k)) < tol and abs(m - round(m)) < tol:
            return cls(half_power=int(round(k)), eighth_root=int(round(m)))
        return cls(residual=value)

    def is_clifford(self):
        return self.is_zero or self.residual == 1

    def value(self):
        if self.is_zero:
            return 0j
        return (2.0 ** (self.half_power / 2)) * cmath.exp(1j * math.pi * self.eighth_root / 4) * self.residual

    def __complex__(self):
        return self.value()

    def __mul__(self, other):
        if not isinstance(other, Scalar):
            other = Scalar.from_complex(other)
        if self.is_zero or other.is_zero:
            return Scalar.zero()
        if self.residual == 1 and other.residual == 1:
            residual = 1.0 + 0.0j
        else:
            residual = self.residual * other.residual
        return Scalar(
            half_power=self.half_power + other.half_power,
            eighth_root=self.eighth_root + other.eighth_root,
            residual=residual,
        )

    __rmul__ = __mul__

    def conjugate(self):
        if self.is_zero:
            return self
        return Scalar(half_power=self.half_power, eighth_root=-self.eighth_root,
                      residual=self.residual.conjugate())

    def __str__(self):
        if self.is_zero:
            return "0"
        v = self.value()
        return f"{v.real:.4f}{v.imag:+.4f}i (√2^{self.half_power}·ω^{self.eighth_root})"
