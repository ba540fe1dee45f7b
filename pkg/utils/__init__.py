from .bit_kernels import fwht, random_state, plus_state
from .gf2 import BitMatrix, BitVector
from .pauli import PauliString, OperatorSum, opsum_apply, expectation
