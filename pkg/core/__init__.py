from .errors import ZxLatticeError, ResourceCapExceeded
from .phase import Phase, Scalar
from .zx_diagram import ZxDiagram
