from .bipartite import Automorphism, BipartiteModel, gauged, load_graph
from .builders import BUILDERS, build_model
from .lattice3 import Lattice3, SurfacePath
from .operators import condensation_op, duality_op, symmetry_ops
from .lattice_operators import lattice_operators
