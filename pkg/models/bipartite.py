"""Generalized transverse-field Ising models on bipartite graphs, and their automorphisms.

A model is fixed by its biadjacency matrix sigma (rows: Ising terms V-hat,
columns: qubits V). The Hamiltonian is -J sum B_vhat - h sum X_v with
B_vhat = prod_v Z_v^{sigma[vhat, v]}.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from core.errors import NonBinaryEntry, NotReversing, ParseError
from utils.gf2 import BitMatrix
from utils.pauli import PauliString
from utils.serialization import dump_json, load_json

logger = logging.getLogger(__name__)

PRESERVING = "preserving"
REVERSING = "reversing"


@dataclass(frozen=True)
class Automorphism:
    """Graph automorphism stored side by side.

    preserving: perm_v maps V -> V and perm_vhat maps V-hat -> V-hat.
    reversing:  perm_v maps V -> V-hat and perm_vhat maps V-hat -> V.
    """
    perm_v: tuple
    perm_vhat: tuple
    kind: str
    name: str = ""

    def __post_init__(self):
        if self.kind not in (PRESERVING, REVERSING):
            raise ValueError(f"unknown automorphism kind {self.kind!r}")
        object.__setattr__(self, "perm_v", tuple(int(i) for i in self.perm_v))
        object.__setattr__(self, "perm_vhat", tuple(int(i) for i in self.perm_vhat))

    @property
    def n_v(self):
        return len(self.perm_v)

    @property
    def n_vhat(self):
        return len(self.perm_vhat)

    def as_vertex_map(self):
        """Map on V ⊔ V-hat, V first (0..|V|-1), then V-hat"""
        nv = self.n_v
        if self.kind == PRESERVING:
            return self.perm_v + tuple(nv + j for j in self.perm_vhat)
        return tuple(nv + j for j in self.perm_v) + self.perm_vhat

    @classmethod
    def from_vertex_map(cls, vmap, n_v, name=""):
        vmap = tuple(vmap)
        if n_v == 0 or vmap[0] < n_v:
            perm_v = vmap[:n_v]
            perm_vhat = tuple(j - n_v for j in vmap[n_v:])
            return cls(perm_v, perm_vhat, PRESERVING, name)
        perm_v = tuple(j - n_v for j in vmap[:n_v])
        return cls(perm_v, vmap[n_v:], REVERSING, name)

    def compose(self, other):
        """self ∘ other (other applied first)"""
        a, b = self.as_vertex_map(), other.as_vertex_map()
        if len(a) != len(b):
            raise ValueError("automorphisms of different graphs")
        name = f"{self.name}*{other.name}" if self.name and other.name else ""
        return Automorphism.from_vertex_map([a[b[x]] for x in range(len(b))], other.n_v, name)

    def is_involution(self):
        vmap = self.as_vertex_map()
        return all(vmap[vmap[x]] == x for x in range(len(vmap)))

    def is_identity(self):
        vmap = self.as_vertex_map()
        return all(vmap[x] == x for x in range(len(vmap)))

    def satisfied_by(self, sigma):
        """Automorphism condition against a biadjacency matrix"""
        rows, cols = sigma.rows, sigma.cols
        if self.kind == PRESERVING:
            if (self.n_v, self.n_vhat) != (cols, rows):
                return False
            if sorted(self.perm_v) != list(range(cols)) or sorted(self.perm_vhat) != list(range(rows)):
                return False
            return all(sigma[self.perm_vhat[i], self.perm_v[j]] for i, j in sigma.nonzero())
        if rows != cols or (self.n_v, self.n_vhat) != (cols, rows):
            return False
        if sorted(self.perm_v) != list(range(rows)) or sorted(self.perm_vhat) != list(range(cols)):
            return False
        # sigma[rho(v), rho(vhat)] = sigma[vhat, v]; bijectivity makes one direction enough
        return all(sigma[self.perm_v[j], self.perm_vhat[i]] for i, j in sigma.nonzero())

    def validate(self, sigma):
        if self.kind != REVERSING:
            raise NotReversing(f"automorphism {self.name or '?'} is {self.kind}, a reversing one is needed")
        if not self.satisfied_by(sigma):
            raise NotReversing(f"automorphism {self.name or '?'} violates the reversing condition")
        return self

    def to_dict(self):
        return {"name": self.name, "kind": self.kind, "perm_v": list(self.perm_v),
                "perm_vhat": list(self.perm_vhat), "involution": self.is_involution()}


@dataclass(eq=False)
class BipartiteModel:
    name: str
    v_labels: list
    vhat_labels: list
    sigma: BitMatrix
    kappa: Fraction
    dual_kappa: Fraction = None
    automorphisms: list = field(default_factory=list)
    lattice: object = None

    def __post_init__(self):
        self.kappa = Fraction(self.kappa)
        if (self.sigma.rows, self.sigma.cols) != (len(self.vhat_labels), len(self.v_labels)):
            raise ValueError(f"sigma is {self.sigma.rows}x{self.sigma.cols} but the model has "
                             f"{len(self.vhat_labels)} Ising terms and {len(self.v_labels)} qubits")
        if self.dual_kappa is None:
            self.dual_kappa = default_dual_kappa(self.sigma)
        self.dual_kappa = Fraction(self.dual_kappa)

    def __repr__(self):
        return (f"BipartiteModel({self.name!r}, |V|={self.n_v}, |V^|={self.n_vhat}, "
                f"|E|={self.n_edges}, kappa={self.kappa})")

    def __eq__(self, other):
        """Structural equality: labels, sigma and both normalizations"""
        if not isinstance(other, BipartiteModel):
            return NotImplemented
        return (list(self.v_labels) == list(other.v_labels) and list(self.vhat_labels) == list(other.vhat_labels)
                and self.sigma == other.sigma and self.kappa == other.kappa
                and self.dual_kappa == other.dual_kappa)

    __hash__ = None

    @property
    def n_v(self):
        return len(self.v_labels)

    @property
    def n_vhat(self):
        return len(self.vhat_labels)

    @cached_property
    def edges(self):
        """(vhat, v) index pairs with sigma = 1"""
        return self.sigma.nonzero()

    @property
    def n_edges(self):
        return len(self.edges)

    @cached_property
    def kernel_basis(self):
        return self.sigma.kernel_basis()

    @property
    def kernel_dim(self):
        return len(self.kernel_basis)

    def automorphism(self, name):
        for a in self.automorphisms:
            if a.name == name:
                return a
        raise KeyError(f"{self.name} has no automorphism named {name!r}")

    def reversing_automorphisms(self):
        return [a for a in self.automorphisms if a.kind == REVERSING]

    # ----- local terms -----
    def ising_term(self, vhat):
        return PauliString(self.n_v, z_bits=self.sigma.row(vhat))

    def transverse_term(self, v):
        return PauliString.x_string(self.n_v, [v])

    def is_connected(self):
        n = self.n_v + self.n_vhat
        if n == 0:
            return True
        rows = [self.n_v + i for i, _ in self.edges]
        cols = [j for _, j in self.edges]
        graph = coo_matrix((np.ones(len(rows)), (rows, cols)), shape=(n, n))
        count, _ = connected_components(graph, directed=False)
        return count == 1


def default_dual_kappa(sigma):
    """Makes the gauged model's condensation operator twice a projector"""
    n_edges = len(sigma.nonzero())
    dual_kernel = len(sigma.transpose().kernel_basis())
    return Fraction(n_edges - sigma.rows + 1 - dual_kernel, 2)


def gauged(m):
    """The generalized TFIM of the gauged model: V and V-hat exchanged, sigma transposed"""
    # the two sides swap roles, so each stored map moves to the other slot
    automorphisms = [Automorphism(a.perm_vhat, a.perm_v, a.kind, a.name) for a in m.automorphisms]
    return BipartiteModel(
        name=m.name[len("gauged("):-1] if m.name.startswith("gauged(") else f"gauged({m.name})",
        v_labels=list(m.vhat_labels),
        vhat_labels=list(m.v_labels),
        sigma=m.sigma.transpose(),
        kappa=m.dual_kappa,
        dual_kappa=m.kappa,
        automorphisms=automorphisms,
        lattice=m.lattice,
    )


# ----- graph documents -----
def _parse_fraction(value):
    try:
        return Fraction(str(value))
    except (ValueError, ZeroDivisionError) as e:
        raise ParseError(f"bad rational {value!r}: {e}") from e


def model_from_document(doc, name="graph"):
    try:
        v_labels = [str(v) for v in doc["v"]]
        vhat_labels = [str(v) for v in doc["vhat"]]
        rows = list(doc["sigma_rows"])
    except (KeyError, TypeError) as e:
        raise ParseError(f"graph document needs 'v', 'vhat' and 'sigma_rows': {e}") from e
    if len(rows) != len(vhat_labels):
        raise ParseError(f"{len(rows)} sigma rows for {len(vhat_labels)} Ising terms")
    dense = np.zeros((len(vhat_labels), len(v_labels)), dtype=np.uint8)
    for i, row in enumerate(rows):
        row = str(row)
        if len(row) != len(v_labels):
            raise ParseError(f"sigma row {i} has {len(row)} entries, expected {len(v_labels)}")
        for j, ch in enumerate(row):
            if ch not in "01":
                raise NonBinaryEntry(f"sigma[{i}][{j}] = {ch!r} is not 0 or 1")
            dense[i, j] = int(ch)
    sigma = BitMatrix.from_dense(dense)
    n_edges = int(dense.sum())
    if "kappa" in doc and doc["kappa"] is not None:
        kappa = _parse_fraction(doc["kappa"])
    else:
        kappa = Fraction(n_edges - len(vhat_labels), 2)
    dual_kappa = _parse_fraction(doc["dual_kappa"]) if doc.get("dual_kappa") is not None else None
    m = BipartiteModel(doc.get("name", name), v_labels, vhat_labels, sigma, kappa, dual_kappa)
    for entry in doc.get("automorphisms", []):
        try:
            a = Automorphism(entry["perm_v"], entry["perm_vhat"], entry["kind"], entry.get("name", ""))
        except (KeyError, TypeError, ValueError) as e:
            raise ParseError(f"bad automorphism entry: {e}") from e
        if not a.satisfied_by(sigma):
            raise ParseError(f"automorphism {a.name or '?'} does not preserve the graph")
        m.automorphisms.append(a)
    if not m.is_connected():
        logger.warning(f"⚠️ graph {m.name!r} is disconnected")
    return m


def load_graph(path_or_doc):
    if isinstance(path_or_doc, dict):
        return model_from_document(path_or_doc)
    doc = load_json(path_or_doc)
    if not isinstance(doc, dict):
        raise ParseError(f"{path_or_doc}: graph document must be a JSON object")
    return model_from_document(doc, name=str(path_or_doc))


def model_to_document(m, with_automorphisms=True):
    dense = m.sigma.to_dense()
    doc = {
        "name": m.name,
        "v": list(m.v_labels),
        "vhat": list(m.vhat_labels),
        "sigma_rows": ["".join(str(int(b)) for b in row) for row in dense],
        "kappa": str(m.kappa),
    }
    if m.dual_kappa != default_dual_kappa(m.sigma):
        doc["dual_kappa"] = str(m.dual_kappa)
    if with_automorphisms and m.automorphisms:
        doc["automorphisms"] = [a.to_dict() for a in m.automorphisms]
    return doc


def dump_graph(m, path=None):
    return dump_json(model_to_document(m), path)
