"""Dense semantics of ZX diagrams by pairwise tensor contraction.

Every spider becomes a tensor with one axis per incident wire end, every
Hadamard wire a 2x2 node. Boundary ports are open axes. Pairs of nodes are
contracted greedily, always choosing the pair whose result has the smallest
rank; disconnected pieces are joined by outer products at the end.
"""
import logging

import numpy as np

from config import get_config
from .errors import ArityMismatch, TooLarge
from .phase import Phase, Scalar
from .zx_diagram import Z, compose, empty, spider_end, tensor, x_spider

logger = logging.getLogger(__name__)

HADAMARD = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=np.complex128) / np.sqrt(2.0)
IDENTITY = np.eye(2, dtype=np.complex128)


def spider_tensor(color, phase, k):
    """Z(a): |0..0><0..0| + e^{ia}|1..1><1..1|; X(b): 2^{-k/2}(1 + e^{ib}(-1)^{parity})"""
    e = phase.exp()
    if k == 0:
        return np.array(1.0 + e, dtype=np.complex128)
    if color == Z:
        t = np.zeros((2,) * k, dtype=np.complex128)
        t[(0,) * k] = 1.0
        t[(1,) * k] += e
        return t
    parity = np.indices((2,) * k).sum(axis=0) & 1
    return (2.0 ** (-k / 2)) * (1.0 + e * (1 - 2 * parity)).astype(np.complex128)


class _Network:
    """Tensors with string-free axis labels; each label occurs once (open) or twice (internal)"""

    def __init__(self, max_rank, max_elements):
        self.nodes = []
        self.max_rank = max_rank
        self.max_elements = max_elements

    def add(self, tensor_, labels):
        labels = list(labels)
        if tensor_.ndim != len(labels):
            raise ValueError("tensor rank does not match its labels")
        self.nodes.append((tensor_, labels))

    def _check(self, rank):
        if rank > self.max_rank or (1 << rank) > self.max_elements:
            raise TooLarge(f"intermediate tensor of rank {rank} exceeds the contraction caps "
                           f"(max rank {self.max_rank}, {self.max_elements} elements)")

    def contract(self, open_labels, rng=None):
        nodes = [n for n in self.nodes]
        while True:
            owner = {}
            pairs = {}
            for idx, (_, labels) in enumerate(nodes):
                for lab in labels:
                    if lab in owner:
                        key = (owner[lab], idx)
                        pairs[key] = pairs.get(key, 0) + 1
                    else:
                        owner[lab] = idx
            if not pairs:
                break
            if rng is not None:
                keys = sorted(pairs)
                i, j = keys[int(rng.integers(len(keys)))]
            else:
                i, j = min(pairs, key=lambda k: (len(nodes[k[0]][1]) + len(nodes[k[1]][1]) - 2 * pairs[k], k))
            ti, li = nodes[i]
            tj, lj = nodes[j]
            shared = [lab for lab in li if lab in lj]
            rest = [lab for lab in li if lab not in shared] + [lab for lab in lj if lab not in shared]
            self._check(len(rest))
            t = np.tensordot(ti, tj, axes=([li.index(s) for s in shared], [lj.index(s) for s in shared]))
            nodes = [n for k, n in enumerate(nodes) if k not in (i, j)] + [(t, rest)]

        # disconnected pieces: smallest first to keep outer products cheap
        nodes.sort(key=lambda n: len(n[1]))
        result, labels = np.array(1.0 + 0j), []
        for t, lab in nodes:
            self._check(len(labels) + len(lab))
            result = np.multiply.outer(result, t)
            labels = labels + lab
        if sorted(labels, key=repr) != sorted(open_labels, key=repr):
            raise ValueError("open labels of the network do not match the requested boundary")
        if not labels:
            return result
        return np.transpose(result, [labels.index(lab) for lab in open_labels])


def _build_network(d, max_rank, max_elements):
    net = _Network(max_rank, max_elements)

    for sid, spider in sorted(d.spiders.items()):
        end = spider_end(sid)
        labels = []
        loops = []
        for wid in d.spider_wires(sid):
            w = d.wires[wid]
            if w.is_self_loop():
                loops.append(wid)
                labels.extend([("loop", wid, 0), ("loop", wid, 1)])
                continue
            other = w.other(end)
            if w.hadamard:
                labels.append(("w", wid, end))
            elif other[0] == "b":
                labels.append(("p", other[1]))
            else:
                labels.append(("w", wid))
        t = spider_tensor(spider.color, spider.phase, len(labels))
        for wid in loops:
            m = HADAMARD if d.wires[wid].hadamard else IDENTITY
            a, b = labels.index(("loop", wid, 0)), labels.index(("loop", wid, 1))
            t = np.tensordot(t, m, axes=([a, b], [0, 1]))
            labels = [lab for lab in labels if lab not in (("loop", wid, 0), ("loop", wid, 1))]
        net.add(t, labels)

    for wid, w in sorted(d.wires.items()):
        if w.is_self_loop():
            continue
        ends = []
        for end in w.ends():
            if end[0] == "b":
                ends.append(("p", end[1]))
            elif w.hadamard:
                ends.append(("w", wid, end))
            else:
                ends.append(None)
        if w.hadamard:
            net.add(HADAMARD, ends)
        elif ends[0] is not None and ends[1] is not None:
            # port to port
            net.add(IDENTITY, ends)
    return net


def _caps(max_rank=None):
    cfg = get_config()
    return (cfg.max_rank if max_rank is None else max_rank), cfg.max_elements


def _open_labels(d):
    return [("p", p) for p in d.outputs] + [("p", p) for p in d.inputs]


def contract(d, rng=None, dense_cap=None):
    """Dense matrix of shape (2^|outputs|, 2^|inputs|); rng randomizes the contraction order"""
    cap = get_config().dense_cap if dense_cap is None else dense_cap
    if d.n_boundary() > cap:
        raise TooLarge(f"{d.n_boundary()} boundary legs exceeds dense cap {cap}")
    return _contract(d, rng=rng)


def _contract(d, rng=None):
    if d.scalar.is_zero:
        return np.zeros((1 << len(d.outputs), 1 << len(d.inputs)), dtype=np.complex128)
    net = _build_network(d, *_caps())
    t = net.contract(_open_labels(d), rng=rng)
    matrix = np.asarray(t, dtype=np.complex128).reshape(1 << len(d.outputs), 1 << len(d.inputs))
    return matrix * d.scalar.value()


def apply_diagram(d, psi):
    """contract(d) @ psi without building the matrix"""
    psi = np.asarray(psi, dtype=np.complex128)
    n = len(d.inputs)
    if psi.shape != (1 << n,):
        raise ArityMismatch(f"diagram with {n} inputs applied to a length-{psi.shape[0]} state")
    if d.scalar.is_zero:
        return np.zeros(1 << len(d.outputs), dtype=np.complex128)
    max_rank, max_elements = _caps(max_rank=max(get_config().max_rank, n, len(d.outputs)))
    net = _build_network(d, max_rank, max_elements)
    net._check(n)
    net.add(psi.reshape((2,) * n) if n else psi.reshape(()), [("p", p) for p in d.inputs])
    out = net.contract([("p", p) for p in d.outputs])
    return np.asarray(out, dtype=np.complex128).reshape(-1) * d.scalar.value()


def basis_state_diagram(bits):
    """|b_0 ... b_{n-1}> as X(b pi) states scaled by 2^{-n/2}"""
    d = None
    for b in bits:
        state = x_spider(0, 1, Phase.pi() if b else Phase.zero())
        d = state if d is None else tensor(d, state)
    if d is None:
        d = empty()
    d.multiply_scalar(Scalar.sqrt2_power(-len(bits)))
    return d


def diagram_column(d, k, simplify_first=True):
    """Column k of the diagram's matrix: plug in |k>, simplify, contract"""
    n = len(d.inputs)
    if not 0 <= k < 1 << n:
        raise ValueError(f"basis index {k} out of range for {n} inputs")
    bits = [(k >> (n - 1 - q)) & 1 for q in range(n)]
    plugged = compose(d, basis_state_diagram(bits))
    if simplify_first:
        from .zx_rules import simplify
        plugged = simplify(plugged)
    max_rank, max_elements = _caps(max_rank=max(get_config().max_rank, len(d.outputs)))
    if plugged.scalar.is_zero:
        return np.zeros(1 << len(d.outputs), dtype=np.complex128)
    net = _build_network(plugged, max_rank, max_elements)
    out = net.contract([("p", p) for p in plugged.outputs])
    logger.debug(f"🔄 column {k}: {plugged!r}")
    return np.asarray(out, dtype=np.complex128).reshape(-1) * plugged.scalar.value()


def dense_state(d):
    """A 0-input diagram as a vector"""
    if d.inputs:
        raise ArityMismatch("dense_state expects a diagram without inputs")
    return contract(d).reshape(-1)


def scalar_value(d):
    if d.n_boundary():
        raise ArityMismatch("scalar_value expects a closed diagram")
    return complex(_contract(d)[0, 0])


__all__ = ["contract", "apply_diagram", "diagram_column", "spider_tensor",
           "basis_state_diagram", "dense_state", "scalar_value"]
