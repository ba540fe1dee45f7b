"""ZX-diagrams as open multigraphs of phased Z/X spiders.

Wires carry a Hadamard flag instead of Hadamard boxes, boundary ports are
integer labels and each port has exactly one wire. Endpoints are tuples
``("s", spider_id)`` or ``("b", port_id)``. Input/output order is qubit order,
qubit 0 being the most significant bit of basis indices.
"""
import logging
from dataclasses import dataclass

from .errors import ArityMismatch, GluingMismatch
from .phase import Phase, Scalar

logger = logging.getLogger(__name__)

Z = "Z"
X = "X"


def spider_end(sid):
    return ("s", sid)


def port_end(pid):
    return ("b", pid)


def other_color(color):
    return X if color == Z else Z


@dataclass
class Spider:
    color: str
    phase: Phase


@dataclass(frozen=True)
class Wire:
    a: tuple
    b: tuple
    hadamard: bool = False

    def ends(self):
        return (self.a, self.b)

    def is_self_loop(self):
        return self.a == self.b

    def other(self, end):
        return self.b if self.a == end else self.a


def _make_wire(a, b, hadamard):
    if b < a:
        a, b = b, a
    return Wire(a, b, bool(hadamard))


class ZxDiagram:
    """Value-type ZX diagram; copy before mutating a shared instance"""

    def __init__(self):
        self.spiders = {}
        self.wires = {}
        self.inputs = []
        self.outputs = []
        self.scalar = Scalar.one()
        self._adj = {}
        self._next_spider = 0
        self._next_port = 0
        self._next_wire = 0

    # ----- construction -----
    def add_spider(self, color, phase=None, sid=None):
        if sid is None:
            sid = self._next_spider
        self._next_spider = max(self._next_spider, sid + 1)
        self.spiders[sid] = Spider(color, phase if phase is not None else Phase.zero())
        self._adj.setdefault(spider_end(sid), set())
        return sid

    def add_port(self, pid=None):
        if pid is None:
            pid = self._next_port
        self._next_port = max(self._next_port, pid + 1)
        self._adj.setdefault(port_end(pid), set())
        return pid

    def add_wire(self, a, b, hadamard=False, wid=None):
        if wid is None:
            wid = self._next_wire
        self._next_wire = max(self._next_wire, wid + 1)
        self.wires[wid] = _make_wire(a, b, hadamard)
        self._adj.setdefault(a, set()).add(wid)
        self._adj.setdefault(b, set()).add(wid)
        return wid

    def remove_wire(self, wid):
        w = self.wires.pop(wid)
        self._adj[w.a].discard(wid)
        self._adj[w.b].discard(wid)
        return w

    def remove_spider(self, sid):
        end = spider_end(sid)
        for wid in list(self._adj.get(end, ())):
            self.remove_wire(wid)
        self._adj.pop(end, None)
        return self.spiders.pop(sid)

    def remove_port(self, pid):
        end = port_end(pid)
        for wid in list(self._adj.get(end, ())):
            self.remove_wire(wid)
        self._adj.pop(end, None)
        if pid in self.inputs:
            self.inputs.remove(pid)
        if pid in self.outputs:
            self.outputs.remove(pid)

    def set_wire_hadamard(self, wid, hadamard):
        w = self.wires[wid]
        self.wires[wid] = Wire(w.a, w.b, bool(hadamard))

    def multiply_scalar(self, s):
        self.scalar = self.scalar * s

    # ----- queries -----
    def incident(self, end):
        return sorted(self._adj.get(end, ()))

    def spider_wires(self, sid):
        return self.incident(spider_end(sid))

    def port_wire(self, pid):
        wires = self._adj.get(port_end(pid), ())
        if len(wires) != 1:
            raise ValueError(f"boundary port {pid} has {len(wires)} wires")
        return next(iter(wires))

    def degree(self, sid):
        return sum(2 if self.wires[w].is_self_loop() else 1 for w in self._adj[spider_end(sid)])

    def neighbors(self, sid):
        """(wire id, other endpoint) pairs, self-loops excluded"""
        end = spider_end(sid)
        out = []
        for wid in self.spider_wires(sid):
            w = self.wires[wid]
            if not w.is_self_loop():
                out.append((wid, w.other(end)))
        return out

    def wires_between(self, a, b):
        return [wid for wid in self.incident(a) if self.wires[wid].other(a) == b and a != b]

    @property
    def ports(self):
        return list(self.inputs) + list(self.outputs)

    def n_boundary(self):
        return len(self.inputs) + len(self.outputs)

    def measure(self):
        """Lexicographic size measure that every simplification step must decrease"""
        interior = sum(1 for sid in self.spiders if self.degree(sid) >= 2)
        x_count = sum(1 for s in self.spiders.values() if s.color == X)
        hadamards = sum(1 for w in self.wires.values() if w.hadamard)
        return (interior, len(self.spiders), len(self.wires), x_count, hadamards)

    def components(self):
        """Connected components as (spider ids, port ids) pairs, deterministic order"""
        seen = set()
        result = []
        for start in sorted(self._adj):
            if start in seen:
                continue
            stack = [start]
            seen.add(start)
            comp = []
            while stack:
                end = stack.pop()
                comp.append(end)
                for wid in self._adj.get(end, ()):
                    nxt = self.wires[wid].other(end)
                    if nxt not in seen:
                        seen.add(nxt)
                        stack.append(nxt)
            spiders = sorted(i for k, i in comp if k == "s")
            ports = sorted(i for k, i in comp if k == "b")
            result.append((spiders, ports))
        return result

    # ----- copying -----
    def copy(self):
        d = ZxDiagram()
        d.spiders = {k: Spider(s.color, s.phase) for k, s in self.spiders.items()}
        d.wires = dict(self.wires)
        d.inputs = list(self.inputs)
        d.outputs = list(self.outputs)
        d.scalar = self.scalar
        d._adj = {k: set(v) for k, v in self._adj.items()}
        d._next_spider = self._next_spider
        d._next_port = self._next_port
        d._next_wire = self._next_wire
        return d

    def absorb(self, other):
        """Copy other's spiders, ports and wires in with fresh labels; returns the port map"""
        smap = {sid: self.add_spider(s.color, s.phase) for sid, s in sorted(other.spiders.items())}
        pmap = {}
        for end in sorted(other._adj):
            if end[0] == "b":
                pmap[end[1]] = self.add_port()

        def remap(end):
            return spider_end(smap[end[1]]) if end[0] == "s" else port_end(pmap[end[1]])

        for wid, w in sorted(other.wires.items()):
            self.add_wire(remap(w.a), remap(w.b), w.hadamard)
        self.scalar = self.scalar * other.scalar
        return pmap

    def glue(self, p, q):
        """Join boundary ports p and q into one wire (Hadamard flags XOR)"""
        w1 = self.port_wire(p)
        w2 = self.port_wire(q)
        if w1 == w2:
            # closed loop with no spiders: trace of I is 2, trace of H is 0
            w = self.wires[w1]
            self.multiply_scalar(Scalar.zero() if w.hadamard else Scalar.sqrt2_power(2))
            self.remove_port(p)
            self.remove_port(q)
            return None
        a = self.wires[w1].other(port_end(p))
        b = self.wires[w2].other(port_end(q))
        h = self.wires[w1].hadamard ^ self.wires[w2].hadamard
        self.remove_port(p)
        self.remove_port(q)
        return self.add_wire(a, b, h)

    def __eq__(self, other):
        if not isinstance(other, ZxDiagram):
            return NotImplemented
        return (self.spiders == other.spiders and self.wires == other.wires
                and self.inputs == other.inputs and self.outputs == other.outputs
                and self.scalar == other.scalar)

    def __repr__(self):
        return (f"ZxDiagram(spiders={len(self.spiders)}, wires={len(self.wires)}, "
                f"in={len(self.inputs)}, out={len(self.outputs)}, scalar={self.scalar})")


# ----- generators -----
def empty(scalar=None):
    d = ZxDiagram()
    if scalar is not None:
        d.scalar = scalar
    return d


def _spider_generator(color, n, m, phase):
    if n < 0 or m < 0:
        raise ValueError("spider arities must be non-negative")
    d = ZxDiagram()
    sid = d.add_spider(color, phase if phase is not None else Phase.zero())
    for _ in range(n):
        p = d.add_port()
        d.inputs.append(p)
        d.add_wire(port_end(p), spider_end(sid))
    for _ in range(m):
        p = d.add_port()
        d.outputs.append(p)
        d.add_wire(spider_end(sid), port_end(p))
    return d


def z_spider(n, m, phase=None):
    return _spider_generator(Z, n, m, phase)


def x_spider(n, m, phase=None):
    return _spider_generator(X, n, m, phase)


def _wire_generator(n_in, n_out, pairs, hadamard=False):
    d = ZxDiagram()
    ins = [d.add_port() for _ in range(n_in)]
    outs = [d.add_port() for _ in range(n_out)]
    d.inputs, d.outputs = ins, outs
    ports = ins + outs
    for i, j in pairs:
        d.add_wire(port_end(ports[i]), port_end(ports[j]), hadamard)
    return d


def hadamard():
    return _wire_generator(1, 1, [(0, 1)], hadamard=True)


def identity():
    return _wire_generator(1, 1, [(0, 1)])


def swap():
    return _wire_generator(2, 2, [(0, 3), (1, 2)])


def cup():
    return _wire_generator(0, 2, [(0, 1)])


def cap():
    return _wire_generator(2, 0, [(0, 1)])


def make_generator(kind, n=0, m=0, phase=None):
    builders = {
        "z_spider": lambda: z_spider(n, m, phase),
        "x_spider": lambda: x_spider(n, m, phase),
        "hadamard": hadamard,
        "identity": identity,
        "swap": swap,
        "cup": cup,
        "cap": cap,
    }
    if kind not in builders:
        raise ValueError(f"unknown generator kind {kind!r}")
    return builders[kind]()


def identity_wires(n):
    d = empty()
    for _ in range(n):
        d = tensor(d, identity())
    return d


# ----- composition -----
def tensor(a, b):
    d = a.copy()
    pmap = d.absorb(b)
    d.inputs = list(a.inputs) + [pmap[p] for p in b.inputs]
    d.outputs = list(a.outputs) + [pmap[p] for p in b.outputs]
    return d


def compose(after, before):
    """after ∘ before: outputs of before glued to inputs of after in order"""
    if len(before.outputs) != len(after.inputs):
        raise ArityMismatch(
            f"cannot compose: {len(before.outputs)} outputs into {len(after.inputs)} inputs")
    d = before.copy()
    pmap = d.absorb(after)
    glue_pairs = list(zip(before.outputs, [pmap[p] for p in after.inputs]))
    new_outputs = [pmap[p] for p in after.outputs]
    d.outputs = []
    for p, q in glue_pairs:
        d.glue(p, q)
    d.inputs = list(before.inputs)
    d.outputs = new_outputs
    return d


def conjugate(d):
    out = d.copy()
    for s in out.spiders.values():
        s.phase = -s.phase
    out.scalar = d.scalar.conjugate()
    return out


def transpose(d):
    out = d.copy()
    out.inputs, out.outputs = list(d.outputs), list(d.inputs)
    return out


def adjoint(d):
    return transpose(conjugate(d))


def dagger_variants(d, which):
    variants = {"conjugate": conjugate, "transpose": transpose, "adjoint": adjoint}
    if which not in variants:
        raise ValueError(f"unknown variant {which!r}")
    return variants[which](d)


def replicate_periodic(cell, count, east, west, periodic=True):
    """Instantiate a !-box: copy i's east ports glue to copy i+1's west ports"""
    if len(east) != len(west):
        raise GluingMismatch(f"{len(east)} east ports vs {len(west)} west ports")
    boundary = set(cell.inputs) | set(cell.outputs)
    if not set(east) <= boundary or not set(west) <= boundary:
        raise GluingMismatch("gluing ports must be boundary ports of the cell")
    if set(east) & set(west) or len(set(east)) != len(east) or len(set(west)) != len(west):
        raise GluingMismatch("each gluing port may appear once, on one side only")
    if count < 1:
        raise ValueError("count must be at least 1")
    if count == 1 and not east:
        return cell.copy()

    d = empty()
    maps = [d.absorb(cell) for _ in range(count)]
    # absorb multiplied the cell scalar in count times already
    glued = set()
    n_links = count if periodic else count - 1
    for i in range(n_links):
        nxt = (i + 1) % count
        for e, w in zip(east, west):
            p, q = maps[i][e], maps[nxt][w]
            glued.update((p, q))
            d.glue(p, q)
    d.inputs = [m[p] for m in maps for p in cell.inputs if m[p] not in glued]
    d.outputs = [m[p] for m in maps for p in cell.outputs if m[p] not in glued]
    logger.debug(f"🔄 replicated cell x{count}: {d!r}")
    return d
