"""Scalar-exact ZX rewrite rules and a terminating simplifier.

Each rule has a matcher that checks a concrete anchor tuple and a rewrite that
edits a copy of the diagram. find_matches walks candidate anchors through the
same matcher, so apply() can re-validate and reject stale matches.
Anchors are tagged tuples: ("s", spider id) or ("w", wire id).
"""
import logging
from dataclasses import dataclass
from enum import Enum

import numpy as np

from config import get_config
from .errors import StaleMatch, TooLarge
from .phase import Phase, Scalar
from .zx_diagram import X, Z, other_color, spider_end

logger = logging.getLogger(__name__)

FORWARD = "forward"
BACKWARD = "backward"

SCALAR_COMPONENT_LIMIT = 4


class RuleId(str, Enum):
    SF = "SF"
    I = "I"  # noqa: E741
    HC = "HC"
    SC = "SC"
    PI = "PI"
    CC = "CC"
    CCP = "CCP"
    B = "B"
    GB = "GB"
    HF = "HF"
    S = "S"
    EULER = "EULER"


@dataclass(frozen=True)
class RuleMatch:
    rule: RuleId
    anchors: tuple
    direction: str = FORWARD

    def to_dict(self):
        return {"rule": self.rule.value, "anchors": [list(a) for a in self.anchors],
                "direction": self.direction}


# ----- small graph helpers -----
def _sid(anchor):
    return anchor[1]


def _has_self_loop(d, sid):
    return any(d.wires[w].is_self_loop() for w in d.spider_wires(sid))


def _spider_wire_to(d, wid, sid):
    """Other endpoint of wire wid seen from spider sid"""
    return d.wires[wid].other(spider_end(sid))


def _effectively_opposite(d, a, b, wid):
    """True when spider b sees spider a as the other colour through wire wid"""
    ca, cb = d.spiders[a].color, d.spiders[b].color
    return (ca != cb) != d.wires[wid].hadamard


def _connect_legs(d, new_sid, legs):
    """Reattach (other end, hadamard) legs to a spider"""
    for end, h in legs:
        d.add_wire(spider_end(new_sid), end, h)


def _external_legs(d, sid, exclude):
    """(other end, hadamard) of the wires of sid not leading into the exclude set"""
    end = spider_end(sid)
    legs = []
    for wid in d.spider_wires(sid):
        w = d.wires[wid]
        other = w.other(end)
        if other[0] == "s" and other[1] in exclude:
            continue
        legs.append((other, w.hadamard))
    return legs


def _remove_loops(d, sid):
    """Drop every self-loop of sid: plain ones are free, Hadamard ones add pi and 1/sqrt2"""
    for wid in d.spider_wires(sid):
        w = d.wires[wid]
        if not w.is_self_loop():
            continue
        d.remove_wire(wid)
        if w.hadamard:
            s = d.spiders[sid]
            s.phase = s.phase + Phase.pi()
            d.multiply_scalar(Scalar.sqrt2_power(-1))


# ----- rules -----
class Rule:
    rule_id = None
    directions = (FORWARD,)

    def candidates(self, d, direction):
        return []

    def check(self, d, anchors, direction):
        """Context dict when anchors fit the pattern, None otherwise"""
        return None

    def rewrite(self, d, ctx, direction):
        raise NotImplementedError

    def find(self, d, direction=FORWARD):
        if direction not in self.directions:
            return []
        seen = set()
        found = []
        for anchors in self.candidates(d, direction):
            anchors = tuple(anchors)
            if anchors in seen:
                continue
            seen.add(anchors)
            if self.check(d, anchors, direction) is not None:
                found.append(RuleMatch(self.rule_id, anchors, direction))
        found.sort(key=lambda m: m.anchors)
        return found


class SpiderFusion(Rule):
    rule_id = RuleId.SF

    def candidates(self, d, direction):
        for wid, w in sorted(d.wires.items()):
            if w.a[0] != "s" or w.b[0] != "s":
                continue
            if w.is_self_loop():
                yield (w.a, ("w", wid))
            elif not w.hadamard:
                yield tuple(sorted((w.a, w.b)))

    def check(self, d, anchors, direction):
        if len(anchors) != 2 or anchors[0][0] != "s":
            return None
        a = _sid(anchors[0])
        if a not in d.spiders:
            return None
        if anchors[1][0] == "w":
            wid = anchors[1][1]
            if wid not in d.wires or d.wires[wid].ends() != (spider_end(a), spider_end(a)):
                return None
            return {"loop": wid, "a": a}
        b = _sid(anchors[1])
        if b not in d.spiders or a == b or d.spiders[a].color != d.spiders[b].color:
            return None
        plain = [w for w in d.wires_between(spider_end(a), spider_end(b)) if not d.wires[w].hadamard]
        if not plain:
            return None
        return {"a": a, "b": b, "fuse_wire": plain[0]}

    def rewrite(self, d, ctx, direction):
        a = ctx["a"]
        if "loop" in ctx:
            w = d.remove_wire(ctx["loop"])
            if w.hadamard:
                d.spiders[a].phase = d.spiders[a].phase + Phase.pi()
                d.multiply_scalar(Scalar.sqrt2_power(-1))
            return
        b = ctx["b"]
        d.remove_wire(ctx["fuse_wire"])
        end_a, end_b = spider_end(a), spider_end(b)
        for wid in d.spider_wires(b):
            w = d.remove_wire(wid)
            if w.is_self_loop():
                d.add_wire(end_a, end_a, w.hadamard)
            else:
                other = w.other(end_b)
                d.add_wire(end_a, end_a if other == end_b else other, w.hadamard)
        d.spiders[a].phase = d.spiders[a].phase + d.spiders[b].phase
        d.remove_spider(b)
        # former parallel wires are now self-loops
        _remove_loops(d, a)


class IdentityRemoval(Rule):
    rule_id = RuleId.I
    both_hadamard = False

    def candidates(self, d, direction):
        return [(("s", sid),) for sid in sorted(d.spiders)]

    def check(self, d, anchors, direction):
        if len(anchors) != 1:
            return None
        sid = _sid(anchors[0])
        s = d.spiders.get(sid)
        if s is None or not s.phase.is_zero() or d.degree(sid) != 2 or _has_self_loop(d, sid):
            return None
        w1, w2 = d.spider_wires(sid)
        h1, h2 = d.wires[w1].hadamard, d.wires[w2].hadamard
        if (h1 and h2) != self.both_hadamard:
            return None
        return {"sid": sid, "w1": w1, "w2": w2}

    def rewrite(self, d, ctx, direction):
        end = spider_end(ctx["sid"])
        w1 = d.wires[ctx["w1"]]
        w2 = d.wires[ctx["w2"]]
        e1, e2 = w1.other(end), w2.other(end)
        d.remove_spider(ctx["sid"])
        d.add_wire(e1, e2, w1.hadamard ^ w2.hadamard)


class HadamardCancellation(IdentityRemoval):
    """H - spider(0) - H with both wires Hadamard collapses to a plain wire"""
    rule_id = RuleId.HC
    both_hadamard = True


class StateCopy(Rule):
    rule_id = RuleId.SC

    def candidates(self, d, direction):
        for sid in sorted(d.spiders):
            wires = d.spider_wires(sid)
            if len(wires) == 1:
                other = _spider_wire_to(d, wires[0], sid)
                if other[0] == "s":
                    yield (("s", sid), other)

    def check(self, d, anchors, direction):
        if len(anchors) != 2:
            return None
        s, t = _sid(anchors[0]), _sid(anchors[1])
        if s not in d.spiders or t not in d.spiders or s == t:
            return None
        if not d.spiders[s].phase.is_pauli() or d.degree(s) != 1:
            return None
        (wid,) = d.spider_wires(s)
        if _spider_wire_to(d, wid, s) != spider_end(t) or _has_self_loop(d, t):
            return None
        if not _effectively_opposite(d, s, t, wid):
            return None
        return {"s": s, "t": t, "wire": wid}

    def rewrite(self, d, ctx, direction):
        s, t = ctx["s"], ctx["t"]
        a = d.spiders[s].phase.quarters // 4
        target = d.spiders[t]
        d.remove_spider(s)
        legs = _external_legs(d, t, exclude=())
        d.remove_spider(t)
        copy_phase = Phase.pi() if a else Phase.zero()
        for end, h in legs:
            c = d.add_spider(other_color(target.color), copy_phase)
            d.add_wire(spider_end(c), end, h)
        n = len(legs)
        d.multiply_scalar(Scalar.sqrt2_power(1 - n))
        if a:
            d.multiply_scalar(Scalar.from_phase(target.phase))


class PiCommutation(Rule):
    rule_id = RuleId.PI

    def candidates(self, d, direction):
        for sid in sorted(d.spiders):
            for wid, other in d.neighbors(sid):
                if other[0] == "s":
                    yield (("s", sid), other)

    def check(self, d, anchors, direction):
        if len(anchors) != 2:
            return None
        p, t = _sid(anchors[0]), _sid(anchors[1])
        if p not in d.spiders or t not in d.spiders or p == t:
            return None
        if not d.spiders[p].phase.is_pi() or d.degree(p) != 2 or _has_self_loop(d, p):
            return None
        if _has_self_loop(d, t):
            return None
        wires = d.spider_wires(p)
        to_t = [w for w in wires if _spider_wire_to(d, w, p) == spider_end(t)]
        if len(to_t) != 1:
            return None
        (wid,) = to_t
        (w2,) = [w for w in wires if w != wid]
        if not _effectively_opposite(d, p, t, wid):
            return None
        return {"p": p, "t": t, "wire": wid, "other_wire": w2}

    def rewrite(self, d, ctx, direction):
        p, t = ctx["p"], ctx["t"]
        h = d.wires[ctx["wire"]].hadamard
        w2 = d.wires[ctx["other_wire"]]
        e2 = w2.other(spider_end(p))
        flag = w2.hadamard ^ h
        d.remove_spider(p)
        target = d.spiders[t]
        alpha = target.phase
        legs = _external_legs(d, t, exclude=())
        for wid in d.spider_wires(t):
            d.remove_wire(wid)
        end_t = spider_end(t)
        pi_color = other_color(target.color)
        for end, hh in legs:
            q = d.add_spider(pi_color, Phase.pi())
            d.add_wire(end_t, spider_end(q))
            d.add_wire(spider_end(q), end, hh)
        d.add_wire(end_t, e2, flag)
        target.phase = -alpha
        d.multiply_scalar(Scalar.from_phase(alpha))


class Hopf(Rule):
    rule_id = RuleId.HF

    def candidates(self, d, direction):
        pairs = set()
        for w in d.wires.values():
            if w.a[0] == "s" and w.b[0] == "s" and not w.is_self_loop():
                pairs.add(tuple(sorted((w.a, w.b))))
        return sorted(pairs)

    def check(self, d, anchors, direction):
        if len(anchors) != 2:
            return None
        a, b = _sid(anchors[0]), _sid(anchors[1])
        if a not in d.spiders or b not in d.spiders or a == b:
            return None
        want_hadamard = d.spiders[a].color == d.spiders[b].color
        between = [w for w in d.wires_between(spider_end(a), spider_end(b))
                   if d.wires[w].hadamard == want_hadamard]
        if len(between) < 2:
            return None
        return {"wires": between[:2]}

    def rewrite(self, d, ctx, direction):
        for wid in ctx["wires"]:
            d.remove_wire(wid)
        d.multiply_scalar(Scalar.sqrt2_power(-2))


class ColorChange(Rule):
    """X spider with all-Hadamard legs becomes Z with plain legs (and back)"""
    rule_id = RuleId.CC
    directions = (FORWARD, BACKWARD)
    require_all_hadamard = True

    def candidates(self, d, direction):
        return [(("s", sid),) for sid in sorted(d.spiders)]

    def check(self, d, anchors, direction):
        if len(anchors) != 1:
            return None
        sid = _sid(anchors[0])
        s = d.spiders.get(sid)
        if s is None or s.color != (X if direction == FORWARD else Z):
            return None
        if self.require_all_hadamard:
            legs = [d.wires[w] for w in d.spider_wires(sid) if not d.wires[w].is_self_loop()]
            if not legs or not all(w.hadamard for w in legs):
                return None
        return {"sid": sid}

    def rewrite(self, d, ctx, direction):
        sid = ctx["sid"]
        s = d.spiders[sid]
        s.color = other_color(s.color)
        for wid in d.spider_wires(sid):
            w = d.wires[wid]
            if not w.is_self_loop():
                d.set_wire_hadamard(wid, not w.hadamard)


class ColorChangePrime(ColorChange):
    """Any spider changes colour, toggling the Hadamard flag of every leg"""
    rule_id = RuleId.CCP
    require_all_hadamard = False


def _bialgebra_shape(d, xs, zs):
    """Complete bipartite plain wiring between phaseless xs and zs, one external leg each"""
    group = set(xs) | set(zs)
    for sid in group:
        s = d.spiders.get(sid)
        if s is None or not s.phase.is_zero() or _has_self_loop(d, sid):
            return None
    if any(d.spiders[x].color != X for x in xs) or any(d.spiders[z].color != Z for z in zs):
        return None
    externals = {}
    for sid in group:
        partners = zs if sid in xs else xs
        wires = d.spider_wires(sid)
        if len(wires) != len(partners) + 1:
            return None
        for partner in partners:
            between = d.wires_between(spider_end(sid), spider_end(partner))
            if len(between) != 1 or d.wires[between[0]].hadamard:
                return None
        legs = _external_legs(d, sid, exclude=group)
        if len(legs) != 1:
            return None
        externals[sid] = legs[0]
    return externals


class Bialgebra(Rule):
    rule_id = RuleId.B
    directions = (FORWARD, BACKWARD)
    min_size = 2
    max_size = 2

    def candidates(self, d, direction):
        if direction == BACKWARD:
            for wid, w in sorted(d.wires.items()):
                if w.a[0] == "s" and w.b[0] == "s" and not w.is_self_loop():
                    yield tuple(sorted((w.a, w.b)))
            return
        for x in sorted(d.spiders):
            if d.spiders[x].color != X or not d.spiders[x].phase.is_zero():
                continue
            ends = [d.wires[w].other(spider_end(x)) for w in d.spider_wires(x)]
            for skip in range(len(ends)):
                zs = [e[1] for k, e in enumerate(ends) if k != skip and e[0] == "s"]
                if len(zs) != len(ends) - 1 or len(set(zs)) != len(zs) or not self.min_size <= len(zs) <= self.max_size:
                    continue
                if any(d.spiders[z].color != Z for z in zs):
                    continue
                zset = set(zs)
                xs = []
                for cand in sorted(d.spiders):
                    if d.spiders[cand].color != X:
                        continue
                    nbrs = {e[1] for _, e in d.neighbors(cand) if e[0] == "s"}
                    if zset <= nbrs:
                        xs.append(cand)
                if self.min_size <= len(xs) <= self.max_size:
                    yield tuple(("s", i) for i in sorted(xs)) + tuple(("s", i) for i in sorted(zs))

    def check(self, d, anchors, direction):
        ids = [_sid(a) for a in anchors]
        if any(i not in d.spiders for i in ids):
            return None
        if direction == BACKWARD:
            if len(ids) != 2:
                return None
            colors = {d.spiders[i].color for i in ids}
            if colors != {X, Z}:
                return None
            z = ids[0] if d.spiders[ids[0]].color == Z else ids[1]
            x = ids[1] if z == ids[0] else ids[0]
            if not (d.spiders[z].phase.is_zero() and d.spiders[x].phase.is_zero()):
                return None
            if _has_self_loop(d, z) or _has_self_loop(d, x):
                return None
            between = d.wires_between(spider_end(z), spider_end(x))
            if len(between) != 1 or d.wires[between[0]].hadamard:
                return None
            if d.degree(z) != 3 or d.degree(x) != 3:
                return None
            return {"z": z, "x": x, "wire": between[0]}
        xs = [i for i in ids if d.spiders[i].color == X]
        zs = [i for i in ids if d.spiders[i].color == Z]
        if not (self.min_size <= len(xs) <= self.max_size and self.min_size <= len(zs) <= self.max_size):
            return None
        externals = _bialgebra_shape(d, xs, zs)
        if externals is None:
            return None
        return {"xs": sorted(xs), "zs": sorted(zs), "externals": externals}

    def rewrite(self, d, ctx, direction):
        if direction == BACKWARD:
            z, x = ctx["z"], ctx["x"]
            z_legs = _external_legs(d, z, exclude={x})
            x_legs = _external_legs(d, x, exclude={z})
            d.remove_spider(z)
            d.remove_spider(x)
            new_xs = [d.add_spider(X) for _ in z_legs]
            new_zs = [d.add_spider(Z) for _ in x_legs]
            _connect_pairs(d, new_xs, z_legs)
            _connect_pairs(d, new_zs, x_legs)
            for nx in new_xs:
                for nz in new_zs:
                    d.add_wire(spider_end(nx), spider_end(nz))
            d.multiply_scalar(Scalar.sqrt2_power((len(new_xs) - 1) * (len(new_zs) - 1)))
            return
        xs, zs, externals = ctx["xs"], ctx["zs"], ctx["externals"]
        for sid in xs + zs:
            d.remove_spider(sid)
        new_z = d.add_spider(Z)
        new_x = d.add_spider(X)
        _connect_legs(d, new_z, [externals[x] for x in xs])
        _connect_legs(d, new_x, [externals[z] for z in zs])
        d.add_wire(spider_end(new_z), spider_end(new_x))
        d.multiply_scalar(Scalar.sqrt2_power(-(len(xs) - 1) * (len(zs) - 1)))


def _connect_pairs(d, sids, legs):
    for sid, (end, h) in zip(sids, legs):
        d.add_wire(spider_end(sid), end, h)


class GeneralizedBialgebra(Bialgebra):
    rule_id = RuleId.GB
    directions = (FORWARD,)
    max_size = 1 << 30


class ScalarRemoval(Rule):
    """Closed components with few spiders are evaluated into the scalar"""
    rule_id = RuleId.S

    def candidates(self, d, direction):
        for spiders, ports in d.components():
            if spiders and not ports:
                yield tuple(("s", i) for i in spiders)

    def check(self, d, anchors, direction):
        ids = [_sid(a) for a in anchors]
        if not ids or len(ids) > SCALAR_COMPONENT_LIMIT or any(i not in d.spiders for i in ids):
            return None
        group = set(ids)
        for sid in ids:
            for wid in d.spider_wires(sid):
                other = _spider_wire_to(d, wid, sid)
                if other[0] != "s" or other[1] not in group:
                    return None
        return {"ids": ids}

    def rewrite(self, d, ctx, direction):
        from .zx_diagram import ZxDiagram
        from .zx_eval import scalar_value
        sub = ZxDiagram()
        group = set(ctx["ids"])
        for sid in ctx["ids"]:
            s = d.spiders[sid]
            sub.add_spider(s.color, s.phase, sid=sid)
        for wid, w in sorted(d.wires.items()):
            if w.a[0] == "s" and w.a[1] in group:
                sub.add_wire(w.a, w.b, w.hadamard)
        value = scalar_value(sub)
        for sid in ctx["ids"]:
            d.remove_spider(sid)
        d.multiply_scalar(Scalar.from_complex(value))


class EulerDecomposition(Rule):
    """H wire = e^{-i pi/4} Z(pi/2) X(pi/2) Z(pi/2)"""
    rule_id = RuleId.EULER

    def candidates(self, d, direction):
        return [(("w", wid),) for wid, w in sorted(d.wires.items()) if w.hadamard]

    def check(self, d, anchors, direction):
        if len(anchors) != 1 or anchors[0][0] != "w":
            return None
        wid = anchors[0][1]
        w = d.wires.get(wid)
        if w is None or not w.hadamard or w.is_self_loop():
            return None
        return {"wire": wid}

    def rewrite(self, d, ctx, direction):
        w = d.remove_wire(ctx["wire"])
        half = Phase.from_quarters(2)
        z1 = d.add_spider(Z, half)
        x = d.add_spider(X, half)
        z2 = d.add_spider(Z, half)
        d.add_wire(w.a, spider_end(z1))
        d.add_wire(spider_end(z1), spider_end(x))
        d.add_wire(spider_end(x), spider_end(z2))
        d.add_wire(spider_end(z2), w.b)
        d.multiply_scalar(Scalar.root_of_unity(-1))


RULES = {
    RuleId.SF: SpiderFusion(),
    RuleId.I: IdentityRemoval(),
    RuleId.HC: HadamardCancellation(),
    RuleId.SC: StateCopy(),
    RuleId.PI: PiCommutation(),
    RuleId.CC: ColorChange(),
    RuleId.CCP: ColorChangePrime(),
    RuleId.B: Bialgebra(),
    RuleId.GB: GeneralizedBialgebra(),
    RuleId.HF: Hopf(),
    RuleId.S: ScalarRemoval(),
    RuleId.EULER: EulerDecomposition(),
}

SIMPLIFY_PRIORITY = (
    RuleId.S, RuleId.HC, RuleId.I, RuleId.SF, RuleId.SC, RuleId.PI,
    RuleId.HF, RuleId.CCP, RuleId.B, RuleId.GB,
)


def find_matches(d, rule, direction=FORWARD):
    return RULES[RuleId(rule)].find(d, direction)


def apply(d, m):
    """Rewrite a copy of d at the match; raises StaleMatch when the anchors no longer fit"""
    rule = RULES[m.rule]
    if m.direction not in rule.directions:
        raise StaleMatch(f"{m.rule.value} has no {m.direction} direction")
    ctx = rule.check(d, tuple(m.anchors), m.direction)
    if ctx is None:
        raise StaleMatch(f"{m.rule.value} match at {m.anchors} no longer fits the diagram")
    out = d.copy()
    rule.rewrite(out, ctx, m.direction)
    return out


def simplify(d, strategy="default", trace=None, max_steps=None):
    """Apply the first strictly measure-decreasing match in priority order until none is left"""
    if strategy != "default":
        raise ValueError(f"unknown simplification strategy {strategy!r}")
    current = d.copy()
    steps = 0
    while max_steps is None or steps < max_steps:
        measure = current.measure()
        progressed = False
        for rule_id in SIMPLIFY_PRIORITY:
            for m in find_matches(current, rule_id):
                candidate = apply(current, m)
                if candidate.measure() < measure:
                    current = candidate
                    if trace is not None:
                        trace.append(m.to_dict())
                    progressed = True
                    break
            if progressed:
                break
        if not progressed:
            break
        steps += 1
    logger.debug(f"🔄 simplify: {steps} rewrites, {current!r}")
    return current


def rewrite_trace(d, strategy="default"):
    """(simplified diagram, list of applied {rule, anchors, direction})"""
    trace = []
    out = simplify(d, strategy=strategy, trace=trace)
    return out, trace


def semantic_eq(a, b, tol=1e-10):
    from .zx_eval import contract
    if len(a.inputs) != len(b.inputs) or len(a.outputs) != len(b.outputs):
        return False
    cap = get_config().dense_cap
    legs = max(a.n_boundary(), b.n_boundary())
    if legs > cap:
        raise TooLarge(f"{legs} boundary legs exceeds dense cap {cap}")
    diff = np.max(np.abs(contract(a) - contract(b)))
    return bool(diff <= tol)


def all_matches(d, direction=FORWARD):
    return [m for rule_id in RuleId for m in find_matches(d, rule_id, direction)]


__all__ = ["RuleId", "RuleMatch", "FORWARD", "BACKWARD", "find_matches", "apply",
           "simplify", "rewrite_trace", "semantic_eq", "all_matches"]
