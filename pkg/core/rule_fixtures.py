"""Randomized small instances of every rewrite rule, used by selftest-rules and the tests."""
import logging

from .phase import Phase
from .zx_diagram import X, Z, ZxDiagram, other_color, port_end, spider_end
from .zx_rules import BACKWARD, FORWARD, RuleId, find_matches

logger = logging.getLogger(__name__)


def random_phase(rng, clifford=False):
    step = 2 if clifford else 1
    return Phase.from_quarters(step * int(rng.integers(8 // step)))


def random_color(rng):
    return Z if rng.integers(2) else X


def add_leg(d, sid, rng=None, output=True, hadamard=None):
    """New boundary port wired to spider sid"""
    p = d.add_port()
    (d.outputs if output else d.inputs).append(p)
    h = bool(rng.integers(2)) if hadamard is None and rng is not None else bool(hadamard)
    d.add_wire(spider_end(sid), port_end(p), h)
    return p


def add_legs(d, sid, k, rng):
    for _ in range(k):
        add_leg(d, sid, rng, output=bool(rng.integers(2)))


def _spider_fusion(rng):
    d = ZxDiagram()
    c = random_color(rng)
    a = d.add_spider(c, random_phase(rng))
    b = d.add_spider(c, random_phase(rng))
    for _ in range(1 + int(rng.integers(2))):
        d.add_wire(spider_end(a), spider_end(b))
    if rng.integers(2):
        d.add_wire(spider_end(a), spider_end(b), True)
    add_legs(d, a, 1 + int(rng.integers(3)), rng)
    add_legs(d, b, 1 + int(rng.integers(3)), rng)
    return d, FORWARD


def _identity(rng, both_hadamard):
    d = ZxDiagram()
    s = d.add_spider(random_color(rng))
    t = d.add_spider(random_color(rng), random_phase(rng))
    h1 = both_hadamard or bool(rng.integers(2))
    h2 = both_hadamard or (not h1 and bool(rng.integers(2)))
    add_leg(d, s, output=False, hadamard=h1)
    d.add_wire(spider_end(s), spider_end(t), h2)
    add_legs(d, t, 1 + int(rng.integers(3)), rng)
    return d, FORWARD


def _state_copy(rng):
    d = ZxDiagram()
    tc = random_color(rng)
    t = d.add_spider(tc, random_phase(rng))
    through_h = bool(rng.integers(2))
    s = d.add_spider(tc if through_h else other_color(tc), Phase.pi() if rng.integers(2) else Phase.zero())
    d.add_wire(spider_end(s), spider_end(t), through_h)
    add_legs(d, t, int(rng.integers(4)), rng)
    return d, FORWARD


def _pi_commutation(rng):
    d = ZxDiagram()
    tc = random_color(rng)
    t = d.add_spider(tc, random_phase(rng))
    through_h = bool(rng.integers(2))
    p = d.add_spider(tc if through_h else other_color(tc), Phase.pi())
    add_leg(d, p, rng, output=False)
    d.add_wire(spider_end(p), spider_end(t), through_h)
    add_legs(d, t, 1 + int(rng.integers(3)), rng)
    return d, FORWARD


def _color_change(rng, all_hadamard, direction):
    d = ZxDiagram()
    c = X if direction == FORWARD else Z
    s = d.add_spider(c, random_phase(rng))
    k = 1 + int(rng.integers(4))
    for i in range(k):
        add_leg(d, s, output=bool(i % 2), hadamard=True if all_hadamard else bool(rng.integers(2)))
    return d, direction


def _bialgebra(rng, n, m, direction=FORWARD):
    d = ZxDiagram()
    if direction == BACKWARD:
        z = d.add_spider(Z)
        x = d.add_spider(X)
        d.add_wire(spider_end(z), spider_end(x))
        for _ in range(2):
            add_leg(d, x, rng, output=True)
            add_leg(d, z, rng, output=False)
        return d, BACKWARD
    xs = [d.add_spider(X) for _ in range(n)]
    zs = [d.add_spider(Z) for _ in range(m)]
    for x in xs:
        for z in zs:
            d.add_wire(spider_end(x), spider_end(z))
    for z in zs:
        add_leg(d, z, rng, output=False)
    for x in xs:
        add_leg(d, x, rng, output=True)
    return d, FORWARD


def _hopf(rng):
    d = ZxDiagram()
    a_color = random_color(rng)
    same = bool(rng.integers(2))
    a = d.add_spider(a_color, random_phase(rng))
    b = d.add_spider(a_color if same else other_color(a_color), random_phase(rng))
    for _ in range(2 + int(rng.integers(2))):
        d.add_wire(spider_end(a), spider_end(b), same)
    add_legs(d, a, 1 + int(rng.integers(2)), rng)
    add_legs(d, b, 1 + int(rng.integers(2)), rng)
    return d, FORWARD


def _scalar(rng):
    d = ZxDiagram()
    k = 1 + int(rng.integers(3))
    ids = [d.add_spider(random_color(rng), random_phase(rng)) for _ in range(k)]
    for a, b in zip(ids, ids[1:]):
        d.add_wire(spider_end(a), spider_end(b), bool(rng.integers(2)))
    # an unrelated open part keeps the diagram non-trivial
    other = d.add_spider(random_color(rng), random_phase(rng))
    add_legs(d, other, 1 + int(rng.integers(2)), rng)
    return d, FORWARD


def _euler(rng):
    d = ZxDiagram()
    s = d.add_spider(random_color(rng), random_phase(rng))
    add_leg(d, s, output=True, hadamard=True)
    add_legs(d, s, int(rng.integers(3)), rng)
    return d, FORWARD


def build_instance(rule, rng):
    rule = RuleId(rule)
    if rule == RuleId.SF:
        return _spider_fusion(rng)
    if rule == RuleId.I:
        return _identity(rng, both_hadamard=False)
    if rule == RuleId.HC:
        return _identity(rng, both_hadamard=True)
    if rule == RuleId.SC:
        return _state_copy(rng)
    if rule == RuleId.PI:
        return _pi_commutation(rng)
    if rule == RuleId.CC:
        return _color_change(rng, True, FORWARD if rng.integers(2) else BACKWARD)
    if rule == RuleId.CCP:
        return _color_change(rng, False, FORWARD if rng.integers(2) else BACKWARD)
    if rule == RuleId.B:
        return _bialgebra(rng, 2, 2, FORWARD if rng.integers(2) else BACKWARD)
    if rule == RuleId.GB:
        return _bialgebra(rng, 2 + int(rng.integers(2)), 2 + int(rng.integers(2)))
    if rule == RuleId.HF:
        return _hopf(rng)
    if rule == RuleId.S:
        return _scalar(rng)
    return _euler(rng)


def rule_instances(rule, rng, count=3):
    """count (diagram, match) pairs where the rule applies"""
    out = []
    while len(out) < count:
        d, direction = build_instance(rule, rng)
        matches = find_matches(d, rule, direction)
        if not matches:
            logger.warning(f"⚠️ fixture for {RuleId(rule).value} produced no match, retrying")
            continue
        out.append((d, matches[int(rng.integers(len(matches)))]))
    return out
