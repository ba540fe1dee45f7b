import numpy as np
import pytest

from core.errors import SearchCapExceeded
from models.automorphisms import brute_force_automorphisms, find_automorphisms
from models.bipartite import PRESERVING, REVERSING, load_graph
from models.builders import build_model, random_cyclic_model


def _maps(automorphisms):
    return {(a.perm_v, a.perm_vhat) for a in automorphisms}


def test_ising_chain_reversing_automorphisms():
    m = build_model("ising_chain", 4)
    found = find_automorphisms(m)
    # the bipartite graph is an 8-cycle: four odd rotations and four edge reflections
    assert len(found) == 8
    assert sum(a.is_involution() for a in found) == 4
    assert all(a.kind == REVERSING and a.satisfied_by(m.sigma) for a in found)
    for named in m.reversing_automorphisms():
        assert (named.perm_v, named.perm_vhat) in _maps(found)


def test_ising_chain_preserving_automorphisms():
    found = find_automorphisms(build_model("ising_chain", 4), kind=PRESERVING)
    assert len(found) == 8
    assert any(a.is_identity() for a in found)


@pytest.mark.parametrize("kind, args", [
    ("ising_chain", (4,)),
    ("ashkin_teller", (4,)),
    ("three_spin", (6,)),
    ("plaquette_ising", (2, 2)),
])
def test_search_finds_named_automorphisms_and_matches_brute_force(kind, args):
    m = build_model(kind, *args)
    for direction in (REVERSING, PRESERVING):
        found = find_automorphisms(m, kind=direction)
        assert _maps(found) == _maps(brute_force_automorphisms(m, kind=direction))
        assert len(found) == len(_maps(found))
    named = [a for a in m.automorphisms if a.kind == REVERSING]
    found = _maps(find_automorphisms(m))
    for a in named:
        assert (a.perm_v, a.perm_vhat) in found


def test_single_edge_has_one_involution(graph_path):
    m = load_graph(graph_path("single_edge.json"))
    (a,) = find_automorphisms(m)
    assert a.is_involution()
    assert a.name == "reversing_0"


def test_limit_and_unbalanced_graph():
    assert len(find_automorphisms(build_model("ising_chain", 6), limit=2)) == 2
    assert find_automorphisms(build_model("ising_square", 2, 2)) == []


def test_search_cap():
    with pytest.raises(SearchCapExceeded):
        find_automorphisms(build_model("ising_chain", 6), cap=10)


def test_unknown_kind():
    with pytest.raises(ValueError):
        find_automorphisms(build_model("ising_chain", 4), kind="sideways")


@pytest.mark.parametrize("seed", [1, 2, 3])
def test_random_cyclic_graphs(seed):
    m = random_cyclic_model(np.random.default_rng(seed))
    shift = m.automorphism("block_shift")
    assert shift.satisfied_by(m.sigma)
    preserving = find_automorphisms(m, kind=PRESERVING)
    assert (shift.perm_v, shift.perm_vhat) in _maps(preserving)
    assert _maps(preserving) == _maps(brute_force_automorphisms(m, PRESERVING))
    reversing = find_automorphisms(m)
    brute = brute_force_automorphisms(m, REVERSING)
    assert _maps(reversing) == _maps(brute)
    for a in reversing:
        assert a.is_involution() == a.compose(a).is_identity()
