from fractions import Fraction

import pytest

from core.errors import NonBinaryEntry, NotReversing, ParseError
from models.bipartite import (PRESERVING, REVERSING, Automorphism, default_dual_kappa, dump_graph, gauged,
                              load_graph, model_to_document)
from models.builders import build_model


def test_graph_files_match_builders(graph_path):
    assert load_graph(graph_path("ising_chain_L4.json")) == build_model("ising_chain", 4)
    assert load_graph(graph_path("ashkin_teller_L4.json")) == build_model("ashkin_teller", 4)
    assert load_graph(graph_path("three_spin_L6.json")) == build_model("three_spin", 6)
    assert load_graph(graph_path("plaquette_ising_2x2.json")) == build_model("plaquette_ising", 2, 2)


def test_graph_file_automorphisms(graph_path):
    m = load_graph(graph_path("ising_chain_L4.json"))
    built = build_model("ising_chain", 4)
    for name in ("half_translation", "reflection"):
        assert m.automorphism(name) == built.automorphism(name)
    assert m.automorphism("reflection").is_involution()
    assert not m.automorphism("half_translation").is_involution()


def test_single_edge(graph_path):
    m = load_graph(graph_path("single_edge.json"))
    assert (m.n_v, m.n_vhat, m.n_edges) == (1, 1, 1)
    assert m.kernel_dim == 0
    # default normalization (|E| - |V-hat|)/2
    assert m.kappa == 0
    assert m.is_connected()


def test_document_round_trip_keeps_normalizations():
    m = build_model("ising_square", 2, 2)
    back = load_graph(model_to_document(m))
    assert back == m
    assert back.dual_kappa == m.dual_kappa


def test_parse_errors():
    with pytest.raises(ParseError):
        load_graph({"v": ["a"], "vhat": ["b"]})
    with pytest.raises(ParseError):
        load_graph({"v": ["a", "b"], "vhat": ["c"], "sigma_rows": ["1"]})
    with pytest.raises(NonBinaryEntry):
        load_graph({"v": ["a"], "vhat": ["b"], "sigma_rows": ["2"]})
    with pytest.raises(ParseError):
        load_graph({"v": ["a"], "vhat": ["b"], "sigma_rows": ["1"], "kappa": "x/y"})
    bad_auto = {"name": "r", "kind": "reversing", "perm_v": [0, 1], "perm_vhat": [1, 0]}
    with pytest.raises(ParseError):
        load_graph({"v": ["a", "b"], "vhat": ["c", "d"], "sigma_rows": ["10", "11"], "automorphisms": [bad_auto]})


def test_automorphism_vertex_maps():
    a = Automorphism([1, 0], [0, 1], REVERSING, "r")
    assert a.as_vertex_map() == (3, 2, 0, 1)
    assert Automorphism.from_vertex_map(a.as_vertex_map(), 2) == Automorphism([1, 0], [0, 1], REVERSING)
    p = Automorphism([1, 0], [1, 0], PRESERVING, "p")
    assert p.compose(p).is_identity()


def test_composition_of_reversing_maps_preserves():
    m = build_model("ising_chain", 4)
    t = m.automorphism("half_translation")
    tt = t.compose(t)
    assert tt.kind == PRESERVING
    assert tt.satisfied_by(m.sigma)
    assert tt.perm_v == (1, 2, 3, 0)


def test_validate():
    m = build_model("ising_chain", 4)
    with pytest.raises(NotReversing):
        Automorphism(range(4), range(4), PRESERVING).validate(m.sigma)
    with pytest.raises(NotReversing):
        Automorphism([1, 0, 2, 3], range(4), REVERSING).validate(m.sigma)


def test_gauged_swaps_roles():
    m = build_model("ising_chain", 4)
    g = gauged(m)
    assert (g.n_v, g.n_vhat) == (m.n_vhat, m.n_v)
    assert g.sigma == m.sigma.transpose()
    assert (g.kappa, g.dual_kappa) == (m.dual_kappa, m.kappa)
    for a in g.automorphisms:
        assert a.satisfied_by(g.sigma)
    assert gauged(g) == m


def test_default_dual_kappa():
    m = build_model("ising_chain", 4)
    # (|E| - |V| + 1 - dim ker sigma^T)/2
    assert default_dual_kappa(m.sigma) == Fraction(8 - 4 + 1 - 1, 2)


def test_local_terms():
    m = build_model("ising_chain", 4)
    assert m.ising_term(3).label() == "ZIIZ"
    assert m.transverse_term(1).label() == "IXII"


def test_dump_graph(tmp_path):
    m = build_model("three_spin", 6)
    path = str(tmp_path / "g.json")
    dump_graph(m, path)
    back = load_graph(path)
    assert back == m
    assert [a.name for a in back.automorphisms] == ["reflection"]
