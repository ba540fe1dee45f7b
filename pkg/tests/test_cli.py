import json

import numpy as np
import pytest

from cli import run
from cli.commands import EXIT_BAD_ARGS, EXIT_CAP, EXIT_OK, build_parser
from core.zx_eval import contract
from models.operators import kw_matrix
from models.zx_builders import kw_diagram
from utils.serialization import diagram_from_json, diagram_to_json, dump_json


def _stdout_json(capsys):
    return json.loads(capsys.readouterr().out)


@pytest.fixture
def kw_file(tmp_path):
    path = tmp_path / "kw3.json"
    dump_json(diagram_to_json(kw_diagram(3)), str(path))
    return str(path)


def test_parser_rejects_bad_arguments():
    with pytest.raises(SystemExit) as info:
        run(["verify-1d"])
    assert info.value.code == EXIT_BAD_ARGS
    with pytest.raises(SystemExit) as info:
        run(["no-such-command"])
    assert info.value.code == EXIT_BAD_ARGS


def test_parser_defaults():
    args = build_parser().parse_args(["verify-3d", "--Lx", "2", "--Ly", "2", "--Lz", "2"])
    assert (args.lam, args.eigensolve, args.seed, args.workers) == (1.0, False, None, None)


def test_common_flags_after_the_subcommand():
    args = build_parser().parse_args(["selftest-rules", "--seed", "5", "--workers", "2", "--dump-state", "x.bin"])
    assert (args.seed, args.workers, args.dump_state, args.config) == (5, 2, "x.bin", None)
    args = build_parser().parse_args(["--seed", "7", "verify-1d", "--L", "4"])
    assert args.seed == 7
    args = build_parser().parse_args(["--seed", "7", "verify-1d", "--L", "4", "--seed", "9"])
    assert args.seed == 9


def test_bad_size_is_exit_2():
    assert run(["verify-1d", "--L", "1"]) == EXIT_BAD_ARGS


def test_verify_graph_needs_one_source(graph_path):
    assert run(["verify-graph"]) == EXIT_BAD_ARGS
    assert run(["verify-graph", graph_path("single_edge.json"), "--model", "ising_chain"]) == EXIT_BAD_ARGS


def test_missing_file_is_exit_2(tmp_path):
    assert run(["contract", str(tmp_path / "missing.json")]) == EXIT_BAD_ARGS


def test_contract(kw_file, capsys):
    assert run(["contract", kw_file]) == EXIT_OK
    doc = _stdout_json(capsys)
    assert doc["shape"] == [8, 8]
    pairs = np.array(doc["matrix"])
    np.testing.assert_allclose(pairs[..., 0] + 1j * pairs[..., 1], kw_matrix(3), atol=1e-12)


def test_simplify(kw_file, capsys):
    assert run(["simplify", kw_file]) == EXIT_OK
    doc = _stdout_json(capsys)
    assert isinstance(doc["trace"], list)
    out = diagram_from_json(doc["diagram"])
    np.testing.assert_allclose(contract(out), kw_matrix(3), atol=1e-10)


def test_selftest_rules(capsys):
    assert run(["selftest-rules", "--seed", "3"]) == EXIT_OK
    doc = _stdout_json(capsys)
    assert doc["suite"] == "selftest-rules"
    assert len(doc["checks"]) == 12
    assert doc["summary"]["fail"] == 0
    assert doc["environment"]["seed"] == 3


def test_verify_graph_single_edge(graph_path, capsys):
    assert run(["verify-graph", graph_path("single_edge.json")]) == EXIT_OK
    doc = _stdout_json(capsys)
    ids = [c["id"] for c in doc["checks"]]
    assert "symmetry_commutes" in ids and "automorphism_search" in ids
    assert any(i.startswith("fusion[") for i in ids)


def test_verify_1d(capsys):
    assert run(["verify-1d", "--L", "4"]) == EXIT_OK
    doc = _stdout_json(capsys)
    assert doc["summary"]["fail"] == 0 and doc["summary"]["skipped"] == 0
    assert doc["environment"]["L"] == 4


def test_verify_graph_reports_ashkin_teller_coefficient(graph_path, capsys):
    assert run(["verify-graph", graph_path("ashkin_teller_L4.json")]) == EXIT_OK
    doc = _stdout_json(capsys)
    coefficients = {c["detail"]["coefficient"] for c in doc["checks"] if c["id"].startswith("condensation_absorption")}
    assert coefficients == {4.0}


def test_config_file_flag(tmp_path, capsys):
    config = tmp_path / "cfg.json"
    config.write_text(json.dumps({"seed": 11}))
    assert run(["--config", str(config), "selftest-rules"]) == EXIT_OK
    assert _stdout_json(capsys)["environment"]["seed"] == 11


@pytest.mark.parametrize("L", [2, 3])
def test_verify_1d_short_chains(L, capsys):
    assert run(["verify-1d", "--L", str(L)]) == EXIT_OK
    doc = _stdout_json(capsys)
    ids = {c["id"] for c in doc["checks"]}
    assert "exact_ground_states" not in ids and "three_fold_degeneracy" not in ids
    assert doc["summary"]["fail"] == 0 and doc["summary"]["skipped"] == 0


def test_verify_1d_away_from_self_dual_point(capsys):
    assert run(["verify-1d", "--L", "4", "--lambda", "0.5"]) == EXIT_OK
    doc = _stdout_json(capsys)
    ids = {c["id"] for c in doc["checks"]}
    assert "deformation_self_dual" in ids
    assert "exact_ground_states" not in ids and "three_fold_degeneracy" not in ids
    assert doc["environment"]["lambda"] == 0.5


def test_verify_3d_over_memory_budget_skips_state_checks(tmp_path, capsys):
    config = tmp_path / "small.json"
    config.write_text(json.dumps({"memory_budget_mb": 1}))
    code = run(["verify-3d", "--Lx", "2", "--Ly", "2", "--Lz", "2", "--config", str(config), "--seed", "4"])
    assert code == EXIT_CAP
    doc = _stdout_json(capsys)
    assert doc["summary"]["fail"] == 0
    by_id = {c["id"]: c for c in doc["checks"]}
    assert by_id["fusion"]["status"] == "skipped"
    assert by_id["fusion"]["detail"]["cap"] == "TooLarge"
    assert by_id["deformation_terms"]["status"] == "pass"
    assert "rotation_relation" in by_id and "nine_ground_states" in by_id
    assert doc["environment"]["seed"] == 4
