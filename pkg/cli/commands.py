"""Subcommand parsing and dispatch. The report (or result document) goes to stdout."""
import argparse
import logging
import sys

from config import ConfigManager, get_config, set_config
from core.errors import ParseError, ResourceCapExceeded, ZxLatticeError
from core.zx_eval import contract
from core.zx_rules import rewrite_trace
from models.bipartite import load_graph
from models.builders import build_model
from utils.serialization import diagram_from_json, diagram_to_json, dump_json, load_json
from .suites import selftest_rules, verify_1d, verify_3d, verify_graph

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_BAD_ARGS = 2
EXIT_CAP = 3

GRAPH_FAMILIES = ("ising_chain", "ashkin_teller", "three_spin", "plaquette_ising", "ising_square",
                  "product_with_dual")


class _Parser(argparse.ArgumentParser):
    """argparse exits with status 2 on its own; keep that but route the message through logging"""

    def error(self, message):
        logger.error(f"❌ {message}")
        self.print_usage(sys.stderr)
        raise SystemExit(EXIT_BAD_ARGS)


def _add_common(parser, default):
    parser.add_argument("--seed", type=int, default=default, help="RNG seed (default from config, 0)")
    parser.add_argument("--workers", type=int, default=default, help="checks run concurrently on this many threads")
    parser.add_argument("--config", default=default, help="path to a JSON config file")
    parser.add_argument("--dump-state", dest="dump_state", default=default,
                        help="write a representative output state in the binary state format")
    return parser


def build_parser():
    parser = _add_common(_Parser(prog="zxlattice", description="Duality and condensation identity checks"), None)
    # the same flags after the subcommand; SUPPRESS keeps a value given before it
    common = _add_common(_Parser(add_help=False), argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("verify-1d", parents=[common], help="Kramers-Wannier identities on the Ising chain")
    p.add_argument("--L", type=int, required=True)
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)

    p = sub.add_parser("verify-3d", parents=[common], help="Wegner duality identities on the cubic lattice")
    p.add_argument("--Lx", type=int, required=True)
    p.add_argument("--Ly", type=int, required=True)
    p.add_argument("--Lz", type=int, required=True)
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p.add_argument("--eigensolve", action="store_true", help="confirm the ground energy with an iterative solver")

    p = sub.add_parser("verify-graph", parents=[common], help="duality identities for a bipartite graph model")
    p.add_argument("file", nargs="?", help="graph JSON document")
    p.add_argument("--model", choices=GRAPH_FAMILIES, help="build the model instead of loading a file")
    p.add_argument("--size", type=int, nargs="+", default=[], help="builder sizes, e.g. --size 2 2")
    p.add_argument("--base", choices=GRAPH_FAMILIES[:-1], default="ising_square",
                   help="base family for product_with_dual")

    p = sub.add_parser("simplify", parents=[common], help="simplify a diagram and print it with the rewrite trace")
    p.add_argument("file")

    p = sub.add_parser("contract", parents=[common], help="contract a diagram to its dense matrix")
    p.add_argument("file")

    sub.add_parser("selftest-rules", parents=[common], help="soundness of every rewrite rule on random instances")
    return parser


def _graph_model(args):
    if bool(args.file) == bool(args.model):
        raise ParseError("verify-graph takes either a graph file or --model, not both or neither")
    if args.file:
        return load_graph(args.file), None
    if args.model == "product_with_dual":
        base = build_model(args.base, *args.size)
        return build_model("product_with_dual", base), base
    return build_model(args.model, *args.size), None


def _print(text):
    sys.stdout.write(text + "\n")
    sys.stdout.flush()


def run(argv=None):
    """Parse, dispatch and print; returns the process exit code"""
    args = build_parser().parse_args(argv)
    if args.config:
        set_config(ConfigManager(args.config))
    cfg = get_config()
    seed = cfg.seed if args.seed is None else args.seed
    workers = cfg.workers if args.workers is None else max(1, args.workers)

    try:
        if args.command == "verify-1d":
            report = verify_1d(args.L, args.lam, seed, workers, dump_path=args.dump_state)
        elif args.command == "verify-3d":
            report = verify_3d(args.Lx, args.Ly, args.Lz, args.lam, args.eigensolve, seed, workers,
                               dump_path=args.dump_state)
        elif args.command == "verify-graph":
            m, base = _graph_model(args)
            report = verify_graph(m, seed, workers, base=base, dump_path=args.dump_state)
        elif args.command == "selftest-rules":
            report = selftest_rules(seed, workers)
        elif args.command == "simplify":
            d = diagram_from_json(load_json(args.file))
            out, trace = rewrite_trace(d)
            logger.info(f"📊 {len(trace)} rewrites: {d!r} -> {out!r}")
            _print(dump_json({"diagram": diagram_to_json(out), "trace": trace}))
            return EXIT_OK
        else:
            matrix = contract(diagram_from_json(load_json(args.file)))
            _print(dump_json({"shape": list(matrix.shape), "matrix": matrix}))
            return EXIT_OK
    except ResourceCapExceeded as e:
        logger.error(f"⚠️ {type(e).__name__}: {e}")
        return EXIT_CAP
    except ZxLatticeError as e:
        # bad sizes, unreadable or malformed input files
        logger.error(f"❌ {type(e).__name__}: {e}")
        return EXIT_BAD_ARGS

    _print(report.to_json())
    return report.exit_code()
