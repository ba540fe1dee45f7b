import sys
import os
import logging


def fix_import_paths():
    """Make the top-level packages importable when run from another directory"""
    root = os.path.dirname(os.path.abspath(__file__))
    if root not in sys.path:
        sys.path.insert(0, root)
    return root


def setup_logging():
    from config import get_config
    level = getattr(logging, str(get_config().get("log_level", "INFO")).upper(), logging.INFO)
    # stdout carries the JSON report, so logs go to stderr
    logging.basicConfig(
        level=level,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )


def main(argv=None):
    fix_import_paths()
    setup_logging()
    from cli import run
    return run(argv)


if __name__ == '__main__':
    try:
        sys.exit(main())
    except SystemExit:
        raise
    except Exception as e:
        logging.getLogger("main").exception(f"FATAL: {e}")
        print(f"FATAL: {e}", file=sys.stderr)
        sys.exit(1)
