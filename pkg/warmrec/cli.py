"""Command-line interface for warmrec"""

import argparse
from pathlib import Path

from . import __version__, config
from .recommender import MODES, MODE_HYBRID


def positive_int(value: str) -> int:
    try:
        number = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value!r}")
    if number < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {number}")
    return number


def n_list(value: str) -> list:
    """Parse "1,2,3" into a non-empty list of positive integers"""
    items = [item.strip() for item in value.split(",") if item.strip()]
    if not items:
        raise argparse.ArgumentTypeError("expected a comma-separated list of positive integers")
    return [positive_int(item) for item in items]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="warmrec",
        description="Hybrid web-page recommender: weighted association rules, usage clusters, HITS and TF-IDF",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  warmrec train --log access.log --sitemap sitemap.json --docs docs.json --out model.json
  warmrec recommend --model model.json --session "/a,/b" --n 5
  warmrec evaluate --model model.json --test-log test.log --n 1,2,3,4,5 --out results.csv
  warmrec serve --model model.json --port 8080
  warmrec synth --spec synth.json --out fixtures/
        """,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--quiet", action="store_true", help="Suppress console logs (errors still shown)")
    common.add_argument("--debug", action="store_true", help="Print tracebacks on failure")

    commands = parser.add_subparsers(dest="command", metavar="COMMAND")
    commands.required = True

    train = commands.add_parser("train", parents=[common], help="Train a model from usage logs")
    train.add_argument("--log", required=True, help="Access log (CLF) or session CSV (.csv)")
    train.add_argument("--sitemap", required=True, help="SiteMap JSON with page sizes and outlinks")
    train.add_argument("--docs", default=None, help="Page texts: JSON map or directory (optional)")
    train.add_argument("--config", default=None, help="JSON config file overriding defaults")
    train.add_argument("--out", required=True, help="Model output path")
    train.add_argument("--session-timeout", type=float, default=None, dest="session_timeout_seconds")
    train.add_argument("--min-wsupport", type=float, default=None)
    train.add_argument("--min-wconf", type=float, default=None)
    train.add_argument("--max-itemset-size", type=positive_int, default=None)
    train.add_argument("--cluster-threshold", type=float, default=None)

    rec = commands.add_parser("recommend", parents=[common], help="Recommend pages for a session")
    rec.add_argument("--model", required=True, help="Trained model file")
    rec.add_argument("--session", required=True, help='Comma-separated visited pages, e.g. "/a,/b"')
    rec.add_argument("--n", type=positive_int, default=config.DEFAULT_TOP_N, help="Number of recommendations")
    rec.add_argument("--mode", choices=MODES, default=MODE_HYBRID)

    ev = commands.add_parser("evaluate", parents=[common], help="Precision/coverage on held-out sessions")
    ev.add_argument("--model", required=True, help="Trained model file")
    ev.add_argument("--test-log", required=True, help="Access log (CLF) or session CSV (.csv)")
    ev.add_argument("--n", type=n_list, default=list(range(1, 10)), dest="n_values",
                    help="Comma-separated list sizes (default 1..9)")
    ev.add_argument("--out", required=True, help="Results CSV path")
    ev.add_argument("--mode", choices=MODES, default=MODE_HYBRID)
    ev.add_argument("--compare", action="store_true", help="Add rule-only baseline columns")
    ev.add_argument("--prefix-fraction", type=float, default=None)

    srv = commands.add_parser("serve", parents=[common], help="Serve recommendations over HTTP")
    srv.add_argument("--model", required=True, help="Trained model file")
    srv.add_argument("--host", default=config.DEFAULT_HOST)
    srv.add_argument("--port", type=positive_int, default=config.DEFAULT_PORT)

    synth = commands.add_parser("synth", parents=[common], help="Generate synthetic fixtures")
    synth.add_argument("--spec", required=True, help="Synth spec JSON")
    synth.add_argument("--out", required=True, help="Output directory")

    return parser


def parse_args(args=None):
    """Parse command-line arguments"""
    parser = build_parser()
    parsed_args = parser.parse_args(args)

    # unreadable files surface later as I/O errors (exit 3), not usage errors
    if parsed_args.command == "recommend" and not parsed_args.session.replace(",", "").strip():
        parser.error("--session must list at least one page")

    if parsed_args.command == "evaluate" and parsed_args.prefix_fraction is not None:
        if not 0 < parsed_args.prefix_fraction < 1:
            parser.error("--prefix-fraction must be in (0, 1)")

    out = getattr(parsed_args, "out", None)
    if out and parsed_args.command != "synth" and Path(out).is_dir():
        parser.error(f"Output path is a directory: {out}")

    return parsed_args
