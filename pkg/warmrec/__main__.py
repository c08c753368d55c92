#!/usr/bin/env python3
"""Main entry point for warmrec command-line tool"""

import json
import sys
import traceback

from .cli import parse_args
from .config import Config
from .evaluation import evaluate, make_cases
from .logparse import read_sitemap, read_usage_log
from .model import load_model, save_model, train_model
from .output import OutputManager
from .recommender import MODE_RULES, recommend_pages
from .server import parse_session_pages, serve
from .synthgen import generate, read_synth_spec, write_synth
from .textmine import load_corpus
from .utils import ConsoleLogger, describe_file
from .validators import ConfigError, ConfigValidator, EmptyUsageError, ValidationError

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_INVALID_DATA = 4
EXIT_INTERNAL = 5
EXIT_INTERRUPTED = 130


def _resolve_config(args) -> Config:
    cfg = Config.from_file(args.config) if args.config else Config()
    cfg = cfg.replace(
        session_timeout_seconds=args.session_timeout_seconds,
        min_wsupport=args.min_wsupport,
        min_wconf=args.min_wconf,
        max_itemset_size=args.max_itemset_size,
        cluster_threshold=args.cluster_threshold,
    )
    return ConfigValidator.validate(cfg)


def _describe(logger: ConsoleLogger, path: str) -> None:
    described = describe_file(path)
    if described:
        logger.progress(f"Reading {described}")


def cmd_train(args, logger: ConsoleLogger) -> int:
    cfg = _resolve_config(args)

    _describe(logger, args.log)
    log, counts = read_usage_log(args.log, cfg.session_timeout_seconds,
                                 cfg.excluded_suffixes, cfg.user_agent_denylist)
    if counts["skipped_lines"]:
        logger.warning(f"Skipped {counts['skipped_lines']} malformed log lines")
    if counts["filtered"]:
        logger.progress(f"Filtered {counts['filtered']} non-page or robot requests")
    if len(log) == 0:
        raise EmptyUsageError()
    logger.progress(f"Sessionized into {len(log)} sessions over {len(log.page_universe)} pages")

    site = read_sitemap(args.sitemap)
    if not args.docs:
        logger.warning("No page texts given; text scores will be 0")
    corpus = load_corpus(args.docs, cfg.stopwords)

    logger.progress("Mining weighted rules and usage clusters...")
    model = train_model(log, site, corpus, cfg)
    save_model(model, args.out)

    logger.success("trained", args.out, {
        "sessions": len(log),
        "pages": len(model.page_weights),
        "rules": len(model.rules),
        "clusters": len(model.clustering),
        "documents": len(model.tfidf),
        "skipped lines": counts["skipped_lines"],
        "filtered entries": counts["filtered"],
    })
    return EXIT_OK


def cmd_recommend(args, logger: ConsoleLogger) -> int:
    model = load_model(args.model)
    pages = parse_session_pages(args.session)

    result = recommend_pages(pages, model, args.n, args.mode)
    if not result.items:
        logger.warning("No recommendations for this session")
    print(result.to_json())
    return EXIT_OK


def cmd_evaluate(args, logger: ConsoleLogger) -> int:
    model = load_model(args.model)
    cfg = model.config
    fraction = args.prefix_fraction if args.prefix_fraction is not None else cfg.prefix_fraction

    _describe(logger, args.test_log)
    log, _ = read_usage_log(args.test_log, cfg.session_timeout_seconds,
                            cfg.excluded_suffixes, cfg.user_agent_denylist)
    cases, skipped = make_cases(log, fraction)
    if not cases:
        raise EmptyUsageError("no evaluable sessions in test log")
    logger.progress(f"Evaluating {len(cases)} cases ({skipped} sessions too short)")

    report = evaluate(model, cases, args.n_values, args.mode)
    baseline = None
    if args.compare and args.mode != MODE_RULES:
        baseline = evaluate(model, cases, args.n_values, MODE_RULES)

    output_mgr = OutputManager(args.out)
    output_mgr.write_csv(report, baseline)
    output_mgr.write_details(report, args.test_log, skipped, baseline)
    logger.progress(f"Details written to {output_mgr.details_path.name}")

    header = ["n", "precision %", "coverage %", "excluded"]
    rows = [[r.n, r.precision_pct, r.coverage_pct, r.excluded_cases] for r in report.rows]
    if baseline is not None:
        header += ["rules precision %", "rules coverage %"]
        rows = [row + [b.precision_pct, b.coverage_pct] for row, b in zip(rows, baseline.rows)]
    logger.table(header, rows)

    logger.success("evaluated", args.out, {"cases": len(cases), "rows": len(report.rows)})
    return EXIT_OK


def cmd_serve(args, logger: ConsoleLogger) -> int:
    model = load_model(args.model)
    logger.progress(f"Loaded model: {json.dumps(model.summary(), sort_keys=True)}")
    serve(model, args.host, args.port)
    return EXIT_OK


def cmd_synth(args, logger: ConsoleLogger) -> int:
    spec = read_synth_spec(args.spec)
    data = generate(spec)
    paths = write_synth(data, args.out)
    logger.success("generated", str(paths["log"].parent), {
        "sessions": len(data.log),
        "pages": len(data.ground_truth["pages"]),
        "entries": len(data.entries),
    })
    return EXIT_OK


COMMANDS = {
    "train": cmd_train,
    "recommend": cmd_recommend,
    "evaluate": cmd_evaluate,
    "serve": cmd_serve,
    "synth": cmd_synth,
}


def _fail(logger: ConsoleLogger, message: str, code: int, debug: bool) -> int:
    logger.error(message)
    if debug:
        traceback.print_exc()
    return code


def main(argv=None):
    """Main entry point for warmrec"""
    debug = "--debug" in (sys.argv[1:] if argv is None else argv)
    try:
        try:
            args = parse_args(argv)
        except SystemExit as e:
            # argparse exits 2 on usage errors, 0 on --help/--version
            return e.code if isinstance(e.code, int) else EXIT_USAGE

        logger = ConsoleLogger(quiet=args.quiet, debug=args.debug)
        try:
            return COMMANDS[args.command](args, logger)
        except OSError as e:
            return _fail(logger, f"I/O failure: {e}", EXIT_IO, debug)
        except ConfigError as e:
            return _fail(logger, str(e), EXIT_USAGE, debug)
        except (ValidationError, json.JSONDecodeError) as e:
            return _fail(logger, str(e), EXIT_INVALID_DATA, debug)
        except Exception as e:
            return _fail(logger, f"Unexpected error: {e}", EXIT_INTERNAL, debug)

    except KeyboardInterrupt:
        print("\nOperation cancelled by user", file=sys.stderr)
        return EXIT_INTERRUPTED


if __name__ == "__main__":
    sys.exit(main())
