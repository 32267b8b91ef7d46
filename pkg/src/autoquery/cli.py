"""Command-line pipeline driver.

Exit codes: 0 success, 1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import DataError, UsageError
from .pipeline import (
    Config,
    load_config,
    run_answer,
    run_gaps,
    run_generate,
    run_ingest,
    run_metrics_coverage,
    run_metrics_precision,
    run_metrics_utility,
    run_objects,
    run_pair,
    run_prune,
    run_sample,
)
from .workspace import Workspace

DEFAULT_WORKSPACE = "workspace"


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; this tool reserves 2 for data
    errors, so remap to 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> _Parser:
    # SUPPRESS keeps a subparser's unset copy of a shared flag from
    # clobbering the value parsed before the subcommand
    common = _Parser(add_help=False)
    common.add_argument("--workspace", default=argparse.SUPPRESS, help="workspace directory")
    common.add_argument("--config", default=argparse.SUPPRESS, help="key=value config file")

    p = _Parser(prog="autoquery", description="Generate, prune, and answer corpus queries.", parents=[common])
    sub = p.add_subparsers(dest="command", metavar="command")

    sp = sub.add_parser("ingest", parents=[common], help="add a corpus to the workspace")
    sp.add_argument("--corpus", required=True, help="plain-text or JSONL corpus file")
    sp.add_argument("--id", required=True, dest="corpus_id", help="corpus id")

    sub.add_parser("objects", parents=[common], help="extract canonical objects")

    sp = sub.add_parser("generate", parents=[common], help="generate queries")
    sp.add_argument("--techniques", default="all", help="all or csv of techniques")
    sp.add_argument("--max-queries", type=int, default=None, dest="max_queries")

    sp = sub.add_parser("prune", parents=[common], help="apply rule and confidence pruning")
    sp.add_argument("--theta", type=float, default=None)

    sp = sub.add_parser("answer", parents=[common], help="answer live queries")
    sp.add_argument("--theta", type=float, default=None)
    sp.add_argument("--topk", type=int, default=None)

    sp = sub.add_parser("metrics", parents=[common], help="write a metrics report")
    sp.add_argument("which", choices=("coverage", "precision", "utility"))
    sp.add_argument("--theta", type=float, default=None)

    sp = sub.add_parser("gaps", parents=[common], help="report low-confidence gaps")
    sp.add_argument("--theta", type=float, default=None)

    sp = sub.add_parser("pair", parents=[common], help="score and group corpus pairs")
    sp.add_argument("--tau", type=float, default=None)
    sp.add_argument("--budget", type=int, default=None)
    sp.add_argument("--theta", type=float, default=None)

    sp = sub.add_parser("sample", parents=[common], help="draw a review sample")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--stratify", action="store_true")

    sp = sub.add_parser("serve", parents=[common], help="serve the review API and UI")
    sp.add_argument("--port", type=int, default=8765)
    sp.add_argument("--ui-dir", default=None, dest="ui_dir")

    return p


def _dispatch(args, ws: Workspace, cfg: Config):
    cmd = args.command
    if cmd == "ingest":
        return run_ingest(ws, cfg, args.corpus, args.corpus_id)
    if cmd == "objects":
        return run_objects(ws, cfg)
    if cmd == "generate":
        return run_generate(ws, cfg, args.techniques, args.max_queries)
    if cmd == "prune":
        return run_prune(ws, cfg, args.theta)
    if cmd == "answer":
        return run_answer(ws, cfg, args.theta, args.topk)
    if cmd == "metrics":
        if args.which == "coverage":
            return run_metrics_coverage(ws, cfg, args.theta)
        if args.which == "precision":
            return run_metrics_precision(ws, cfg)
        return run_metrics_utility(ws, cfg)
    if cmd == "gaps":
        return run_gaps(ws, cfg, args.theta)
    if cmd == "pair":
        return run_pair(ws, cfg, args.tau, args.budget, args.theta)
    if cmd == "sample":
        return run_sample(ws, cfg, args.n, args.seed, args.stratify)
    if cmd == "serve":
        from .service import serve

        serve(ws, cfg, args.port, args.ui_dir)
        return {"stopped": True}
    raise UsageError("no command given (see --help)")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits directly for usage errors and --help; keep
        # main() returning an int either way
        return int(e.code or 0)
    try:
        cfg = load_config(getattr(args, "config", None))
        ws = Workspace(getattr(args, "workspace", None) or DEFAULT_WORKSPACE)
        result = _dispatch(args, ws, cfg)
        print(json.dumps(result, sort_keys=True))
        return 0
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except DataError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
