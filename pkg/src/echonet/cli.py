"""Command-line entry points.

Subcommands mirror the pipeline stages plus `run` (everything) and `report`.
Exit codes: 0 success, 2 configuration error, 3 input error, 4 stage failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .config import PipelineConfig, validate_config
from .graph import build_retweet_graph, symmetrize
from .pipeline import (
    StageError,
    load_undirected_graph,
    render_report,
    run_pipeline,
    stage_topics,
    write_community_outputs,
    write_graph_outputs,
)
from .profiles import DEFAULT_STOPLIST, description_term_proportions
from .records import (
    ParseStats,
    corpus_summary,
    keyword_filter,
    read_records,
    record_to_json,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INPUT = 3
EXIT_STAGE = 4


class ConfigError(Exception):
    pass


def _common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON config file; flags override it")
    parser.add_argument("--outdir", help="output directory")
    parser.add_argument("--threads", type=int, help="worker count for parallel stages")
    parser.add_argument("--seed", type=int, help="base RNG seed")
    parser.add_argument("--resume", action="store_true", default=None,
                        help="skip stages whose outputs already exist")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="echonet", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="parse, keyword-filter, and summarize records")
    _common_flags(p)
    p.add_argument("--input", help="JSONL or CSV record file")
    p.add_argument("--keywords", help="comma-separated filter terms")
    p.add_argument("--output", help="filtered JSONL path")
    p.add_argument("--stats", help="stats JSON path")

    p = sub.add_parser("graph", help="build retweet digraph and degree reports")
    _common_flags(p)
    p.add_argument("--input", help="filtered JSONL records")
    p.add_argument("--tau", type=float, help="role threshold in (0, 1]")
    p.add_argument("--min-weight", type=int, dest="min_weight")

    p = sub.add_parser("communities", help="k-clique percolation communities")
    _common_flags(p)
    p.add_argument("--graph", dest="graph_dir", help="directory with graph outputs")
    p.add_argument("--k", type=int)
    p.add_argument("--rule", choices=["standard", "loose"])
    p.add_argument("--k-min", type=int, dest="k_min")
    p.add_argument("--k-max", type=int, dest="k_max")
    p.add_argument("--max-cliques", type=int, dest="max_cliques")

    p = sub.add_parser("topics", help="fit per-community hashtag topic models")
    _common_flags(p)
    p.add_argument("--records", help="filtered JSONL records")
    p.add_argument("--communities", help="communities JSON file")
    p.add_argument("--k", type=int, help="community level the input file was built at")
    p.add_argument("--rule", choices=["standard", "loose"])
    p.add_argument("--n-topics", type=int, dest="n_topics")
    p.add_argument("--top-n", type=int, dest="top_n_keywords")
    p.add_argument("--alpha", help="positive float or 'auto'")
    p.add_argument("--beta", type=float)
    p.add_argument("--iters", type=int, dest="iterations")
    p.add_argument("--per-user", action="store_true", default=None, dest="per_user_docs")

    p = sub.add_parser("profiles", help="most frequent profile-description terms")
    _common_flags(p)
    p.add_argument("--records", help="filtered JSONL records")
    p.add_argument("--top-n", type=int, dest="top_n_terms")
    p.add_argument("--stoplist", default=None, help="'default', 'none', or a file path")

    p = sub.add_parser("run", help="run the full pipeline")
    _common_flags(p)
    p.add_argument("--input", help="JSONL or CSV record file")
    p.add_argument("--keywords", help="comma-separated filter terms")
    p.add_argument("--tau", type=float)
    p.add_argument("--min-weight", type=int, dest="min_weight")
    p.add_argument("--k", type=int)
    p.add_argument("--rule", choices=["standard", "loose"])
    p.add_argument("--k-min", type=int, dest="k_min")
    p.add_argument("--k-max", type=int, dest="k_max")
    p.add_argument("--max-cliques", type=int, dest="max_cliques")
    p.add_argument("--n-topics", type=int, dest="n_topics")
    p.add_argument("--alpha", help="positive float or 'auto'")
    p.add_argument("--beta", type=float)
    p.add_argument("--iters", type=int, dest="iterations")
    p.add_argument("--per-user", action="store_true", default=None, dest="per_user_docs")

    p = sub.add_parser("report", help="summarize an existing bundle")
    _common_flags(p)

    return parser


_OVERRIDE_FIELDS = (
    "outdir", "threads", "seed", "resume", "input", "tau", "min_weight", "k",
    "rule", "k_min", "k_max", "max_cliques", "n_topics", "top_n_keywords",
    "beta", "iterations", "per_user_docs", "top_n_terms",
)


def resolve_config(args: argparse.Namespace) -> PipelineConfig:
    if getattr(args, "config", None):
        try:
            config = PipelineConfig.from_file(args.config)
        except FileNotFoundError as exc:
            raise ConfigError(str(exc)) from exc
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"bad config file: {exc}") from exc
    else:
        config = PipelineConfig()
    for name in _OVERRIDE_FIELDS:
        value = getattr(args, name, None)
        if value is not None:
            setattr(config, name, value)
    if getattr(args, "keywords", None):
        config.keywords = tuple(t for t in args.keywords.split(",") if t)
    if getattr(args, "alpha", None) is not None:
        config.alpha = args.alpha if args.alpha == "auto" else float(args.alpha)
    errors = validate_config(config)
    if errors:
        raise ConfigError("; ".join(errors))
    return config


def _cmd_ingest(args, config: PipelineConfig) -> None:
    parse_stats = ParseStats()
    records = read_records(config.input, parse_stats)
    kept = [r for r in records if keyword_filter(r, config.keywords)]
    out_path = args.output or os.path.join(config.outdir, "filtered.jsonl")
    stats_path = args.stats or os.path.join(config.outdir, "ingest_stats.json")
    os.makedirs(os.path.dirname(os.path.abspath(out_path)), exist_ok=True)
    with open(out_path, "w", encoding="utf-8") as fh:
        for rec in kept:
            fh.write(record_to_json(rec) + "\n")
    stats = corpus_summary(kept).to_dict()
    stats["malformed_lines"] = parse_stats.malformed
    stats["input_records"] = len(records)
    with open(stats_path, "w", encoding="utf-8") as fh:
        json.dump(stats, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"kept {len(kept)}/{len(records)} records ({parse_stats.malformed} malformed)")


def _cmd_graph(args, config: PipelineConfig) -> None:
    records = read_records(config.input)
    g = build_retweet_graph(records)
    if not g.nodes:
        raise ValueError("input produced an empty graph")
    ug = symmetrize(g, config.min_weight)
    os.makedirs(config.outdir, exist_ok=True)
    files = write_graph_outputs(g, ug, config.tau, config.outdir)
    print(f"wrote {', '.join(files)} to {config.outdir}")


def _cmd_communities(args, config: PipelineConfig) -> None:
    graph_dir = args.graph_dir or config.outdir
    ug = load_undirected_graph(graph_dir)
    os.makedirs(config.outdir, exist_ok=True)
    files = write_community_outputs(config, ug, config.outdir)
    print(f"wrote {', '.join(files)} to {config.outdir}")


def _cmd_topics(args, config: PipelineConfig) -> None:
    # stage_topics reads filtered.jsonl and the communities file from outdir;
    # copy explicit paths into place when given
    outdir = config.outdir
    os.makedirs(outdir, exist_ok=True)
    if args.records:
        config.input = args.records
        import shutil

        target = os.path.join(outdir, "filtered.jsonl")
        if os.path.abspath(args.records) != os.path.abspath(target):
            shutil.copyfile(args.records, target)
    if args.communities:
        import shutil

        target = os.path.join(outdir, f"communities_k{config.k}_{config.rule}.json")
        if os.path.abspath(args.communities) != os.path.abspath(target):
            shutil.copyfile(args.communities, target)
    files = stage_topics(config, outdir)
    print(f"wrote {len(files)} topic files to {outdir}")


def _cmd_profiles(args, config: PipelineConfig) -> None:
    records = read_records(args.records or config.input)
    if args.stoplist in (None, "default"):
        stoplist = DEFAULT_STOPLIST
    elif args.stoplist == "none":
        stoplist = frozenset()
    else:
        with open(args.stoplist, encoding="utf-8") as fh:
            stoplist = frozenset(w.strip().lower() for w in fh if w.strip())
    table = description_term_proportions(records, stoplist, config.top_n_terms)
    os.makedirs(config.outdir, exist_ok=True)
    path = os.path.join(config.outdir, "term_frequencies.csv")
    from .pipeline import _write_csv

    _write_csv(
        path,
        ["rank", "term", "proportion", "user_count"],
        [(rank, term, repr(prop), count) for rank, term, prop, count in table.to_rows()],
    )
    print(f"wrote {path} ({table.user_base} users with descriptions)")


def _cmd_run(args, config: PipelineConfig) -> None:
    manifest = run_pipeline(config)
    print(f"bundle complete: {len(manifest['files'])} files in {config.outdir}")


def _cmd_report(args, config: PipelineConfig) -> None:
    print(render_report(config.outdir))


_COMMANDS = {
    "ingest": _cmd_ingest,
    "graph": _cmd_graph,
    "communities": _cmd_communities,
    "topics": _cmd_topics,
    "profiles": _cmd_profiles,
    "run": _cmd_run,
    "report": _cmd_report,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = resolve_config(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        _COMMANDS[args.command](args, config)
    except StageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        if isinstance(exc.cause, (FileNotFoundError, IsADirectoryError, PermissionError)):
            return EXIT_INPUT
        return EXIT_STAGE
    except (FileNotFoundError, IsADirectoryError, PermissionError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_STAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
