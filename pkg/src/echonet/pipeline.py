"""Stage runners and full-pipeline orchestration.

Stages communicate only through files in the output directory so each one can
be re-run and inspected on its own.
"""

from __future__ import annotations

import csv
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from datetime import datetime, timezone
from typing import Optional

from . import __version__
from .communities import community_count_sweep, detect_communities
from .config import PipelineConfig
from .graph import (
    RetweetGraph,
    UndirectedGraph,
    build_retweet_graph,
    classify_roles,
    degree_histogram,
    degree_summary,
    symmetrize,
)
from .profiles import DEFAULT_STOPLIST, description_term_proportions
from .records import (
    ParseStats,
    corpus_summary,
    keyword_filter,
    read_records,
    record_to_json,
)
from .topics import (
    EmptyCorpusError,
    build_community_corpus,
    doc_topic_distribution,
    fit_lda,
    held_out_perplexity,
    topic_keywords,
)

STAGES = ("ingest", "graph", "communities", "topics", "profiles")


class StageError(RuntimeError):
    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"stage '{stage}' failed: {cause}")
        self.stage = stage
        self.cause = cause


def _write_json(path: str, payload) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _write_csv(path: str, header: list[str], rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def filtered_records_path(outdir: str) -> str:
    return os.path.join(outdir, "filtered.jsonl")


def communities_path(outdir: str, k: int, rule: str) -> str:
    return os.path.join(outdir, f"communities_k{k}_{rule}.json")


def stage_ingest(config: PipelineConfig, outdir: str) -> list[str]:
    parse_stats = ParseStats()
    records = read_records(config.input, parse_stats)
    kept = [r for r in records if keyword_filter(r, config.keywords)]
    with open(filtered_records_path(outdir), "w", encoding="utf-8") as fh:
        for rec in kept:
            fh.write(record_to_json(rec) + "\n")
    stats = corpus_summary(kept).to_dict()
    stats["malformed_lines"] = parse_stats.malformed
    stats["input_records"] = len(records)
    _write_json(os.path.join(outdir, "ingest_stats.json"), stats)
    return ["filtered.jsonl", "ingest_stats.json"]


def write_graph_outputs(g: RetweetGraph, ug: UndirectedGraph, tau: float, outdir: str) -> list[str]:
    _write_json(os.path.join(outdir, "network_stats.json"), degree_summary(g).to_dict())
    _write_csv(
        os.path.join(outdir, "degree_histogram.csv"),
        ["weighting", "degree", "out_count", "in_count"],
        degree_histogram(g),
    )
    _write_csv(
        os.path.join(outdir, "roles.csv"),
        ["user_id", "in_deg", "out_deg", "score", "label"],
        [
            (r.user, r.in_deg, r.out_deg, repr(r.score), r.label)
            for r in classify_roles(g, tau)
        ],
    )
    _write_csv(
        os.path.join(outdir, "undirected_edges.csv"),
        ["u", "v", "weight"],
        [(u, v, w) for (u, v), w in sorted(ug.edges.items())],
    )
    with open(os.path.join(outdir, "nodes.txt"), "w", encoding="utf-8") as fh:
        for node in sorted(ug.nodes):
            fh.write(node + "\n")
    return [
        "network_stats.json",
        "degree_histogram.csv",
        "roles.csv",
        "undirected_edges.csv",
        "nodes.txt",
    ]


def stage_graph(config: PipelineConfig, outdir: str) -> list[str]:
    records = read_records(filtered_records_path(outdir))
    g = build_retweet_graph(records)
    if not g.nodes:
        raise ValueError("no records survived ingest; graph would be empty")
    ug = symmetrize(g, config.min_weight)
    return write_graph_outputs(g, ug, config.tau, outdir)


def load_undirected_graph(graph_dir: str) -> UndirectedGraph:
    ug = UndirectedGraph()
    with open(os.path.join(graph_dir, "nodes.txt"), encoding="utf-8") as fh:
        ug.nodes = {line.rstrip("\n") for line in fh if line.strip()}
    with open(os.path.join(graph_dir, "undirected_edges.csv"), newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            ug.edges[(row["u"], row["v"])] = int(row["weight"])
    return ug


def write_community_outputs(config: PipelineConfig, ug: UndirectedGraph, outdir: str) -> list[str]:
    cover = detect_communities(ug, config.k, config.rule, config.max_cliques)
    payload = [
        {"community_id": i, "size": len(c), "members": sorted(c)}
        for i, c in enumerate(cover.communities)
    ]
    comm_file = f"communities_k{config.k}_{config.rule}.json"
    _write_json(os.path.join(outdir, comm_file), payload)
    sweep = community_count_sweep(
        ug, config.k_min, config.k_max, config.rule, config.max_cliques
    )
    sweep_file = f"sweep_{config.rule}.csv"
    _write_csv(
        os.path.join(outdir, sweep_file),
        ["k", "community_count", "clique_count"],
        [
            (k, sweep.community_counts[k], sweep.clique_counts[k])
            for k in range(config.k_min, config.k_max + 1)
        ],
    )
    return [comm_file, sweep_file]


def stage_communities(config: PipelineConfig, outdir: str) -> list[str]:
    ug = load_undirected_graph(outdir)
    return write_community_outputs(config, ug, outdir)


def _fit_one_community(args):
    community_id, vocab, docs, config_tuple = args
    n_topics, alpha, beta, iterations, seed = config_tuple
    model = fit_lda(docs, vocab, n_topics, alpha, beta, iterations, seed)
    return community_id, vocab, docs, model


def stage_topics(config: PipelineConfig, outdir: str) -> list[str]:
    records = read_records(filtered_records_path(outdir))
    with open(communities_path(outdir, config.k, config.rule), encoding="utf-8") as fh:
        communities = json.load(fh)
    jobs = []
    for entry in communities:
        cid = entry["community_id"]
        try:
            vocab, docs = build_community_corpus(
                records,
                entry["members"],
                per_user=config.per_user_docs,
                community_id=cid,
            )
        except EmptyCorpusError as exc:
            print(f"topics: skipping {exc}", file=sys.stderr)
            continue
        params = (
            config.n_topics,
            config.resolved_alpha(),
            config.beta,
            config.iterations,
            config.seed + cid,
        )
        jobs.append((cid, vocab, docs, params))

    if config.threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=config.threads) as pool:
            results = list(pool.map(_fit_one_community, jobs))
    else:
        results = [_fit_one_community(job) for job in jobs]
    results.sort(key=lambda r: r[0])  # deterministic merge

    files = []
    for cid, vocab, docs, model in results:
        summary = topic_keywords(model, vocab, config.top_n_keywords)
        payload = {
            "community_id": cid,
            "n_topics": model.n_topics,
            "alpha": model.alpha,
            "beta": model.beta,
            "seed": model.seed,
            "topics": [
                {
                    "topic_id": t,
                    "keywords": [
                        {"token": tok, "prob": prob} for tok, prob in summary.topics[t]
                    ],
                }
                for t in range(model.n_topics)
            ],
            "perplexity": held_out_perplexity(model, docs),
        }
        name = f"topics_community{cid}.json"
        _write_json(os.path.join(outdir, name), payload)
        files.append(name)
        doc_rows = []
        for i, doc in enumerate(docs):
            theta = doc_topic_distribution(model, i)
            doc_rows.append([doc.doc_id] + [repr(float(p)) for p in theta])
        csv_name = f"doc_topics_community{cid}.csv"
        _write_csv(
            os.path.join(outdir, csv_name),
            ["doc_id"] + [f"topic_{t}" for t in range(model.n_topics)],
            doc_rows,
        )
        files.append(csv_name)
    return files


def stage_profiles(config: PipelineConfig, outdir: str) -> list[str]:
    records = read_records(filtered_records_path(outdir))
    table = description_term_proportions(
        records, DEFAULT_STOPLIST, config.top_n_terms
    )
    _write_csv(
        os.path.join(outdir, "term_frequencies.csv"),
        ["rank", "term", "proportion", "user_count"],
        [(rank, term, repr(prop), count) for rank, term, prop, count in table.to_rows()],
    )
    return ["term_frequencies.csv"]


_STAGE_FUNCS = {
    "ingest": stage_ingest,
    "graph": stage_graph,
    "communities": stage_communities,
    "topics": stage_topics,
    "profiles": stage_profiles,
}


def _expected_outputs(stage: str, config: PipelineConfig, outdir: str) -> Optional[list[str]]:
    """Predictable outputs per stage, for --resume; None means not predictable."""
    if stage == "ingest":
        return ["filtered.jsonl", "ingest_stats.json"]
    if stage == "graph":
        return [
            "network_stats.json",
            "degree_histogram.csv",
            "roles.csv",
            "undirected_edges.csv",
            "nodes.txt",
        ]
    if stage == "communities":
        return [f"communities_k{config.k}_{config.rule}.json", f"sweep_{config.rule}.csv"]
    if stage == "topics":
        comm_file = communities_path(outdir, config.k, config.rule)
        if not os.path.exists(comm_file):
            return None
        with open(comm_file, encoding="utf-8") as fh:
            communities = json.load(fh)
        files = []
        for entry in communities:
            cid = entry["community_id"]
            files.append(f"topics_community{cid}.json")
            files.append(f"doc_topics_community{cid}.csv")
        return files
    if stage == "profiles":
        return ["term_frequencies.csv"]
    return None


def run_pipeline(config: PipelineConfig) -> dict:
    """Run all stages in order and write a bundle manifest; returns it."""
    outdir = config.outdir
    os.makedirs(outdir, exist_ok=True)
    manifest = {
        "tool": "echonet",
        "version": __version__,
        "config_hash": config.semantic_hash(),
        "config": config.to_dict(),
        "created_utc": datetime.now(timezone.utc).isoformat(),
        "stages": [],
        "files": [],
    }
    for stage in STAGES:
        expected = _expected_outputs(stage, config, outdir)
        if (
            config.resume
            and expected
            and all(os.path.exists(os.path.join(outdir, f)) for f in expected)
        ):
            manifest["stages"].append({"name": stage, "seconds": 0.0, "resumed": True})
            continue
        start = time.monotonic()
        try:
            _STAGE_FUNCS[stage](config, outdir)
        except Exception as exc:
            open(os.path.join(outdir, f"{stage}.partial"), "w").close()
            raise StageError(stage, exc) from exc
        manifest["stages"].append(
            {"name": stage, "seconds": time.monotonic() - start, "resumed": False}
        )
        marker = os.path.join(outdir, f"{stage}.partial")
        if os.path.exists(marker):
            os.remove(marker)
    manifest["files"] = sorted(
        f
        for f in os.listdir(outdir)
        if f != "manifest.json" and not f.endswith(".partial")
    )
    _write_json(os.path.join(outdir, "manifest.json"), manifest)
    return manifest


def render_report(outdir: str) -> str:
    """Human-readable bundle summary; validates the manifest's file list."""
    with open(os.path.join(outdir, "manifest.json"), encoding="utf-8") as fh:
        manifest = json.load(fh)
    missing = [
        f for f in manifest["files"] if not os.path.exists(os.path.join(outdir, f))
    ]
    lines = [
        f"echonet bundle {manifest['version']} (config {manifest['config_hash'][:12]})",
        f"created: {manifest['created_utc']}",
    ]
    if missing:
        lines.append(f"MISSING FILES: {', '.join(missing)}")
    for stage in manifest["stages"]:
        note = " (resumed)" if stage.get("resumed") else ""
        lines.append(f"  {stage['name']}: {stage['seconds']:.2f}s{note}")
    stats_path = os.path.join(outdir, "ingest_stats.json")
    if os.path.exists(stats_path):
        with open(stats_path, encoding="utf-8") as fh:
            stats = json.load(fh)
        lines.append(
            f"corpus: {stats['tweet_count']} tweets, "
            f"{stats['unique_user_count']} users, {stats['retweet_count']} retweets"
        )
    net_path = os.path.join(outdir, "network_stats.json")
    if os.path.exists(net_path):
        with open(net_path, encoding="utf-8") as fh:
            net = json.load(fh)
        lines.append(
            f"network: {net['node_count']} nodes, {net['unique_edge_count']} edges "
            f"(weighted sum {net['weighted_edge_sum']})"
        )
    for name in manifest["files"]:
        if name.startswith("communities_k"):
            with open(os.path.join(outdir, name), encoding="utf-8") as fh:
                comms = json.load(fh)
            lines.append(f"{name}: {len(comms)} communities")
    lines.append(f"files: {len(manifest['files'])}")
    return "\n".join(lines)
