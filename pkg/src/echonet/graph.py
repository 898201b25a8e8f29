"""Weighted retweet digraph, degree statistics, role scores, symmetrization."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .records import TweetRecord


@dataclass
class RetweetGraph:
    """Directed graph over users; edges[(u, v)] counts retweets of v by u."""

    nodes: set[str] = field(default_factory=set)
    edges: dict[tuple[str, str], int] = field(default_factory=dict)

    def weighted_degrees(self) -> tuple[dict[str, int], dict[str, int]]:
        """(out, in) weighted degree maps over all nodes."""
        out = {v: 0 for v in self.nodes}
        inn = {v: 0 for v in self.nodes}
        for (u, v), w in self.edges.items():
            out[u] += w
            inn[v] += w
        return out, inn

    def unweighted_degrees(self) -> tuple[dict[str, int], dict[str, int]]:
        out = {v: 0 for v in self.nodes}
        inn = {v: 0 for v in self.nodes}
        for u, v in self.edges:
            out[u] += 1
            inn[v] += 1
        return out, inn


@dataclass
class UndirectedGraph:
    nodes: set[str] = field(default_factory=set)
    edges: dict[tuple[str, str], int] = field(default_factory=dict)

    def adjacency(self) -> dict[str, set[str]]:
        adj: dict[str, set[str]] = {v: set() for v in self.nodes}
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj


@dataclass
class DegreeStats:
    min: float
    max: float
    mean: float
    variance: float
    skew: float

    @classmethod
    def from_values(cls, values: np.ndarray) -> "DegreeStats":
        x = np.asarray(values, dtype=float)
        mean = float(x.mean())
        centered = x - mean
        m2 = float((centered**2).mean())
        m3 = float((centered**3).mean())
        skew = m3 / m2**1.5 if m2 > 0 else 0.0
        return cls(
            min=float(x.min()),
            max=float(x.max()),
            mean=mean,
            variance=m2,
            skew=skew,
        )

    def to_dict(self) -> dict:
        return {
            "min": self.min,
            "max": self.max,
            "mean": self.mean,
            "variance": self.variance,
            "skew": self.skew,
        }


@dataclass
class DegreeSummary:
    node_count: int
    unique_edge_count: int
    weighted_edge_sum: int
    out_weighted: DegreeStats
    in_weighted: DegreeStats
    out_unweighted: DegreeStats
    in_unweighted: DegreeStats

    def to_dict(self) -> dict:
        return {
            "node_count": self.node_count,
            "unique_edge_count": self.unique_edge_count,
            "weighted_edge_sum": self.weighted_edge_sum,
            # the unweighted pair is the one comparable to published mean
            # figures of the form unique_edge_count / node_count
            "unweighted": {
                "out": self.out_unweighted.to_dict(),
                "in": self.in_unweighted.to_dict(),
            },
            "weighted": {
                "out": self.out_weighted.to_dict(),
                "in": self.in_weighted.to_dict(),
            },
        }


@dataclass
class RoleScore:
    user: str
    in_deg: float
    out_deg: float
    score: float
    label: str


def build_retweet_graph(records: Iterable[TweetRecord]) -> RetweetGraph:
    """Aggregate retweet events into edge weights; self-retweets dropped."""
    g = RetweetGraph()
    for rec in records:
        g.nodes.add(rec.user_id)
        target = rec.retweet_of_user_id
        if target is None or target == rec.user_id:
            continue
        g.nodes.add(target)
        key = (rec.user_id, target)
        g.edges[key] = g.edges.get(key, 0) + 1
    return g


def degree_summary(g: RetweetGraph) -> DegreeSummary:
    if not g.nodes:
        raise ValueError("degree_summary requires a nonempty graph")
    order = sorted(g.nodes)
    out_w, in_w = g.weighted_degrees()
    out_u, in_u = g.unweighted_degrees()
    as_vec = lambda d: np.array([d[v] for v in order], dtype=float)
    return DegreeSummary(
        node_count=len(g.nodes),
        unique_edge_count=len(g.edges),
        weighted_edge_sum=sum(g.edges.values()),
        out_weighted=DegreeStats.from_values(as_vec(out_w)),
        in_weighted=DegreeStats.from_values(as_vec(in_w)),
        out_unweighted=DegreeStats.from_values(as_vec(out_u)),
        in_unweighted=DegreeStats.from_values(as_vec(in_u)),
    )


def degree_histogram(g: RetweetGraph) -> list[tuple[str, int, int, int]]:
    """Rows (weighting, degree, out_count, in_count) for distribution plots."""
    rows = []
    for weighting, (out_d, in_d) in (
        ("weighted", g.weighted_degrees()),
        ("unweighted", g.unweighted_degrees()),
    ):
        out_c = Counter(out_d.values())
        in_c = Counter(in_d.values())
        for deg in sorted(set(out_c) | set(in_c)):
            rows.append((weighting, deg, out_c.get(deg, 0), in_c.get(deg, 0)))
    return rows


def classify_roles(g: RetweetGraph, tau: float) -> list[RoleScore]:
    """Score = (in - out) / (in + out) over weighted degrees; +1 pure producer,
    -1 pure distributor. Sorted by |score| descending, then user id."""
    if not 0 < tau <= 1:
        raise ValueError("tau must be in (0, 1]")
    out_w, in_w = g.weighted_degrees()
    scores = []
    for user in g.nodes:
        i, o = float(in_w[user]), float(out_w[user])
        score = 0.0 if i + o == 0 else (i - o) / (i + o)
        if score >= tau:
            label = "producer"
        elif score <= -tau:
            label = "distributor"
        else:
            label = "mixed"
        scores.append(RoleScore(user=user, in_deg=i, out_deg=o, score=score, label=label))
    scores.sort(key=lambda r: (-abs(r.score), r.user))
    return scores


def symmetrize(g: RetweetGraph, min_weight: int = 1) -> UndirectedGraph:
    """Combined weight e_uv + e_vu; edges below min_weight dropped, nodes kept."""
    if min_weight < 1:
        raise ValueError("min_weight must be >= 1")
    combined: dict[tuple[str, str], int] = {}
    for (u, v), w in g.edges.items():
        key = (u, v) if u < v else (v, u)
        combined[key] = combined.get(key, 0) + w
    edges = {k: w for k, w in combined.items() if w >= min_weight}
    return UndirectedGraph(nodes=set(g.nodes), edges=edges)
