"""k-clique enumeration and percolation into overlapping communities."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Optional

from .graph import UndirectedGraph

RULES = ("standard", "loose")


class CliqueBudgetExceeded(RuntimeError):
    """Materialized k-clique count exceeded the configured budget."""


@dataclass
class CommunityCover:
    k: int
    rule: str
    communities: list[frozenset[str]]
    source_clique_count: int


@dataclass
class SweepResult:
    k_min: int
    k_max: int
    rule: str
    community_counts: dict[int, int] = field(default_factory=dict)
    clique_counts: dict[int, int] = field(default_factory=dict)


def degeneracy_order(adj: dict[str, set[str]]) -> list:
    """Repeatedly remove a minimum-degree vertex (bucket queue, O(n + m))."""
    degree = {v: len(nbrs) for v, nbrs in adj.items()}
    max_deg = max(degree.values(), default=0)
    buckets: list[set] = [set() for _ in range(max_deg + 1)]
    for v, d in degree.items():
        buckets[d].add(v)
    removed = set()
    order = []
    d = 0
    while len(order) < len(adj):
        while d <= max_deg and not buckets[d]:
            d += 1
        if d > max_deg:
            break
        v = min(buckets[d])  # deterministic tie-break
        buckets[d].remove(v)
        order.append(v)
        removed.add(v)
        for u in adj[v]:
            if u in removed:
                continue
            du = degree[u]
            buckets[du].remove(u)
            degree[u] = du - 1
            buckets[du - 1].add(u)
        d = max(d - 1, 0)
    return order


def maximal_cliques(adj: dict[str, set[str]]) -> Iterator[frozenset]:
    """Bron-Kerbosch with pivoting, outer loop in degeneracy order."""

    def expand(r: set, p: set, x: set) -> Iterator[frozenset]:
        if not p and not x:
            yield frozenset(r)
            return
        pivot = max(p | x, key=lambda v: len(adj[v] & p))
        for v in list(p - adj[pivot]):
            yield from expand(r | {v}, p & adj[v], x & adj[v])
            p.remove(v)
            x.add(v)

    order = degeneracy_order(adj)
    position = {v: i for i, v in enumerate(order)}
    for v in order:
        later = {u for u in adj[v] if position[u] > position[v]}
        earlier = {u for u in adj[v] if position[u] < position[v]}
        yield from expand({v}, later, earlier)


def enumerate_k_cliques(
    ug: UndirectedGraph, k: int, max_cliques: Optional[int] = None
) -> set[frozenset]:
    """All fully connected k-subsets, via expansion of maximal cliques."""
    if k < 2:
        raise ValueError("k must be >= 2")
    out: set[frozenset] = set()
    adj = ug.adjacency()
    for mc in maximal_cliques(adj):
        if len(mc) < k:
            continue
        for combo in itertools.combinations(sorted(mc), k):
            out.add(frozenset(combo))
            if max_cliques is not None and len(out) > max_cliques:
                raise CliqueBudgetExceeded(
                    f"more than {max_cliques} {k}-cliques materialized"
                )
    return out


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, a: int) -> int:
        while self.parent[a] != a:
            self.parent[a] = self.parent[self.parent[a]]
            a = self.parent[a]
        return a

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


def _sorted_communities(groups: dict[int, set[str]]) -> list[frozenset[str]]:
    comms = [frozenset(nodes) for nodes in groups.values()]
    comms.sort(key=lambda c: (-len(c), min(c)))
    return comms


def percolate(cliques: set[frozenset], k: int, rule: str = "standard") -> CommunityCover:
    """Union k-cliques that overlap: standard rule joins cliques sharing k-1
    nodes, loose rule joins cliques sharing any node."""
    if rule not in RULES:
        raise ValueError(f"rule must be one of {RULES}")
    clique_list = sorted(cliques, key=lambda c: tuple(sorted(c)))
    for c in clique_list:
        if len(c) != k:
            raise ValueError(f"clique {sorted(c)} does not have {k} members")
    uf = _UnionFind(len(clique_list))
    seen: dict = {}
    if rule == "standard":
        for i, c in enumerate(clique_list):
            for sub in itertools.combinations(sorted(c), k - 1):
                j = seen.setdefault(sub, i)
                if j != i:
                    uf.union(i, j)
    else:
        for i, c in enumerate(clique_list):
            for node in c:
                j = seen.setdefault(node, i)
                if j != i:
                    uf.union(i, j)
    groups: dict[int, set[str]] = {}
    for i, c in enumerate(clique_list):
        groups.setdefault(uf.find(i), set()).update(c)
    return CommunityCover(
        k=k,
        rule=rule,
        communities=_sorted_communities(groups),
        source_clique_count=len(clique_list),
    )


def detect_communities(
    ug: UndirectedGraph,
    k: int,
    rule: str = "standard",
    max_cliques: Optional[int] = None,
) -> CommunityCover:
    return percolate(enumerate_k_cliques(ug, k, max_cliques), k, rule)


def community_count_sweep(
    ug: UndirectedGraph,
    k_min: int,
    k_max: int,
    rule: str = "standard",
    max_cliques: Optional[int] = None,
) -> SweepResult:
    """Community count per k; maximal cliques are enumerated once and reused."""
    if not 2 <= k_min <= k_max:
        raise ValueError("need 2 <= k_min <= k_max")
    maximal = [c for c in maximal_cliques(ug.adjacency())]
    result = SweepResult(k_min=k_min, k_max=k_max, rule=rule)
    for k in range(k_min, k_max + 1):
        cliques: set[frozenset] = set()
        for mc in maximal:
            if len(mc) < k:
                continue
            for combo in itertools.combinations(sorted(mc), k):
                cliques.add(frozenset(combo))
                if max_cliques is not None and len(cliques) > max_cliques:
                    raise CliqueBudgetExceeded(
                        f"more than {max_cliques} {k}-cliques materialized"
                    )
        cover = percolate(cliques, k, rule)
        result.community_counts[k] = len(cover.communities)
        result.clique_counts[k] = len(cliques)
    return result
