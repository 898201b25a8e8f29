import itertools
import random
from collections import Counter

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import make_record
from echonet.graph import (
    RetweetGraph,
    build_retweet_graph,
    classify_roles,
    degree_histogram,
    degree_summary,
    symmetrize,
)
from oracles import moments


def retweet(i, src, dst):
    return make_record(f"t{i}", src, retweet_of=dst)


def graph_from_events(events):
    return build_retweet_graph(
        [retweet(i, u, v) for i, (u, v) in enumerate(events)]
    )


def random_digraph(rng, n_users, n_events):
    users = [f"u{i}" for i in range(n_users)]
    events = []
    while len(events) < n_events:
        u, v = rng.choice(users), rng.choice(users)
        if u != v:
            events.append((u, v))
    return graph_from_events(events), events


def test_build_basic():
    g = graph_from_events([("a", "b"), ("a", "b"), ("b", "a")])
    assert g.edges == {("a", "b"): 2, ("b", "a"): 1}
    assert g.nodes == {"a", "b"}


def test_build_isolated_nodes():
    g = build_retweet_graph([make_record(str(i), f"u{i}") for i in range(5)])
    assert len(g.nodes) == 5
    assert g.edges == {}


def test_build_drops_self_retweets():
    g = graph_from_events([("a", "a"), ("a", "b")])
    assert g.edges == {("a", "b"): 1}


def test_build_weight_recount_oracle():
    rng = random.Random(3)
    g, events = random_digraph(rng, 1000, 100_000)
    expected = Counter(events)
    assert g.edges == dict(expected)
    assert g.nodes == {u for pair in events for u in pair}


def test_degree_summary_single_edge():
    g = graph_from_events([("u", "v")] * 3)
    summary = degree_summary(g)
    assert summary.out_weighted.max == 3
    assert summary.out_unweighted.max == 1
    assert summary.in_weighted.max == 3
    assert summary.out_weighted.mean == summary.in_weighted.mean == 1.5
    assert summary.unique_edge_count == 1
    assert summary.weighted_edge_sum == 3


def test_degree_summary_empty_graph():
    with pytest.raises(ValueError):
        degree_summary(RetweetGraph())


def test_degree_summary_schema_fields():
    g = graph_from_events([("a", "b")])
    d = degree_summary(g).to_dict()
    assert set(d) == {
        "node_count",
        "unique_edge_count",
        "weighted_edge_sum",
        "weighted",
        "unweighted",
    }
    for weighting in ("weighted", "unweighted"):
        for direction in ("out", "in"):
            assert set(d[weighting][direction]) == {"min", "max", "mean", "variance", "skew"}


def test_degree_summary_moment_oracle():
    rng = random.Random(17)
    g, events = random_digraph(rng, 50, 600)
    summary = degree_summary(g)
    # brute-force degree vectors straight from the event list
    nodes = sorted(g.nodes)
    out_w = [sum(1 for u, v in events if u == n) for n in nodes]
    in_w = [sum(1 for u, v in events if v == n) for n in nodes]
    out_u = [len({v for u, v in events if u == n}) for n in nodes]
    in_u = [len({u for u, v in events if v == n}) for n in nodes]
    for stats, vec in (
        (summary.out_weighted, out_w),
        (summary.in_weighted, in_w),
        (summary.out_unweighted, out_u),
        (summary.in_unweighted, in_u),
    ):
        mn, mx, mean, var, skew = moments(vec)
        assert stats.min == mn and stats.max == mx
        assert stats.mean == pytest.approx(mean, abs=1e-12)
        assert stats.variance == pytest.approx(var, rel=1e-12)
        assert stats.skew == pytest.approx(skew, rel=1e-9)


def test_handshake_invariant():
    rng = random.Random(23)
    for _ in range(50):
        g, _ = random_digraph(rng, rng.randint(2, 60), rng.randint(1, 500))
        s = degree_summary(g)
        assert s.out_weighted.mean == s.in_weighted.mean
        assert s.out_unweighted.mean == s.in_unweighted.mean
        assert s.out_unweighted.mean == s.unique_edge_count / s.node_count


def test_degree_summary_relabel_invariant():
    rng = random.Random(5)
    g, events = random_digraph(rng, 20, 100)
    relabeled = graph_from_events([(f"x_{u}", f"x_{v}") for u, v in events])
    a, b = degree_summary(g), degree_summary(relabeled)
    assert a == b


def test_degree_histogram_counts():
    g = graph_from_events([("a", "b"), ("a", "b"), ("c", "b")])
    rows = degree_histogram(g)
    weighted = {(deg): (o, i) for w, deg, o, i in rows if w == "weighted"}
    # out degrees: a=2, b=0, c=1; in degrees: a=0, b=3, c=0
    assert weighted[0] == (1, 2)
    assert weighted[2] == (1, 0)
    assert weighted[3] == (0, 1)


def test_classify_roles_extremes():
    g = graph_from_events([("x", "p")] * 10)  # p retweeted 10 times
    roles = {r.user: r for r in classify_roles(g, 0.5)}
    assert roles["p"].score == 1.0 and roles["p"].label == "producer"
    assert roles["x"].score == -1.0 and roles["x"].label == "distributor"


def test_classify_roles_balanced():
    g = graph_from_events([("a", "b")] * 4 + [("b", "a")] * 4)
    for r in classify_roles(g, 0.9):
        assert r.score == 0.0 and r.label == "mixed"


def test_classify_roles_tau_domain():
    g = graph_from_events([("a", "b")])
    for bad in (0.0, -0.5, 1.5):
        with pytest.raises(ValueError):
            classify_roles(g, bad)


def test_classify_roles_ordering():
    g = graph_from_events([("a", "b"), ("a", "c"), ("c", "b")])
    roles = classify_roles(g, 0.5)
    scores = [abs(r.score) for r in roles]
    assert scores == sorted(scores, reverse=True)
    for r1, r2 in zip(roles, roles[1:]):
        if abs(r1.score) == abs(r2.score):
            assert r1.user < r2.user


def test_classify_roles_transpose_negates():
    rng = random.Random(9)
    g, events = random_digraph(rng, 15, 80)
    transposed = graph_from_events([(v, u) for u, v in events])
    fwd = {r.user: r for r in classify_roles(g, 0.5)}
    rev = {r.user: r for r in classify_roles(transposed, 0.5)}
    for user in fwd:
        assert fwd[user].score == pytest.approx(-rev[user].score)
        swap = {"producer": "distributor", "distributor": "producer", "mixed": "mixed"}
        assert rev[user].label == swap[fwd[user].label]


def test_symmetrize_sums_both_directions():
    g = graph_from_events([("u", "v")] + [("v", "u")] * 4)
    ug = symmetrize(g, 1)
    assert ug.edges == {("u", "v"): 5}


def test_symmetrize_threshold_keeps_nodes():
    g = graph_from_events([("u", "v"), ("u", "v")])
    ug = symmetrize(g, 3)
    assert ug.edges == {}
    assert ug.nodes == {"u", "v"}


def test_symmetrize_min_weight_domain():
    with pytest.raises(ValueError):
        symmetrize(RetweetGraph(), 0)


def test_symmetrize_quadratic_oracle():
    rng = random.Random(41)
    g, _ = random_digraph(rng, 80, 800)
    ug = symmetrize(g, 1)
    nodes = sorted(g.nodes)
    for u, v in itertools.combinations(nodes, 2):
        total = g.edges.get((u, v), 0) + g.edges.get((v, u), 0)
        if total >= 1:
            assert ug.edges[(u, v)] == total
            assert ug.edges[(u, v)] >= max(
                g.edges.get((u, v), 0), g.edges.get((v, u), 0)
            )
        else:
            assert (u, v) not in ug.edges


@given(st.integers(0, 2**31))
def test_one_retweet_increments_one_degree(seed):
    rng = random.Random(seed)
    g, events = random_digraph(rng, 8, 20)
    u, v = "u0", "u1"
    g2, _ = random_digraph(random.Random(seed), 8, 20)
    g2 = graph_from_events(events + [(u, v)])
    out1, in1 = g.weighted_degrees()
    out2, in2 = g2.weighted_degrees()
    assert out2[u] == out1.get(u, 0) + 1
    assert in2[v] == in1.get(v, 0) + 1
    assert sum(out2.values()) == sum(out1.values()) + 1
