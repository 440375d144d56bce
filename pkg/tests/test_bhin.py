import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ideoprop.bhin import (ASSERTION, USER, BhinGraph, GraphError, PostRecord, build_graph,
                           filter_min_degree, ingest_posts, load_graph, prepare_inputs, save_graph)
from ideoprop.neardup import VisualAssertion


def A(aid, *imgs):
    return VisualAssertion(aid, frozenset(imgs))


def edge_ids(g):
    return {(g.nodes[u][0], g.nodes[a][0]) for u, a in g.edges}


def test_ingest_two_lines(tmp_path):
    p = tmp_path / "posts.jsonl"
    p.write_text('{"user_id": "u1", "image_id": "i1"}\n{"user_id": "u2", "image_id": "i1"}\n')
    assert ingest_posts(p) == [PostRecord("u1", "i1"), PostRecord("u2", "i1")]


def test_ingest_missing_user_names_line(tmp_path):
    p = tmp_path / "posts.jsonl"
    p.write_text('{"image_id": "i1"}\n')
    with pytest.raises(GraphError, match="line 1"):
        ingest_posts(p)


def test_ingest_empty_file(tmp_path):
    p = tmp_path / "posts.jsonl"
    p.write_text("")
    assert ingest_posts(p) == []


def test_three_step_construction():
    posts = [PostRecord("u1", "i1"), PostRecord("u1", "i2"), PostRecord("u2", "i3")]
    g = build_graph(posts, [A(1, "i1", "i2"), A(2, "i3")])
    assert g.n_nodes == 4 and g.n_edges == 2
    assert edge_ids(g) == {("u1", 1), ("u2", 2)}
    assert g.nodes == (("u1", USER), ("u2", USER), (1, ASSERTION), (2, ASSERTION))


def test_single_post_graph():
    g = build_graph([PostRecord("u", "i")], [A(0, "i")])
    assert (g.n_nodes, g.n_edges) == (2, 1)


def test_unknown_image_rejected():
    with pytest.raises(GraphError):
        build_graph([PostRecord("u", "zzz")], [A(0, "i")])


def star(leaves=11):
    posts = [PostRecord("hub", f"i{k}") for k in range(leaves)]
    return build_graph(posts, [A(k, f"i{k}") for k in range(leaves)])


def test_filter_zero_is_identity():
    g = star()
    assert filter_min_degree(g, 0) == g


def test_filter_star_keeps_hub_only():
    with pytest.raises(GraphError, match="lower"):
        # the hub survives but has no neighbours left; a graph of one node is still fine,
        # so drop the hub too by asking for more than 11 edges
        filter_min_degree(star(), 11)
    g = filter_min_degree(star(), 10)
    assert g.nodes == (("hub", USER),) and g.n_edges == 0


def random_graph(seed, n_users=15, n_assert=20, p=0.3):
    g = np.random.default_rng(seed)
    inc = g.random((n_users, n_assert)) < p
    posts = [PostRecord(f"u{i:02d}", f"i{j}") for i, j in zip(*np.nonzero(inc))]
    users = sorted({p.user_id for p in posts})
    assertions = [A(j, f"i{j}") for j in range(n_assert)]
    return posts, assertions


@given(st.integers(0, 10_000), st.integers(0, 6))
def test_filter_matches_brute_force(seed, k):
    posts, assertions = random_graph(seed)
    g = build_graph(posts, assertions)
    deg = {}
    for u, a in edge_ids(g):
        deg[("u", u)] = deg.get(("u", u), 0) + 1
        deg[("a", a)] = deg.get(("a", a), 0) + 1
    keep = {key for key, d in deg.items() if d > k} if k > 0 else None
    try:
        f = filter_min_degree(g, k)
    except GraphError:
        assert keep == set()
        return
    if keep is None:
        assert f == g
        return
    got = {("u" if kind == USER else "a", nid) for nid, kind in f.nodes}
    assert got == keep
    assert edge_ids(f) == {(u, a) for u, a in edge_ids(g) if ("u", u) in keep and ("a", a) in keep}


def test_fixpoint_filter_iterates():
    # u0 links to a0..a2; u1 links only to a0. With k=1, one pass drops u1 and nothing else
    posts = [PostRecord("u0", f"i{j}") for j in range(3)] + [PostRecord("u1", "i0"),
                                                            PostRecord("u2", "i0"), PostRecord("u2", "i1")]
    g = build_graph(posts, [A(j, f"i{j}") for j in range(3)])
    once = filter_min_degree(g, 1)
    fix = filter_min_degree(g, 1, fixpoint=True)
    assert once.n_nodes > fix.n_nodes or once == fix
    d = fix.degrees()
    assert np.all(d > 1)


def test_prepare_single_node():
    g = BhinGraph((("u", USER),), frozenset())
    p = prepare_inputs(g)
    assert p.adj.tolist() == [[1.0]] and p.norm_adj.tolist() == [[1.0]]


def test_prepare_one_edge():
    p = prepare_inputs(build_graph([PostRecord("u", "i")], [A(0, "i")]))
    assert np.array_equal(p.adj, np.ones((2, 2)))
    assert np.allclose(p.norm_adj, 0.5, atol=1e-15)
    assert np.array_equal(p.features, np.eye(2))


@given(st.integers(0, 10_000))
def test_prepare_random_graph(seed):
    posts, assertions = random_graph(seed, 4, 6, 0.4)
    g = build_graph(posts, assertions)
    p = prepare_inputs(g)
    assert np.all(np.diag(p.adj) == 1)
    assert np.max(np.abs(p.norm_adj - p.norm_adj.T)) < 1e-12
    # symmetric normalization bounds the spectrum, not the row sums: D^1/2 1 is the top eigenvector
    assert np.max(np.abs(np.linalg.eigvalsh(p.norm_adj))) <= 1 + 1e-12
    d_half = np.sqrt(p.adj.sum(1))
    assert np.allclose(p.norm_adj @ d_half, d_half, atol=1e-12)


def test_row_sums_can_exceed_one():
    # hub of degree 3 with leaves: row sum of the hub is 1/4 + 3/sqrt(8) > 1
    p = prepare_inputs(star(3))
    assert p.norm_adj[0].sum() == pytest.approx(0.25 + 3 / np.sqrt(8), abs=1e-12)


@given(st.integers(0, 10_000), st.randoms(use_true_random=False))
def test_build_is_order_insensitive_and_bipartite(seed, rnd):
    posts, assertions = random_graph(seed)
    shuffled = list(posts)
    rnd.shuffle(shuffled)
    g1, g2 = build_graph(posts, assertions), build_graph(shuffled, assertions)
    assert g1 == g2
    for u, a in g1.edges:
        assert g1.nodes[u][1] == USER and g1.nodes[a][1] == ASSERTION


def test_graph_json_roundtrip(tmp_path):
    posts, assertions = random_graph(3)
    g = build_graph(posts, assertions)
    save_graph(g, tmp_path / "g.json")
    assert load_graph(tmp_path / "g.json") == g
    doc = json.loads((tmp_path / "g.json").read_text())
    assert set(doc) == {"nodes", "edges"}


def test_graph_json_unknown_edge(tmp_path):
    doc = {"nodes": [{"id": "u", "kind": USER}], "edges": [["u", 5]]}
    with pytest.raises(GraphError):
        BhinGraph.from_json(doc)
