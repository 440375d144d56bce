"""User/assertion bipartite graph: ingestion, construction, degree filter, encoder inputs."""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

USER = "user"
ASSERTION = "assertion"


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class PostRecord:
    user_id: str
    image_id: str


@dataclass(frozen=True)
class BhinGraph:
    """Nodes are ``(node_id, kind)``; users come first, each block sorted by id.

    ``edges`` holds ``(user_index, assertion_index)`` pairs into ``nodes``.
    """

    nodes: tuple
    edges: frozenset

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def degrees(self) -> np.ndarray:
        deg = np.zeros(len(self.nodes), dtype=np.int64)
        for u, a in self.edges:
            deg[u] += 1
            deg[a] += 1
        return deg

    def indices(self, kind: str) -> list[int]:
        return [i for i, (_, k) in enumerate(self.nodes) if k == kind]

    def adjacency(self) -> np.ndarray:
        adj = np.zeros((self.n_nodes, self.n_nodes))
        for u, a in self.edges:
            adj[u, a] = adj[a, u] = 1.0
        return adj

    def to_json(self) -> dict:
        return {
            "nodes": [{"id": nid, "kind": kind} for nid, kind in self.nodes],
            "edges": [[self.nodes[u][0], self.nodes[a][0]] for u, a in sorted(self.edges)],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "BhinGraph":
        nodes = tuple((n["id"], n["kind"]) for n in doc["nodes"])
        pos = {node: i for i, node in enumerate(nodes)}
        edges = set()
        for uid, aid in doc["edges"]:
            try:
                edges.add((pos[(uid, USER)], pos[(aid, ASSERTION)]))
            except KeyError as exc:
                raise GraphError(f"edge [{uid!r}, {aid!r}] references an unknown node") from exc
        return cls(nodes, frozenset(edges))


@dataclass(frozen=True)
class PreparedInputs:
    adj: np.ndarray       # adjacency with self-loops
    norm_adj: np.ndarray  # D^-1/2 A D^-1/2
    features: np.ndarray  # identity, one row per node

    @property
    def n_nodes(self) -> int:
        return self.adj.shape[0]


def ingest_posts(path) -> list[PostRecord]:
    posts = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
                user, image = rec["user_id"], rec["image_id"]
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise GraphError(f"{path}: line {lineno}: malformed post record ({exc})") from exc
            if not isinstance(user, str) or not isinstance(image, str) or not user or not image:
                raise GraphError(f"{path}: line {lineno}: user_id and image_id must be non-empty strings")
            posts.append(PostRecord(user, image))
    return posts


def build_graph(posts, assertions) -> BhinGraph:
    owner = {}
    for a in assertions:
        for img in a.image_ids:
            owner[img] = a.assertion_id
    users = sorted({p.user_id for p in posts})
    aids = sorted(a.assertion_id for a in assertions)
    nodes = tuple([(u, USER) for u in users] + [(a, ASSERTION) for a in aids])
    upos = {u: i for i, u in enumerate(users)}
    apos = {a: len(users) + i for i, a in enumerate(aids)}
    edges = set()
    for p in posts:
        if p.image_id not in owner:
            raise GraphError(f"post by {p.user_id!r} references image {p.image_id!r} "
                             "that belongs to no assertion")
        edges.add((upos[p.user_id], apos[owner[p.image_id]]))
    return BhinGraph(nodes, frozenset(edges))


def filter_min_degree(g: BhinGraph, min_deg: int, fixpoint: bool = False) -> BhinGraph:
    """Drop nodes whose degree is ``<= min_deg`` (i.e. keep "more than min_deg edges").

    Degrees are computed once on the input graph unless ``fixpoint`` is set,
    in which case the filter repeats until nothing changes.
    """
    if min_deg < 0:
        raise ValueError("min_deg must be non-negative")
    while True:
        deg = g.degrees()
        keep = [i for i in range(g.n_nodes) if deg[i] > min_deg] if min_deg > 0 else list(range(g.n_nodes))
        if not keep:
            raise GraphError(f"no node has more than {min_deg} edges; lower the minimum degree")
        if len(keep) == g.n_nodes:
            return g
        remap = {old: new for new, old in enumerate(keep)}
        nodes = tuple(g.nodes[i] for i in keep)
        edges = frozenset((remap[u], remap[a]) for u, a in g.edges if u in remap and a in remap)
        g = BhinGraph(nodes, edges)
        if not fixpoint:
            return g


def prepare_inputs(g: BhinGraph) -> PreparedInputs:
    if g.n_nodes == 0:
        raise GraphError("cannot prepare inputs for an empty graph")
    adj = g.adjacency() + np.eye(g.n_nodes)
    d = 1.0 / np.sqrt(adj.sum(axis=1))
    norm = adj * d[:, None] * d[None, :]
    return PreparedInputs(adj, norm, np.eye(g.n_nodes))


def save_graph(g: BhinGraph, path) -> None:
    Path(path).write_text(json.dumps(g.to_json(), sort_keys=True) + "\n")


def load_graph(path) -> BhinGraph:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise GraphError(f"{path}: not valid JSON ({exc})") from exc
    return BhinGraph.from_json(doc)
