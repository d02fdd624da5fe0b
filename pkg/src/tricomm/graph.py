"""Attributed-network data model and dataset loading.

Graphs are undirected and simple. Node ids from input files are compacted
to a dense 0..n-1 range internally; the original ids are retained so every
file written back uses the ids the caller supplied.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "FeatureKind",
    "AttributedGraph",
    "CommunityCollection",
    "GraphParseError",
    "GraphValidationError",
    "load_edge_list",
    "attach_features",
    "load_communities",
    "write_communities",
    "build_graph",
]


class GraphParseError(ValueError):
    """A dataset file is syntactically malformed."""


class GraphValidationError(ValueError):
    """A dataset file is well-formed but violates a contract (bad ids, bad values)."""


class FeatureKind(enum.Enum):
    BINARY = "binary"
    CONTINUOUS = "continuous"
    NONE = "none"


@dataclass(frozen=True)
class AttributedGraph:
    """Immutable undirected graph with an optional node-feature matrix.

    Adjacency is CSR-like: ``neighbors(i)`` is the sorted slice
    ``adj_indices[adj_indptr[i]:adj_indptr[i+1]]``. Safe for concurrent
    reads; construction is single-threaded.
    """

    node_count: int
    edge_count: int
    adj_indptr: np.ndarray  # int64, len n+1
    adj_indices: np.ndarray  # int32, sorted per node
    features: np.ndarray  # float64, shape (n, p); p == 0 when feature_kind is NONE
    feature_kind: FeatureKind
    original_ids: np.ndarray  # int64; original_ids[compact] -> original
    id_map: dict[int, int] = field(repr=False)  # original -> compact

    @property
    def feature_dim(self) -> int:
        return self.features.shape[1]

    @property
    def degrees(self) -> np.ndarray:
        return np.diff(self.adj_indptr)

    def degree(self, v: int) -> int:
        return int(self.adj_indptr[v + 1] - self.adj_indptr[v])

    def neighbors(self, v: int) -> np.ndarray:
        return self.adj_indices[self.adj_indptr[v] : self.adj_indptr[v + 1]]

    def has_edge(self, u: int, v: int) -> bool:
        row = self.neighbors(u)
        j = np.searchsorted(row, v)
        return j < len(row) and row[j] == v

    def edges(self):
        """Yield each undirected edge once, as a (u, v) pair with u < v."""
        for u in range(self.node_count):
            for v in self.neighbors(u):
                if u < v:
                    yield u, int(v)

    def validate(self) -> None:
        n = self.node_count
        if len(self.adj_indptr) != n + 1:
            raise GraphValidationError("adjacency index has wrong length")
        degs = self.degrees
        if int(degs.sum()) != 2 * self.edge_count:
            raise GraphValidationError("degree sum does not equal 2m")
        for u in range(n):
            row = self.neighbors(u)
            if len(row) and (np.any(np.diff(row) <= 0) or row[0] == u or np.any(row == u)):
                raise GraphValidationError(f"adjacency row {u} unsorted, duplicated, or self-looped")
            for v in row:
                if not self.has_edge(int(v), u):
                    raise GraphValidationError(f"edge ({u},{v}) is not symmetric")
        if self.feature_kind is FeatureKind.BINARY:
            if not np.all((self.features == 0.0) | (self.features == 1.0)):
                raise GraphValidationError("binary feature matrix has entries outside {0,1}")
        elif self.feature_kind is FeatureKind.CONTINUOUS:
            if np.any(self.features < 0.0):
                raise GraphValidationError("continuous feature matrix has negative entries")

    def to_original(self, compact: int) -> int:
        return int(self.original_ids[compact])


@dataclass(frozen=True)
class CommunityCollection:
    """Ordered list of node-id sets (compact ids). Communities may overlap."""

    communities: list[frozenset[int]]

    @property
    def K(self) -> int:
        return len(self.communities)

    def __iter__(self):
        return iter(self.communities)

    def __len__(self) -> int:
        return len(self.communities)

    def __eq__(self, other) -> bool:
        return isinstance(other, CommunityCollection) and self.communities == other.communities

    def covered_nodes(self) -> frozenset[int]:
        out: set[int] = set()
        for c in self.communities:
            out |= c
        return frozenset(out)

    def membership_lists(self, node_count: int) -> list[list[int]]:
        """Per-node sorted list of community indexes containing the node."""
        memb: list[list[int]] = [[] for _ in range(node_count)]
        for k, c in enumerate(self.communities):
            for v in c:
                memb[v].append(k)
        return memb


def _data_lines(path):
    """Yield (line_number, tokens) for non-comment, non-blank lines."""
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            yield lineno, line.split()


def build_graph(
    node_count: int,
    edges,
    features: np.ndarray | None = None,
    feature_kind: FeatureKind = FeatureKind.NONE,
    original_ids: np.ndarray | None = None,
) -> AttributedGraph:
    """Assemble a graph from compact-id edges; drops self-loops and duplicates."""
    pairs = set()
    for u, v in edges:
        if u == v:
            continue
        if u > v:
            u, v = v, u
        pairs.add((int(u), int(v)))
    m = len(pairs)
    degs = np.zeros(node_count, dtype=np.int64)
    for u, v in pairs:
        degs[u] += 1
        degs[v] += 1
    indptr = np.zeros(node_count + 1, dtype=np.int64)
    np.cumsum(degs, out=indptr[1:])
    indices = np.empty(2 * m, dtype=np.int32)
    cursor = indptr[:-1].copy()
    for u, v in pairs:
        indices[cursor[u]] = v
        cursor[u] += 1
        indices[cursor[v]] = u
        cursor[v] += 1
    for i in range(node_count):
        indices[indptr[i] : indptr[i + 1]].sort()
    if features is None:
        features = np.zeros((node_count, 0), dtype=np.float64)
        feature_kind = FeatureKind.NONE
    if original_ids is None:
        original_ids = np.arange(node_count, dtype=np.int64)
    id_map = {int(orig): i for i, orig in enumerate(original_ids)}
    features = np.ascontiguousarray(features, dtype=np.float64)
    for arr in (indptr, indices, features, original_ids):
        arr.setflags(write=False)
    g = AttributedGraph(
        node_count=node_count,
        edge_count=m,
        adj_indptr=indptr,
        adj_indices=indices,
        features=features,
        feature_kind=feature_kind,
        original_ids=original_ids,
        id_map=id_map,
    )
    g.validate()
    return g


def load_edge_list(path) -> AttributedGraph:
    """Load an undirected simple graph from a two-column text edge list.

    Lines starting with '#' are comments; tab and space separators are both
    accepted. Self-loops are dropped and duplicate edges collapsed. Original
    node ids are compacted to 0..n-1 (ascending order of original id); an
    empty file yields an empty graph.
    """
    raw_edges: list[tuple[int, int]] = []
    seen_ids: set[int] = set()
    for lineno, toks in _data_lines(path):
        if len(toks) != 2:
            raise GraphParseError(f"{path}:{lineno}: expected two node ids, got {len(toks)} tokens")
        try:
            a, b = int(toks[0]), int(toks[1])
        except ValueError as exc:
            raise GraphParseError(f"{path}:{lineno}: non-integer node id") from exc
        raw_edges.append((a, b))
        seen_ids.add(a)
        seen_ids.add(b)
    original_ids = np.array(sorted(seen_ids), dtype=np.int64)
    id_map = {orig: i for i, orig in enumerate(original_ids.tolist())}
    edges = [(id_map[a], id_map[b]) for a, b in raw_edges]
    return build_graph(len(original_ids), edges, original_ids=original_ids)


def _parse_feature_rows(path, id_map: dict[int, int]):
    """Parse a feature file into {original_id: {dim: value}} plus the max dim."""
    rows: dict[int, dict[int, float]] = {}
    dense_width: int | None = None
    max_dim = -1
    for lineno, toks in _data_lines(path):
        try:
            node = int(toks[0])
        except ValueError as exc:
            raise GraphParseError(f"{path}:{lineno}: non-integer node id") from exc
        vals = toks[1:]
        sparse = any(":" in t for t in vals)
        entries: dict[int, float] = {}
        if sparse:
            for t in vals:
                try:
                    idx_s, val_s = t.split(":", 1)
                    idx, val = int(idx_s), float(val_s)
                except ValueError as exc:
                    raise GraphParseError(f"{path}:{lineno}: bad sparse token {t!r}") from exc
                if idx < 0:
                    raise GraphParseError(f"{path}:{lineno}: negative feature index {idx}")
                entries[idx] = val
                max_dim = max(max_dim, idx)
        else:
            if dense_width is None:
                dense_width = len(vals)
            elif len(vals) != dense_width:
                raise GraphParseError(
                    f"{path}:{lineno}: dense row has {len(vals)} values, expected {dense_width}"
                )
            for idx, t in enumerate(vals):
                try:
                    entries[idx] = float(t)
                except ValueError as exc:
                    raise GraphParseError(f"{path}:{lineno}: non-numeric value {t!r}") from exc
            max_dim = max(max_dim, len(vals) - 1)
        if node in rows:
            rows[node].update(entries)
        else:
            rows[node] = entries
    return rows, max_dim + 1


def attach_features(graph: AttributedGraph, path, kind: FeatureKind) -> AttributedGraph:
    """Return a new graph with the feature matrix loaded from ``path``.

    Accepts dense rows (``node v1 .. vp``) and sparse rows (``node idx:val ..``,
    0-based indexes). Nodes absent from the file get all-zero rows; nodes
    present in the file but not in the graph are added as isolated nodes.
    """
    if kind is FeatureKind.NONE:
        raise GraphValidationError("feature kind must be binary or continuous")
    rows, p = _parse_feature_rows(path, graph.id_map)

    new_originals = sorted(orig for orig in rows if orig not in graph.id_map)
    n = graph.node_count + len(new_originals)
    original_ids = np.concatenate(
        [graph.original_ids, np.array(new_originals, dtype=np.int64)]
    ) if new_originals else graph.original_ids
    id_map = {int(orig): i for i, orig in enumerate(original_ids.tolist())}

    features = np.zeros((n, p), dtype=np.float64)
    for orig, entries in rows.items():
        i = id_map[orig]
        for idx, val in entries.items():
            if kind is FeatureKind.BINARY and val not in (0.0, 1.0):
                raise GraphValidationError(
                    f"{path}: node {orig} has non-binary value {val} in a binary feature file"
                )
            if kind is FeatureKind.CONTINUOUS and val < 0.0:
                raise GraphValidationError(
                    f"{path}: node {orig} has negative value {val} in a continuous feature file"
                )
            features[i, idx] = val

    if new_originals:
        indptr = np.concatenate(
            [graph.adj_indptr, np.full(len(new_originals), graph.adj_indptr[-1], dtype=np.int64)]
        )
    else:
        indptr = graph.adj_indptr
    features.setflags(write=False)
    if new_originals:
        indptr.setflags(write=False)
        original_ids.setflags(write=False)
    g = AttributedGraph(
        node_count=n,
        edge_count=graph.edge_count,
        adj_indptr=indptr,
        adj_indices=graph.adj_indices,
        features=features,
        feature_kind=kind,
        original_ids=original_ids,
        id_map=id_map,
    )
    g.validate()
    return g


def load_communities(path, graph: AttributedGraph) -> CommunityCollection:
    """Load one community per line (whitespace-separated original node ids).

    Line order is preserved, singletons are allowed, and a node may appear
    in several lines (overlapping cover). Unknown node ids are an error.
    """
    comms: list[frozenset[int]] = []
    for lineno, toks in _data_lines(path):
        members: set[int] = set()
        for t in toks:
            try:
                orig = int(t)
            except ValueError as exc:
                raise GraphParseError(f"{path}:{lineno}: non-integer node id {t!r}") from exc
            if orig not in graph.id_map:
                raise GraphValidationError(f"{path}:{lineno}: unknown node id {orig}")
            members.add(graph.id_map[orig])
        if members:
            comms.append(frozenset(members))
    return CommunityCollection(comms)


def write_communities(path, communities: CommunityCollection, graph: AttributedGraph) -> None:
    """Write one community per line, translating back to original node ids."""
    with open(path, "w", encoding="utf-8") as fh:
        for c in communities:
            originals = sorted(graph.to_original(v) for v in c)
            fh.write(" ".join(str(x) for x in originals) + "\n")
