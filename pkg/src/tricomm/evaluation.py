"""Evaluation measures: best-match F1, modularity, density, entropy.

Modularity supports overlapping covers by splitting each node's belonging
weight equally across its communities, which reduces to the standard
partition formula when memberships are exclusive.
"""

from __future__ import annotations

import math
from collections import Counter, defaultdict
from dataclasses import dataclass

import numpy as np

from .graph import AttributedGraph, CommunityCollection

__all__ = [
    "UndefinedMetricError",
    "MetricsReport",
    "avg_f1",
    "modularity",
    "density",
    "entropy",
    "overlaps_stat",
    "evaluate",
]


class UndefinedMetricError(ValueError):
    """The metric is undefined for the given inputs (empty cover, m=0, p=0)."""


@dataclass(frozen=True)
class MetricsReport:
    avg_f1: float
    modularity_q: float
    density_per_community: list[float]
    density_weighted_mean: float
    entropy_per_community: list[float] | None
    entropy_total: float | None
    community_count: int
    overlaps: float

    def to_dict(self) -> dict:
        return {
            "avg_f1": self.avg_f1,
            "modularity_q": self.modularity_q,
            "density_per_community": self.density_per_community,
            "density_weighted_mean": self.density_weighted_mean,
            "entropy_per_community": self.entropy_per_community,
            "entropy_total": self.entropy_total,
            "community_count": self.community_count,
            "overlaps": self.overlaps,
        }


def _best_f1_mean(a_cover: CommunityCollection, b_cover: CommunityCollection) -> float:
    index: dict[int, list[int]] = defaultdict(list)
    for bi, b in enumerate(b_cover):
        for v in b:
            index[v].append(bi)
    total = 0.0
    for a in a_cover:
        inter = Counter()
        for v in a:
            for bi in index[v]:
                inter[bi] += 1
        best = 0.0
        for bi, common in inter.items():
            prec = common / len(a)
            rec = common / len(b_cover.communities[bi])
            best = max(best, 2.0 * prec * rec / (prec + rec))
        total += best
    return total / len(a_cover)


def avg_f1(detected: CommunityCollection, ground_truth: CommunityCollection) -> float:
    """Symmetric average of best-match F1 scores between the two covers."""
    if len(detected) == 0 or len(ground_truth) == 0:
        raise UndefinedMetricError("avg_f1 needs non-empty covers")
    return 0.5 * _best_f1_mean(detected, ground_truth) + 0.5 * _best_f1_mean(
        ground_truth, detected
    )


def modularity(graph: AttributedGraph, cover: CommunityCollection) -> float:
    """Newman modularity with belonging weight split across memberships."""
    m = graph.edge_count
    if m == 0:
        raise UndefinedMetricError("modularity needs at least one edge")
    n = graph.node_count
    memb = cover.membership_lists(n)
    weight = [1.0 / len(x) if x else 0.0 for x in memb]
    if all(len(x) <= 1 for x in memb):
        # exclusive memberships: label-equality over the edge arrays
        label = np.array([x[0] if x else -1 for x in memb], dtype=np.int64)
        src = np.repeat(np.arange(n, dtype=np.int64), np.diff(graph.adj_indptr))
        dst = graph.adj_indices.astype(np.int64)
        keep = src < dst
        su, sv = src[keep], dst[keep]
        same = (label[su] == label[sv]) & (label[su] >= 0)
        edge_term = 2.0 * float(np.count_nonzero(same))
    else:
        edge_term = 0.0
        for u, v in graph.edges():
            if not memb[u] or not memb[v]:
                continue
            shared = len(set(memb[u]) & set(memb[v]))
            if shared:
                edge_term += 2.0 * shared * weight[u] * weight[v]
    degs = graph.degrees
    strength = np.zeros(len(cover), dtype=np.float64)
    for v in range(n):
        for k in memb[v]:
            strength[k] += degs[v] * weight[v]
    degree_term = float(np.square(strength).sum()) / (2.0 * m)
    return (edge_term - degree_term) / (2.0 * m)


def density(graph: AttributedGraph, community) -> float:
    """Internal edge density; singletons score 0 by convention."""
    community = set(community)
    s = len(community)
    if s < 2:
        return 0.0
    internal = sum(
        1 for v in community for y in graph.neighbors(v).tolist() if y in community
    ) // 2
    return 2.0 * internal / (s * (s - 1))


def entropy(graph: AttributedGraph, community) -> float:
    """Size-weighted feature entropy of one community (natural log)."""
    if graph.feature_dim == 0:
        raise UndefinedMetricError("entropy needs node features")
    community = sorted(set(community))
    members = np.asarray(community, dtype=np.int64)
    present = graph.features[members] > 0.0
    frac = present.mean(axis=0)
    acc = 0.0
    for pl in frac:
        if 0.0 < pl:
            acc += pl * math.log(pl)
    return -(len(community) / graph.node_count) * acc


def overlaps_stat(cover: CommunityCollection, node_count: int) -> float:
    """Mean number of memberships per node: sum of community sizes over n."""
    if node_count == 0:
        return 0.0
    return sum(len(c) for c in cover) / node_count


def evaluate(
    graph: AttributedGraph,
    detected: CommunityCollection,
    ground_truth: CommunityCollection,
) -> MetricsReport:
    """Full report for a detected cover against a ground truth."""
    dens = [density(graph, c) for c in detected]
    sizes = [len(c) for c in detected]
    wmean = (
        sum(d * s for d, s in zip(dens, sizes)) / sum(sizes) if sizes else 0.0
    )
    if graph.feature_dim > 0:
        ent = [entropy(graph, c) for c in detected]
        ent_total = sum(ent)
    else:
        ent = None
        ent_total = None
    return MetricsReport(
        avg_f1=avg_f1(detected, ground_truth),
        modularity_q=modularity(graph, detected),
        density_per_community=dens,
        density_weighted_mean=wmean,
        entropy_per_community=ent,
        entropy_total=ent_total,
        community_count=len(detected),
        overlaps=overlaps_stat(detected, graph.node_count),
    )
