import os
from pathlib import Path

import numpy as np
import pytest

import tricomm as tc

FIXTURES = Path(__file__).parent / "data"


def dataset_dir(name: str) -> Path | None:
    """Locate a prepared real-world dataset (edges/features/communities files).

    Looks under $TRICOMM_DATA_DIR, then ./data. Returns None when absent so
    dataset-gated tests can skip with instructions.
    """
    for root in (os.environ.get("TRICOMM_DATA_DIR"), "data"):
        if not root:
            continue
        d = Path(root) / name
        if (d / "edges.txt").exists():
            return d
    return None


def random_attributed_graph(rng, n=None, kind=None, p=None, edge_prob=None):
    """Small random graph with random features of the requested kind."""
    n = n if n is not None else int(rng.integers(4, 31))
    edge_prob = edge_prob if edge_prob is not None else float(rng.uniform(0.1, 0.5))
    edges = [
        (i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < edge_prob
    ]
    if kind is None:
        kind = rng.choice(
            [tc.FeatureKind.BINARY, tc.FeatureKind.CONTINUOUS, tc.FeatureKind.NONE]
        )
    p = p if p is not None else int(rng.integers(1, 6))
    if kind is tc.FeatureKind.BINARY:
        B = (rng.random((n, p)) < 0.4).astype(float)
    elif kind is tc.FeatureKind.CONTINUOUS:
        B = np.round(rng.random((n, p)) * (rng.random((n, p)) < 0.75), 3)
    else:
        B = None
    return tc.build_graph(n, edges, features=B, feature_kind=kind)


def random_cover(rng, n, max_parts=5, allow_overlap=True):
    """Random non-empty communities; may overlap and may not cover every node."""
    K = int(rng.integers(1, max_parts + 1))
    comms = []
    for _ in range(K):
        size = int(rng.integers(1, max(2, n)))
        comms.append(frozenset(int(x) for x in rng.choice(n, size=size, replace=False)))
    if not allow_overlap:
        labels = rng.integers(0, K, size=n)
        comms = [frozenset(np.nonzero(labels == k)[0].tolist()) for k in range(K)]
        comms = [c for c in comms if c]
    return tc.CommunityCollection(comms)


def random_partition(rng, n, max_parts=5):
    labels = rng.integers(0, int(rng.integers(1, max_parts + 1)), size=n)
    groups = {}
    for v, lab in enumerate(labels):
        groups.setdefault(int(lab), set()).add(v)
    return tc.CommunityCollection([frozenset(c) for _, c in sorted(groups.items())])


@pytest.fixture
def golden_graph():
    """Two triangles joined by a bridge edge, one shared feature per side."""
    feats = np.array([[1.0, 0.0]] * 3 + [[0.0, 1.0]] * 3)
    return tc.build_graph(
        6,
        [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)],
        features=feats,
        feature_kind=tc.FeatureKind.BINARY,
    )


@pytest.fixture
def two_k3():
    """Two disjoint triangles with identical intra-clique features."""
    feats = np.array([[1.0, 0.0]] * 3 + [[0.0, 1.0]] * 3)
    return tc.build_graph(
        6,
        [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)],
        features=feats,
        feature_kind=tc.FeatureKind.BINARY,
    )
