"""Round-synchronous local search maximizing the triangle utility objective.

Every node starts in its own community. Each round, all nodes evaluate the
utility of joining each community that holds at least one neighbor, smooth
the gains into a cumulative-utility ledger, filter candidates, and commit
label changes together, so results do not depend on processing order. The
search state is the per-node primary label; the surviving candidate list of
each round additionally yields the overlapping membership view. Terminates
when no primary label changes or the round cap is passed.
"""

from __future__ import annotations

import enum
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import _kernels as K
from .graph import AttributedGraph, CommunityCollection, FeatureKind

__all__ = [
    "Mode",
    "LsfConfig",
    "CommunityState",
    "LsfResult",
    "initialize",
    "candidate_labels",
    "update_cumulative_utilities",
    "filter_candidates",
    "assign_labels",
    "run",
]


class Mode(enum.Enum):
    PARTITION = "partition"
    OVERLAP = "overlap"


@dataclass(frozen=True)
class LsfConfig:
    alpha: float = 0.2
    max_rounds: int = 20
    mode: Mode = Mode.PARTITION
    min_feature_edges: int = 2
    dedup_dual_triangles: bool = False
    workers: int = 1

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError("alpha must lie in [0, 1]")
        if self.max_rounds < 1:
            raise ValueError("max_rounds must be >= 1")
        if self.min_feature_edges not in (0, 1, 2, 3):
            raise ValueError("min_feature_edges must be in 0..3")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")


@dataclass
class CommunityState:
    """Mutable assignment of nodes to community labels plus the utility ledger.

    ``primary_label`` drives the search; ``memberships`` is the overlapping
    view produced by the last assignment step (always containing the primary).
    """

    primary_label: list[int]
    memberships: list[list[int]]
    ledger: list[dict[int, float]]
    round: int = 0
    changed_count: int = 0

    def active_labels(self) -> list[int]:
        return sorted(set(self.primary_label))

    def members_of(self) -> dict[int, list[int]]:
        """Primary-label communities (the state the search evolves)."""
        out: dict[int, list[int]] = {}
        for v, lab in enumerate(self.primary_label):
            out.setdefault(lab, []).append(v)
        return out

    def to_collection(self, mode: Mode = Mode.PARTITION) -> CommunityCollection:
        """Communities in ascending label order, from either view."""
        groups: dict[int, set[int]] = {}
        if mode is Mode.PARTITION:
            for v, lab in enumerate(self.primary_label):
                groups.setdefault(lab, set()).add(v)
        else:
            for v, mem in enumerate(self.memberships):
                for lab in mem:
                    groups.setdefault(lab, set()).add(v)
        return CommunityCollection([frozenset(groups[lab]) for lab in sorted(groups)])


@dataclass
class LsfResult:
    communities: CommunityCollection
    state: CommunityState
    trace: list[dict]
    history: list[dict] = field(default_factory=list)


def initialize(graph: AttributedGraph) -> CommunityState:
    """Every node in its own community, all cumulative utilities at zero."""
    n = graph.node_count
    return CommunityState(
        primary_label=list(range(n)),
        memberships=[[v] for v in range(n)],
        ledger=[{v: 0.0} for v in range(n)],
    )


def candidate_labels(graph: AttributedGraph, state: CommunityState, v: int) -> list[int]:
    """Labels of communities containing at least one neighbor of ``v``."""
    return sorted({state.primary_label[y] for y in graph.neighbors(v).tolist()})


class _Snapshot:
    """Frozen numeric view of one round's primary-label communities."""

    def __init__(self, graph: AttributedGraph, state: CommunityState, config: LsfConfig):
        self.graph = graph
        n = graph.node_count
        self.labels = state.active_labels()
        self.index = {lab: i for i, lab in enumerate(self.labels)}
        Kn = len(self.labels)
        self.primary_comm = np.fromiter(
            (self.index[lab] for lab in state.primary_label), dtype=np.int64, count=n
        )
        self.nc_indptr = np.arange(n + 1, dtype=np.int64)
        self.nc_comms = self.primary_comm.copy()
        self.comm_sizes = np.bincount(self.nc_comms, minlength=Kn).astype(np.int64)
        self.cm_members = np.argsort(self.nc_comms, kind="stable").astype(np.int64)
        self.cm_indptr = np.zeros(Kn + 1, dtype=np.int64)
        np.cumsum(self.comm_sizes, out=self.cm_indptr[1:])
        self.K = Kn
        self.config = config
        self.rich = K.pack_rich_dims(graph)

        B = graph.features
        p = B.shape[1]
        if graph.feature_kind is FeatureKind.BINARY and p:
            self.feat_mode = 1
        elif graph.feature_kind is FeatureKind.CONTINUOUS and p:
            self.feat_mode = 2
        else:
            self.feat_mode = 0
        self.B = np.ascontiguousarray(B, dtype=np.float64)
        self.masks = K.pack_feature_masks(graph)

        if self.feat_mode == 1:
            self.row_abs = self.B.sum(axis=1)
            self.comm_fsums = np.zeros((Kn, p), dtype=np.float64)
            np.add.at(self.comm_fsums, self.nc_comms, self.B)
            self.comm_fabs = np.bincount(self.nc_comms, weights=self.row_abs, minlength=Kn)
            self.cs_indptr = np.zeros(1, dtype=np.int64)
            self.cs_vals = np.zeros(0, dtype=np.float64)
            self.cs_prefix = np.zeros(0, dtype=np.float64)
        elif self.feat_mode == 2:
            self.row_abs = np.zeros(0, dtype=np.float64)
            self.comm_fsums = np.zeros((0, 0), dtype=np.float64)
            self.comm_fabs = np.zeros(0, dtype=np.float64)
            nseg = Kn * p
            seg_len = np.repeat(self.comm_sizes, p)
            self.cs_indptr = np.zeros(nseg + 1, dtype=np.int64)
            np.cumsum(seg_len, out=self.cs_indptr[1:])
            # values grouped by (community, dim), sorted within each segment
            keys = (self.nc_comms[:, None] * p + np.arange(p)[None, :]).ravel()
            vals = self.B.ravel()
            order = np.lexsort((vals, keys))
            self.cs_vals = vals[order]
            totals = np.cumsum(self.cs_vals)
            shifted = np.concatenate(([0.0], totals))
            nt = len(self.cs_vals)
            segidx = np.repeat(np.arange(nseg), seg_len)
            self.cs_prefix = np.zeros(nt + nseg, dtype=np.float64)
            self.cs_prefix[np.arange(nt) + segidx + 1] = (
                totals - shifted[self.cs_indptr[:-1]][segidx]
            )
        else:
            self.row_abs = np.zeros(0, dtype=np.float64)
            self.comm_fsums = np.zeros((0, 0), dtype=np.float64)
            self.comm_fabs = np.zeros(0, dtype=np.float64)
            self.cs_indptr = np.zeros(1, dtype=np.int64)
            self.cs_vals = np.zeros(0, dtype=np.float64)
            self.cs_prefix = np.zeros(0, dtype=np.float64)

    def _scratch(self):
        n = self.graph.node_count
        Kn = max(self.K, 1)
        return (
            np.full(Kn, -1, dtype=np.int64),  # st_comm
            np.zeros(Kn, dtype=np.int64),  # ce
            np.full(Kn, -1, dtype=np.int64),  # ce_st
            np.zeros(Kn, dtype=np.int64),  # acc_c
            np.full(Kn, -1, dtype=np.int64),  # stc_c
            np.zeros(Kn, dtype=np.int64),  # acc_nc
            np.full(Kn, -1, dtype=np.int64),  # stc_nc
            np.zeros(Kn, dtype=np.int64),  # acc_vtf
            np.full(Kn, -1, dtype=np.int64),  # stc_vtf
            np.full(max(n, 1), -1, dtype=np.int64),  # st_nbr
            np.full(max(n, 1), -1, dtype=np.int64),  # st_rel
            np.full(max(n, 1), -1, dtype=np.int64),  # st_partner
            np.zeros(max(n, 1), dtype=np.int64),  # pool_buf
            np.zeros(Kn, dtype=np.int64),  # cand_buf
            np.zeros(Kn, dtype=np.float64),  # u_buf
        )

    def _state_args(self):
        return (
            self.graph.adj_indptr,
            self.graph.adj_indices,
            self.masks,
            self.rich,
            self.config.min_feature_edges,
            self.config.dedup_dual_triangles,
            self.nc_indptr,
            self.nc_comms,
        )

    def _model_args(self):
        return (
            self.comm_sizes,
            self.cm_indptr,
            self.cm_members,
            self.feat_mode,
            self.B,
            self.row_abs,
            self.comm_fsums,
            self.comm_fabs,
            self.cs_indptr,
            self.cs_vals,
            self.cs_prefix,
        )

    def evaluate_candidates(self):
        """Per-node neighbor-community utilities; each list starts at the primary.

        Returns (indptr, comm_indexes, utilities, u_current).
        """
        g = self.graph
        n = g.node_count
        bound = np.diff(g.adj_indptr) + 1
        off = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(bound, out=off[1:])
        out_comms = np.zeros(int(off[-1]), dtype=np.int64)
        out_u = np.zeros(int(off[-1]), dtype=np.float64)
        out_ncand = np.zeros(n, dtype=np.int64)
        out_ucur = np.zeros(n, dtype=np.float64)
        state_args = self._state_args()
        ip, ix, masks, rich, mfe, dedup, nci, ncc = state_args

        def work(v0, v1):
            scratch = self._scratch()
            K.eval_round_range(
                v0, v1, off, out_comms, out_u, out_ncand, out_ucur,
                ip, ix, masks, rich, mfe, dedup,
                nci, ncc, self.primary_comm,
                *self._model_args(),
                *scratch,
            )

        self._dispatch(work, n)
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(out_ncand, out=indptr[1:])
        if n:
            keep = np.concatenate(
                [np.arange(off[v], off[v] + out_ncand[v]) for v in range(n)]
            )
        else:
            keep = np.zeros(0, dtype=np.int64)
        return indptr, out_comms[keep], out_u[keep], out_ucur

    def evaluate_pairs(self, pair_indptr, pair_comms):
        """Utility of arbitrary (node, community-index) pairs."""
        n = self.graph.node_count
        out_u = np.zeros(len(pair_comms), dtype=np.float64)
        args = self._state_args()

        def work(v0, v1):
            scratch = self._scratch()
            K.eval_pairs_range(
                v0, v1, pair_indptr, pair_comms, out_u,
                *args,
                *self._model_args(),
                *scratch,
            )

        self._dispatch(work, n)
        return out_u

    def _dispatch(self, work, n):
        w = min(self.config.workers, max(n, 1))
        if w <= 1 or n == 0:
            work(0, n)
            return
        bounds = np.linspace(0, n, w + 1).astype(np.int64)
        with ThreadPoolExecutor(max_workers=w) as pool:
            futs = [pool.submit(work, int(bounds[i]), int(bounds[i + 1])) for i in range(w)]
            for f in futs:
                f.result()


def update_cumulative_utilities(
    graph: AttributedGraph, state: CommunityState, config: LsfConfig
) -> list[dict[int, float]]:
    """One smoothing step: candidate-label cumulative utilities for every node.

    Candidates are the primary communities of neighbors; each gets
    ``alpha * (u_candidate - u_current) + (1 - alpha) * base`` where base is
    the ledger entry of the node's current community. All utilities are read
    from the round snapshot, with the node hypothetically added to the
    candidate community.
    """
    snap = _Snapshot(graph, state, config)
    indptr, comms, u_vals, u_cur = snap.evaluate_candidates()
    alpha = config.alpha
    out: list[dict[int, float]] = []
    for v in range(graph.node_count):
        cur = state.primary_label[v]
        base = state.ledger[v].get(cur, 0.0)
        d: dict[int, float] = {}
        for i in range(int(indptr[v]), int(indptr[v + 1])):
            lab = snap.labels[int(comms[i])]
            if lab == cur:
                continue
            d[lab] = alpha * (float(u_vals[i]) - float(u_cur[v])) + (1.0 - alpha) * base
        out.append(d)
    return out


def filter_candidates(
    state: CommunityState, node: int, updated: dict[int, float]
) -> list[tuple[int, float]]:
    """Keep candidates at or above the current cumulative utility, then sort.

    The current label always survives, carrying its ledger value; ordering is
    by utility descending with ties to the smaller label id.
    """
    cur = state.primary_label[node]
    base = state.ledger[node].get(cur, 0.0)
    cl = [(lab, val) for lab, val in updated.items() if val >= base and lab != cur]
    cl.append((cur, base))
    cl.sort(key=lambda t: (-t[1], t[0]))
    return cl


def assign_labels(
    state: CommunityState, node: int, cl: list[tuple[int, float]], mode: Mode
) -> tuple[int, list[int]]:
    """Drop the trailing label (when there are at least two), pick the head.

    The head of the surviving list is the next primary label; the remaining
    labels form the overlapping membership view unless the mode is PARTITION.
    """
    kept = cl[:-1] if len(cl) >= 2 else cl
    primary = kept[0][0]
    if mode is Mode.PARTITION:
        return primary, [primary]
    return primary, sorted(lab for lab, _ in kept)


def run(
    graph: AttributedGraph,
    config: LsfConfig | None = None,
    keep_history: bool = False,
) -> LsfResult:
    """Run the full search and return communities plus a per-round trace."""
    from .evaluation import modularity

    config = config or LsfConfig()
    state = initialize(graph)
    trace: list[dict] = []
    history: list[dict] = []
    if graph.node_count == 0:
        return LsfResult(CommunityCollection([]), state, trace, history)

    t = 0
    while True:
        t += 1
        updated = update_cumulative_utilities(graph, state, config)
        new_primary: list[int] = []
        new_memberships: list[list[int]] = []
        changed = 0
        for v in range(graph.node_count):
            cl = filter_candidates(state, v, updated[v])
            primary, mem = assign_labels(state, v, cl, config.mode)
            if primary != state.primary_label[v]:
                changed += 1
            new_primary.append(primary)
            new_memberships.append(mem)
            state.ledger[v].update(updated[v])
        alive = set(new_primary)
        state.primary_label = new_primary
        state.memberships = [
            [lab for lab in mem if lab in alive] for mem in new_memberships
        ]
        state.round = t
        state.changed_count = changed

        cover = state.to_collection(config.mode)
        snap = _Snapshot(graph, state, config)
        counts = [len(m) for m in state.memberships]
        pair_indptr = np.zeros(graph.node_count + 1, dtype=np.int64)
        np.cumsum(counts, out=pair_indptr[1:])
        pair_comms = np.fromiter(
            (snap.index[lab] for mem in state.memberships for lab in mem),
            dtype=np.int64,
            count=int(pair_indptr[-1]),
        )
        objective_val = float(snap.evaluate_pairs(pair_indptr, pair_comms).sum())
        mod = modularity(graph, cover) if graph.edge_count > 0 else None
        trace.append(
            {
                "round": t,
                "changed_count": changed,
                "modularity": mod,
                "objective": objective_val,
            }
        )
        if keep_history:
            history.append(
                {
                    "round": t,
                    "changed_count": changed,
                    "primary": list(state.primary_label),
                    "memberships": [list(m) for m in state.memberships],
                    "ledger": [dict(led) for led in state.ledger],
                }
            )
        if changed == 0 or t > config.max_rounds:
            break

    return LsfResult(state.to_collection(config.mode), state, trace, history)
