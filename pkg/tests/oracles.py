"""Literal-formula oracles used to validate the library implementations.

Each function re-derives its quantity from plain loops (triangle counts come
from the exhaustive triple enumerator), staying independent of the library's
optimized counting, caching, and kernel paths.
"""

from __future__ import annotations

from tricomm.exhaustive import counts as brute_counts


def literal_wcc(graph, v, community) -> float:
    community = set(community)
    all_nodes = set(range(graph.node_count))
    t_all, vt_all, _, _ = brute_counts(graph, v, all_nodes, 3)
    if t_all == 0:
        return 0.0
    t_in, _, _, _ = brute_counts(graph, v, community, 3)
    _, vt_out, _, _ = brute_counts(graph, v, all_nodes - community, 3)
    denom = len(community - {v}) + vt_out
    if denom == 0:
        return 0.0
    return (t_in / t_all) * (vt_all / denom)


def literal_wcc_star(graph, v, community, mfe=2, dedup=False) -> float:
    community = set(community)
    nbrs = set(graph.neighbors(v).tolist())
    nc = nbrs | community
    _, _, tf_nc, vtf_nc = brute_counts(graph, v, nc, mfe, dedup)
    if tf_nc == 0:
        return 0.0
    _, _, tf_in, _ = brute_counts(graph, v, community, mfe, dedup)
    _, _, _, vtf_n = brute_counts(graph, v, nbrs, mfe, dedup)
    denom = len(community - {v}) + vtf_n
    if denom == 0:
        return 0.0
    return (tf_in / tf_nc) * (vtf_nc / denom)


def literal_tightness(graph, v, community) -> float:
    community = set(community)
    d = graph.degree(v)
    if d == 0 or not community:
        return 0.0
    inside = sum(1 for y in graph.neighbors(v).tolist() if y in community)
    return inside / (d * len(community))


def literal_homogeneity(graph, v, community) -> float:
    community = set(community)
    p = graph.feature_dim
    if p == 0 or not community:
        return 0.0
    total = 0.0
    for j in community:
        for l in range(p):
            total += abs(float(graph.features[v, l]) - float(graph.features[j, l]))
    return total / (p * len(community))


def literal_utility(graph, v, community, mfe=2, dedup=False) -> float:
    """Eq.-style utility with the node hypothetically added to the community."""
    c_eff = set(community) | {v}
    return (
        literal_wcc_star(graph, v, c_eff, mfe, dedup)
        + literal_tightness(graph, v, c_eff)
        - literal_homogeneity(graph, v, c_eff)
    )


def literal_modularity(graph, cover) -> float:
    """Double loop over ordered node pairs with split belonging weights."""
    n = graph.node_count
    m = graph.edge_count
    memb = [[] for _ in range(n)]
    for k, c in enumerate(cover):
        for v in c:
            memb[v].append(k)
    degs = [graph.degree(v) for v in range(n)]
    total = 0.0
    for i in range(n):
        wi = 1.0 / len(memb[i]) if memb[i] else 0.0
        for j in range(n):
            wj = 1.0 / len(memb[j]) if memb[j] else 0.0
            shared = len(set(memb[i]) & set(memb[j]))
            if shared == 0:
                continue
            a_ij = 1.0 if i != j and graph.has_edge(i, j) else 0.0
            total += (a_ij - degs[i] * degs[j] / (2.0 * m)) * shared * wi * wj
    return total / (2.0 * m)


def literal_density(graph, community) -> float:
    community = sorted(set(community))
    s = len(community)
    if s < 2:
        return 0.0
    e = 0
    for i in range(s):
        for j in range(i + 1, s):
            if graph.has_edge(community[i], community[j]):
                e += 1
    return 2.0 * e / (s * (s - 1))


def literal_entropy(graph, community) -> float:
    import math

    community = sorted(set(community))
    p = graph.feature_dim
    acc = 0.0
    for l in range(p):
        cnt = sum(1 for v in community if float(graph.features[v, l]) > 0.0)
        frac = cnt / len(community)
        if frac > 0.0:
            acc += frac * math.log(frac)
    return -(len(community) / graph.node_count) * acc


def literal_avg_f1(detected, truth) -> float:
    def f1(a, b):
        inter = len(a & b)
        if inter == 0:
            return 0.0
        prec = inter / len(a)
        rec = inter / len(b)
        return 2 * prec * rec / (prec + rec)

    lhs = sum(max(f1(a, b) for b in truth) for a in detected) / len(detected)
    rhs = sum(max(f1(b, a) for a in detected) for b in truth) / len(truth)
    return 0.5 * lhs + 0.5 * rhs


def literal_lsf_round(graph, primary, memberships, ledger, alpha, mfe=2, mode="partition"):
    """One full synchronous round of the search, straight from the update rules.

    Communities are the primary-label groups (the state the search evolves);
    the surviving candidate list also yields the overlapping membership view.
    Takes and returns plain lists; ledger entries are copied, not mutated.
    """
    n = graph.node_count
    members = {}
    for v in range(n):
        members.setdefault(primary[v], set()).add(v)
    new_primary = []
    new_memberships = []
    new_ledger = [dict(d) for d in ledger]
    for v in range(n):
        cur = primary[v]
        base = ledger[v].get(cur, 0.0)
        u_cur = literal_utility(graph, v, members[cur], mfe)
        cand_labels = sorted({primary[y] for y in graph.neighbors(v).tolist()} - {cur})
        updated = {}
        for lab in cand_labels:
            u_new = literal_utility(graph, v, members[lab], mfe)
            updated[lab] = alpha * (u_new - u_cur) + (1.0 - alpha) * base
        cl = [(lab, val) for lab, val in updated.items() if val >= base]
        cl.append((cur, base))
        cl.sort(key=lambda t: (-t[1], t[0]))
        kept = cl[:-1] if len(cl) >= 2 else cl
        head = kept[0][0]
        new_primary.append(head)
        if mode == "partition":
            new_memberships.append([head])
        else:
            new_memberships.append(sorted(lab for lab, _ in kept))
        new_ledger[v].update(updated)
    changed = sum(1 for v in range(n) if new_primary[v] != primary[v])
    alive = set(new_primary)
    new_memberships = [[lab for lab in mem if lab in alive] for mem in new_memberships]
    changed_memb = changed
    return new_primary, new_memberships, new_ledger, changed_memb
