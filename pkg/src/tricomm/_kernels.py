"""Numba kernels behind the local-search rounds and the triangle census.

Feature identity is carried as packed uint64 bit rows: binary features set a
bit per present dimension, continuous features set only the bit of the
dominant (argmax) dimension, so the shared-dimension test of either kind is
a bitwise AND of three rows. Community membership uses CSR arrays of sorted
community indexes; per-node scratch arrays are stamped with the node id, so
no resets are needed between nodes and disjoint node ranges can be processed
by concurrent threads (kernels are nogil).
"""

from __future__ import annotations

import numpy as np
from numba import njit, prange

from .graph import AttributedGraph, CommunityCollection, FeatureKind

UINT1 = np.uint64(1)


# -- packing helpers (plain numpy) -------------------------------------------

def pack_feature_masks(graph: AttributedGraph) -> np.ndarray:
    """(n, W) uint64 bit rows encoding which dimensions count for Definition-1."""
    n = graph.node_count
    B = graph.features
    p = B.shape[1]
    if graph.feature_kind is FeatureKind.NONE or p == 0:
        return np.zeros((n, 0), dtype=np.uint64)
    if graph.feature_kind is FeatureKind.BINARY:
        rows, cols = np.nonzero(B == 1.0)
    else:
        codes = np.argmax(B, axis=1)
        keep = B.max(axis=1) > 0.0
        rows = np.nonzero(keep)[0]
        cols = codes[keep]
    W = (p + 63) // 64
    masks = np.zeros((n, W), dtype=np.uint64)
    np.bitwise_or.at(masks, (rows, cols // 64), UINT1 << (cols % 64).astype(np.uint64))
    return masks


def pack_membership_masks(node_count: int, cover: CommunityCollection) -> np.ndarray:
    """(n, Kw) uint64 rows; bit k set when the node belongs to community k."""
    K = len(cover)
    Kw = max(1, (K + 63) // 64)
    out = np.zeros((node_count, Kw), dtype=np.uint64)
    for k, c in enumerate(cover):
        w, b = divmod(k, 64)
        bit = UINT1 << np.uint64(b)
        for v in c:
            out[v, w] |= bit
    return out


def community_member_csr(cover: CommunityCollection) -> tuple[np.ndarray, np.ndarray]:
    indptr = np.zeros(len(cover) + 1, dtype=np.int64)
    np.cumsum([len(c) for c in cover], out=indptr[1:])
    members = np.empty(indptr[-1], dtype=np.int64)
    for k, c in enumerate(cover):
        members[indptr[k] : indptr[k + 1]] = sorted(c)
    return indptr, members


def pack_rich_dims(graph: AttributedGraph, min_count: int = 3) -> np.ndarray:
    """(W,) uint64 row with bits for dimensions carried by >= min_count nodes.

    A pair of nodes sharing such a dimension always has a third node
    completing a shared-feature triple somewhere in the graph.
    """
    B = graph.features
    p = B.shape[1]
    if graph.feature_kind is FeatureKind.NONE or p == 0:
        return np.zeros(0, dtype=np.uint64)
    if graph.feature_kind is FeatureKind.BINARY:
        counts = (B == 1.0).sum(axis=0)
    else:
        codes = np.argmax(B, axis=1)
        keep = B.max(axis=1) > 0.0
        counts = np.bincount(codes[keep], minlength=p)
    dims = np.nonzero(counts >= min_count)[0]
    W = (p + 63) // 64
    out = np.zeros(W, dtype=np.uint64)
    for d in dims:
        out[d // 64] |= UINT1 << np.uint64(d % 64)
    return out


# -- shared jit helpers -------------------------------------------------------

@njit(cache=True, nogil=True, inline="always")
def _has_edge(indptr, indices, u, v):
    lo = indptr[u]
    hi = indptr[u + 1]
    while lo < hi:
        mid = (lo + hi) // 2
        x = indices[mid]
        if x == v:
            return True
        if x < v:
            lo = mid + 1
        else:
            hi = mid
    return False


@njit(cache=True, nogil=True, inline="always")
def _and2(masks, a, b):
    for w in range(masks.shape[1]):
        if masks[a, w] & masks[b, w]:
            return True
    return False


@njit(cache=True, nogil=True, inline="always")
def _and3(masks, a, b, c):
    for w in range(masks.shape[1]):
        if masks[a, w] & masks[b, w] & masks[c, w]:
            return True
    return False


# -- utility evaluation -------------------------------------------------------

@njit(cache=True, nogil=True)
def _acc_pair(
    v, y, z, w, y_nbr, z_nbr,
    nc_indptr, nc_comms, st_comm,
    acc_c, stc_c, acc_nc, stc_nc, acc_vtf, stc_vtf, st_partner,
    vtf_base, base_nc,
):
    """Fold one counted triple {v, y, z} (weight w) into the per-community tallies."""
    if st_partner[y] != v:
        st_partner[y] = v
        if y_nbr:
            vtf_base += 1
        else:
            for jj in range(nc_indptr[y], nc_indptr[y + 1]):
                c = nc_comms[jj]
                if st_comm[c] == v:
                    if stc_vtf[c] != v:
                        stc_vtf[c] = v
                        acc_vtf[c] = 0
                    acc_vtf[c] += 1
    if st_partner[z] != v:
        st_partner[z] = v
        if z_nbr:
            vtf_base += 1
        else:
            for jj in range(nc_indptr[z], nc_indptr[z + 1]):
                c = nc_comms[jj]
                if st_comm[c] == v:
                    if stc_vtf[c] != v:
                        stc_vtf[c] = v
                        acc_vtf[c] = 0
                    acc_vtf[c] += 1
    # tf over NC = N(v) | C
    if y_nbr and z_nbr:
        base_nc += w
    elif y_nbr:
        for jj in range(nc_indptr[z], nc_indptr[z + 1]):
            c = nc_comms[jj]
            if st_comm[c] == v:
                if stc_nc[c] != v:
                    stc_nc[c] = v
                    acc_nc[c] = 0
                acc_nc[c] += w
    elif z_nbr:
        for jj in range(nc_indptr[y], nc_indptr[y + 1]):
            c = nc_comms[jj]
            if st_comm[c] == v:
                if stc_nc[c] != v:
                    stc_nc[c] = v
                    acc_nc[c] = 0
                acc_nc[c] += w
    # tf over C: both endpoints must belong, so walk the membership intersection
    ai = nc_indptr[y]
    ahi = nc_indptr[y + 1]
    bi = nc_indptr[z]
    bhi = nc_indptr[z + 1]
    neither = (not y_nbr) and (not z_nbr)
    while ai < ahi and bi < bhi:
        ca = nc_comms[ai]
        cb = nc_comms[bi]
        if ca == cb:
            if st_comm[ca] == v:
                if stc_c[ca] != v:
                    stc_c[ca] = v
                    acc_c[ca] = 0
                acc_c[ca] += w
                if neither:
                    if stc_nc[ca] != v:
                        stc_nc[ca] = v
                        acc_nc[ca] = 0
                    acc_nc[ca] += w
            ai += 1
            bi += 1
        elif ca < cb:
            ai += 1
        else:
            bi += 1
    return vtf_base, base_nc


@njit(cache=True, nogil=True, inline="always")
def _and2_rich(masks, a, b, rich):
    for w in range(masks.shape[1]):
        if masks[a, w] & masks[b, w] & rich[w]:
            return True
    return False


@njit(cache=True, nogil=True)
def _eval_node(
    v, cand_buf, ncand,
    indptr, indices,
    masks, rich, mfe, dedup_dual,
    nc_indptr, nc_comms, comm_sizes,
    cm_indptr, cm_members,
    feat_mode, B, row_abs, comm_fsums, comm_fabs,
    cs_indptr, cs_vals, cs_prefix,
    st_comm, ce, ce_st,
    acc_c, stc_c, acc_nc, stc_nc, acc_vtf, stc_vtf,
    st_nbr, st_rel, st_partner, pool_buf,
    u_buf,
):
    """Utility of v in every stamped candidate community (written to u_buf)."""
    n = indptr.size - 1
    W = masks.shape[1]
    p = B.shape[1]
    lo = indptr[v]
    hi = indptr[v + 1]
    d = hi - lo

    # mark neighbors; count v's edges into each stamped community
    for ii in range(lo, hi):
        y = indices[ii]
        st_nbr[y] = v
        for jj in range(nc_indptr[y], nc_indptr[y + 1]):
            c = nc_comms[jj]
            if st_comm[c] == v:
                if ce_st[c] != v:
                    ce_st[c] = v
                    ce[c] = 0
                ce[c] += 1

    vtf_base = 0
    base_nc = 0

    # topological triangles: z in N(v) beyond y, also adjacent to y
    for ii in range(lo, hi):
        y = indices[ii]
        ai = ii + 1
        bi = indptr[y]
        bhi = indptr[y + 1]
        while ai < hi and bi < bhi:
            za = indices[ai]
            zb = indices[bi]
            if za == zb:
                w = 1
                if W > 0 and mfe == 3 and not dedup_dual and _and3(masks, v, y, za):
                    w = 2
                vtf_base, base_nc = _acc_pair(
                    v, y, za, w, True, True,
                    nc_indptr, nc_comms, st_comm,
                    acc_c, stc_c, acc_nc, stc_nc, acc_vtf, stc_vtf, st_partner,
                    vtf_base, base_nc,
                )
                ai += 1
                bi += 1
            elif za < zb:
                ai += 1
            else:
                bi += 1

    if W > 0 and mfe == 2:
        for ii in range(lo, hi):
            y = indices[ii]
            if not _and2(masks, v, y):
                continue
            for jj in range(ii + 1, hi):
                z = indices[jj]
                if _and3(masks, v, y, z):
                    if dedup_dual and _has_edge(indptr, indices, y, z):
                        continue  # already counted as topological
                    vtf_base, base_nc = _acc_pair(
                        v, y, z, 1, True, True,
                        nc_indptr, nc_comms, st_comm,
                        acc_c, stc_c, acc_nc, stc_nc, acc_vtf, stc_vtf, st_partner,
                        vtf_base, base_nc,
                    )
            # wedges v-y-z with z outside N(v)
            for jj in range(indptr[y], indptr[y + 1]):
                z = indices[jj]
                if z == v or st_nbr[z] == v:
                    continue
                if _and3(masks, v, y, z):
                    vtf_base, base_nc = _acc_pair(
                        v, y, z, 1, True, False,
                        nc_indptr, nc_comms, st_comm,
                        acc_c, stc_c, acc_nc, stc_nc, acc_vtf, stc_vtf, st_partner,
                        vtf_base, base_nc,
                    )
    elif W > 0 and mfe <= 1:
        # pairs only matter when both ends lie in N(v) or a candidate community
        for ii in range(lo, hi):
            st_rel[indices[ii]] = v
        for idx in range(ncand):
            c = cand_buf[idx]
            for jj in range(cm_indptr[c], cm_indptr[c + 1]):
                st_rel[cm_members[jj]] = v
        npool = 0
        for z in range(n):
            if z != v and st_rel[z] == v and _and2(masks, v, z):
                pool_buf[npool] = z
                npool += 1
        # partner credit: a witness third node may lie anywhere in the graph
        for i in range(npool):
            y = pool_buf[i]
            if st_partner[y] == v:
                continue
            y_n = st_nbr[y] == v
            partner = False
            if mfe == 0 or y_n:
                partner = _and2_rich(masks, v, y, rich)
            if not partner and mfe == 1 and not y_n:
                for jj in range(lo, hi):
                    z = indices[jj]
                    if z != y and _and3(masks, v, y, z):
                        partner = True
                        break
                if not partner:
                    for jj in range(indptr[y], indptr[y + 1]):
                        z = indices[jj]
                        if z != v and _and3(masks, v, y, z):
                            partner = True
                            break
            if partner:
                st_partner[y] = v
                if y_n:
                    vtf_base += 1
                else:
                    for jj in range(nc_indptr[y], nc_indptr[y + 1]):
                        c = nc_comms[jj]
                        if st_comm[c] == v:
                            if stc_vtf[c] != v:
                                stc_vtf[c] = v
                                acc_vtf[c] = 0
                            acc_vtf[c] += 1
        for i in range(npool):
            y = pool_buf[i]
            y_n = st_nbr[y] == v
            for j in range(i + 1, npool):
                z = pool_buf[j]
                if not _and3(masks, v, y, z):
                    continue
                z_n = st_nbr[z] == v
                edges = int(y_n) + int(z_n)
                if (mfe == 1 and edges == 0) or (dedup_dual and edges == 2):
                    if _has_edge(indptr, indices, y, z):
                        edges += 1
                if edges < mfe:
                    continue
                if dedup_dual and edges == 3:
                    continue
                vtf_base, base_nc = _acc_pair(
                    v, y, z, 1, y_n, z_n,
                    nc_indptr, nc_comms, st_comm,
                    acc_c, stc_c, acc_nc, stc_nc, acc_vtf, stc_vtf, st_partner,
                    vtf_base, base_nc,
                )

    # utilities per candidate
    for idx in range(ncand):
        c = cand_buf[idx]
        size_c = comm_sizes[c]
        vin = False
        for jj in range(nc_indptr[v], nc_indptr[v + 1]):
            if nc_comms[jj] == c:
                vin = True
                break
        size_eff = size_c + (0 if vin else 1)
        size_wcc = size_c - (1 if vin else 0)

        t_val = 0.0
        if d > 0:
            e_in = ce[c] if ce_st[c] == v else 0
            t_val = e_in / (d * size_eff)

        h_val = 0.0
        if feat_mode == 1:
            dot = 0.0
            for l in range(p):
                dot += B[v, l] * comm_fsums[c, l]
            num = size_c * row_abs[v] + comm_fabs[c] - 2.0 * dot
            if num < 0.0:
                num = 0.0
            h_val = num / (p * size_eff)
        elif feat_mode == 2:
            total = 0.0
            for l in range(p):
                seg = c * p + l
                s0 = cs_indptr[seg]
                s1 = cs_indptr[seg + 1]
                x = B[v, l]
                loq = s0
                hiq = s1
                while loq < hiq:
                    mid = (loq + hiq) // 2
                    if cs_vals[mid] <= x:
                        loq = mid + 1
                    else:
                        hiq = mid
                cnt_le = loq - s0
                cnt = s1 - s0
                ps = s0 + seg
                left = cs_prefix[ps + cnt_le] - cs_prefix[ps]
                allsum = cs_prefix[ps + cnt] - cs_prefix[ps]
                total += cnt_le * x - left + (allsum - left) - (cnt - cnt_le) * x
            h_val = total / (p * size_eff)

        tfc = acc_c[c] if stc_c[c] == v else 0
        tfnc = base_nc + (acc_nc[c] if stc_nc[c] == v else 0)
        vtfnc = vtf_base + (acc_vtf[c] if stc_vtf[c] == v else 0)
        denom2 = size_wcc + vtf_base
        wcc = 0.0
        if tfnc > 0 and denom2 > 0:
            wcc = (tfc / tfnc) * (vtfnc / denom2)
        u_buf[idx] = wcc + t_val - h_val


@njit(cache=True, nogil=True)
def eval_round_range(
    vstart, vstop,
    out_off, out_comms, out_u, out_ncand, out_ucur,
    indptr, indices, masks, rich, mfe, dedup_dual,
    nc_indptr, nc_comms, primary_comm, comm_sizes, cm_indptr, cm_members,
    feat_mode, B, row_abs, comm_fsums, comm_fabs,
    cs_indptr, cs_vals, cs_prefix,
    st_comm, ce, ce_st, acc_c, stc_c, acc_nc, stc_nc,
    acc_vtf, stc_vtf, st_nbr, st_rel, st_partner, pool_buf,
    cand_buf, u_buf,
):
    """Candidate discovery plus utilities for every node in [vstart, vstop)."""
    for v in range(vstart, vstop):
        pc = primary_comm[v]
        st_comm[pc] = v
        cand_buf[0] = pc
        ncand = 1
        for ii in range(indptr[v], indptr[v + 1]):
            y = indices[ii]
            for jj in range(nc_indptr[y], nc_indptr[y + 1]):
                c = nc_comms[jj]
                if st_comm[c] != v:
                    st_comm[c] = v
                    cand_buf[ncand] = c
                    ncand += 1
        _eval_node(
            v, cand_buf, ncand,
            indptr, indices, masks, rich, mfe, dedup_dual,
            nc_indptr, nc_comms, comm_sizes, cm_indptr, cm_members,
            feat_mode, B, row_abs, comm_fsums, comm_fabs,
            cs_indptr, cs_vals, cs_prefix,
            st_comm, ce, ce_st,
            acc_c, stc_c, acc_nc, stc_nc, acc_vtf, stc_vtf,
            st_nbr, st_rel, st_partner, pool_buf, u_buf,
        )
        base = out_off[v]
        for i in range(ncand):
            out_comms[base + i] = cand_buf[i]
            out_u[base + i] = u_buf[i]
        out_ncand[v] = ncand
        out_ucur[v] = u_buf[0]


@njit(cache=True, nogil=True)
def eval_pairs_range(
    vstart, vstop,
    pair_indptr, pair_comms, out_u,
    indptr, indices, masks, rich, mfe, dedup_dual,
    nc_indptr, nc_comms, comm_sizes, cm_indptr, cm_members,
    feat_mode, B, row_abs, comm_fsums, comm_fabs,
    cs_indptr, cs_vals, cs_prefix,
    st_comm, ce, ce_st, acc_c, stc_c, acc_nc, stc_nc,
    acc_vtf, stc_vtf, st_nbr, st_rel, st_partner, pool_buf,
    cand_buf, u_buf,
):
    """Utility of each requested (node, community) pair, aligned with pair_comms."""
    for v in range(vstart, vstop):
        ncand = 0
        for jj in range(pair_indptr[v], pair_indptr[v + 1]):
            c = pair_comms[jj]
            st_comm[c] = v
            cand_buf[ncand] = c
            ncand += 1
        if ncand == 0:
            continue
        _eval_node(
            v, cand_buf, ncand,
            indptr, indices, masks, rich, mfe, dedup_dual,
            nc_indptr, nc_comms, comm_sizes, cm_indptr, cm_members,
            feat_mode, B, row_abs, comm_fsums, comm_fabs,
            cs_indptr, cs_vals, cs_prefix,
            st_comm, ce, ce_st,
            acc_c, stc_c, acc_nc, stc_nc, acc_vtf, stc_vtf,
            st_nbr, st_rel, st_partner, pool_buf, u_buf,
        )
        for i in range(ncand):
            out_u[pair_indptr[v] + i] = u_buf[i]


# -- census kernels -----------------------------------------------------------

@njit(cache=True)
def topo_census(indptr, indices, memb_masks):
    """(triangles with all nodes covered, triangles sharing a community)."""
    n = indptr.size - 1
    Kw = memb_masks.shape[1]
    in_gt = 0
    same = 0
    for u in range(n):
        ahi = indptr[u + 1]
        for ii in range(indptr[u], ahi):
            vv = indices[ii]
            if vv <= u:
                continue
            ai = ii + 1
            bi = indptr[vv]
            bhi = indptr[vv + 1]
            while ai < ahi and bi < bhi:
                wa = indices[ai]
                wb = indices[bi]
                if wa == wb:
                    if (
                        _row_any(memb_masks, u)
                        and _row_any(memb_masks, vv)
                        and _row_any(memb_masks, wa)
                    ):
                        in_gt += 1
                        for w in range(Kw):
                            if memb_masks[u, w] & memb_masks[vv, w] & memb_masks[wa, w]:
                                same += 1
                                break
                    ai += 1
                    bi += 1
                elif wa < wb:
                    ai += 1
                else:
                    bi += 1
    return in_gt, same


@njit(cache=True, nogil=True, inline="always")
def _row_any(mat, i):
    for w in range(mat.shape[1]):
        if mat[i, w]:
            return True
    return False


@njit(cache=True)
def community_feature_census(
    cm_indptr, cm_members, masks, memb_masks, indptr, indices, mfe
):
    """Edge-count breakdown of same-community feature triples, deduplicated.

    A triple inside several communities is attributed to the lowest community
    index containing all three nodes.
    """
    K = cm_indptr.size - 1
    W = masks.shape[1]
    Kw = memb_masks.shape[1]
    bk = np.zeros(4, np.int64)
    pairw = np.empty(max(W, 1), np.uint64)
    for k in range(K):
        s0 = cm_indptr[k]
        s1 = cm_indptr[k + 1]
        for i in range(s0, s1):
            x = cm_members[i]
            for j in range(i + 1, s1):
                y = cm_members[j]
                nz = False
                for w in range(W):
                    pw = masks[x, w] & masks[y, w]
                    pairw[w] = pw
                    if pw:
                        nz = True
                if not nz:
                    continue
                for l in range(j + 1, s1):
                    z = cm_members[l]
                    ok = False
                    for w in range(W):
                        if pairw[w] & masks[z, w]:
                            ok = True
                            break
                    if not ok:
                        continue
                    low = -1
                    for w in range(Kw):
                        aw = memb_masks[x, w] & memb_masks[y, w] & memb_masks[z, w]
                        if aw:
                            b = 0
                            while (aw & UINT1) == np.uint64(0):
                                aw = aw >> UINT1
                                b += 1
                            low = w * 64 + b
                            break
                    if low != k:
                        continue
                    e = 0
                    if _has_edge(indptr, indices, x, y):
                        e += 1
                    if _has_edge(indptr, indices, x, z):
                        e += 1
                    if _has_edge(indptr, indices, y, z):
                        e += 1
                    if e >= mfe:
                        bk[e] += 1
    return bk


@njit(cache=True)
def def1_triangles(indptr, indices, masks, incl):
    """Topological triangles of included nodes whose rows share a dimension."""
    n = indptr.size - 1
    total = 0
    for u in range(n):
        if not incl[u]:
            continue
        ahi = indptr[u + 1]
        for ii in range(indptr[u], ahi):
            v = indices[ii]
            if v <= u or not incl[v]:
                continue
            ai = ii + 1
            bi = indptr[v]
            bhi = indptr[v + 1]
            while ai < ahi and bi < bhi:
                wa = indices[ai]
                wb = indices[bi]
                if wa == wb:
                    if incl[wa] and _and3(masks, u, v, wa):
                        total += 1
                    ai += 1
                    bi += 1
                elif wa < wb:
                    ai += 1
                else:
                    bi += 1
    return total


@njit(cache=True)
def def1_wedges(indptr, indices, masks, incl):
    """Center-counted shared-dimension wedges (pairs inside a neighborhood)."""
    n = indptr.size - 1
    W = masks.shape[1]
    total = 0
    pairw = np.empty(max(W, 1), np.uint64)
    for v in range(n):
        if not incl[v]:
            continue
        lo = indptr[v]
        hi = indptr[v + 1]
        for i in range(lo, hi):
            y = indices[i]
            if not incl[y]:
                continue
            nz = False
            for w in range(W):
                pw = masks[v, w] & masks[y, w]
                pairw[w] = pw
                if pw:
                    nz = True
            if not nz:
                continue
            for j in range(i + 1, hi):
                z = indices[j]
                if not incl[z]:
                    continue
                for w in range(W):
                    if pairw[w] & masks[z, w]:
                        total += 1
                        break
    return total


@njit(cache=True)
def def1_edge_completions(indptr, indices, masks, incl):
    """Sum over included edges of third nodes sharing a dimension with both ends."""
    n = indptr.size - 1
    W = masks.shape[1]
    total = 0
    pairw = np.empty(max(W, 1), np.uint64)
    for u in range(n):
        if not incl[u]:
            continue
        for ii in range(indptr[u], indptr[u + 1]):
            v = indices[ii]
            if v <= u or not incl[v]:
                continue
            nz = False
            for w in range(W):
                pw = masks[u, w] & masks[v, w]
                pairw[w] = pw
                if pw:
                    nz = True
            if not nz:
                continue
            for z in range(n):
                if z == u or z == v or not incl[z]:
                    continue
                for w in range(W):
                    if pairw[w] & masks[z, w]:
                        total += 1
                        break
    return total


@njit(cache=True, parallel=True)
def _pattern_triple_partials(pats, mult, out):
    """Per-leading-pattern triple tallies; see pattern_triple_count."""
    D = pats.shape[0]
    W = pats.shape[1]
    for i in prange(D):
        mi = mult[i]
        sub = np.int64(0)
        nz = False
        for w in range(W):
            if pats[i, w]:
                nz = True
                break
        if nz:
            sub += mi * (mi - 1) * (mi - 2) // 6
        pairw = np.empty(W, np.uint64)
        for j in range(i + 1, D):
            mj = mult[j]
            nz2 = False
            for w in range(W):
                pw = pats[i, w] & pats[j, w]
                pairw[w] = pw
                if pw:
                    nz2 = True
            if not nz2:
                continue
            sub += (mi * (mi - 1) // 2) * mj + mi * (mj * (mj - 1) // 2)
            for k in range(j + 1, D):
                for w in range(W):
                    if pairw[w] & pats[k, w]:
                        sub += mi * mj * mult[k]
                        break
        out[i] = sub


def pattern_triple_count(pats: np.ndarray, mult: np.ndarray) -> int:
    """Node triples whose three feature rows AND to nonzero, by distinct pattern.

    ``pats`` holds distinct packed rows, ``mult`` their multiplicities; the
    AND of duplicated patterns is the pattern itself, which gives the
    binomial terms.
    """
    out = np.zeros(pats.shape[0], dtype=np.int64)
    _pattern_triple_partials(pats, mult, out)
    return int(out.sum())


def global_feature_count(
    graph: AttributedGraph,
    masks: np.ndarray,
    memb_masks: np.ndarray,
    mfe: int,
) -> int:
    """Feature triples (>= mfe edges) whose nodes all appear in the ground truth."""
    if masks.shape[1] == 0:
        return 0
    covered = memb_masks.any(axis=1)
    if mfe == 0:
        sub = masks[covered]
        sub = sub[sub.any(axis=1)]
        if sub.shape[0] < 3:
            return 0
        pats, mult = np.unique(sub, axis=0, return_counts=True)
        return int(pattern_triple_count(np.ascontiguousarray(pats), mult.astype(np.int64)))
    indptr, indices = graph.adj_indptr, graph.adj_indices
    t3 = def1_triangles(indptr, indices, masks, covered)
    if mfe == 3:
        return int(t3)
    wdg = def1_wedges(indptr, indices, masks, covered)
    if mfe == 2:
        return int(wdg - 2 * t3)
    e1 = def1_edge_completions(indptr, indices, masks, covered)
    return int(e1 - wdg + t3)
