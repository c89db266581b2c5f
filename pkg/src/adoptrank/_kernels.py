"""Numba kernels over CSR adjacency arrays.

Every graph algorithm hot loop lives here, operating directly on the
``(indptr, indices)`` arrays of a graph. Two rules keep results
bit-identical regardless of the active thread count:

* a ``prange`` body only ever writes slots owned by its own loop index
  (or reads/writes a per-thread scratch row), and
* every floating-point reduction over multiple nodes happens serially
  in a fixed order (inside one loop index, or outside the kernel).

Per-thread scratch rows use an epoch-stamping scheme: a cell is valid
only if its stamp equals the current epoch, which avoids an O(n) clear
per cascade or BFS.
"""

import numpy as np
from numba import get_num_threads, get_thread_id, njit, prange


@njit(cache=True)
def bfs_distances(indptr, indices, source, dist):
    """Fill ``dist`` with hop counts from ``source``; unreachable stays -1."""
    dist[:] = -1
    dist[source] = 0
    queue = np.empty(dist.shape[0], np.int64)
    queue[0] = source
    head, tail = 0, 1
    while head < tail:
        u = queue[head]
        head += 1
        du = dist[u]
        for j in range(indptr[u], indptr[u + 1]):
            v = indices[j]
            if dist[v] == -1:
                dist[v] = du + 1
                queue[tail] = v
                tail += 1


@njit(cache=True, parallel=True)
def bfs_block(indptr, indices, sources, dist_block):
    """BFS from each source in parallel; row i of ``dist_block`` gets source i."""
    for i in prange(sources.shape[0]):
        bfs_distances(indptr, indices, sources[i], dist_block[i])


@njit(cache=True, parallel=True)
def pagerank_step(indptr, indices, contrib, damping, base, new_rank):
    # contrib[v] = rank[v] / deg[v]; base covers teleport and sink mass
    for u in prange(new_rank.shape[0]):
        s = 0.0
        for j in range(indptr[u], indptr[u + 1]):
            s += contrib[indices[j]]
        new_rank[u] = damping * s + base


@njit(cache=True, parallel=True)
def neighbor_sum(indptr, indices, values, out):
    """out[u] = sum of values over the neighbors of u."""
    for u in prange(out.shape[0]):
        s = 0.0
        for j in range(indptr[u], indptr[u + 1]):
            s += values[indices[j]]
        out[u] = s


@njit(cache=True)
def core_numbers(indptr, indices, core):
    """Peeling decomposition by repeatedly removing minimum-degree nodes.

    Bucket-sorted variant: O(n + m), nodes kept sorted by current degree
    through constant-time swaps.
    """
    n = indptr.shape[0] - 1
    deg = np.empty(n, np.int64)
    max_deg = 0
    for u in range(n):
        deg[u] = indptr[u + 1] - indptr[u]
        if deg[u] > max_deg:
            max_deg = deg[u]

    # counting sort of nodes by degree
    bin_start = np.zeros(max_deg + 2, np.int64)
    for u in range(n):
        bin_start[deg[u] + 1] += 1
    for d in range(1, max_deg + 2):
        bin_start[d] += bin_start[d - 1]
    pos = np.empty(n, np.int64)
    vert = np.empty(n, np.int64)
    fill = bin_start[: max_deg + 1].copy()
    for u in range(n):
        pos[u] = fill[deg[u]]
        vert[pos[u]] = u
        fill[deg[u]] += 1

    for i in range(n):
        v = vert[i]
        core[v] = deg[v]
        for j in range(indptr[v], indptr[v + 1]):
            u = indices[j]
            if deg[u] > deg[v]:
                du = deg[u]
                pu = pos[u]
                pw = bin_start[du]
                w = vert[pw]
                if u != w:
                    vert[pu] = w
                    vert[pw] = u
                    pos[u] = pw
                    pos[w] = pu
                bin_start[du] += 1
                deg[u] -= 1


@njit(cache=True)
def lt_cascade(indptr, indices, theta, seeds):
    """Synchronous linear-threshold cascade from ``seeds``.

    A node activates in the sweep after its cumulative count of active
    neighbors reaches theta; a node never activates without at least one
    active neighbor. Returns (rounds, sweeps) where rounds[v] is the
    activation round (-1 if never active) and sweeps counts executed
    sweeps including the final empty one.
    """
    n = indptr.shape[0] - 1
    rounds = np.full(n, -1, np.int32)
    count = np.zeros(n, np.int32)
    in_cand = np.zeros(n, np.uint8)
    cur = np.empty(n, np.int64)
    cand = np.empty(n, np.int64)

    ncur = 0
    for k in range(seeds.shape[0]):
        s = seeds[k]
        if rounds[s] == -1:
            rounds[s] = 0
            cur[ncur] = s
            ncur += 1

    sweeps = 0
    r = 0
    while ncur > 0:
        sweeps += 1
        r += 1
        ncand = 0
        for i in range(ncur):
            w = cur[i]
            for j in range(indptr[w], indptr[w + 1]):
                v = indices[j]
                if rounds[v] == -1:
                    count[v] += 1
                    if in_cand[v] == 0:
                        in_cand[v] = 1
                        cand[ncand] = v
                        ncand += 1
        nnew = 0
        for i in range(ncand):
            v = cand[i]
            in_cand[v] = 0
            if count[v] >= theta[v]:
                rounds[v] = r
                cur[nnew] = v
                nnew += 1
        ncur = nnew
    return rounds, sweeps


@njit(cache=True, parallel=True)
def lt_activation_counts(indptr, indices, theta, out):
    """For every node u, size of the cascade seeded by u plus its neighbors.

    One cascade per node, parallel over nodes. Per-thread scratch rows are
    validated by epoch stamps (epoch = u + 1) so they need no clearing.
    """
    n = indptr.shape[0] - 1
    nt = get_num_threads()
    count = np.zeros((nt, n), np.int32)
    count_ep = np.zeros((nt, n), np.int64)
    active_ep = np.zeros((nt, n), np.int64)
    cand_ep = np.zeros((nt, n), np.int64)
    cur_buf = np.empty((nt, n), np.int64)
    cand_buf = np.empty((nt, n), np.int64)

    for u in prange(n):
        tid = get_thread_id()
        ep = np.int64(u + 1)
        cnt = count[tid]
        cep = count_ep[tid]
        aep = active_ep[tid]
        qep = cand_ep[tid]
        cur = cur_buf[tid]
        cand = cand_buf[tid]

        ncur = 0
        aep[u] = ep
        cur[ncur] = u
        ncur += 1
        for j in range(indptr[u], indptr[u + 1]):
            v = indices[j]
            aep[v] = ep
            cur[ncur] = v
            ncur += 1

        total = ncur
        while ncur > 0:
            ncand = 0
            for i in range(ncur):
                w = cur[i]
                for j in range(indptr[w], indptr[w + 1]):
                    v = indices[j]
                    if aep[v] != ep:
                        if cep[v] != ep:
                            cep[v] = ep
                            cnt[v] = 0
                        cnt[v] += 1
                        if qep[v] != ep:
                            qep[v] = ep
                            cand[ncand] = v
                            ncand += 1
            nnew = 0
            for i in range(ncand):
                v = cand[i]
                qep[v] = 0
                if cnt[v] >= theta[v]:
                    aep[v] = ep
                    cur[nnew] = v
                    nnew += 1
            total += nnew
            ncur = nnew
        out[u] = total


@njit(cache=True)
def _gdd_score(indptr, indices, selected, d, t, p, variant, v):
    tv = np.float64(t[v])
    dv = np.float64(d[v])
    s = dv - 2.0 * tv
    if variant >= 1:
        s -= (dv - tv) * tv * p
    if variant >= 2:
        s += 0.5 * tv * (tv - 1.0) * p
        acc = 0.0
        for j in range(indptr[v], indptr[v + 1]):
            w = indices[j]
            if not selected[w]:
                acc += np.float64(t[w])
        s -= p * acc
    return s


@njit(cache=True)
def gdd_select(indptr, indices, q, p, variant, order):
    """Greedy seed selection by discounted degree.

    variant: 0 = degree-only discount, 1 = classic single-probability
    discount, 2 = generalized discount that also counts the selected
    neighbors of the neighbors. After each pick only nodes within two
    hops are rescored; ties break toward the smallest node id.
    """
    n = indptr.shape[0] - 1
    d = np.empty(n, np.int64)
    for u in range(n):
        d[u] = indptr[u + 1] - indptr[u]
    t = np.zeros(n, np.int64)
    score = d.astype(np.float64)
    selected = np.zeros(n, np.uint8)
    touched = np.zeros(n, np.uint8)
    affected = np.empty(n, np.int64)

    for pick in range(q):
        best = -1
        best_score = -np.inf
        for v in range(n):
            if selected[v] == 0 and score[v] > best_score:
                best = v
                best_score = score[v]
        order[pick] = best
        selected[best] = 1

        for j in range(indptr[best], indptr[best + 1]):
            v = indices[j]
            if selected[v] == 0:
                t[v] += 1

        # rescore the one- and two-hop neighborhood of the pick
        naff = 0
        for j in range(indptr[best], indptr[best + 1]):
            v = indices[j]
            if selected[v] == 0 and touched[v] == 0:
                touched[v] = 1
                affected[naff] = v
                naff += 1
            for jj in range(indptr[v], indptr[v + 1]):
                w = indices[jj]
                if selected[w] == 0 and touched[w] == 0:
                    touched[w] = 1
                    affected[naff] = w
                    naff += 1
        for i in range(naff):
            v = affected[i]
            touched[v] = 0
            score[v] = _gdd_score(indptr, indices, selected, d, t, p, variant, v)


@njit(cache=True)
def nomination_cutoffs(indptr, indices, degrees, alpha, inclusive, cut_deg, counts):
    """Per node: degree cutoff and nominee count for the popularity cut.

    A node endorses its ``ceil(alpha * d)`` highest-degree neighbors (at
    least one). With the inclusive rule every neighbor tied with the
    last one in is endorsed too; the exclusive rule keeps exactly that
    many, filling the tied slots by ascending node id.
    """
    n = indptr.shape[0] - 1
    for u in range(n):
        d = indptr[u + 1] - indptr[u]
        if d == 0:
            cut_deg[u] = 0
            counts[u] = 0
            continue
        c = int(np.ceil(alpha * d - 1e-9))  # guard against float creep past an integer
        if c < 1:
            c = 1
        nd = np.empty(d, np.int64)
        for k in range(d):
            nd[k] = degrees[indices[indptr[u] + k]]
        nd.sort()
        cd = nd[d - c]
        cut_deg[u] = cd
        if inclusive:
            cnt = 0
            for k in range(d):
                if nd[k] >= cd:
                    cnt += 1
            counts[u] = cnt
        else:
            counts[u] = c


@njit(cache=True)
def nomination_fill(indptr, indices, degrees, cut_deg, nom_indptr, nom_indices):
    n = indptr.shape[0] - 1
    for u in range(n):
        cd = cut_deg[u]
        quota = nom_indptr[u + 1] - nom_indptr[u]
        k = nom_indptr[u]
        # first pass: everything strictly above the cut
        for j in range(indptr[u], indptr[u + 1]):
            v = indices[j]
            if degrees[v] > cd:
                nom_indices[k] = v
                k += 1
        # second pass: tied neighbors in ascending id order up to the quota
        for j in range(indptr[u], indptr[u + 1]):
            if k >= nom_indptr[u] + quota:
                break
            v = indices[j]
            if degrees[v] == cd:
                nom_indices[k] = v
                k += 1
