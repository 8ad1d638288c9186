"""Independent reference implementations used as test oracles.

Everything here recomputes results through a different route than the
library: full-matrix dynamic programming for edit distance, all-pairs
matching plus breadth-first closure for clustering, raw edge-list scans
for network metrics, and tabulated inverse-transform sampling for
power-law variates.  Keep these naive; their value is independence, not
speed.
"""

from __future__ import annotations

import numpy as np

from collabnet.dedup import is_duplicate
from collabnet.graph import CollaborationNetwork
from collabnet.ingest import Gender


def osa_distance_reference(a: str, b: str) -> int:
    """Textbook optimal-string-alignment distance, full (m+1)x(n+1) matrix."""
    la, lb = len(a), len(b)
    d = [[0] * (lb + 1) for _ in range(la + 1)]
    for i in range(la + 1):
        d[i][0] = i
    for j in range(lb + 1):
        d[0][j] = j
    for i in range(1, la + 1):
        for j in range(1, lb + 1):
            cost = 0 if a[i - 1] == b[j - 1] else 1
            best = min(
                d[i - 1][j] + 1,
                d[i][j - 1] + 1,
                d[i - 1][j - 1] + cost,
            )
            if i > 1 and j > 1 and a[i - 1] == b[j - 2] and a[i - 2] == b[j - 1]:
                best = min(best, d[i - 2][j - 2] + 1)
            d[i][j] = best
    return d[la][lb]


def brute_force_clusters(pubs, threshold) -> list[list[int]]:
    """All-pairs is_duplicate + BFS transitive closure over the match graph."""
    n = len(pubs)
    adj: list[list[int]] = [[] for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if is_duplicate(pubs[i], pubs[j], threshold):
                adj[i].append(j)
                adj[j].append(i)
    seen = [False] * n
    clusters = []
    for start in range(n):
        if seen[start]:
            continue
        comp = [start]
        seen[start] = True
        queue = [start]
        while queue:
            u = queue.pop(0)
            for v in adj[u]:
                if not seen[v]:
                    seen[v] = True
                    comp.append(v)
                    queue.append(v)
        clusters.append(sorted(comp))
    return sorted(clusters, key=lambda c: c[0])


def brute_force_projection(cluster_scientists) -> dict[tuple[str, str], int]:
    """Pairwise shared-cluster counts, scanning every scientist pair."""
    scientists = sorted({s for members in cluster_scientists for s in members})
    weights: dict[tuple[str, str], int] = {}
    for a_idx, a in enumerate(scientists):
        for b in scientists[a_idx + 1 :]:
            shared = sum(
                1 for members in cluster_scientists if a in members and b in members
            )
            if shared:
                weights[(a, b)] = shared
    return weights


def edge_list_metrics(
    node_gender: dict[str, Gender],
    node_field: dict,
    edges: dict[tuple[str, str], int],
) -> tuple[dict[str, float | None], dict[str, float | None]]:
    """g-ratio and m-ratio per node computed straight off the edge list."""
    g_num: dict[str, int] = {}
    g_den: dict[str, int] = {}
    m_num: dict[str, int] = {}
    m_den: dict[str, int] = {}
    for (i, j), w in edges.items():
        for me, other in ((i, j), (j, i)):
            og = node_gender[other]
            if og is not Gender.UNKNOWN:
                g_den[me] = g_den.get(me, 0) + w
                if og is Gender.FEMALE:
                    g_num[me] = g_num.get(me, 0) + w
            if node_field[me] is not None and node_field[other] is not None:
                m_den[me] = m_den.get(me, 0) + w
                if node_field[other] is not node_field[me]:
                    m_num[me] = m_num.get(me, 0) + w
    g = {}
    m = {}
    for node in node_gender:
        den = g_den.get(node, 0)
        g[node] = g_num.get(node, 0) / den if den else None
        if node_field[node] is None:
            m[node] = None
        else:
            den = m_den.get(node, 0)
            m[node] = m_num.get(node, 0) / den if den else None
    return g, m


def random_network(rng: np.random.Generator, max_nodes: int = 50):
    """A random weighted network with mixed genders and fields."""
    from collabnet.graph import NodeAttrs
    from collabnet.ingest import MajorField

    n = int(rng.integers(2, max_nodes + 1))
    ids = [f"n{i:03d}" for i in range(n)]
    genders = [
        (Gender.FEMALE, Gender.MALE, Gender.UNKNOWN)[int(rng.integers(3))]
        if rng.random() < 0.15
        else (Gender.FEMALE if rng.random() < 0.5 else Gender.MALE)
        for _ in range(n)
    ]
    field_pool = list(MajorField) + [None]
    fields = [field_pool[int(rng.integers(len(field_pool)))] for _ in range(n)]
    edges: dict[tuple[str, str], int] = {}
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < 0.15:
                edges[(ids[i], ids[j])] = int(rng.integers(1, 6))
    attrs = {
        ids[i]: NodeAttrs(genders[i], fields[i], int(rng.integers(0, 10)))
        for i in range(n)
    }
    net = CollaborationNetwork(ids, attrs, edges)
    gender_map = {ids[i]: genders[i] for i in range(n)}
    field_map = {ids[i]: fields[i] for i in range(n)}
    return net, gender_map, field_map, edges


def zeta_inverse_transform(exponent: float, n: int, seed: int, kmax: int = 10**6):
    """Discrete power-law sampler via a tabulated CDF (independent of the
    library's rejection sampler)."""
    ks = np.arange(1, kmax + 1, dtype=np.float64)
    cdf = np.cumsum(ks**-exponent)
    cdf /= cdf[-1]
    rng = np.random.default_rng(seed)
    return np.searchsorted(cdf, rng.random(n)) + 1
