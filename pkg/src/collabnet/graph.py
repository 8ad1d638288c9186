"""Bipartite scientist-paper network and its weighted projection (the TCN).

Edge weight between two scientists equals the number of deduplicated papers
both are connected to.  Isolated scientists stay in the network as degree-0
nodes.  Networks are immutable once built; adjacency is kept as sorted
neighbor lists so iteration order is deterministic.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import combinations
from typing import Iterator, Mapping, Sequence

from .dedup import PaperCluster
from .ingest import Gender, MajorField, ScientistRecord, primary_field


@dataclass(frozen=True)
class NodeAttrs:
    gender: Gender
    field: MajorField | None
    paper_count: int


class BipartiteNetwork:
    """Two vertex classes: scientists and deduplicated papers."""

    def __init__(
        self,
        records: Sequence[ScientistRecord],
        cluster_scientists: list[tuple[str, ...]],
    ):
        self.records = list(records)
        self.cluster_scientists = cluster_scientists  # per cluster: sorted unique ids
        counts: Counter[str] = Counter()
        for members in cluster_scientists:
            counts.update(members)
        self.papers_per_scientist = {
            rec.scientist_id: counts.get(rec.scientist_id, 0) for rec in self.records
        }

    @property
    def n_scientists(self) -> int:
        return len(self.records)

    @property
    def n_papers(self) -> int:
        return len(self.cluster_scientists)

    @property
    def n_edges(self) -> int:
        return sum(len(m) for m in self.cluster_scientists)


def build_bipartite(
    records: Sequence[ScientistRecord], clusters: Sequence[PaperCluster]
) -> BipartiteNetwork:
    """Link scientist i to cluster c iff some publication of i belongs to c.

    Multiple records of the same scientist inside one cluster collapse to a
    single edge.  Raises ValueError when a cluster references an id absent
    from the records.
    """
    known = {rec.scientist_id for rec in records}
    cluster_scientists = []
    for cl in clusters:
        ids = sorted({sid for sid, _ in cl.members})
        for sid in ids:
            if sid not in known:
                raise ValueError(
                    f"cluster {cl.cluster_id} references unknown scientist_id {sid!r}"
                )
        cluster_scientists.append(tuple(ids))
    return BipartiteNetwork(records, cluster_scientists)


class CollaborationNetwork:
    """Weighted undirected scientist network (no self-loops, integer weights)."""

    def __init__(
        self,
        node_ids: Sequence[str],
        attrs: Mapping[str, NodeAttrs],
        edge_weights: Mapping[tuple[str, str], int],
    ):
        self.node_ids = list(node_ids)
        self.attrs = dict(attrs)
        adj: dict[str, dict[str, int]] = {i: {} for i in self.node_ids}
        for (i, j), w in edge_weights.items():
            if i == j:
                raise ValueError(f"self-loop on {i!r}")
            if w <= 0:
                raise ValueError(f"non-positive weight {w} on ({i!r}, {j!r})")
            adj[i][j] = adj[i].get(j, 0) + w
            adj[j][i] = adj[j].get(i, 0) + w
        self._adj = {i: sorted(nbrs.items()) for i, nbrs in adj.items()}
        self._n_edges = sum(len(a) for a in self._adj.values()) // 2

    @property
    def n_nodes(self) -> int:
        return len(self.node_ids)

    @property
    def n_edges(self) -> int:
        return self._n_edges

    def has_node(self, i: str) -> bool:
        return i in self._adj

    def neighbors(self, i: str) -> list[tuple[str, int]]:
        """Sorted (neighbor_id, weight) pairs."""
        return self._adj[i]

    def degree(self, i: str) -> int:
        return len(self._adj[i])

    def strength(self, i: str) -> int:
        return sum(w for _, w in self._adj[i])

    def edges(self) -> Iterator[tuple[str, str, int]]:
        """Each undirected edge once, as (i, j, w) with i < j, sorted."""
        for i in sorted(self._adj):
            for j, w in self._adj[i]:
                if i < j:
                    yield i, j, w


def project_tcn(bn: BipartiteNetwork) -> CollaborationNetwork:
    """Project the bipartite network onto scientists; w_ij = shared papers."""
    weights: Counter[tuple[str, str]] = Counter()
    for members in bn.cluster_scientists:
        for pair in combinations(members, 2):  # members sorted, so i < j
            weights[pair] += 1
    attrs = {
        rec.scientist_id: NodeAttrs(
            gender=rec.gender,
            field=primary_field(rec),
            paper_count=bn.papers_per_scientist[rec.scientist_id],
        )
        for rec in bn.records
    }
    return CollaborationNetwork(
        [rec.scientist_id for rec in bn.records], attrs, weights
    )


def giant_component(tcn: CollaborationNetwork) -> tuple[list[str], float]:
    """Largest connected component; ties broken by smallest contained id.

    The fraction is relative to all nodes, including isolated ones.
    """
    if tcn.n_nodes == 0:
        return [], 0.0
    seen: set[str] = set()
    best: list[str] = []
    best_min = ""
    for start in tcn.node_ids:
        if start in seen:
            continue
        comp = [start]
        seen.add(start)
        queue = [start]
        while queue:
            u = queue.pop()
            for v, _ in tcn.neighbors(u):
                if v not in seen:
                    seen.add(v)
                    comp.append(v)
                    queue.append(v)
        comp_min = min(comp)
        if len(comp) > len(best) or (len(comp) == len(best) and comp_min < best_min):
            best = comp
            best_min = comp_min
    return sorted(best), len(best) / tcn.n_nodes


def write_edge_list_csv(tcn: CollaborationNetwork, fp) -> int:
    """CSV edge export: id_i, id_j, weight with i < j; returns edge count."""
    fp.write("id_i,id_j,weight\n")
    n = 0
    for i, j, w in tcn.edges():
        fp.write(f"{i},{j},{w}\n")
        n += 1
    return n
