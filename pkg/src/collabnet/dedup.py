"""Duplicate-publication detection via blocked approximate title matching.

Records are compared only within blocks sharing (year, author_count, first
letter of the normalized title).  Within a block, two records are the same
paper when their optimal-string-alignment (OSA) edit distance is strictly
below ``threshold * max(len_a, len_b)``; equal DOIs force a match and
conflicting DOIs force a non-match regardless of distance.  Matches are
merged by transitive closure, so a cluster may contain pairs that do not
match each other directly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .ingest import PublicationRecord, ScientistRecord, normalize_title

DEFAULT_THRESHOLD = 0.10

# Blocks smaller than this skip the vectorized character-count prefilter;
# plain pair loops are cheaper at that size.
_SMALL_BLOCK = 8

_BAG_BUCKETS = 32


class BlockKey(NamedTuple):
    year: int
    author_count: int
    first_letter: str  # "" sentinel when the normalized title is empty


@dataclass(frozen=True)
class PaperCluster:
    cluster_id: int
    members: tuple[tuple[str, int], ...]  # (scientist_id, publication index)
    year: int
    author_count: int


def block_key(pub: PublicationRecord) -> BlockKey:
    t = normalize_title(pub.title)
    return BlockKey(pub.year, pub.author_count, t[0] if t else "")


def dl_distance(a: str, b: str, cap: int | None = None) -> int:
    """OSA edit distance (insert/delete/substitute/adjacent transposition).

    With ``cap`` set, the computation is banded: the exact distance is
    returned when it is <= cap, otherwise ``cap + 1``.  The band early-exits
    as soon as every reachable cell exceeds the cap (row minima of the DP
    matrix never decrease).
    """
    if a == b:
        return 0
    # An optimal alignment never edits inside a shared affix, so strip it.
    lo = 0
    ha, hb = len(a), len(b)
    while lo < ha and lo < hb and a[lo] == b[lo]:
        lo += 1
    while ha > lo and hb > lo and a[ha - 1] == b[hb - 1]:
        ha -= 1
        hb -= 1
    a = a[lo:ha]
    b = b[lo:hb]
    la, lb = len(a), len(b)
    if cap is None:
        c = la if la > lb else lb  # distance can never exceed max length
    else:
        c = cap
        if abs(la - lb) > c:
            return c + 1
    if la == 0 or lb == 0:
        d = la + lb
        return d if d <= c else c + 1
    inf = c + 1
    prev2: list[int] = []
    prev = [j if j <= c else inf for j in range(lb + 1)]
    for i in range(1, la + 1):
        jlo = i - c if i - c > 1 else 1
        jhi = i + c if i + c < lb else lb
        cur = [inf] * (lb + 1)
        cur[0] = i if i <= c else inf
        best = cur[0]
        ca = a[i - 1]
        for j in range(jlo, jhi + 1):
            cb = b[j - 1]
            if ca == cb:
                # matching along the diagonal is never beaten by another
                # move, and in-band diagonal cells are always exact
                cost = prev[j - 1]
            else:
                cost = prev[j - 1] + 1
                x = prev[j] + 1
                if x < cost:
                    cost = x
                x = cur[j - 1] + 1
                if x < cost:
                    cost = x
                if i > 1 and j > 1 and ca == b[j - 2] and a[i - 2] == cb:
                    x = prev2[j - 2] + 1
                    if x < cost:
                        cost = x
                if cost > inf:
                    cost = inf
            cur[j] = cost
            if cost < best:
                best = cost
        if best > c:
            return inf
        prev2 = prev
        prev = cur
    d = prev[lb]
    return d if d <= c else inf


def _distance_bound(len_a: int, len_b: int, threshold: float) -> float:
    return threshold * (len_a if len_a > len_b else len_b)


def _titles_match(ta: str, tb: str, threshold: float) -> bool:
    bound = _distance_bound(len(ta), len(tb), threshold)
    if bound <= 0:
        return False
    if ta == tb:
        return True
    return dl_distance(ta, tb, cap=int(bound)) < bound


def is_duplicate(
    a: PublicationRecord, b: PublicationRecord, threshold: float = DEFAULT_THRESHOLD
) -> bool:
    """True when a and b refer to the same paper under the blocked rule."""
    if block_key(a) != block_key(b):
        return False
    if a.doi is not None and b.doi is not None:
        return a.doi == b.doi
    return _titles_match(normalize_title(a.title), normalize_title(b.title), threshold)


class _UnionFind:
    __slots__ = ("parent", "size")

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, x: int) -> int:
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, x: int, y: int) -> None:
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return
        if self.size[rx] < self.size[ry]:
            rx, ry = ry, rx
        self.parent[ry] = rx
        self.size[rx] += self.size[ry]


def _char_bags(titles: Sequence[str]) -> np.ndarray:
    """Hashed character multisets; bag distance lower-bounds edit distance."""
    bags = np.zeros((len(titles), _BAG_BUCKETS), dtype=np.int32)
    for i, t in enumerate(titles):
        if t:
            codes = np.frombuffer(t.encode("utf-32-le"), dtype=np.uint32)
            bags[i] = np.bincount(codes % _BAG_BUCKETS, minlength=_BAG_BUCKETS)
    return bags


def cluster_publications(
    pubs: Sequence[PublicationRecord], threshold: float = DEFAULT_THRESHOLD
) -> list[list[int]]:
    """Partition publication indices into duplicate clusters.

    Equivalent to all-pairs ``is_duplicate`` plus transitive closure, but
    organized by block and pruned by a character-count lower bound on the
    edit distance.  Clusters are ordered by first member's input position,
    members by input position.
    """
    n = len(pubs)
    uf = _UnionFind(n)
    titles = [normalize_title(p.title) for p in pubs]
    blocks: dict[BlockKey, list[int]] = {}
    for i, p in enumerate(pubs):
        key = BlockKey(p.year, p.author_count, titles[i][0] if titles[i] else "")
        blocks.setdefault(key, []).append(i)

    bags_all: np.ndarray | None = None
    for key in sorted(blocks):
        idxs = blocks[key]
        m = len(idxs)
        if m < 2:
            continue

        # DOI pass: equal DOIs force a match; both-DOI pairs are settled
        # here and excluded from distance comparison entirely.
        doi_first: dict[str, int] = {}
        has_doi = [pubs[i].doi is not None for i in idxs]
        for local, i in enumerate(idxs):
            doi = pubs[i].doi
            if doi is None:
                continue
            if doi in doi_first:
                uf.union(doi_first[doi], i)
            else:
                doi_first[doi] = i

        lens = [len(titles[i]) for i in idxs]
        if m < _SMALL_BLOCK:
            for p_local in range(m - 1):
                i = idxs[p_local]
                for q_local in range(p_local + 1, m):
                    j = idxs[q_local]
                    if has_doi[p_local] and has_doi[q_local]:
                        continue
                    if uf.find(i) == uf.find(j):
                        continue
                    if _titles_match(titles[i], titles[j], threshold):
                        uf.union(i, j)
            continue

        if bags_all is None:
            bags_all = _char_bags(titles)
        bags = bags_all[idxs]
        lens_arr = np.array(lens, dtype=np.int64)
        doi_arr = np.array(has_doi, dtype=bool)
        for p_local in range(m - 1):
            i = idxs[p_local]
            diff = bags[p_local] - bags[p_local + 1 :]
            pos = np.where(diff > 0, diff, 0).sum(axis=1)
            neg = np.where(diff < 0, -diff, 0).sum(axis=1)
            lower = np.maximum(pos, neg)
            bounds = threshold * np.maximum(lens_arr[p_local], lens_arr[p_local + 1 :])
            cand = np.nonzero(lower < bounds)[0]
            if doi_arr[p_local]:
                cand = cand[~doi_arr[p_local + 1 :][cand]]
            for off in cand:
                j = idxs[p_local + 1 + int(off)]
                if uf.find(i) == uf.find(j):
                    continue
                if _titles_match(titles[i], titles[j], threshold):
                    uf.union(i, j)

    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(uf.find(i), []).append(i)
    clusters = sorted(groups.values(), key=lambda g: g[0])
    return clusters


def cluster_duplicates(
    records: Sequence[ScientistRecord], threshold: float = DEFAULT_THRESHOLD
) -> list[PaperCluster]:
    """Cluster every publication of a corpus; members are (scientist_id, pub index)."""
    flat: list[tuple[str, int]] = []
    pubs: list[PublicationRecord] = []
    for rec in records:
        for k, pub in enumerate(rec.publications):
            flat.append((rec.scientist_id, k))
            pubs.append(pub)
    out = []
    for cid, group in enumerate(cluster_publications(pubs, threshold)):
        first = pubs[group[0]]
        out.append(
            PaperCluster(
                cluster_id=cid,
                members=tuple(flat[i] for i in group),
                year=first.year,
                author_count=first.author_count,
            )
        )
    return out
