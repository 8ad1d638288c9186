"""Approximate title matching and blocked deduplication, step by step.

Publication lists repeat the same paper once per author, with typos.  Two
records are the same paper when they share year, author count and first
letter, and their edit distance stays under 10% of the longer title.
"""

from collabnet import (
    PublicationRecord,
    block_key,
    cluster_publications,
    dl_distance,
    is_duplicate,
    normalize_title,
)

# --- the distance kernel ----------------------------------------------------
print("edit distances (insert / delete / substitute / adjacent transposition):")
for a, b in [("kitten", "sitting"), ("network", "netwrok"), ("same", "same")]:
    print(f"  d({a!r}, {b!r}) = {dl_distance(a, b)}")

# titles are case-folded and whitespace-collapsed before comparison
raw = "  Weighted   Coauthorship  NETWORKS "
print(f"\nnormalize_title({raw!r}) = {normalize_title(raw)!r}")

# --- the 10% rule -----------------------------------------------------------
t1 = "gender differences in scientific collaboration networks"
t2 = "gender diferences in sceintific collaboration networks"  # two typos
p1 = PublicationRecord(title=t1, year=2015, author_count=3)
p2 = PublicationRecord(title=t2, year=2015, author_count=3)
bound = 0.10 * max(len(t1), len(t2))
print(f"\ndistance between corrupted copies: {dl_distance(t1, t2)} (bound {bound:.1f})")
print("is_duplicate:", is_duplicate(p1, p2))

# same title in a different year is never compared: blocking separates them
p3 = PublicationRecord(title=t1, year=2016, author_count=3)
print("different year:", is_duplicate(p1, p3), "| block keys:",
      block_key(p1), "vs", block_key(p3))

# --- clustering by transitive closure ---------------------------------------
# a~b and b~c are close enough, a~c is not; the cluster still merges all three
a = "abcdefghij" * 2
b = a[:5] + "x" + a[6:]
c = b[:12] + "y" + b[13:]
pubs = [PublicationRecord(title=t, year=2001, author_count=2) for t in (a, b, c)]
print("\npairwise:", is_duplicate(pubs[0], pubs[1]), is_duplicate(pubs[1], pubs[2]),
      is_duplicate(pubs[0], pubs[2]))
print("clusters:", cluster_publications(pubs, threshold=0.10))
