import numpy as np
from hypothesis import given, settings, strategies as st

from collabnet.dedup import (
    BlockKey,
    block_key,
    cluster_duplicates,
    cluster_publications,
    dl_distance,
    is_duplicate,
)
from collabnet.ingest import PublicationRecord, ScientistRecord, Gender

from oracles import brute_force_clusters, osa_distance_reference

short_text = st.text(alphabet="abcde ", max_size=14)


def pub(title, year=2000, n=2, doi=None):
    return PublicationRecord(title=title, year=year, author_count=n, doi=doi)


class TestDistance:
    def test_adjacent_transposition_costs_one(self):
        assert dl_distance("abc", "acb") == 1

    def test_insertions_from_empty(self):
        assert dl_distance("", "xyz") == 3

    def test_kitten_sitting(self):
        # frozen from the full-matrix reference
        assert osa_distance_reference("kitten", "sitting") == 3
        assert dl_distance("kitten", "sitting") == 3

    def test_osa_not_full_damerau(self):
        # OSA edits each substring once: ca -> ac -> abc is not allowed
        assert dl_distance("ca", "abc") == 3

    @given(short_text, short_text)
    def test_matches_reference(self, a, b):
        assert dl_distance(a, b) == osa_distance_reference(a, b)

    @given(short_text, short_text, st.integers(min_value=0, max_value=8))
    def test_capped_variant_is_exact_up_to_cap(self, a, b, cap):
        ref = osa_distance_reference(a, b)
        got = dl_distance(a, b, cap=cap)
        if ref <= cap:
            assert got == ref
        else:
            assert got == cap + 1

    @given(short_text)
    def test_identity(self, a):
        assert dl_distance(a, a) == 0

    @given(short_text, short_text)
    def test_symmetry(self, a, b):
        assert dl_distance(a, b) == dl_distance(b, a)

    @given(short_text, short_text)
    def test_upper_bound(self, a, b):
        if a or b:
            assert dl_distance(a, b) <= max(len(a), len(b))

    @given(short_text, st.integers(min_value=0, max_value=14), st.characters(codec="ascii"))
    def test_single_insertion_costs_exactly_one(self, a, pos, ch):
        # the general "shifts any distance by <= 1" claim is a triangle
        # corollary and OSA breaks the triangle: d(ca,ac)=1 yet d(ca,abc)=3
        pos = min(pos, len(a))
        b = a[:pos] + ch + a[pos:]
        assert dl_distance(a, b) == 1

    def test_triangle_violation_example(self):
        assert dl_distance("ca", "ac") == 1
        assert dl_distance("ac", "abc") == 1
        assert dl_distance("ca", "abc") == 3  # > 1 + 1


class TestIsDuplicate:
    def test_identical_same_block(self):
        assert is_duplicate(pub("some shared title here"), pub("some shared title here"))

    def test_ten_percent_rule_length_40(self):
        a = "a" * 40
        b = "a" * 37 + "bcd"  # distance 3, bound 4.0
        assert dl_distance(a, b) == 3
        assert is_duplicate(pub(a), pub(b))
        c = "a" * 36 + "bcde"  # distance 4 is not < 4.0
        assert not is_duplicate(pub(a), pub(c))

    def test_same_title_different_year_blocks(self):
        assert not is_duplicate(pub("t", year=2001), pub("t", year=2002))

    def test_different_author_count_blocks(self):
        assert not is_duplicate(pub("same title", n=2), pub("same title", n=3))

    def test_different_first_letter_blocks(self):
        assert not is_duplicate(pub("alpha beta gamma"), pub("zlpha beta gamma"))

    def test_equal_dois_force_match(self):
        a = pub("anything really goes here", doi="10.1/x")
        b = pub("a wholly different title!", doi="10.1/x")
        assert is_duplicate(a, b)

    def test_conflicting_dois_force_nonmatch(self):
        a = pub("exactly the same title", doi="10.1/x")
        b = pub("exactly the same title", doi="10.1/y")
        assert not is_duplicate(a, b)

    def test_single_doi_falls_back_to_distance(self):
        a = pub("exactly the same title", doi="10.1/x")
        b = pub("exactly the same title")
        assert is_duplicate(a, b)


class TestBlockKey:
    def test_uses_normalized_first_letter(self):
        assert block_key(pub("  The Paper", year=1999, n=4)) == BlockKey(1999, 4, "t")

    def test_empty_title_sentinel(self):
        assert block_key(pub(" ", year=1999, n=4)).first_letter == ""


def corpus_of(pubs):
    return [
        ScientistRecord(f"s{i}", Gender.UNKNOWN, (), (p,))
        for i, p in enumerate(pubs)
    ]


class TestClustering:
    def test_three_identical_records_one_cluster(self):
        pubs = [pub("an identical title")] * 3
        clusters = cluster_publications(pubs, 0.10)
        assert clusters == [[0, 1, 2]]

    def test_transitive_chain_merges(self):
        # a~b and b~c under the bound, a~c over it: one cluster by closure
        a = "abcdefghij" * 2
        b = a[:5] + "x" + a[6:]
        c = b[:12] + "y" + b[13:]
        assert dl_distance(a, b) == 1 and dl_distance(b, c) == 1
        assert dl_distance(a, c) == 2  # bound for len 20 is 2.0, so a !~ c
        assert is_duplicate(pub(a), pub(b)) and is_duplicate(pub(b), pub(c))
        assert not is_duplicate(pub(a), pub(c))
        got = cluster_publications([pub(a), pub(b), pub(c)], 0.10)
        assert got == [[0, 1, 2]]
        assert brute_force_clusters([pub(a), pub(b), pub(c)], 0.10) == [[0, 1, 2]]

    def test_different_years_stay_apart(self):
        clusters = cluster_publications([pub("t", year=2000), pub("t", year=2001)], 0.10)
        assert clusters == [[0], [1]]

    def test_cluster_records_members(self):
        records = [
            ScientistRecord("a", Gender.FEMALE, (), (pub("one title here"), pub("unrelated thing"))),
            ScientistRecord("b", Gender.MALE, (), (pub("one title here"),)),
        ]
        clusters = cluster_duplicates(records, 0.10)
        assert [c.members for c in clusters] == [
            (("a", 0), ("b", 0)),
            (("a", 1),),
        ]
        assert clusters[0].cluster_id == 0
        assert clusters[0].year == 2000 and clusters[0].author_count == 2


@st.composite
def random_corpus(draw):
    n_bases = draw(st.integers(min_value=1, max_value=6))
    rng = np.random.default_rng(draw(st.integers(min_value=0, max_value=2**31)))
    bases = []
    for _ in range(n_bases):
        length = int(rng.integers(12, 30))
        title = "".join("abcd"[int(c)] for c in rng.integers(0, 4, length))
        year = int(rng.integers(2000, 2003))
        bases.append((title, year, int(rng.integers(1, 3))))
    pubs = []
    for title, year, n_auth in bases:
        for _ in range(int(rng.integers(1, 4))):
            t = list(title)
            for _ in range(int(rng.integers(0, 3))):
                p = int(rng.integers(1, len(t)))
                t[p] = "abcd"[int(rng.integers(0, 4))]
            pubs.append(pub("".join(t), year=year, n=n_auth))
    return pubs


@settings(max_examples=40, deadline=None)
@given(random_corpus(), st.sampled_from([0.05, 0.10, 0.20]))
def test_blocked_equals_brute_force(pubs, threshold):
    assert cluster_publications(pubs, threshold) == brute_force_clusters(pubs, threshold)


@settings(max_examples=40, deadline=None)
@given(random_corpus())
def test_partition_and_block_purity(pubs):
    clusters = cluster_publications(pubs, 0.10)
    seen = sorted(i for c in clusters for i in c)
    assert seen == list(range(len(pubs)))
    for cluster in clusters:
        keys = {block_key(pubs[i]) for i in cluster}
        assert len(keys) == 1


@settings(max_examples=25, deadline=None)
@given(random_corpus())
def test_threshold_monotonicity(pubs):
    # clusters at a lower threshold refine clusters at a higher one
    fine = cluster_publications(pubs, 0.05)
    coarse = cluster_publications(pubs, 0.20)
    coarse_of = {}
    for cid, cluster in enumerate(coarse):
        for i in cluster:
            coarse_of[i] = cid
    for cluster in fine:
        assert len({coarse_of[i] for i in cluster}) == 1


def test_doi_groups_merge_within_block():
    # same block (year, author count, first letter), wildly different titles
    pubs = [
        pub("totally unrelated words one", doi="10.1/z"),
        pub("the second, distinct title!", doi="10.1/z"),
        pub("third text with no relation", doi="10.1/z"),
    ]
    assert cluster_publications(pubs, 0.10) == [[0, 1, 2]]
    assert brute_force_clusters(pubs, 0.10) == [[0, 1, 2]]


def test_doi_only_applies_within_block():
    # equal DOIs in different years never merge (block purity wins)
    pubs = [pub("same title", year=2000, doi="10.1/z"),
            pub("same title", year=2001, doi="10.1/z")]
    assert cluster_publications(pubs, 0.10) == [[0], [1]]
