import io
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from collabnet.graph import CollaborationNetwork, NodeAttrs
from collabnet.ingest import Gender, MajorField
from collabnet.metrics import (
    GeometricBins,
    binned_curve,
    degree_distribution,
    field_stats,
    g_ratio,
    g_ratio_parts,
    m_ratio,
    m_ratio_parts,
    weight_distribution,
    write_binned_curve_csv,
    write_field_stats_csv,
    write_histogram_csv,
)

from oracles import edge_list_metrics, random_network

F, M, U = Gender.FEMALE, Gender.MALE, Gender.UNKNOWN


def net(nodes, edges):
    """nodes: {id: (gender, field)}; edges: {(i, j): w}"""
    attrs = {i: NodeAttrs(g, f, 0) for i, (g, f) in nodes.items()}
    return CollaborationNetwork(list(nodes), attrs, edges)


class TestGRatio:
    def test_mixed_neighbors(self):
        n = net(
            {"i": (M, None), "w": (F, None), "m": (M, None)},
            {("i", "w"): 2, ("i", "m"): 3},
        )
        assert g_ratio(n, "i") == pytest.approx(0.4)
        assert g_ratio_parts(n, "i") == (2, 5)

    def test_all_female_neighbors(self):
        n = net({"i": (M, None), "a": (F, None), "b": (F, None)},
                {("i", "a"): 1, ("i", "b"): 4})
        assert g_ratio(n, "i") == 1.0

    def test_only_unknown_neighbors_undefined(self):
        n = net({"i": (M, None), "x": (U, None)}, {("i", "x"): 3})
        assert g_ratio(n, "i") is None

    def test_isolated_undefined(self):
        n = net({"i": (M, None)}, {})
        assert g_ratio(n, "i") is None

    def test_unknown_excluded_from_both_sums(self):
        n = net(
            {"i": (M, None), "w": (F, None), "x": (U, None)},
            {("i", "w"): 1, ("i", "x"): 10},
        )
        assert g_ratio(n, "i") == 1.0


class TestMRatio:
    def test_cross_field_share(self):
        n = net(
            {"i": (M, MajorField.BIO), "a": (M, MajorField.BIO), "b": (F, MajorField.EXA)},
            {("i", "a"): 3, ("i", "b"): 1},
        )
        assert m_ratio(n, "i") == pytest.approx(0.25)
        assert m_ratio_parts(n, "i") == (1, 4)

    def test_same_field_everywhere(self):
        n = net(
            {"i": (M, MajorField.HEA), "a": (F, MajorField.HEA)},
            {("i", "a"): 2},
        )
        assert m_ratio(n, "i") == 0.0

    def test_own_field_unknown_undefined(self):
        n = net({"i": (M, None), "a": (F, MajorField.HEA)}, {("i", "a"): 2})
        assert m_ratio(n, "i") is None
        assert m_ratio_parts(n, "i") is None

    def test_unknown_field_neighbors_excluded(self):
        n = net(
            {"i": (M, MajorField.BIO), "a": (F, None), "b": (M, MajorField.SOC)},
            {("i", "a"): 9, ("i", "b"): 1},
        )
        assert m_ratio(n, "i") == 1.0


class TestFieldStats:
    def test_single_member_means(self):
        nodes = {"w": (F, MajorField.AGR)}
        nodes.update({f"x{i}": (M, MajorField.AGR) for i in range(4)})
        edges = {("w", f"x{i}"): 1 for i in range(4)}
        n = net(nodes, edges)
        n.attrs["w"] = NodeAttrs(F, MajorField.AGR, 10)
        rows = {r.field: r for r in field_stats(n)}
        agr = rows[MajorField.AGR]
        assert agr.female.count == 1
        assert agr.female.mean_collaborators == 4.0
        assert agr.female.mean_papers == 10.0
        assert agr.female_proportion == 1 / 5

    def test_empty_field_row(self):
        n = net({"a": (F, MajorField.BIO)}, {})
        rows = {r.field: r for r in field_stats(n)}
        lin = rows[MajorField.LIN]
        assert lin.n_scientists == 0
        assert lin.female_proportion is None
        assert lin.female.mean_collaborators is None

    def test_tcn_fraction_counts_all_nodes(self):
        n = net({"a": (F, MajorField.BIO), "b": (M, None)}, {})
        rows = {r.field: r for r in field_stats(n)}
        assert rows[MajorField.BIO].tcn_fraction == 0.5


class TestBinnedCurve:
    def test_two_point_bin_statistics(self):
        # two BIO women in one degree bin with g values 0.2 and 0.4
        n = net(
            {"a": (F, MajorField.BIO), "b": (F, MajorField.BIO),
             "f1": (F, None), "m1": (M, None), "f2": (F, None), "m2": (M, None)},
            {("a", "f1"): 1, ("a", "m1"): 4, ("b", "f2"): 2, ("b", "m2"): 3},
        )
        assert g_ratio(n, "a") == pytest.approx(0.2)
        assert g_ratio(n, "b") == pytest.approx(0.4)
        curve = binned_curve(n, "g_ratio", MajorField.BIO, F, GeometricBins(1.0, 4.0))
        assert curve.count == (2,)
        assert curve.mean[0] == pytest.approx(0.3)
        # SE = sample std / sqrt(n) = 0.1414.. / 1.414.. = 0.1 exactly
        assert curve.se[0] == pytest.approx(0.1)

    def test_empty_bins_omitted_and_singletons_have_no_se(self):
        n = net(
            {"a": (F, MajorField.BIO), "f1": (F, None)},
            {("a", "f1"): 1},
        )
        curve = binned_curve(n, "g_ratio", MajorField.BIO, F, GeometricBins(1.0, 2.0))
        assert curve.count == (1,)
        assert curve.se == (None,)

    def test_undefined_metric_scientists_skipped(self):
        n = net(
            {"a": (F, MajorField.BIO), "x": (U, None)},
            {("a", "x"): 1},
        )
        curve = binned_curve(n, "g_ratio", MajorField.BIO, F, GeometricBins(1.0, 2.0))
        assert curve.count == ()


class TestDistributions:
    def test_point_mass_degree(self):
        n = net(
            {"a": (F, None), "b": (M, None), "c": (F, None)},
            {("a", "b"): 1, ("b", "c"): 1, ("a", "c"): 1},
        )
        assert degree_distribution(n) == {2: 1.0}

    def test_degree_zero_excluded(self):
        n = net({"a": (F, None), "b": (M, None), "c": (F, None)}, {("a", "b"): 1})
        assert degree_distribution(n) == {1: 1.0}

    def test_mixed_edge_counts_for_both_genders(self):
        n = net({"a": (M, None), "b": (F, None)}, {("a", "b"): 5})
        assert weight_distribution(n, M) == {5: 1.0}
        assert weight_distribution(n, F) == {5: 1.0}

    def test_same_gender_edge_counts_once_for_that_gender(self):
        n = net({"a": (M, None), "b": (M, None), "c": (F, None)},
                {("a", "b"): 2, ("b", "c"): 7})
        assert weight_distribution(n, M) == {2: 0.5, 7: 0.5}
        assert weight_distribution(n, F) == {7: 1.0}

    @settings(max_examples=40, deadline=None)
    @given(st.integers(min_value=0, max_value=10**6))
    def test_histograms_normalized(self, seed):
        rng = np.random.default_rng(seed)
        network, _, _, edges = random_network(rng, max_nodes=40)
        for gender in (None, F, M):
            for hist in (degree_distribution(network, gender),
                         weight_distribution(network, gender)):
                if hist:
                    assert abs(sum(hist.values()) - 1.0) < 1e-9


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=0, max_value=10**6))
def test_metrics_match_edge_list_oracle(seed):
    rng = np.random.default_rng(seed)
    network, gender_map, field_map, edges = random_network(rng)
    ref_g, ref_m = edge_list_metrics(gender_map, field_map, edges)
    for node in network.node_ids:
        got_g, got_m = g_ratio(network, node), m_ratio(network, node)
        assert (got_g is None) == (ref_g[node] is None)
        if got_g is not None:
            assert abs(got_g - ref_g[node]) < 1e-12
            assert 0.0 <= got_g <= 1.0
        assert (got_m is None) == (ref_m[node] is None)
        if got_m is not None:
            assert abs(got_m - ref_m[node]) < 1e-12
            assert 0.0 <= got_m <= 1.0


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=0, max_value=10**6))
def test_weighted_sum_identity_exact(seed):
    rng = np.random.default_rng(seed)
    network, gender_map, _, edges = random_network(rng)
    w_mf = sum(
        w for (i, j), w in edges.items()
        if {gender_map[i], gender_map[j]} == {F, M}
    )
    w_ff = sum(
        w for (i, j), w in edges.items()
        if gender_map[i] is F and gender_map[j] is F
    )
    men_sum = Fraction(0)
    women_sum = Fraction(0)
    for node in network.node_ids:
        num, den = g_ratio_parts(network, node)
        if den == 0:
            continue
        term = Fraction(den) * Fraction(num, den)  # strength' * g, exact
        if gender_map[node] is M:
            men_sum += term
        elif gender_map[node] is F:
            women_sum += term
    assert men_sum == w_mf
    assert women_sum == 2 * w_ff


def test_all_known_female_network_has_unit_g():
    rng = np.random.default_rng(5)
    ids = [f"n{i}" for i in range(12)]
    genders = {i: (F if rng.random() < 0.7 else U) for i in ids}
    edges = {}
    for a in range(len(ids)):
        for b in range(a + 1, len(ids)):
            if rng.random() < 0.4:
                edges[(ids[a], ids[b])] = int(rng.integers(1, 4))
    network = CollaborationNetwork(
        ids, {i: NodeAttrs(genders[i], None, 0) for i in ids}, edges
    )
    defined = [g_ratio(network, i) for i in ids]
    assert any(v is not None for v in defined)
    assert all(v == 1.0 for v in defined if v is not None)


class TestEmitters:
    def test_histogram_csv(self):
        buf = io.StringIO()
        write_histogram_csv({2: 0.25, 1: 0.75}, buf)
        assert buf.getvalue() == "value,probability\n1,0.75\n2,0.25\n"

    def test_field_stats_csv_columns(self):
        n = net({"a": (F, MajorField.BIO)}, {})
        buf = io.StringIO()
        write_field_stats_csv(field_stats(n), buf)
        header = buf.getvalue().splitlines()[0]
        assert header.split(",") == [
            "field", "n_scientists", "tcn_fraction", "female_proportion",
            "mean_collaborators_female", "mean_collaborators_male",
            "mean_papers_female", "mean_papers_male",
            "mean_m_ratio_female", "se_m_ratio_female",
            "mean_m_ratio_male", "se_m_ratio_male",
            "mean_g_ratio_female", "mean_g_ratio_male",
        ]
        assert len(buf.getvalue().splitlines()) == 9  # header + 8 fields

    def test_binned_curve_csv(self):
        n = net(
            {"a": (F, MajorField.BIO), "f1": (F, None)},
            {("a", "f1"): 1},
        )
        curve = binned_curve(n, "g_ratio", MajorField.BIO, F, GeometricBins(1.0, 2.0))
        buf = io.StringIO()
        write_binned_curve_csv(curve, buf)
        assert buf.getvalue() == "bin_lo,bin_hi,mean,se,n\n1,2,1,,1\n"
