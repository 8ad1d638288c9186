"""Homophily and interdisciplinarity metrics over the collaboration network.

The g-ratio of a scientist is the fraction of their collaboration weight
spent on female collaborators; the m-ratio is the fraction spent on
collaborators whose primary field differs from their own.  Collaborators
with unknown gender (resp. unknown field) are excluded from both numerator
and denominator; a ratio with zero denominator is undefined and reported as
None, never as 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import IO, Iterable, Literal

from ._format import fmt, fmt_prob
from .graph import CollaborationNetwork
from .ingest import Gender, MajorField

MetricName = Literal["g_ratio", "m_ratio"]


def g_ratio_parts(tcn: CollaborationNetwork, i: str) -> tuple[int, int]:
    """(weight to women, weight to known-gender neighbors) as exact integers."""
    num = den = 0
    for j, w in tcn.neighbors(i):
        g = tcn.attrs[j].gender
        if g is Gender.FEMALE:
            num += w
            den += w
        elif g is Gender.MALE:
            den += w
    return num, den


def g_ratio(tcn: CollaborationNetwork, i: str) -> float | None:
    num, den = g_ratio_parts(tcn, i)
    return num / den if den else None


def m_ratio_parts(tcn: CollaborationNetwork, i: str) -> tuple[int, int] | None:
    """(cross-field weight, known-field weight), or None when i's field is unknown."""
    own = tcn.attrs[i].field
    if own is None:
        return None
    num = den = 0
    for j, w in tcn.neighbors(i):
        f = tcn.attrs[j].field
        if f is None:
            continue
        den += w
        if f is not own:
            num += w
    return num, den


def m_ratio(tcn: CollaborationNetwork, i: str) -> float | None:
    parts = m_ratio_parts(tcn, i)
    if parts is None:
        return None
    num, den = parts
    return num / den if den else None


def _metric_fn(metric: MetricName):
    if metric == "g_ratio":
        return g_ratio
    if metric == "m_ratio":
        return m_ratio
    raise ValueError(f"unknown metric {metric!r}")


def _mean(values: list[float]) -> float | None:
    return sum(values) / len(values) if values else None


def _mean_se(values: list[float]) -> tuple[float | None, float | None]:
    """Sample mean and standard error (std with ddof=1 over sqrt(n))."""
    n = len(values)
    if n == 0:
        return None, None
    mean = sum(values) / n
    if n < 2:
        return mean, None
    var = sum((v - mean) ** 2 for v in values) / (n - 1)
    return mean, math.sqrt(var) / math.sqrt(n)


@dataclass(frozen=True)
class GenderGroupStats:
    count: int
    mean_collaborators: float | None
    mean_papers: float | None
    mean_m_ratio: float | None
    se_m_ratio: float | None
    mean_g_ratio: float | None


@dataclass(frozen=True)
class FieldStatsRow:
    field: MajorField
    n_scientists: int           # primary field == field, any gender
    tcn_fraction: float         # n_scientists / all nodes
    female_proportion: float | None  # women / known-gender members
    female: GenderGroupStats
    male: GenderGroupStats


def _group_stats(tcn: CollaborationNetwork, ids: list[str]) -> GenderGroupStats:
    degrees = [float(tcn.degree(i)) for i in ids]
    papers = [float(tcn.attrs[i].paper_count) for i in ids]
    m_vals = [v for v in (m_ratio(tcn, i) for i in ids) if v is not None]
    g_vals = [v for v in (g_ratio(tcn, i) for i in ids) if v is not None]
    mean_m, se_m = _mean_se(m_vals)
    return GenderGroupStats(
        count=len(ids),
        mean_collaborators=_mean(degrees),
        mean_papers=_mean(papers),
        mean_m_ratio=mean_m,
        se_m_ratio=se_m,
        mean_g_ratio=_mean(g_vals),
    )


def field_stats(tcn: CollaborationNetwork) -> list[FieldStatsRow]:
    """Per-field composition and per-gender means, one row per major field."""
    by_field: dict[MajorField, dict[Gender, list[str]]] = {
        f: {Gender.FEMALE: [], Gender.MALE: [], Gender.UNKNOWN: []} for f in MajorField
    }
    for i in tcn.node_ids:
        f = tcn.attrs[i].field
        if f is not None:
            by_field[f][tcn.attrs[i].gender].append(i)
    total = tcn.n_nodes
    rows = []
    for f in MajorField:
        groups = by_field[f]
        n_f = len(groups[Gender.FEMALE])
        n_m = len(groups[Gender.MALE])
        n_all = n_f + n_m + len(groups[Gender.UNKNOWN])
        rows.append(
            FieldStatsRow(
                field=f,
                n_scientists=n_all,
                tcn_fraction=n_all / total if total else 0.0,
                female_proportion=n_f / (n_f + n_m) if (n_f + n_m) else None,
                female=_group_stats(tcn, groups[Gender.FEMALE]),
                male=_group_stats(tcn, groups[Gender.MALE]),
            )
        )
    return rows


@dataclass(frozen=True)
class GeometricBins:
    """Geometric degree bins [start*ratio^i, start*ratio^(i+1))."""

    start: float = 1.0
    ratio: float = 2.0

    def __post_init__(self):
        if self.start <= 0 or self.ratio <= 1:
            raise ValueError("bins need start > 0 and ratio > 1")

    def index(self, k: int) -> int:
        if k < self.start:
            return -1
        return int(math.log(k / self.start) / math.log(self.ratio) + 1e-9)

    def edges(self, index: int) -> tuple[float, float]:
        return self.start * self.ratio**index, self.start * self.ratio ** (index + 1)


@dataclass(frozen=True)
class BinnedCurve:
    bin_lo: tuple[float, ...]
    bin_hi: tuple[float, ...]
    mean: tuple[float, ...]
    se: tuple[float | None, ...]  # None when the bin has fewer than 2 points
    count: tuple[int, ...]


def binned_curve(
    tcn: CollaborationNetwork,
    metric: MetricName,
    field: MajorField,
    gender: Gender,
    bins: GeometricBins = GeometricBins(),
) -> BinnedCurve:
    """Mean metric vs degree for one field+gender group; empty bins omitted."""
    fn = _metric_fn(metric)
    per_bin: dict[int, list[float]] = {}
    for i in tcn.node_ids:
        a = tcn.attrs[i]
        if a.field is not field or a.gender is not gender:
            continue
        idx = bins.index(tcn.degree(i))
        if idx < 0:
            continue
        v = fn(tcn, i)
        if v is None:
            continue
        per_bin.setdefault(idx, []).append(v)
    lo, hi, means, ses, counts = [], [], [], [], []
    for idx in sorted(per_bin):
        vals = per_bin[idx]
        mean, se = _mean_se(vals)
        e_lo, e_hi = bins.edges(idx)
        lo.append(e_lo)
        hi.append(e_hi)
        means.append(mean)
        ses.append(se)
        counts.append(len(vals))
    return BinnedCurve(tuple(lo), tuple(hi), tuple(means), tuple(ses), tuple(counts))


def degree_distribution(
    tcn: CollaborationNetwork, gender: Gender | None = None
) -> dict[int, float]:
    """Normalized P(k) over k >= 1; degree-0 nodes are excluded."""
    counts: dict[int, int] = {}
    for i in tcn.node_ids:
        if gender is not None and tcn.attrs[i].gender is not gender:
            continue
        k = tcn.degree(i)
        if k >= 1:
            counts[k] = counts.get(k, 0) + 1
    total = sum(counts.values())
    return {k: c / total for k, c in sorted(counts.items())} if total else {}


def weight_distribution(
    tcn: CollaborationNetwork, gender: Gender | None = None
) -> dict[int, float]:
    """Normalized P(w); an edge counts for a gender when either endpoint has it."""
    counts: dict[int, int] = {}
    for i, j, w in tcn.edges():
        if gender is not None:
            if tcn.attrs[i].gender is not gender and tcn.attrs[j].gender is not gender:
                continue
        counts[w] = counts.get(w, 0) + 1
    total = sum(counts.values())
    return {w: c / total for w, c in sorted(counts.items())} if total else {}


# --- CSV emitters (column orders are part of the interface) ---------------


def write_field_stats_csv(rows: Iterable[FieldStatsRow], fp: IO[str]) -> None:
    fp.write(
        "field,n_scientists,tcn_fraction,female_proportion,"
        "mean_collaborators_female,mean_collaborators_male,"
        "mean_papers_female,mean_papers_male,"
        "mean_m_ratio_female,se_m_ratio_female,"
        "mean_m_ratio_male,se_m_ratio_male,"
        "mean_g_ratio_female,mean_g_ratio_male\n"
    )
    for r in rows:
        cells = [
            r.field.value,
            str(r.n_scientists),
            fmt(r.tcn_fraction),
            fmt(r.female_proportion),
            fmt(r.female.mean_collaborators),
            fmt(r.male.mean_collaborators),
            fmt(r.female.mean_papers),
            fmt(r.male.mean_papers),
            fmt(r.female.mean_m_ratio),
            fmt(r.female.se_m_ratio),
            fmt(r.male.mean_m_ratio),
            fmt(r.male.se_m_ratio),
            fmt(r.female.mean_g_ratio),
            fmt(r.male.mean_g_ratio),
        ]
        fp.write(",".join(cells) + "\n")


def write_binned_curve_csv(curve: BinnedCurve, fp: IO[str], header: bool = True) -> None:
    if header:
        fp.write("bin_lo,bin_hi,mean,se,n\n")
    for lo, hi, mean, se, n in zip(
        curve.bin_lo, curve.bin_hi, curve.mean, curve.se, curve.count
    ):
        fp.write(f"{fmt(lo)},{fmt(hi)},{fmt(mean)},{fmt(se)},{n}\n")


def write_histogram_csv(hist: dict[int, float], fp: IO[str]) -> None:
    fp.write("value,probability\n")
    for v in sorted(hist):
        fp.write(f"{v},{fmt_prob(hist[v])}\n")
