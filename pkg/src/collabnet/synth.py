"""Synthetic corpora with planted ground truth.

The generator plants three things the pipeline must recover: which
publication records are copies of the same paper (clusters), which
scientist pairs collaborated and how often (edges and weights), and the
statistical makeup of the population (gender and field proportions, a
heavy-tailed collaborator-count model, gender homophily, field mixing).

Mechanism: every scientist draws a target collaborator count from the
truncated power law.  Papers are formed by drawing a lead author weighted
by remaining collaborator slots and filling the other slots one by one: a
slot keeps the lead's gender with probability ``homophily`` and flips it
otherwise, and keeps the lead's field with probability ``1 - interdisc``.
Each team member receives a typo-corrupted copy of the paper's title.

Analytic expectations of the planted metrics (documented because tests
rely on them): with two-author teams every collaboration is same-gender
with probability h = ``homophily``, so the expected g-ratio is h for women
and 1 - h for men, and the population mean is p_f*h + (1-p_f)*(1-h) for a
female share p_f.  At h = 0.5 with a 50/50 population every collaborator
is female with probability 1/2 independently of everything else, a result
that also holds for larger teams (member genders become iid coin flips);
away from that point, teams of three or more dilute homophily because
coauthor-coauthor edges are not directly h-controlled.  The same caveat
applies to ``interdisc`` and the m-ratio.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from typing import IO, Mapping, Sequence

import numpy as np

from .dedup import PaperCluster
from .ingest import (
    Gender,
    MajorField,
    PublicationRecord,
    ScientistRecord,
)

# Field sizes and female shares of the real collaboration network, used as
# population defaults.
FIELD_SCIENTIST_COUNTS: dict[MajorField, int] = {
    MajorField.AGR: 31812,
    MajorField.BIO: 39767,
    MajorField.HEA: 67561,
    MajorField.EXA: 33310,
    MajorField.HUM: 26263,
    MajorField.SOC: 20806,
    MajorField.ENG: 18365,
    MajorField.LIN: 5202,
}

FEMALE_PROPORTIONS: dict[MajorField, float] = {
    MajorField.AGR: 0.444,
    MajorField.BIO: 0.601,
    MajorField.HEA: 0.598,
    MajorField.EXA: 0.347,
    MajorField.HUM: 0.651,
    MajorField.SOC: 0.473,
    MajorField.ENG: 0.272,
    MajorField.LIN: 0.716,
}

_TOTAL = sum(FIELD_SCIENTIST_COUNTS.values())
FIELD_PROPORTIONS: dict[MajorField, float] = {
    f: c / _TOTAL for f, c in FIELD_SCIENTIST_COUNTS.items()
}

_ALPHABET = "abcdefghijklmnopqrstuvwxyz"

# Minimum gap between edit positions within one title.  Keeps edit regions
# disjoint so the corrupted title stays within `edits` OSA operations of
# the original, and two independently corrupted copies stay within the sum.
_EDIT_GAP = 3


@dataclass(frozen=True)
class SynthConfig:
    n_scientists: int = 10000
    n_papers: int | None = None  # None: run until collaborator slots are used up
    homophily: float = 0.65
    interdisc: float = 0.30
    degree_alpha: float = 1.53
    degree_beta: float = 85.4
    typo_rate: float = 0.02
    seed: int = 42
    field_proportions: Mapping[MajorField, float] = dc_field(
        default_factory=lambda: dict(FIELD_PROPORTIONS)
    )
    female_proportions: Mapping[MajorField, float] = dc_field(
        default_factory=lambda: dict(FEMALE_PROPORTIONS)
    )
    team_sizes: tuple[tuple[int, float], ...] = ((2, 1.0),)
    year_range: tuple[int, int] = (1992, 2011)
    # Two independently corrupted copies of one title sit within 2*ceil(r*L)
    # edits of each other, so recall is certain only when that stays under
    # the 10% bound with a safety margin.  The default range is safe for
    # typo rates up to ~0.025; corpora at rate 0.04 need lengths in
    # [188, 200] (the margin condition is 0.1*L - 2.1*ceil(r*L) >= 2).
    title_length: tuple[int, int] = (85, 115)
    doi_rate: float = 0.0
    unknown_gender_rate: float = 0.0
    unknown_field_rate: float = 0.0
    extra_field_rate: float = 0.25
    allow_first_char_typos: bool = False

    def validate(self) -> None:
        if self.n_scientists < 1:
            raise ValueError("n_scientists must be >= 1")
        if self.n_papers is not None and self.n_papers < 0:
            raise ValueError("n_papers must be >= 0")
        for name in ("homophily", "interdisc", "typo_rate", "doi_rate",
                     "unknown_gender_rate", "unknown_field_rate", "extra_field_rate"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {v}")
        if self.degree_alpha <= 0 or self.degree_beta <= 0:
            raise ValueError("degree model parameters must be positive")
        total = sum(self.field_proportions.values())
        if not math.isclose(total, 1.0, abs_tol=1e-6):
            raise ValueError(f"field proportions must sum to 1, got {total}")
        for f, p in self.female_proportions.items():
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"female proportion for {f} must be in [0, 1]")
        if not self.team_sizes:
            raise ValueError("team_sizes must be non-empty")
        psum = 0.0
        for size, prob in self.team_sizes:
            if size < 1:
                raise ValueError("team sizes must be >= 1")
            if size > self.n_scientists:
                raise ValueError(
                    f"team size {size} exceeds population {self.n_scientists}"
                )
            psum += prob
        if not math.isclose(psum, 1.0, abs_tol=1e-6):
            raise ValueError("team size probabilities must sum to 1")
        if self.year_range[0] > self.year_range[1]:
            raise ValueError("empty year range")
        if not (2 <= self.title_length[0] <= self.title_length[1]):
            raise ValueError("invalid title length range")


@dataclass(frozen=True)
class SyntheticCorpus:
    records: list[ScientistRecord]
    # (scientist_id, publication index) -> planted paper id
    true_clusters: dict[tuple[str, int], int]
    # (id_i, id_j) with i < j -> planted collaboration weight
    true_edges: dict[tuple[str, str], int]

    @property
    def n_papers(self) -> int:
        return len(set(self.true_clusters.values()))


def _edit_count(rate: float, length: int) -> int:
    # ceil(rate * length) computed so exact products do not round up
    return max(0, math.ceil(rate * length - 1e-9)) if rate > 0 else 0


def _pick_positions(rng: np.random.Generator, length: int, n_edits: int,
                    start: int) -> list[int]:
    hi = length - 2  # transpositions need position + 1 in range
    candidates = np.arange(start, hi + 1)
    if len(candidates) == 0 or n_edits == 0:
        return []
    order = rng.permutation(candidates)
    chosen: list[int] = []
    for p in order:
        p = int(p)
        if all(abs(p - q) >= _EDIT_GAP for q in chosen):
            chosen.append(p)
            if len(chosen) == n_edits:
                break
    return sorted(chosen, reverse=True)


def _inject_typos_rng(
    title: str, rate: float, rng: np.random.Generator, allow_first: bool = False
) -> str:
    n_edits = _edit_count(rate, len(title))
    if n_edits == 0:
        return title
    start = 0 if allow_first else 1
    positions = _pick_positions(rng, len(title), n_edits, start)
    chars = list(title)
    for p in positions:  # right to left, so earlier positions stay valid
        op = int(rng.integers(4))
        if op == 0:  # substitute
            cur = chars[p]
            repl = _ALPHABET[int(rng.integers(len(_ALPHABET)))]
            if repl == cur:
                repl = _ALPHABET[(_ALPHABET.index(repl) + 1) % len(_ALPHABET)]
            chars[p] = repl
        elif op == 1:  # delete
            del chars[p]
        elif op == 2:  # insert
            chars.insert(p, _ALPHABET[int(rng.integers(len(_ALPHABET)))])
        else:  # adjacent transposition
            chars[p], chars[p + 1] = chars[p + 1], chars[p]
    return "".join(chars)


def inject_typos(
    title: str, rate: float, seed: int, allow_first_char: bool = False
) -> str:
    """Apply ceil(rate * len) single-character edits, reproducibly.

    Edit positions are kept pairwise separated, which guarantees the OSA
    distance to the original never exceeds the edit count.  The first
    character is preserved unless ``allow_first_char`` is set, so blocking
    by first letter survives corruption.  At extreme rates (above ~1/3)
    fewer edits may fit while preserving the distance guarantee.
    """
    if not 0.0 <= rate <= 1.0:
        raise ValueError(f"rate must be in [0, 1], got {rate}")
    return _inject_typos_rng(title, rate, np.random.default_rng(seed), allow_first_char)


def _random_title(rng: np.random.Generator, lo: int, hi: int) -> str:
    # already in normalized form (lowercase, single spaces, no edge spaces),
    # so raw and normalized lengths agree and the distance-bound margin
    # analysis in SynthConfig holds exactly
    target = int(rng.integers(lo, hi + 1))
    codes = rng.integers(0, 26, size=target) + ord("a")
    buf = bytearray(codes.astype(np.uint8).tobytes())
    last = -2
    for p in np.nonzero(rng.random(target) < 0.15)[0]:
        p = int(p)
        if 2 <= p <= target - 2 and p - last >= 2:
            buf[p] = 0x20
            last = p
    return buf.decode("ascii")


class _StubStacks:
    """Lazily-consumed stacks of collaborator slots, grouped for targeting.

    Every scientist appears in four stacks (all, by gender, by field, by
    gender+field) once per target slot; ``remaining`` is the single source
    of truth and stale entries are skipped on pop.
    """

    def __init__(self, rng, genders, fields, targets):
        self.remaining = np.array(targets, dtype=np.int64)
        self.rng = rng
        self.all: list[int] = []
        self.by_g: dict[Gender, list[int]] = {}
        self.by_f: dict[MajorField | None, list[int]] = {}
        self.by_gf: dict[tuple[Gender, MajorField | None], list[int]] = {}
        order = []
        for i, k in enumerate(targets):
            order.extend([i] * k)
        arr = np.array(order, dtype=np.int64)
        self.rng.shuffle(arr)
        for i in arr:
            i = int(i)
            g, f = genders[i], fields[i]
            self.all.append(i)
            self.by_g.setdefault(g, []).append(i)
            self.by_f.setdefault(f, []).append(i)
            self.by_gf.setdefault((g, f), []).append(i)

    def pop(self, stack: list[int], exclude: set[int]) -> int | None:
        holdback: list[int] = []
        found = None
        while stack:
            i = stack.pop()
            if self.remaining[i] <= 0:
                continue
            if i in exclude:
                holdback.append(i)
                continue
            found = i
            break
        stack.extend(reversed(holdback))
        return found


def _sample_degree_targets(rng, alpha, beta, n) -> list[int]:
    # same rejection scheme as fit.sample_truncated_power_law, driven by the
    # corpus generator's own stream
    out: list[int] = []
    while len(out) < n:
        batch = max(4096, 2 * (n - len(out)))
        if alpha > 1:
            k = rng.zipf(alpha, size=batch)
            u = rng.random(batch)
            ok = u < np.exp(-(k - 1) / beta)
        else:
            p = -math.expm1(-1.0 / beta)
            k = rng.geometric(p, size=batch)
            u = rng.random(batch)
            ok = u < k ** (-alpha)
        out.extend(int(v) for v in k[ok][: n - len(out)])
    return out


def generate_corpus(config: SynthConfig) -> SyntheticCorpus:
    """Build a corpus with known clusters, edges, and population structure."""
    config.validate()
    rng = np.random.default_rng(config.seed)
    n = config.n_scientists
    ids = [f"s{i:06d}" for i in range(n)]

    field_list = list(MajorField)
    fprobs = np.array([config.field_proportions[f] for f in field_list])
    fprobs = fprobs / fprobs.sum()
    primary_idx = rng.choice(len(field_list), size=n, p=fprobs)

    fields: list[MajorField | None] = []
    all_fields: list[tuple[MajorField, ...]] = []
    for i in range(n):
        if config.unknown_field_rate > 0 and rng.random() < config.unknown_field_rate:
            fields.append(None)
            all_fields.append(())
            continue
        primary = field_list[int(primary_idx[i])]
        declared = [primary]
        while len(declared) < 3 and rng.random() < config.extra_field_rate:
            extra = field_list[int(rng.integers(len(field_list)))]
            if extra not in declared:
                declared.append(extra)
        fields.append(primary)
        all_fields.append(tuple(declared))

    pop_female = float(
        sum(config.field_proportions[f] * config.female_proportions[f]
            for f in field_list)
    )
    targets = _sample_degree_targets(rng, config.degree_alpha, config.degree_beta, n)

    # Gender assignment is dithered down each field's degree-sorted member
    # list instead of drawn iid: collaborator counts are heavy-tailed, so a
    # handful of hub scientists drawn the same gender would swing the
    # slot-weighted gender share by whole percents, and the mean g-ratio is
    # pinned to that share no matter how partners are matched.  Dithering
    # keeps every prefix of the list (hence the slot-weighted share) within
    # one scientist of the planted proportion.
    genders: list[Gender] = [Gender.UNKNOWN] * n
    unknown = np.zeros(n, dtype=bool)
    if config.unknown_gender_rate > 0:
        unknown = rng.random(n) < config.unknown_gender_rate
    groups: dict[MajorField | None, list[int]] = {}
    for i in range(n):
        if not unknown[i]:
            groups.setdefault(fields[i], []).append(i)
    for field_key in sorted(groups, key=lambda f: f.value if f else ""):
        members = sorted(groups[field_key], key=lambda i: (-targets[i], i))
        p_f = (
            config.female_proportions[field_key]
            if field_key is not None
            else pop_female
        )
        err = float(rng.random())
        for i in members:
            err += p_f
            if err >= 1.0:
                genders[i] = Gender.FEMALE
                err -= 1.0
            else:
                genders[i] = Gender.MALE

    stacks = _StubStacks(rng, genders, fields, targets)

    sizes = np.array([s for s, _ in config.team_sizes])
    size_probs = np.array([p for _, p in config.team_sizes])
    size_probs = size_probs / size_probs.sum()

    other_field_probs: dict[MajorField, np.ndarray] = {}
    for f in field_list:
        w = np.array(
            [config.field_proportions[g] if g is not f else 0.0 for g in field_list]
        )
        s = w.sum()
        other_field_probs[f] = w / s if s > 0 else np.full(len(field_list), 1 / 8)

    pubs: list[list[PublicationRecord]] = [[] for _ in range(n)]
    true_clusters: dict[tuple[str, int], int] = {}
    true_edges: dict[tuple[str, str], int] = {}

    def pick_partner(lead: int, team: set[int]) -> int | None:
        """One collaborator slot; returns None only on pool exhaustion.

        The gender drawn for the slot is never crossed: honoring it exactly
        is what makes the planted homophily law hold (surplus stubs of one
        gender would otherwise pair among themselves at the end of a run
        and bias every g-ratio).  The field intent may fall back to any
        field of the wanted gender, slightly diluting the mixing parameter
        when a small gender+field pool runs dry.
        """
        lead_g, lead_f = genders[lead], fields[lead]
        if lead_g is Gender.UNKNOWN:
            want_g = None
        elif rng.random() < config.homophily:
            want_g = lead_g
        else:
            want_g = Gender.MALE if lead_g is Gender.FEMALE else Gender.FEMALE
        if lead_f is None:
            want_f = None
        elif rng.random() < config.interdisc:
            probs = other_field_probs[lead_f]
            want_f = field_list[int(rng.choice(len(field_list), p=probs))]
        else:
            want_f = lead_f
        attempts: list[list[int]] = []
        if want_g is None:
            if want_f is not None:
                attempts.append(stacks.by_f.setdefault(want_f, []))
            attempts.append(stacks.all)
        else:
            if want_f is not None:
                attempts.append(stacks.by_gf.setdefault((want_g, want_f), []))
            attempts.append(stacks.by_g.setdefault(want_g, []))
        for stack in attempts:
            got = stacks.pop(stack, team)
            if got is not None:
                return got
        return None

    made = 0
    just_replenished = False
    paper_meta: list[tuple[int, str, str | None, tuple[int, ...]]] = []
    while config.n_papers is None or made < config.n_papers:
        lead = stacks.pop(stacks.all, set())
        if lead is None:
            if config.n_papers is None or just_replenished:
                break
            # slots exhausted before the requested paper count: replenish
            stacks = _StubStacks(rng, genders, fields, targets)
            just_replenished = True
            lead = stacks.pop(stacks.all, set())
            if lead is None:
                break
        s = int(sizes[int(rng.choice(len(sizes), p=size_probs))])
        team = [lead]
        team_set = {lead}
        exhausted = False
        while len(team) < s:
            partner = pick_partner(lead, team_set)
            if partner is None:
                exhausted = True
                break
            team.append(partner)
            team_set.add(partner)
        if len(team) < 2 and s >= 2:
            # a wanted pool ran dry before any pair formed; filling the slot
            # from another gender would bias the planted mixing laws
            if config.n_papers is None or just_replenished:
                break
            stacks = _StubStacks(rng, genders, fields, targets)
            just_replenished = True
            continue
        just_replenished = False
        cost = len(team) - 1
        for member in team:
            stacks.remaining[member] = max(0, stacks.remaining[member] - max(cost, 1))

        year = int(rng.integers(config.year_range[0], config.year_range[1] + 1))
        title = _random_title(rng, *config.title_length)
        doi = f"10.5555/p{made}" if (
            config.doi_rate > 0 and rng.random() < config.doi_rate
        ) else None
        paper_meta.append((year, title, doi, tuple(team)))
        for a in range(len(team)):
            for b in range(a + 1, len(team)):
                i, j = ids[team[a]], ids[team[b]]
                key = (i, j) if i < j else (j, i)
                true_edges[key] = true_edges.get(key, 0) + 1
        made += 1
        if exhausted:
            if config.n_papers is None:
                break
            stacks = _StubStacks(rng, genders, fields, targets)
            just_replenished = True

    for paper_id, (year, title, doi, team) in enumerate(paper_meta):
        for member in team:
            corrupted = _inject_typos_rng(
                title, config.typo_rate, rng, config.allow_first_char_typos
            )
            pub = PublicationRecord(
                title=corrupted, year=year, author_count=len(team), doi=doi
            )
            true_clusters[(ids[member], len(pubs[member]))] = paper_id
            pubs[member].append(pub)

    records = [
        ScientistRecord(
            scientist_id=ids[i],
            gender=genders[i],
            fields=all_fields[i],
            publications=tuple(pubs[i]),
        )
        for i in range(n)
    ]
    return SyntheticCorpus(records, true_clusters, true_edges)


def pairwise_precision_recall(
    clusters: Sequence[PaperCluster], true_labels: Mapping[tuple[str, int], int]
) -> tuple[float, float]:
    """Pair-level precision and recall of a clustering vs planted labels."""
    true_sizes: dict[int, int] = {}
    for label in true_labels.values():
        true_sizes[label] = true_sizes.get(label, 0) + 1
    true_pairs = sum(c * (c - 1) // 2 for c in true_sizes.values())
    pred_pairs = 0
    hit_pairs = 0
    for cl in clusters:
        m = len(cl.members)
        pred_pairs += m * (m - 1) // 2
        counts: dict[int, int] = {}
        for member in cl.members:
            label = true_labels[member]
            counts[label] = counts.get(label, 0) + 1
        hit_pairs += sum(c * (c - 1) // 2 for c in counts.values())
    precision = hit_pairs / pred_pairs if pred_pairs else 1.0
    recall = hit_pairs / true_pairs if true_pairs else 1.0
    return precision, recall


def write_truth_csv(corpus: SyntheticCorpus, clusters_fp: IO[str], edges_fp: IO[str]) -> None:
    """Emit planted cluster labels and the planted weighted edge list."""
    clusters_fp.write("scientist_id,pub_index,cluster_id\n")
    for (sid, idx), label in sorted(corpus.true_clusters.items()):
        clusters_fp.write(f"{sid},{idx},{label}\n")
    edges_fp.write("id_i,id_j,weight\n")
    for (i, j), w in sorted(corpus.true_edges.items()):
        edges_fp.write(f"{i},{j},{w}\n")
