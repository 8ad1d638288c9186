"""Scientist and publication records: schema, validation, JSONL/CSV parsing.

The on-disk formats are:

* JSONL -- one scientist per line::

    {"id": "s1", "gender": "F", "fields": ["BIO", "EXA"],
     "pubs": [{"title": "...", "year": 2004, "n_authors": 3, "doi": "10/x"}]}

  ``gender`` is ``"F"``, ``"M"`` or ``null``; ``fields`` is an ordered list
  of up to three major-field codes; ``doi`` is optional.

* CSV -- one publication per row, scientist columns repeated::

    id,gender,fields,title,year,n_authors,doi

  ``fields`` holds ';'-separated codes.  Rows sharing an ``id`` must carry
  identical gender/fields cells; scientists without publications cannot be
  represented in CSV (use JSONL for those).
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from enum import Enum
from typing import IO, Iterable

DEFAULT_YEAR_RANGE = (1900, 2100)


class Gender(Enum):
    FEMALE = "F"
    MALE = "M"
    UNKNOWN = "U"


class MajorField(Enum):
    """The eight major research fields."""

    AGR = "AGR"
    SOC = "SOC"
    BIO = "BIO"
    EXA = "EXA"
    HUM = "HUM"
    HEA = "HEA"
    ENG = "ENG"
    LIN = "LIN"


class InputFormat(Enum):
    JSONL = "jsonl"
    CSV = "csv"


@dataclass(frozen=True)
class PublicationRecord:
    title: str
    year: int
    author_count: int
    doi: str | None = None


@dataclass(frozen=True)
class ScientistRecord:
    scientist_id: str
    gender: Gender
    fields: tuple[MajorField, ...]
    publications: tuple[PublicationRecord, ...]


class ParseError(ValueError):
    """Input validation failed; carries every (line, message) diagnostic."""

    def __init__(self, diagnostics: list[tuple[int, str]]):
        self.diagnostics = list(diagnostics)
        head = "; ".join(f"line {n}: {m}" for n, m in self.diagnostics[:5])
        extra = len(self.diagnostics) - 5
        if extra > 0:
            head += f" (+{extra} more)"
        super().__init__(head)


def normalize_title(title: str) -> str:
    """Case-fold and collapse whitespace runs; diacritics and punctuation stay."""
    return " ".join(title.split()).casefold()


def primary_field(record: ScientistRecord) -> MajorField | None:
    """First declared major field, or None when the record lists none."""
    return record.fields[0] if record.fields else None


def _parse_gender(token, diag, line_no) -> Gender:
    if token is None or token == "":
        return Gender.UNKNOWN
    if token == "F":
        return Gender.FEMALE
    if token == "M":
        return Gender.MALE
    diag.append((line_no, f"invalid gender token {token!r}"))
    return Gender.UNKNOWN


def _parse_fields(tokens, diag, line_no) -> tuple[MajorField, ...]:
    out: list[MajorField] = []
    for tok in tokens:
        try:
            f = MajorField(tok)
        except ValueError:
            diag.append((line_no, f"invalid field code {tok!r}"))
            continue
        if f in out:
            diag.append((line_no, f"duplicate field code {tok!r}"))
            continue
        out.append(f)
    if len(out) > 3:
        diag.append((line_no, f"more than 3 fields declared ({len(out)})"))
        out = out[:3]
    return tuple(out)


def _parse_pub(obj, diag, line_no, year_range) -> PublicationRecord | None:
    if not isinstance(obj, dict):
        diag.append((line_no, "publication entry is not an object"))
        return None
    title = obj.get("title")
    if not isinstance(title, str) or not title:
        diag.append((line_no, "publication title missing or empty"))
        return None
    year = obj.get("year")
    if isinstance(year, bool) or not isinstance(year, int):
        diag.append((line_no, f"publication year {year!r} is not an integer"))
        return None
    if not (year_range[0] <= year <= year_range[1]):
        diag.append((line_no, f"publication year {year} outside sane range {year_range}"))
        return None
    n = obj.get("n_authors")
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        diag.append((line_no, f"author count {n!r} must be an integer >= 1"))
        return None
    doi = obj.get("doi")
    if doi is not None and (not isinstance(doi, str) or not doi):
        diag.append((line_no, f"doi {doi!r} must be a non-empty string"))
        return None
    return PublicationRecord(title=title, year=year, author_count=n, doi=doi)


def _parse_jsonl(lines: Iterable[str], year_range) -> list[ScientistRecord]:
    records: list[ScientistRecord] = []
    seen: set[str] = set()
    diag: list[tuple[int, str]] = []
    for line_no, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            diag.append((line_no, f"malformed JSON: {exc.msg}"))
            continue
        if not isinstance(obj, dict):
            diag.append((line_no, "line is not a JSON object"))
            continue
        sid = obj.get("id")
        if not isinstance(sid, str) or not sid:
            diag.append((line_no, f"scientist id {sid!r} missing or empty"))
            continue
        if sid in seen:
            diag.append((line_no, f"duplicate scientist_id {sid!r}"))
            continue
        seen.add(sid)
        gender = _parse_gender(obj.get("gender"), diag, line_no)
        fields_tok = obj.get("fields", [])
        if not isinstance(fields_tok, list):
            diag.append((line_no, "fields must be a list"))
            fields_tok = []
        fields = _parse_fields(fields_tok, diag, line_no)
        pubs_tok = obj.get("pubs", [])
        if not isinstance(pubs_tok, list):
            diag.append((line_no, "pubs must be a list"))
            pubs_tok = []
        pubs = []
        for p in pubs_tok:
            pub = _parse_pub(p, diag, line_no, year_range)
            if pub is not None:
                pubs.append(pub)
        records.append(ScientistRecord(sid, gender, fields, tuple(pubs)))
    if diag:
        raise ParseError(diag)
    return records


_CSV_COLUMNS = ("id", "gender", "fields", "title", "year", "n_authors")


def _parse_csv(lines: Iterable[str], year_range) -> list[ScientistRecord]:
    reader = csv.DictReader(lines)
    diag: list[tuple[int, str]] = []
    order: list[str] = []
    meta: dict[str, tuple[Gender, tuple[MajorField, ...]]] = {}
    pubs: dict[str, list[PublicationRecord]] = {}
    header = reader.fieldnames or []
    missing = [c for c in _CSV_COLUMNS if c not in header]
    if missing:
        raise ParseError([(1, f"missing CSV columns: {', '.join(missing)}")])
    for row in reader:
        line_no = reader.line_num
        sid = (row.get("id") or "").strip()
        if not sid:
            diag.append((line_no, "scientist id missing or empty"))
            continue
        gender = _parse_gender((row.get("gender") or "").strip(), diag, line_no)
        ftoks = [t for t in (row.get("fields") or "").split(";") if t]
        fields = _parse_fields(ftoks, diag, line_no)
        if sid in meta:
            if meta[sid] != (gender, fields):
                diag.append((line_no, f"conflicting attributes for scientist_id {sid!r}"))
                continue
        else:
            meta[sid] = (gender, fields)
            pubs[sid] = []
            order.append(sid)
        try:
            year = int(row.get("year") or "")
        except ValueError:
            diag.append((line_no, f"publication year {row.get('year')!r} is not an integer"))
            continue
        try:
            n = int(row.get("n_authors") or "")
        except ValueError:
            diag.append((line_no, f"author count {row.get('n_authors')!r} is not an integer"))
            continue
        doi = (row.get("doi") or "").strip() or None
        pub = _parse_pub(
            {"title": row.get("title"), "year": year, "n_authors": n, "doi": doi},
            diag,
            line_no,
            year_range,
        )
        if pub is not None:
            pubs[sid].append(pub)
    if diag:
        raise ParseError(diag)
    return [
        ScientistRecord(sid, meta[sid][0], meta[sid][1], tuple(pubs[sid]))
        for sid in order
    ]


def parse_records(
    stream: Iterable[str] | IO[str],
    format: InputFormat = InputFormat.JSONL,
    year_range: tuple[int, int] = DEFAULT_YEAR_RANGE,
) -> list[ScientistRecord]:
    """Parse and validate a corpus; raises ParseError listing every bad line."""
    if format is InputFormat.JSONL:
        return _parse_jsonl(stream, year_range)
    if format is InputFormat.CSV:
        return _parse_csv(stream, year_range)
    raise ValueError(f"unsupported format {format!r}")


def record_to_dict(record: ScientistRecord) -> dict:
    pubs = []
    for p in record.publications:
        d = {"title": p.title, "year": p.year, "n_authors": p.author_count}
        if p.doi is not None:
            d["doi"] = p.doi
        pubs.append(d)
    gender = None if record.gender is Gender.UNKNOWN else record.gender.value
    return {
        "id": record.scientist_id,
        "gender": gender,
        "fields": [f.value for f in record.fields],
        "pubs": pubs,
    }


def write_records_jsonl(records: Iterable[ScientistRecord], fp: IO[str]) -> int:
    """Write the canonical JSONL form; returns the number of lines written."""
    n = 0
    for rec in records:
        fp.write(json.dumps(record_to_dict(rec), ensure_ascii=False) + "\n")
        n += 1
    return n
