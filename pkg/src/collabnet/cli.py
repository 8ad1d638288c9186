"""Pipeline orchestration as subcommands over a shared output directory.

Stages write their artifacts under ``--output-dir`` and later stages read
them back, so each one can be rerun independently::

    collabnet synth   -o out            # corpus.jsonl + planted ground truth
    collabnet ingest  -o out            # validate -> records.jsonl
    collabnet dedup   -o out            # clusters.csv
    collabnet build   -o out            # nodes.csv, edges.csv, graph.json
    collabnet metrics -o out            # field_stats.csv, histograms, curves
    collabnet fit     -o out            # fits/*.json
    collabnet report  -o out            # report/ tables, figure data, manifest

Options come from defaults, then an optional ``key=value`` config file,
then command-line flags (flags win).  Runs are deterministic: identical
configuration yields byte-identical output directories, and ``--threads``
never affects results (stages are sequential; the flag is validated and
reserved).  Exit codes: 0 success, 1 usage error, 2 data error,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import sys
from dataclasses import dataclass, fields as dc_fields
from pathlib import Path

import numpy as np

from . import __version__
from ._format import fmt
from .dedup import PaperCluster, cluster_duplicates
from .fit import FitError, FitResult, fit_power_law, fit_truncated_power_law
from .graph import (
    CollaborationNetwork,
    NodeAttrs,
    build_bipartite,
    giant_component,
    project_tcn,
)
from .ingest import (
    Gender,
    InputFormat,
    MajorField,
    ParseError,
    ScientistRecord,
    normalize_title,
    parse_records,
    write_records_jsonl,
)
from .metrics import (
    GeometricBins,
    binned_curve,
    degree_distribution,
    field_stats,
    weight_distribution,
    write_field_stats_csv,
    write_histogram_csv,
)
from .synth import SynthConfig, generate_corpus, write_truth_csv

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERIC = 3


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


@dataclass
class PipelineConfig:
    input: str | None = None
    format: str = "jsonl"
    output_dir: str = "out"
    dedup_threshold: float = 0.10
    bin_ratio: float = 2.0
    k_min: int = 1
    w_min: int = 1
    seed: int = 42
    threads: int = 1
    n_scientists: int = 10000
    n_papers: int | None = None
    homophily: float = 0.65
    interdisc: float = 0.30
    degree_alpha: float = 1.53
    degree_beta: float = 85.4
    typo_rate: float = 0.02

    def validate(self) -> None:
        if not 0.0 < self.dedup_threshold < 1.0:
            raise UsageError(f"dedup_threshold must be in (0, 1), got {self.dedup_threshold}")
        if self.bin_ratio <= 1.0:
            raise UsageError(f"bin_ratio must be > 1, got {self.bin_ratio}")
        if self.k_min < 1 or self.w_min < 1:
            raise UsageError("k_min and w_min must be >= 1")
        if self.threads < 1:
            raise UsageError(f"threads must be >= 1, got {self.threads}")
        if self.format not in ("jsonl", "csv"):
            raise UsageError(f"format must be jsonl or csv, got {self.format!r}")

    def to_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in dc_fields(self)}


_OPTIONAL_INT = {"n_papers"}


def _parse_config_value(name: str, raw: str):
    hints = {f.name: f.type for f in dc_fields(PipelineConfig)}
    if name not in hints:
        raise UsageError(f"unknown config key {name!r}")
    raw = raw.strip()
    if name in _OPTIONAL_INT:
        return None if raw.lower() in ("", "none") else int(raw)
    if name == "input":
        return raw or None
    hint = hints[name]
    base = hint.split("|")[0].strip() if isinstance(hint, str) else hint
    try:
        if base in ("int", int):
            return int(raw)
        if base in ("float", float):
            return float(raw)
    except ValueError as exc:
        raise UsageError(f"config key {name}: {exc}") from exc
    return raw


def load_config_file(path: str) -> dict:
    out = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from exc
    for line_no, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{line_no}: expected key=value, got {line!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        out[key] = _parse_config_value(key, value)
    return out


def resolve_config(args: argparse.Namespace) -> PipelineConfig:
    cfg = PipelineConfig()
    if getattr(args, "config", None):
        for key, value in load_config_file(args.config).items():
            setattr(cfg, key, value)
    for f in dc_fields(PipelineConfig):
        flag = getattr(args, f.name, None)
        if flag is not None:
            setattr(cfg, f.name, flag)
    cfg.validate()
    return cfg


# --- stage I/O -------------------------------------------------------------


def _outdir(cfg: PipelineConfig) -> Path:
    p = Path(cfg.output_dir)
    p.mkdir(parents=True, exist_ok=True)
    return p


def _open_w(path: Path):
    return open(path, "w", encoding="utf-8", newline="")


def _read_records(path: Path) -> list[ScientistRecord]:
    if not path.exists():
        raise DataError(f"missing {path}; run the earlier stages first")
    with open(path, encoding="utf-8") as fp:
        return parse_records(fp, InputFormat.JSONL)


def _read_clusters(path: Path) -> list[PaperCluster]:
    if not path.exists():
        raise DataError(f"missing {path}; run `dedup` first")
    grouped: dict[int, dict] = {}
    with open(path, encoding="utf-8", newline="") as fp:
        for row in csv.DictReader(fp):
            cid = int(row["cluster_id"])
            g = grouped.setdefault(
                cid,
                {"members": [], "year": int(row["year"]),
                 "author_count": int(row["author_count"])},
            )
            g["members"].append((row["scientist_id"], int(row["pub_index"])))
    return [
        PaperCluster(cluster_id=cid, members=tuple(g["members"]),
                     year=g["year"], author_count=g["author_count"])
        for cid, g in sorted(grouped.items())
    ]


def _read_network(outdir: Path) -> CollaborationNetwork:
    nodes_path, edges_path = outdir / "nodes.csv", outdir / "edges.csv"
    if not nodes_path.exists() or not edges_path.exists():
        raise DataError(f"missing {nodes_path} or {edges_path}; run `build` first")
    node_ids: list[str] = []
    attrs: dict[str, NodeAttrs] = {}
    with open(nodes_path, encoding="utf-8", newline="") as fp:
        for row in csv.DictReader(fp):
            sid = row["scientist_id"]
            gender = Gender(row["gender"]) if row["gender"] else Gender.UNKNOWN
            field = MajorField(row["field"]) if row["field"] else None
            node_ids.append(sid)
            attrs[sid] = NodeAttrs(gender, field, int(row["n_papers"]))
    edges: dict[tuple[str, str], int] = {}
    with open(edges_path, encoding="utf-8", newline="") as fp:
        for row in csv.DictReader(fp):
            edges[(row["id_i"], row["id_j"])] = int(row["weight"])
    return CollaborationNetwork(node_ids, attrs, edges)


def _read_histogram(path: Path) -> dict[int, float]:
    if not path.exists():
        raise DataError(f"missing {path}; run `metrics` first")
    out: dict[int, float] = {}
    with open(path, encoding="utf-8", newline="") as fp:
        for row in csv.DictReader(fp):
            out[int(row["value"])] = float(row["probability"])
    return out


# --- stages ----------------------------------------------------------------


def cmd_synth(cfg: PipelineConfig) -> None:
    out = _outdir(cfg)
    synth_cfg = SynthConfig(
        n_scientists=cfg.n_scientists,
        n_papers=cfg.n_papers,
        homophily=cfg.homophily,
        interdisc=cfg.interdisc,
        degree_alpha=cfg.degree_alpha,
        degree_beta=cfg.degree_beta,
        typo_rate=cfg.typo_rate,
        seed=cfg.seed,
    )
    try:
        corpus = generate_corpus(synth_cfg)
    except ValueError as exc:
        raise UsageError(f"infeasible synth configuration: {exc}") from exc
    with _open_w(out / "corpus.jsonl") as fp:
        n = write_records_jsonl(corpus.records, fp)
    with _open_w(out / "truth_clusters.csv") as cfp, _open_w(out / "truth_edges.csv") as efp:
        write_truth_csv(corpus, cfp, efp)
    print(f"synth: {n} scientists, {corpus.n_papers} papers -> {out / 'corpus.jsonl'}")


def cmd_ingest(cfg: PipelineConfig) -> None:
    out = _outdir(cfg)
    source = Path(cfg.input) if cfg.input else out / "corpus.jsonl"
    if not source.exists():
        raise DataError(f"input file {source} does not exist")
    with open(source, encoding="utf-8", newline="") as fp:
        records = parse_records(fp, InputFormat(cfg.format))
    with _open_w(out / "records.jsonl") as fp:
        n = write_records_jsonl(records, fp)
    n_pubs = sum(len(r.publications) for r in records)
    print(f"ingest: {n} scientists, {n_pubs} publication records -> {out / 'records.jsonl'}")


def cmd_dedup(cfg: PipelineConfig) -> None:
    out = _outdir(cfg)
    records = _read_records(out / "records.jsonl")
    clusters = cluster_duplicates(records, cfg.dedup_threshold)
    titles = {
        (rec.scientist_id, k): pub.title
        for rec in records
        for k, pub in enumerate(rec.publications)
    }
    with _open_w(out / "clusters.csv") as fp:
        writer = csv.writer(fp, lineterminator="\n")
        writer.writerow(
            ["cluster_id", "scientist_id", "pub_index", "year", "author_count",
             "representative_title"]
        )
        for cl in clusters:
            rep = normalize_title(titles[cl.members[0]])
            for sid, idx in cl.members:
                writer.writerow([cl.cluster_id, sid, idx, cl.year, cl.author_count, rep])
    n_records = sum(len(c.members) for c in clusters)
    print(f"dedup: {n_records} records -> {len(clusters)} clusters")


def cmd_build(cfg: PipelineConfig) -> None:
    out = _outdir(cfg)
    records = _read_records(out / "records.jsonl")
    clusters = _read_clusters(out / "clusters.csv")
    try:
        bn = build_bipartite(records, clusters)
    except ValueError as exc:
        raise DataError(str(exc)) from exc
    tcn = project_tcn(bn)
    with _open_w(out / "nodes.csv") as fp:
        fp.write("scientist_id,gender,field,n_papers\n")
        for sid in tcn.node_ids:
            a = tcn.attrs[sid]
            gender = "" if a.gender is Gender.UNKNOWN else a.gender.value
            field = a.field.value if a.field is not None else ""
            fp.write(f"{sid},{gender},{field},{a.paper_count}\n")
    with _open_w(out / "edges.csv") as fp:
        fp.write("id_i,id_j,weight\n")
        for i, j, w in tcn.edges():
            fp.write(f"{i},{j},{w}\n")
    component, fraction = giant_component(tcn)
    summary = {
        "n_scientists": tcn.n_nodes,
        "n_publication_records": sum(len(r.publications) for r in records),
        "n_papers": bn.n_papers,
        "n_edges": tcn.n_edges,
        "giant_component_size": len(component),
        "giant_component_fraction": float(fmt(fraction)),
    }
    with _open_w(out / "graph.json") as fp:
        json.dump(summary, fp, indent=2, sort_keys=True)
        fp.write("\n")
    print(
        f"build: {tcn.n_nodes} nodes, {tcn.n_edges} edges, "
        f"giant component {fmt(fraction)}"
    )


def cmd_metrics(cfg: PipelineConfig) -> None:
    out = _outdir(cfg)
    tcn = _read_network(out)
    with _open_w(out / "field_stats.csv") as fp:
        write_field_stats_csv(field_stats(tcn), fp)
    for gender in (Gender.FEMALE, Gender.MALE):
        name = gender.name.lower()
        with _open_w(out / f"hist_degree_{name}.csv") as fp:
            write_histogram_csv(degree_distribution(tcn, gender), fp)
        with _open_w(out / f"hist_weight_{name}.csv") as fp:
            write_histogram_csv(weight_distribution(tcn, gender), fp)
    bins = GeometricBins(start=1.0, ratio=cfg.bin_ratio)
    for metric in ("g_ratio", "m_ratio"):
        with _open_w(out / f"curve_{metric}.csv") as fp:
            fp.write("field,gender,bin_lo,bin_hi,mean,se,n\n")
            for field in MajorField:
                for gender in (Gender.FEMALE, Gender.MALE):
                    curve = binned_curve(tcn, metric, field, gender, bins)
                    for lo, hi, mean, se, n in zip(
                        curve.bin_lo, curve.bin_hi, curve.mean, curve.se, curve.count
                    ):
                        fp.write(
                            f"{field.value},{gender.value},{fmt(lo)},{fmt(hi)},"
                            f"{fmt(mean)},{fmt(se)},{n}\n"
                        )
    print(f"metrics: field_stats, histograms and curves written to {out}")


def _round_floats(obj):
    if isinstance(obj, float):
        return float(fmt(obj))
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_round_floats(v) for v in obj]
    return obj


def cmd_fit(cfg: PipelineConfig) -> None:
    out = _outdir(cfg)
    fits_dir = out / "fits"
    fits_dir.mkdir(exist_ok=True)
    results: list[tuple[str, FitResult]] = []
    for gender in ("female", "male"):
        hist = _read_histogram(out / f"hist_degree_{gender}.csv")
        res = fit_truncated_power_law(hist, k_min=cfg.k_min, bin_ratio=cfg.bin_ratio)
        results.append((f"fit_degree_{gender}", res))
        hist = _read_histogram(out / f"hist_weight_{gender}.csv")
        res = fit_power_law(hist, w_min=cfg.w_min, bin_ratio=cfg.bin_ratio)
        results.append((f"fit_weight_{gender}", res))
    for name, res in results:
        with _open_w(fits_dir / f"{name}.json") as fp:
            json.dump(_round_floats(res.to_json_dict()), fp, indent=2, sort_keys=True)
            fp.write("\n")
        params = ", ".join(f"{k}={fmt(v)}" for k, v in sorted(res.params.items()))
        print(f"fit: {name}: {params}")


def _read_csv_rows(path: Path) -> list[dict]:
    if not path.exists():
        raise DataError(f"missing {path}; run the earlier stages first")
    with open(path, encoding="utf-8", newline="") as fp:
        return list(csv.DictReader(fp))


def cmd_report(cfg: PipelineConfig) -> None:
    out = _outdir(cfg)
    report = out / "report"
    report.mkdir(exist_ok=True)
    stats = _read_csv_rows(out / "field_stats.csv")

    with _open_w(report / "table1_means.csv") as fp:
        fp.write(
            "field,mean_collaborators_female,mean_collaborators_male,"
            "mean_papers_female,mean_papers_male\n"
        )
        for r in stats:
            fp.write(
                f"{r['field']},{r['mean_collaborators_female']},"
                f"{r['mean_collaborators_male']},{r['mean_papers_female']},"
                f"{r['mean_papers_male']}\n"
            )
    with _open_w(report / "table2_m_ratio.csv") as fp:
        fp.write("field,mean_m_ratio_female,se_female,mean_m_ratio_male,se_male\n")
        for r in stats:
            fp.write(
                f"{r['field']},{r['mean_m_ratio_female']},{r['se_m_ratio_female']},"
                f"{r['mean_m_ratio_male']},{r['se_m_ratio_male']}\n"
            )
    with _open_w(report / "table3_fields.csv") as fp:
        fp.write("field,n_scientists,tcn_fraction,female_proportion\n")
        for r in stats:
            fp.write(
                f"{r['field']},{r['n_scientists']},{r['tcn_fraction']},"
                f"{r['female_proportion']}\n"
            )
    with _open_w(report / "fig2_g_ratio_by_field.csv") as fp:
        fp.write("field,mean_g_ratio_male,mean_g_ratio_female,female_proportion\n")
        for r in stats:
            fp.write(
                f"{r['field']},{r['mean_g_ratio_male']},{r['mean_g_ratio_female']},"
                f"{r['female_proportion']}\n"
            )

    with _open_w(report / "fig1_fits.csv") as fp:
        fp.write(
            "distribution,gender,model,alpha,beta,lambda,amplitude,"
            "se_alpha,se_beta,se_lambda,se_amplitude,rss,n_points\n"
        )
        for dist in ("degree", "weight"):
            for gender in ("female", "male"):
                path = out / "fits" / f"fit_{dist}_{gender}.json"
                if not path.exists():
                    raise DataError(f"missing {path}; run `fit` first")
                doc = json.loads(path.read_text(encoding="utf-8"))
                p, s = doc["params"], doc["stderr"]
                cells = [
                    dist, gender, doc["model"],
                    fmt(p.get("alpha")), fmt(p.get("beta")), fmt(p.get("lambda")),
                    fmt(p.get("amplitude")), fmt(s.get("alpha")), fmt(s.get("beta")),
                    fmt(s.get("lambda")), fmt(s.get("amplitude")),
                    fmt(doc["rss"]), str(doc["n_points"]),
                ]
                fp.write(",".join(cells) + "\n")

    for metric, fig in (("g_ratio", "fig3_g_vs_k"), ("m_ratio", "fig4_m_vs_k")):
        src = out / f"curve_{metric}.csv"
        if not src.exists():
            raise DataError(f"missing {src}; run `metrics` first")
        (report / f"{fig}.csv").write_bytes(src.read_bytes())

    graph_path = out / "graph.json"
    counts = json.loads(graph_path.read_text()) if graph_path.exists() else {}
    # threads and output_dir are execution details, not data-shaping config;
    # recording them would break byte-identical reruns across directories
    config_snapshot = {
        k: v for k, v in cfg.to_dict().items() if k not in ("threads", "output_dir")
    }
    manifest = {
        "package": "collabnet",
        "version": __version__,
        "python": ".".join(str(v) for v in sys.version_info[:3]),
        "numpy": np.__version__,
        "config": _round_floats(config_snapshot),
        "counts": counts,
        "files": {},
    }
    skip = report / "manifest.json"
    for path in sorted(out.rglob("*")):
        if path.is_file() and path != skip:
            digest = hashlib.sha256(path.read_bytes()).hexdigest()
            manifest["files"][path.relative_to(out).as_posix()] = digest
    with _open_w(skip) as fp:
        json.dump(manifest, fp, indent=2, sort_keys=True)
        fp.write("\n")
    print(f"report: {len(manifest['files'])} files hashed -> {skip}")


# --- entry point -----------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


_STAGES = {
    "synth": cmd_synth,
    "ingest": cmd_ingest,
    "dedup": cmd_dedup,
    "build": cmd_build,
    "metrics": cmd_metrics,
    "fit": cmd_fit,
    "report": cmd_report,
}


def _build_parser() -> _Parser:
    common = _Parser(add_help=False)
    common.add_argument("--config", help="key=value config file")
    common.add_argument("-o", "--output-dir", dest="output_dir")
    common.add_argument("--input", help="input corpus path (ingest)")
    common.add_argument("--format", choices=["jsonl", "csv"])
    common.add_argument("--dedup-threshold", dest="dedup_threshold", type=float)
    common.add_argument("--bin-ratio", dest="bin_ratio", type=float)
    common.add_argument("--k-min", dest="k_min", type=int)
    common.add_argument("--w-min", dest="w_min", type=int)
    common.add_argument("--seed", type=int)
    common.add_argument(
        "--threads", type=int,
        help="reserved; results never depend on this value",
    )
    common.add_argument("--n-scientists", dest="n_scientists", type=int)
    common.add_argument("--n-papers", dest="n_papers", type=int)
    common.add_argument("--homophily", type=float)
    common.add_argument("--interdisc", type=float)
    common.add_argument("--degree-alpha", dest="degree_alpha", type=float)
    common.add_argument("--degree-beta", dest="degree_beta", type=float)
    common.add_argument("--typo-rate", dest="typo_rate", type=float)

    parser = _Parser(prog="collabnet", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    for name in _STAGES:
        sub.add_parser(name, parents=[common])
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if not args.command:
            raise UsageError("a subcommand is required (see --help)")
        cfg = resolve_config(args)
        _STAGES[args.command](cfg)
        return EXIT_OK
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        for line_no, message in exc.diagnostics:
            print(f"error: line {line_no}: {message}", file=sys.stderr)
        return EXIT_DATA
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except FitError as exc:
        print(f"error: fit failed: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
