"""Command-line entry point: ``emocouple <subcommand> [--config FILE] [overrides]``.

Exit codes: 0 success, 1 analysis error, 2 input/config error.
"""

from __future__ import annotations

import argparse
import json
import logging
import shutil
import sys
import tempfile
from dataclasses import replace
from pathlib import Path
from typing import Sequence

from .config import RunConfig, config_hash
from .corpus import (
    Document, RegionSpec, Source, dedup_by_id, filter_by_location,
    load_documents, load_region_specs,
)
from .econ.adf import adf_levels_and_difference
from .econ.granger import granger_pairwise
from .errors import ConfigError, EmocoupleError, EmptySelection, UnreadablePath
from .lexicon import (
    apply_modifications, default_lexicon, default_sentiment_lexicon, load_lexicon,
    load_modifications, load_sentiment_lexicon,
)
from .pipeline import (
    AnalysisSettings, analyze_region, paired_regions, score_documents, stage,
    tokenize_documents,
)
from .report import (
    adf_row, chatter_to_csv, chatterplot_export, corpus_stats, render_adf_table,
    render_corpus_stats, render_granger_table, write_text,
)
from .series import EmotionSeries, read_series_csv, series_to_csv
from .textprep import PrepConfig, _data_path

logger = logging.getLogger("emocouple")

ANALYSIS_DIR = "analysis"


# --- resources from config ---------------------------------------------------

def prep_config(cfg: RunConfig) -> PrepConfig:
    stop = [cfg.path(s) for s in cfg.stopwords] or [_data_path("stopwords_english.txt")]
    lemmas = cfg.path(cfg.lemma_dict) if cfg.lemma_dict else _data_path("lemmas_english.tsv")
    return PrepConfig.from_files(stop, lemmas, cfg.keep_hashtag_bodies)


def lexicon_from(cfg: RunConfig):
    """Base lexicon plus modifications; ``modifications = "none"`` skips them."""
    if cfg.lexicon is None and cfg.modifications is None:
        return default_lexicon()
    lex = load_lexicon(cfg.path(cfg.lexicon)) if cfg.lexicon else default_lexicon(modified=False)
    if cfg.modifications == "none":
        return lex
    mods = (load_modifications(cfg.path(cfg.modifications)) if cfg.modifications
            else load_modifications(_data_path("covid_modifications.toml")))
    return apply_modifications(lex, mods)


def sentiment_from(cfg: RunConfig):
    if cfg.sentiment_lexicon:
        return load_sentiment_lexicon(cfg.path(cfg.sentiment_lexicon))
    return default_sentiment_lexicon()


def settings_from(cfg: RunConfig) -> AnalysisSettings:
    return AnalysisSettings(
        mode=cfg.aggregation,
        gap_policy=cfg.gap_policy,
        adf_max_lag=cfg.adf_max_lag,
        granger_max_lag=cfg.granger_max_lag,
        granger_lag_model=cfg.granger_lag_model,
        tweet_window=cfg.window("tweet"),
        bulletin_window=cfg.window("bulletin"),
    )


def footer_for(cfg: RunConfig, digest: str | None = None) -> list[str]:
    return [f"config_hash={digest or config_hash(cfg)}",
            f"aggregation={cfg.aggregation} gap_policy={cfg.gap_policy}"]


# --- store -------------------------------------------------------------------

def _store_key(d: Document):
    return (d.source.value, d.region, d.timestamp.isoformat(), d.id)


def write_store(path: Path, docs: Sequence[Document]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [json.dumps(d.to_record(), sort_keys=True, ensure_ascii=False)
             for d in sorted(docs, key=_store_key)]
    write_text(path, "".join(line + "\n" for line in lines))


def read_store(path: str | Path, tz=None) -> list[Document]:
    path = Path(path)
    if not path.is_file():
        raise UnreadablePath(path, "document store does not exist (run ingest first)")
    kw = {} if tz is None else {"tz": tz}
    with path.open(encoding="utf-8") as fh:
        return [Document.from_record(json.loads(ln), **kw) for ln in fh if ln.strip()]


# --- ingest ------------------------------------------------------------------

def _region_lookup(regions: Sequence[RegionSpec]) -> dict[str, str]:
    table = {}
    for r in regions:
        for name in (r.code, *r.names):
            table.setdefault(name, r.code)
    return table


def _normalize_region(doc: Document, table: dict[str, str]) -> Document:
    key = doc.region.strip().lower()
    code = table.get(key, table.get(key.replace("_", " "), key))
    return doc if code == doc.region else _replace_region(doc, code)


def _replace_region(doc: Document, region: str) -> Document:
    return replace(doc, region=region)


def _tweet_format(cfg: RunConfig, path: Path) -> str:
    if cfg.tweet_format != "auto":
        return cfg.tweet_format
    return "csv" if path.suffix.lower() == ".csv" else "jsonl"


def cmd_ingest(cfg: RunConfig) -> dict:
    """Load both corpora, assign regions and write the normalized store + report."""
    cfg.validate(need_inputs=True)
    tz = cfg.tz
    digest = config_hash(cfg)
    regions = load_region_specs(cfg.path(cfg.regions)) if cfg.regions else []
    table = _region_lookup(regions)
    inputs = []

    tweets: list[Document] = []
    for t in cfg.tweets:
        p = cfg.path(t)
        res = load_documents(p, _tweet_format(cfg, p), Source.TWEET, window=cfg.window("tweet"), tz=tz)
        inputs.append({"path": str(t), "source": Source.TWEET.value, "total": res.total,
                       "valid": len(res), "skipped": res.skipped,
                       "skip_reasons": dict(sorted(res.skip_reasons.items()))})
        tweets += res.documents
    n_loaded = len(tweets)
    if cfg.dedup:
        tweets = dedup_by_id(tweets)
    duplicates = n_loaded - len(tweets)

    located = [_normalize_region(d, table) for d in tweets if d.region]
    unlocated = [d for d in tweets if not d.region]
    assigned: set[str] = set()
    for code, bucket in filter_by_location(unlocated, cfg.country_key, regions).items():
        located += [_replace_region(d, code) for d in bucket]
        assigned |= {d.id for d in bucket}
    dropped = len(unlocated) - len(assigned)

    res = load_documents(cfg.path(cfg.bulletins), "bulletin_text_dir", Source.BULLETIN,
                         window=cfg.window("bulletin"), tz=tz)
    inputs.append({"path": str(cfg.bulletins), "source": Source.BULLETIN.value, "total": res.total,
                   "valid": len(res), "skipped": res.skipped,
                   "skip_reasons": dict(sorted(res.skip_reasons.items()))})
    bulletins = [_normalize_region(d, table) for d in res.documents]

    docs = located + bulletins
    write_store(cfg.store_path, docs)
    report = {
        "config_hash": digest,
        "store": cfg.store_path.name,
        "inputs": inputs,
        "duplicates_removed": duplicates,
        "location_assigned": len(assigned),
        "location_dropped": dropped,
        "counts": {s.value: corpus_stats(d for d in docs if d.source is s) for s in Source},
        "documents": len(docs),
    }
    out = cfg.out_dir
    out.mkdir(parents=True, exist_ok=True)
    write_text(out / "ingest_report.json", json.dumps(report, indent=2, sort_keys=True) + "\n")
    text = "".join(
        f"[{s}]\n" + render_corpus_stats(report["counts"][s]).text for s in report["counts"]
    ) + "\n".join(footer_for(cfg, digest)) + "\n"
    write_text(out / "ingest_report.txt", text)
    return report


# --- analyze -----------------------------------------------------------------

def _write_outputs(tmp: Path, cfg: RunConfig, digest: str) -> list[str]:
    footer = footer_for(cfg, digest)
    settings = settings_from(cfg)
    with stage("load"):
        docs = read_store(cfg.store_path, cfg.tz)
    with stage("preprocess"):
        tokenized = tokenize_documents(docs, prep_config(cfg))
    with stage("score"):
        lex = lexicon_from(cfg)
        scored = score_documents(tokenized, lex)
    categories = list(lex.categories)
    regions = paired_regions(docs)
    if not regions:
        raise EmptySelection("no region has both bulletins and tweets")

    written = []

    def emit(name: str, content: str) -> None:
        write_text(tmp / name, content)
        written.append(name)

    for region in regions:
        res = analyze_region(scored, categories, region, settings)
        for src, series in res.series.items():
            emit(f"series_{region}_{src.value.lower()}.csv",
                 series_to_csv([series[c] for c in categories], footer))
        adf = render_adf_table(res.adf_rows, footer)
        emit(f"adf_{region}.txt", adf.text)
        emit(f"adf_{region}.csv", adf.csv)
        gr = render_granger_table(res.granger, footer=footer)
        emit(f"granger_{region}.txt", gr.text)
        emit(f"granger_{region}.csv", gr.csv)

    with stage("chatterplot"):
        tweet_tokens = [toks for d, toks in tokenized if d.source is Source.TWEET]
        records = chatterplot_export(tweet_tokens, sentiment_from(cfg), cfg.chatter_top_n,
                                     cfg.chatter_exclude)
    emit("chatterplot.csv", chatter_to_csv(records, footer))
    stats = corpus_stats(docs)
    emit("corpus_stats.txt", render_corpus_stats(stats, footer).text)

    manifest = {"config_hash": digest, "settings": cfg.to_dict(), "regions": regions,
                "files": sorted(written)}
    write_text(tmp / "manifest.json", json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return sorted(written + ["manifest.json"])


def cmd_analyze(cfg: RunConfig) -> Path:
    """Run the full analysis into ``<out>/analysis``; nothing is left behind on failure."""
    cfg.validate(need_inputs=False)
    digest = config_hash(cfg)
    out = cfg.out_dir
    out.mkdir(parents=True, exist_ok=True)
    final = out / ANALYSIS_DIR
    tmp = Path(tempfile.mkdtemp(prefix=".analysis-", dir=out))
    try:
        _write_outputs(tmp, cfg, digest)
    except BaseException:
        shutil.rmtree(tmp, ignore_errors=True)
        raise
    if final.exists():
        shutil.rmtree(final)
    tmp.rename(final)
    return final


# --- single-table commands ---------------------------------------------------

def _load_pair(bulletin_csv: str, tweet_csv: str, region: str | None):
    def by_cat(path: str) -> dict[str, EmotionSeries]:
        p = Path(path)
        if not p.is_file():
            raise UnreadablePath(p, "does not exist")
        series = read_series_csv(p)
        if region:
            series = [s for s in series if s.region == region]
        return {s.category: s for s in series}

    return by_cat(bulletin_csv), by_cat(tweet_csv)


def cmd_adf(cfg: RunConfig, bulletin_csv: str, tweet_csv: str, region: str | None = None):
    b, t = _load_pair(bulletin_csv, tweet_csv, region)
    rows = []
    with stage("adf"):
        for cat in sorted(set(b) & set(t)):
            rows.append(adf_row(cat, adf_levels_and_difference(b[cat], cfg.adf_max_lag),
                                adf_levels_and_difference(t[cat], cfg.adf_max_lag)))
    return render_adf_table(rows)


def cmd_granger(cfg: RunConfig, bulletin_csv: str, tweet_csv: str, region: str | None = None):
    b, t = _load_pair(bulletin_csv, tweet_csv, region)
    with stage("granger"):
        batch = granger_pairwise(b, t, cfg.granger_max_lag, cfg.granger_lag_model)
    return render_granger_table(batch)


def cmd_chatterplot(cfg: RunConfig) -> str:
    docs = [d for d in read_store(cfg.store_path, cfg.tz) if d.source is Source.TWEET]
    tokens = [toks for _, toks in tokenize_documents(docs, prep_config(cfg))]
    records = chatterplot_export(tokens, sentiment_from(cfg), cfg.chatter_top_n, cfg.chatter_exclude)
    return chatter_to_csv(records)


def cmd_stats(cfg: RunConfig) -> str:
    docs = read_store(cfg.store_path, cfg.tz)
    parts = []
    for s in Source:
        counts = corpus_stats(d for d in docs if d.source is s)
        parts.append(f"[{s.value}]\n" + render_corpus_stats(counts).text)
    return "".join(parts)


# --- argument parsing --------------------------------------------------------

_FLAG_KEYS = {
    "out": "out", "store": "store", "start": "start", "end": "end",
    "aggregation": "aggregation", "gap_policy": "gap_policy",
    "adf_max_lag": "adf_max_lag", "granger_max_lag": "granger_max_lag",
    "lag_model": "granger_lag_model", "timezone": "timezone",
}


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--config", help="TOML run configuration")
    p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                   help="override any config key (repeatable)")
    p.add_argument("--out", help="output directory")
    p.add_argument("--store", help="document store path (default <out>/store.jsonl)")
    p.add_argument("--start", help="study window start, YYYY-MM-DD")
    p.add_argument("--end", help="study window end, YYYY-MM-DD")
    p.add_argument("--aggregation", choices=("mean_normalized", "pooled"))
    p.add_argument("--gap-policy", dest="gap_policy", choices=("zero", "carry_forward"))
    p.add_argument("--adf-max-lag", dest="adf_max_lag", type=int)
    p.add_argument("--granger-max-lag", dest="granger_max_lag", type=int)
    p.add_argument("--lag-model", dest="lag_model", choices=("restricted", "unrestricted"))
    p.add_argument("--timezone")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="emocouple", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("ingest", parents=[common], help="load corpora into the document store")
    sub.add_parser("analyze", parents=[common], help="series, ADF and Granger tables, chatterplot")
    for name in ("adf", "granger"):
        p = sub.add_parser(name, parents=[common], help=f"{name} table from two series CSVs")
        p.add_argument("bulletin_series")
        p.add_argument("tweet_series")
        p.add_argument("--region")
        p.add_argument("--csv", action="store_true", help="print CSV instead of text")
    p = sub.add_parser("chatterplot", parents=[common], help="word frequency + polarity CSV")
    p.add_argument("--top-n", dest="top_n", type=int)
    p.add_argument("-o", "--output", help="write to file instead of stdout")
    sub.add_parser("stats", parents=[common], help="document counts per source and region")
    p = sub.add_parser("synth", parents=[common], help="write a synthetic lead-lag corpus")
    p.add_argument("directory")
    p.add_argument("--seed", type=int, default=0)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig.load(args.config) if args.config else RunConfig()
    for flag, key in _FLAG_KEYS.items():
        value = getattr(args, flag, None)
        if value is not None:
            # command-line paths are relative to the working directory
            if key in ("out", "store"):
                value = str(Path(value).resolve())
            cfg.set(key, value)
    for item in args.set:
        key, sep, value = item.partition("=")
        if not sep:
            raise ConfigError(f"--set expects KEY=VALUE, got {item!r}")
        cfg.set(key.strip(), value.strip())
    if getattr(args, "top_n", None) is not None:
        cfg.set("chatter_top_n", args.top_n)
    return cfg


def _run(args: argparse.Namespace) -> None:
    if args.command == "synth":
        from .synth import write_corpus

        paths = write_corpus(args.directory, seed=args.seed)
        print(f"wrote {paths['config']}")
        return
    cfg = config_from_args(args)
    if args.command == "ingest":
        report = cmd_ingest(cfg)
        print(f"stored {report['documents']} documents in {cfg.store_path}")
    elif args.command == "analyze":
        print(f"wrote {cmd_analyze(cfg)}")
    elif args.command in ("adf", "granger"):
        cfg.validate(need_inputs=False)
        fn = cmd_adf if args.command == "adf" else cmd_granger
        out = fn(cfg, args.bulletin_series, args.tweet_series, args.region)
        sys.stdout.write(out.csv if args.csv else out.text)
    elif args.command == "chatterplot":
        cfg.validate(need_inputs=False)
        text = cmd_chatterplot(cfg)
        if args.output:
            write_text(args.output, text)
        else:
            sys.stdout.write(text)
    elif args.command == "stats":
        sys.stdout.write(cmd_stats(cfg))


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        _run(args)
    except EmocoupleError as exc:
        print(f"emocouple: error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"emocouple: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
