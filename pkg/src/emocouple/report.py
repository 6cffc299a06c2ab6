"""Result tables (plain text + CSV twin), corpus counts and chatterplot data."""

from __future__ import annotations

import csv
import io
from collections import Counter
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable, NamedTuple, Sequence

from .corpus import Document
from .econ.adf import AdfResult
from .econ.granger import GrangerBatch, GrangerResult, SkippedPair
from .econ.significance import Significance, from_p_value
from .lexicon import SentimentLexicon, sentiment_of

NC = Significance.NC.code

ADF_COLUMNS = (
    "variable",
    "bulletin_levels_tau", "bulletin_levels_sig", "bulletin_levels_lag",
    "bulletin_diff_tau", "bulletin_diff_sig", "bulletin_diff_lag",
    "tweet_levels_tau", "tweet_levels_sig", "tweet_levels_lag",
    "tweet_diff_tau", "tweet_diff_sig", "tweet_diff_lag",
)
GRANGER_COLUMNS = (
    "variable", "caused_set", "causal_set", "lag_p", "f_value",
    "df_num", "df_den", "p_value", "significance",
)
CHATTER_COLUMNS = ("word", "frequency", "sentiment")


class Rendered(NamedTuple):
    text: str
    csv: str


def round_sig(x: float, digits: int = 6) -> float:
    return float(f"{x:.{digits}g}")


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def significance_code(p: float) -> str:
    return from_p_value(p).code


def _csv_writer(buf):
    return csv.writer(buf, lineterminator="\n")


def _footer_csv(buf, footer: Sequence[str]) -> None:
    for line in footer:
        buf.write(f"# {line}\n")


def _data_lines(fh) -> Iterable[str]:
    return (ln for ln in fh if not ln.startswith("#"))


def _align_table(header: Sequence[str], rows: Sequence[Sequence[str]], footer: Sequence[str] = ()) -> str:
    widths = [len(h) for h in header]
    for r in rows:
        widths = [max(w, len(c)) for w, c in zip(widths, r)]
    line = lambda cells: "  ".join(c.ljust(w) for c, w in zip(cells, widths)).rstrip()
    out = [line(header), "  ".join("-" * w for w in widths)]
    out += [line(r) for r in rows]
    out += list(footer)
    return "\n".join(out) + "\n"


# --- ADF -------------------------------------------------------------------

@dataclass(frozen=True)
class AdfCell:
    tau: float
    significance: Significance
    lag_m: int

    @classmethod
    def from_result(cls, r: AdfResult | None) -> "AdfCell | None":
        if r is None:
            return None
        return cls(round_sig(r.tau), r.significance, r.lag_m)


@dataclass(frozen=True)
class AdfRow:
    variable: str
    bulletin_levels: AdfCell | None
    bulletin_diff: AdfCell | None
    tweet_levels: AdfCell | None
    tweet_diff: AdfCell | None

    @property
    def cells(self) -> tuple:
        return (self.bulletin_levels, self.bulletin_diff, self.tweet_levels, self.tweet_diff)


def adf_row(variable: str, bulletin: tuple, tweet: tuple) -> AdfRow:
    """Build a row from (levels, differenced) AdfResult pairs; None marks NC."""
    b_lev, b_dif = bulletin
    t_lev, t_dif = tweet
    return AdfRow(variable, AdfCell.from_result(b_lev), AdfCell.from_result(b_dif),
                  AdfCell.from_result(t_lev), AdfCell.from_result(t_dif))


def render_adf_table(rows: Sequence[AdfRow], footer: Sequence[str] = ()) -> Rendered:
    header = ["Variable",
              "Bulletin lvl tau", "Sig", "Bulletin diff tau", "Sig",
              "Tweet lvl tau", "Sig", "Tweet diff tau", "Sig"]
    text_rows = []
    buf = io.StringIO()
    w = _csv_writer(buf)
    w.writerow(ADF_COLUMNS)
    for row in rows:
        trow = [row.variable]
        crow = [row.variable]
        for cell in row.cells:
            if cell is None:
                trow += [NC, NC]
                crow += [NC, NC, ""]
            else:
                trow += [f"{cell.tau:.4f}", cell.significance.code]
                crow += [_fmt(cell.tau), cell.significance.code, str(cell.lag_m)]
        text_rows.append(trow)
        w.writerow(crow)
    _footer_csv(buf, footer)
    return Rendered(_align_table(header, text_rows, footer), buf.getvalue())


def parse_adf_csv(text: str) -> list[AdfRow]:
    rows = []
    for rec in csv.DictReader(_data_lines(io.StringIO(text))):
        cells = []
        for prefix in ("bulletin_levels", "bulletin_diff", "tweet_levels", "tweet_diff"):
            if rec[f"{prefix}_sig"] == NC:
                cells.append(None)
            else:
                cells.append(AdfCell(float(rec[f"{prefix}_tau"]),
                                     Significance.from_code(rec[f"{prefix}_sig"]),
                                     int(rec[f"{prefix}_lag"])))
        rows.append(AdfRow(rec["variable"], *cells))
    return rows


# --- Granger ---------------------------------------------------------------

def rounded(r: GrangerResult) -> GrangerResult:
    """The record as it survives a CSV round trip (6 significant digits)."""
    return replace(r, f_value=round_sig(r.f_value), p_value=round_sig(r.p_value))


def render_granger_table(
    results: GrangerBatch | Sequence[GrangerResult],
    skipped: Sequence[SkippedPair] = (),
    footer: Sequence[str] = (),
) -> Rendered:
    if isinstance(results, GrangerBatch):
        skipped = list(skipped) + results.skipped
        results = results.results
    header = ["Variable", "Caused Set (Y)", "Causal Set (X)", "d.f.", "F-Value", "p-Value", "Remark"]
    buf = io.StringIO()
    w = _csv_writer(buf)
    w.writerow(GRANGER_COLUMNS)

    entries: list[tuple[str, int, object]] = [(r.variable, 0, r) for r in results]
    entries += [(s.variable, 1, s) for s in skipped]
    entries.sort(key=lambda e: (e[0], e[1]))

    text_rows = []
    last_var = None
    for var, _, item in entries:
        shown = var if var != last_var else ""
        last_var = var
        if isinstance(item, SkippedPair):
            text_rows.append([shown, "-", "-", "-", "-", "-", f"{NC} ({item.reason})"])
            w.writerow([var, "", "", "", "", "", "", "", NC])
            continue
        r = item
        text_rows.append([shown, r.caused, r.causal, f"{r.df_num} & {r.df_den}", f"{r.f_value:.3f}",
                          f"{r.p_value:.4f}", r.significance.code])
        w.writerow([r.variable, r.caused, r.causal, r.lag_p, _fmt(r.f_value), r.df_num,
                    r.df_den, _fmt(r.p_value), r.significance.code])
    _footer_csv(buf, footer)
    return Rendered(_align_table(header, text_rows, footer), buf.getvalue())


def parse_granger_csv(text: str) -> GrangerBatch:
    batch = GrangerBatch()
    for rec in csv.DictReader(_data_lines(io.StringIO(text))):
        if rec["significance"] == NC:
            batch.skipped.append(SkippedPair(rec["variable"], ""))
            continue
        p = int(rec["lag_p"])
        df_den = int(rec["df_den"])
        batch.results.append(GrangerResult(
            variable=rec["variable"],
            caused=rec["caused_set"],
            causal=rec["causal_set"],
            lag_p=p,
            f_value=float(rec["f_value"]),
            df_num=int(rec["df_num"]),
            df_den=df_den,
            p_value=float(rec["p_value"]),
            significance=Significance.from_code(rec["significance"]),
            n_obs=df_den + 2 * p + 1,
        ))
    return batch


# --- corpus statistics -----------------------------------------------------

def corpus_stats(docs: Iterable[Document]) -> dict[str, int]:
    counts = Counter(d.region for d in docs)
    return dict(sorted(counts.items()))


def render_corpus_stats(counts: dict[str, int], footer: Sequence[str] = ()) -> Rendered:
    total = sum(counts.values())
    rows = [[region or "(none)", str(n)] for region, n in counts.items()]
    buf = io.StringIO()
    w = _csv_writer(buf)
    w.writerow(("region", "documents"))
    for region, n in counts.items():
        w.writerow((region, n))
    w.writerow(("total", total))
    _footer_csv(buf, footer)
    return Rendered(_align_table(["Region", "Documents"], rows + [["Total", str(total)]], footer),
                    buf.getvalue())


# --- chatterplot -----------------------------------------------------------

@dataclass(frozen=True)
class ChatterRecord:
    word: str
    frequency: int
    sentiment: int


def chatterplot_export(
    token_lists: Iterable[Sequence[str]],
    slex: SentimentLexicon,
    top_n: int = 200,
    exclude: Iterable[str] = (),
) -> list[ChatterRecord]:
    """Most frequent words with their polarity. Ties are broken alphabetically."""
    counts: Counter[str] = Counter()
    for tokens in token_lists:
        counts.update(tokens)
    for word in exclude:
        counts.pop(word.lower(), None)
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))[: max(top_n, 0)]
    return [ChatterRecord(w, n, sentiment_of(w, slex)) for w, n in ranked]


def chatter_to_csv(records: Sequence[ChatterRecord], footer: Sequence[str] = ()) -> str:
    buf = io.StringIO()
    w = _csv_writer(buf)
    w.writerow(CHATTER_COLUMNS)
    for r in records:
        w.writerow((r.word, r.frequency, r.sentiment))
    _footer_csv(buf, footer)
    return buf.getvalue()


def parse_chatter_csv(text: str) -> list[ChatterRecord]:
    return [ChatterRecord(r["word"], int(r["frequency"]), int(r["sentiment"]))
            for r in csv.DictReader(_data_lines(io.StringIO(text)))]


def write_text(path: str | Path, content: str) -> None:
    Path(path).write_text(content, encoding="utf-8", newline="\n")
