import csv
import json
from datetime import date, datetime, timezone

import pytest
from hypothesis import given, strategies as st

from emocouple.corpus import (
    UNASSIGNED, Document, RegionSpec, Source, dedup_by_id, filter_by_location,
    generate_queries, load_documents, load_region_specs, location_matches,
    parse_timestamp,
)
from emocouple.errors import EmptyCorpus, EmptyRegionSpec, SchemaError, UnreadablePath
from emocouple.textprep import _data_path


def _jsonl(path, records):
    path.write_text("\n".join(r if isinstance(r, str) else json.dumps(r) for r in records) + "\n")
    return path


def test_minimal_jsonl_record(tmp_path):
    p = _jsonl(tmp_path / "t.jsonl",
               [{"id": "1", "created_at": "2020-03-15T10:00:00Z", "text": "corona", "region": "DL"}])
    res = load_documents(p, "jsonl", "tweet")
    assert len(res) == 1
    doc = res.documents[0]
    assert doc.source is Source.TWEET
    assert doc.timestamp == datetime(2020, 3, 15, 10, tzinfo=timezone.utc)
    assert doc.region == "DL"


def test_bulletin_filename_convention(tmp_path):
    d = tmp_path / "b"
    d.mkdir()
    (d / "2020-04-01_delhi.txt").write_text("Total positive cases: 120")
    (doc,) = load_documents(d, "bulletin_text_dir", Source.BULLETIN).documents
    assert doc.day == date(2020, 4, 1)
    assert doc.region == "delhi"
    assert doc.source is Source.BULLETIN
    assert "120" in doc.text


def test_missing_text_is_skipped(tmp_path):
    p = _jsonl(tmp_path / "t.jsonl", [
        {"id": "1", "created_at": "2020-03-15T10:00:00Z", "text": "a"},
        {"id": "2", "created_at": "2020-03-15T11:00:00Z"},
        {"id": "3", "created_at": "2020-03-15T12:00:00Z", "text": "c"},
    ])
    res = load_documents(p, "jsonl", "tweet")
    assert [d.id for d in res] == ["1", "3"]
    assert res.skipped == 1
    assert res.total == 3


def test_skip_reasons_and_window(tmp_path):
    p = _jsonl(tmp_path / "t.jsonl", [
        {"id": "1", "created_at": "2020-03-15T10:00:00Z", "text": "a"},
        "{not json",
        {"id": "1", "created_at": "2020-03-16T10:00:00Z", "text": "dup"},
        {"id": "4", "created_at": "yesterday", "text": "b"},
        {"id": "5", "created_at": "2020-05-01T00:00:00Z", "text": "late"},
    ])
    res = load_documents(p, "jsonl", "tweet", window=(date(2020, 3, 1), date(2020, 4, 30)))
    assert len(res) == 1
    assert res.skipped == 4
    assert sum(res.skip_reasons.values()) == res.skipped


def test_csv_input_and_missing_header(tmp_path):
    p = tmp_path / "t.csv"
    with p.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["id", "timestamp", "text", "user_location"])
        w.writerow(["7", "Sun Mar 15 10:00:00 +0000 2020", "hello", "Pune, India"])
    (doc,) = load_documents(p, "csv", "tweet").documents
    assert doc.user_location == "Pune, India"
    assert doc.timestamp.hour == 10

    bad = tmp_path / "bad.csv"
    bad.write_text("id,timestamp\n1,2020-03-01\n")
    with pytest.raises(SchemaError):
        load_documents(bad, "csv", "tweet")


def test_missing_path_and_empty_corpus(tmp_path):
    with pytest.raises(UnreadablePath) as exc:
        load_documents(tmp_path / "nope.jsonl", "jsonl", "tweet")
    assert "nope.jsonl" in str(exc.value)
    p = _jsonl(tmp_path / "t.jsonl", [{"id": "1", "created_at": "2020-03-15T10:00:00Z", "text": "a"}])
    with pytest.raises(EmptyCorpus):
        load_documents(p, "jsonl", "tweet", window=(date(2021, 1, 1), date(2021, 1, 2)))


@given(st.lists(st.one_of(
    st.fixed_dictionaries({"id": st.text(min_size=1, max_size=3),
                           "created_at": st.just("2020-03-15T10:00:00Z"),
                           "text": st.text(max_size=5)}),
    st.fixed_dictionaries({"id": st.text(min_size=1, max_size=3)}),
    st.just("garbage"),
), min_size=1, max_size=15))
def test_valid_plus_skipped_is_total(tmp_path_factory, records):
    p = _jsonl(tmp_path_factory.mktemp("c") / "t.jsonl", records)
    try:
        res = load_documents(p, "jsonl", "tweet")
    except (EmptyCorpus, SchemaError):
        return
    assert len(res) + res.skipped == res.total == len(records)


def test_parse_timestamp_bare_date_stays_on_day():
    from zoneinfo import ZoneInfo

    ist = ZoneInfo("Asia/Kolkata")
    assert parse_timestamp("2020-04-01", ist).date() == date(2020, 4, 1)
    assert parse_timestamp("2020-03-31T20:00:00Z", ist).date() == date(2020, 4, 1)


# --- queries ------------------------------------------------------------------

def test_query_prefixes_cover_aliases():
    odisha = RegionSpec("Odisha", aliases=("Orissa",))
    q = generate_queries(odisha, ["corona "])
    assert "corona odisha" in q.plain_queries
    assert "corona orissa" in q.plain_queries


def test_hashtag_prefix():
    q = generate_queries(RegionSpec("Delhi"), ["corona "], ["coronain"])
    assert "#coronaindelhi" in q.hashtags
    assert all(h.startswith("#") for h in q.hashtags)


def test_query_counts():
    r = RegionSpec("Tamil Nadu", aliases=("TN",))
    q = generate_queries(r, ["corona ", "covid "], ["coronain"])
    assert len(q.plain_queries) == 2 * 2
    assert len(q.hashtags) == 2 * 1 + 2


@given(st.lists(st.text(alphabet="abc ", min_size=1, max_size=4), min_size=1, max_size=4),
       st.lists(st.text(alphabet="abc", max_size=3), max_size=3))
def test_queries_pure_sorted_unique(prefixes, tags):
    r = RegionSpec("Kerala", aliases=("kl",))
    a = generate_queries(r, prefixes, tags)
    b = generate_queries(r, list(prefixes), list(tags))
    assert a == b
    for seq in (a.plain_queries, a.hashtags):
        assert list(seq) == sorted(set(seq))


def test_region_spec_normalizes():
    r = RegionSpec(" West  Bengal ", aliases=("WB", "west bengal"), cities=("Kolkata", "wb"))
    assert r.canonical_name == "west bengal"
    assert r.aliases == ("wb",)
    assert r.cities == ("kolkata",)
    with pytest.raises(EmptyRegionSpec):
        RegionSpec("  ")


# --- location filter ----------------------------------------------------------

REGIONS = [
    RegionSpec("Delhi", cities=("New Delhi",), code="delhi"),
    RegionSpec("Maharashtra", cities=("Mumbai", "Pune"), code="maharashtra"),
]


def _tweet(i, loc):
    return Document(str(i), datetime(2020, 3, 1, tzinfo=timezone.utc), "", Source.TWEET, "x", loc)


def test_location_assignment():
    docs = [_tweet(1, "New Delhi, India"), _tweet(2, "London, UK"), _tweet(3, "Mumbai"),
            _tweet(4, "Goa, India"), _tweet(5, None)]
    out = filter_by_location(docs, "india", REGIONS)
    assert [d.id for d in out["delhi"]] == ["1"]
    assert out["maharashtra"] == []  # Mumbai without "india" fails the country filter
    assert [d.id for d in out[UNASSIGNED]] == ["4"]


def test_location_whole_words_only():
    assert not location_matches("Punekar, Indiana", REGIONS[1])
    assert location_matches("pune, india", REGIONS[1])
    out = filter_by_location([_tweet(1, "Indianapolis, Delhi")], "india", REGIONS)
    assert all(not v for v in out.values())


@given(st.text(alphabet="abcdehilnmpuw ,", max_size=30))
def test_assignment_requires_a_matching_term(loc):
    doc = _tweet(1, loc + " india")
    out = filter_by_location([doc], "india", REGIONS)
    for spec in REGIONS:
        if out[spec.code]:
            assert any(t in doc.user_location.lower() for t in spec.match_terms)


def test_dedup_by_source_and_id():
    t = _tweet(1, "x")
    b = Document("1", t.timestamp, "delhi", Source.BULLETIN, "y")
    assert dedup_by_id([t, t, b]) == [t, b]


def test_bundled_region_specs():
    specs = load_region_specs(_data_path("regions_india.toml"))
    codes = {s.code for s in specs}
    assert {"delhi", "odisha", "tamil_nadu"} <= codes
    odisha = next(s for s in specs if s.code == "odisha")
    assert "orissa" in odisha.aliases
