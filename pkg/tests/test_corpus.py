import json

import pytest

from catfish.corpus import (ADULT_AGE_FLOOR, AGE_CAP, Comment, Corpus, Gender,
                            Interest, JSONL_KEYS, Profile, Status,
                            corpus_summary, eligible_subset, load_corpus,
                            save_corpus)
from catfish.errors import CorpusError, ValidationError

from conftest import build_profile, tiny_corpus


def test_profile_validates_age_range(make_profile):
    with pytest.raises(ValidationError):
        make_profile(age=17)
    with pytest.raises(ValidationError):
        make_profile(age=61)
    assert make_profile(age=None).reported_age is None
    assert make_profile(age=ADULT_AGE_FLOOR).reported_age == 18
    assert make_profile(age=AGE_CAP).reported_age == 60


def test_comment_text_must_not_be_blank():
    with pytest.raises(ValidationError):
        Comment("   ")
    with pytest.raises(ValidationError):
        Comment("")


def test_pct_pair_cannot_exceed_one(make_profile):
    with pytest.raises(ValidationError):
        make_profile(pct_mf=0.7, pct_ff=0.4)
    p = make_profile(pct_mf=0.7, pct_ff=0.3)
    assert p.pct_male_friends == 0.7


def test_corpus_rejects_duplicate_ids(make_profile):
    with pytest.raises(ValidationError):
        tiny_corpus([make_profile(id="a"), make_profile(id="a")])


def test_by_id_lookup(make_profile):
    corpus = tiny_corpus([make_profile(id="a"), make_profile(id="b")])
    assert corpus.by_id("b").id == "b"
    with pytest.raises(KeyError):
        corpus.by_id("zzz")


def test_save_load_round_trip(tmp_path, demo_corpus):
    path = tmp_path / "corpus.jsonl"
    save_corpus(demo_corpus, path)
    loaded = load_corpus(path)
    assert len(loaded.profiles) == len(demo_corpus.profiles)
    for a, b in zip(demo_corpus.profiles, loaded.profiles):
        assert a == b
    # a second save of the loaded corpus is byte-identical
    again = tmp_path / "again.jsonl"
    save_corpus(loaded, again)
    assert path.read_bytes() == again.read_bytes()


def _record(**overrides):
    base = {
        "id": "r1", "verified": False, "gender": "female", "age": 30,
        "interested_in": None, "country": "us", "status": None,
        "videos_watched": 1, "videos_posted": 0, "profile_views": 5,
        "friends": 2, "subscribers": 0, "subscriptions": 0,
        "pct_male_friends": None, "pct_female_friends": None,
        "pct_male_subscribers": None, "pct_female_subscribers": None,
        "comments": ["hello there"],
    }
    base.update(overrides)
    return base


def _write_jsonl(path, records):
    path.write_text("".join(json.dumps(r) + "\n" for r in records),
                    encoding="utf-8")


def test_load_reports_line_numbers(tmp_path):
    path = tmp_path / "bad.jsonl"
    path.write_text(json.dumps(_record()) + "\n" + "{not json\n",
                    encoding="utf-8")
    with pytest.raises(CorpusError) as err:
        load_corpus(path)
    assert err.value.line == 2


def test_load_rejects_unknown_and_missing_keys(tmp_path):
    path = tmp_path / "keys.jsonl"
    bad = _record()
    bad.pop("country")
    bad["bogus"] = 1
    _write_jsonl(path, [bad])
    with pytest.raises(CorpusError) as err:
        load_corpus(path)
    assert "country" in str(err.value) and "bogus" in str(err.value)


def test_load_skips_underage_with_warning(tmp_path, caplog):
    path = tmp_path / "young.jsonl"
    _write_jsonl(path, [_record(id="ok"), _record(id="young", age=15)])
    with caplog.at_level("WARNING"):
        corpus = load_corpus(path)
    assert [p.id for p in corpus.profiles] == ["ok"]
    assert any("young" in r.message or "line 2" in r.message
               for r in caplog.records)


def test_load_caps_large_ages(tmp_path):
    path = tmp_path / "old.jsonl"
    _write_jsonl(path, [_record(age=97)])
    corpus = load_corpus(path)
    assert corpus.profiles[0].reported_age == AGE_CAP


def test_load_rejects_duplicate_ids(tmp_path):
    path = tmp_path / "dup.jsonl"
    _write_jsonl(path, [_record(id="x"), _record(id="x")])
    with pytest.raises(CorpusError) as err:
        load_corpus(path)
    assert err.value.line == 2


def test_unspecified_enums_round_trip_as_null(tmp_path, make_profile):
    p = make_profile(interest=Interest.UNSPECIFIED, status=Status.UNSPECIFIED)
    path = tmp_path / "null.jsonl"
    save_corpus(tiny_corpus([p]), path)
    record = json.loads(path.read_text())
    assert record["interested_in"] is None
    assert record["status"] is None
    assert list(record) == list(JSONL_KEYS)
    loaded = load_corpus(path)
    assert loaded.profiles[0].interested_in is Interest.UNSPECIFIED
    assert loaded.profiles[0].relationship_status is Status.UNSPECIFIED


def test_eligible_subset_filters_on_comment_count(make_profile):
    few = make_profile(id="few", comments=["one"] * 3)
    many = make_profile(id="many", comments=[f"c {i}" for i in range(12)])
    corpus = tiny_corpus([few, many])
    assert [p.id for p in eligible_subset(corpus, 10)] == ["many"]
    assert [p.id for p in eligible_subset(corpus, 1)] == ["few", "many"]


def test_corpus_summary_counts(make_profile):
    profiles = [
        make_profile(id="f1", gender=Gender.FEMALE, age=20, verified=True),
        make_profile(id="f2", gender=Gender.FEMALE, age=40),
        make_profile(id="m1", gender=Gender.MALE, age=30),
        make_profile(id="o1", gender=Gender.OTHER, age=None),
    ]
    summary = corpus_summary(tiny_corpus(profiles))
    assert summary.n_profiles == 4
    assert summary.verified_count == 1
    assert summary.verified_fraction == pytest.approx(0.25)
    stats = summary.by_gender
    assert stats[Gender.FEMALE].count == 2
    assert stats[Gender.FEMALE].verified_count == 1
    assert stats[Gender.FEMALE].mean_age == pytest.approx(30.0)
    assert stats[Gender.OTHER].mean_age is None
