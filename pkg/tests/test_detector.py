import dataclasses

import pytest

from catfish.corpus import Gender
from catfish.detector import (DetectorConfig, ScanResult, flag_profile,
                              read_verdicts_csv, scan_corpus,
                              write_verdicts_csv)
from catfish.errors import ConfigError, DataError, FingerprintMismatchError

from conftest import build_profile, tiny_corpus

CHATTY = ["nice video friend"] * 12


@pytest.fixture(scope="module")
def scan(demo_corpus, demo_models):
    spec, gender_model, age_model = demo_models
    return scan_corpus(demo_corpus, gender_model, age_model, spec)


def test_config_validation():
    with pytest.raises(ConfigError):
        DetectorConfig(age_threshold=0.0)
    with pytest.raises(ConfigError):
        DetectorConfig(age_threshold=-2.0)
    with pytest.raises(ConfigError):
        DetectorConfig(min_comments=-1)


def test_scan_covers_exactly_the_eligible_unverified(demo_corpus, scan):
    expected = [p.id for p in demo_corpus.profiles
                if not p.verified and len(p.comments) >= 10]
    assert [v.id for v in scan.verdicts] == expected
    assert all(v.eligible for v in scan.verdicts)


def test_raising_the_threshold_never_flags_more(demo_corpus, demo_models):
    spec, gender_model, age_model = demo_models
    flagged = []
    gender_flags = []
    for threshold in (1.0, 5.0, 20.0):
        result = scan_corpus(demo_corpus, gender_model, age_model, spec,
                             DetectorConfig(age_threshold=threshold))
        flagged.append(len(result.flagged))
        gender_flags.append([v.id for v in result.verdicts if v.gender_flag])
    assert flagged[0] >= flagged[1] >= flagged[2]
    assert gender_flags[0] == gender_flags[1] == gender_flags[2]


def test_short_profiles_are_ineligible(demo_models):
    spec, gender_model, age_model = demo_models
    quiet = build_profile(id="quiet", comments=["hi"] * 3, age=40)
    verdict = flag_profile(quiet, gender_model, age_model, spec)
    assert not verdict.eligible
    assert verdict.predicted_gender is None
    assert verdict.predicted_age is None
    assert verdict.age_delta is None
    assert not verdict.flagged


def test_other_gender_never_gender_flagged(demo_models):
    spec, gender_model, age_model = demo_models
    profile = build_profile(id="x", gender=Gender.OTHER, comments=CHATTY)
    verdict = flag_profile(profile, gender_model, age_model, spec)
    assert verdict.eligible
    assert verdict.predicted_gender in ("male", "female")
    assert not verdict.gender_flag


def test_missing_age_disables_the_age_rule(demo_models):
    spec, gender_model, age_model = demo_models
    profile = build_profile(id="noage", age=None, comments=CHATTY)
    verdict = flag_profile(profile, gender_model, age_model, spec,
                           DetectorConfig(age_threshold=0.001))
    assert verdict.age_delta is None
    assert not verdict.age_flag
    assert verdict.predicted_age is not None


def test_age_flag_tracks_delta_against_threshold(demo_models):
    spec, gender_model, age_model = demo_models
    profile = build_profile(id="aged", age=30, comments=CHATTY)
    strict = flag_profile(profile, gender_model, age_model, spec,
                          DetectorConfig(age_threshold=1e-6))
    assert strict.age_delta == pytest.approx(strict.predicted_age - 30.0)
    assert strict.age_flag == (abs(strict.age_delta) > 1e-6)
    lax = flag_profile(profile, gender_model, age_model, spec,
                       DetectorConfig(age_threshold=1000.0))
    assert not lax.age_flag
    assert lax.age_delta == strict.age_delta


def test_group_stats_agree_with_manual_counts(scan):
    for gender, stats in scan.by_reported_gender.items():
        members = [v for v in scan.verdicts if v.reported_gender == gender]
        eligible = [v for v in members if v.eligible]
        flagged = [v for v in eligible if v.flagged]
        assert stats.n_scanned == len(members)
        assert stats.n_eligible == len(eligible)
        assert stats.n_flagged == len(flagged)
        assert stats.flag_rate == pytest.approx(len(flagged) / len(eligible))
        deltas = [v.age_delta for v in eligible if v.age_delta is not None]
        assert stats.mean_age_delta == pytest.approx(sum(deltas) / len(deltas))
    assert scan.flagged == tuple(v for v in scan.verdicts if v.flagged)


def test_verdict_csv_write_read_write_is_stable(scan, tmp_path):
    first = tmp_path / "verdicts.csv"
    write_verdicts_csv(scan.verdicts, first)
    loaded = read_verdicts_csv(first)
    assert len(loaded) == len(scan.verdicts)
    assert [v.id for v in loaded] == [v.id for v in scan.verdicts]
    assert [v.flagged for v in loaded] == [v.flagged for v in scan.verdicts]
    second = tmp_path / "again.csv"
    write_verdicts_csv(loaded, second)
    assert first.read_bytes() == second.read_bytes()


def test_verdict_csv_rejects_foreign_files(scan, tmp_path):
    path = tmp_path / "verdicts.csv"
    write_verdicts_csv(scan.verdicts, path)
    text = path.read_text()
    tampered = tmp_path / "tampered.csv"
    tampered.write_text(text.replace("reported_gender", "gender", 1))
    with pytest.raises(DataError):
        read_verdicts_csv(tampered)
    truncated = tmp_path / "truncated.csv"
    lines = text.splitlines()
    lines[1] = lines[1].rsplit(",", 1)[0]
    truncated.write_text("\n".join(lines) + "\n")
    with pytest.raises(DataError):
        read_verdicts_csv(truncated)


def test_scan_warns_when_nothing_is_eligible(demo_models):
    spec, gender_model, age_model = demo_models
    quiet = tiny_corpus([
        build_profile(id="v1", verified=True, comments=CHATTY),
        build_profile(id="u1", comments=["hi"]),
    ])
    with pytest.warns(UserWarning, match="nothing to scan"):
        result = scan_corpus(quiet, gender_model, age_model, spec)
    assert result.verdicts == ()
    assert result.by_reported_gender == {}


def test_mismatched_models_are_rejected(demo_corpus, demo_models):
    spec, gender_model, age_model = demo_models
    foreign = dataclasses.replace(age_model, spec_fingerprint="0" * 64)
    with pytest.raises(FingerprintMismatchError):
        scan_corpus(demo_corpus, gender_model, foreign, spec)
    with pytest.raises(FingerprintMismatchError):
        flag_profile(build_profile(comments=CHATTY), gender_model, foreign, spec)
