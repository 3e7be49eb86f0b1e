import pytest

from catfish.analytics import (age_diff_report, demographic_report,
                               interest_gain_report, popularity_report,
                               write_report_csvs)
from catfish.corpus import Gender, Interest
from catfish.detector import scan_corpus
from catfish.errors import DataError

from conftest import build_profile, tiny_corpus


@pytest.fixture(scope="module")
def scan(demo_corpus, demo_models):
    spec, gender_model, age_model = demo_models
    return scan_corpus(demo_corpus, gender_model, age_model, spec)


def _stat(report, group, name):
    rows = [s for s in report.stats if s.group == group and s.stat == name]
    assert len(rows) == 1, f"{group}/{name}"
    return rows[0]


def test_demographic_histograms_cover_every_aged_profile(demo_corpus):
    report = demographic_report(demo_corpus)
    for gender in (Gender.FEMALE, Gender.MALE):
        members = [p for p in demo_corpus.profiles
                   if p.reported_gender == gender]
        ages = [p.reported_age for p in members if p.reported_age is not None]
        hist = [s for s in report.series
                if s.series == "reported_age" and s.group == f"gender={gender.value}"]
        assert len(hist) == 1
        assert sum(hist[0].values) == len(ages)
        assert sum(hist[0].support) == len(ages)
        mean_row = _stat(report, f"gender={gender.value}", "mean_reported_age")
        assert mean_row.value == pytest.approx(sum(ages) / len(ages))
        count_row = _stat(report, f"gender={gender.value}", "count")
        assert count_row.value == len(members)
        friends_row = _stat(report, f"gender={gender.value}", "mean_friends")
        assert friends_row.value == pytest.approx(
            sum(p.friend_count for p in members) / len(members))


def test_demographic_interest_counts_are_exhaustive(demo_corpus):
    report = demographic_report(demo_corpus)
    for gender in (Gender.FEMALE, Gender.MALE):
        members = [p for p in demo_corpus.profiles
                   if p.reported_gender == gender]
        total = 0
        for interest in Interest:
            row = _stat(report, f"gender={gender.value}",
                        f"count_interest_{interest.value}")
            total += row.value
        assert total == len(members)


def test_age_diff_densities_sum_to_one(scan):
    report = age_diff_report(scan.verdicts)
    densities = [s for s in report.series if s.series == "age_delta"]
    assert densities
    for series in densities:
        assert sum(series.values) == pytest.approx(1.0, abs=1e-9)
        assert series.kind == "density"
    for gender in ("female", "male"):
        members = [v for v in scan.verdicts
                   if v.eligible and v.reported_gender == gender]
        flagged = [v for v in members if v.flagged]
        row = _stat(report, f"reported={gender}", "flag_rate")
        assert row.value == pytest.approx(len(flagged) / len(members))
        deltas = [v.age_delta for v in members if v.age_delta is not None]
        mean_row = _stat(report, f"reported={gender}", "mean_age_delta")
        assert mean_row.value == pytest.approx(sum(deltas) / len(deltas))


def test_popularity_groups_split_by_prediction_and_flag(demo_corpus, scan):
    report = popularity_report(demo_corpus, scan.verdicts)
    by_id = {p.id: p for p in demo_corpus.profiles}
    eligible = [v for v in scan.verdicts if v.eligible]
    all_row = _stat(report, "all", "mean_profile_views")
    assert all_row.n == len(eligible)
    assert all_row.value == pytest.approx(
        sum(by_id[v.id].profile_views for v in eligible) / len(eligible))
    for predicted in ("female", "male"):
        for flagged in ("false", "true"):
            members = [v for v in eligible
                       if v.predicted_gender == predicted
                       and str(v.flagged).lower() == flagged]
            group = f"predicted={predicted};flagged={flagged}"
            rows = [s for s in report.stats
                    if s.group == group and s.stat == "mean_friends"]
            if not members:
                assert not rows
                continue
            assert rows[0].value == pytest.approx(
                sum(by_id[v.id].friend_count for v in members) / len(members))
    assert report.notes


def test_interest_shares_sum_to_one_per_cohort(demo_corpus, scan):
    report = interest_gain_report(demo_corpus, scan.verdicts)
    cohorts = {s.group for s in report.stats if s.stat.startswith("share_interest_")}
    assert cohorts
    for group in cohorts:
        shares = [s.value for s in report.stats
                  if s.group == group and s.stat.startswith("share_interest_")]
        assert len(shares) == len(Interest)
        assert sum(shares) == pytest.approx(1.0, abs=1e-9)
    for series in report.series:
        assert series.series == "mean_friends_by_age"
        assert len(series.values) == len(series.edges) - 1


def test_reports_with_no_verdicts_are_rejected(demo_corpus):
    with pytest.raises(DataError):
        popularity_report(demo_corpus, [])
    with pytest.raises(DataError):
        interest_gain_report(demo_corpus, [])


def test_foreign_verdicts_are_rejected(scan):
    orphan = tiny_corpus([build_profile(id="not-in-scan")])
    with pytest.raises(DataError):
        popularity_report(orphan, scan.verdicts)


def test_written_csvs_are_stable_and_parseable(demo_corpus, scan, tmp_path):
    report = age_diff_report(scan.verdicts)
    first = write_report_csvs(report, tmp_path / "one")
    second = write_report_csvs(report, tmp_path / "two")
    assert [p.name for p in first] == ["age_gap_stats.csv", "age_gap_bins.csv"]
    for a, b in zip(first, second):
        assert a.read_bytes() == b.read_bytes()
    pop = popularity_report(demo_corpus, scan.verdicts)
    paths = write_report_csvs(pop, tmp_path / "three")
    assert [p.name for p in paths] == ["popularity_stats.csv",
                                       "popularity_bins.csv",
                                       "popularity_notes.txt"]
    notes = paths[-1].read_text()
    assert "gender-composition" in notes


def test_bins_csv_row_count_matches_series(scan, tmp_path):
    report = age_diff_report(scan.verdicts)
    paths = write_report_csvs(report, tmp_path)
    bins_lines = paths[1].read_text().splitlines()
    expected = sum(len(s.values) for s in report.series)
    assert len(bins_lines) == expected + 1
