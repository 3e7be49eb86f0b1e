"""Aggregate views of a corpus and its scan results.

Every report is a plain data bundle (binned series plus scalar stats)
that the CLI renders to CSV. Binned series always carry their edges so
the CSV is self-describing; stats rows carry the group they summarize
and the sample count behind the number.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .corpus import Corpus, Gender, Interest, Profile
from .detector import CatfishVerdict
from .errors import DataError
from .netfeat import GENDER_MIX_CAVEAT

AGE_EDGES = tuple(17.5 + i for i in range(44))            # one-year bins, 18..60
AGE_BAND_EDGES = tuple(17.5 + 5 * i for i in range(10))   # five-year bands
DELTA_EDGES = tuple(-42.5 + i for i in range(86))         # one-year bins, -42..42
VIEW_EDGES = (0.0, 1.0) + tuple(float(2 ** i) for i in range(1, 23)) + (math.inf,)


@dataclass(frozen=True)
class BinnedSeries:
    series: str
    group: str
    kind: str          # "count", "density" or "mean"
    edges: tuple[float, ...]
    values: tuple[float, ...]
    support: tuple[int, ...]

    def __post_init__(self):
        if len(self.edges) != len(self.values) + 1 or len(self.values) != len(self.support):
            raise DataError("binned series edges/values/support lengths disagree")


@dataclass(frozen=True)
class StatRow:
    group: str
    stat: str
    value: float
    n: int


@dataclass(frozen=True)
class AnalyticsReport:
    name: str
    series: tuple[BinnedSeries, ...]
    stats: tuple[StatRow, ...]
    notes: tuple[str, ...] = ()


def _group_label(**parts) -> str:
    return ";".join(f"{k}={v}" for k, v in parts.items())


def _count_hist(values: Sequence[float], edges: tuple[float, ...]) -> tuple:
    counts, _ = np.histogram(np.asarray(values, dtype=float), bins=np.array(edges))
    return tuple(float(c) for c in counts), tuple(int(c) for c in counts)


def _mean_by_bin(keys: Sequence[float], values: Sequence[float],
                 edges: tuple[float, ...]) -> tuple:
    """Mean of `values` within each key bin; empty bins report 0 with support 0."""
    keys = np.asarray(keys, dtype=float)
    values = np.asarray(values, dtype=float)
    slots = np.digitize(keys, np.array(edges)) - 1
    means, support = [], []
    for b in range(len(edges) - 1):
        members = values[slots == b]
        support.append(int(len(members)))
        means.append(float(members.mean()) if len(members) else 0.0)
    return tuple(means), tuple(support)


def demographic_report(corpus: Corpus) -> AnalyticsReport:
    """Reported age and interest breakdown for binary-gender profiles."""
    series: list[BinnedSeries] = []
    stats: list[StatRow] = []
    for gender in (Gender.FEMALE, Gender.MALE):
        members = [p for p in corpus.profiles if p.reported_gender == gender]
        group = _group_label(gender=gender.value)
        ages = [float(p.reported_age) for p in members if p.reported_age is not None]
        if ages:
            values, support = _count_hist(ages, AGE_EDGES)
            series.append(BinnedSeries("reported_age", group, "count",
                                       AGE_EDGES, values, support))
            stats.append(StatRow(group, "mean_reported_age",
                                 sum(ages) / len(ages), len(ages)))
        stats.append(StatRow(group, "count", float(len(members)), len(members)))
        if members:
            for stat, attr in (("mean_friends", "friend_count"),
                               ("mean_subscribers", "subscriber_count"),
                               ("mean_subscriptions", "subscription_count")):
                total = sum(getattr(p, attr) for p in members)
                stats.append(StatRow(group, stat, total / len(members), len(members)))
        for interest in Interest:
            n = sum(1 for p in members if p.interested_in == interest)
            stats.append(StatRow(group, f"count_interest_{interest.value}",
                                 float(n), len(members)))
    return AnalyticsReport("demographics", tuple(series), tuple(stats))


def _eligible_with_profiles(corpus: Corpus,
                            verdicts: Sequence[CatfishVerdict]):
    index = {p.id: p for p in corpus.profiles}
    pairs = []
    for verdict in verdicts:
        if not verdict.eligible:
            continue
        profile = index.get(verdict.id)
        if profile is None:
            raise DataError(f"verdict {verdict.id!r} does not match any profile")
        pairs.append((profile, verdict))
    return pairs


def popularity_report(corpus: Corpus,
                      verdicts: Sequence[CatfishVerdict]) -> AnalyticsReport:
    """Views and friends across predicted-gender honest/flagged groups."""
    if not verdicts:
        raise DataError("popularity report needs scan verdicts")
    pairs = _eligible_with_profiles(corpus, verdicts)
    groups: dict[str, list[Profile]] = {"all": []}
    for profile, verdict in pairs:
        groups["all"].append(profile)
        if verdict.predicted_gender in (Gender.MALE.value, Gender.FEMALE.value):
            label = _group_label(predicted=verdict.predicted_gender,
                                 flagged=str(verdict.flagged).lower())
            groups.setdefault(label, []).append(profile)
    series: list[BinnedSeries] = []
    stats: list[StatRow] = []
    for label in sorted(groups):
        members = groups[label]
        if not members:
            continue
        views = [float(p.profile_views) for p in members]
        friends = [float(p.friend_count) for p in members]
        means, support = _mean_by_bin(views, friends, VIEW_EDGES)
        series.append(BinnedSeries("mean_friends_by_views", label, "mean",
                                   VIEW_EDGES, means, support))
        stats.append(StatRow(label, "mean_profile_views",
                             sum(views) / len(views), len(views)))
        stats.append(StatRow(label, "mean_friends",
                             sum(friends) / len(friends), len(friends)))
    return AnalyticsReport("popularity", tuple(series), tuple(stats),
                           notes=(GENDER_MIX_CAVEAT,))


def interest_gain_report(corpus: Corpus,
                         verdicts: Sequence[CatfishVerdict]) -> AnalyticsReport:
    """Friend counts by age band, split by predicted gender, stated interest
    and flag status; plus interest shares inside each predicted gender."""
    if not verdicts:
        raise DataError("interest report needs scan verdicts")
    pairs = _eligible_with_profiles(corpus, verdicts)
    series: list[BinnedSeries] = []
    stats: list[StatRow] = []
    for predicted in (Gender.FEMALE.value, Gender.MALE.value):
        for flagged in (False, True):
            cohort = [(p, v) for p, v in pairs
                      if v.predicted_gender == predicted and v.flagged == flagged]
            if not cohort:
                continue
            group = _group_label(predicted=predicted, flagged=str(flagged).lower())
            for interest in Interest:
                members = [p for p, _ in cohort if p.interested_in == interest]
                stats.append(StatRow(group, f"share_interest_{interest.value}",
                                     len(members) / len(cohort), len(cohort)))
                aged = [(float(p.reported_age), float(p.friend_count))
                        for p in members if p.reported_age is not None]
                if not aged:
                    continue
                means, support = _mean_by_bin([a for a, _ in aged],
                                              [f for _, f in aged],
                                              AGE_BAND_EDGES)
                series.append(BinnedSeries(
                    "mean_friends_by_age", f"{group};interest={interest.value}",
                    "mean", AGE_BAND_EDGES, means, support))
    return AnalyticsReport("interest", tuple(series), tuple(stats),
                           notes=(GENDER_MIX_CAVEAT,))


def age_diff_report(verdicts: Sequence[CatfishVerdict]) -> AnalyticsReport:
    """Distribution of prediction-minus-claim age gaps per reported gender."""
    series: list[BinnedSeries] = []
    stats: list[StatRow] = []
    eligible = [v for v in verdicts if v.eligible]
    for gender in (Gender.FEMALE.value, Gender.MALE.value):
        members = [v for v in eligible if v.reported_gender == gender]
        deltas = [v.age_delta for v in members if v.age_delta is not None]
        group = _group_label(reported=gender)
        if deltas:
            counts, support = _count_hist(deltas, DELTA_EDGES)
            total = sum(counts)
            density = tuple(c / total for c in counts)
            series.append(BinnedSeries("age_delta", group, "density",
                                       DELTA_EDGES, density, support))
            stats.append(StatRow(group, "mean_age_delta",
                                 sum(deltas) / len(deltas), len(deltas)))
        flagged = [v for v in members if v.flagged]
        if members:
            stats.append(StatRow(group, "flag_rate",
                                 len(flagged) / len(members), len(members)))
        flagged_ages = [float(v.reported_age) for v in flagged
                        if v.reported_age is not None]
        if flagged_ages:
            values, support = _count_hist(flagged_ages, AGE_EDGES)
            series.append(BinnedSeries("flagged_reported_age", group, "count",
                                       AGE_EDGES, values, support))
            stats.append(StatRow(group, "mean_flagged_reported_age",
                                 sum(flagged_ages) / len(flagged_ages),
                                 len(flagged_ages)))
    return AnalyticsReport("age_gap", tuple(series), tuple(stats))


def _fmt(value: float) -> str:
    return "%.10g" % value


def write_report_csvs(report: AnalyticsReport, out_dir: str | Path) -> list[Path]:
    """Write <name>_stats.csv, <name>_bins.csv and optional notes; returns paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    stats_path = out_dir / f"{report.name}_stats.csv"
    with open(stats_path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["group", "stat", "value", "n"])
        for row in report.stats:
            writer.writerow([row.group, row.stat, _fmt(row.value), row.n])
    written.append(stats_path)

    bins_path = out_dir / f"{report.name}_bins.csv"
    with open(bins_path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["series", "group", "kind", "bin_left", "bin_right",
                         "value", "support"])
        for s in report.series:
            for b, value in enumerate(s.values):
                writer.writerow([s.series, s.group, s.kind, _fmt(s.edges[b]),
                                 _fmt(s.edges[b + 1]), _fmt(value), s.support[b]])
    written.append(bins_path)

    if report.notes:
        notes_path = out_dir / f"{report.name}_notes.txt"
        notes_path.write_text("\n".join(report.notes) + "\n", encoding="utf-8")
        written.append(notes_path)
    return written
