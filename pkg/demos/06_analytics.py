#!/usr/bin/env python3
"""Corpus analytics: who is here, who gets attention, who exaggerates.

Builds the four report bundles (demographics, popularity, interest gain,
age gap) and renders a couple of them as terminal bar charts before
writing everything to CSV.
"""

from pathlib import Path

from catfish.analytics import (age_diff_report, demographic_report,
                               interest_gain_report, popularity_report,
                               write_report_csvs)
from catfish.detector import scan_corpus
from catfish.evaluation import TASK_AGE, TASK_GENDER, fit_fold, labeled_subset
from catfish.synth import SynthConfig, generate_corpus

OUT = Path(__file__).resolve().parent / "out"
BAR_WIDTH = 40


def bars(series, limit=None):
    pairs = list(zip(series.edges, series.values))[:limit]
    top = max((v for _, v in pairs), default=0.0) or 1.0
    for edge, value in pairs:
        bar = "#" * round(BAR_WIDTH * value / top)
        print(f"  {edge:7.1f} | {bar} {value:.3g}")


def main():
    corpus, _ = generate_corpus(SynthConfig(n_profiles=800, seed=7,
                                            catfish_fraction=0.2,
                                            verified_fraction=0.15))
    train = labeled_subset(corpus, TASK_GENDER, min_comments=10,
                           verified_only=True)
    spec, gender_model = fit_fold(train, TASK_GENDER)
    _, age_model = fit_fold(train, TASK_AGE)
    scan = scan_corpus(corpus, gender_model, age_model, spec)

    demo = demographic_report(corpus)
    print("== reported age distribution (female), left bin edges")
    series = next(s for s in demo.series
                  if s.series == "reported_age" and s.group == "gender=female")
    bars(series, limit=18)

    gap = age_diff_report(scan.verdicts)
    print("\n== predicted-minus-claimed age density (male claimants)")
    series = next(s for s in gap.series
                  if s.series == "age_delta" and s.group == "reported=male")
    center = [(e, v) for e, v in zip(series.edges, series.values)
              if -12 <= e <= 12]
    top = max((v for _, v in center), default=0.0) or 1.0
    for edge, value in center:
        bar = "#" * round(BAR_WIDTH * value / top)
        print(f"  {edge:+6.1f} | {bar} {value:.3f}")

    pop = popularity_report(corpus, scan.verdicts)
    print("\n== popularity")
    for row in pop.stats:
        if row.stat == "mean_profile_views":
            print(f"  {row.group:>30}: {row.value:10.0f} views "
                  f"(n={row.n})")
    for note in pop.notes:
        print(f"  note: {note}")

    gain = interest_gain_report(corpus, scan.verdicts)

    OUT.mkdir(exist_ok=True)
    written = []
    for report in (demo, pop, gain, gap):
        written += write_report_csvs(report, OUT)
    print(f"\nwrote {len(written)} CSV files to {OUT}:")
    for path in written:
        print(f"  {path.name}")


if __name__ == "__main__":
    main()
