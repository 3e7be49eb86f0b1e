#!/usr/bin/env python3
"""Flag unverified profiles whose claims disagree with the models.

Trains on the verified slice, scans everyone else, prints per-group flag
rates and a few concrete verdicts, then scores the scan against the
planted ground truth the generator left behind.
"""

from pathlib import Path

from catfish.detector import scan_corpus, write_verdicts_csv
from catfish.evaluation import TASK_AGE, TASK_GENDER, fit_fold, labeled_subset
from catfish.synth import SynthConfig, generate_corpus, oracle_eval

OUT = Path(__file__).resolve().parent / "out"


def main():
    corpus, truth = generate_corpus(SynthConfig(n_profiles=800, seed=7,
                                                catfish_fraction=0.2,
                                                verified_fraction=0.15))
    train = labeled_subset(corpus, TASK_GENDER, min_comments=10,
                           verified_only=True)
    spec, gender_model = fit_fold(train, TASK_GENDER)
    _, age_model = fit_fold(train, TASK_AGE)

    result = scan_corpus(corpus, gender_model, age_model, spec)
    print(f"scanned {len(result.verdicts)} unverified profiles, "
          f"{len(result.flagged)} flagged "
          f"(age threshold {result.config.age_threshold} years, "
          f"minimum {result.config.min_comments} comments)")

    print("\nby reported gender:")
    for gender, stats in sorted(result.by_reported_gender.items()):
        delta = (f"{stats.mean_age_delta:+.2f}"
                 if stats.mean_age_delta is not None else "n/a")
        print(f"  {gender:>6}: {stats.n_flagged}/{stats.n_eligible} flagged "
              f"({100 * stats.flag_rate:.1f}%), "
              f"mean predicted-minus-claimed age {delta}")

    print("\nsample verdicts:")
    for verdict in result.flagged[:4]:
        reasons = []
        if verdict.gender_flag:
            reasons.append(f"claims {verdict.reported_gender}, "
                           f"predicted {verdict.predicted_gender}")
        if verdict.age_flag:
            reasons.append(f"claims {verdict.reported_age}, "
                           f"predicted {verdict.predicted_age:.1f}")
        print(f"  {verdict.id}: " + "; ".join(reasons))

    OUT.mkdir(exist_ok=True)
    csv_path = OUT / "verdicts.csv"
    write_verdicts_csv(result.verdicts, csv_path)
    print(f"\nwrote {csv_path}")

    report = oracle_eval(truth, result.verdicts)
    print(f"\nagainst planted truth: precision {report.precision:.3f}, "
          f"recall {report.recall:.3f} "
          f"({report.true_positives}/{report.n_flagged} flags correct, "
          f"{report.n_planted} planted)")
    for kind, recall in sorted(report.recall_by_kind.items()):
        print(f"  recall on {kind:>6} lies: {recall:.3f}")


if __name__ == "__main__":
    main()
