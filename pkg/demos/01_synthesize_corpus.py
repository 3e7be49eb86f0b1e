#!/usr/bin/env python3
"""Generate a synthetic profile corpus with planted catfish and look inside.

The generator plants a known fraction of liars (wrong gender, shifted age,
or both) and writes the truth next to the corpus, so every later stage of
the pipeline can be scored against ground truth nobody had to label.
"""

import collections
import json
from pathlib import Path

from catfish.corpus import corpus_summary, load_corpus, save_corpus
from catfish.synth import SynthConfig, generate_corpus, save_ground_truth

OUT = Path(__file__).resolve().parent / "out"


def main():
    config = SynthConfig(n_profiles=800, seed=7, catfish_fraction=0.2,
                         verified_fraction=0.15)
    corpus, truth = generate_corpus(config)

    OUT.mkdir(exist_ok=True)
    corpus_path = OUT / "demo_corpus.jsonl"
    save_corpus(corpus, corpus_path)
    truth_path = OUT / "demo_corpus.truth.jsonl"
    save_ground_truth(truth, truth_path)
    print(f"wrote {corpus_path}")
    print(f"wrote {truth_path}")

    summary = corpus_summary(corpus)
    print(f"\n{summary.n_profiles} profiles, "
          f"{summary.verified_count} verified "
          f"({100 * summary.verified_fraction:.1f}%)")
    for gender, stats in summary.by_gender.items():
        if stats.count == 0:
            continue
        age = f"{stats.mean_age:.1f}" if stats.mean_age is not None else "n/a"
        print(f"  {gender.value:>8}: {stats.count:4d} profiles "
              f"({stats.verified_count} verified), mean reported age {age}, "
              f"mean friends {stats.mean_friends:.0f}")

    kinds = collections.Counter(r.kind for r in truth.records if r.catfish)
    print(f"\nplanted catfish: {sum(kinds.values())} of {summary.n_profiles}")
    for kind, n in sorted(kinds.items()):
        print(f"  {kind:>6}: {n}")

    # one raw line, pretty-printed, to show the on-disk schema
    first = corpus_path.read_text(encoding="utf-8").splitlines()[0]
    record = json.loads(first)
    record["comments"] = record["comments"][:2] + ["..."]
    print("\nfirst profile on disk:")
    print(json.dumps(record, indent=2)[:800])

    # reload and confirm the round trip is exact
    again = load_corpus(corpus_path)
    assert len(again) == len(corpus)
    print(f"\nreloaded {len(again)} profiles, round trip OK")


if __name__ == "__main__":
    main()
