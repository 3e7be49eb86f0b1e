#!/usr/bin/env python3
"""What the content feature group actually measures.

Walks one profile through tokenization, the fitted vocabulary, the category
lexicon and the count statistics, printing each intermediate value.
"""

from catfish.synth import SynthConfig, generate_corpus
from catfish.textfeat import (build_vocabulary, content_features, count_features,
                              demo_lexicon, informality, lexicon_features,
                              profile_tokens, tokenize)


def main():
    corpus, _ = generate_corpus(SynthConfig(n_profiles=800, seed=7,
                                            catfish_fraction=0.2,
                                            verified_fraction=0.15))
    # pick a talkative profile so the fractions have some support
    profile = max(corpus, key=lambda p: len(p.comments))
    print(f"profile {profile.id}: {len(profile.comments)} comments, "
          f"reported {profile.reported_gender.value}, "
          f"age {profile.reported_age}")

    sample = profile.comments[0].text
    print(f"\nfirst comment: {sample!r}")
    print(f"tokens:        {tokenize(sample)}")

    vocab = build_vocabulary(corpus, min_df=20)
    print(f"\nvocabulary: {len(vocab)} terms present in >=20 profiles")
    print(f"  first ten: {vocab.terms[:10]}")

    lexicon = demo_lexicon()
    pcts = lexicon_features(profile, lexicon)
    print(f"\nlexicon category fractions over {len(profile_tokens(profile))} tokens:")
    for name in lexicon.category_names:
        print(f"  {name:>10}: {pcts[name]:.4f}")
    print(f"  informality: {informality(profile, lexicon):.4f} "
          f"(tokens outside all three dictionaries)")

    counts = count_features(profile)
    print(f"\ncount features: {counts.comment_count} comments, "
          f"{counts.pct_unique_comments:.3f} unique, "
          f"vocabulary variety {counts.vocabulary_variety:.3f}")

    bundle = content_features(profile, vocab, lexicon)
    print(f"\nfull content bundle: {len(bundle.bow)} of {len(vocab)} "
          f"vocabulary terms present, {len(bundle.lexicon_pcts)} category "
          f"fractions, 4 scalar statistics")


if __name__ == "__main__":
    main()
