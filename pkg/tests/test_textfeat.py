import random

import pytest

from catfish.errors import ConfigError, DataError, ValidationError
from catfish.textfeat import (CategoryLexicon, LexiconSet, Vocabulary,
                              bow_features, build_vocabulary, content_features,
                              count_features, demo_lexicon, informality,
                              lexicon_features, lexicon_from_dict,
                              lexicon_to_dict, load_lexicon, tokenize,
                              write_lexicon)

from conftest import build_profile, tiny_corpus


def test_tokenize_lowercases_and_splits_punctuation():
    assert tokenize("Hello, World!") == ["hello", "world"]
    assert tokenize("gr8 vid!!! 10/10") == ["gr8", "vid", "10", "10"]
    assert tokenize("") == []
    assert tokenize("   \t\n ") == []


def test_tokenize_excludes_underscores_keeps_unicode():
    assert tokenize("snake_case") == ["snake", "case"]
    assert tokenize("très bien") == ["très", "bien"]


def test_build_vocabulary_applies_min_df(make_profile):
    profiles = [
        make_profile(id="a", comments=["apple banana", "apple cherry"]),
        make_profile(id="b", comments=["banana date"]),
        make_profile(id="c", comments=["banana apple"]),
    ]
    vocab = build_vocabulary(tiny_corpus(profiles), min_df=2)
    # document frequency counts profiles, not comments
    assert set(vocab.terms) == {"apple", "banana"}
    assert vocab.term_index == {"apple": 0, "banana": 1}
    all_terms = build_vocabulary(tiny_corpus(profiles), min_df=1)
    assert set(all_terms.terms) == {"apple", "banana", "cherry", "date"}


def test_vocabulary_terms_sorted_and_dense():
    with pytest.raises(ValidationError):
        Vocabulary(term_index={"b": 0, "a": 1}, min_document_frequency=1)
    with pytest.raises(ValidationError):
        Vocabulary(term_index={"a": 0, "b": 2}, min_document_frequency=1)


def test_bow_is_binary_presence(make_profile):
    p = make_profile(comments=["apple apple apple", "apple banana"])
    vocab = Vocabulary(term_index={"apple": 0, "banana": 1, "zzz": 2},
                       min_document_frequency=1)
    feats = bow_features(p, vocab)
    assert feats == {0: 1.0, 1: 1.0}


def _toy_lexicon():
    return LexiconSet(
        categories={
            "emotion": CategoryLexicon(literals=frozenset({"happy", "sad"}),
                                       prefixes=("lov",)),
            "question": CategoryLexicon(literals=frozenset({"why"}),
                                        prefixes=()),
        },
        dictionaries={
            "en": frozenset({"happy", "sad", "why", "the", "video", "lovely"}),
            "fr": frozenset({"tres", "bien"}),
            "de": frozenset({"sehr", "gut"}),
        },
    )


def test_lexicon_fractions_match_hand_count(make_profile):
    lex = _toy_lexicon()
    p = make_profile(comments=["happy lovely video", "why sad the video"])
    # 7 tokens; emotion matches: happy, lovely (prefix), sad -> 3/7
    feats = lexicon_features(p, lex)
    assert feats["emotion"] == pytest.approx(3 / 7)
    assert feats["question"] == pytest.approx(1 / 7)


def test_lexicon_prefix_matching_rules():
    cat = CategoryLexicon(literals=frozenset({"kin"}), prefixes=("fam",))
    assert cat.matches("family")
    assert cat.matches("famished")
    assert cat.matches("kin")
    assert not cat.matches("kind")  # literal is exact, no prefix for "kin"
    assert not cat.matches("fa")


def test_count_features_tracks_duplicates(make_profile):
    p = make_profile(comments=["same text", "same text", "other words here"])
    stats = count_features(p)
    assert stats.comment_count == 3
    assert stats.pct_unique_comments == pytest.approx(2 / 3)
    # tokens: same text same text other words here -> 5 distinct of 7
    assert stats.vocabulary_variety == pytest.approx(5 / 7)


def test_count_features_empty_profile(make_profile):
    stats = count_features(make_profile(comments=()))
    assert stats == type(stats)(0, 0.0, 0.0)


def test_informality_counts_unknown_nonnumeric_tokens(make_profile):
    lex = _toy_lexicon()
    p = make_profile(comments=["the video gr8", "thx 42 bien"])
    # tokens: the, video, gr8, thx, 42, bien -> informal: gr8, thx (42 is numeric)
    assert informality(p, lex) == pytest.approx(2 / 6)


def test_informality_requires_all_dictionaries(make_profile):
    lex = LexiconSet(
        categories={"emotion": CategoryLexicon(literals=frozenset({"x"}),
                                               prefixes=())},
        dictionaries={"en": frozenset({"the"})},
    )
    with pytest.raises(ConfigError):
        informality(make_profile(), lex)


def test_informality_custom_predicate(make_profile):
    p = make_profile(comments=["aa bb cc"])
    assert informality(p, _toy_lexicon(),
                       is_known=lambda t: t != "cc") == pytest.approx(1 / 3)


def test_content_features_bundles_everything(make_profile):
    lex = _toy_lexicon()
    vocab = Vocabulary(term_index={"happy": 0, "video": 1},
                       min_document_frequency=1)
    p = make_profile(comments=["happy video", "happy gr8"])
    feats = content_features(p, vocab, lex)
    assert feats.bow == {0: 1.0, 1: 1.0}
    assert feats.comment_count == 2
    assert feats.informality == pytest.approx(1 / 4)
    assert feats.lexicon_pcts["emotion"] == pytest.approx(2 / 4)


def test_lexicon_round_trip(tmp_path):
    lex = _toy_lexicon()
    path = tmp_path / "lexicon.json"
    write_lexicon(lex, path)
    loaded = load_lexicon(path)
    assert loaded == lex
    assert lexicon_from_dict(lexicon_to_dict(lex)) == lex


def test_demo_lexicon_is_complete_and_stable():
    lex = demo_lexicon()
    assert set(lex.dictionaries) == {"en", "fr", "de"}
    assert lex.category_names == sorted(lex.category_names)
    assert {"emotion", "question", "selfref", "family"} <= set(lex.category_names)
    assert demo_lexicon() == lex


def test_property_feature_ranges(make_profile):
    """Fractions stay in [0, 1] for arbitrary comment streams."""
    lex = demo_lexicon()
    rng = random.Random(99)
    words = ["the", "gr8", "why", "video", "famy", "42", "bien", "zzz9"]
    for trial in range(25):
        comments = [" ".join(rng.choices(words, k=rng.randint(1, 8)))
                    for _ in range(rng.randint(1, 6))]
        p = build_profile(id=f"p{trial}", comments=comments)
        assert 0.0 <= informality(p, lex) <= 1.0
        for value in lexicon_features(p, lex).values():
            assert 0.0 <= value <= 1.0
        stats = count_features(p)
        assert 0.0 < stats.pct_unique_comments <= 1.0
        assert 0.0 < stats.vocabulary_variety <= 1.0
