"""Content features derived from a profile's comment text.

Four families, mirroring what the rest of the pipeline consumes:

* binary bag-of-words presence over a corpus vocabulary
* lexicon category percentages (literal words plus trailing-wildcard stems)
* comment-count statistics (count, unique fraction, vocabulary variety)
* an informality score: the fraction of tokens recognised by none of the
  formality dictionaries (English, French, German) and not purely numeric

Formality is decided by dictionary membership rather than a part-of-speech
tagger; the check is pluggable (`informality(..., is_known=...)`) so a
tagger backend can be swapped in without touching callers.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

from .corpus import Corpus, Profile
from .errors import ConfigError, DataError, ValidationError

# Maximal runs of letters/digits, lowercased. Underscore is punctuation here.
_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)

DICTIONARY_LANGUAGES = ("en", "fr", "de")


def tokenize(text: str) -> list[str]:
    """Lowercased maximal alphanumeric runs: "Great vid!!" -> ["great", "vid"]."""
    return _TOKEN_RE.findall(text.lower())


def profile_tokens(profile: Profile) -> list[str]:
    """All tokens from all of a profile's comments, in comment order."""
    tokens: list[str] = []
    for comment in profile.comments:
        tokens.extend(tokenize(comment.text))
    return tokens


@dataclass(frozen=True)
class Vocabulary:
    """Term -> dense column index, terms sorted lexicographically."""

    term_index: dict[str, int]
    min_document_frequency: int
    built_from: str = ""

    def __post_init__(self):
        n = len(self.term_index)
        if sorted(self.term_index.values()) != list(range(n)):
            raise ValidationError("vocabulary indices must be dense 0..n-1")
        ordered = [t for t, _ in sorted(self.term_index.items(), key=lambda kv: kv[1])]
        if ordered != sorted(ordered):
            raise ValidationError("vocabulary terms must be indexed in sorted order")

    def __len__(self) -> int:
        return len(self.term_index)

    @property
    def terms(self) -> list[str]:
        return [t for t, _ in sorted(self.term_index.items(), key=lambda kv: kv[1])]


def build_vocabulary(corpus: Corpus, min_df: int = 2) -> Vocabulary:
    """Terms appearing in at least `min_df` distinct profiles' comments."""
    if len(corpus) == 0:
        raise DataError("cannot build a vocabulary from an empty corpus")
    if min_df < 1:
        raise ValueError("min_df must be at least 1")
    df: dict[str, int] = {}
    saw_any = False
    for profile in corpus:
        seen = set(profile_tokens(profile))
        if seen:
            saw_any = True
        for term in seen:
            df[term] = df.get(term, 0) + 1
    if not saw_any:
        raise DataError("corpus has no comment tokens to build a vocabulary from")
    kept = sorted(t for t, n in df.items() if n >= min_df)
    return Vocabulary(
        term_index={t: i for i, t in enumerate(kept)},
        min_document_frequency=min_df,
        built_from=corpus.source,
    )


@dataclass(frozen=True)
class CategoryLexicon:
    """One lexicon category: literal words plus trailing-wildcard stems."""

    literals: frozenset[str]
    prefixes: tuple[str, ...]

    def __post_init__(self):
        for w in self.literals:
            if not w or w != w.lower() or "*" in w:
                raise ValidationError(f"bad literal pattern {w!r}")
        for p in self.prefixes:
            if not p or p != p.lower() or "*" in p:
                raise ValidationError(f"bad stem pattern {p!r}")

    def matches(self, token: str) -> bool:
        if token in self.literals:
            return True
        return any(token.startswith(p) for p in self.prefixes)


@dataclass(frozen=True)
class LexiconSet:
    """Named categories plus the three formality dictionaries."""

    categories: dict[str, CategoryLexicon]
    dictionaries: dict[str, frozenset[str]] = field(default_factory=dict)

    def __post_init__(self):
        for lang, words in self.dictionaries.items():
            for w in words:
                if not w or w != w.lower():
                    raise ValidationError(f"dictionary {lang!r} word {w!r} must be lowercase")

    @property
    def category_names(self) -> list[str]:
        return sorted(self.categories)

    def known(self, token: str) -> bool:
        """Is the token in any formality dictionary?"""
        return any(token in words for words in self.dictionaries.values())


def load_lexicon(path: str | Path) -> LexiconSet:
    """Parse the lexicon file format.

    Sections are introduced by ``[category:NAME]`` or ``[dict:en|fr|de]``
    headers; each following non-blank line is one lowercase pattern, with a
    trailing ``*`` marking a stem prefix (categories only).
    """
    path = Path(path)
    categories: dict[str, tuple[set[str], list[str]]] = {}
    dictionaries: dict[str, set[str]] = {}
    target: tuple[str, str] | None = None
    with path.open(encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if line.startswith("[") and line.endswith("]"):
                header = line[1:-1]
                kind, _, name = header.partition(":")
                if kind == "category" and name:
                    categories.setdefault(name, (set(), []))
                    target = ("category", name)
                elif kind == "dict" and name in DICTIONARY_LANGUAGES:
                    dictionaries.setdefault(name, set())
                    target = ("dict", name)
                else:
                    raise ConfigError(f"{path}:{line_no}: bad section header {line!r}")
                continue
            if target is None:
                raise ConfigError(f"{path}:{line_no}: pattern before any section header")
            if line != line.lower():
                raise ConfigError(f"{path}:{line_no}: patterns must be lowercase, got {line!r}")
            kind, name = target
            if kind == "category":
                literals, prefixes = categories[name]
                if line.endswith("*"):
                    stem = line[:-1]
                    if not stem or "*" in stem:
                        raise ConfigError(f"{path}:{line_no}: bad stem pattern {line!r}")
                    prefixes.append(stem)
                elif "*" in line:
                    raise ConfigError(f"{path}:{line_no}: wildcard only allowed at the end")
                else:
                    literals.add(line)
            else:
                if "*" in line:
                    raise ConfigError(f"{path}:{line_no}: dictionaries hold literal words only")
                dictionaries[name].add(line)
    return LexiconSet(
        categories={
            name: CategoryLexicon(literals=frozenset(lit), prefixes=tuple(sorted(pref)))
            for name, (lit, pref) in categories.items()
        },
        dictionaries={lang: frozenset(words) for lang, words in dictionaries.items()},
    )


def write_lexicon(lexicon: LexiconSet, path: str | Path) -> None:
    """Serialize a LexiconSet in the format `load_lexicon` reads."""
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        for name in sorted(lexicon.categories):
            cat = lexicon.categories[name]
            fh.write(f"[category:{name}]\n")
            for w in sorted(cat.literals):
                fh.write(w + "\n")
            for p in cat.prefixes:
                fh.write(p + "*\n")
        for lang in DICTIONARY_LANGUAGES:
            if lang in lexicon.dictionaries:
                fh.write(f"[dict:{lang}]\n")
                for w in sorted(lexicon.dictionaries[lang]):
                    fh.write(w + "\n")


def lexicon_to_dict(lexicon: LexiconSet) -> dict:
    """Canonical plain-data form, stable under re-serialization."""
    return {
        "categories": {
            name: {
                "literals": sorted(cat.literals),
                "prefixes": list(cat.prefixes),
            }
            for name, cat in sorted(lexicon.categories.items())
        },
        "dictionaries": {
            lang: sorted(words) for lang, words in sorted(lexicon.dictionaries.items())
        },
    }


def lexicon_from_dict(data: dict) -> LexiconSet:
    return LexiconSet(
        categories={
            name: CategoryLexicon(literals=frozenset(cat["literals"]),
                                  prefixes=tuple(cat["prefixes"]))
            for name, cat in data["categories"].items()
        },
        dictionaries={lang: frozenset(words)
                      for lang, words in data.get("dictionaries", {}).items()},
    )


def demo_lexicon() -> LexiconSet:
    """The built-in lexicon covering the synthetic token families."""
    from ._pools import built_in_lexicon

    return built_in_lexicon()


def bow_features(profile: Profile, vocab: Vocabulary) -> dict[int, float]:
    """Binary presence over the vocabulary, as a sparse index -> 1.0 map."""
    present: dict[int, float] = {}
    for token in profile_tokens(profile):
        idx = vocab.term_index.get(token)
        if idx is not None:
            present[idx] = 1.0
    return present


def lexicon_features(profile: Profile, lexicon: LexiconSet) -> dict[str, float]:
    """Per-category fraction of tokens matching the category."""
    tokens = profile_tokens(profile)
    names = lexicon.category_names
    if not tokens:
        return {name: 0.0 for name in names}
    counts = dict.fromkeys(names, 0)
    for token in tokens:
        for name in names:
            if lexicon.categories[name].matches(token):
                counts[name] += 1
    total = len(tokens)
    return {name: counts[name] / total for name in names}


@dataclass(frozen=True)
class CountStats:
    comment_count: int
    pct_unique_comments: float
    vocabulary_variety: float


def count_features(profile: Profile) -> CountStats:
    """Comment count, unique-comment fraction and type/token ratio."""
    n = len(profile.comments)
    if n == 0:
        return CountStats(0, 0.0, 0.0)
    unique = len({c.text for c in profile.comments})
    tokens = profile_tokens(profile)
    variety = len(set(tokens)) / len(tokens) if tokens else 0.0
    return CountStats(n, unique / n, variety)


def informality(profile: Profile, lexicon: LexiconSet,
                is_known=None) -> float:
    """Fraction of tokens that look informal.

    A token is informal when it is not purely numeric and `is_known`
    rejects it. The default `is_known` is membership in any of the three
    formality dictionaries, all of which must be present on the lexicon.
    """
    if is_known is None:
        missing = [lang for lang in DICTIONARY_LANGUAGES if lang not in lexicon.dictionaries]
        if missing:
            raise ConfigError(f"lexicon is missing formality dictionaries: {missing}")
        is_known = lexicon.known
    tokens = profile_tokens(profile)
    if not tokens:
        return 0.0
    informal = sum(1 for t in tokens if not t.isdigit() and not is_known(t))
    return informal / len(tokens)


@dataclass(frozen=True)
class ContentFeatures:
    """Everything the content feature group contributes for one profile."""

    bow: dict[int, float]
    lexicon_pcts: dict[str, float]
    comment_count: int
    pct_unique_comments: float
    vocabulary_variety: float
    informality: float


def content_features(profile: Profile, vocab: Vocabulary, lexicon: LexiconSet) -> ContentFeatures:
    counts = count_features(profile)
    return ContentFeatures(
        bow=bow_features(profile, vocab),
        lexicon_pcts=lexicon_features(profile, lexicon),
        comment_count=counts.comment_count,
        pct_unique_comments=counts.pct_unique_comments,
        vocabulary_variety=counts.vocabulary_variety,
        informality=informality(profile, lexicon),
    )
