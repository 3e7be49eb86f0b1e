"""Generated token families behind the bundled lexicon and the demo corpus.

Everything here is deterministic: a pseudo-word generator runs once with a
fixed seed, so the bundled lexicon, the documentation examples and the
synthetic corpus generator all agree on one token inventory.

Families:

* formal filler words, split across the en/fr/de formality dictionaries
* gender-marked pools (two writing styles)
* 21 two-year "era" pools covering ages 18..60
* category pools matched by the bundled lexicon (emotion, question,
  selfref, family), including inflected forms of the wildcard stems
* informal fillers: letter+digit blends that no dictionary contains

All formal tokens are placed in one of the three dictionaries; informal
fillers are placed in none, which is what makes the informality fraction
a usable signal.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache

from .textfeat import CategoryLexicon, LexiconSet

# Era pools: ages 18..60 in two-year bands.
NUM_ERAS = 21
ERA_YEARS = 2

_WORD_SEED = 2718
_CONSONANTS = "bdfgklmnprstvz"
_VOWELS = "aeiou"

# Real-word seeds keep the demo corpora from looking entirely alien.
_EN_SEED = ("the", "this", "that", "with", "from", "video", "watch",
            "watching", "good", "time", "really", "here")
_FR_SEED = ("le", "la", "les", "et", "tres", "bien", "merci", "avec",
            "cette", "pour")
_DE_SEED = ("der", "die", "und", "das", "sehr", "gut", "danke", "mit",
            "auch", "ein")
_QUESTION_SEED = ("why", "how", "what", "when")
_SELFREF = ("i", "me", "my", "mine", "myself", "im", "ich", "moi")
_STEM_SUFFIXES = ("y", "ed", "ing", "ness")


@dataclass(frozen=True)
class TokenPools:
    """The emission pools the synthetic generator draws from."""

    formal_fillers: tuple[str, ...]
    informal_fillers: tuple[str, ...]
    male_markers: tuple[str, ...]
    female_markers: tuple[str, ...]
    era_tokens: tuple[tuple[str, ...], ...]  # era_tokens[band][0] is the anchor
    emotion: tuple[str, ...]
    question: tuple[str, ...]
    selfref: tuple[str, ...]
    family: tuple[str, ...]


def age_band(age: float) -> int:
    """Map an age in [18, 60] to its two-year era index 0..20."""
    age = min(max(age, 18.0), 60.0)
    return min(int((age - 18.0) // ERA_YEARS), NUM_ERAS - 1)


def _syllables(rng: random.Random, n: int) -> str:
    return "".join(rng.choice(_CONSONANTS) + rng.choice(_VOWELS) for _ in range(n))


def _fresh(rng, taken: set, stems: list, n_syllables: int) -> str:
    while True:
        word = _syllables(rng, n_syllables)
        if word in taken or any(word.startswith(st) for st in stems):
            continue
        taken.add(word)
        return word


def _fresh_stem(rng, taken: set, stems: list) -> str:
    # A stem must not prefix (or be prefixed by) anything already issued,
    # otherwise category percentages would pick up unrelated tokens.
    while True:
        st = _syllables(rng, 2)
        if st in taken or any(w.startswith(st) for w in taken):
            continue
        if any(st.startswith(o) or o.startswith(st) for o in stems):
            continue
        stems.append(st)
        return st


def _batch(rng, taken, stems, count, n_syllables):
    return tuple(_fresh(rng, taken, stems, n_syllables) for _ in range(count))


@lru_cache(maxsize=1)
def _build() -> tuple[TokenPools, LexiconSet]:
    rng = random.Random(_WORD_SEED)
    taken = set(_EN_SEED) | set(_FR_SEED) | set(_DE_SEED)
    taken |= set(_QUESTION_SEED) | set(_SELFREF)
    stems: list[str] = []

    emotion_stems = [_fresh_stem(rng, taken, stems) for _ in range(2)]
    question_stem = _fresh_stem(rng, taken, stems)
    family_stem = _fresh_stem(rng, taken, stems)

    def inflect(stem: str) -> tuple[str, ...]:
        forms = tuple(stem + sfx for sfx in _STEM_SUFFIXES)
        taken.update(forms)
        return forms

    emotion_lit = _batch(rng, taken, stems, 8, 2)
    emotion_forms = inflect(emotion_stems[0]) + inflect(emotion_stems[1])
    question_lit = _batch(rng, taken, stems, 4, 2)
    question_forms = inflect(question_stem)
    family_lit = _batch(rng, taken, stems, 6, 2)
    family_forms = inflect(family_stem)

    male_markers = _batch(rng, taken, stems, 18, 2)
    female_markers = _batch(rng, taken, stems, 18, 2)
    era_tokens = tuple(_batch(rng, taken, stems, 3, 3) for _ in range(NUM_ERAS))

    core_en = _batch(rng, taken, stems, 40, 2)
    core_fr = _batch(rng, taken, stems, 20, 2)
    core_de = _batch(rng, taken, stems, 20, 3)

    informal = []
    while len(informal) < 45:
        word = _syllables(rng, rng.choice((1, 2))) + rng.choice("0123456789")
        if rng.random() < 0.5:
            word += rng.choice(_CONSONANTS + "xy")
        if word in taken or any(word.startswith(st) for st in stems):
            continue
        taken.add(word)
        informal.append(word)

    # Dictionary assignment. Seeds stay with their language; generated
    # structural tokens are dealt 3:1:1 so English dominates, as it does
    # in the comment streams the lexicon is meant to cover.
    en = set(_EN_SEED) | set(_QUESTION_SEED) | set(core_en)
    en |= {w for w in _SELFREF if w not in ("ich", "moi")}
    fr = set(_FR_SEED) | set(core_fr) | {"moi"}
    de = set(_DE_SEED) | set(core_de) | {"ich"}
    structural = (list(male_markers) + list(female_markers)
                  + [t for band in era_tokens for t in band]
                  + list(emotion_lit) + list(emotion_forms)
                  + list(question_lit) + list(question_forms)
                  + list(family_lit) + list(family_forms))
    buckets = (en, en, en, fr, de)
    for idx, word in enumerate(structural):
        buckets[idx % len(buckets)].add(word)

    pools = TokenPools(
        formal_fillers=core_en + core_fr + core_de + _EN_SEED + _FR_SEED + _DE_SEED,
        informal_fillers=tuple(informal),
        male_markers=male_markers,
        female_markers=female_markers,
        era_tokens=era_tokens,
        emotion=emotion_lit + emotion_forms,
        question=_QUESTION_SEED + question_lit + question_forms,
        selfref=_SELFREF,
        family=family_lit + family_forms,
    )
    lexicon = LexiconSet(
        categories={
            "emotion": CategoryLexicon(literals=frozenset(emotion_lit),
                                       prefixes=tuple(sorted(emotion_stems))),
            "question": CategoryLexicon(literals=frozenset(_QUESTION_SEED + question_lit),
                                        prefixes=(question_stem,)),
            "selfref": CategoryLexicon(literals=frozenset(_SELFREF), prefixes=()),
            "family": CategoryLexicon(literals=frozenset(family_lit),
                                      prefixes=(family_stem,)),
        },
        dictionaries={"en": frozenset(en), "fr": frozenset(fr), "de": frozenset(de)},
    )
    return pools, lexicon


def pools() -> TokenPools:
    return _build()[0]


def built_in_lexicon() -> LexiconSet:
    return _build()[1]
