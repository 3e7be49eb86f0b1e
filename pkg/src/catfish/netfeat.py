"""Feature specs and vector assembly for the content and network groups.

A `FeatureSpec` is fitted once per training fold and frozen: it pins the
vocabulary, the lexicon, the country list and the standardization
statistics, and carries a fingerprint so downstream artifacts can verify
they were built against the same spec. Applying a spec to new profiles
never refits anything.

Layout (dimensions in fitted order):

content   bag-of-words presence over the vocabulary (binary)
          one fraction per lexicon category
          log1p comment count, unique-comment fraction, vocabulary
          variety, informality
network   country one-hot over the training country list plus "other"
          status one-hot (single, relationship)
          interest one-hot (men, women, both)
          log1p videos watched / posted
          log1p friends / subscribers / subscriptions
          the four gender-composition percentages (absent -> 0)
          four presence bits for those percentages

Binary dimensions stay 0/1; every other dimension is standardized with
training-fold mean and standard deviation. Profile views are deliberately
not a feature; they only appear in analytics.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy import sparse

from .corpus import Corpus, Interest, Profile, Status
from .errors import DataError, ValidationError
from .textfeat import (
    LexiconSet,
    Vocabulary,
    bow_features,
    build_vocabulary,
    count_features,
    demo_lexicon,
    informality,
    lexicon_features,
    lexicon_from_dict,
    lexicon_to_dict,
)

GROUP_CONTENT = "content"
GROUP_NETWORK = "network"
ALL_GROUPS = (GROUP_CONTENT, GROUP_NETWORK)

# Echoed wherever predictions lean on the friend/subscriber gender mix.
GENDER_MIX_CAVEAT = ("gender-composition percentages partly reflect how other "
                     "users react to the reported profile, not only how its "
                     "owner behaves")

_STATUS_ORDER = (Status.SINGLE, Status.RELATIONSHIP)
_INTEREST_ORDER = (Interest.MEN, Interest.WOMEN, Interest.BOTH)


@dataclass(frozen=True, eq=False)
class FeatureVector:
    """Sparse vector: sorted indices, nonzero finite values, fixed dim."""

    indices: np.ndarray
    values: np.ndarray
    dim: int

    def __post_init__(self):
        if self.indices.shape != self.values.shape or self.indices.ndim != 1:
            raise ValidationError("indices and values must be 1-D and equal length")
        if len(self.indices) and (self.indices[0] < 0 or self.indices[-1] >= self.dim):
            raise ValidationError("feature index out of range")
        if len(self.indices) > 1 and not np.all(np.diff(self.indices) > 0):
            raise ValidationError("feature indices must be strictly increasing")
        if not np.all(np.isfinite(self.values)):
            raise ValidationError("feature values must be finite")

    def to_dense(self) -> np.ndarray:
        out = np.zeros(self.dim)
        out[self.indices] = self.values
        return out

    def dot(self, weights: np.ndarray) -> float:
        if len(weights) != self.dim:
            raise DataError(f"dimension mismatch: {len(weights)} weights, dim {self.dim}")
        return float(weights[self.indices] @ self.values)


@dataclass(frozen=True, eq=False)
class FeatureSpec:
    """Frozen encoding recipe fitted on one training fold."""

    groups: tuple[str, ...]
    min_df: int
    vocabulary: Vocabulary | None
    lexicon: LexiconSet | None
    categories: tuple[str, ...]
    countries: tuple[str, ...]
    mean: np.ndarray
    std: np.ndarray
    standardize: np.ndarray
    dim: int
    fingerprint: str

    def __post_init__(self):
        if not self.groups or any(g not in ALL_GROUPS for g in self.groups):
            raise ValidationError(f"groups must be a nonempty subset of {ALL_GROUPS}")
        if GROUP_CONTENT in self.groups and (self.vocabulary is None or self.lexicon is None):
            raise ValidationError("content group requires a vocabulary and lexicon")
        if not (len(self.mean) == len(self.std) == len(self.standardize) == self.dim):
            raise ValidationError("standardization arrays must match the dimension")
        if np.any(self.std <= 0):
            raise ValidationError("standard deviations must be positive")


def _normalize_groups(groups: Iterable[str]) -> tuple[str, ...]:
    wanted = tuple(g for g in ALL_GROUPS if g in set(groups))
    if not wanted or len(set(groups)) != len(wanted):
        raise DataError(f"feature groups must be a nonempty subset of {ALL_GROUPS}, got {tuple(groups)!r}")
    return wanted


def _content_dim(vocab: Vocabulary, categories: tuple[str, ...]) -> int:
    return len(vocab) + len(categories) + 4


def _network_dim(countries: tuple[str, ...]) -> int:
    # country one-hot (+other), status, interest, 2 activity logs,
    # 3 graph logs, 4 percentages, 4 presence bits
    return (len(countries) + 1) + 2 + 3 + 2 + 3 + 4 + 4


def profile_features(profile: Profile, spec: FeatureSpec) -> FeatureVector:
    """Unstandardized one-hot slice: country, status, interested_in."""
    n_country = len(spec.countries) + 1
    dim = n_country + 2 + 3
    idx: list[int] = []
    try:
        idx.append(spec.countries.index(profile.country))
    except ValueError:
        idx.append(n_country - 1)  # unseen country -> "other"
    if profile.relationship_status in _STATUS_ORDER:
        idx.append(n_country + _STATUS_ORDER.index(profile.relationship_status))
    if profile.interested_in in _INTEREST_ORDER:
        idx.append(n_country + 2 + _INTEREST_ORDER.index(profile.interested_in))
    idx.sort()
    return FeatureVector(np.array(idx, dtype=np.int32), np.ones(len(idx)), dim)


def activity_features(profile: Profile) -> FeatureVector:
    """Unstandardized log1p of videos watched and posted."""
    values = np.array([math.log1p(profile.videos_watched),
                       math.log1p(profile.videos_posted)])
    keep = values != 0.0
    return FeatureVector(np.flatnonzero(keep).astype(np.int32), values[keep], 2)


def graph_features(profile: Profile) -> FeatureVector:
    """Unstandardized graph slice: log1p counts, percentages, presence bits."""
    pcts = (profile.pct_male_friends, profile.pct_female_friends,
            profile.pct_male_subscribers, profile.pct_female_subscribers)
    values = np.zeros(11)
    values[0] = math.log1p(profile.friend_count)
    values[1] = math.log1p(profile.subscriber_count)
    values[2] = math.log1p(profile.subscription_count)
    for slot, pct in enumerate(pcts):
        if pct is not None:
            values[3 + slot] = pct
            values[7 + slot] = 1.0  # presence bit
    keep = values != 0.0
    return FeatureVector(np.flatnonzero(keep).astype(np.int32), values[keep], 11)


def _raw_row(profile: Profile, groups: tuple[str, ...], vocab: Vocabulary | None,
             lexicon: LexiconSet | None, categories: tuple[str, ...],
             countries: tuple[str, ...]) -> np.ndarray:
    parts: list[np.ndarray] = []
    if GROUP_CONTENT in groups:
        block = np.zeros(_content_dim(vocab, categories))
        for idx, value in bow_features(profile, vocab).items():
            block[idx] = value
        pcts = lexicon_features(profile, lexicon)
        base = len(vocab)
        for pos, name in enumerate(categories):
            block[base + pos] = pcts[name]
        stats = count_features(profile)
        base += len(categories)
        block[base] = math.log1p(stats.comment_count)
        block[base + 1] = stats.pct_unique_comments
        block[base + 2] = stats.vocabulary_variety
        block[base + 3] = informality(profile, lexicon)
        parts.append(block)
    if GROUP_NETWORK in groups:
        onehot = np.zeros(len(countries) + 1 + 2 + 3)
        n_country = len(countries) + 1
        try:
            onehot[countries.index(profile.country)] = 1.0
        except ValueError:
            onehot[n_country - 1] = 1.0
        if profile.relationship_status in _STATUS_ORDER:
            onehot[n_country + _STATUS_ORDER.index(profile.relationship_status)] = 1.0
        if profile.interested_in in _INTEREST_ORDER:
            onehot[n_country + 2 + _INTEREST_ORDER.index(profile.interested_in)] = 1.0
        parts.append(onehot)
        parts.append(activity_features(profile).to_dense())
        parts.append(graph_features(profile).to_dense())
    return np.concatenate(parts)


def _standardize_mask(groups, vocab, categories, countries) -> np.ndarray:
    parts: list[np.ndarray] = []
    if GROUP_CONTENT in groups:
        mask = np.zeros(_content_dim(vocab, categories), dtype=bool)
        mask[len(vocab):] = True  # category pcts, counts, informality
        parts.append(mask)
    if GROUP_NETWORK in groups:
        mask = np.zeros(_network_dim(countries), dtype=bool)
        start = len(countries) + 1 + 2 + 3
        mask[start:start + 9] = True  # 2 activity + 3 graph logs + 4 pcts
        parts.append(mask)
    return np.concatenate(parts)


def _fingerprint(groups, min_df, vocab, lexicon, categories, countries,
                 mean, std, standardize) -> str:
    payload = {
        "groups": list(groups),
        "min_df": min_df,
        "vocabulary": vocab.terms if vocab is not None else None,
        "lexicon": lexicon_to_dict(lexicon) if lexicon is not None else None,
        "categories": list(categories),
        "countries": list(countries),
        "mean": [float(v) for v in mean],
        "std": [float(v) for v in std],
        "standardize": [int(v) for v in standardize],
    }
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


def fit_feature_spec(profiles: Sequence[Profile], groups: Iterable[str] = ALL_GROUPS,
                     lexicon: LexiconSet | None = None, min_df: int = 2) -> FeatureSpec:
    """Fit vocabulary, encodings and standardization on training profiles only."""
    profiles = tuple(profiles)
    if not profiles:
        raise DataError("cannot fit a feature spec on zero profiles")
    groups = _normalize_groups(groups)
    vocab = None
    categories: tuple[str, ...] = ()
    if GROUP_CONTENT in groups:
        if lexicon is None:
            lexicon = demo_lexicon()
        vocab = build_vocabulary(Corpus(profiles, source="<fit>"), min_df=min_df)
        categories = tuple(lexicon.category_names)
    else:
        lexicon = None
    countries: tuple[str, ...] = ()
    if GROUP_NETWORK in groups:
        countries = tuple(sorted({p.country for p in profiles}))

    raw = np.stack([_raw_row(p, groups, vocab, lexicon, categories, countries)
                    for p in profiles])
    standardize = _standardize_mask(groups, vocab, categories, countries)
    mean = np.zeros(raw.shape[1])
    std = np.ones(raw.shape[1])
    mean[standardize] = raw[:, standardize].mean(axis=0)
    observed = raw[:, standardize].std(axis=0)
    std[standardize] = np.where(observed > 0, observed, 1.0)

    return FeatureSpec(
        groups=groups,
        min_df=min_df,
        vocabulary=vocab,
        lexicon=lexicon,
        categories=categories,
        countries=countries,
        mean=mean,
        std=std,
        standardize=standardize,
        dim=raw.shape[1],
        fingerprint=_fingerprint(groups, min_df, vocab, lexicon, categories,
                                 countries, mean, std, standardize),
    )


def assemble(profile: Profile, spec: FeatureSpec) -> FeatureVector:
    """Encode one profile under a fitted spec (never refits)."""
    raw = _raw_row(profile, spec.groups, spec.vocabulary, spec.lexicon,
                   spec.categories, spec.countries)
    row = np.where(spec.standardize, (raw - spec.mean) / spec.std, raw)
    keep = row != 0.0
    return FeatureVector(np.flatnonzero(keep).astype(np.int32), row[keep], spec.dim)


def assemble_matrix(profiles: Sequence[Profile], spec: FeatureSpec) -> sparse.csr_matrix:
    indptr = [0]
    indices: list[np.ndarray] = []
    data: list[np.ndarray] = []
    for profile in profiles:
        fv = assemble(profile, spec)
        indices.append(fv.indices)
        data.append(fv.values)
        indptr.append(indptr[-1] + len(fv.indices))
    if not profiles:
        return sparse.csr_matrix((0, spec.dim))
    return sparse.csr_matrix(
        (np.concatenate(data), np.concatenate(indices), np.array(indptr)),
        shape=(len(profiles), spec.dim),
    )


def feature_names(spec: FeatureSpec) -> list[str]:
    """Human-readable name per dimension, in layout order."""
    names: list[str] = []
    if GROUP_CONTENT in spec.groups:
        names.extend(f"bow:{t}" for t in spec.vocabulary.terms)
        names.extend(f"cat:{c}" for c in spec.categories)
        names.extend(["log_comment_count", "pct_unique_comments",
                      "vocabulary_variety", "informality"])
    if GROUP_NETWORK in spec.groups:
        names.extend(f"country:{c}" for c in spec.countries)
        names.append("country:other")
        names.extend(["status:single", "status:relationship"])
        names.extend(["interest:men", "interest:women", "interest:both"])
        names.extend(["log_videos_watched", "log_videos_posted"])
        names.extend(["log_friends", "log_subscribers", "log_subscriptions"])
        names.extend(["pct_male_friends", "pct_female_friends",
                      "pct_male_subscribers", "pct_female_subscribers"])
        names.extend(["has_pct_male_friends", "has_pct_female_friends",
                      "has_pct_male_subscribers", "has_pct_female_subscribers"])
    return names


def spec_to_dict(spec: FeatureSpec) -> dict:
    """Plain-data form for embedding in model files; exact float round-trip."""
    return {
        "groups": list(spec.groups),
        "min_df": spec.min_df,
        "vocabulary": spec.vocabulary.terms if spec.vocabulary is not None else None,
        "lexicon": lexicon_to_dict(spec.lexicon) if spec.lexicon is not None else None,
        "categories": list(spec.categories),
        "countries": list(spec.countries),
        "mean": [float(v) for v in spec.mean],
        "std": [float(v) for v in spec.std],
        "standardize": [int(v) for v in spec.standardize],
        "dim": spec.dim,
        "fingerprint": spec.fingerprint,
    }


def spec_from_dict(data: dict) -> FeatureSpec:
    vocab = None
    if data["vocabulary"] is not None:
        vocab = Vocabulary(term_index={t: i for i, t in enumerate(data["vocabulary"])},
                           min_document_frequency=data["min_df"])
    lexicon = lexicon_from_dict(data["lexicon"]) if data["lexicon"] is not None else None
    spec = FeatureSpec(
        groups=tuple(data["groups"]),
        min_df=data["min_df"],
        vocabulary=vocab,
        lexicon=lexicon,
        categories=tuple(data["categories"]),
        countries=tuple(data["countries"]),
        mean=np.array(data["mean"], dtype=float),
        std=np.array(data["std"], dtype=float),
        standardize=np.array(data["standardize"], dtype=bool),
        dim=data["dim"],
        fingerprint=data["fingerprint"],
    )
    recomputed = _fingerprint(spec.groups, spec.min_df, spec.vocabulary, spec.lexicon,
                              spec.categories, spec.countries, spec.mean, spec.std,
                              spec.standardize)
    if recomputed != spec.fingerprint:
        from .errors import FingerprintMismatchError

        raise FingerprintMismatchError(
            f"feature spec fingerprint {spec.fingerprint[:12]}... does not match "
            f"its own contents ({recomputed[:12]}...)")
    return spec
