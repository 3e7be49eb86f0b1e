"""Synthetic corpus generator with planted, recoverable ground truth.

Every profile gets a true gender and true age first; a seeded quota of
unverified profiles then lies about one or both. Comments are built from
the deterministic token pools so that the true demographics stay
recoverable from text alone:

* gender markers: each comment draws from the author's own marker pool
  far more often than from the opposite pool;
* age anchors: each comment carries one era token at or below the
  profile's (noisy) age band, cycling so that all bands up to the
  profile's own get covered, which makes a simple additive decode of
  the anchor presence bits track the age bands;
* style drift: informal fillers, emotion and self-reference rates vary
  with true age and gender as weaker secondary cues.

Network numbers are lognormal around calibration targets keyed by the
claimed gender and by whether the claim lies about gender, so dishonest
groups have distinct popularity profiles. With a few thousand profiles
the realized group means land within ten percent of the targets.

Age lies always exceed the detection threshold by at least a year, so a
perfect regressor plus the default threshold would flag every planted
age liar.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from ._pools import TokenPools, age_band, pools
from .corpus import (
    ADULT_AGE_FLOOR,
    AGE_CAP,
    Comment,
    Corpus,
    Gender,
    Interest,
    Profile,
    Status,
)
from .detector import DEFAULT_AGE_THRESHOLD, CatfishVerdict
from .errors import ConfigError, CorpusError, DataError

KIND_NONE = "none"
KIND_GENDER = "gender"
KIND_AGE = "age"
KIND_BOTH = "both"
KINDS = (KIND_NONE, KIND_GENDER, KIND_AGE, KIND_BOTH)

# Calibration targets for group means, keyed by (claimed gender, lies
# about gender). Honest women draw by far the most attention; accounts
# falsely claiming to be female attract less than honest women but far
# more than any male-presenting profile.
VIEW_MEANS = {
    ("female", False): 32150.0,
    ("female", True): 16590.0,
    ("male", True): 8719.0,
    ("male", False): 6098.0,
}
FRIEND_MEANS = {
    ("female", False): 444.0,
    ("female", True): 314.0,
    ("male", False): 195.0,
    ("male", True): 151.0,
}
SUBSCRIBER_MEANS = {"female": 309.0, "male": 97.0}     # keyed by claimed gender
SUBSCRIPTION_MEANS = {"female": 106.0, "male": 142.0}  # keyed by true gender
AGE_MEAN_EXCESS = {"male": 13.0, "female": 10.0}       # years past the floor

_VIEW_SIGMA = 1.0
_FRIEND_SIGMA = 0.9
_SUBSCRIBER_SIGMA = 1.2
_SUBSCRIPTION_SIGMA = 0.8

_COUNTRIES = ("us", "uk", "de", "ca", "fr", "br", "au", "nl", "se", "pl", "it", "es")
_COUNTRY_WEIGHTS = (0.38, 0.12, 0.10, 0.08, 0.07, 0.06, 0.05, 0.04, 0.03, 0.03, 0.02, 0.02)

_STATUS_CHOICES = (Status.SINGLE, Status.RELATIONSHIP, Status.UNSPECIFIED)
_STATUS_WEIGHTS = (0.55, 0.25, 0.20)

# Keyed by true gender: what the account owner actually browses for.
_INTEREST_CHOICES = (Interest.MEN, Interest.WOMEN, Interest.BOTH, Interest.UNSPECIFIED)
_INTEREST_WEIGHTS = {
    "male": (0.06, 0.70, 0.08, 0.16),
    "female": (0.25, 0.035, 0.605, 0.11),
}

_OPPOSITE = {Gender.MALE: Gender.FEMALE, Gender.FEMALE: Gender.MALE}


@dataclass(frozen=True)
class SynthConfig:
    n_profiles: int = 1000
    seed: int = 0
    catfish_fraction: float = 0.1
    verified_fraction: float = 0.055
    male_fraction: float = 0.6
    age_noise_years: float = 1.5
    gender_signal: float = 1.0
    age_signal: float = 0.9
    mean_comments: float = 30.0
    comment_sigma: float = 0.8

    def __post_init__(self):
        if self.n_profiles < 1:
            raise ConfigError(f"n_profiles must be positive, got {self.n_profiles}")
        for name in ("catfish_fraction", "verified_fraction", "male_fraction",
                     "gender_signal", "age_signal"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ConfigError(f"{name} must lie in [0, 1], got {value!r}")
        if self.age_noise_years < 0:
            raise ConfigError("age_noise_years cannot be negative")
        if self.mean_comments < 1:
            raise ConfigError("mean_comments must be at least 1")
        if self.comment_sigma < 0:
            raise ConfigError("comment_sigma cannot be negative")


@dataclass(frozen=True)
class TruthRecord:
    id: str
    true_gender: str
    true_age: int
    catfish: bool
    kind: str

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError(f"unknown truth kind {self.kind!r}")
        if self.catfish != (self.kind != KIND_NONE):
            raise ConfigError("catfish flag must agree with the kind")


@dataclass(frozen=True)
class GroundTruth:
    records: tuple[TruthRecord, ...]

    @property
    def planted(self) -> tuple[TruthRecord, ...]:
        return tuple(r for r in self.records if r.catfish)


def _lognormal(mean: float, sigma: float, z: float) -> float:
    """Lognormal draw parameterized by its true mean, not its log-mean."""
    return math.exp(math.log(mean) - 0.5 * sigma * sigma + sigma * z)


def _age_lie(rng: random.Random, true_age: int) -> int:
    """A reported age at least seven years off, staying inside [18, 60]."""
    lie = round(DEFAULT_AGE_THRESHOLD + 1.0 + rng.expovariate(0.2))
    up_room = AGE_CAP - true_age
    down_room = true_age - ADULT_AGE_FLOOR
    lie = min(lie, max(up_room, down_room))
    can_up = lie <= up_room
    can_down = lie <= down_room
    if can_up and can_down:
        direction = 1 if rng.random() < 0.8 else -1
    else:
        direction = 1 if can_up else -1
    return true_age + direction * lie


def _make_comment(rng: random.Random, tp: TokenPools, *, true_gender: Gender,
                  true_age: int, band: int, index: int,
                  gender_signal: float, age_signal: float) -> str:
    tokens: list[str] = []

    if rng.random() < age_signal:
        # all forms of the own band every time, plus a cycle through the
        # bands below so sparse commenters still light the whole ladder;
        # the redundant forms let a linear decode lean on the ladder
        # without paying much weight norm per band
        tokens.extend(tp.era_tokens[band])
        if band > 0:
            era = (band - 1) - (index % band)
            tokens.extend(tp.era_tokens[era][:2])
    else:
        tokens.append(tp.era_tokens[rng.randint(0, band)][0])

    own = tp.male_markers if true_gender is Gender.MALE else tp.female_markers
    opposite = tp.female_markers if true_gender is Gender.MALE else tp.male_markers
    q_own = 0.25 + 0.37 * gender_signal
    q_opp = 0.25 - 0.23 * gender_signal
    if rng.random() < q_own:
        tokens.append(rng.choice(own))
    if rng.random() < q_opp:
        tokens.append(rng.choice(opposite))

    excess = true_age - ADULT_AGE_FLOOR
    if rng.random() < (0.05 if true_gender is Gender.MALE else 0.12):
        tokens.append(rng.choice(tp.emotion))
    if rng.random() < (0.06 if true_gender is Gender.MALE else 0.10):
        tokens.append(rng.choice(tp.selfref))
    is_question = rng.random() < 0.07
    if is_question:
        tokens.append(rng.choice(tp.question))
    if rng.random() < 0.02 + 0.003 * excess:
        tokens.append(rng.choice(tp.family))

    target_len = rng.randrange(4, 11)
    informal_p = 0.45 - 0.006 * excess
    while len(tokens) < target_len:
        if rng.random() < informal_p:
            tokens.append(rng.choice(tp.informal_fillers))
        else:
            tokens.append(rng.choice(tp.formal_fillers))
    rng.shuffle(tokens)
    text = " ".join(tokens)
    return text + "?" if is_question else text


def generate_corpus(config: SynthConfig | None = None) -> tuple[Corpus, GroundTruth]:
    """Build a corpus plus the truth sidecar describing what was planted."""
    config = config or SynthConfig()
    rng = random.Random(config.seed)
    tp = pools()
    n = config.n_profiles

    # skeletons first, so quota sampling can see comment counts
    true_genders: list[Gender] = []
    true_ages: list[int] = []
    comment_counts: list[int] = []
    for _ in range(n):
        gender = Gender.MALE if rng.random() < config.male_fraction else Gender.FEMALE
        excess = _lognormal(AGE_MEAN_EXCESS[gender.value], 0.65, rng.gauss(0.0, 1.0))
        age = min(AGE_CAP, ADULT_AGE_FLOOR + round(excess))
        count = round(_lognormal(config.mean_comments, config.comment_sigma,
                                 rng.gauss(0.0, 1.0)))
        true_genders.append(gender)
        true_ages.append(age)
        comment_counts.append(max(1, min(400, count)))

    eligible = [i for i in range(n) if comment_counts[i] >= 10]
    n_verified = round(config.verified_fraction * n)
    n_catfish = round(config.catfish_fraction * n)
    if n_verified > len(eligible):
        raise DataError(f"cannot verify {n_verified} profiles, only "
                        f"{len(eligible)} have ten or more comments")
    verified_ids = set(rng.sample(eligible, n_verified))
    pool = [i for i in eligible if i not in verified_ids]
    if n_catfish > len(pool):
        raise DataError(f"cannot plant {n_catfish} catfish, only {len(pool)} "
                        f"unverified profiles have ten or more comments")
    planted = rng.sample(pool, n_catfish)
    n_gender = round(0.4 * n_catfish)
    n_age = round(0.4 * n_catfish)
    kind_of: dict[int, str] = {}
    for rank, idx in enumerate(planted):
        if rank < n_gender:
            kind_of[idx] = KIND_GENDER
        elif rank < n_gender + n_age:
            kind_of[idx] = KIND_AGE
        else:
            kind_of[idx] = KIND_BOTH

    profiles: list[Profile] = []
    records: list[TruthRecord] = []
    for i in range(n):
        gender = true_genders[i]
        age = true_ages[i]
        kind = kind_of.get(i, KIND_NONE)
        lies_gender = kind in (KIND_GENDER, KIND_BOTH)
        lies_age = kind in (KIND_AGE, KIND_BOTH)
        claimed_gender = _OPPOSITE[gender] if lies_gender else gender
        claimed_age = _age_lie(rng, age) if lies_age else age

        z_views = rng.gauss(0.0, 1.0)
        z_friends = 0.7 * z_views + math.sqrt(1.0 - 0.49) * rng.gauss(0.0, 1.0)
        z_subs = 0.6 * z_views + 0.8 * rng.gauss(0.0, 1.0)
        group = (claimed_gender.value, lies_gender)
        views = round(_lognormal(VIEW_MEANS[group], _VIEW_SIGMA, z_views))
        friends = round(_lognormal(FRIEND_MEANS[group], _FRIEND_SIGMA, z_friends))
        subscribers = round(_lognormal(SUBSCRIBER_MEANS[claimed_gender.value],
                                       _SUBSCRIBER_SIGMA, z_subs))
        subscriptions = round(_lognormal(SUBSCRIPTION_MEANS[gender.value],
                                         _SUBSCRIPTION_SIGMA, rng.gauss(0.0, 1.0)))
        watched = round(_lognormal(180.0, 1.1, rng.gauss(0.0, 1.0)))
        posted = round(_lognormal(2.5, 1.0, rng.gauss(0.0, 1.0)))

        country = rng.choices(_COUNTRIES, weights=_COUNTRY_WEIGHTS)[0]
        status = rng.choices(_STATUS_CHOICES, weights=_STATUS_WEIGHTS)[0]
        interest = rng.choices(_INTEREST_CHOICES,
                               weights=_INTEREST_WEIGHTS[gender.value])[0]

        # the audience reacts to the claim, so mixes follow claimed gender
        pct_mf = pct_ff = pct_ms = pct_fs = None
        mix_mean = 0.74 if claimed_gender is Gender.FEMALE else 0.60
        if rng.random() < 0.9 and friends > 0:
            male_share = rng.betavariate(5.0 * mix_mean, 5.0 * (1.0 - mix_mean))
            pct_mf = round(male_share, 4)
            pct_ff = round((1.0 - male_share) * 0.95, 4)
        sub_mean = 0.78 if claimed_gender is Gender.FEMALE else 0.62
        if rng.random() < 0.9 and subscribers > 0:
            male_share = rng.betavariate(5.0 * sub_mean, 5.0 * (1.0 - sub_mean))
            pct_ms = round(male_share, 4)
            pct_fs = round((1.0 - male_share) * 0.95, 4)

        noisy = age + rng.gauss(0.0, config.age_noise_years)
        band = age_band(min(float(AGE_CAP), max(float(ADULT_AGE_FLOOR), noisy)))
        comments: list[Comment] = []
        recipe_index = 0
        while len(comments) < comment_counts[i]:
            text = _make_comment(rng, tp, true_gender=gender, true_age=age,
                                 band=band, index=recipe_index,
                                 gender_signal=config.gender_signal,
                                 age_signal=config.age_signal)
            comments.append(Comment(text))
            recipe_index += 1
            if len(comments) < comment_counts[i] and rng.random() < 0.04:
                comments.append(Comment(text))

        profiles.append(Profile(
            id=f"u{i:06d}",
            verified=i in verified_ids,
            reported_gender=claimed_gender,
            reported_age=claimed_age,
            interested_in=interest,
            country=country,
            relationship_status=status,
            videos_watched=watched,
            videos_posted=posted,
            profile_views=views,
            friend_count=friends,
            subscriber_count=subscribers,
            subscription_count=subscriptions,
            pct_male_friends=pct_mf,
            pct_female_friends=pct_ff,
            pct_male_subscribers=pct_ms,
            pct_female_subscribers=pct_fs,
            comments=tuple(comments),
        ))
        records.append(TruthRecord(
            id=f"u{i:06d}",
            true_gender=gender.value,
            true_age=age,
            catfish=kind != KIND_NONE,
            kind=kind,
        ))

    corpus = Corpus(profiles=tuple(profiles), source=f"synthetic(seed={config.seed})")
    return corpus, GroundTruth(records=tuple(records))


def save_ground_truth(truth: GroundTruth, path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8", newline="\n") as fh:
        for r in truth.records:
            fh.write(json.dumps({"id": r.id, "true_gender": r.true_gender,
                                 "true_age": r.true_age, "catfish": r.catfish,
                                 "kind": r.kind}, ensure_ascii=False))
            fh.write("\n")


def load_ground_truth(path: str | Path) -> GroundTruth:
    path = Path(path)
    records: list[TruthRecord] = []
    with path.open(encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusError(f"invalid JSON: {exc.msg}", line=line_no) from exc
            expected = {"id", "true_gender", "true_age", "catfish", "kind"}
            if not isinstance(obj, dict) or set(obj) != expected:
                raise CorpusError(f"expected exactly the keys {sorted(expected)}",
                                  line=line_no)
            try:
                records.append(TruthRecord(**obj))
            except (ConfigError, TypeError) as exc:
                raise CorpusError(str(exc), line=line_no) from exc
    return GroundTruth(records=tuple(records))


@dataclass(frozen=True)
class DetectionReport:
    """Detector quality against the planted truth."""

    n_planted: int
    n_flagged: int
    true_positives: int
    precision: float
    recall: float
    recall_by_kind: dict[str, float]


def oracle_eval(truth: GroundTruth,
                verdicts: Sequence[CatfishVerdict]) -> DetectionReport:
    """Score scan verdicts against the planted catfish set.

    Empty denominators score as perfect only when nothing could have
    been found (no flags raised and nothing planted).
    """
    verdict_ids = {v.id for v in verdicts}
    planted = truth.planted
    missing = [r.id for r in planted if r.id not in verdict_ids]
    if missing:
        raise DataError(f"{len(missing)} planted catfish missing from the scan, "
                        f"first {missing[:3]}")
    flagged_ids = {v.id for v in verdicts if v.flagged}
    hits = [r for r in planted if r.id in flagged_ids]
    precision = (len(hits) / len(flagged_ids)) if flagged_ids else (
        1.0 if not planted else 0.0)
    recall = len(hits) / len(planted) if planted else 1.0
    by_kind: dict[str, float] = {}
    for kind in (KIND_GENDER, KIND_AGE, KIND_BOTH):
        members = [r for r in planted if r.kind == kind]
        if members:
            by_kind[kind] = sum(1 for r in members if r.id in flagged_ids) / len(members)
    return DetectionReport(
        n_planted=len(planted),
        n_flagged=len(flagged_ids),
        true_positives=len(hits),
        precision=precision,
        recall=recall,
        recall_by_kind=by_kind,
    )
