"""Profile data model and JSONL corpus I/O.

A corpus is a flat file with one JSON object per line, one object per
profile. The schema is fixed (see `JSONL_KEYS`); unknown or missing keys
are errors. Profiles are immutable and validate their invariants at
construction time, so a `Corpus` in memory is valid by construction.

Ages follow an adult-site convention: anything below 18 is rejected at
load time (with a logged diagnostic, the rest of the file still loads)
and anything above 60 is stored as 60, since the source platform only
distinguishes "60 or older".
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from .errors import CorpusError, ValidationError

logger = logging.getLogger(__name__)

ADULT_AGE_FLOOR = 18
AGE_CAP = 60

# Exact key set and emission order for the JSONL schema.
JSONL_KEYS = (
    "id",
    "verified",
    "gender",
    "age",
    "interested_in",
    "country",
    "status",
    "videos_watched",
    "videos_posted",
    "profile_views",
    "friends",
    "subscribers",
    "subscriptions",
    "pct_male_friends",
    "pct_female_friends",
    "pct_male_subscribers",
    "pct_female_subscribers",
    "comments",
)


class Gender(Enum):
    MALE = "male"
    FEMALE = "female"
    OTHER = "other"


class Interest(Enum):
    MEN = "men"
    WOMEN = "women"
    BOTH = "both"
    UNSPECIFIED = "unspecified"


class Status(Enum):
    SINGLE = "single"
    RELATIONSHIP = "relationship"
    UNSPECIFIED = "unspecified"


def normalize_age(age: int) -> int:
    """Cap a reported age at 60; reject ages below the adult floor."""
    if age < ADULT_AGE_FLOOR:
        raise ValidationError(f"age {age} is below the adult floor of {ADULT_AGE_FLOOR}")
    return min(age, AGE_CAP)


@dataclass(frozen=True)
class Comment:
    """A single comment authored by the profile owner."""

    text: str

    def __post_init__(self):
        if not self.text.strip():
            raise ValidationError("comment text is empty after trimming")


def _check_count(name: str, value: int) -> None:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValidationError(f"{name} must be an integer, got {value!r}")
    if value < 0:
        raise ValidationError(f"{name} must be non-negative, got {value}")


def _check_fraction(name: str, value: float | None) -> None:
    if value is None:
        return
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        raise ValidationError(f"{name} must be a number, got {value!r}")
    if not math.isfinite(value) or not 0.0 <= value <= 1.0:
        raise ValidationError(f"{name} must lie in [0, 1], got {value}")


@dataclass(frozen=True)
class Profile:
    """One account: reported demographics, network stats and comments.

    Reported fields are exactly that: what the account claims. Whether
    the claim is honest is the whole point of the detector downstream.
    """

    id: str
    verified: bool
    reported_gender: Gender
    reported_age: int | None
    interested_in: Interest
    country: str
    relationship_status: Status
    videos_watched: int
    videos_posted: int
    profile_views: int
    friend_count: int
    subscriber_count: int
    subscription_count: int
    pct_male_friends: float | None
    pct_female_friends: float | None
    pct_male_subscribers: float | None
    pct_female_subscribers: float | None
    comments: tuple[Comment, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if not self.id:
            raise ValidationError("profile id is empty")
        if not isinstance(self.verified, bool):
            raise ValidationError("verified must be a bool")
        if self.reported_age is not None:
            if isinstance(self.reported_age, bool) or not isinstance(self.reported_age, int):
                raise ValidationError(f"age must be an integer, got {self.reported_age!r}")
            if not ADULT_AGE_FLOOR <= self.reported_age <= AGE_CAP:
                raise ValidationError(
                    f"age must lie in [{ADULT_AGE_FLOOR}, {AGE_CAP}], got {self.reported_age}"
                )
        for name in ("videos_watched", "videos_posted", "profile_views",
                     "friend_count", "subscriber_count", "subscription_count"):
            _check_count(name, getattr(self, name))
        for name in ("pct_male_friends", "pct_female_friends",
                     "pct_male_subscribers", "pct_female_subscribers"):
            _check_fraction(name, getattr(self, name))
        for male, female in (("pct_male_friends", "pct_female_friends"),
                             ("pct_male_subscribers", "pct_female_subscribers")):
            m, f = getattr(self, male), getattr(self, female)
            if m is not None and f is not None and m + f > 1.0 + 1e-9:
                raise ValidationError(f"{male} + {female} exceeds 1 ({m} + {f})")


@dataclass(frozen=True)
class Corpus:
    """An ordered, duplicate-free collection of profiles."""

    profiles: tuple[Profile, ...]
    source: str = ""

    def __post_init__(self):
        seen = set()
        for p in self.profiles:
            if p.id in seen:
                raise ValidationError(f"duplicate profile id {p.id!r}")
            seen.add(p.id)

    def __len__(self) -> int:
        return len(self.profiles)

    def __iter__(self):
        return iter(self.profiles)

    def by_id(self, profile_id: str) -> Profile:
        for p in self.profiles:
            if p.id == profile_id:
                return p
        raise KeyError(profile_id)


_GENDER_BY_VALUE = {g.value: g for g in Gender}
_INTEREST_BY_VALUE = {"men": Interest.MEN, "women": Interest.WOMEN, "both": Interest.BOTH}
_STATUS_BY_VALUE = {"single": Status.SINGLE, "relationship": Status.RELATIONSHIP}


def _parse_record(obj: dict, line_no: int) -> Profile:
    keys = set(obj)
    expected = set(JSONL_KEYS)
    if keys != expected:
        missing = sorted(expected - keys)
        extra = sorted(keys - expected)
        parts = []
        if missing:
            parts.append(f"missing keys {missing}")
        if extra:
            parts.append(f"unknown keys {extra}")
        raise CorpusError("; ".join(parts), line=line_no)

    def fail(field_name: str, detail: str):
        raise CorpusError(f"field {field_name!r}: {detail}", line=line_no)

    gender_raw = obj["gender"]
    if gender_raw not in _GENDER_BY_VALUE:
        fail("gender", f"expected one of {sorted(_GENDER_BY_VALUE)}, got {gender_raw!r}")

    interest_raw = obj["interested_in"]
    if interest_raw is None:
        interest = Interest.UNSPECIFIED
    elif interest_raw in _INTEREST_BY_VALUE:
        interest = _INTEREST_BY_VALUE[interest_raw]
    else:
        fail("interested_in", f"expected one of {sorted(_INTEREST_BY_VALUE)} or null, got {interest_raw!r}")

    status_raw = obj["status"]
    if status_raw is None:
        status = Status.UNSPECIFIED
    elif status_raw in _STATUS_BY_VALUE:
        status = _STATUS_BY_VALUE[status_raw]
    else:
        fail("status", f"expected one of {sorted(_STATUS_BY_VALUE)} or null, got {status_raw!r}")

    age = obj["age"]
    if age is not None:
        if isinstance(age, bool) or not isinstance(age, int):
            fail("age", f"expected an integer or null, got {age!r}")
        # Above-cap ages are normalized; below-floor ages raise and the
        # caller rejects the record.
        age = normalize_age(age)

    comments_raw = obj["comments"]
    if not isinstance(comments_raw, list) or any(not isinstance(c, str) for c in comments_raw):
        fail("comments", "expected an array of strings")

    if not isinstance(obj["id"], str):
        fail("id", f"expected a string, got {obj['id']!r}")
    if not isinstance(obj["country"], str):
        fail("country", f"expected a string, got {obj['country']!r}")

    def fraction(field_name: str) -> float | None:
        v = obj[field_name]
        if v is None:
            return None
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            fail(field_name, f"expected a number or null, got {v!r}")
        return float(v)

    try:
        return Profile(
            id=obj["id"],
            verified=obj["verified"],
            reported_gender=_GENDER_BY_VALUE[gender_raw],
            reported_age=age,
            interested_in=interest,
            country=obj["country"],
            relationship_status=status,
            videos_watched=obj["videos_watched"],
            videos_posted=obj["videos_posted"],
            profile_views=obj["profile_views"],
            friend_count=obj["friends"],
            subscriber_count=obj["subscribers"],
            subscription_count=obj["subscriptions"],
            pct_male_friends=fraction("pct_male_friends"),
            pct_female_friends=fraction("pct_female_friends"),
            pct_male_subscribers=fraction("pct_male_subscribers"),
            pct_female_subscribers=fraction("pct_female_subscribers"),
            comments=tuple(Comment(c) for c in comments_raw),
        )
    except ValidationError as exc:
        raise CorpusError(str(exc), line=line_no) from exc


def load_corpus(path: str | Path) -> Corpus:
    """Load a JSONL corpus file.

    Malformed lines and invariant violations raise `CorpusError` with the
    offending line number. The single exception is an age below the adult
    floor: that record is rejected with a logged diagnostic and loading
    continues, so one underage record does not poison a crawl.
    """
    path = Path(path)
    profiles: list[Profile] = []
    ids: set[str] = set()
    with path.open(encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusError(f"invalid JSON: {exc.msg}", line=line_no) from exc
            if not isinstance(obj, dict):
                raise CorpusError("expected a JSON object", line=line_no)
            try:
                profile = _parse_record(obj, line_no)
            except ValidationError as exc:
                # Only the adult-floor rule lands here; reject, do not clamp.
                logger.warning("rejected record at line %d of %s: %s", line_no, path, exc)
                continue
            if profile.id in ids:
                raise CorpusError(f"duplicate profile id {profile.id!r}", line=line_no)
            ids.add(profile.id)
            profiles.append(profile)
    return Corpus(profiles=tuple(profiles), source=str(path))


def _profile_to_record(p: Profile) -> dict:
    return {
        "id": p.id,
        "verified": p.verified,
        "gender": p.reported_gender.value,
        "age": p.reported_age,
        "interested_in": None if p.interested_in is Interest.UNSPECIFIED else p.interested_in.value,
        "country": p.country,
        "status": None if p.relationship_status is Status.UNSPECIFIED else p.relationship_status.value,
        "videos_watched": p.videos_watched,
        "videos_posted": p.videos_posted,
        "profile_views": p.profile_views,
        "friends": p.friend_count,
        "subscribers": p.subscriber_count,
        "subscriptions": p.subscription_count,
        "pct_male_friends": p.pct_male_friends,
        "pct_female_friends": p.pct_female_friends,
        "pct_male_subscribers": p.pct_male_subscribers,
        "pct_female_subscribers": p.pct_female_subscribers,
        "comments": [c.text for c in p.comments],
    }


def save_corpus(corpus: Corpus, path: str | Path) -> None:
    """Write a corpus back out as JSONL (inverse of `load_corpus`)."""
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        for p in corpus:
            fh.write(json.dumps(_profile_to_record(p), ensure_ascii=False))
            fh.write("\n")


def eligible_subset(corpus: Corpus, min_comments: int = 10) -> Corpus:
    """Profiles with at least `min_comments` comments, order preserved."""
    if min_comments < 0:
        raise ValueError("min_comments must be non-negative")
    kept = tuple(p for p in corpus if len(p.comments) >= min_comments)
    return Corpus(profiles=kept, source=corpus.source)


@dataclass(frozen=True)
class GenderStats:
    count: int
    verified_count: int
    mean_age: float | None
    mean_friends: float | None
    mean_subscribers: float | None


@dataclass(frozen=True)
class CorpusSummary:
    n_profiles: int
    verified_count: int
    verified_fraction: float
    by_gender: dict[Gender, GenderStats]


def corpus_summary(corpus: Corpus) -> CorpusSummary:
    """Headline counts and per-gender means for a corpus."""
    by_gender: dict[Gender, GenderStats] = {}
    for gender in Gender:
        members = [p for p in corpus if p.reported_gender is gender]
        ages = [p.reported_age for p in members if p.reported_age is not None]
        by_gender[gender] = GenderStats(
            count=len(members),
            verified_count=sum(1 for p in members if p.verified),
            mean_age=sum(ages) / len(ages) if ages else None,
            mean_friends=sum(p.friend_count for p in members) / len(members) if members else None,
            mean_subscribers=sum(p.subscriber_count for p in members) / len(members) if members else None,
        )
    n = len(corpus)
    verified = sum(1 for p in corpus if p.verified)
    return CorpusSummary(
        n_profiles=n,
        verified_count=verified,
        verified_fraction=verified / n if n else 0.0,
        by_gender=by_gender,
    )
