"""Flag unverified profiles whose claims disagree with model predictions.

A profile is scanned only if it clears the comment floor, since the
models have nothing to work with otherwise. The gender flag fires when
the classifier contradicts the reported gender; the age flag fires when
the regressor lands more than the threshold away from the reported age.
Verified profiles are treated as ground truth and never scanned.
"""

from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .corpus import Corpus, Gender, Profile
from .errors import ConfigError, DataError, FingerprintMismatchError
from .model import (
    ClassifierModel,
    RegressorModel,
    predict_age,
    predict_gender,
)
from .netfeat import FeatureSpec, assemble

# Age gap beyond which the reported age is considered a lie. Matches the
# regressor's typical error on held-out data, so smaller gaps are noise.
DEFAULT_AGE_THRESHOLD = 5.581
DEFAULT_MIN_COMMENTS = 10


@dataclass(frozen=True)
class DetectorConfig:
    age_threshold: float = DEFAULT_AGE_THRESHOLD
    min_comments: int = DEFAULT_MIN_COMMENTS

    def __post_init__(self):
        if not self.age_threshold > 0:
            raise ConfigError(f"age threshold must be positive, got {self.age_threshold!r}")
        if self.min_comments < 0:
            raise ConfigError(f"comment floor cannot be negative, got {self.min_comments!r}")


@dataclass(frozen=True)
class CatfishVerdict:
    id: str
    eligible: bool
    reported_gender: str
    predicted_gender: str | None
    gender_flag: bool
    reported_age: int | None
    predicted_age: float | None
    age_delta: float | None
    age_flag: bool

    @property
    def flagged(self) -> bool:
        return self.gender_flag or self.age_flag


@dataclass(frozen=True)
class GroupStats:
    n_scanned: int
    n_eligible: int
    n_flagged: int
    flag_rate: float
    mean_flagged_reported_age: float | None
    mean_age_delta: float | None


@dataclass(frozen=True)
class ScanResult:
    verdicts: tuple[CatfishVerdict, ...]
    by_reported_gender: dict[str, GroupStats]
    config: DetectorConfig

    @property
    def flagged(self) -> tuple[CatfishVerdict, ...]:
        return tuple(v for v in self.verdicts if v.flagged)


def _check_fingerprints(gender_model: ClassifierModel, age_model: RegressorModel,
                        spec: FeatureSpec) -> None:
    prints = {gender_model.spec_fingerprint, age_model.spec_fingerprint,
              spec.fingerprint}
    if len(prints) != 1:
        raise FingerprintMismatchError(
            "detector needs both models and the spec fitted together; got "
            f"fingerprints {sorted(p[:12] for p in prints)}")


def flag_profile(profile: Profile, gender_model: ClassifierModel,
                 age_model: RegressorModel, spec: FeatureSpec,
                 config: DetectorConfig | None = None) -> CatfishVerdict:
    config = config or DetectorConfig()
    _check_fingerprints(gender_model, age_model, spec)
    if len(profile.comments) < config.min_comments:
        return CatfishVerdict(
            id=profile.id, eligible=False,
            reported_gender=profile.reported_gender.value, predicted_gender=None,
            gender_flag=False, reported_age=profile.reported_age, predicted_age=None,
            age_delta=None, age_flag=False)

    features = assemble(profile, spec)
    pred_gender = predict_gender(gender_model, features)
    pred_age = predict_age(age_model, features)
    # profiles reporting neither binary gender cannot contradict the classifier
    gender_flag = (profile.reported_gender in (Gender.MALE, Gender.FEMALE)
                   and pred_gender != profile.reported_gender)
    if profile.reported_age is None:
        age_delta = None
        age_flag = False
    else:
        age_delta = pred_age - float(profile.reported_age)
        age_flag = abs(age_delta) > config.age_threshold
    return CatfishVerdict(
        id=profile.id, eligible=True,
        reported_gender=profile.reported_gender.value,
        predicted_gender=pred_gender.value, gender_flag=gender_flag,
        reported_age=profile.reported_age, predicted_age=pred_age,
        age_delta=age_delta, age_flag=age_flag)


def _group_stats(verdicts: Sequence[CatfishVerdict]) -> GroupStats:
    eligible = [v for v in verdicts if v.eligible]
    flagged = [v for v in eligible if v.flagged]
    flagged_ages = [v.reported_age for v in flagged if v.reported_age is not None]
    deltas = [v.age_delta for v in eligible if v.age_delta is not None]
    return GroupStats(
        n_scanned=len(verdicts),
        n_eligible=len(eligible),
        n_flagged=len(flagged),
        flag_rate=len(flagged) / len(eligible) if eligible else 0.0,
        mean_flagged_reported_age=(sum(flagged_ages) / len(flagged_ages)
                                   if flagged_ages else None),
        mean_age_delta=sum(deltas) / len(deltas) if deltas else None,
    )


def scan_corpus(corpus: Corpus, gender_model: ClassifierModel,
                age_model: RegressorModel, spec: FeatureSpec,
                config: DetectorConfig | None = None) -> ScanResult:
    """Run the detector over eligible unverified profiles, in corpus order."""
    config = config or DetectorConfig()
    _check_fingerprints(gender_model, age_model, spec)
    candidates = [p for p in corpus.profiles
                  if not p.verified and len(p.comments) >= config.min_comments]
    if not candidates:
        warnings.warn("no unverified profile clears the comment floor; nothing to scan")
    verdicts = tuple(flag_profile(p, gender_model, age_model, spec, config)
                     for p in candidates)
    groups: dict[str, list[CatfishVerdict]] = {}
    for verdict in verdicts:
        groups.setdefault(verdict.reported_gender, []).append(verdict)
    stats = {gender: _group_stats(members)
             for gender, members in sorted(groups.items())}
    return ScanResult(verdicts=verdicts, by_reported_gender=stats, config=config)


_CSV_COLUMNS = ("id", "eligible", "reported_gender", "predicted_gender",
                "gender_flag", "reported_age", "predicted_age", "age_delta",
                "age_flag")


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.6f}"
    return str(value)


def write_verdicts_csv(verdicts: Sequence[CatfishVerdict], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(_CSV_COLUMNS)
        for v in verdicts:
            writer.writerow([_cell(getattr(v, column)) for column in _CSV_COLUMNS])


def read_verdicts_csv(path: str | Path) -> list[CatfishVerdict]:
    with open(path, "r", encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header != list(_CSV_COLUMNS):
            raise DataError(f"unexpected verdict columns in {path}: {header}")
        out = []
        for row in reader:
            if len(row) != len(_CSV_COLUMNS):
                raise DataError(f"malformed verdict row in {path}: {row}")
            rec = dict(zip(_CSV_COLUMNS, row))
            out.append(CatfishVerdict(
                id=rec["id"],
                eligible=rec["eligible"] == "true",
                reported_gender=rec["reported_gender"],
                predicted_gender=rec["predicted_gender"] or None,
                gender_flag=rec["gender_flag"] == "true",
                reported_age=int(rec["reported_age"]) if rec["reported_age"] else None,
                predicted_age=float(rec["predicted_age"]) if rec["predicted_age"] else None,
                age_delta=float(rec["age_delta"]) if rec["age_delta"] else None,
                age_flag=rec["age_flag"] == "true",
            ))
    return out
