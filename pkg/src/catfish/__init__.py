"""Catfish detection for video-sharing profiles.

Predicts a profile owner's gender and age from what they write and how they
sit in the social graph, then flags unverified profiles whose reported
demographics disagree with those predictions.  Ships with a deterministic
synthetic-corpus generator so the whole pipeline can be exercised end to end
without real user data.
"""

from .analytics import (AnalyticsReport, BinnedSeries, StatRow,
                        age_diff_report, demographic_report,
                        interest_gain_report, popularity_report,
                        write_report_csvs)
from .corpus import (ADULT_AGE_FLOOR, AGE_CAP, Comment, Corpus, CorpusSummary,
                     Gender, GenderStats, Interest, Profile, Status,
                     corpus_summary, eligible_subset, load_corpus, save_corpus)
from .detector import (DEFAULT_AGE_THRESHOLD, DEFAULT_MIN_COMMENTS,
                       CatfishVerdict, DetectorConfig, GroupStats, ScanResult,
                       flag_profile, read_verdicts_csv, scan_corpus,
                       write_verdicts_csv)
from .errors import (CatfishError, ConfigError, CorpusError, DataError,
                     DegenerateInputError, FingerprintMismatchError,
                     ValidationError)
from .evaluation import (TASK_AGE, TASK_GENDER, ClassificationMetrics,
                         ClassMetrics, EvalReport, RegressionMetrics,
                         classification_metrics, cross_validate, fit_fold,
                         format_report_table, kfold, labeled_subset, mae,
                         pearson, regression_metrics, stratified_kfold,
                         write_report_csv)
from .model import (ClassifierModel, RegressorModel, TrainConfig,
                    decision_value, decision_values, hinge_objective,
                    load_model, objective, predict_age, predict_gender,
                    save_model, train_classifier, train_regressor,
                    tube_objective)
from .netfeat import (ALL_GROUPS, GENDER_MIX_CAVEAT, GROUP_CONTENT,
                      GROUP_NETWORK, FeatureSpec, FeatureVector, assemble,
                      assemble_matrix, feature_names, fit_feature_spec,
                      spec_from_dict, spec_to_dict)
from .synth import (DetectionReport, GroundTruth, SynthConfig, TruthRecord,
                    generate_corpus, load_ground_truth, oracle_eval,
                    save_ground_truth)
from .textfeat import (ContentFeatures, CountStats, LexiconSet, Vocabulary,
                       bow_features, build_vocabulary, content_features,
                       count_features, demo_lexicon, informality,
                       lexicon_features, load_lexicon, tokenize,
                       write_lexicon)

__version__ = "0.1.0"

__all__ = [
    "ADULT_AGE_FLOOR",
    "AGE_CAP",
    "ALL_GROUPS",
    "AnalyticsReport",
    "BinnedSeries",
    "CatfishError",
    "CatfishVerdict",
    "ClassMetrics",
    "ClassificationMetrics",
    "ClassifierModel",
    "Comment",
    "ConfigError",
    "ContentFeatures",
    "Corpus",
    "CorpusError",
    "CorpusSummary",
    "CountStats",
    "DEFAULT_AGE_THRESHOLD",
    "DEFAULT_MIN_COMMENTS",
    "DataError",
    "DegenerateInputError",
    "DetectionReport",
    "DetectorConfig",
    "EvalReport",
    "FeatureSpec",
    "FeatureVector",
    "FingerprintMismatchError",
    "GENDER_MIX_CAVEAT",
    "GROUP_CONTENT",
    "GROUP_NETWORK",
    "Gender",
    "GenderStats",
    "GroundTruth",
    "GroupStats",
    "Interest",
    "LexiconSet",
    "Profile",
    "RegressionMetrics",
    "RegressorModel",
    "ScanResult",
    "StatRow",
    "Status",
    "SynthConfig",
    "TASK_AGE",
    "TASK_GENDER",
    "TrainConfig",
    "TruthRecord",
    "ValidationError",
    "Vocabulary",
    "age_diff_report",
    "assemble",
    "assemble_matrix",
    "bow_features",
    "build_vocabulary",
    "classification_metrics",
    "content_features",
    "corpus_summary",
    "count_features",
    "cross_validate",
    "decision_value",
    "decision_values",
    "demo_lexicon",
    "demographic_report",
    "eligible_subset",
    "feature_names",
    "fit_feature_spec",
    "fit_fold",
    "flag_profile",
    "format_report_table",
    "generate_corpus",
    "hinge_objective",
    "informality",
    "interest_gain_report",
    "kfold",
    "labeled_subset",
    "lexicon_features",
    "load_corpus",
    "load_ground_truth",
    "load_lexicon",
    "load_model",
    "mae",
    "objective",
    "oracle_eval",
    "pearson",
    "popularity_report",
    "predict_age",
    "predict_gender",
    "read_verdicts_csv",
    "regression_metrics",
    "save_corpus",
    "save_ground_truth",
    "save_model",
    "scan_corpus",
    "spec_from_dict",
    "spec_to_dict",
    "stratified_kfold",
    "tokenize",
    "train_classifier",
    "train_regressor",
    "tube_objective",
    "write_lexicon",
    "write_report_csv",
    "write_report_csvs",
    "write_verdicts_csv",
]
