"""Command-line pipeline.

Five subcommands cover the full workflow:

    catfish synth     generate a synthetic corpus with planted catfish
    catfish train     fit a gender or age model on verified profiles
    catfish evaluate  cross-validate a task and write per-fold metrics
    catfish detect    scan unverified profiles and write verdicts
    catfish analyze   write aggregate report CSVs

Every output artifact gets a sibling ``<name>.manifest.json`` recording the
command, resolved options, inputs, outputs, seed, tool version, and wall-clock
duration.  Apart from that duration field, reruns with the same inputs and
seed produce byte-identical outputs.

Exit codes: 0 on success, 1 on a validation or I/O failure, 2 on bad usage.
"""

import argparse
import json
import os
import sys
import time
from importlib import metadata
from pathlib import Path

from .analytics import (age_diff_report, demographic_report,
                        interest_gain_report, popularity_report,
                        write_report_csvs)
from .corpus import load_corpus, save_corpus
from .detector import (DEFAULT_AGE_THRESHOLD, DEFAULT_MIN_COMMENTS,
                       DetectorConfig, scan_corpus, write_verdicts_csv,
                       read_verdicts_csv)
from .errors import CatfishError, ConfigError, DataError
from .evaluation import (TASK_AGE, TASK_GENDER, cross_validate, fit_fold,
                         format_report_table, labeled_subset,
                         write_report_csv)
from .model import ClassifierModel, RegressorModel, TrainConfig, load_model, save_model
from .netfeat import ALL_GROUPS, GROUP_CONTENT, GROUP_NETWORK
from .synth import SynthConfig, generate_corpus, save_ground_truth

SEED_ENV_VAR = "CATFISH_SEED"

_TASKS = (TASK_GENDER, TASK_AGE)


def _version() -> str:
    try:
        return metadata.version("catfish")
    except metadata.PackageNotFoundError:
        return "0+unknown"


def _resolve_seed(flag_value):
    """--seed flag wins, then the CATFISH_SEED environment variable, then 0."""
    if flag_value is not None:
        return flag_value
    raw = os.environ.get(SEED_ENV_VAR)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"{SEED_ENV_VAR} must be an integer, got {raw!r}")


def _feature_groups(name: str):
    if name == "all":
        return ALL_GROUPS
    if name == GROUP_CONTENT:
        return (GROUP_CONTENT,)
    if name == GROUP_NETWORK:
        return (GROUP_NETWORK,)
    raise ConfigError(f"unknown feature group {name!r}")


def _write_manifest(path: Path, *, command, options, inputs, outputs, seed,
                    started) -> None:
    manifest = {
        "command": command,
        "options": options,
        "inputs": [str(p) for p in inputs],
        "outputs": [str(p) for p in outputs],
        "seed": seed,
        "version": _version(),
        "duration_s": round(time.perf_counter() - started, 3),
    }
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(manifest, handle, indent=2, sort_keys=True)
        handle.write("\n")


def _manifest_for(artifact: Path) -> Path:
    return artifact.with_name(artifact.name + ".manifest.json")


def _options(args, skip=("func", "command")) -> dict:
    out = {}
    for key, value in sorted(vars(args).items()):
        if key in skip or callable(value):
            continue
        out[key] = str(value) if isinstance(value, Path) else value
    return out


def cmd_synth(args) -> int:
    started = time.perf_counter()
    seed = _resolve_seed(args.seed)
    config = SynthConfig(
        n_profiles=args.n,
        seed=seed,
        catfish_fraction=args.catfish_fraction,
        verified_fraction=args.verified_fraction,
    )
    corpus, truth = generate_corpus(config)
    truth_path = args.truth
    if truth_path is None:
        stem = str(args.out)
        if stem.endswith(".jsonl"):
            stem = stem[: -len(".jsonl")]
        truth_path = Path(stem + ".truth.jsonl")
    args.out.parent.mkdir(parents=True, exist_ok=True)
    save_corpus(corpus, args.out)
    save_ground_truth(truth, truth_path)
    options = _options(args)
    options["seed"] = seed
    options["truth"] = str(truth_path)
    for artifact in (args.out, truth_path):
        _write_manifest(
            _manifest_for(artifact),
            command="synth",
            options=options,
            inputs=[],
            outputs=[args.out, truth_path],
            seed=seed,
            started=started,
        )
    print(f"wrote {args.out} ({len(corpus.profiles)} profiles, "
          f"{len(truth.planted)} planted catfish)")
    print(f"wrote {truth_path}")
    return 0


def cmd_train(args) -> int:
    started = time.perf_counter()
    seed = _resolve_seed(args.seed)
    corpus = load_corpus(args.corpus)
    profiles = labeled_subset(corpus, args.task, args.min_comments, True)
    if not profiles:
        raise DataError(
            f"no verified profiles with at least {args.min_comments} comments "
            f"and a usable {args.task} label in {args.corpus}")
    groups = _feature_groups(args.features)
    spec, model = fit_fold(profiles, args.task, groups=groups,
                           config=TrainConfig(seed=seed))
    args.out.parent.mkdir(parents=True, exist_ok=True)
    save_model(model, spec, args.out)
    options = _options(args)
    options["seed"] = seed
    _write_manifest(
        _manifest_for(args.out),
        command="train",
        options=options,
        inputs=[args.corpus],
        outputs=[args.out],
        seed=seed,
        started=started,
    )
    print(f"trained {args.task} model on {len(profiles)} profiles "
          f"({spec.dim} features) -> {args.out}")
    if not model.converged:
        print("warning: solver stopped at the pass limit before reaching "
              "tolerance", file=sys.stderr)
    return 0


def cmd_evaluate(args) -> int:
    started = time.perf_counter()
    seed = _resolve_seed(args.seed)
    corpus = load_corpus(args.corpus)
    groups = _feature_groups(args.features)
    report = cross_validate(
        corpus,
        task=args.task,
        groups=groups,
        k=args.k,
        seed=seed,
        min_comments=args.min_comments,
        config=TrainConfig(seed=seed),
    )
    args.out.parent.mkdir(parents=True, exist_ok=True)
    write_report_csv(report, args.out)
    options = _options(args)
    options["seed"] = seed
    _write_manifest(
        _manifest_for(args.out),
        command="evaluate",
        options=options,
        inputs=[args.corpus],
        outputs=[args.out],
        seed=seed,
        started=started,
    )
    print(format_report_table(report))
    print(f"wrote {args.out}")
    return 0


def cmd_detect(args) -> int:
    started = time.perf_counter()
    corpus = load_corpus(args.corpus)
    gender_model, gender_spec = load_model(args.gender_model)
    age_model, age_spec = load_model(args.age_model)
    if not isinstance(gender_model, ClassifierModel):
        raise DataError(f"{args.gender_model} does not hold a gender classifier")
    if not isinstance(age_model, RegressorModel):
        raise DataError(f"{args.age_model} does not hold an age regressor")
    config = DetectorConfig(age_threshold=args.threshold,
                            min_comments=args.min_comments)
    del age_spec  # scan_corpus cross-checks both models against one spec
    result = scan_corpus(corpus, gender_model, age_model, gender_spec, config)
    args.out.parent.mkdir(parents=True, exist_ok=True)
    write_verdicts_csv(result.verdicts, args.out)
    _write_manifest(
        _manifest_for(args.out),
        command="detect",
        options=_options(args),
        inputs=[args.corpus, args.gender_model, args.age_model],
        outputs=[args.out],
        seed=None,
        started=started,
    )
    total_flagged = sum(1 for v in result.verdicts if v.flagged)
    print(f"scanned {len(result.verdicts)} unverified profiles, "
          f"flagged {total_flagged}")
    for group, stats in result.by_reported_gender.items():
        print(f"  reported {group}: {stats.n_flagged}/{stats.n_eligible} "
              f"flagged ({stats.flag_rate:.1%})")
    print(f"wrote {args.out}")
    return 0


def cmd_analyze(args) -> int:
    started = time.perf_counter()
    corpus = load_corpus(args.corpus)
    inputs = [args.corpus]
    reports = [demographic_report(corpus)]
    if args.verdicts is not None:
        verdicts = read_verdicts_csv(args.verdicts)
        inputs.append(args.verdicts)
        reports.append(popularity_report(corpus, verdicts))
        reports.append(interest_gain_report(corpus, verdicts))
        reports.append(age_diff_report(verdicts))
    args.out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for report in reports:
        written.extend(write_report_csvs(report, args.out_dir))
    _write_manifest(
        args.out_dir / "run.manifest.json",
        command="analyze",
        options=_options(args),
        inputs=inputs,
        outputs=written,
        seed=None,
        started=started,
    )
    for path in written:
        print(f"wrote {path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="catfish",
        description="catfish detection pipeline: synthesize, train, "
                    "evaluate, detect, analyze",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("synth",
                        help="generate a synthetic corpus with planted catfish")
    ps.add_argument("--out", type=Path, required=True,
                    help="corpus JSONL path to write")
    ps.add_argument("--truth", type=Path, default=None,
                    help="ground-truth JSONL path "
                         "(default: <out> with a .truth.jsonl suffix)")
    ps.add_argument("--n", type=int, default=1000,
                    help="number of profiles (default 1000)")
    ps.add_argument("--seed", type=int, default=None,
                    help=f"RNG seed (default ${SEED_ENV_VAR} or 0)")
    ps.add_argument("--catfish-fraction", type=float, default=0.1,
                    help="fraction of profiles that lie (default 0.1)")
    ps.add_argument("--verified-fraction", type=float, default=0.055,
                    help="fraction of profiles that are verified "
                         "(default 0.055)")
    ps.set_defaults(func=cmd_synth)

    pt = sub.add_parser("train", help="fit a model on verified profiles")
    pt.add_argument("--corpus", type=Path, required=True)
    pt.add_argument("--task", choices=_TASKS, required=True)
    pt.add_argument("--features", choices=("content", "network", "all"),
                    default="all")
    pt.add_argument("--out", type=Path, required=True,
                    help="model JSON path to write")
    pt.add_argument("--min-comments", type=int, default=DEFAULT_MIN_COMMENTS,
                    help="comment floor for usable profiles (default 10)")
    pt.add_argument("--seed", type=int, default=None,
                    help=f"RNG seed (default ${SEED_ENV_VAR} or 0)")
    pt.set_defaults(func=cmd_train)

    pe = sub.add_parser("evaluate", help="k-fold cross-validation metrics")
    pe.add_argument("--corpus", type=Path, required=True)
    pe.add_argument("--task", choices=_TASKS, required=True)
    pe.add_argument("--features", choices=("content", "network", "all"),
                    default="all")
    pe.add_argument("--k", type=int, default=10, help="fold count (default 10)")
    pe.add_argument("--out", type=Path, required=True,
                    help="metrics CSV path to write")
    pe.add_argument("--min-comments", type=int, default=DEFAULT_MIN_COMMENTS)
    pe.add_argument("--seed", type=int, default=None,
                    help=f"RNG seed (default ${SEED_ENV_VAR} or 0)")
    pe.set_defaults(func=cmd_evaluate)

    pd = sub.add_parser("detect", help="flag unverified profiles")
    pd.add_argument("--corpus", type=Path, required=True)
    pd.add_argument("--gender-model", type=Path, required=True)
    pd.add_argument("--age-model", type=Path, required=True)
    pd.add_argument("--threshold", type=float, default=DEFAULT_AGE_THRESHOLD,
                    help="age deviation that triggers a flag "
                         f"(default {DEFAULT_AGE_THRESHOLD})")
    pd.add_argument("--min-comments", type=int, default=DEFAULT_MIN_COMMENTS)
    pd.add_argument("--out", type=Path, required=True,
                    help="verdicts CSV path to write")
    pd.set_defaults(func=cmd_detect)

    pa = sub.add_parser("analyze", help="aggregate report CSVs")
    pa.add_argument("--corpus", type=Path, required=True)
    pa.add_argument("--verdicts", type=Path, default=None,
                    help="verdicts CSV from `catfish detect`; adds "
                         "popularity, interest, and age-gap reports")
    pa.add_argument("--out-dir", type=Path, required=True)
    pa.set_defaults(func=cmd_analyze)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except CatfishError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
