#!/usr/bin/env python3
"""Train the gender classifier and age regressor, then read their weights.

Linear models stay inspectable: every weight belongs to a named feature,
so after training we can print which features pull toward which class and
sanity-check a few predictions against profiles the models never saw.
"""

from pathlib import Path

from catfish.evaluation import TASK_AGE, TASK_GENDER, fit_fold, labeled_subset
from catfish.model import load_model, predict_age, predict_gender, save_model
from catfish.netfeat import assemble, feature_names
from catfish.synth import SynthConfig, generate_corpus

OUT = Path(__file__).resolve().parent / "out"


def main():
    corpus, _ = generate_corpus(SynthConfig(n_profiles=800, seed=7,
                                            catfish_fraction=0.2,
                                            verified_fraction=0.15))
    train = labeled_subset(corpus, TASK_GENDER, min_comments=10,
                           verified_only=True)
    print(f"training on {len(train)} verified profiles "
          f"with at least 10 comments")

    spec, gender_model = fit_fold(train, TASK_GENDER)
    _, age_model = fit_fold(train, TASK_AGE)
    print(f"feature spec: dim {spec.dim}, groups {spec.groups}")
    print(f"gender solver: converged={gender_model.converged} "
          f"after {gender_model.epochs} passes, "
          f"final objective {gender_model.pass_objectives[-1]:.4f}")
    print(f"age solver:    converged={age_model.converged} "
          f"after {age_model.epochs} passes, "
          f"final objective {age_model.pass_objectives[-1]:.4f}")

    names = feature_names(spec)
    ranked = sorted(zip(gender_model.weights, names))
    print("\nstrongest female-leaning features (most negative weights):")
    for w, name in ranked[:5]:
        print(f"  {w:+8.4f}  {name}")
    print("strongest male-leaning features (most positive weights):")
    for w, name in ranked[-5:][::-1]:
        print(f"  {w:+8.4f}  {name}")

    OUT.mkdir(exist_ok=True)
    gender_path = OUT / "gender.model.json"
    age_path = OUT / "age.model.json"
    save_model(gender_model, spec, gender_path)
    save_model(age_model, spec, age_path)
    gender_model, spec = load_model(gender_path)
    age_model, _ = load_model(age_path)
    print(f"\nsaved and reloaded {gender_path.name}, {age_path.name}")

    unseen = [p for p in corpus
              if not p.verified and len(p.comments) >= 10][:6]
    print("\npredictions on unverified profiles (claims may be lies):")
    for profile in unseen:
        fv = assemble(profile, spec)
        gender = predict_gender(gender_model, fv)
        age = predict_age(age_model, fv)
        print(f"  {profile.id}: claims {profile.reported_gender.value:>6}/"
              f"{profile.reported_age}, model says {gender.value:>6}/"
              f"{age:.1f}")


if __name__ == "__main__":
    main()
