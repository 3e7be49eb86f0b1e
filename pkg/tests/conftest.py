import pytest

from catfish.corpus import Comment, Corpus, Gender, Interest, Profile, Status
from catfish.evaluation import TASK_AGE, TASK_GENDER, fit_fold, labeled_subset
from catfish.synth import SynthConfig, generate_corpus


def build_profile(id="u1", *, verified=False, gender=Gender.FEMALE, age=30,
                  comments=("nice video",), interest=Interest.UNSPECIFIED,
                  country="us", status=Status.UNSPECIFIED, watched=5,
                  posted=0, views=100, friends=10, subscribers=3,
                  subscriptions=4, pct_mf=None, pct_ff=None, pct_ms=None,
                  pct_fs=None):
    return Profile(
        id=id,
        verified=verified,
        reported_gender=gender,
        reported_age=age,
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
        comments=tuple(Comment(c) for c in comments),
    )


@pytest.fixture
def make_profile():
    return build_profile


@pytest.fixture(scope="session")
def demo_pair():
    """One mid-sized synthetic corpus shared by the whole session."""
    return generate_corpus(SynthConfig(n_profiles=400, seed=11,
                                       catfish_fraction=0.15,
                                       verified_fraction=0.25))


@pytest.fixture(scope="session")
def demo_corpus(demo_pair):
    return demo_pair[0]


@pytest.fixture(scope="session")
def demo_truth(demo_pair):
    return demo_pair[1]


@pytest.fixture(scope="session")
def demo_models(demo_corpus):
    """Feature spec plus gender and age models fit on the verified subset."""
    profiles = labeled_subset(demo_corpus, TASK_GENDER, 10, True)
    spec, gender_model = fit_fold(profiles, TASK_GENDER)
    _, age_model = fit_fold(profiles, TASK_AGE)
    return spec, gender_model, age_model


def tiny_corpus(profiles):
    return Corpus(profiles=tuple(profiles), source="<test>")
