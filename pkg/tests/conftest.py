"""Shared fixtures and synthetic data generators."""

from __future__ import annotations

import math
import random

import pytest

from cardrank import (
    Action,
    AnnotationRecord,
    CalibrationModel,
    CardProfile,
    CardType,
    RankedCard,
    RankedList,
    ResultItem,
    default_profiles,
)


@pytest.fixture(scope="session")
def shipped_profiles():
    return default_profiles()


def make_profile(
    card_type=CardType.TS,
    t_click_rel=4.0,
    t_click_nonrel=4.0,
    t_skip_rel=5.0,
    t_skip_nonrel=4.0,
    t_read_rel=30.0,
    p_click_rel=0.8,
    p_skip_nonrel=0.7,
    height_rows=None,
) -> CardProfile:
    return CardProfile(
        card_type=card_type,
        t_click_rel=t_click_rel,
        t_click_nonrel=t_click_nonrel,
        t_skip_rel=t_skip_rel,
        t_skip_nonrel=t_skip_nonrel,
        t_read_rel=t_read_rel,
        p_click_rel=p_click_rel,
        p_skip_nonrel=p_skip_nonrel,
        height_rows=height_rows,
    )


def random_profile(rng: random.Random, card_type=CardType.TS) -> CardProfile:
    return make_profile(
        card_type=card_type,
        t_click_rel=rng.uniform(0, 10),
        t_click_nonrel=rng.uniform(0, 10),
        t_skip_rel=rng.uniform(0, 10),
        t_skip_nonrel=rng.uniform(0, 10),
        t_read_rel=rng.uniform(0, 60),
        p_click_rel=rng.random(),
        p_skip_nonrel=rng.random(),
        height_rows=rng.randrange(1, 8),
    )


def make_annotation_log(profiles, n: int, seed: int, n_users: int = 20) -> list[AnnotationRecord]:
    """Draw impressions from known profiles: actions per the profile's
    probabilities, decision times gaussian around the cell mean, reads
    uniform within 10% below the card's reading time."""
    rng = random.Random(seed)
    records = []
    card_types = list(CardType)
    for i in range(n):
        card_type = card_types[i % len(card_types)]
        profile = profiles[card_type]
        relevant = rng.random() < 0.5
        p_click = profile.p_click_rel if relevant else profile.p_click_nonrel
        clicked = rng.random() < p_click
        if clicked:
            mean = profile.t_click_rel if relevant else profile.t_click_nonrel
        else:
            mean = profile.t_skip_rel if relevant else profile.t_skip_nonrel
        read = None
        if clicked and relevant:
            read = profile.t_read_rel * rng.uniform(0.9, 1.0)
        records.append(
            AnnotationRecord(
                user_id=f"u{rng.randrange(n_users)}",
                topic_id=str(341 + (i % 3)),
                doc_id=f"doc-{i}",
                card_type=card_type,
                rel_label=1 if relevant else 0,
                action=Action.CLICK if clicked else Action.SKIP,
                decision_time=max(0.05, rng.gauss(mean, 0.6)),
                read_time=read,
            )
        )
    return records


def synthetic_model(slope: float = 2.0, intercept: float = 0.0) -> CalibrationModel:
    return CalibrationModel(
        score_mean=0.0, score_std=1.0, slope=slope, intercept=intercept, r_squared=0.9
    )


def make_topics(
    n_topics: int,
    k: int = 20,
    seed: int = 0,
    model: CalibrationModel | None = None,
) -> list[RankedList]:
    """Synthetic calibrated baselines: per topic, k score-ordered items with
    p_rel from the model and labels drawn Bernoulli(p_rel)."""
    model = model or synthetic_model()
    rng = random.Random(seed)
    topics = []
    for t in range(n_topics):
        topic_id = str(100 + t)
        scores = sorted((rng.gauss(0, 1) for _ in range(k)), reverse=True)
        entries = []
        for i, score in enumerate(scores):
            z = (score - model.score_mean) / model.score_std
            p_rel = 1.0 / (1.0 + math.exp(-(model.slope * z + model.intercept)))
            item = ResultItem(
                doc_id=f"{topic_id}-d{i}",
                topic_id=topic_id,
                score=score,
                p_rel=p_rel,
                rel_label=1 if rng.random() < p_rel else 0,
            )
            entries.append(RankedCard(item, CardType.TS))
        topics.append(RankedList(tuple(entries)))
    return topics
