"""Card profile estimation from annotation logs.

Action probabilities are maximum-likelihood click/skip frequencies per
(card type, relevance) cell, decision timings are per-cell means, and the
reading-time benefit is the per-user maximum read time on relevant clicks
averaged across users. No smoothing is applied anywhere: a cell with no
observations is a hard error, never a silently invented value.
"""

from __future__ import annotations

import math
from collections import defaultdict
from typing import Iterable, Mapping, Sequence

from sklearn.base import BaseEstimator

from .cards import (
    Action,
    AnnotationRecord,
    CardProfile,
    CardType,
    DEFAULT_CARD_HEIGHTS,
    validate_profile,
)


class EstimationError(ValueError):
    """An estimator was asked for a cell with no observations."""


def _cell_name(card_type: CardType, relevant: bool) -> str:
    return f"({card_type.value}, {'R' if relevant else 'non-R'})"


def estimate_action_probabilities(
    records: Sequence[AnnotationRecord],
) -> dict[tuple[CardType, bool], tuple[float, float]]:
    """Click/skip probabilities per (card type, relevance) cell.

    Returns ``{(card_type, relevant): (p_click, p_skip)}`` for every cell
    with at least one impression; p_click is clicks / shown, unsmoothed.
    """
    shown: dict[tuple[CardType, bool], int] = defaultdict(int)
    clicks: dict[tuple[CardType, bool], int] = defaultdict(int)
    for record in records:
        cell = (record.card_type, record.is_relevant)
        shown[cell] += 1
        if record.action is Action.CLICK:
            clicks[cell] += 1
    return {
        cell: (clicks[cell] / count, 1.0 - clicks[cell] / count)
        for cell, count in shown.items()
    }


def estimate_action_times(
    records: Sequence[AnnotationRecord],
) -> dict[tuple[Action, CardType, bool], tuple[float, float]]:
    """Mean and population std of decision time per (action, card, relevance)
    cell, over every cell with at least one record."""
    times: dict[tuple[Action, CardType, bool], list[float]] = defaultdict(list)
    for record in records:
        times[(record.action, record.card_type, record.is_relevant)].append(record.decision_time)
    out = {}
    for cell, values in times.items():
        mean = sum(values) / len(values)
        variance = sum((v - mean) ** 2 for v in values) / len(values)
        out[cell] = (mean, math.sqrt(variance))
    return out


def estimate_reading_time(records: Sequence[AnnotationRecord]) -> dict[CardType, float]:
    """Reading-time benefit per card type.

    For each (user, card type), take the maximum read time over that user's
    relevant clicks, then average those maxima across users. Capping at the
    per-user maximum keeps a quick read of one relevant result from
    deflating the card type's benefit.
    """
    per_user_max: dict[tuple[str, CardType], float] = {}
    for record in records:
        if record.action is not Action.CLICK or not record.is_relevant or record.read_time is None:
            continue
        key = (record.user_id, record.card_type)
        per_user_max[key] = max(per_user_max.get(key, 0.0), record.read_time)
    by_card: dict[CardType, list[float]] = defaultdict(list)
    for (_, card_type), longest in per_user_max.items():
        by_card[card_type].append(longest)
    return {card_type: sum(values) / len(values) for card_type, values in by_card.items()}


def build_profiles(
    records: Sequence[AnnotationRecord],
    heights: Mapping[CardType, int] | None = None,
) -> dict[CardType, CardProfile]:
    """One validated CardProfile per card type, composed from the three
    estimators. Any card type with a missing cell raises, naming the cell."""
    probabilities = estimate_action_probabilities(records)
    timings = estimate_action_times(records)
    reading = estimate_reading_time(records)
    resolved_heights = dict(DEFAULT_CARD_HEIGHTS)
    if heights:
        resolved_heights.update(heights)

    profiles: dict[CardType, CardProfile] = {}
    for card_type in CardType:
        for relevant in (True, False):
            if (card_type, relevant) not in probabilities:
                raise EstimationError(
                    f"no observations for cell {_cell_name(card_type, relevant)}"
                )
            for action in Action:
                if (action, card_type, relevant) not in timings:
                    raise EstimationError(
                        f"no observations for cell "
                        f"({action.value}, {card_type.value}, {'R' if relevant else 'non-R'})"
                    )
        if card_type not in reading:
            raise EstimationError(
                f"no relevant-click reads for card type {card_type.value}"
            )
        profiles[card_type] = validate_profile(
            CardProfile(
                card_type=card_type,
                t_click_rel=timings[(Action.CLICK, card_type, True)][0],
                t_click_nonrel=timings[(Action.CLICK, card_type, False)][0],
                t_skip_rel=timings[(Action.SKIP, card_type, True)][0],
                t_skip_nonrel=timings[(Action.SKIP, card_type, False)][0],
                t_read_rel=reading[card_type],
                p_click_rel=probabilities[(card_type, True)][0],
                p_skip_nonrel=probabilities[(card_type, False)][1],
                height_rows=resolved_heights[card_type],
            )
        )
    return profiles


class CardProfileEstimator(BaseEstimator):
    """Scikit-learn style wrapper: fit card profiles from annotation records.

    ``fit(records)`` runs the full estimation pipeline; the result is
    available as ``profiles_`` keyed by card type.
    """

    def __init__(self, heights: Mapping[CardType, int] | None = None):
        self.heights = heights

    def fit(self, X: Iterable[AnnotationRecord], y=None):
        self.profiles_ = build_profiles(list(X), heights=self.heights)
        return self
