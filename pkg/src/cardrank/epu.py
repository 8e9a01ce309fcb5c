"""Expected perceived utility (EPU) of result cards and result lists.

A card's utility is the probability-weighted benefit minus cost, in
seconds, over the four (relevance, action) outcomes of a binary click/skip
interaction. The only non-zero benefit is clicking a relevant result,
which is worth its reading time. A ranked list's utility discounts each
card by the probability that no earlier card already satisfied the user.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .cards import Action, CardProfile, check_probability


@dataclass(frozen=True)
class ActionOutcome:
    """One (action, relevance) branch of a card's interaction, with its
    probability, benefit, and cost in seconds."""

    action: Action
    relevant: bool
    probability: float
    benefit: float
    cost: float


def card_outcomes(profile: CardProfile) -> tuple[ActionOutcome, ...]:
    """All four interaction branches of a card, before relevance weighting."""
    return (
        ActionOutcome(Action.CLICK, True, profile.p_click_rel, profile.t_read_rel, profile.t_click_rel),
        ActionOutcome(Action.SKIP, True, profile.p_skip_rel, 0.0, profile.t_skip_rel),
        ActionOutcome(Action.CLICK, False, profile.p_click_nonrel, 0.0, profile.t_click_nonrel),
        ActionOutcome(Action.SKIP, False, profile.p_skip_nonrel, 0.0, profile.t_skip_nonrel),
    )


def expected_benefit(profile: CardProfile, action: Action) -> float:
    """Relevance-marginal benefit of an action in seconds.

    Clicking is worth the reading time when the item turns out relevant;
    every other branch is worth nothing, so skips always return 0.
    """
    if action is Action.CLICK:
        return profile.p_click_rel * profile.t_read_rel
    return 0.0


def expected_cost(profile: CardProfile, action: Action) -> float:
    """Relevance-marginal cost of an action: the decision time of each
    relevance branch weighted by the probability of taking the action there."""
    if action is Action.CLICK:
        return (
            profile.p_click_rel * profile.t_click_rel
            + profile.p_click_nonrel * profile.t_click_nonrel
        )
    return (
        profile.p_skip_rel * profile.t_skip_rel
        + profile.p_skip_nonrel * profile.t_skip_nonrel
    )


def epu_card(profile: CardProfile, p_rel: float) -> float:
    """Expected perceived utility of one card given its relevance probability.

    Sums probability * (benefit - cost) over the four interaction branches,
    weighting each branch by the relevance probability it is conditioned on.
    May be negative for cost-dominated cards.
    """
    check_probability("p_rel", p_rel)
    relevant_branch = (
        profile.p_click_rel * (profile.t_read_rel - profile.t_click_rel)
        - profile.p_skip_rel * profile.t_skip_rel
    )
    nonrelevant_branch = (
        -profile.p_click_nonrel * profile.t_click_nonrel
        - profile.p_skip_nonrel * profile.t_skip_nonrel
    )
    return p_rel * relevant_branch + (1.0 - p_rel) * nonrelevant_branch


def discounted_utility(pairs: Sequence[tuple[float, float]]) -> float:
    """Total utility of (p_rel, card_utility) pairs in rank order.

    Each card's utility is discounted by the probability that no earlier
    card was relevant: the user is assumed to stop once satisfied.
    """
    if not pairs:
        raise ValueError("discounted_utility: empty input")
    total = 0.0
    continue_prob = 1.0
    for p_rel, utility in pairs:
        check_probability("p_rel", p_rel)
        total += continue_prob * utility
        continue_prob *= 1.0 - p_rel
    return total


def epu_list(cards: Sequence[tuple[float, CardProfile]]) -> float:
    """Expected perceived utility of a ranked sequence of cards.

    ``cards`` holds (p_rel, profile) pairs in rank order. Space feasibility
    is not checked here; the caller enforces any row budget via page layout.
    """
    if not cards:
        raise ValueError("epu_list: empty input")
    return discounted_utility([(p_rel, epu_card(profile, p_rel)) for p_rel, profile in cards])
