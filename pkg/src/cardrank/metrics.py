"""Evaluation metrics: rank-biased overlap, DCG of a page, time-biased gain,
and summary statistics including a one-way ANOVA F test.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

from .cards import CardProfile, CardType, SerpLayout, check_probability


class MetricError(ValueError):
    """Metric input violates a precondition."""


@dataclass(frozen=True)
class MetricConfig:
    """Shared metric parameters: RBO persistence, TBG half-life in seconds,
    DCG log base, and the gain credited per clicked relevant result."""

    rbo_persistence: float = 0.9
    tbg_halflife: float = 224.0
    dcg_log_base: float = 2.0
    dcg_graded: bool = False
    tbg_gain: float = 1.0

    def __post_init__(self) -> None:
        if not (0.0 < self.rbo_persistence < 1.0):
            raise MetricError(f"rbo_persistence: must be in (0, 1), got {self.rbo_persistence}")
        if self.tbg_halflife <= 0:
            raise MetricError(f"tbg_halflife: must be > 0, got {self.tbg_halflife}")
        if self.dcg_log_base <= 1:
            raise MetricError(f"dcg_log_base: must be > 1, got {self.dcg_log_base}")


def _check_no_duplicates(name: str, items: Sequence[str]) -> None:
    if len(set(items)) != len(items):
        raise MetricError(f"{name}: duplicate ids within a list")


def rbo(list_a: Sequence[str], list_b: Sequence[str], p: float = 0.9) -> float:
    """Extrapolated rank-biased overlap of two rankings.

    Agreement at each depth is the prefix overlap divided by the depth,
    weighted geometrically by the persistence parameter p; unequal lengths
    use the uneven-list extrapolation. Identical lists score exactly 1.0.
    """
    if not (0.0 < p < 1.0):
        raise MetricError(f"p: must be in (0, 1), got {p}")
    if not list_a or not list_b:
        raise MetricError("rbo: lists must be nonempty")
    _check_no_duplicates("list_a", list_a)
    _check_no_duplicates("list_b", list_b)
    if list(list_a) == list(list_b):
        return 1.0

    shorter, longer = sorted((list(list_a), list(list_b)), key=len)
    s, length = len(shorter), len(longer)
    shorter_set = set(shorter)

    # single pass, incrementally tracking the prefix overlap X_d
    seen_short: set[str] = set()
    seen_long: set[str] = set()
    overlap = 0
    overlap_at_s = 0
    weighted_agreement = 0.0
    tail_sum = 0.0
    p_to_d = 1.0
    for depth in range(1, length + 1):
        p_to_d *= p
        element_long = longer[depth - 1]
        if depth <= s:
            element_short = shorter[depth - 1]
            if element_short == element_long:
                overlap += 1
            else:
                if element_short in seen_long:
                    overlap += 1
                if element_long in seen_short:
                    overlap += 1
                seen_short.add(element_short)
                seen_long.add(element_long)
            if depth == s:
                overlap_at_s = overlap
        else:
            if element_long in shorter_set:
                overlap += 1
            tail_sum += overlap_at_s * (depth - s) / (s * depth) * p_to_d
        weighted_agreement += overlap / depth * p_to_d

    extrapolated = (
        (1.0 - p) / p * (weighted_agreement + tail_sum)
        + ((overlap - overlap_at_s) / length + overlap_at_s / s) * p_to_d
    )
    return min(1.0, max(0.0, extrapolated))


def dcg_of_page(page_rels: Sequence[float], log_base: float = 2.0) -> float:
    """Discounted cumulative gain over the items placed on the page."""
    denom = math.log(log_base)
    return sum(
        rel / (math.log(i + 1) / denom)
        for i, rel in enumerate(page_rels, start=1)
    )


def decay(t: float, h: float) -> float:
    """Exponential time decay with half-life h: halves every h seconds."""
    if t < 0:
        raise MetricError(f"t: must be >= 0, got {t}")
    if h <= 0:
        raise MetricError(f"h: must be > 0, got {h}")
    return 2.0 ** (-t / h)


def expected_card_time(profile: CardProfile, p_rel: float) -> float:
    """Expected seconds a linear-browsing user spends on one card.

    A click on a relevant item costs decision plus reading time; every
    other branch costs only the decision time for that branch.
    """
    check_probability("p_rel", p_rel)
    relevant = (
        profile.p_click_rel * (profile.t_click_rel + profile.t_read_rel)
        + profile.p_skip_rel * profile.t_skip_rel
    )
    nonrelevant = (
        profile.p_click_nonrel * profile.t_click_nonrel
        + profile.p_skip_nonrel * profile.t_skip_nonrel
    )
    return p_rel * relevant + (1.0 - p_rel) * nonrelevant


def tbg_of_page(
    page: SerpLayout,
    profiles: Mapping[CardType, CardProfile],
    p_rels: Sequence[float],
    rels: Sequence[int],
    h: float = 224.0,
    gain: float = 1.0,
) -> float:
    """Time-biased gain of a page under a linear browsing model.

    Each relevant item contributes its click probability, decayed by the
    expected time spent on all earlier cards.
    """
    if not (len(page) == len(p_rels) == len(rels)):
        raise MetricError(
            f"length mismatch: page={len(page)}, p_rels={len(p_rels)}, rels={len(rels)}"
        )
    total = 0.0
    elapsed = 0.0
    for entry, p_rel, rel in zip(page, p_rels, rels):
        profile = profiles[entry.card_type]
        if rel > 0:
            total += gain * profile.p_click_rel * decay(elapsed, h)
        elapsed += expected_card_time(profile, p_rel)
    return total


def one_way_anova(groups: Sequence[Sequence[float]]) -> tuple[float, int, int]:
    """F statistic and degrees of freedom for a one-way ANOVA.

    Returns (F, df_between, df_within). Degenerate input (fewer than two
    groups, a group with fewer than two values, or zero total variance)
    is an error.
    """
    if len(groups) < 2:
        raise MetricError(f"one_way_anova: need >= 2 groups, got {len(groups)}")
    for i, group in enumerate(groups):
        if len(group) < 2:
            raise MetricError(f"one_way_anova: group {i} has fewer than 2 values")
    n_total = sum(len(g) for g in groups)
    grand_mean = sum(sum(g) for g in groups) / n_total
    ss_between = sum(len(g) * (sum(g) / len(g) - grand_mean) ** 2 for g in groups)
    ss_within = sum(
        sum((v - sum(g) / len(g)) ** 2 for v in g)
        for g in groups
    )
    if ss_between + ss_within == 0.0:
        raise MetricError("one_way_anova: zero total variance")
    df_between = len(groups) - 1
    df_within = n_total - len(groups)
    if ss_within == 0.0:
        raise MetricError("one_way_anova: zero within-group variance")
    f_stat = (ss_between / df_between) / (ss_within / df_within)
    return f_stat, df_between, df_within


def summarize(values: Sequence[float]) -> tuple[float, float]:
    """Arithmetic mean and population standard deviation."""
    if not values:
        raise MetricError("summarize: empty input")
    mean = sum(values) / len(values)
    variance = sum((v - mean) ** 2 for v in values) / len(values)
    return mean, math.sqrt(variance)
