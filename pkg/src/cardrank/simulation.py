"""Randomized heterogeneous-page simulation.

Starting from a homogeneous score-ordered baseline, each trial randomly
re-assigns card types per a combination scheme, re-ranks by expected
perceived utility, lays the list out under a row budget, and compares the
result against the baseline with RBO, DCG, and TBG. Trial RNG streams are
derived from (seed, topic, combo, trial), so results do not depend on
execution order.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass
from typing import Mapping, Sequence

from .calibration import CalibrationModel, predict_p_rel
from .cards import CardProfile, CardType, RankedCard, RankedList, ResultItem, SerpLayout
from .epu import epu_card
from .formats import RunEntry
from .metrics import MetricConfig, dcg_of_page, one_way_anova, rbo, summarize, tbg_of_page


class SimulationError(ValueError):
    """Simulation input is incomplete or inconsistent."""


DEFAULT_ROW_BUDGET = 12
DEFAULT_LIST_DEPTH = 20


@dataclass(frozen=True)
class Combo:
    """A card-assignment scheme: each position draws uniformly from
    ``choices``. A single choice makes the assignment deterministic."""

    name: str
    choices: tuple[CardType, ...]


# Combination schemes, in report order. The baseline keeps every card TS.
COMBOS: dict[str, Combo] = {
    combo.name: combo
    for combo in (
        Combo("baseline", (CardType.TS,)),
        Combo("t-or-ti", (CardType.T, CardType.TI)),
        Combo("tis-or-ts", (CardType.TIS, CardType.TS)),
        Combo("tis-or-t", (CardType.TIS, CardType.T)),
        Combo("ts-or-t", (CardType.TS, CardType.T)),
        Combo("random", (CardType.TIS, CardType.TI, CardType.TS, CardType.T)),
        Combo("ts-or-ti", (CardType.TS, CardType.TI)),
        Combo("tis-or-ti", (CardType.TIS, CardType.TI)),
    )
}


@dataclass(frozen=True)
class TrialResult:
    """Metrics of one simulated page alteration."""

    topic_id: str
    combo: str
    trial_index: int
    rbo: float
    dcg_page: float
    tbg_page: float
    cards_on_page: int
    rows_used: int


@dataclass(frozen=True)
class ComboSummary:
    """Mean and population std of each metric for one combination scheme."""

    combo: str
    rbo_mean: float
    rbo_std: float
    dcg_mean: float
    dcg_std: float
    tbg_mean: float
    tbg_std: float
    cards_mean: float


@dataclass(frozen=True)
class ExperimentReport:
    """Per-combo metric summaries plus the one-way ANOVA F over RBO groups
    (absent when fewer than two combos or degenerate groups)."""

    rows: tuple[ComboSummary, ...]
    anova_f: float | None = None
    anova_df: tuple[int, int] | None = None
    trials_per_combo: int = 0
    n_topics: int = 0


def baseline_ranking(
    topic_id: str,
    run_entries: Sequence[RunEntry],
    model: CalibrationModel,
    k: int = DEFAULT_LIST_DEPTH,
    rel_labels: Mapping[str, int] | None = None,
) -> RankedList:
    """Homogeneous baseline: top-k entries by descending score, every card
    TS, relevance probabilities from the calibration model.

    Ties in score break by ascending doc_id. ``rel_labels`` attaches judged
    grades by doc_id; unjudged documents keep no label.
    """
    if k < 1:
        raise SimulationError(f"k must be >= 1, got {k}")
    entries = [e for e in run_entries if e.topic_id == topic_id]
    if not entries:
        raise SimulationError(f"no run entries for topic {topic_id}")
    entries.sort(key=lambda e: (-e.score, e.doc_id))
    ranked = []
    for entry in entries[:k]:
        label = rel_labels.get(entry.doc_id) if rel_labels else None
        item = ResultItem(
            doc_id=entry.doc_id,
            topic_id=topic_id,
            score=entry.score,
            p_rel=predict_p_rel(model, entry.score),
            rel_label=label,
        )
        ranked.append(RankedCard(item, CardType.TS))
    return RankedList(tuple(ranked))


def assign_cards(ranked: RankedList, combo: Combo, rng: random.Random) -> RankedList:
    """Independently draw a card type for every position per the combo."""
    if len(combo.choices) == 1:
        card = combo.choices[0]
        return RankedList(tuple(RankedCard(e.item, card) for e in ranked))
    return RankedList(
        tuple(RankedCard(e.item, rng.choice(combo.choices)) for e in ranked)
    )


def rerank_by_epu(
    ranked: RankedList, profiles: Mapping[CardType, CardProfile]
) -> RankedList:
    """Stable sort by descending card utility; ties keep the original rank."""
    for entry in ranked:
        if entry.card_type not in profiles:
            raise SimulationError(f"no profile for card type {entry.card_type.value}")
    reordered = sorted(
        ranked,
        key=lambda e: -epu_card(profiles[e.card_type], e.item.p_rel),
    )
    return RankedList(tuple(reordered))


def layout_page(
    ranked: RankedList,
    profiles: Mapping[CardType, CardProfile],
    row_budget: int = DEFAULT_ROW_BUDGET,
) -> SerpLayout:
    """Greedy page fill in rank order: place each card that still fits the
    remaining rows and keep scanning, so smaller cards later in the list can
    use space a larger card could not."""
    if row_budget < 1:
        raise SimulationError(f"row_budget must be >= 1, got {row_budget}")
    placed = []
    remaining = row_budget
    for entry in ranked:
        if entry.card_type not in profiles:
            raise SimulationError(f"no profile for card type {entry.card_type.value}")
        height = profiles[entry.card_type].height_rows
        if height <= remaining:
            placed.append(entry)
            remaining -= height
        if remaining == 0:
            break
    return SerpLayout(tuple(placed), rows_used=row_budget - remaining, row_budget=row_budget)


def derive_trial_seed(seed: int, topic_id: str, combo_name: str, trial_index: int) -> int:
    """Stable 64-bit stream seed for one (seed, topic, combo, trial) cell."""
    key = f"{seed}|{topic_id}|{combo_name}|{trial_index}".encode()
    return int.from_bytes(hashlib.sha256(key).digest()[:8], "big")


def run_trial(
    baseline: RankedList,
    combo: Combo,
    seed: int,
    profiles: Mapping[CardType, CardProfile],
    *,
    trial_index: int = 0,
    row_budget: int = DEFAULT_ROW_BUDGET,
    config: MetricConfig | None = None,
    rbo_on_page: bool = False,
) -> TrialResult:
    """One randomized alteration of a topic's baseline list.

    Cards are re-assigned, the list is re-ranked by utility, and the page is
    filled under the row budget. RBO compares full lists by default
    (``rbo_on_page`` switches to page prefixes); DCG and TBG always score
    the page only.
    """
    if not len(baseline):
        raise SimulationError("baseline list is empty")
    config = config or MetricConfig()
    topic_id = baseline.entries[0].item.topic_id
    rng = random.Random(derive_trial_seed(seed, topic_id, combo.name, trial_index))

    altered = assign_cards(baseline, combo, rng)
    reranked = rerank_by_epu(altered, profiles)
    page = layout_page(reranked, profiles, row_budget)

    if rbo_on_page:
        baseline_page = layout_page(baseline, profiles, row_budget)
        rbo_value = rbo(
            [e.item.doc_id for e in baseline_page],
            [e.item.doc_id for e in page],
            config.rbo_persistence,
        )
    else:
        rbo_value = rbo(baseline.doc_ids(), reranked.doc_ids(), config.rbo_persistence)

    page_rels = [
        (e.item.rel_label or 0) if config.dcg_graded else (1 if e.item.is_relevant else 0)
        for e in page
    ]
    dcg_value = dcg_of_page(page_rels, log_base=config.dcg_log_base)
    tbg_value = tbg_of_page(
        page,
        profiles,
        p_rels=[e.item.p_rel for e in page],
        rels=[1 if e.item.is_relevant else 0 for e in page],
        h=config.tbg_halflife,
        gain=config.tbg_gain,
    )
    return TrialResult(
        topic_id=topic_id,
        combo=combo.name,
        trial_index=trial_index,
        rbo=rbo_value,
        dcg_page=dcg_value,
        tbg_page=tbg_value,
        cards_on_page=len(page),
        rows_used=page.rows_used,
    )


def run_experiment(
    topics: Sequence[RankedList],
    combos: Sequence[Combo],
    trials_per_combo: int = 100,
    seed: int = 0,
    *,
    profiles: Mapping[CardType, CardProfile],
    row_budget: int = DEFAULT_ROW_BUDGET,
    config: MetricConfig | None = None,
    rbo_on_page: bool = False,
) -> ExperimentReport:
    """Run every (topic, combo, trial) cell and aggregate per combo.

    Each trial derives its own RNG stream, so the report is identical under
    any execution schedule for a fixed seed.
    """
    if not topics:
        raise SimulationError("need at least one topic")
    if not combos:
        raise SimulationError("need at least one combo")
    config = config or MetricConfig()

    rbo_groups: list[list[float]] = []
    rows = []
    for combo in combos:
        trials = [
            run_trial(
                baseline,
                combo,
                seed,
                profiles,
                trial_index=trial_index,
                row_budget=row_budget,
                config=config,
                rbo_on_page=rbo_on_page,
            )
            for baseline in topics
            for trial_index in range(trials_per_combo)
        ]
        rbo_values = [t.rbo for t in trials]
        rbo_groups.append(rbo_values)
        rbo_mean, rbo_std = summarize(rbo_values)
        dcg_mean, dcg_std = summarize([t.dcg_page for t in trials])
        tbg_mean, tbg_std = summarize([t.tbg_page for t in trials])
        cards_mean = sum(t.cards_on_page for t in trials) / len(trials)
        rows.append(
            ComboSummary(
                combo=combo.name,
                rbo_mean=rbo_mean,
                rbo_std=rbo_std,
                dcg_mean=dcg_mean,
                dcg_std=dcg_std,
                tbg_mean=tbg_mean,
                tbg_std=tbg_std,
                cards_mean=cards_mean,
            )
        )

    anova_f = anova_df = None
    if len(rbo_groups) >= 2:
        try:
            f_stat, df_between, df_within = one_way_anova(rbo_groups)
            anova_f, anova_df = f_stat, (df_between, df_within)
        except ValueError:
            pass
    return ExperimentReport(
        rows=tuple(rows),
        anova_f=anova_f,
        anova_df=anova_df,
        trials_per_combo=trials_per_combo,
        n_topics=len(topics),
    )
