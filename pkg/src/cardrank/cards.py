"""Domain types for result cards, ranked lists, and annotation records.

All types are immutable values and validate their own invariants, so they
are safe to share between threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Mapping


class ValidationError(ValueError):
    """A domain value violates one of its invariants."""


class CardType(str, Enum):
    """The four result-card presentations: title/image/summary combinations."""

    TIS = "TIS"
    TI = "TI"
    TS = "TS"
    T = "T"

    @classmethod
    def parse(cls, name: str) -> "CardType":
        try:
            return cls(name)
        except ValueError:
            raise ValidationError(f"unknown card type: {name!r}") from None


class Action(str, Enum):
    """User actions available on a result card."""

    CLICK = "click"
    SKIP = "skip"

    @classmethod
    def parse(cls, name: str) -> "Action":
        try:
            return cls(name)
        except ValueError:
            raise ValidationError(f"unknown action: {name!r}") from None


# Rows of vertical screen space each card occupies by default.
DEFAULT_CARD_HEIGHTS: Mapping[CardType, int] = {
    CardType.TIS: 6,
    CardType.TI: 4,
    CardType.TS: 3,
    CardType.T: 1,
}


def card_height(card_type: CardType) -> int:
    """Default height in rows for a card type (profiles may override)."""
    return DEFAULT_CARD_HEIGHTS[card_type]


def check_probability(name: str, value: float) -> float:
    if not (0.0 <= value <= 1.0):
        raise ValidationError(f"{name}: probability out of range: {value}")
    return value


def check_nonnegative(name: str, value: float) -> float:
    if not math.isfinite(value) or value < 0:
        raise ValidationError(f"{name}: must be a finite value >= 0, got {value}")
    return value


@dataclass(frozen=True)
class CardProfile:
    """Interaction profile of one card type.

    Timings are decision times in seconds conditioned on (action, relevance);
    ``t_read_rel`` is the reading-time benefit of clicking a relevant result.
    Only the click-given-relevant and skip-given-non-relevant probabilities
    are stored; their complements are derived, which keeps the binary action
    space consistent by construction.
    """

    card_type: CardType
    t_click_rel: float
    t_click_nonrel: float
    t_skip_rel: float
    t_skip_nonrel: float
    t_read_rel: float
    p_click_rel: float
    p_skip_nonrel: float
    height_rows: int | None = None

    def __post_init__(self) -> None:
        if self.height_rows is None:
            object.__setattr__(self, "height_rows", card_height(self.card_type))

    @property
    def p_skip_rel(self) -> float:
        return 1.0 - self.p_click_rel

    @property
    def p_click_nonrel(self) -> float:
        return 1.0 - self.p_skip_nonrel


def validate_profile(profile: CardProfile) -> CardProfile:
    """Return the profile unchanged iff every invariant holds.

    Raises ValidationError naming the first violated field.
    """
    for name in ("t_click_rel", "t_click_nonrel", "t_skip_rel", "t_skip_nonrel", "t_read_rel"):
        check_nonnegative(name, getattr(profile, name))
    for name in ("p_click_rel", "p_skip_nonrel"):
        check_probability(name, getattr(profile, name))
    if profile.height_rows < 1:
        raise ValidationError("height_rows: height must be >= 1")
    return profile


@dataclass(frozen=True)
class ResultItem:
    """A retrieved document with its score, calibrated relevance probability,
    and (optionally) a judged relevance grade."""

    doc_id: str
    topic_id: str
    score: float
    p_rel: float
    rel_label: int | None = None

    def __post_init__(self) -> None:
        check_probability("p_rel", self.p_rel)
        if not math.isfinite(self.score):
            raise ValidationError(f"score: must be finite, got {self.score}")
        if self.rel_label is not None and self.rel_label < 0:
            raise ValidationError(f"rel_label: must be >= 0, got {self.rel_label}")

    @property
    def is_relevant(self) -> bool:
        """Binary relevance: a positive judged grade counts as relevant,
        unjudged counts as non-relevant."""
        return self.rel_label is not None and self.rel_label > 0


@dataclass(frozen=True)
class RankedCard:
    """One position in a ranked list: a result item shown on a card type."""

    item: ResultItem
    card_type: CardType


@dataclass(frozen=True)
class RankedList:
    """An ordered sequence of (item, card) pairs; rank 1 is the first entry."""

    entries: tuple[RankedCard, ...]

    def __post_init__(self) -> None:
        entries = tuple(self.entries)
        object.__setattr__(self, "entries", entries)
        seen: set[str] = set()
        for entry in entries:
            if entry.item.doc_id in seen:
                raise ValidationError(f"duplicate doc_id in ranked list: {entry.item.doc_id}")
            seen.add(entry.item.doc_id)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[RankedCard]:
        return iter(self.entries)

    def doc_ids(self) -> list[str]:
        return [entry.item.doc_id for entry in self.entries]


@dataclass(frozen=True)
class SerpLayout:
    """The cards of a ranked list actually placed on the page, with the rows
    they consume and the page's row budget."""

    entries: tuple[RankedCard, ...]
    rows_used: int
    row_budget: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", tuple(self.entries))
        if self.row_budget < 1:
            raise ValidationError(f"row_budget: must be >= 1, got {self.row_budget}")
        if not (0 <= self.rows_used <= self.row_budget):
            raise ValidationError(
                f"rows_used: expected 0 <= rows_used <= {self.row_budget}, got {self.rows_used}"
            )

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[RankedCard]:
        return iter(self.entries)


@dataclass(frozen=True)
class AnnotationRecord:
    """One logged card impression: who saw what, on which card, what they
    did, and how long it took. ``read_time`` is only present for clicks."""

    user_id: str
    topic_id: str
    doc_id: str
    card_type: CardType
    rel_label: int
    action: Action
    decision_time: float
    read_time: float | None = None

    def __post_init__(self) -> None:
        if self.rel_label < 0:
            raise ValidationError(f"rel_label: must be >= 0, got {self.rel_label}")
        if not (math.isfinite(self.decision_time) and self.decision_time > 0):
            raise ValidationError(f"decision_time: must be > 0, got {self.decision_time}")
        if self.read_time is not None:
            if self.action is Action.SKIP:
                raise ValidationError("read_time on skip: skips cannot carry a read_time")
            if not (math.isfinite(self.read_time) and self.read_time > 0):
                raise ValidationError(f"read_time: must be > 0, got {self.read_time}")

    @property
    def is_relevant(self) -> bool:
        return self.rel_label > 0
