"""File formats: run files, qrels, annotation logs, profile files,
calibration models, and experiment reports.

Parsers reject malformed input instead of repairing it, and every parse
error carries the offending line number.
"""

from __future__ import annotations

import configparser
import csv
import io
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import TYPE_CHECKING, Iterable, Mapping, Sequence

from .calibration import CalibrationModel
from .cards import Action, AnnotationRecord, CardProfile, CardType, validate_profile

if TYPE_CHECKING:
    from .simulation import ComboSummary, ExperimentReport


class ParseError(ValueError):
    """Malformed input file; message names the line when applicable."""

    def __init__(self, path: str | Path, line_no: int | None, message: str):
        location = f"{path}:{line_no}" if line_no is not None else str(path)
        super().__init__(f"{location}: {message}")
        self.path = str(path)
        self.line_no = line_no


@dataclass(frozen=True)
class RunEntry:
    """One line of a TREC-style run file."""

    topic_id: str
    q0: str
    doc_id: str
    rank: int
    score: float
    tag: str


@dataclass(frozen=True)
class QrelEntry:
    """One relevance judgment: (topic, document) -> grade."""

    topic_id: str
    iteration: str
    doc_id: str
    rel_label: int


def parse_run_file(path: str | Path) -> list[RunEntry]:
    """Parse a whitespace-delimited 6-field run file in file order."""
    entries = []
    for line_no, line in enumerate(_read_lines(path), start=1):
        if not line.strip():
            continue
        fields = line.split()
        if len(fields) != 6:
            raise ParseError(path, line_no, f"expected 6 fields, got {len(fields)}")
        topic_id, q0, doc_id, rank_s, score_s, tag = fields
        try:
            rank = int(rank_s)
        except ValueError:
            raise ParseError(path, line_no, f"unparseable rank: {rank_s!r}") from None
        if rank < 1:
            raise ParseError(path, line_no, f"rank must be positive, got {rank}")
        try:
            score = float(score_s)
        except ValueError:
            raise ParseError(path, line_no, f"unparseable score: {score_s!r}") from None
        if not math.isfinite(score):
            raise ParseError(path, line_no, f"score must be finite, got {score_s}")
        entries.append(RunEntry(topic_id, q0, doc_id, rank, score, tag))
    return entries


def write_run_file(entries: Iterable[RunEntry], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        for e in entries:
            handle.write(f"{e.topic_id} {e.q0} {e.doc_id} {e.rank} {e.score!r} {e.tag}\n")


def parse_qrels(path: str | Path) -> list[QrelEntry]:
    """Parse a 4-field qrels file; duplicate (topic, doc) pairs are errors."""
    entries = []
    seen: set[tuple[str, str]] = set()
    for line_no, line in enumerate(_read_lines(path), start=1):
        if not line.strip():
            continue
        fields = line.split()
        if len(fields) != 4:
            raise ParseError(path, line_no, f"expected 4 fields, got {len(fields)}")
        topic_id, iteration, doc_id, rel_s = fields
        try:
            rel_label = int(rel_s)
        except ValueError:
            raise ParseError(path, line_no, f"unparseable relevance label: {rel_s!r}") from None
        if rel_label < 0:
            raise ParseError(path, line_no, f"negative relevance label: {rel_label}")
        key = (topic_id, doc_id)
        if key in seen:
            raise ParseError(path, line_no, f"duplicate judgment for {key}")
        seen.add(key)
        entries.append(QrelEntry(topic_id, iteration, doc_id, rel_label))
    return entries


def write_qrels(entries: Iterable[QrelEntry], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        for e in entries:
            handle.write(f"{e.topic_id} {e.iteration} {e.doc_id} {e.rel_label}\n")


def qrels_by_topic(entries: Iterable[QrelEntry]) -> dict[str, dict[str, int]]:
    """Group judgments as {topic_id: {doc_id: grade}}."""
    grouped: dict[str, dict[str, int]] = {}
    for e in entries:
        grouped.setdefault(e.topic_id, {})[e.doc_id] = e.rel_label
    return grouped


ANNOTATION_COLUMNS = (
    "user_id",
    "topic_id",
    "doc_id",
    "card_type",
    "rel_label",
    "action",
    "decision_time",
    "read_time",
)


def parse_annotation_log(path: str | Path) -> list[AnnotationRecord]:
    """Parse a header-bearing CSV of card impressions into validated records.

    ``read_time`` must be empty for skips and may be empty for clicks.
    """
    records = []
    with open(path, "r", encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(path, 1, "missing header") from None
        if tuple(header) != ANNOTATION_COLUMNS:
            raise ParseError(
                path, 1, f"expected header {','.join(ANNOTATION_COLUMNS)}, got {','.join(header)}"
            )
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(ANNOTATION_COLUMNS):
                raise ParseError(path, line_no, f"expected {len(ANNOTATION_COLUMNS)} fields, got {len(row)}")
            user_id, topic_id, doc_id, card_s, rel_s, action_s, decision_s, read_s = row
            try:
                record = AnnotationRecord(
                    user_id=user_id,
                    topic_id=topic_id,
                    doc_id=doc_id,
                    card_type=CardType.parse(card_s),
                    rel_label=int(rel_s),
                    action=Action.parse(action_s),
                    decision_time=float(decision_s),
                    read_time=float(read_s) if read_s.strip() else None,
                )
            except ValueError as exc:
                raise ParseError(path, line_no, str(exc)) from None
            records.append(record)
    return records


def write_annotation_log(records: Iterable[AnnotationRecord], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(ANNOTATION_COLUMNS)
        for r in records:
            writer.writerow(
                [
                    r.user_id,
                    r.topic_id,
                    r.doc_id,
                    r.card_type.value,
                    r.rel_label,
                    r.action.value,
                    repr(r.decision_time),
                    "" if r.read_time is None else repr(r.read_time),
                ]
            )


_PROFILE_FLOAT_KEYS = (
    "t_click_rel",
    "t_click_nonrel",
    "t_skip_rel",
    "t_skip_nonrel",
    "t_read_rel",
    "p_click_rel",
    "p_skip_nonrel",
)
_PROFILE_KEYS = _PROFILE_FLOAT_KEYS + ("height_rows",)


def parse_profiles(path: str | Path) -> dict[CardType, CardProfile]:
    """Parse a profile file: one section per card type, all fields required,
    unknown sections or keys rejected."""
    parser = configparser.ConfigParser(interpolation=None)
    try:
        with open(path, "r", encoding="utf-8") as handle:
            parser.read_file(handle)
    except configparser.Error as exc:
        raise ParseError(path, getattr(exc, "lineno", None), str(exc)) from None

    profiles: dict[CardType, CardProfile] = {}
    for section in parser.sections():
        try:
            card_type = CardType(section)
        except ValueError:
            raise ParseError(path, None, f"unknown card type section [{section}]") from None
        values = dict(parser.items(section))
        missing = [k for k in _PROFILE_KEYS if k not in values]
        if missing:
            raise ParseError(path, None, f"[{section}] missing field {missing[0]}")
        unknown = [k for k in values if k not in _PROFILE_KEYS]
        if unknown:
            raise ParseError(path, None, f"[{section}] unknown field {unknown[0]}")
        try:
            profile = CardProfile(
                card_type=card_type,
                height_rows=int(values["height_rows"]),
                **{k: float(values[k]) for k in _PROFILE_FLOAT_KEYS},
            )
            profiles[card_type] = validate_profile(profile)
        except ValueError as exc:
            raise ParseError(path, None, f"[{section}] {exc}") from None
    if not profiles:
        raise ParseError(path, None, "no card type sections found")
    return profiles


def write_profiles(profiles: Mapping[CardType, CardProfile], path: str | Path) -> None:
    lines = []
    for card_type in CardType:
        if card_type not in profiles:
            continue
        p = profiles[card_type]
        lines.append(f"[{card_type.value}]")
        for key in _PROFILE_FLOAT_KEYS:
            lines.append(f"{key} = {getattr(p, key)!r}")
        lines.append(f"height_rows = {p.height_rows}")
        lines.append("")
    Path(path).write_text("\n".join(lines), encoding="utf-8")


def default_profiles() -> dict[CardType, CardProfile]:
    """The profile set shipped with the package."""
    source = resources.files("cardrank").joinpath("data/default_profiles.txt")
    with resources.as_file(source) as path:
        return parse_profiles(path)


_CALIBRATION_KEYS = ("score_mean", "score_std", "slope", "intercept", "r_squared")


def write_calibration(model: CalibrationModel, path: str | Path) -> None:
    lines = [f"{key} = {getattr(model, key)!r}" for key in _CALIBRATION_KEYS]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_calibration(path: str | Path) -> CalibrationModel:
    values: dict[str, float] = {}
    for line_no, line in enumerate(_read_lines(path), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ParseError(path, line_no, f"expected 'key = value', got {stripped!r}")
        key, _, value_s = stripped.partition("=")
        key = key.strip()
        if key not in _CALIBRATION_KEYS:
            raise ParseError(path, line_no, f"unknown field {key!r}")
        if key in values:
            raise ParseError(path, line_no, f"duplicate field {key!r}")
        try:
            values[key] = float(value_s.strip())
        except ValueError:
            raise ParseError(path, line_no, f"unparseable value for {key!r}") from None
    missing = [k for k in _CALIBRATION_KEYS if k not in values]
    if missing:
        raise ParseError(path, None, f"missing field {missing[0]}")
    try:
        return CalibrationModel(**values)
    except ValueError as exc:
        raise ParseError(path, None, str(exc)) from None


REPORT_HEADER = (
    "combo",
    "rbo_mean",
    "rbo_std",
    "dcg_mean",
    "dcg_std",
    "tbg_mean",
    "tbg_std",
    "cards_mean",
)


def report_csv(report: "ExperimentReport") -> str:
    out = io.StringIO()
    writer = csv.writer(out)
    writer.writerow(REPORT_HEADER)
    for row in report.rows:
        writer.writerow(
            [
                row.combo,
                repr(row.rbo_mean),
                repr(row.rbo_std),
                repr(row.dcg_mean),
                repr(row.dcg_std),
                repr(row.tbg_mean),
                repr(row.tbg_std),
                repr(row.cards_mean),
            ]
        )
    return out.getvalue()


def write_report_csv(report: "ExperimentReport", path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        handle.write(report_csv(report))


def read_report_csv(path: str | Path) -> "ExperimentReport":
    from .simulation import ComboSummary, ExperimentReport

    rows = []
    with open(path, "r", encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(path, 1, "missing header") from None
        if tuple(header) != REPORT_HEADER:
            raise ParseError(path, 1, f"expected header {','.join(REPORT_HEADER)}")
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(REPORT_HEADER):
                raise ParseError(path, line_no, f"expected {len(REPORT_HEADER)} fields, got {len(row)}")
            try:
                rows.append(
                    ComboSummary(
                        combo=row[0],
                        rbo_mean=float(row[1]),
                        rbo_std=float(row[2]),
                        dcg_mean=float(row[3]),
                        dcg_std=float(row[4]),
                        tbg_mean=float(row[5]),
                        tbg_std=float(row[6]),
                        cards_mean=float(row[7]),
                    )
                )
            except ValueError:
                raise ParseError(path, line_no, "unparseable numeric field") from None
    return ExperimentReport(rows=tuple(rows))


def report_markdown(report: "ExperimentReport") -> str:
    """Render the per-combo summary as a markdown table of mean +/- std."""
    out = io.StringIO()
    out.write("| Combination Type | RBO | DCG of Page | TBG of Page | Cards |\n")
    out.write("|---|---|---|---|---|\n")
    for row in report.rows:
        out.write(
            f"| {row.combo} "
            f"| {row.rbo_mean:.3f} ± {row.rbo_std:.3f} "
            f"| {row.dcg_mean:.3f} ± {row.dcg_std:.3f} "
            f"| {row.tbg_mean:.3f} ± {row.tbg_std:.3f} "
            f"| {row.cards_mean:.2f} |\n"
        )
    if report.anova_f is not None and report.anova_df is not None:
        df_b, df_w = report.anova_df
        out.write(f"\nOne-way ANOVA over RBO groups: F({df_b},{df_w}) = {report.anova_f:.2f}\n")
    return out.getvalue()


def _read_lines(path: str | Path) -> list[str]:
    return Path(path).read_text(encoding="utf-8").splitlines()
