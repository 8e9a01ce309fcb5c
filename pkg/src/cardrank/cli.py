"""Command-line interface.

Exit codes: 0 on success, 1 on usage errors, 2 on data errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import formats, retrieval
from .calibration import fit_relevance_model, predict_p_rel
from .cards import CardType
from .epu import epu_card
from .estimation import build_profiles
from .metrics import MetricConfig
from .simulation import COMBOS, baseline_ranking, run_experiment

CALIBRATION_POOL_DEPTH = 50


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}\n{self.format_usage()}")


def _build_parser() -> _Parser:
    parser = _Parser(prog="cardrank", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_index = sub.add_parser("index", help="build a BM25 index from a corpus file")
    p_index.add_argument("--corpus", required=True, help="tab-separated (doc_id, text) lines")
    p_index.add_argument("--out", required=True, help="output directory for the index")

    p_rank = sub.add_parser("rank", help="rank topics against an index, emit a run file")
    p_rank.add_argument("--index", required=True, help="index directory from the index command")
    p_rank.add_argument("--topics", required=True, help="tab-separated (topic_id, query) lines")
    p_rank.add_argument("--k", type=int, default=20)
    p_rank.add_argument("--tag", default="bm25")
    p_rank.add_argument("--out", required=True)

    p_cal = sub.add_parser("calibrate", help="fit the score-to-probability model")
    p_cal.add_argument("--run", required=True)
    p_cal.add_argument("--qrels", required=True)
    p_cal.add_argument("--pool-depth", type=int, default=CALIBRATION_POOL_DEPTH,
                       help="take the top N entries per topic as calibration input")
    p_cal.add_argument("--out", required=True)

    p_est = sub.add_parser("estimate", help="build card profiles from an annotation log")
    p_est.add_argument("--log", required=True)
    p_est.add_argument("--out", required=True)

    p_epu = sub.add_parser("epu", help="print per-item utility for a run")
    p_epu.add_argument("--run", required=True)
    p_epu.add_argument("--model", required=True)
    p_epu.add_argument("--profiles", help="profile file (default: shipped profiles)")
    p_epu.add_argument("--cards", default="TS",
                       help="comma-separated card types, cycled over each topic's items")
    p_epu.add_argument("--k", type=int, default=20)

    p_sim = sub.add_parser("simulate", help="run the card-combination experiment")
    p_sim.add_argument("--run", required=True)
    p_sim.add_argument("--qrels", required=True)
    p_sim.add_argument("--model", required=True)
    p_sim.add_argument("--profiles", help="profile file (default: shipped profiles)")
    p_sim.add_argument("--rows", type=int, default=12)
    p_sim.add_argument("--k", type=int, default=20)
    p_sim.add_argument("--trials", type=int, default=100)
    p_sim.add_argument("--seed", type=int, default=0)
    p_sim.add_argument("--combos", default="all",
                       help=f"'all' or comma-separated from: {', '.join(COMBOS)}")
    p_sim.add_argument("--rbo-p", type=float, default=0.9)
    p_sim.add_argument("--tbg-h", type=float, default=224.0)
    p_sim.add_argument("--rbo-on-page", action="store_true",
                       help="compare page prefixes instead of full lists")
    p_sim.add_argument("--out", required=True)

    p_rep = sub.add_parser("report", help="render a report CSV")
    p_rep.add_argument("--in", dest="input", required=True)
    p_rep.add_argument("--format", choices=("markdown", "csv"), default="markdown")

    return parser


def _load_profiles(path: str | None):
    if path is None:
        return formats.default_profiles()
    return formats.parse_profiles(path)


def _cmd_index(args) -> int:
    corpus = []
    for line_no, line in enumerate(
        Path(args.corpus).read_text(encoding="utf-8").splitlines(), start=1
    ):
        if not line.strip():
            continue
        doc_id, sep, text = line.partition("\t")
        if not sep:
            raise formats.ParseError(args.corpus, line_no, "expected doc_id<TAB>text")
        corpus.append((doc_id, text))
    index = retrieval.build_index(corpus)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    retrieval.save_index(index, out_dir / "index.json")
    print(f"indexed {index.doc_count} documents into {out_dir}")
    return 0


def _cmd_rank(args) -> int:
    index = retrieval.load_index(Path(args.index) / "index.json")
    entries = []
    for line_no, line in enumerate(
        Path(args.topics).read_text(encoding="utf-8").splitlines(), start=1
    ):
        if not line.strip():
            continue
        topic_id, sep, query = line.partition("\t")
        if not sep:
            raise formats.ParseError(args.topics, line_no, "expected topic_id<TAB>query")
        for rank, (doc_id, score) in enumerate(
            retrieval.bm25_rank(index, query, args.k), start=1
        ):
            entries.append(formats.RunEntry(topic_id, "Q0", doc_id, rank, score, args.tag))
    formats.write_run_file(entries, args.out)
    print(f"wrote {len(entries)} entries to {args.out}")
    return 0


def _cmd_calibrate(args) -> int:
    run = formats.parse_run_file(args.run)
    judgments = formats.qrels_by_topic(formats.parse_qrels(args.qrels))
    pairs = [
        (e.score, 1 if judgments.get(e.topic_id, {}).get(e.doc_id, 0) > 0 else 0)
        for e in run
        if e.rank <= args.pool_depth
    ]
    model = fit_relevance_model(pairs)
    formats.write_calibration(model, args.out)
    print(
        f"fitted on {len(pairs)} pairs: slope={model.slope:.4f} "
        f"intercept={model.intercept:.4f} r_squared={model.r_squared:.4f}"
    )
    return 0


def _cmd_estimate(args) -> int:
    records = formats.parse_annotation_log(args.log)
    profiles = build_profiles(records)
    formats.write_profiles(profiles, args.out)
    print(f"estimated {len(profiles)} profiles from {len(records)} records")
    return 0


def _cmd_epu(args) -> int:
    run = formats.parse_run_file(args.run)
    model = formats.read_calibration(args.model)
    profiles = _load_profiles(args.profiles)
    cards = [CardType.parse(name.strip()) for name in args.cards.split(",") if name.strip()]
    if not cards:
        raise UsageError("--cards must name at least one card type")
    missing = [c.value for c in cards if c not in profiles]
    if missing:
        raise ValueError(f"profile file has no section for card type {missing[0]}")
    by_topic: dict[str, list[formats.RunEntry]] = {}
    for e in run:
        by_topic.setdefault(e.topic_id, []).append(e)
    print("topic_id\tdoc_id\trank\tcard\tp_rel\tepu")
    for topic_id, entries in by_topic.items():
        entries = sorted(entries, key=lambda e: (-e.score, e.doc_id))[: args.k]
        for i, e in enumerate(entries):
            card = cards[i % len(cards)]
            p_rel = predict_p_rel(model, e.score)
            utility = epu_card(profiles[card], p_rel)
            print(f"{topic_id}\t{e.doc_id}\t{i + 1}\t{card.value}\t{p_rel:.4f}\t{utility:.4f}")
    return 0


def _cmd_simulate(args) -> int:
    run = formats.parse_run_file(args.run)
    judgments = formats.qrels_by_topic(formats.parse_qrels(args.qrels))
    model = formats.read_calibration(args.model)
    profiles = _load_profiles(args.profiles)

    if args.combos.strip() == "all":
        combos = list(COMBOS.values())
    else:
        names = [n.strip() for n in args.combos.split(",") if n.strip()]
        unknown = [n for n in names if n not in COMBOS]
        if unknown:
            raise UsageError(f"unknown combo: {unknown[0]} (choose from: {', '.join(COMBOS)})")
        combos = [COMBOS[n] for n in names]

    topic_ids = list(dict.fromkeys(e.topic_id for e in run))
    topics = [
        baseline_ranking(topic_id, run, model, k=args.k, rel_labels=judgments.get(topic_id, {}))
        for topic_id in topic_ids
    ]
    config = MetricConfig(rbo_persistence=args.rbo_p, tbg_halflife=args.tbg_h)
    report = run_experiment(
        topics,
        combos,
        trials_per_combo=args.trials,
        seed=args.seed,
        profiles=profiles,
        row_budget=args.rows,
        config=config,
        rbo_on_page=args.rbo_on_page,
    )
    formats.write_report_csv(report, args.out)
    print(f"wrote {len(report.rows)} combo rows to {args.out}")
    if report.anova_f is not None and report.anova_df is not None:
        df_b, df_w = report.anova_df
        print(f"one-way ANOVA over RBO groups: F({df_b},{df_w}) = {report.anova_f:.2f}")
    return 0


def _cmd_report(args) -> int:
    report = formats.read_report_csv(args.input)
    if args.format == "markdown":
        sys.stdout.write(formats.report_markdown(report))
    else:
        sys.stdout.write(formats.report_csv(report))
    return 0


_COMMANDS = {
    "index": _cmd_index,
    "rank": _cmd_rank,
    "calibrate": _cmd_calibrate,
    "estimate": _cmd_estimate,
    "epu": _cmd_epu,
    "simulate": _cmd_simulate,
    "report": _cmd_report,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
