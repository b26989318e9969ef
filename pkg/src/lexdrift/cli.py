"""Command-line entry points.

Subcommands:
  rewrite   apply rewrite rules to a corpus, write rewritten text + edit logs
  analyze   full drift pipeline: rewrite, encode both sides, classify
  metrics   compute accuracy / delta-accuracy / sensitivity from labels
  vocab     compare two tokenizer vocabularies
  freq      tight-vs-spaced surface-form frequency ratios over a corpus

All record outputs are line-delimited JSON sorted by (sample id, rule id),
so runs are byte-identical regardless of worker count.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import bpe, corpus, metrics as metrics_mod
from .errors import LexDriftError
from .identifiers import load_immutable_types
from .pipeline import run_batch
from .rewrite import RewriteRule, load_rules


def _select_rules(all_rules: list[RewriteRule], spec: str | None) -> list[RewriteRule]:
    if not spec or spec == "all":
        return all_rules
    by_id = {r.id: r for r in all_rules}
    chosen = []
    for rule_id in spec.split(","):
        rule_id = rule_id.strip()
        if rule_id not in by_id:
            raise LexDriftError(f"unknown rule id {rule_id!r}")
        chosen.append(by_id[rule_id])
    return chosen


def load_any_tokenizer(path: str) -> bpe.TokenizerSpec:
    """Native definition file, or a published file (auto-detected)."""
    from .errors import FormatError

    try:
        with open(path, encoding="utf-8") as fh:
            head = json.load(fh)
    except OSError as exc:
        raise FormatError(f"cannot read tokenizer file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise FormatError(f"tokenizer file {path} is not valid JSON: {exc}") from exc
    if isinstance(head, dict) and "model" in head:
        return bpe.import_tokenizer_json(path)
    return bpe.load_tokenizer(path)


def _write_outputs(out_dir: str, name: str, rows: list[dict], errors: list[dict], run_info: dict) -> None:
    os.makedirs(out_dir, exist_ok=True)
    corpus.write_jsonl(os.path.join(out_dir, name), rows)
    if errors:
        corpus.write_jsonl(os.path.join(out_dir, "errors.jsonl"), errors)
    with open(os.path.join(out_dir, "run.json"), "w", encoding="utf-8") as fh:
        json.dump(run_info, fh, indent=1, sort_keys=True)
        fh.write("\n")


def _common_batch_args(p: argparse.ArgumentParser, tokenizer: bool) -> None:
    p.add_argument("--corpus", required=True, help="corpus JSONL file")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--rules", default="all", help="comma-separated rule ids, or 'all'")
    p.add_argument("--rules-file", default=None, help="alternative rule catalog")
    p.add_argument("--immutable-types", default=None, help="immutable-context config")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--seed", type=int, default=0, help="recorded in run.json")
    if tokenizer:
        p.add_argument("--tokenizer", required=True, help="tokenizer definition file")


def _run_batch_command(args, mode: str) -> int:
    for path in filter(None, [args.corpus, args.rules_file, args.immutable_types,
                              getattr(args, "tokenizer", None)]):
        if not os.path.exists(path):
            print(f"error: path does not exist: {path}", file=sys.stderr)
            return 2
    samples = corpus.load_corpus(args.corpus)
    rules = _select_rules(load_rules(args.rules_file), args.rules)
    immutable = load_immutable_types(args.immutable_types) if args.immutable_types else None
    spec = load_any_tokenizer(args.tokenizer) if mode == "analyze" else None
    rows, errors = run_batch(
        samples, rules, workers=args.workers, spec=spec,
        immutable_types=immutable, mode=mode,
    )
    run_info = {
        "command": mode,
        "corpus": args.corpus,
        "rules": [r.id for r in rules],
        "workers": args.workers,
        "seed": args.seed,
        "samples": len(samples),
        "errors": len(errors),
    }
    if mode == "analyze":
        run_info["tokenizer"] = args.tokenizer
    name = "rewrites.jsonl" if mode == "rewrite" else "drift.jsonl"
    _write_outputs(args.out, name, rows, errors, run_info)
    if errors:
        print(f"{len(errors)} sample failures; see errors.jsonl", file=sys.stderr)
        return 1
    return 0


def _fraction_fields(value: Fraction | None) -> tuple[float | None, str | None]:
    if value is None:
        return None, None
    return float(value), f"{value.numerator}/{value.denominator}"


def cmd_metrics(args) -> int:
    drift_rows = corpus.read_jsonl(args.records)
    labels = _load_labels(args.labels)

    affected: dict[str, set[str]] = {}
    partition: dict[str, dict[str, str]] = {}
    for row in drift_rows:
        if row.get("skipped"):
            continue
        rule_id = row["rule"]
        if row["affected"]:
            affected.setdefault(rule_id, set()).add(row["id"])
            partition.setdefault(rule_id, {})[row["id"]] = row["label"]

    subset = sorted(labels.sample_ids(metrics_mod.BASELINE))
    if not subset:
        print("error: no baseline labels", file=sys.stderr)
        return 2
    base_acc = metrics_mod.accuracy(labels, metrics_mod.BASELINE, subset)

    report: dict = {"subset_size": len(subset)}
    value, exact = _fraction_fields(base_acc)
    report["baseline_accuracy"] = value
    report["baseline_accuracy_exact"] = exact

    rule_ids = sorted({row["rule"] for row in drift_rows if not row.get("skipped")})
    per_rule = {}
    sens_values: list[tuple[Fraction, int]] = []
    for rule_id in rule_ids:
        if not labels.sample_ids(rule_id):
            continue
        rule_affected = affected.get(rule_id, set())
        acc = metrics_mod.accuracy(labels, rule_id, subset)
        delta = acc - base_acc
        sens = metrics_mod.sensitivity(labels, rule_id, rule_affected)
        strata = metrics_mod.stratified_sensitivity(
            labels, rule_id, rule_affected, partition.get(rule_id, {})
        )
        if rule_affected:
            to_wrong, to_right = metrics_mod.flip_counts(labels, rule_id, rule_affected)
        else:
            to_wrong = to_right = 0
        entry: dict = {"affected": len(rule_affected),
                       "flips_to_wrong": to_wrong, "flips_to_right": to_right}
        for key, frac in (("accuracy", acc), ("delta_accuracy", delta), ("sensitivity", sens)):
            entry[key], entry[f"{key}_exact"] = _fraction_fields(frac)
        entry["stratified_sensitivity"] = {
            cat: _fraction_fields(frac)[0] for cat, frac in strata.items()
        }
        per_rule[rule_id] = entry
        if sens is not None:
            sens_values.append((sens, len(rule_affected)))
    report["rules"] = per_rule

    if sens_values:
        unweighted = sum((s for s, _ in sens_values), Fraction(0)) / len(sens_values)
        weighted = Fraction(
            sum(s * n for s, n in sens_values), sum(n for _, n in sens_values)
        )
        report["mean_sensitivity_unweighted"] = float(unweighted)
        report["mean_sensitivity_weighted"] = float(weighted)
    else:
        report["mean_sensitivity_unweighted"] = None
        report["mean_sensitivity_weighted"] = None

    if args.compare:
        other = _load_labels(args.compare)
        pairs = []
        for rule_id in rule_ids:
            a = metrics_mod.sensitivity(labels, rule_id, affected.get(rule_id, set())) \
                if labels.sample_ids(rule_id) else None
            b = metrics_mod.sensitivity(other, rule_id, affected.get(rule_id, set())) \
                if other.sample_ids(rule_id) else None
            if a is not None and b is not None:
                pairs.append((float(a), float(b)))
        if pairs:
            result = metrics_mod.wilcoxon_signed_rank(pairs)
            report["wilcoxon"] = {
                "against": os.path.basename(args.compare),
                "pairs": len(pairs),
                "statistic": result.statistic,
                "p_value": result.p_value,
                "n": result.n,
                "method": result.method,
            }
        else:
            report["wilcoxon"] = None

    os.makedirs(args.out, exist_ok=True)
    out_path = os.path.join(args.out, "metrics.json")
    with open(out_path, "w", encoding="utf-8") as fh:
        json.dump(report, fh, indent=1, sort_keys=True)
        fh.write("\n")
    print(out_path)
    return 0


def _load_labels(path: str) -> metrics_mod.LabelSet:
    labels = metrics_mod.LabelSet()
    for raw in corpus.read_jsonl(path):
        pass_fraction = raw.get("pass_fraction")
        if pass_fraction is not None:
            pass_fraction = Fraction(pass_fraction).limit_denominator(10**9)
        correct = raw.get("correct")
        if correct is None:
            if pass_fraction is None:
                raise LexDriftError(
                    f"label for {raw.get('id')} needs 'correct' or 'pass_fraction'"
                )
            correct = metrics_mod.correctness(pass_fraction)
        labels.add(
            metrics_mod.SampleLabel(
                sample_id=str(raw["id"]),
                assignment=str(raw.get("rule", metrics_mod.BASELINE)),
                correct=int(correct),
                pass_fraction=pass_fraction,
            )
        )
    return labels


def cmd_vocab(args) -> int:
    spec_a = load_any_tokenizer(args.tokenizer_a)
    spec_b = load_any_tokenizer(args.tokenizer_b)
    distance = bpe.vocab_distance(spec_a, spec_b)
    shared = bpe.shared_vocab_fraction(spec_a, spec_b)
    print(f"vocab sizes: {len(spec_a.vocab)} vs {len(spec_b.vocab)}")
    print(f"jaccard distance: {distance:.6f}")
    print(f"shared fraction:  {shared:.6f}")
    return 0


def cmd_freq(args) -> int:
    samples = corpus.load_corpus(args.corpus)
    rules = _select_rules(load_rules(args.rules_file), args.rules)
    texts = [(s.language, s.source) for s in samples]
    rows = []
    for rule in rules:
        report = metrics_mod.frequency_ratio(texts, rule)
        ratio = report.ratio_percent
        rows.append(
            {
                "rule": rule.id,
                "lhs_count": report.lhs_count,
                "rhs_count": report.rhs_count,
                "ratio_percent": None if ratio is None else float(ratio),
            }
        )
        shown = "undefined" if ratio is None else f"{float(ratio):.2f}%"
        print(f"{rule.id:>4}  lhs={report.lhs_count:<6} rhs={report.rhs_count:<6} ratio={shown}")
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        corpus.write_jsonl(os.path.join(args.out, "freq.jsonl"), rows)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lexdrift",
        description="Semantics-preserving code rewrites and subword tokenization drift",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_rewrite = sub.add_parser("rewrite", help="apply rewrite rules to a corpus")
    _common_batch_args(p_rewrite, tokenizer=False)
    p_rewrite.set_defaults(func=lambda a: _run_batch_command(a, "rewrite"))

    p_analyze = sub.add_parser("analyze", help="rewrite + encode + classify drift")
    _common_batch_args(p_analyze, tokenizer=True)
    p_analyze.set_defaults(func=lambda a: _run_batch_command(a, "analyze"))

    p_metrics = sub.add_parser("metrics", help="compute metrics from labels")
    p_metrics.add_argument("--records", required=True, help="drift.jsonl from analyze")
    p_metrics.add_argument("--labels", required=True, help="labels JSONL")
    p_metrics.add_argument("--compare", default=None,
                           help="second labels JSONL for a Wilcoxon comparison")
    p_metrics.add_argument("--out", required=True)
    p_metrics.set_defaults(func=cmd_metrics)

    p_vocab = sub.add_parser("vocab", help="compare two tokenizer vocabularies")
    p_vocab.add_argument("tokenizer_a")
    p_vocab.add_argument("tokenizer_b")
    p_vocab.set_defaults(func=cmd_vocab)

    p_freq = sub.add_parser("freq", help="surface-form frequency ratios")
    p_freq.add_argument("--corpus", required=True)
    p_freq.add_argument("--rules", default="all")
    p_freq.add_argument("--rules-file", default=None)
    p_freq.add_argument("--out", default=None)
    p_freq.set_defaults(func=cmd_freq)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except LexDriftError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
