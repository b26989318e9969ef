"""Per-sample batch processing shared by the CLI subcommands.

Each sample is processed independently: lex once, derive the identifier
context once, encode the original once, then apply every requested rule.
One sample's failure never aborts a batch; it becomes an error row and the
batch carries on.  Workers only ever receive immutable inputs, and callers
sort the merged rows, so output is byte-identical at any worker count.
"""

from __future__ import annotations

from typing import Iterable

from .bpe import TokenizerSpec, encode
from .corpus import SampleRecord
from .drift import analyze_sample
from .errors import LexDriftError
from .identifiers import IdentifierContext, classify_identifiers
from .lexer import Language, lex
from .rewrite import (
    RewriteRule,
    RuleKind,
    apply_rewrite,
    propagate_renames,
)

SKIP_LANGUAGE_MISMATCH = "language-mismatch"

# Worker-process state, set once by _init_worker.
_WORKER: dict = {}


def _init_worker(rules, spec, immutable_types) -> None:
    _WORKER["rules"] = rules
    _WORKER["spec"] = spec
    _WORKER["immutable_types"] = immutable_types


def _events_json(events) -> list[list]:
    return [[ev.pos, ev.delta, ev.edit_type.value] for ev in events]


def rewrite_sample(
    sample: SampleRecord,
    rules: Iterable[RewriteRule],
    immutable_types=None,
) -> tuple[list[dict], list[dict]]:
    """Rows for one sample under every rule: (result rows, error rows)."""
    rows: list[dict] = []
    errors: list[dict] = []
    index = None
    context: IdentifierContext | None = None
    for rule in rules:
        if not rule.applies_to(sample.language):
            rows.append({"id": sample.id, "rule": rule.id, "skipped": SKIP_LANGUAGE_MISMATCH})
            continue
        try:
            if index is None:
                index = lex(sample.source, sample.language)
            if rule.kind is RuleKind.NAMING and context is None:
                context = classify_identifiers(index, immutable_types)
            result = apply_rewrite(sample.source, index, rule, context)
            row = {
                "id": sample.id,
                "rule": rule.id,
                "language": sample.language.value,
                "affected": result.changed,
                "rewritten": result.rewritten,
                "events": _events_json(result.events),
                "renames": dict(sorted(result.renames.items())),
            }
            if sample.patches:
                row["patches"] = propagate_renames(
                    list(sample.patches), result.renames, sample.language
                )
            rows.append(row)
        except LexDriftError as exc:
            errors.append(
                {"id": sample.id, "rule": rule.id, "error": str(exc),
                 "type": type(exc).__name__}
            )
    return rows, errors


def analyze_one(
    sample: SampleRecord,
    rules: Iterable[RewriteRule],
    spec: TokenizerSpec,
    immutable_types=None,
) -> tuple[list[dict], list[dict]]:
    """Drift rows for one sample under every rule: (result rows, error rows)."""
    rows: list[dict] = []
    errors: list[dict] = []
    index = None
    context = None
    original_encoding = None
    for rule in rules:
        if not rule.applies_to(sample.language):
            rows.append({"id": sample.id, "rule": rule.id, "skipped": SKIP_LANGUAGE_MISMATCH})
            continue
        try:
            if index is None:
                index = lex(sample.source, sample.language)
            if rule.kind is RuleKind.NAMING and context is None:
                context = classify_identifiers(index, immutable_types)
            if original_encoding is None:
                original_encoding = encode(spec, sample.source)
            record = analyze_sample(
                sample.source,
                sample.language,
                rule,
                spec,
                context=context,
                sample_id=sample.id,
                index=index,
                original_encoding=original_encoding,
            )
            rows.append(
                {
                    "id": sample.id,
                    "rule": rule.id,
                    "language": sample.language.value,
                    "affected": record.affected,
                    "label": record.change.label.value,
                    "lost": sorted(record.change.lost),
                    "gained": sorted(record.change.gained),
                    "tokens_before": len(record.original_encoding),
                    "tokens_after": len(record.rewritten_encoding),
                }
            )
        except LexDriftError as exc:
            errors.append(
                {"id": sample.id, "rule": rule.id, "error": str(exc),
                 "type": type(exc).__name__}
            )
    return rows, errors


def _worker_rewrite(sample: SampleRecord):
    return rewrite_sample(sample, _WORKER["rules"], _WORKER["immutable_types"])


def _worker_analyze(sample: SampleRecord):
    return analyze_one(sample, _WORKER["rules"], _WORKER["spec"], _WORKER["immutable_types"])


def run_batch(
    samples: list[SampleRecord],
    rules: list[RewriteRule],
    workers: int,
    spec: TokenizerSpec | None = None,
    immutable_types=None,
    mode: str = "analyze",
) -> tuple[list[dict], list[dict]]:
    """Fan samples out over a worker pool; rows come back deterministically
    sorted by (sample id, rule id)."""
    if mode == "rewrite":
        inline = lambda s: rewrite_sample(s, rules, immutable_types)
        worker = _worker_rewrite
    else:
        inline = lambda s: analyze_one(s, rules, spec, immutable_types)
        worker = _worker_analyze

    rows: list[dict] = []
    errors: list[dict] = []
    if workers <= 1:
        results = map(inline, samples)
    else:
        from concurrent.futures import ProcessPoolExecutor

        pool = ProcessPoolExecutor(
            max_workers=workers,
            initializer=_init_worker,
            initargs=(rules, spec, immutable_types),
        )
        with pool:
            results = list(pool.map(worker, samples, chunksize=8))
    for sample_rows, sample_errors in results:
        rows.extend(sample_rows)
        errors.extend(sample_errors)
    rows.sort(key=lambda r: (r["id"], r["rule"]))
    errors.sort(key=lambda r: (r["id"], r["rule"]))
    return rows, errors
