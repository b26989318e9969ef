"""Acceptance criteria, one test per criterion.

Run with `pytest tests/test_acceptance.py -v -s` to see one line per
criterion.  Criteria with a runtime bound measure wall-clock time and fail
when over budget.  Criterion 10 needs a published Llama-3-family tokenizer
file (point LEXDRIFT_LLAMA3_TOKENIZER at it) and is skipped with a notice
when unavailable.
"""

import itertools
import os
import random
import string
import time
from fractions import Fraction

import pytest

from conftest import make_spec, random_spec

import lexdrift.bpe as bpe
from lexdrift.casing import CaseStyle, convert_case, match_case_style
from lexdrift.corpus import bundled_tokenizer_path, desk_corpus_path, load_desk_corpus
from lexdrift.drift import FragmentLabel, analyze_sample, classify_fragment_change
from lexdrift.identifiers import classify_identifiers
from lexdrift.lexer import Language, TokenKind, lex
from lexdrift.metrics import (
    BASELINE,
    LabelSet,
    SampleLabel,
    accuracy,
    delta_accuracy,
    frequency_ratio,
    sensitivity,
    wilcoxon_signed_rank,
)
from lexdrift.pipeline import run_batch
from lexdrift.rewrite import (
    EditEvent,
    EditType,
    RuleKind,
    apply_naming_rewrite,
    apply_spacing_rewrite,
    load_rules,
)
from test_drift import run_random_oracle_cases
from test_metrics import wilcoxon_by_enumeration

RULES = load_rules()
CORPUS = load_desk_corpus()


def report(criterion, text):
    print(f"[criterion {criterion:>2}] PASS - {text}")


def _rewrite(sample, rule, index, context):
    if rule.kind is RuleKind.NAMING:
        return apply_naming_rewrite(sample.source, index, context, rule)
    return apply_spacing_rewrite(sample.source, index, rule)


def test_criterion_01_spacing_preserves_lexing():
    started = time.monotonic()
    checked = 0
    for sample in CORPUS:
        index = lex(sample.source, sample.language)
        before = index.kind_lexeme_seq()
        for rule in RULES:
            if rule.kind is not RuleKind.SPACING or not rule.applies_to(sample.language):
                continue
            result = apply_spacing_rewrite(sample.source, index, rule)
            after = lex(result.rewritten, sample.language).kind_lexeme_seq()
            assert after == before, (sample.id, rule.id)
            checked += 1
    elapsed = time.monotonic() - started
    assert elapsed < 30.0, f"spacing preservation took {elapsed:.1f}s (budget 30s)"
    report(1, f"{checked} (sample, S-rule) pairs identical under re-lexing in {elapsed:.1f}s")


def test_criterion_02_naming_preserves_lexing_with_injective_renames():
    checked = 0
    for sample in CORPUS:
        index = lex(sample.source, sample.language)
        context = classify_identifiers(index)
        before = index.kind_lexeme_seq()
        for rule in RULES:
            if rule.kind is not RuleKind.NAMING or not rule.applies_to(sample.language):
                continue
            result = apply_naming_rewrite(sample.source, index, context, rule)
            targets = list(result.renames.values())
            assert len(set(targets)) == len(targets), (sample.id, rule.id)
            after = lex(result.rewritten, sample.language).kind_lexeme_seq()
            assert [k for k, _ in after] == [k for k, _ in before], (sample.id, rule.id)
            for (kind, old), (_, new) in zip(before, after):
                if kind is TokenKind.IDENTIFIER:
                    assert new == result.renames.get(old, old), (sample.id, rule.id, old)
                else:
                    assert new == old, (sample.id, rule.id, old)
            checked += 1
    report(2, f"{checked} (sample, N-rule) pairs preserved with injective rename maps")


def test_criterion_03_camel_snake_round_trip_on_corpus():
    seen = set()
    converted = 0
    for sample in CORPUS:
        for tok in lex(sample.source, sample.language).identifiers():
            name = tok.lexeme
            if name in seen or not match_case_style(name, CaseStyle.CAMEL):
                continue
            seen.add(name)
            if any(a.isupper() and b.isupper() for a, b in zip(name, name[1:])):
                continue
            snake = convert_case(name, CaseStyle.CAMEL, CaseStyle.SNAKE)
            assert convert_case(snake, CaseStyle.SNAKE, CaseStyle.CAMEL) == name
            converted += 1
    assert converted >= 50
    report(3, f"{converted} distinct corpus camel identifiers round-trip exactly")


def test_criterion_04_boundary_classifier_matches_oracle():
    cases = run_random_oracle_cases(seed=20240817, n_cases=1200)
    assert cases >= 1000
    report(4, f"{cases} randomized cases agree with the brute-force boundary oracle")


def test_criterion_05_worked_traces(sortedlst_spec, factorial_spec, foobar_spec):
    old = bpe.encode(sortedlst_spec, " sortedLst")
    new = bpe.encode(sortedlst_spec, " sorted_lst")
    assert old.starts == (0, 7, 8) and new.starts == (0, 7)
    change = classify_fragment_change(
        old, new, [EditEvent(7, 1, EditType.UNDERSCORE)], EditType.UNDERSCORE
    )
    assert change.label is FragmentLabel.MERGED
    assert change.lost == frozenset({9}) and change.gained == frozenset()

    old = bpe.encode(factorial_spec, ".factorial")
    new = bpe.encode(factorial_spec, ". factorial")
    assert old.tokens == (".factor", "ial")
    assert old.starts == (0, 7) and new.starts == (0, 1)
    change = classify_fragment_change(
        old, new, [EditEvent(1, 1, EditType.WHITESPACE)], EditType.WHITESPACE
    )
    assert change.label is FragmentLabel.MERGED
    assert change.lost == frozenset({8}) and change.gained == frozenset()

    old = bpe.encode(foobar_spec, "foo_bar")
    new = bpe.encode(foobar_spec, "fooBar")
    assert old.starts == (0,) and new.starts == (0, 3)
    change = classify_fragment_change(
        old, new, [EditEvent(3, -1, EditType.UNDERSCORE)], EditType.UNDERSCORE
    )
    assert change.label is FragmentLabel.SPLIT
    assert change.lost == frozenset() and change.gained == frozenset({3})

    # end-to-end through the sample pipeline
    rule = {r.id: r for r in RULES}
    rec = analyze_sample(" sortedLst", Language.JAVA, rule["N1"], sortedlst_spec)
    assert rec.change.label is FragmentLabel.MERGED and rec.affected
    rec = analyze_sample("q.factorial(n)", Language.PYTHON, rule["S15"], factorial_spec)
    assert rec.change.label is FragmentLabel.MERGED and rec.affected
    report(5, "sortedLst/factorial/foo_bar traces reproduce exactly")


def _random_text(rng, alphabet, max_len=24):
    return "".join(rng.choice(alphabet) for _ in range(rng.randrange(0, max_len)))


def test_criterion_06_bpe_round_trip_and_offsets():
    rng = random.Random(60606)
    toy = bpe.load_tokenizer(bundled_tokenizer_path())
    synthetic = random_spec(rng, "abcd _.()", n_merges=30)
    byte_vocab = {bpe._BYTE_ENCODER[b]: b for b in range(256)}
    e_acute = "".join(bpe._BYTE_ENCODER[b] for b in "é".encode("utf-8"))
    byte_merges = [("a", "b"), (e_acute[0], e_acute[1])]
    for a, b in byte_merges:
        byte_vocab.setdefault(a + b, len(byte_vocab))
    byte_spec = bpe.build_spec(byte_vocab, byte_merges, byte_level=True)

    plans = [
        (toy, string.printable),
        (synthetic, "abcd _.()"),
        (byte_spec, string.ascii_letters + string.digits + " ._é"),
    ]
    total = 0
    for spec, alphabet in plans:
        for _ in range(10_000):
            text = _random_text(rng, alphabet)
            enc = bpe.encode(spec, text)
            assert bpe.decode(spec, enc.ids) == text
            assert "".join(enc.tokens) == text
            ends = list(enc.starts[1:]) + [len(text)]
            for token, start, end in zip(enc.tokens, enc.starts, ends):
                assert text[start:end] == token
            if enc.starts:
                assert enc.starts[0] == 0
            total += 1
    report(6, f"decode(encode(text)) identity and offset soundness on {total} strings")


def test_criterion_07_metrics_exactness_and_wilcoxon():
    base = [1, 1, 0, 1, 0, 1, 1, 0, 1, 1]
    variant = [1, 0, 0, 1, 1, 1, 1, 0, 1, 1]
    labels = LabelSet()
    for k, (y0, y1) in enumerate(zip(base, variant)):
        labels.add(SampleLabel(f"s{k}", BASELINE, y0))
        labels.add(SampleLabel(f"s{k}", "S1", y1))
    affected = [f"s{k}" for k in range(10)]
    assert sensitivity(labels, "S1", affected) == Fraction(1, 5)

    acc_labels = LabelSet()
    for k, (y0, y1) in enumerate(zip([1, 0, 1, 1], [1, 0, 0, 1])):
        acc_labels.add(SampleLabel(f"a{k}", BASELINE, y0))
        acc_labels.add(SampleLabel(f"a{k}", "N1", y1))
    subset = [f"a{k}" for k in range(4)]
    assert accuracy(acc_labels, BASELINE, subset) == Fraction(3, 4)
    assert accuracy(acc_labels, "N1", subset) == Fraction(1, 2)
    assert delta_accuracy(acc_labels, "N1", subset) == Fraction(-1, 4)

    rng = random.Random(777)
    checked = 0
    for _ in range(100):
        n = rng.randrange(1, 11)
        pairs = [(float(rng.randrange(-4, 5)), float(rng.randrange(-4, 5))) for _ in range(n)]
        result = wilcoxon_signed_rank(pairs)
        _, expected_p = wilcoxon_by_enumeration(pairs)
        assert result.p_value == pytest.approx(expected_p), pairs
        checked += 1
    assert wilcoxon_signed_rank([(k + 1.0, 0.0) for k in range(5)]).p_value == pytest.approx(0.0625)
    report(7, f"sensitivity 1/5, accuracy 3/4, delta -1/4 exact; {checked} Wilcoxon runs match enumeration")


def test_criterion_08_spacing_frequency_ratios_below_100():
    texts = [(s.language, s.source) for s in CORPUS]
    ratios = {}
    for rule in RULES:
        if rule.kind is not RuleKind.SPACING:
            continue
        rep = frequency_ratio(texts, rule)
        assert rep.lhs_count >= 5, rule.id
        assert rep.ratio_percent is not None and rep.ratio_percent < 100, rule.id
        ratios[rule.id] = float(rep.ratio_percent)
    assert len(ratios) == 18
    worst = max(ratios.values())
    report(8, f"all 18 spacing rules have ratio < 100% on the desk corpus (max {worst:.1f}%)")


def test_criterion_09_pipeline_scale_and_worker_determinism(tmp_path):
    from lexdrift.cli import main

    started = time.monotonic()
    spec = bpe.load_tokenizer(bundled_tokenizer_path())
    rows, errors = run_batch(CORPUS, RULES, workers=1, spec=spec, mode="analyze")
    elapsed = time.monotonic() - started
    assert not errors
    assert elapsed < 60.0, f"single-worker pipeline took {elapsed:.1f}s (budget 60s)"

    out1, out8 = tmp_path / "w1", tmp_path / "w8"
    for out, workers in ((out1, "1"), (out8, "8")):
        code = main([
            "analyze", "--corpus", desk_corpus_path(),
            "--tokenizer", bundled_tokenizer_path(),
            "--out", str(out), "--workers", workers,
        ])
        assert code == 0
    assert (out1 / "drift.jsonl").read_bytes() == (out8 / "drift.jsonl").read_bytes()
    report(9, f"24 rules x 400 samples in {elapsed:.1f}s; workers=8 output byte-identical")


def _find_llama3_file():
    candidates = [os.environ.get("LEXDRIFT_LLAMA3_TOKENIZER", "")]
    candidates.append(os.path.join(os.path.dirname(__file__), "data", "llama3_tokenizer.json"))
    for path in candidates:
        if path and os.path.exists(path):
            return path
    return None


def test_criterion_10_published_llama3_tokenizer():
    path = _find_llama3_file()
    if path is None:
        pytest.skip(
            "criterion 10 SKIPPED: no published Llama-3-family tokenizer file; "
            "set LEXDRIFT_LLAMA3_TOKENIZER to a tokenizer.json to enable"
        )
    spec = bpe.import_tokenizer_json(path)
    enc = bpe.encode(spec, " sortedLst")
    assert enc.tokens == (" sorted", "L", "st")
    assert enc.starts == (0, 7, 8)
    report(10, "published Llama-3 tokenizer reproduces [' sorted','L','st']")
