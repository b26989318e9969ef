"""Robustness metrics over externally produced correctness labels.

Labels are ingested, never produced: running models or benchmark tests is
out of scope here.  A label ties (sample, assignment) to a test-level pass
fraction and/or a 0/1 correctness indicator, where assignment "baseline"
means the untouched input and a rule id means the input after that rewrite.

All fractions are computed with exact rational arithmetic; an empty
denominator yields None ("undefined"), never a silent zero, so aggregates
can't be biased by missing strata.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from statistics import NormalDist
from typing import Iterable, Mapping, Sequence

from .errors import (
    EmptySubsetError,
    MissingLabelError,
    PartitionGapError,
    RangeError,
)
from .lexer import Language, TokenKind, lex
from .rewrite import RewriteRule, RuleKind, _side_matches

BASELINE = "baseline"

FRAGMENT_CATEGORIES = ("unchanged", "merged", "split", "mixed")


def correctness(pass_fraction) -> int:
    """Task-level 0/1 indicator: 1 iff every test passed (r == 1 exactly)."""
    r = Fraction(pass_fraction)
    if r < 0 or r > 1:
        raise RangeError(f"pass fraction {pass_fraction} outside [0, 1]")
    return int(r == 1)


@dataclass(frozen=True)
class SampleLabel:
    sample_id: str
    assignment: str  # BASELINE or a rule id
    correct: int
    pass_fraction: Fraction | None = None

    def __post_init__(self):
        if self.correct not in (0, 1):
            raise RangeError(f"correctness must be 0 or 1, got {self.correct}")
        if self.pass_fraction is not None and correctness(self.pass_fraction) != self.correct:
            raise RangeError(
                f"label {self.sample_id}@{self.assignment}: correct={self.correct} "
                f"inconsistent with pass fraction {self.pass_fraction}"
            )


class LabelSet:
    """Lookup of SampleLabel by (sample id, assignment)."""

    def __init__(self, labels: Iterable[SampleLabel] = ()):
        self._by_key: dict[tuple[str, str], SampleLabel] = {}
        for label in labels:
            self.add(label)

    def add(self, label: SampleLabel) -> None:
        key = (label.sample_id, label.assignment)
        if key in self._by_key and self._by_key[key] != label:
            raise RangeError(f"conflicting labels for {key}")
        self._by_key[key] = label

    def __len__(self) -> int:
        return len(self._by_key)

    def sample_ids(self, assignment: str) -> set[str]:
        return {s for s, a in self._by_key if a == assignment}

    def indicator(self, sample_id: str, assignment: str) -> int | None:
        label = self._by_key.get((sample_id, assignment))
        return None if label is None else label.correct

    def indicators(self, sample_ids: Iterable[str], assignment: str) -> dict[str, int]:
        out = {}
        missing = []
        for sid in sample_ids:
            y = self.indicator(sid, assignment)
            if y is None:
                missing.append((sid, assignment))
            else:
                out[sid] = y
        if missing:
            raise MissingLabelError(sorted(missing))
        return out


def accuracy(labels: LabelSet, assignment: str, subset: Iterable[str]) -> Fraction:
    """Mean correctness indicator over the subset, exact."""
    subset = sorted(set(subset))
    if not subset:
        raise EmptySubsetError("accuracy over an empty subset is undefined")
    ys = labels.indicators(subset, assignment)
    return Fraction(sum(ys.values()), len(subset))


def delta_accuracy(labels: LabelSet, assignment: str, subset: Iterable[str]) -> Fraction:
    subset = list(subset)
    return accuracy(labels, assignment, subset) - accuracy(labels, BASELINE, subset)


def sensitivity(labels: LabelSet, assignment: str, affected: Iterable[str]) -> Fraction | None:
    """Flip rate between baseline and variant over the affected set.

    None when the affected set is empty (undefined, not zero).
    """
    affected = sorted(set(affected))
    if not affected:
        return None
    base = labels.indicators(affected, BASELINE)
    variant = labels.indicators(affected, assignment)
    flips = sum(abs(variant[s] - base[s]) for s in affected)
    return Fraction(flips, len(affected))


def stratified_sensitivity(
    labels: LabelSet,
    assignment: str,
    affected: Iterable[str],
    partition: Mapping[str, str],
) -> dict[str, Fraction | None]:
    """Sensitivity restricted to each fragment-change category.

    "changed" is the union of merged/split/mixed.  Empty categories are None.
    """
    affected = sorted(set(affected))
    uncovered = [s for s in affected if s not in partition]
    if uncovered:
        raise PartitionGapError(uncovered)
    bad = sorted({partition[s] for s in affected} - set(FRAGMENT_CATEGORIES))
    if bad:
        raise PartitionGapError([f"unknown category {c!r}" for c in bad])
    out: dict[str, Fraction | None] = {}
    for category in FRAGMENT_CATEGORIES:
        members = [s for s in affected if partition[s] == category]
        out[category] = sensitivity(labels, assignment, members)
    changed = [s for s in affected if partition[s] != "unchanged"]
    out["changed"] = sensitivity(labels, assignment, changed)
    return out


# ---------------------------------------------------------------------------
# Flip bookkeeping (report plumbing)
# ---------------------------------------------------------------------------


def flip_counts(labels: LabelSet, assignment: str, affected: Iterable[str]) -> tuple[int, int]:
    """(flips to wrong, flips to right) over the affected set."""
    affected = sorted(set(affected))
    base = labels.indicators(affected, BASELINE)
    variant = labels.indicators(affected, assignment)
    to_wrong = sum(1 for s in affected if base[s] == 1 and variant[s] == 0)
    to_right = sum(1 for s in affected if base[s] == 0 and variant[s] == 1)
    return to_wrong, to_right


# ---------------------------------------------------------------------------
# Corpus word-frequency ratios
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FrequencyReport:
    rule_id: str
    lhs_count: int
    rhs_count: int

    @property
    def ratio_percent(self) -> Fraction | None:
        if self.lhs_count == 0:
            return None
        return Fraction(100) * Fraction(self.rhs_count, self.lhs_count)


def frequency_ratio(
    texts: Iterable[tuple[Language | str, str]], rule: RewriteRule
) -> FrequencyReport:
    """Count a rule's tight (LHS) vs spaced (RHS) surface forms in a corpus.

    Spacing rules count token bigrams: adjacent pairs matching the rule's
    sides are LHS occurrences; pairs separated by exactly one space are RHS.
    Naming rules count identifier tokens matching the source style (LHS)
    vs the target style (RHS).  Counting is token-level, so occurrences
    inside string literals and comments are not counted.
    """
    from .casing import match_case_style

    lhs = rhs = 0
    for language, text in texts:
        language = Language(language)
        if not rule.applies_to(language):
            continue
        index = lex(text, language)
        if rule.kind is RuleKind.NAMING:
            for tok in index.tokens:
                if tok.kind is not TokenKind.IDENTIFIER:
                    continue
                if match_case_style(tok.lexeme, rule.source_style):
                    lhs += 1
                elif match_case_style(tok.lexeme, rule.target_style):
                    rhs += 1
            continue
        toks = index.tokens
        for k in range(len(toks) - 1):
            first, second = toks[k], toks[k + 1]
            if not (
                _side_matches(first, rule.first, rule, language)
                and _side_matches(second, rule.second, rule, language)
            ):
                continue
            gap = text[first.end : second.start]
            if gap == "":
                lhs += 1
            elif gap == " ":
                rhs += 1
    return FrequencyReport(rule.id, lhs, rhs)


# ---------------------------------------------------------------------------
# Wilcoxon signed-rank test
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WilcoxonResult:
    statistic: float  # W+: sum of ranks of positive differences
    p_value: float
    n: int  # pairs remaining after zero-difference removal
    method: str  # "exact", "normal", or "degenerate"


_EXACT_LIMIT = 25


def _midranks(values: Sequence[Fraction]) -> list[Fraction]:
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks: list[Fraction] = [Fraction(0)] * len(values)
    i = 0
    while i < len(values):
        j = i
        while j + 1 < len(values) and values[order[j + 1]] == values[order[i]]:
            j += 1
        mean_rank = Fraction(i + j + 2, 2)  # ranks are 1-based
        for k in range(i, j + 1):
            ranks[order[k]] = mean_rank
        i = j + 1
    return ranks


def wilcoxon_signed_rank(pairs: Sequence[tuple[float, float]]) -> WilcoxonResult:
    """Two-sided paired test; exact null distribution for n <= 25.

    Zero differences are dropped.  Ties among |differences| get midranks; the
    exact path enumerates the full sign-assignment distribution over doubled
    ranks, and the large-sample path uses the normal approximation with the
    usual tie correction of the variance.  All differences zero is reported
    as p = 1 (no evidence), not an error.
    """
    if not pairs:
        raise RangeError("wilcoxon_signed_rank needs at least one pair")
    diffs = [Fraction(a) - Fraction(b) for a, b in pairs]
    nonzero = [d for d in diffs if d != 0]
    if not nonzero:
        return WilcoxonResult(statistic=0.0, p_value=1.0, n=0, method="degenerate")
    n = len(nonzero)
    ranks = _midranks([abs(d) for d in nonzero])
    w_plus = sum((r for d, r in zip(nonzero, ranks) if d > 0), Fraction(0))

    if n <= _EXACT_LIMIT:
        p = _exact_two_sided(ranks, w_plus)
        return WilcoxonResult(float(w_plus), p, n, "exact")

    mu = Fraction(n * (n + 1), 4)
    var = Fraction(n * (n + 1) * (2 * n + 1), 24)
    tie_sizes = _tie_sizes([abs(d) for d in nonzero])
    var -= sum(Fraction(t**3 - t, 48) for t in tie_sizes)
    z = (float(w_plus) - float(mu)) / math.sqrt(float(var))
    p = 2.0 * (1.0 - NormalDist().cdf(abs(z)))
    return WilcoxonResult(float(w_plus), min(p, 1.0), n, "normal")


def _tie_sizes(values: Sequence[Fraction]) -> list[int]:
    counts: dict[Fraction, int] = {}
    for v in values:
        counts[v] = counts.get(v, 0) + 1
    return [c for c in counts.values() if c > 1]


def _exact_two_sided(ranks: Sequence[Fraction], w_plus: Fraction) -> float:
    doubled = [int(r * 2) for r in ranks]
    total = sum(doubled)
    ways = [0] * (total + 1)
    ways[0] = 1
    for r in doubled:
        for s in range(total - r, -1, -1):
            if ways[s]:
                ways[s + r] += ways[s]
    w2 = int(w_plus * 2)
    denom = 2 ** len(ranks)
    le = sum(ways[: w2 + 1])
    ge = sum(ways[w2:])
    p = Fraction(2 * min(le, ge), denom)
    return float(min(p, Fraction(1)))
