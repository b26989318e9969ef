#!/usr/bin/env python3
"""Generate the bundled desk corpus and toy tokenizer definition.

Deterministic (fixed seed).  Emits:
    src/lexdrift/data/desk_corpus.jsonl   ~200 Java + ~200 Python snippets
    src/lexdrift/data/toy_tokenizer.json  BPE spec trained on that corpus

Every rewrite rule's tight left-hand-side bigram appears at least five times
across the corpus, and for every spacing rule the tight form outnumbers the
spaced form (most templates use tight, contest-style formatting; two use a
spaced style so the spaced counts are nonzero but smaller).
"""

from __future__ import annotations

import json
import random
import sys
from collections import Counter
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from lexdrift.bpe import PretokenizerConfig, build_spec, encode, pretokenize, save_tokenizer
from lexdrift.corpus import SampleRecord, write_jsonl
from lexdrift.lexer import Language, lex
from lexdrift.metrics import frequency_ratio
from lexdrift.rewrite import RuleKind, load_rules

SEED = 7151123
N_PER_LANGUAGE = 200
N_MERGES = 500

FIRST = ["max", "min", "total", "item", "row", "col", "temp", "user", "node",
         "best", "left", "right", "base", "next", "prev", "last"]
SECOND = ["Count", "Value", "Index", "Sum", "Size", "Limit", "Score", "Width",
          "Depth", "Rank", "Step", "Cost"]
THIRD = ["", "", "", "2", "Buf", "Acc"]
CLASSES = ["Runner", "Sample", "Engine", "Widget", "Holder", "Tracker",
           "Mixer", "Bundle", "Cursor", "Ledger"]
VERBS = ["compute", "build", "find", "merge", "scan", "pack", "fold", "rank",
         "trim", "count"]
NOUNS = ["Total", "List", "Best", "Parts", "Items", "Data", "Edges", "Rows"]


class Names:
    """Per-sample pools of distinct identifiers in both casing families."""

    def __init__(self, rng: random.Random):
        self.rng = rng
        self.used: set[str] = set()

    def camel(self) -> str:
        while True:
            name = (self.rng.choice(FIRST) + self.rng.choice(SECOND)
                    + self.rng.choice(THIRD))
            if name not in self.used:
                self.used.add(name)
                return name

    def snake(self) -> str:
        name = self.camel()
        out = []
        for ch in name:
            if ch.isupper():
                out.append("_")
            out.append(ch.lower())
        return "".join(out)

    def camel_fn(self) -> str:
        while True:
            name = self.rng.choice(VERBS) + self.rng.choice(NOUNS)
            if name not in self.used:
                self.used.add(name)
                return name

    def snake_fn(self) -> str:
        name = self.camel_fn()
        out = []
        for ch in name:
            if ch.isupper():
                out.append("_")
            out.append(ch.lower())
        return "".join(out)

    def cls(self) -> str:
        return self.rng.choice(CLASSES)


# ---------------------------------------------------------------------------
# Java templates
# ---------------------------------------------------------------------------


def j_sum_loop(n: Names) -> str:
    fn, arr, acc = n.camel_fn(), n.camel(), n.camel()
    return (
        "import java.util.*;\n\n"
        f"class {n.cls()}{{\n"
        f"    static int {fn}(int[] {arr}){{\n"
        f"        int {acc}=0;\n"
        f"        for(int i=0;i<{arr}.length;i++){{\n"
        f"            {acc}+={arr}[i];\n"
        "        }\n"
        f"        return {acc};\n"
        "    }\n"
        "}\n"
    )


def j_string_chain(n: Names) -> str:
    fn, inp, res, v = n.camel_fn(), n.camel(), n.camel(), n.camel()
    return (
        f"class {n.cls()}{{\n"
        f"    static String {fn}(String {inp}){{\n"
        f"        String {res}={inp}.trim().toLowerCase();\n"
        f"        {res}=({res}+{inp}).trim();\n"
        f"        show({res}.length());\n"
        f"        return {res};\n"
        "    }\n"
        f"    static void show(int {v}){{\n"
        f"        System.out.println({v});\n"
        "    }\n"
        "}\n"
    )


def j_override(n: Names) -> str:
    cnt, fld, a, b = n.camel(), n.camel(), n.camel(), n.camel()
    return (
        f"class {n.cls()} extends Base{{\n"
        f"    int {fld}=7;\n"
        "    @Override\n"
        "    public String toString(){\n"
        f"        int {cnt}=this.{fld}*2;\n"
        f"        {cnt}--;\n"
        f"        return describe({cnt},{fld});\n"
        "    }\n"
        f"    static String describe(int {a},int {b}){{\n"
        f"        return \"\"+({a}+{b});\n"
        "    }\n"
        "}\n"
    )


def j_bits(n: Names) -> str:
    fn, x, y, z = n.camel_fn(), n.camel(), n.camel(), n.camel()
    return (
        f"class {n.cls()}{{\n"
        f"    static int {fn}(int {x},int {y}){{\n"
        f"        int {z}=(({x}&1)==0)?{x}:{y};\n"
        f"        {z}<<=1;\n"
        f"        while({z}>10){{ {z}-=3; }}\n"
        f"        return {z};\n"
        "    }\n"
        "}\n"
    )


def j_tally(n: Names) -> str:
    fn, items, tally, s = n.camel_fn(), n.camel(), n.camel(), n.camel()
    return (
        "import java.util.*;\n\n"
        f"class {n.cls()}{{\n"
        f"    static Map<String,Integer> {fn}(List<String> {items}){{\n"
        f"        Map<String,Integer> {tally}=new HashMap<>();\n"
        f"        for(String {s}:{items}){{\n"
        f"            {tally}.put({s},{tally}.getOrDefault({s},0)+1);\n"
        "        }\n"
        f"        return {tally};\n"
        "    }\n"
        "}\n"
    )


def j_best(n: Names) -> str:
    fn, vals, best = n.camel_fn(), n.camel(), n.camel()
    return (
        f"class {n.cls()}{{\n"
        f"    static double {fn}(double[] {vals}){{\n"
        f"        double {best}={vals}[0];\n"
        f"        for(int i=1;i<{vals}.length;i++){{\n"
        f"            if({vals}[i]>{best}){{ {best}={vals}[i]; }}\n"
        "        }\n"
        f"        return {best};\n"
        "    }\n"
        "}\n"
    )


def j_spaced(n: Names) -> str:
    fn, a, b, mid, v = n.camel_fn(), n.camel(), n.camel(), n.camel(), n.camel()
    return (
        f"class {n.cls()} {{\n"
        f"    static int {fn}(int {a}, int {b}) {{\n"
        f"        int {mid} = ({a} + {b}) / 2;\n"
        f"        if ({mid} % 2 == 0) {{\n"
        f"            {mid} = {mid} + 1;\n"
        "        }\n"
        f"        use({mid});\n"
        f"        return {mid};\n"
        "    }\n"
        f"    static void use(int {v}) {{}}\n"
        "}\n"
    )


def j_builder(n: Names) -> str:
    fn, sb, count = n.camel_fn(), n.camel(), n.camel()
    return (
        f"class {n.cls()}{{\n"
        f"    static String {fn}(int {count}){{\n"
        f"        StringBuilder {sb}=new StringBuilder();\n"
        f"        for(int i=0;i<{count};i++){{\n"
        f"            {sb}.append(i).append(',');\n"
        "        }\n"
        f"        return {sb}.toString().trim();\n"
        "    }\n"
        "}\n"
    )


def j_sign(n: Names) -> str:
    fn, x, sign, mag, v = n.camel_fn(), n.camel(), n.camel(), n.camel(), n.camel()
    return (
        f"class {n.cls()}{{\n"
        f"    static int {fn}(int {x}){{\n"
        f"        int {sign}={x}<0?-1:1;\n"
        f"        int {mag}={x}*{sign};\n"
        f"        use({mag}++);\n"
        f"        return {mag}*{sign};\n"
        "    }\n"
        f"    static void use(int {v}){{}}\n"
        "}\n"
    )


def j_guard(n: Names) -> str:
    fn, txt = n.camel_fn(), n.camel()
    return (
        f"class {n.cls()}{{\n"
        f"    static boolean {fn}(String {txt}){{\n"
        f"        return {txt}!=null&&{txt}.length()>0&&!{txt}.equals(\"x\");\n"
        "    }\n"
        "}\n"
    )


def j_nested(n: Names) -> str:
    fn, m, a, b = n.camel_fn(), n.camel(), n.camel(), n.camel()
    return (
        f"class {n.cls()}{{\n"
        f"    static int {fn}(int {m}){{\n"
        f"        return add(add({m},1),add({m},2));\n"
        "    }\n"
        f"    static int add(int {a},int {b}){{ return {a}+{b}; }}\n"
        "}\n"
    )


def j_cast(n: Names) -> str:
    fn, d, r = n.camel_fn(), n.camel(), n.camel()
    return (
        f"class {n.cls()}{{\n"
        f"    static long {fn}(double {d}){{\n"
        f"        long {r}=(long)({d}*100);\n"
        f"        {r}++;\n"
        f"        return ({r});\n"
        "    }\n"
        "}\n"
    )


def j_collect(n: Names) -> str:
    fn, out, limit = n.camel_fn(), n.camel(), n.camel()
    return (
        "import java.util.*;\nimport java.io.*;\n\n"
        f"class {n.cls()}{{\n"
        f"    static List<Integer> {fn}(int {limit}){{\n"
        f"        List<Integer> {out}=new ArrayList<>();\n"
        f"        for(int i=0;i<{limit};i++){{ {out}.add(i*i); }}\n"
        f"        return {out};\n"
        "    }\n"
        "}\n"
    )


JAVA_TEMPLATES = [
    j_sum_loop, j_string_chain, j_override, j_bits, j_tally, j_best,
    j_spaced, j_builder, j_sign, j_guard, j_nested, j_cast, j_collect,
]


# ---------------------------------------------------------------------------
# Python templates
# ---------------------------------------------------------------------------


def p_sum_loop(n: Names):
    fn, xs, acc = n.snake_fn(), n.snake(), n.snake()
    src = (
        f"def {fn}({xs}):\n"
        f"    {acc}=0\n"
        f"    for i in range(len({xs})):\n"
        f"        {acc}+={xs}[i]\n"
        f"    return {acc}\n"
    )
    return src, [f"assert {fn}([1,2,3])==6", f"assert {fn}([])==0"]


def p_slices(n: Names):
    fn, s, head, tail, mid = n.snake_fn(), n.snake(), n.snake(), n.snake(), n.snake()
    src = (
        f"def {fn}({s}):\n"
        f"    {head}={s}[1:]\n"
        f"    {tail}={s}[:-1]\n"
        f"    {mid}={s}[1:-1]\n"
        f"    return {head}+{tail}+{mid}\n"
    )
    return src, None


def p_grid(n: Names):
    fn, grid, flat, v, row = n.snake_fn(), n.snake(), n.snake(), n.snake(), n.snake()
    src = (
        f"def {fn}():\n"
        f"    {grid}=[[1,2],[3,4]]\n"
        f"    {flat}=[{v} for {row} in {grid} for {v} in {row}]\n"
        f"    return {flat}\n"
    )
    return src, [f"assert {fn}()==[1,2,3,4]"]


def p_counts(n: Names):
    fn, txt, parts, counts, w = n.snake_fn(), n.snake(), n.snake(), n.snake(), n.snake()
    src = (
        f"def {fn}({txt}):\n"
        f"    {parts}={txt}.split(',')\n"
        f"    {counts}={{}}\n"
        f"    for {w} in {parts}:\n"
        f"        {counts}[{w}]={counts}.get({w},0)+1\n"
        f"    return {counts}\n"
    )
    return src, None


def p_sorting(n: Names):
    fn, xs = n.snake_fn(), n.snake()
    src = (
        f"def {fn}({xs}):\n"
        f"    if len({xs}[0])>2:\n"
        f"        return sorted({xs}[0])\n"
        f"    return list(reversed({xs}))\n"
    )
    return src, None


def p_class(n: Names):
    cls, v, attr, meth = n.cls(), n.snake(), n.snake(), n.snake_fn()
    src = (
        f"class {cls}:\n"
        f"    def __init__(self,{v}):\n"
        f"        self.{attr}={v}\n"
        "\n"
        f"    def {meth}(self):\n"
        f"        return self.{attr}*2\n"
    )
    return src, None


def p_math(n: Names):
    fn, a, b, c, d = n.snake_fn(), n.snake(), n.snake(), n.snake(), n.snake()
    src = (
        f"def {fn}({a},{b}):\n"
        f"    {c}={a}*{b}-{a}\n"
        f"    {d}=-{c}\n"
        f"    return {c}%({d}+1)\n"
    )
    return src, None


def p_spaced(n: Names):
    fn, m = n.snake_fn(), n.snake()
    src = (
        f"def {fn}({m}):\n"
        "    total = 0\n"
        f"    for i in range({m}):\n"
        "        total = total + i\n"
        "    return total\n"
    )
    return src, None


def p_imports(n: Names):
    fn, x, r = n.snake_fn(), n.snake(), n.snake()
    src = (
        "import math\n"
        "from os import path\n"
        "\n"
        f"def {fn}({x}):\n"
        f"    {r}=math.sqrt({x})\n"
        f"    return path.join('a',str({r}))\n"
    )
    return src, None


def p_halving(n: Names):
    fn, m, cnt = n.snake_fn(), n.snake(), n.snake()
    src = (
        f"def {fn}({m}):\n"
        f"    {cnt}=0\n"
        f"    while {m}>1:\n"
        f"        {m}//=2\n"
        f"        {cnt}+=1\n"
        f"    return {cnt}\n"
    )
    return src, [f"assert {fn}(8)==3"]


def p_parens(n: Names):
    fn, a, b = n.snake_fn(), n.snake(), n.snake()
    src = (
        f"def {fn}({a},{b}):\n"
        f"    return (({a}+{b})*({a}-{b}))\n"
    )
    return src, [f"assert {fn}(3,1)==8"]


def p_mapper(n: Names):
    helper, fn, xs, x = n.snake_fn(), n.snake_fn(), n.snake(), n.snake()
    src = (
        f"def {helper}({x}):\n"
        f"    return {x}*{x}\n"
        "\n"
        f"def {fn}({xs}):\n"
        f"    return [{helper}({x}) for {x} in {xs}]\n"
    )
    return src, [f"assert {fn}([2])==[{helper}(2)]"]


def p_bounds(n: Names):
    fn, s, k = n.snake_fn(), n.snake(), n.snake()
    src = (
        f"def {fn}({s},{k}):\n"
        f"    if {k}<len({s}):\n"
        f"        return {s}[{k}:]\n"
        f"    return {s}[:{k}]\n"
    )
    return src, None


PYTHON_TEMPLATES = [
    p_sum_loop, p_slices, p_grid, p_counts, p_sorting, p_class, p_math,
    p_spaced, p_imports, p_halving, p_parens, p_mapper, p_bounds,
]


def generate() -> list[SampleRecord]:
    rng = random.Random(SEED)
    samples: list[SampleRecord] = []
    for i in range(N_PER_LANGUAGE):
        template = JAVA_TEMPLATES[i % len(JAVA_TEMPLATES)]
        source = template(Names(rng))
        samples.append(SampleRecord(f"java-{i:04d}", Language.JAVA, source))
    for i in range(N_PER_LANGUAGE):
        template = PYTHON_TEMPLATES[i % len(PYTHON_TEMPLATES)]
        source, patches = template(Names(rng))
        samples.append(
            SampleRecord(f"py-{i:04d}", Language.PYTHON, source,
                         tuple(patches) if patches else ())
        )
    return samples


def train_toy_tokenizer(samples: list[SampleRecord]):
    """Greedy pair-frequency merges over the corpus, most-frequent first."""
    cfg = PretokenizerConfig(
        split_whitespace=True, attach_space_prefix=True, digit_mode="off",
        split_punctuation=False, newline_blocks=True, extra_word_chars="_",
    )
    chunks = []
    for sample in samples:
        chunks.extend(list(c) for _, c in pretokenize(sample.source, cfg))
    merges: list[tuple[str, str]] = []
    for _ in range(N_MERGES):
        counts: Counter = Counter()
        for syms in chunks:
            counts.update(zip(syms, syms[1:]))
        if not counts:
            break
        count, pair = max((c, p) for p, c in counts.items())
        if count < 4:
            break
        merges.append(pair)
        product = pair[0] + pair[1]
        new_chunks = []
        for syms in chunks:
            out = []
            k = 0
            while k < len(syms):
                if k + 1 < len(syms) and syms[k] == pair[0] and syms[k + 1] == pair[1]:
                    out.append(product)
                    k += 2
                else:
                    out.append(syms[k])
                    k += 1
            new_chunks.append(out)
        chunks = new_chunks

    import string

    vocab: dict[str, int] = {}
    for ch in string.printable:
        vocab[ch] = len(vocab)
    for a, b in merges:
        product = a + b
        if product not in vocab:
            vocab[product] = len(vocab)
    return build_spec(vocab, merges, cfg)


def main() -> None:
    samples = generate()
    rules = load_rules()

    for sample in samples:
        lex(sample.source, sample.language)
        for patch in sample.patches:
            lex(patch, sample.language)

    texts = [(s.language, s.source) for s in samples]
    problems = []
    for rule in rules:
        report = frequency_ratio(texts, rule)
        if rule.kind is RuleKind.SPACING:
            if report.lhs_count < 5:
                problems.append(f"{rule.id}: lhs {report.lhs_count} < 5")
            if report.rhs_count >= report.lhs_count:
                problems.append(f"{rule.id}: rhs {report.rhs_count} >= lhs {report.lhs_count}")
        else:
            if report.lhs_count < 5:
                problems.append(f"{rule.id}: style occurrences {report.lhs_count} < 5")
        print(f"{rule.id:>4}: lhs={report.lhs_count:<5} rhs={report.rhs_count}")
    if problems:
        raise SystemExit("corpus does not meet coverage targets:\n" + "\n".join(problems))

    spec = train_toy_tokenizer(samples)
    for sample in samples:
        encode(spec, sample.source)

    data_dir = ROOT / "src" / "lexdrift" / "data"
    write_jsonl(str(data_dir / "desk_corpus.jsonl"), [s.to_json() for s in samples])
    save_tokenizer(spec, str(data_dir / "toy_tokenizer.json"))
    print(f"wrote {len(samples)} samples and {len(spec.merges)} merges")


if __name__ == "__main__":
    main()
