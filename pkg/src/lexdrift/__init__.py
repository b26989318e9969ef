"""lexdrift: semantics-preserving code rewrites and subword tokenization drift.

The pipeline in one breath: lex Java/Python source into grammar tokens,
apply a naming or spacing rewrite rule, encode original and rewritten text
with a BPE tokenizer, classify how the subword boundaries moved, and compute
robustness metrics from externally supplied correctness labels.
"""

from .bpe import (
    Encoding,
    PretokenizerConfig,
    TokenizerSpec,
    build_spec,
    decode,
    encode,
    import_tokenizer_json,
    import_vocab_merges,
    load_tokenizer,
    save_tokenizer,
    vocab_distance,
)
from .casing import CaseStyle, convert_case, match_case_style, segment
from .corpus import SampleRecord, load_corpus, load_desk_corpus
from .drift import (
    BoundaryState,
    DriftRecord,
    FragmentChange,
    FragmentLabel,
    analyze_sample,
    classify_fragment_change,
)
from .errors import (
    ConfigError,
    ContractError,
    EncodingError,
    FormatError,
    LexDriftError,
    LexError,
    StyleError,
    ValidationError,
)
from .identifiers import IdentifierContext, classify_identifiers
from .lexer import CodeToken, Language, TokenIndex, TokenKind, lex
from .metrics import (
    BASELINE,
    LabelSet,
    SampleLabel,
    WilcoxonResult,
    accuracy,
    correctness,
    delta_accuracy,
    frequency_ratio,
    sensitivity,
    stratified_sensitivity,
    wilcoxon_signed_rank,
)
from .rewrite import (
    EditEvent,
    EditType,
    RewriteResult,
    RewriteRule,
    RuleKind,
    apply_naming_rewrite,
    apply_spacing_rewrite,
    load_rules,
    propagate_renames,
)

__version__ = "0.1.0"
