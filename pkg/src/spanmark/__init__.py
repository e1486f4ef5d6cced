"""spanmark: lossless, fault-tolerant codec between BIO tags and span-marked text.

The package also ships the surrounding workflow: label naturalization with
bijective raw/natural maps, K-shot episode sampling with an exhaustive
verifier, leave-one-out and low-resource corpus splits, chunk-level F1 and
intent-accuracy scoring, corpus I/O, and a text corruption simulator.
"""

__version__ = "0.1.0"

# Version of the span-marking grammar itself (markers, escaping, class group).
FORMAT_VERSION = "1"

from .codec import (
    ClassGroupMisplaced,
    CodecConfig,
    DecodeDiagnostics,
    DecodeError,
    DEFAULT_CONFIG,
    EmptySpanGroup,
    TokenMismatch,
    UnbalancedMarkers,
    UnescapableToken,
    decode_strict,
    decode_tolerant,
    encode,
    is_well_formed,
)
from .core import (
    AugmentedText,
    MalformedScheme,
    OutOfBounds,
    OverlapError,
    Span,
    SpanSet,
    SpanmarkError,
    TaggedSentence,
    canonical_tags,
    spans_to_tags,
    tags_to_spans,
)
from .episodes import (
    Corpus,
    Episode,
    InsufficientCorpus,
    KShotCheck,
    UnknownDomain,
    chunk_label_counts,
    leave_one_out,
    sample_episode,
    subsample,
    verify_kshot,
)
from .evaluation import (
    EvalReport,
    LabelScore,
    LengthMismatch,
    aggregate_f1,
    score,
    score_episode,
)
from .ingest import (
    CorpusStats,
    CorruptionSpec,
    ParseError,
    apply_task_prefix,
    corpus_stats,
    corrupt,
    dumps_record,
    iter_conll,
    iter_jsonl,
    read_conll,
    read_jsonl_corpus,
    record_to_sentence,
    sentence_to_record,
    write_conll,
    write_jsonl,
)
from .naturalize import (
    CONLL_LABEL_TABLE,
    CollisionError,
    IDENTITY,
    LabelMap,
    ONTONOTES_LABEL_TABLE,
    UnknownNaturalLabel,
    UnknownRawLabel,
    build_labelmap,
    denaturalize,
    dump_label_table,
    load_label_table,
    naturalize_rule,
)

__all__ = [name for name in dir() if not name.startswith("_")]
