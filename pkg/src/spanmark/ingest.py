"""Corpus I/O (CoNLL columns, JSONL records), task prefixes, stats, corruption."""

import json
import random
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass
from typing import IO, Any

from .codec import DEFAULT_CONFIG
from .core import MalformedScheme, SpanmarkError, TaggedSentence, tags_to_spans


class ParseError(SpanmarkError):
    def __init__(self, line: int, reason: str):
        self.line = line
        super().__init__(f"line {line}: {reason}")


def iter_conll(lines: Iterable[str], column_sep: str = "space") -> Iterator[TaggedSentence]:
    """Stream sentences out of column-format text.

    Token is the first column, tag the last; a blank line ends a sentence;
    ``-DOCSTART-`` blocks are skipped. ``column_sep`` is "space" (any run of
    whitespace) or "tab".
    """
    if column_sep not in ("space", "tab"):
        raise ValueError(f"unknown column_sep {column_sep!r}")
    tokens: list[str] = []
    tags: list[str] = []
    lineno = 0

    def flush() -> TaggedSentence | None:
        nonlocal tokens, tags
        if not tokens:
            return None
        try:
            sentence = TaggedSentence(tuple(tokens), tuple(tags))
        except (ValueError, MalformedScheme) as err:
            raise ParseError(lineno, str(err)) from err
        tokens, tags = [], []
        return sentence

    for lineno, line in enumerate(lines, start=1):
        line = line.rstrip("\n")
        if not line.strip():
            done = flush()
            if done is not None:
                yield done
            continue
        cols = line.split("\t") if column_sep == "tab" else line.split()
        cols = [c for c in cols if c != ""]
        if cols and cols[0] == "-DOCSTART-":
            continue
        if len(cols) < 2:
            raise ParseError(lineno, f"expected at least 2 columns, got {line!r}")
        tokens.append(cols[0])
        tags.append(cols[-1])
    lineno += 1
    done = flush()
    if done is not None:
        yield done


def read_conll(source: str | IO[str], column_sep: str = "space") -> list[TaggedSentence]:
    if isinstance(source, str):
        with open(source, encoding="utf-8") as handle:
            return list(iter_conll(handle, column_sep))
    return list(iter_conll(source, column_sep))


def write_conll(
    sentences: Iterable[TaggedSentence], stream: IO[str], column_sep: str = "space"
) -> None:
    sep = "\t" if column_sep == "tab" else " "
    for sentence in sentences:
        for token, tag in zip(sentence.tokens, sentence.tags):
            # A spaced tag would split into extra columns on read-back.
            if sep == " " and " " in tag:
                raise ValueError(
                    f"tag {tag!r} contains a space; write with column_sep='tab'"
                )
            stream.write(f"{token}{sep}{tag}\n")
        stream.write("\n")


def sentence_to_record(sentence: TaggedSentence) -> dict[str, Any]:
    """JSONL record for one sentence; optional fields appear only when set."""
    record: dict[str, Any] = {
        "tokens": list(sentence.tokens),
        "tags": list(sentence.tags),
    }
    if sentence.sentence_class is not None:
        record["class"] = sentence.sentence_class
    if sentence.domain is not None:
        record["domain"] = sentence.domain
    if sentence.task is not None:
        record["task"] = sentence.task
    return record


def record_to_sentence(record: dict[str, Any]) -> TaggedSentence:
    if not isinstance(record, dict):
        raise ValueError("record must be an object")
    try:
        tokens = record["tokens"]
        tags = record["tags"]
    except KeyError as err:
        raise ValueError(f"record missing field {err.args[0]!r}") from err
    return TaggedSentence(
        tokens=tuple(tokens),
        tags=tuple(tags),
        sentence_class=record.get("class"),
        domain=record.get("domain"),
        task=record.get("task"),
    )


def dumps_record(obj: dict[str, Any]) -> str:
    """The one JSON serialization used for every JSONL line we emit."""
    return json.dumps(obj, ensure_ascii=False)


def iter_jsonl(lines: Iterable[str]) -> Iterator[tuple[int, dict[str, Any]]]:
    """Yield (line number, parsed object) pairs, skipping blank lines."""
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as err:
            raise ParseError(lineno, f"bad JSON: {err.msg}") from err
        yield lineno, obj


def read_jsonl_corpus(source: str | IO[str]) -> list[TaggedSentence]:
    if isinstance(source, str):
        with open(source, encoding="utf-8") as handle:
            return read_jsonl_corpus(handle)
    sentences = []
    for lineno, obj in iter_jsonl(source):
        try:
            sentences.append(record_to_sentence(obj))
        except (ValueError, TypeError, MalformedScheme) as err:
            raise ParseError(lineno, str(err)) from err
    return sentences


def write_jsonl(records: Iterable[dict[str, Any]], stream: IO[str]) -> None:
    for record in records:
        stream.write(dumps_record(record) + "\n")


def apply_task_prefix(sentence: TaggedSentence, task: str | None = None) -> str:
    """Model input line for a sentence: ``task: tokens...``.

    ``task`` defaults to the sentence's own task field; an empty or missing
    task yields the bare joined tokens (prefix-free models omit it).
    """
    if task is None:
        task = sentence.task
    joined = " ".join(sentence.tokens)
    return f"{task}: {joined}" if task else joined


@dataclass(frozen=True)
class CorpusStats:
    n_sentences: int
    mean_sentence_length: float
    chunk_labels: tuple[str, ...]
    classes: tuple[str, ...]

    @property
    def sentences_per_label(self) -> float | None:
        if not self.chunk_labels:
            return None
        return self.n_sentences / len(self.chunk_labels)

    def to_dict(self) -> dict[str, Any]:
        return {
            "n_sentences": self.n_sentences,
            "mean_sentence_length": self.mean_sentence_length,
            "n_chunk_labels": len(self.chunk_labels),
            "chunk_labels": list(self.chunk_labels),
            "n_classes": len(self.classes),
            "classes": list(self.classes),
            "sentences_per_label": self.sentences_per_label,
        }


def corpus_stats(sentences: Sequence[TaggedSentence]) -> CorpusStats:
    labels: set[str] = set()
    classes: set[str] = set()
    total_tokens = 0
    for sentence in sentences:
        total_tokens += len(sentence.tokens)
        labels.update(tags_to_spans(sentence.tags, scheme="lenient").labels())
        if sentence.sentence_class is not None:
            classes.add(sentence.sentence_class)
    return CorpusStats(
        n_sentences=len(sentences),
        mean_sentence_length=total_tokens / len(sentences) if sentences else 0.0,
        chunk_labels=tuple(sorted(labels)),
        classes=tuple(sorted(classes)),
    )


@dataclass(frozen=True)
class CorruptionSpec:
    """Independent corruption channels, all applied token-wise with one RNG."""

    p_token_drop: float = 0.0
    p_token_insert: float = 0.0
    p_label_swap: float = 0.0
    p_truncate: float = 0.0
    seed: int = 0

    def __post_init__(self):
        for name in ("p_token_drop", "p_token_insert", "p_label_swap", "p_truncate"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {p}")

    @property
    def is_identity(self) -> bool:
        return not any(
            (self.p_token_drop, self.p_token_insert, self.p_label_swap, self.p_truncate)
        )


_NOISE_WORDS = ("uh", "hmm", "zz9")
_JUNK_LABEL = "scrambled label"


def corrupt(text: str, spec: CorruptionSpec) -> str:
    """Deterministically damage span-marked text through four channels.

    Label swap rewrites a group's label (taken between the default separator
    and close markers) with another label seen in the text, a case-mangled
    variant, or a junk label. Drops and inserts act per token; inserts draw
    from markers, a repeated neighbor, and noise words. Truncation keeps a
    proper character prefix. An all-zero spec returns the text unchanged.
    """
    if spec.is_identity:
        return text
    rng = random.Random(spec.seed)
    config = DEFAULT_CONFIG
    tokens = text.split()

    label_ranges: list[tuple[int, int]] = []
    start = None
    for i, tok in enumerate(tokens):
        if tok == config.sep_marker:
            start = i + 1
        elif tok == config.close_marker and start is not None:
            if start < i:
                label_ranges.append((start, i))
            start = None
    if spec.p_label_swap and label_ranges:
        seen = [" ".join(tokens[a:b]) for a, b in label_ranges]
        pool = sorted(set(seen) | {s.upper() for s in seen} | {_JUNK_LABEL})
        replaced = list(tokens)
        for a, b in label_ranges:
            if rng.random() < spec.p_label_swap:
                replaced[a:b] = [None] * (b - a)
                replaced[a] = rng.choice(pool)
        tokens = [t for t in replaced if t is not None]
        tokens = " ".join(tokens).split()

    if spec.p_token_drop:
        tokens = [t for t in tokens if rng.random() >= spec.p_token_drop]
    if spec.p_token_insert:
        grown: list[str] = []
        for tok in tokens:
            grown.append(tok)
            if rng.random() < spec.p_token_insert:
                pool = list(config.markers) + [tok] + list(_NOISE_WORDS)
                grown.append(rng.choice(pool))
        tokens = grown

    out = " ".join(tokens)
    if out and rng.random() < spec.p_truncate:
        out = out[: rng.randrange(0, len(out))]
    return out
