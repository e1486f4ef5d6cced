"""Core value types: tagged sentences, labeled spans, and the tag/span equivalence.

The canonical tagging scheme is IOB2: a chunk starts with ``B-<label>`` and
continues with ``I-<label>``. BIOES input is accepted everywhere by folding
``E-`` into ``I-`` and ``S-`` into ``B-`` before chunking. Labels may contain
spaces and hyphens; the hyphen right after the one-letter prefix is the only
delimiter.
"""

from collections.abc import Iterable, Iterator
from dataclasses import dataclass, replace

# Span-marked text is plain text. Well-formedness is a codec property checked
# against a config and a source sentence, not a type invariant.
AugmentedText = str

_PREFIXES = frozenset("BIES")


class SpanmarkError(Exception):
    """Base class for every error raised by this package."""


class MalformedScheme(SpanmarkError):
    """A tag sequence violates the tagging scheme."""

    def __init__(self, index: int, tag: str, reason: str):
        self.index = index
        self.tag = tag
        self.reason = reason
        super().__init__(f"tag {tag!r} at index {index}: {reason}")


class OverlapError(SpanmarkError):
    """Two spans claim the same token position."""

    def __init__(self, first: "Span", second: "Span"):
        self.first = first
        self.second = second
        super().__init__(f"overlapping spans {first} and {second}")


class OutOfBounds(SpanmarkError):
    """A span does not fit inside the sentence."""

    def __init__(self, span: "Span", length: int):
        self.span = span
        self.length = length
        super().__init__(f"span {span} out of bounds for length {length}")


def _check_tag(tag: str, index: int) -> None:
    if tag == "O":
        return
    if len(tag) < 3 or tag[0] not in _PREFIXES or tag[1] != "-":
        raise MalformedScheme(index, tag, "expected O or B-/I-/E-/S- prefix")
    label = tag[2:]
    if not label or label != label.strip():
        raise MalformedScheme(index, tag, "empty or padded label")


@dataclass(frozen=True, order=True)
class Span:
    """A labeled chunk over token positions ``start..end`` (both inclusive)."""

    start: int
    end: int
    label: str

    def __post_init__(self):
        if self.start < 0 or self.end < self.start:
            raise ValueError(f"bad span bounds ({self.start}, {self.end})")
        if not self.label:
            raise ValueError("span label must be non-empty")

    def __len__(self) -> int:
        return self.end - self.start + 1

    def positions(self) -> range:
        return range(self.start, self.end + 1)


@dataclass(frozen=True)
class SpanSet:
    """Spans of one sentence, kept sorted by start and pairwise disjoint."""

    spans: tuple[Span, ...] = ()

    def __post_init__(self):
        ordered = tuple(sorted(self.spans, key=lambda s: (s.start, s.end)))
        object.__setattr__(self, "spans", ordered)
        for prev, cur in zip(ordered, ordered[1:]):
            if cur.start <= prev.end:
                raise OverlapError(prev, cur)

    def __iter__(self) -> Iterator[Span]:
        return iter(self.spans)

    def __len__(self) -> int:
        return len(self.spans)

    def __getitem__(self, i: int) -> Span:
        return self.spans[i]

    def __bool__(self) -> bool:
        return bool(self.spans)

    def labels(self) -> set[str]:
        return {s.label for s in self.spans}


@dataclass(frozen=True)
class TaggedSentence:
    """One sentence with aligned tags and optional sentence-level metadata.

    Tokens are non-empty and contain no whitespace. Tags must be
    syntactically valid; IOB2 canonicality (no orphan ``I-``) is repaired on
    demand via :meth:`canonical`, never silently at construction.
    """

    tokens: tuple[str, ...]
    tags: tuple[str, ...]
    sentence_class: str | None = None
    domain: str | None = None
    task: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "tokens", tuple(self.tokens))
        object.__setattr__(self, "tags", tuple(self.tags))
        if len(self.tokens) != len(self.tags):
            raise ValueError(
                f"{len(self.tokens)} tokens vs {len(self.tags)} tags"
            )
        for i, tok in enumerate(self.tokens):
            if not tok or any(c.isspace() for c in tok):
                raise ValueError(f"bad token {tok!r} at index {i}")
        for i, tag in enumerate(self.tags):
            _check_tag(tag, i)

    def __len__(self) -> int:
        return len(self.tokens)

    def spans(self, scheme: str = "lenient") -> SpanSet:
        return tags_to_spans(self.tags, scheme=scheme)

    def canonical(self) -> "TaggedSentence":
        """Return a copy whose tags are canonical IOB2."""
        return replace(self, tags=tuple(canonical_tags(self.tags)))


def _fold_bioes(tag: str) -> str:
    if tag.startswith("E-"):
        return "I-" + tag[2:]
    if tag.startswith("S-"):
        return "B-" + tag[2:]
    return tag


def tags_to_spans(tags: Iterable[str], scheme: str = "lenient") -> SpanSet:
    """Extract chunks from a tag sequence.

    ``scheme="strict"`` rejects orphan ``I-X`` (not preceded by ``B-X`` or
    ``I-X``) with :class:`MalformedScheme`; ``"lenient"`` repairs it by
    treating the orphan as ``B-X``. Both modes fold BIOES prefixes first and
    reject syntactically invalid tags.
    """
    if scheme not in ("strict", "lenient"):
        raise ValueError(f"unknown scheme {scheme!r}")
    tags = list(tags)
    spans: list[Span] = []
    start: int | None = None
    label: str | None = None

    def close(end: int) -> None:
        nonlocal start, label
        if start is not None:
            spans.append(Span(start, end, label))
            start = None
            label = None

    for i, raw in enumerate(tags):
        _check_tag(raw, i)
        tag = _fold_bioes(raw)
        if tag == "O":
            close(i - 1)
        elif tag.startswith("B-"):
            close(i - 1)
            start, label = i, tag[2:]
        else:  # I-
            cur = tag[2:]
            if start is not None and label == cur:
                continue
            if scheme == "strict":
                raise MalformedScheme(i, raw, "orphan I- tag")
            close(i - 1)
            start, label = i, cur
    close(len(tags) - 1)
    return SpanSet(tuple(spans))


def spans_to_tags(spans: Iterable[Span], length: int) -> list[str]:
    """Render spans as a canonical IOB2 tag list of the given length."""
    tags = ["O"] * length
    prev: Span | None = None
    for span in sorted(spans, key=lambda s: (s.start, s.end)):
        if span.start < 0 or span.end >= length:
            raise OutOfBounds(span, length)
        if prev is not None and span.start <= prev.end:
            raise OverlapError(prev, span)
        tags[span.start] = "B-" + span.label
        for i in range(span.start + 1, span.end + 1):
            tags[i] = "I-" + span.label
        prev = span
    return tags


def canonical_tags(tags: Iterable[str]) -> list[str]:
    """Repair a tag sequence to canonical IOB2 (lenient chunking round-trip)."""
    tags = list(tags)
    return spans_to_tags(tags_to_spans(tags, scheme="lenient"), len(tags))
