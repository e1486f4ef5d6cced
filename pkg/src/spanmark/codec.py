"""Codec between tagged sentences and span-marked text.

The encoded form repeats the source sentence token for token. Each labeled
chunk is wrapped in a bracket group ``[ tokens | natural label ]`` and an
optional sentence class leads the line as ``(( natural class ))``::

    (( add to playlist )) Onto [ jerry's | playlist owner ] ...

Markers are standalone whitespace-delimited tokens. Source tokens that would
read as a marker are escaped with a configurable escape prefix, so encoding
followed by strict decoding is lossless for every sentence. Tolerant decoding
never fails: it realigns whatever survives of the text against the source
tokens and reports what it had to repair.
"""

from dataclasses import dataclass, field

from .core import Span, SpanSet, SpanmarkError, TaggedSentence, tags_to_spans
from .naturalize import IDENTITY, LabelMap, UnknownNaturalLabel


class DecodeError(SpanmarkError):
    """Base class for strict-decode failures."""


class ClassGroupMisplaced(DecodeError):
    """Class markers anywhere but a single sentence-initial group."""

    def __init__(self, position: int):
        self.position = position
        super().__init__(f"class group marker misplaced at token {position}")


class UnbalancedMarkers(DecodeError):
    """Bracket or separator structure is violated."""

    def __init__(self, position: int, reason: str = "unbalanced markers"):
        self.position = position
        super().__init__(f"{reason} at token {position}")


class EmptySpanGroup(DecodeError):
    """A group carries no content."""

    def __init__(self, position: int):
        self.position = position
        super().__init__(f"empty group at token {position}")


class TokenMismatch(DecodeError):
    """Decoded body tokens disagree with the source sentence."""

    def __init__(self, index: int):
        self.index = index
        super().__init__(f"body token differs from source at index {index}")


class UnescapableToken(SpanmarkError):
    """A source token collides with a marker and escaping is disabled."""

    def __init__(self, token: str):
        self.token = token
        super().__init__(f"token {token!r} collides with a marker")


@dataclass(frozen=True)
class CodecConfig:
    """Marker grammar and escaping policy.

    The five markers must be pairwise distinct, non-empty, whitespace-free,
    and must not start with the escape prefix (otherwise escaped tokens could
    read as structure).
    """

    open_marker: str = "["
    close_marker: str = "]"
    sep_marker: str = "|"
    class_open: str = "(("
    class_close: str = "))"
    escape_char: str = "\\"
    escaping_enabled: bool = True
    case_insensitive_align: bool = False

    def __post_init__(self):
        markers = self.markers
        for m in markers + (self.escape_char,):
            if not m or any(c.isspace() for c in m):
                raise ValueError(f"bad marker {m!r}")
        if len(set(markers)) != len(markers):
            raise ValueError("markers must be pairwise distinct")
        if self.escape_char in markers:
            raise ValueError("escape char must differ from the markers")
        if any(m.startswith(self.escape_char) for m in markers):
            raise ValueError("markers must not start with the escape char")

    @property
    def markers(self) -> tuple[str, str, str, str, str]:
        return (
            self.open_marker,
            self.close_marker,
            self.sep_marker,
            self.class_open,
            self.class_close,
        )


DEFAULT_CONFIG = CodecConfig()


@dataclass
class DecodeDiagnostics:
    """What tolerant decoding had to do to produce a result.

    ``repaired`` is False exactly when the text strict-decodes cleanly.
    """

    repaired: bool = False
    dropped_output_tokens: int = 0
    unmatched_source_tokens: int = 0
    malformed_groups: int = 0
    notes: list[str] = field(default_factory=list)


def _collides(token: str, config: CodecConfig) -> bool:
    # A token needs escaping if stripping any number of escape prefixes
    # leaves a marker; escaping only such tokens keeps the map bijective.
    while token.startswith(config.escape_char):
        token = token[len(config.escape_char):]
    return token in config.markers


def _escape(token: str, config: CodecConfig) -> str:
    if not config.escaping_enabled:
        if token in config.markers:
            raise UnescapableToken(token)
        return token
    if _collides(token, config):
        return config.escape_char + token
    return token


def _unescape(token: str, config: CodecConfig) -> str:
    if (
        config.escaping_enabled
        and token.startswith(config.escape_char)
        and _collides(token[len(config.escape_char):], config)
    ):
        return token[len(config.escape_char):]
    return token


def _renderable(natural: str, config: CodecConfig, what: str) -> str:
    parts = natural.split()
    if not parts or " ".join(parts) != natural:
        raise ValueError(f"{what} {natural!r} is not whitespace-normalized")
    for part in parts:
        if part in config.markers:
            raise ValueError(f"{what} {natural!r} contains the marker {part!r}")
    return natural


def encode(
    sentence: TaggedSentence,
    labelmap: LabelMap = IDENTITY,
    config: CodecConfig = DEFAULT_CONFIG,
) -> str:
    """Render a tagged sentence as span-marked text.

    Chunk labels and the sentence class are naturalized through ``labelmap``;
    every label must be known to the map (the identity map knows all).
    """
    spans = tags_to_spans(sentence.tags, scheme="lenient")
    out: list[str] = []
    if sentence.sentence_class is not None:
        natural = _renderable(
            labelmap.naturalize(sentence.sentence_class), config, "class"
        )
        out += [config.class_open, natural, config.class_close]
    starts = {span.start: span for span in spans}
    i = 0
    while i < len(sentence.tokens):
        span = starts.get(i)
        if span is None:
            out.append(_escape(sentence.tokens[i], config))
            i += 1
            continue
        natural = _renderable(labelmap.naturalize(span.label), config, "label")
        out.append(config.open_marker)
        out += [_escape(t, config) for t in sentence.tokens[span.start:span.end + 1]]
        out += [config.sep_marker, natural, config.close_marker]
        i = span.end + 1
    return " ".join(out)


def decode_strict(
    text: str,
    source: list[str] | tuple[str, ...],
    labelmap: LabelMap = IDENTITY,
    config: CodecConfig = DEFAULT_CONFIG,
) -> tuple[SpanSet, str | None]:
    """Parse span-marked text that must match the source sentence exactly.

    Returns the recovered spans (raw labels) and the raw sentence class, or
    raises a :class:`DecodeError` subclass (or :class:`UnknownNaturalLabel`)
    describing the first violation.
    """
    tokens = text.split()
    pos = 0
    sentence_class: str | None = None

    if tokens and tokens[0] == config.class_open:
        content: list[str] = []
        pos = 1
        while pos < len(tokens) and tokens[pos] != config.class_close:
            tok = tokens[pos]
            if tok == config.class_open:
                raise ClassGroupMisplaced(pos)
            if tok in (config.open_marker, config.close_marker, config.sep_marker):
                raise UnbalancedMarkers(pos, "marker inside class group")
            content.append(tok)
            pos += 1
        if pos >= len(tokens):
            raise UnbalancedMarkers(0, "unterminated class group")
        if not content:
            raise EmptySpanGroup(0)
        sentence_class = labelmap.denaturalize(" ".join(content))
        pos += 1

    body: list[str] = []
    groups: list[tuple[int, int, str]] = []
    group_start: int | None = None
    label_tokens: list[str] | None = None

    for idx in range(pos, len(tokens)):
        tok = tokens[idx]
        if tok in (config.class_open, config.class_close):
            raise ClassGroupMisplaced(idx)
        if tok == config.open_marker:
            if group_start is not None:
                raise UnbalancedMarkers(idx, "nested group")
            group_start = len(body)
            label_tokens = None
        elif tok == config.sep_marker:
            if group_start is None:
                raise UnbalancedMarkers(idx, "separator outside group")
            if label_tokens is None:
                label_tokens = []
            else:
                # Part of the label string; lookup decides its fate.
                label_tokens.append(tok)
        elif tok == config.close_marker:
            if group_start is None:
                raise UnbalancedMarkers(idx, "close without open")
            if label_tokens is None:
                raise UnbalancedMarkers(idx, "group without separator")
            if len(body) == group_start:
                raise EmptySpanGroup(idx)
            natural = " ".join(label_tokens)
            if not natural:
                raise UnknownNaturalLabel("")
            groups.append((group_start, len(body) - 1, labelmap.denaturalize(natural)))
            group_start = None
            label_tokens = None
        elif label_tokens is not None:
            label_tokens.append(tok)
        else:
            body.append(_unescape(tok, config))
    if group_start is not None:
        raise UnbalancedMarkers(len(tokens) - 1, "unterminated group")

    for i in range(min(len(body), len(source))):
        if body[i] != source[i]:
            raise TokenMismatch(i)
    if len(body) != len(source):
        raise TokenMismatch(min(len(body), len(source)))

    spans = SpanSet(tuple(Span(s, e, lab) for s, e, lab in groups))
    return spans, sentence_class


def is_well_formed(
    text: str,
    source: list[str] | tuple[str, ...],
    labelmap: LabelMap = IDENTITY,
    config: CodecConfig = DEFAULT_CONFIG,
) -> bool:
    """True when strict decoding would succeed. Never raises."""
    try:
        decode_strict(text, source, labelmap, config)
        return True
    except SpanmarkError:
        return False


def _resolve_label(
    natural: str, labelmap: LabelMap, diag: DecodeDiagnostics, what: str
) -> str | None:
    natural = " ".join(natural.split())
    if not natural:
        return None
    try:
        return labelmap.denaturalize(natural)
    except UnknownNaturalLabel:
        pass
    folded = natural.lower()
    candidates = sorted(n for n in labelmap.reverse if n.lower() == folded)
    if candidates:
        diag.notes.append(f"{what} {natural!r} matched case-insensitively")
        return labelmap.reverse[candidates[0]]
    diag.notes.append(f"unknown {what} {natural!r} dropped")
    return None


class _Group:
    __slots__ = ("start", "end", "label_tokens", "in_label", "closed")

    def __init__(self, start: int):
        self.start = start
        self.end = start
        self.label_tokens: list[str] = []
        self.in_label = False
        self.closed = False


def _extract_class_groups(
    tokens: list[str], config: CodecConfig, diag: DecodeDiagnostics
) -> tuple[list[str], list[str]]:
    """Remove class groups from the stream; return (rest, class candidates)."""
    structural = set(config.markers)
    rest: list[str] = []
    candidates: list[str] = []
    i = 0
    while i < len(tokens):
        tok = tokens[i]
        if tok == config.class_close:
            diag.malformed_groups += 1
            diag.notes.append(f"stray class close at token {i}")
            i += 1
            continue
        if tok != config.class_open:
            rest.append(tok)
            i += 1
            continue
        j = i + 1
        content: list[str] = []
        plain = True
        while j < len(tokens) and tokens[j] != config.class_close:
            if tokens[j] in structural:
                plain = False
                break
            content.append(tokens[j])
            j += 1
        if plain and j < len(tokens) and content:
            candidates.append(" ".join(content))
            i = j + 1
        elif plain and j < len(tokens):
            # Properly closed but empty; consume both markers.
            diag.malformed_groups += 1
            diag.notes.append(f"empty class group at token {i}")
            i = j + 1
        else:
            diag.malformed_groups += 1
            diag.notes.append(f"malformed class group at token {i}")
            i += 1
    return rest, candidates


def decode_tolerant(
    text: str,
    source: list[str] | tuple[str, ...],
    labelmap: LabelMap = IDENTITY,
    config: CodecConfig = DEFAULT_CONFIG,
) -> tuple[SpanSet, str | None, DecodeDiagnostics]:
    """Decode arbitrarily damaged span-marked text. Total: never raises.

    Body tokens are aligned to the source by longest common subsequence on
    exact token identity (ties to the leftmost source position; case-folded
    when ``config.case_insensitive_align``). Unmatched text tokens are
    dropped, unmatched source tokens become "O", and a group whose aligned
    positions are not contiguous splits into maximal contiguous sub-spans.
    The first well-formed class group anywhere supplies the class.
    """
    try:
        spans, sentence_class = decode_strict(text, source, labelmap, config)
        return spans, sentence_class, DecodeDiagnostics(repaired=False)
    except SpanmarkError:
        pass

    diag = DecodeDiagnostics(repaired=True)
    tokens, class_candidates = _extract_class_groups(text.split(), config, diag)
    sentence_class = None
    for i, candidate in enumerate(class_candidates):
        if i == 0:
            sentence_class = _resolve_label(candidate, labelmap, diag, "class")
        else:
            diag.notes.append(f"extra class group {candidate!r} ignored")

    body: list[str] = []
    groups: list[_Group] = []
    current: _Group | None = None
    depth = 0
    for tok in tokens:
        if tok == config.open_marker:
            if depth == 0:
                current = _Group(len(body))
                groups.append(current)
            else:
                diag.malformed_groups += 1
                diag.notes.append("nested group flattened")
            depth += 1
        elif tok == config.close_marker:
            if depth == 0:
                diag.malformed_groups += 1
                diag.notes.append("stray close marker")
            elif depth == 1:
                current.end = len(body)
                current.closed = True
                current = None
                depth = 0
            else:
                depth -= 1
        elif tok == config.sep_marker:
            if depth == 0:
                diag.malformed_groups += 1
                diag.notes.append("stray separator")
            elif depth == 1 and not current.in_label:
                current.in_label = True
            elif depth == 1:
                current.label_tokens.append(tok)
            # Separators of flattened inner groups are dropped.
        elif current is not None and current.in_label:
            current.label_tokens.append(tok)
        else:
            body.append(_unescape(tok, config))
    if current is not None:
        diag.malformed_groups += 1
        diag.notes.append("unterminated group recovered")
        current.end = len(body)
        current.closed = True

    pairs = _lcs_pairs(body, list(source), fold=config.case_insensitive_align)
    matched = dict(pairs)
    diag.dropped_output_tokens = len(body) - len(pairs)
    diag.unmatched_source_tokens = len(source) - len(pairs)

    spans: list[Span] = []
    for group in groups:
        label = _resolve_label(" ".join(group.label_tokens), labelmap, diag, "label")
        if group.end == group.start:
            diag.malformed_groups += 1
            diag.notes.append("group with empty span part")
            continue
        if label is None:
            if not group.label_tokens:
                diag.malformed_groups += 1
                diag.notes.append("group without label")
            continue
        positions = [matched[b] for b in range(group.start, group.end) if b in matched]
        for start, end in _contiguous_runs(positions):
            spans.append(Span(start, end, label))

    return SpanSet(tuple(spans)), sentence_class, diag


def _contiguous_runs(positions: list[int]) -> list[tuple[int, int]]:
    runs: list[tuple[int, int]] = []
    for p in positions:
        if runs and p == runs[-1][1] + 1:
            runs[-1] = (runs[-1][0], p)
        else:
            runs.append((p, p))
    return runs


def _lcs_pairs(a: list[str], b: list[str], fold: bool = False) -> list[tuple[int, int]]:
    """Longest common subsequence match pairs, leftmost-biased in ``b``."""
    ka = [t.lower() for t in a] if fold else a
    kb = [t.lower() for t in b] if fold else b
    n, m = len(a), len(b)
    table = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(n - 1, -1, -1):
        row, below = table[i], table[i + 1]
        ai = ka[i]
        for j in range(m - 1, -1, -1):
            if ai == kb[j]:
                best = below[j + 1] + 1
                skip = below[j] if below[j] >= row[j + 1] else row[j + 1]
                row[j] = best if best >= skip else skip
            else:
                row[j] = below[j] if below[j] >= row[j + 1] else row[j + 1]
    pairs: list[tuple[int, int]] = []
    i = j = 0
    while i < n and j < m:
        if ka[i] == kb[j] and table[i][j] == table[i + 1][j + 1] + 1:
            pairs.append((i, j))
            i += 1
            j += 1
        elif table[i + 1][j] >= table[i][j + 1]:
            i += 1
        else:
            j += 1
    return pairs
