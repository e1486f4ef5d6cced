"""Shared test helpers: independent oracles and seeded random data builders.

The oracles here deliberately re-derive results through different algorithms
than the library (per-position predicates instead of stateful scans, rational
arithmetic instead of float formulas) so agreement is meaningful.
"""

import random
from fractions import Fraction

from spanmark import Corpus, Span, TaggedSentence, spans_to_tags

# Tokens that collide with the default marker grammar, including
# escape-prefixed forms that must survive the escape/unescape round trip.
MARKERISH_TOKENS = (
    "[", "]", "|", "((", "))",
    "\\[", "\\]", "\\|", "\\((", "\\))", "\\\\[", "\\\\]",
)

LABEL_POOL = (
    "money", "person", "country city state", "playlist owner",
    "object type", "time range", "alpha", "beta omega",
)

CLASS_POOL = ("add to playlist", "get weather", "book restaurant")


def _fold(tag):
    if tag == "O":
        return ("O", None)
    prefix, label = tag[0], tag[2:]
    prefix = {"E": "I", "S": "B"}.get(prefix, prefix)
    return (prefix, label)


def oracle_chunks(tags):
    """Brute-force chunk extraction under lenient semantics.

    A chunk starts wherever a B appears or an I is not preceded by the same
    label, and extends over the maximal following run of same-label I tags.
    """
    tags = list(tags)
    n = len(tags)
    chunks = []
    for i in range(n):
        prefix, label = _fold(tags[i])
        if prefix == "O":
            continue
        prev_prefix, prev_label = _fold(tags[i - 1]) if i else ("O", None)
        starts = prefix == "B" or prev_prefix == "O" or prev_label != label
        if not starts:
            continue
        j = i
        while j + 1 < n and _fold(tags[j + 1]) == ("I", label):
            j += 1
        chunks.append((i, j, label))
    return chunks


def oracle_first_orphan(tags):
    """Index of the first orphan I tag (strict-mode violation), else None."""
    tags = list(tags)
    for i, tag in enumerate(tags):
        prefix, label = _fold(tag)
        if prefix != "I":
            continue
        prev_prefix, prev_label = _fold(tags[i - 1]) if i else ("O", None)
        if prev_prefix == "O" or prev_label != label:
            return i
    return None


def oracle_score(pairs):
    """Exact-rational micro P/R/F1 over (gold_tags, pred_tags) pairs."""
    tp = fp = fn = 0
    for gold_tags, pred_tags in pairs:
        gold = set(oracle_chunks(gold_tags))
        pred = set(oracle_chunks(pred_tags))
        tp += len(gold & pred)
        fp += len(pred - gold)
        fn += len(gold - pred)
    precision = Fraction(tp, tp + fp) if tp + fp else Fraction(0)
    recall = Fraction(tp, tp + fn) if tp + fn else Fraction(0)
    if precision + recall:
        f1 = 2 * precision * recall / (precision + recall)
    else:
        f1 = Fraction(0)
    return tp, fp, fn, precision, recall, f1


def random_iob2(rng, length, labels):
    """Canonical IOB2 tags built by a direct state walk (no library calls)."""
    tags = []
    open_label = None
    for _ in range(length):
        roll = rng.random()
        if open_label is not None and roll < 0.45:
            tags.append("I-" + open_label)
            continue
        if roll < 0.7:
            open_label = None
            tags.append("O")
        else:
            open_label = rng.choice(labels)
            tags.append("B-" + open_label)
    return tags


def random_any_tags(rng, length, labels, prefixes=("O", "B", "I", "E", "S")):
    """Arbitrary syntactically-valid tags, possibly orphaned or BIOES."""
    tags = []
    for _ in range(length):
        prefix = rng.choice(prefixes)
        tags.append("O" if prefix == "O" else f"{prefix}-{rng.choice(labels)}")
    return tags


def random_sentence(
    rng,
    max_len=32,
    marker_rate=0.2,
    class_rate=0.5,
    label_pool=LABEL_POOL,
    class_pool=CLASS_POOL,
    max_labels=8,
):
    """Random canonical sentence for invertibility fuzzing."""
    length = rng.randint(1, max_len)
    tokens = tuple(
        rng.choice(MARKERISH_TOKENS) if rng.random() < marker_rate
        else f"w{rng.randrange(1000)}"
        for _ in range(length)
    )
    labels = rng.sample(list(label_pool), rng.randint(1, max_labels))
    tags = tuple(random_iob2(rng, length, labels))
    sentence_class = (
        rng.choice(class_pool) if rng.random() < class_rate else None
    )
    return TaggedSentence(tokens, tags, sentence_class=sentence_class)


def place_spans(rng, length, labels):
    """Non-overlapping spans left to right, one per requested label."""
    spans = []
    pos = 0
    for label in labels:
        start = pos + rng.randint(0, 2)
        end = start + rng.randint(0, 2)
        if end >= length:
            break
        spans.append(Span(start, end, label))
        pos = end + 1
    return spans


def synthetic_corpus(
    n, slots, seed, domain=None, intent=None, min_len=4, max_len=14
):
    """Seeded slot-filling corpus; round-robin keeps every slot populated."""
    rng = random.Random(seed)
    slots = list(slots)
    sentences = []
    for i in range(n):
        length = rng.randint(min_len, max_len)
        tokens = tuple(f"t{rng.randrange(5000)}" for _ in range(length))
        wanted = [slots[i % len(slots)]]
        while rng.random() < 0.5 and len(wanted) < 3:
            wanted.append(rng.choice(slots))
        rng.shuffle(wanted)
        tags = tuple(spans_to_tags(place_spans(rng, length, wanted), length))
        sentences.append(
            TaggedSentence(tokens, tags, sentence_class=intent, domain=domain)
        )
    return Corpus(tuple(sentences), domain=domain)
