"""K-shot episode sampling, leave-one-out domain splits, low-resource subsampling.

A valid K-shot support set satisfies two properties at once: every label of
the task inventory occurs at least K times (counting chunks, not tokens), and
removing any single sentence breaks that. The sampler builds such sets
greedily; :func:`verify_kshot` re-checks them by exhaustive removal and is
deliberately independent of the sampler.
"""

import random
from collections import Counter
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from functools import cached_property

from .core import SpanmarkError, TaggedSentence, tags_to_spans


class InsufficientCorpus(SpanmarkError):
    """The corpus cannot satisfy a sampling precondition."""

    def __init__(self, label: str | None, available: int, needed: int):
        self.label = label
        self.available = available
        self.needed = needed
        what = f"label {label!r}" if label is not None else "disjoint query sentences"
        super().__init__(f"{what}: need {needed}, corpus has {available}")


class UnknownDomain(SpanmarkError):
    def __init__(self, domain: str, known: Iterable[str]):
        self.domain = domain
        super().__init__(f"unknown domain {domain!r} (have {sorted(known)})")


@dataclass(frozen=True)
class Corpus:
    """An immutable bag of tagged sentences, optionally tied to one domain."""

    sentences: tuple[TaggedSentence, ...]
    domain: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "sentences", tuple(self.sentences))

    @cached_property
    def label_inventory(self) -> frozenset[str]:
        labels: set[str] = set()
        for sentence in self.sentences:
            labels.update(tags_to_spans(sentence.tags, scheme="lenient").labels())
        return frozenset(labels)

    def __len__(self) -> int:
        return len(self.sentences)

    def __iter__(self):
        return iter(self.sentences)

    def __getitem__(self, i: int) -> TaggedSentence:
        return self.sentences[i]


@dataclass(frozen=True)
class Episode:
    """One sampled evaluation episode: support set, query set, and provenance."""

    support: tuple[TaggedSentence, ...]
    query: tuple[TaggedSentence, ...]
    k: int
    seed: int


def chunk_label_counts(sentence: TaggedSentence) -> Counter:
    """Chunk occurrences per label in one sentence (lenient chunking)."""
    return Counter(s.label for s in tags_to_spans(sentence.tags, scheme="lenient"))


@dataclass(frozen=True)
class KShotCheck:
    """Outcome of the exhaustive K-shot verification, with a witness on failure."""

    ok: bool
    reason: str | None = None
    label: str | None = None
    sentence_index: int | None = None

    def __bool__(self) -> bool:
        return self.ok


def verify_kshot(
    support: Sequence[TaggedSentence], inventory: Iterable[str], k: int
) -> KShotCheck:
    """Exhaustively check the two K-shot support properties.

    Every inventory label must occur at least ``k`` times across the support,
    and for every sentence, removing it must drop some label below ``k``.
    Labels outside the inventory are ignored. Empty inventory and empty
    support verify trivially.
    """
    inventory = set(inventory)
    per_sentence = [
        Counter({l: c for l, c in chunk_label_counts(s).items() if l in inventory})
        for s in support
    ]
    totals = Counter()
    for counts in per_sentence:
        totals.update(counts)
    for label in sorted(inventory):
        if totals[label] < k:
            return KShotCheck(False, "undercovered", label=label)
    for idx, counts in enumerate(per_sentence):
        if all(totals[l] - c >= k for l, c in counts.items()):
            return KShotCheck(False, "removable", sentence_index=idx)
    return KShotCheck(True)


def sample_episode(
    corpus: Corpus, k: int, query_size: int = 20, seed: int = 0
) -> Episode:
    """Sample one K-shot episode, deterministically for a given seed.

    Greedy construction: walk the corpus in seeded shuffle order adding any
    sentence that still covers a deficient label, then prune redundant
    sentences in the same order. One prune pass suffices because removals
    only lower counts, so a sentence kept once can never become removable.
    The query draws ``query_size`` sentences from the remainder.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if query_size < 0:
        raise ValueError("query_size must be >= 0")
    inventory = corpus.label_inventory
    per_sentence = [
        Counter({l: c for l, c in chunk_label_counts(s).items() if l in inventory})
        for s in corpus.sentences
    ]
    totals = Counter()
    for counts in per_sentence:
        totals.update(counts)
    for label in sorted(inventory):
        if totals[label] < k:
            raise InsufficientCorpus(label, totals[label], k)

    rng = random.Random(seed)
    order = list(range(len(corpus.sentences)))
    rng.shuffle(order)

    have = Counter()
    chosen: list[int] = []
    for idx in order:
        counts = per_sentence[idx]
        if any(have[l] < k for l in counts):
            chosen.append(idx)
            have.update(counts)
    for idx in list(chosen):
        counts = per_sentence[idx]
        if counts and all(have[l] - c >= k for l, c in counts.items()):
            chosen.remove(idx)
            have.subtract(counts)

    support_idx = sorted(chosen)
    rest = [i for i in range(len(corpus.sentences)) if i not in set(support_idx)]
    if len(rest) < query_size:
        raise InsufficientCorpus(None, len(rest), query_size)
    query_idx = sorted(rng.sample(rest, query_size))

    return Episode(
        support=tuple(corpus.sentences[i] for i in support_idx),
        query=tuple(corpus.sentences[i] for i in query_idx),
        k=k,
        seed=seed,
    )


def leave_one_out(
    corpora: Sequence[Corpus], target: str
) -> tuple[list[Corpus], Corpus]:
    """Split a list of single-domain corpora into (sources, target)."""
    domains = [c.domain for c in corpora]
    if target not in domains:
        raise UnknownDomain(target, [d for d in domains if d is not None])
    sources = [c for c in corpora if c.domain != target]
    held_out = next(c for c in corpora if c.domain == target)
    return sources, held_out


def subsample(corpus: Corpus, fraction: float, seed: int = 0) -> Corpus:
    """Keep ``floor(fraction * len(corpus))`` sentences, at least one.

    Sampling is uniform without replacement and deterministic per seed;
    original corpus order is preserved. ``fraction`` must be in (0, 1].
    """
    if not 0 < fraction <= 1:
        raise ValueError(f"fraction must be in (0, 1], got {fraction}")
    n = max(1, int(fraction * len(corpus.sentences)))
    if n >= len(corpus.sentences):
        return corpus
    rng = random.Random(seed)
    keep = sorted(rng.sample(range(len(corpus.sentences)), n))
    return Corpus(tuple(corpus.sentences[i] for i in keep), domain=corpus.domain)
