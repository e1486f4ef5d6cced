import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from spanmark import (
    MalformedScheme,
    OutOfBounds,
    OverlapError,
    Span,
    SpanSet,
    TaggedSentence,
    canonical_tags,
    spans_to_tags,
    tags_to_spans,
)
from conftest import oracle_chunks, oracle_first_orphan, random_any_tags, random_iob2


class TestSpan:
    def test_bounds_validated(self):
        with pytest.raises(ValueError):
            Span(3, 2, "x")
        with pytest.raises(ValueError):
            Span(-1, 0, "x")
        with pytest.raises(ValueError):
            Span(0, 0, "")

    def test_len_and_positions(self):
        span = Span(2, 4, "x")
        assert len(span) == 3
        assert list(span.positions()) == [2, 3, 4]

    def test_label_may_contain_spaces_and_hyphens(self):
        assert Span(0, 0, "country city state").label == "country city state"
        assert Span(0, 0, "work-of-art").label == "work-of-art"


class TestSpanSet:
    def test_sorts_on_construction(self):
        ss = SpanSet((Span(5, 6, "b"), Span(0, 1, "a")))
        assert [s.start for s in ss] == [0, 5]

    def test_rejects_overlap(self):
        with pytest.raises(OverlapError):
            SpanSet((Span(0, 2, "a"), Span(2, 3, "b")))

    def test_adjacent_spans_allowed(self):
        ss = SpanSet((Span(0, 1, "a"), Span(2, 3, "b")))
        assert len(ss) == 2


class TestTaggedSentence:
    def test_length_mismatch_rejected(self):
        with pytest.raises(ValueError):
            TaggedSentence(("a", "b"), ("O",))

    def test_bad_tokens_rejected(self):
        with pytest.raises(ValueError):
            TaggedSentence(("a b",), ("O",))
        with pytest.raises(ValueError):
            TaggedSentence(("",), ("O",))

    def test_bad_tag_syntax_rejected(self):
        for bad in ("Q-x", "B-", "b-x", "I"):
            with pytest.raises((ValueError, MalformedScheme)):
                TaggedSentence(("a",), (bad,))

    def test_lists_become_tuples(self):
        s = TaggedSentence(["a"], ["O"])
        assert isinstance(s.tokens, tuple) and isinstance(s.tags, tuple)

    def test_bioes_tags_carried(self):
        s = TaggedSentence(("a", "b"), ("B-x", "E-x"))
        assert [sp.label for sp in s.spans()] == ["x"]

    def test_canonical_repairs_orphans(self):
        s = TaggedSentence(("a", "b"), ("O", "I-PER"))
        assert s.canonical().tags == ("O", "B-PER")


def spans_as_tuples(span_set):
    return [(s.start, s.end, s.label) for s in span_set]


class TestTagsToSpans:
    def test_derived_lenient_orphan(self):
        assert spans_as_tuples(tags_to_spans(["O", "I-PER"], "lenient")) == [
            (1, 1, "PER")
        ]

    def test_derived_strict_orphan(self):
        with pytest.raises(MalformedScheme) as err:
            tags_to_spans(["O", "I-PER"], "strict")
        assert err.value.index == 1

    def test_bioes_folding(self):
        tags = ["S-LOC", "O", "B-PER", "E-PER"]
        assert spans_as_tuples(tags_to_spans(tags)) == [(0, 0, "LOC"), (2, 3, "PER")]

    def test_label_first_hyphen_only(self):
        tags = ["B-work-of-art", "I-work-of-art"]
        assert spans_as_tuples(tags_to_spans(tags)) == [(0, 1, "work-of-art")]

    def test_unknown_scheme_rejected(self):
        with pytest.raises(ValueError):
            tags_to_spans(["O"], scheme="fuzzy")

    def test_exhaustive_small_sequences_match_oracle(self):
        # Every tag sequence of length <= 3 over two labels, all prefixes.
        alphabet = ["O", "B-A", "I-A", "E-A", "S-A", "B-B", "I-B"]
        for length in (1, 2, 3):
            for tags in itertools.product(alphabet, repeat=length):
                tags = list(tags)
                got = spans_as_tuples(tags_to_spans(tags, "lenient"))
                assert got == oracle_chunks(tags), tags
                orphan = oracle_first_orphan(tags)
                if orphan is None:
                    strict = spans_as_tuples(tags_to_spans(tags, "strict"))
                    assert strict == got, tags
                else:
                    with pytest.raises(MalformedScheme) as err:
                        tags_to_spans(tags, "strict")
                    assert err.value.index == orphan, tags

    def test_random_sequences_match_oracle(self):
        rng = random.Random(20140)
        labels = ["A", "B", "long label", "x-y"]
        for _ in range(2000):
            tags = random_any_tags(rng, rng.randint(0, 24), labels)
            assert spans_as_tuples(tags_to_spans(tags)) == oracle_chunks(tags)


class TestSpansToTags:
    def test_renders_iob2(self):
        tags = spans_to_tags([Span(1, 2, "x"), Span(4, 4, "y")], 6)
        assert tags == ["O", "B-x", "I-x", "O", "B-y", "O"]

    def test_out_of_bounds(self):
        with pytest.raises(OutOfBounds):
            spans_to_tags([Span(0, 3, "x")], 3)

    def test_overlap_reports_both_spans(self):
        with pytest.raises(OverlapError) as err:
            spans_to_tags([Span(0, 2, "a"), Span(1, 3, "b")], 5)
        assert err.value.first == Span(0, 2, "a")
        assert err.value.second == Span(1, 3, "b")

    def test_accepts_span_set(self):
        ss = tags_to_spans(["B-x", "I-x", "O"])
        assert spans_to_tags(ss, 3) == ["B-x", "I-x", "O"]


class TestRoundTrip:
    def test_seeded_round_trip_10000(self):
        # Canonical IOB2 sequences up to length 32 over 6 labels.
        rng = random.Random(91)
        labels = ["L1", "L2", "L3", "long label", "a-b", "L6"]
        for _ in range(10_000):
            tags = random_iob2(rng, rng.randint(0, 32), labels)
            spans = tags_to_spans(tags, "strict")
            assert spans_to_tags(spans, len(tags)) == tags

    @settings(max_examples=300, deadline=None)
    @given(st.data())
    def test_hypothesis_round_trip(self, data):
        labels = ["L1", "L2", "L3", "L4", "L5", "L6"]
        length = data.draw(st.integers(0, 32))
        seed = data.draw(st.integers(0, 2**32 - 1))
        tags = random_iob2(random.Random(seed), length, labels)
        assert spans_to_tags(tags_to_spans(tags, "strict"), length) == tags

    @settings(max_examples=300, deadline=None)
    @given(st.data())
    def test_hypothesis_lenient_is_canonical_fixpoint(self, data):
        labels = ["A", "B"]
        seed = data.draw(st.integers(0, 2**32 - 1))
        length = data.draw(st.integers(0, 20))
        tags = random_any_tags(random.Random(seed), length, labels)
        once = canonical_tags(tags)
        assert canonical_tags(once) == once
        assert oracle_first_orphan(once) is None
