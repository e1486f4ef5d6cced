"""Invertible maps between raw label identifiers and natural-language labels.

Raw labels like ``playlist_owner``, ``depart_time.time_relative`` or
``AddToPlaylist`` are rewritten into lowercase space-separated phrases
("playlist owner", "depart time time relative", "add to playlist"). Each map
is a bijection so decoded text can be folded back to the raw labels.
"""

import re
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from typing import IO

from .core import SpanmarkError

MODES = ("identity", "rules", "table", "table+rules", "numeric")


class CollisionError(SpanmarkError):
    """Two raw labels naturalize to the same phrase."""

    def __init__(self, collisions: dict[str, list[str]]):
        self.collisions = collisions
        pairs = "; ".join(
            f"{natural!r} <- {sorted(raws)}" for natural, raws in sorted(collisions.items())
        )
        super().__init__(f"label map is not a bijection: {pairs}")


class UnknownNaturalLabel(SpanmarkError):
    """A natural label has no reverse mapping."""

    def __init__(self, label: str):
        self.label = label
        super().__init__(f"unknown natural label {label!r}")


class UnknownRawLabel(SpanmarkError):
    """A raw label has no forward mapping."""

    def __init__(self, label: str):
        self.label = label
        super().__init__(f"unknown raw label {label!r}")


_SEPARATORS = re.compile(r"[._/]+")
_CAP_RUN = re.compile(r"([A-Z]+)([A-Z][a-z])")
_LOWER_TO_UPPER = re.compile(r"([a-z0-9])([A-Z])")


def naturalize_rule(raw: str) -> str:
    """Rewrite one raw label into its natural form.

    Splits on ".", "_", "/" and at lowercase-to-uppercase boundaries, then
    lowercases and joins with single spaces. A run of capitals splits before
    its last capital, so "ABCWord" becomes "abc word". Digits stay attached
    to their word. Idempotent on its own output.
    """
    text = _SEPARATORS.sub(" ", raw)
    text = _CAP_RUN.sub(r"\1 \2", text)
    text = _LOWER_TO_UPPER.sub(r"\1 \2", text)
    return " ".join(text.lower().split())


@dataclass(frozen=True)
class LabelMap:
    """Bijective raw/natural label map.

    ``mode="identity"`` is total: every label maps to itself, even labels that
    were never registered. All other modes only know their registered entries.
    """

    forward: dict[str, str] = field(default_factory=dict)
    reverse: dict[str, str] = field(default_factory=dict)
    mode: str = "identity"

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")

    def naturalize(self, raw: str) -> str:
        if raw in self.forward:
            return self.forward[raw]
        if self.mode == "identity":
            return raw
        raise UnknownRawLabel(raw)

    def denaturalize(self, natural: str) -> str:
        natural = natural.strip()
        if natural in self.reverse:
            return self.reverse[natural]
        if self.mode == "identity":
            return natural
        raise UnknownNaturalLabel(natural)

    def __contains__(self, raw: str) -> bool:
        return raw in self.forward or self.mode == "identity"

    def __len__(self) -> int:
        return len(self.forward)

    def raw_labels(self) -> list[str]:
        return sorted(self.forward)

    def natural_labels(self) -> list[str]:
        return sorted(self.reverse)


IDENTITY = LabelMap()


def denaturalize(natural: str, labelmap: LabelMap) -> str:
    """Reverse-map one natural label (exact lookup after trimming)."""
    return labelmap.denaturalize(natural)


def build_labelmap(
    labels: Iterable[str],
    overrides: Mapping[str, str] | None = None,
    mode: str = "rules",
) -> LabelMap:
    """Build a validated bijective label map over an inventory.

    Modes: ``identity`` maps labels to themselves; ``rules`` applies
    :func:`naturalize_rule`; ``table`` uses ``overrides`` only (every label
    must be covered); ``table+rules`` prefers ``overrides`` and falls back to
    the rule; ``numeric`` assigns "0", "1", ... in sorted raw-label order.
    Raises :class:`CollisionError` if two raws share a natural form.
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    overrides = dict(overrides or {})
    inventory = sorted(set(labels))
    if mode in ("table", "table+rules"):
        inventory = sorted(set(inventory) | set(overrides))

    forward: dict[str, str] = {}
    for i, raw in enumerate(inventory):
        if mode == "identity":
            natural = raw
        elif mode == "numeric":
            natural = str(i)
        elif mode == "rules":
            natural = naturalize_rule(raw)
        elif mode == "table":
            if raw not in overrides:
                raise ValueError(f"label {raw!r} missing from table")
            natural = overrides[raw]
        else:  # table+rules
            natural = overrides.get(raw) or naturalize_rule(raw)
        natural = " ".join(natural.split())
        if not natural:
            raise ValueError(f"label {raw!r} naturalizes to an empty string")
        forward[raw] = natural

    seen: dict[str, list[str]] = {}
    for raw, natural in forward.items():
        seen.setdefault(natural, []).append(raw)
    collisions = {n: rs for n, rs in seen.items() if len(rs) > 1}
    if collisions:
        raise CollisionError(collisions)
    reverse = {natural: raw for raw, natural in forward.items()}
    return LabelMap(forward, reverse, mode)


def load_label_table(source: str | IO[str]) -> dict[str, str]:
    """Read a two-column raw<TAB>natural table; "#" lines are comments."""
    if isinstance(source, str):
        with open(source, encoding="utf-8") as handle:
            return load_label_table(handle)
    table: dict[str, str] = {}
    for lineno, line in enumerate(source, start=1):
        line = line.rstrip("\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) != 2 or not cols[0].strip() or not cols[1].strip():
            raise ValueError(f"line {lineno}: expected raw<TAB>natural, got {line!r}")
        table[cols[0].strip()] = cols[1].strip()
    return table


def dump_label_table(mapping: LabelMap | Mapping[str, str], stream: IO[str]) -> None:
    """Write a label table as TSV, sorted by raw label."""
    table = mapping.forward if isinstance(mapping, LabelMap) else mapping
    for raw in sorted(table):
        stream.write(f"{raw}\t{table[raw]}\n")


# Bundled mapping tables for the two column-format NER label sets.
CONLL_LABEL_TABLE: dict[str, str] = {
    "LOC": "location",
    "MISC": "miscellaneous",
    "ORG": "organization",
    "PER": "person",
}

ONTONOTES_LABEL_TABLE: dict[str, str] = {
    "CARDINAL": "cardinal",
    "DATE": "date",
    "EVENT": "event",
    "FAC": "facility",
    "GPE": "country city state",
    "LANGUAGE": "language",
    "LAW": "law",
    "LOC": "location",
    "MONEY": "money",
    "NORP": "nationality religious political group",
    "ORDINAL": "ordinal",
    "ORG": "organization",
    "PERCENT": "percent",
    "PERSON": "person",
    "PRODUCT": "product",
    "QUANTITY": "quantity",
    "TIME": "time",
    "WORK_OF_ART": "work of art",
}
