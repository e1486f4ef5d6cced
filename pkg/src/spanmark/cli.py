"""Command-line interface. Subcommands stream JSONL line by line.

Exit codes: 0 success, 1 validation or usage error, 2 I/O error.
"""

import argparse
import contextlib
import dataclasses
import sys
from collections.abc import Iterator
from typing import IO

from . import __version__, FORMAT_VERSION
from .codec import CodecConfig, DEFAULT_CONFIG, decode_strict, decode_tolerant, encode
from .core import SpanmarkError, TaggedSentence, spans_to_tags
from .episodes import Corpus, Episode, sample_episode, subsample, verify_kshot
from .evaluation import score
from .ingest import (
    ParseError,
    apply_task_prefix,
    corpus_stats,
    corrupt,
    CorruptionSpec,
    dumps_record,
    iter_conll,
    iter_jsonl,
    record_to_sentence,
    sentence_to_record,
)
from .naturalize import IDENTITY, build_labelmap, load_label_table


class _Parser(argparse.ArgumentParser):
    # Usage problems are validation errors (exit 1); 2 is reserved for I/O.
    def error(self, message):
        self.exit(1, f"{self.prog}: error: {message}\n")


@contextlib.contextmanager
def _open_in(path: str):
    if path == "-":
        yield sys.stdin
    else:
        with open(path, encoding="utf-8") as handle:
            yield handle


@contextlib.contextmanager
def _open_out(path: str):
    if path == "-":
        yield sys.stdout
        sys.stdout.flush()
    else:
        with open(path, "w", encoding="utf-8") as handle:
            yield handle


def _iter_sentences(stream: IO[str], fmt: str, conll_sep: str) -> Iterator[TaggedSentence]:
    if fmt == "conll":
        yield from iter_conll(stream, column_sep=conll_sep)
    else:
        for lineno, obj in iter_jsonl(stream):
            try:
                yield record_to_sentence(obj)
            except (ValueError, TypeError) as err:
                raise ParseError(lineno, str(err)) from err


def _load_labelmap(path: str | None):
    if path is None:
        return IDENTITY
    table = load_label_table(path)
    return build_labelmap(table.keys(), overrides=table, mode="table")


def _add_io(parser, fmt: bool = True) -> None:
    parser.add_argument("-i", "--input", default="-", help="input path or - for stdin")
    parser.add_argument("-o", "--output", default="-", help="output path or - for stdout")
    if fmt:
        parser.add_argument(
            "--format", choices=("jsonl", "conll"), default="jsonl",
            help="corpus input format",
        )
        parser.add_argument(
            "--conll-sep", choices=("space", "tab"), default="space",
            help="column separator for conll input",
        )


def _cmd_encode(args) -> int:
    labelmap = _load_labelmap(args.labelmap)
    config = dataclasses.replace(DEFAULT_CONFIG, escaping_enabled=not args.no_escape)
    with _open_in(args.input) as src, _open_out(args.output) as dst:
        for sentence in _iter_sentences(src, args.format, args.conll_sep):
            text = encode(sentence, labelmap, config)
            if args.text_only:
                dst.write(text + "\n")
                continue
            record = {"tokens": list(sentence.tokens), "text": text}
            if args.task:
                sentence = dataclasses.replace(sentence, task=args.task)
                record["task"] = args.task
                record["input"] = apply_task_prefix(sentence)
            elif sentence.task is not None:
                record["task"] = sentence.task
            if sentence.domain is not None:
                record["domain"] = sentence.domain
            dst.write(dumps_record(record) + "\n")
    return 0


def _cmd_decode(args) -> int:
    labelmap = _load_labelmap(args.labelmap)
    config = dataclasses.replace(
        DEFAULT_CONFIG, case_insensitive_align=args.case_insensitive
    )
    repaired = 0
    total = 0
    with _open_in(args.input) as src, _open_out(args.output) as dst:
        for lineno, obj in iter_jsonl(src):
            try:
                tokens = [str(t) for t in obj["tokens"]]
                text = str(obj["text"])
            except (KeyError, TypeError) as err:
                raise ParseError(lineno, f"record needs tokens and text: {err}") from err
            if args.tolerant:
                spans, cls, diag = decode_tolerant(text, tokens, labelmap, config)
                repaired += int(diag.repaired)
            else:
                try:
                    spans, cls = decode_strict(text, tokens, labelmap, config)
                except SpanmarkError as err:
                    raise ParseError(lineno, str(err)) from err
            total += 1
            record = {"tokens": tokens, "tags": spans_to_tags(spans, len(tokens))}
            if cls is not None:
                record["class"] = cls
            for key in ("domain", "task"):
                if key in obj:
                    record[key] = obj[key]
            if args.output_format == "conll":
                for token, tag in zip(record["tokens"], record["tags"]):
                    dst.write(f"{token} {tag}\n")
                dst.write("\n")
            else:
                dst.write(dumps_record(record) + "\n")
    if args.tolerant and total:
        print(f"spanmark: repaired {repaired}/{total} lines", file=sys.stderr)
    return 0


def _cmd_eval(args) -> int:
    with _open_in(args.gold) as handle:
        gold = list(_iter_sentences(handle, args.format, args.conll_sep))
    with _open_in(args.pred) as handle:
        pred = list(_iter_sentences(handle, args.format, args.conll_sep))
    report = score(gold, pred)
    with _open_out(args.output) as dst:
        if args.table:
            dst.write(report.format_table() + "\n")
        else:
            dst.write(dumps_record(report.to_dict()) + "\n")
    return 0


def _episode_record(episode: Episode) -> dict:
    return {
        "k": episode.k,
        "seed": episode.seed,
        "support": [sentence_to_record(s) for s in episode.support],
        "query": [sentence_to_record(s) for s in episode.query],
    }


def _verify_episode_line(lineno: int, obj: dict) -> None:
    try:
        support = [record_to_sentence(r) for r in obj["support"]]
        query = [record_to_sentence(r) for r in obj.get("query", [])]
        k = int(obj["k"])
    except (KeyError, TypeError, ValueError) as err:
        raise ParseError(lineno, f"bad episode record: {err}") from err
    inventory: set[str] = set()
    for sentence in support + query:
        inventory.update(sentence.spans().labels())
    check = verify_kshot(support, inventory, k)
    if not check:
        raise ParseError(
            lineno,
            f"episode fails k-shot check: {check.reason}"
            f" (label={check.label!r}, sentence={check.sentence_index})",
        )


def _cmd_episodes(args) -> int:
    if args.verify:
        with _open_in(args.input) as src:
            count = 0
            for lineno, obj in iter_jsonl(src):
                _verify_episode_line(lineno, obj)
                count += 1
        print(f"spanmark: verified {count} episodes", file=sys.stderr)
        return 0
    if args.k is None:
        raise SpanmarkError("--k is required when sampling")
    with _open_in(args.input) as src:
        sentences = list(_iter_sentences(src, args.format, args.conll_sep))
    if args.domain is not None:
        sentences = [s for s in sentences if s.domain == args.domain]
    corpus = Corpus(tuple(sentences), domain=args.domain)
    with _open_out(args.output) as dst:
        for i in range(args.n):
            episode = sample_episode(
                corpus, k=args.k, query_size=args.query, seed=args.seed + i
            )
            dst.write(dumps_record(_episode_record(episode)) + "\n")
    return 0


def _cmd_naturalize(args) -> int:
    labels: set[str] = set()
    if args.labels_file is not None:
        with _open_in(args.labels_file) as handle:
            labels.update(line.strip() for line in handle if line.strip())
    else:
        with _open_in(args.input) as src:
            for sentence in _iter_sentences(src, args.format, args.conll_sep):
                labels.update(sentence.spans().labels())
                if sentence.sentence_class is not None:
                    labels.add(sentence.sentence_class)
    overrides = load_label_table(args.table) if args.table else None
    mode = {
        "natural": "table+rules" if overrides else "rules",
        "original": "identity",
        "numeric": "numeric",
    }[args.mode]
    labelmap = build_labelmap(labels, overrides=overrides, mode=mode)
    with _open_out(args.output) as dst:
        for raw in sorted(labelmap.forward):
            dst.write(f"{raw}\t{labelmap.forward[raw]}\n")
    return 0


def _cmd_stats(args) -> int:
    with _open_in(args.input) as src:
        sentences = list(_iter_sentences(src, args.format, args.conll_sep))
    with _open_out(args.output) as dst:
        dst.write(dumps_record(corpus_stats(sentences).to_dict()) + "\n")
    return 0


def _cmd_corrupt(args) -> int:
    spec = CorruptionSpec(
        p_token_drop=args.p_drop,
        p_token_insert=args.p_insert,
        p_label_swap=args.p_swap,
        p_truncate=args.p_truncate,
        seed=args.seed,
    )
    with _open_in(args.input) as src, _open_out(args.output) as dst:
        for i, (lineno, obj) in enumerate(iter_jsonl(src)):
            if "text" not in obj:
                raise ParseError(lineno, "record has no text field")
            # One spec replays one roll sequence; each line needs its own.
            line_spec = dataclasses.replace(spec, seed=spec.seed + i)
            obj["text"] = corrupt(str(obj["text"]), line_spec)
            dst.write(dumps_record(obj) + "\n")
    return 0


def _cmd_subsample(args) -> int:
    with _open_in(args.input) as src:
        sentences = list(_iter_sentences(src, args.format, args.conll_sep))
    kept = subsample(Corpus(tuple(sentences)), args.fraction, seed=args.seed)
    with _open_out(args.output) as dst:
        for sentence in kept:
            dst.write(dumps_record(sentence_to_record(sentence)) + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="spanmark", description=__doc__)
    parser.add_argument(
        "--version", action="version",
        version=f"spanmark {__version__} (format grammar v{FORMAT_VERSION})",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("encode", help="tagged corpus -> span-marked text records")
    _add_io(p)
    p.add_argument("--labelmap", help="raw<TAB>natural label table")
    p.add_argument("--task", help="record this task name and emit prefixed inputs")
    p.add_argument("--text-only", action="store_true", help="emit bare text lines")
    p.add_argument("--no-escape", action="store_true", help="disable token escaping")
    p.set_defaults(func=_cmd_encode)

    p = sub.add_parser("decode", help="span-marked text records -> tagged corpus")
    _add_io(p, fmt=False)
    p.add_argument("--labelmap", help="raw<TAB>natural label table")
    p.add_argument("--tolerant", action="store_true", help="never fail, repair instead")
    p.add_argument(
        "--case-insensitive", action="store_true",
        help="case-fold token alignment in tolerant mode",
    )
    p.add_argument("--output-format", choices=("jsonl", "conll"), default="jsonl")
    p.set_defaults(func=_cmd_decode)

    p = sub.add_parser("eval", help="chunk F1 and intent accuracy")
    p.add_argument("--gold", required=True, help="gold corpus path or -")
    p.add_argument("--pred", default="-", help="prediction corpus path or -")
    p.add_argument("-o", "--output", default="-")
    p.add_argument("--format", choices=("jsonl", "conll"), default="jsonl")
    p.add_argument("--conll-sep", choices=("space", "tab"), default="space")
    p.add_argument("--table", action="store_true", help="plain-text table output")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("episodes", help="sample or verify k-shot episodes")
    _add_io(p)
    p.add_argument("--k", type=int, help="minimum chunk occurrences per label")
    p.add_argument("--n", type=int, default=100, help="number of episodes")
    p.add_argument("--query", type=int, default=20, help="query sentences per episode")
    p.add_argument("--seed", type=int, default=0, help="seed of the first episode")
    p.add_argument("--domain", help="restrict to sentences of this domain")
    p.add_argument(
        "--verify", action="store_true",
        help="read episode records and run the exhaustive k-shot check",
    )
    p.set_defaults(func=_cmd_episodes)

    p = sub.add_parser("naturalize", help="build a raw<TAB>natural label table")
    _add_io(p)
    p.add_argument("--mode", choices=("natural", "original", "numeric"), default="natural")
    p.add_argument("--table", help="override table applied before the rules")
    p.add_argument("--labels-file", help="plain list of raw labels, one per line")
    p.set_defaults(func=_cmd_naturalize)

    p = sub.add_parser("stats", help="corpus statistics as JSON")
    _add_io(p)
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("corrupt", help="damage the text field of encode records")
    _add_io(p, fmt=False)
    p.add_argument("--p-drop", type=float, default=0.0)
    p.add_argument("--p-insert", type=float, default=0.0)
    p.add_argument("--p-swap", type=float, default=0.0)
    p.add_argument("--p-truncate", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_corrupt)

    p = sub.add_parser("subsample", help="keep floor(fraction * n) sentences")
    _add_io(p)
    p.add_argument("--fraction", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_subsample)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (SpanmarkError, ValueError) as err:
        print(f"spanmark: {err}", file=sys.stderr)
        return 1
    except BrokenPipeError:
        return 2
    except OSError as err:
        print(f"spanmark: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
