"""Drive the spanmark CLI over JSONL std streams.

The adapter holds no tagging or markup logic of its own. Every output byte
comes from the CLI, so results match shell invocations exactly and the text
format stays single-sourced.
"""

import json
import os
import shutil
import subprocess
import tempfile
import threading
from collections.abc import Iterable, Iterator

DIRECTIONS = ("to_augmented", "to_bio")


class AdapterError(RuntimeError):
    """A CLI call failed; carries argv, exit code and captured stderr."""

    def __init__(self, argv, returncode: int, stderr: str = ""):
        self.argv = tuple(argv)
        self.returncode = returncode
        self.stderr = stderr
        detail = stderr.strip() or "no diagnostics"
        super().__init__(f"{' '.join(self.argv)} exited {returncode}: {detail}")


def _dumps(record) -> str:
    # Same serialization the CLI uses for its own JSONL output.
    return json.dumps(record, ensure_ascii=False)


class AdapterSession:
    """One sequential lane of CLI calls for a training pipeline worker.

    A session runs at most one pipeline at a time and is not shareable
    across concurrent callers; give each worker its own session. The
    executable must answer ``--version`` before anything else runs.
    """

    def __init__(
        self,
        executable: str | tuple[str, ...] = "spanmark",
        labelmap: str | os.PathLike | None = None,
        timeout: float = 300.0,
    ):
        if isinstance(executable, str):
            executable = (executable,)
        self.executable = tuple(executable)
        self.labelmap = labelmap
        self.timeout = timeout
        self._version: str | None = None
        self._busy = False

    def version(self) -> str:
        """The CLI version banner, probed once and cached."""
        if self._version is None:
            if len(self.executable) == 1 and shutil.which(self.executable[0]) is None:
                raise AdapterError(self.executable, 127, "executable not found")
            argv = [*self.executable, "--version"]
            proc = subprocess.run(
                argv, capture_output=True, text=True, timeout=self.timeout
            )
            if proc.returncode != 0:
                raise AdapterError(argv, proc.returncode, proc.stderr)
            self._version = proc.stdout.strip()
        return self._version

    def convert_dataset(
        self,
        records: Iterable[dict],
        labelmap: str | os.PathLike | None = None,
        *,
        direction: str,
    ) -> Iterator[dict]:
        """Stream records through ``encode`` or ``decode``.

        ``to_augmented`` turns tagged records into span-marked text records;
        ``to_bio`` turns text records back into tagged ones. Parsed output
        records are yielded as the CLI emits them, so arbitrarily long
        streams convert in bounded memory.
        """
        if direction not in DIRECTIONS:
            raise ValueError(f"direction must be one of {DIRECTIONS}")
        self.version()
        argv = [*self.executable, "encode" if direction == "to_augmented" else "decode"]
        labelmap = labelmap if labelmap is not None else self.labelmap
        if labelmap is not None:
            argv += ["--labelmap", str(labelmap)]
        return self._stream(argv, records)

    def _stream(self, argv: list[str], records: Iterable[dict]) -> Iterator[dict]:
        if self._busy:
            raise AdapterError(argv, -1, "session already has a live pipeline")
        self._busy = True
        completed = False
        returncode = 0
        stderr_text = ""
        feed_error: list[BaseException] = []
        with tempfile.TemporaryFile(mode="w+", encoding="utf-8") as errs:
            proc = subprocess.Popen(
                argv,
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                stderr=errs,
                text=True,
            )

            def feed():
                try:
                    for record in records:
                        proc.stdin.write(_dumps(record) + "\n")
                except BrokenPipeError:
                    pass  # child exited early; its stderr explains
                except BaseException as err:
                    feed_error.append(err)
                finally:
                    try:
                        proc.stdin.close()
                    except (BrokenPipeError, OSError):
                        pass

            writer = threading.Thread(target=feed, daemon=True)
            writer.start()
            try:
                for line in proc.stdout:
                    if line.strip():
                        yield json.loads(line)
                completed = True
            finally:
                proc.stdout.close()
                writer.join(timeout=self.timeout)
                try:
                    returncode = proc.wait(timeout=self.timeout)
                except subprocess.TimeoutExpired:
                    proc.kill()
                    proc.wait()
                    returncode = -9
                    stderr_text = f"killed after {self.timeout}s timeout"
                if not stderr_text:
                    errs.seek(0)
                    stderr_text = errs.read()
                self._busy = False
        if feed_error:
            raise feed_error[0]
        if completed and returncode != 0:
            raise AdapterError(argv, returncode, stderr_text)

    def score_predictions(
        self, gold_records: Iterable[dict], predicted_texts: Iterable[str]
    ) -> dict:
        """Tolerantly decode predicted texts and score them against gold.

        Exactly ``decode --tolerant | eval --gold gold.jsonl --pred -`` over
        OS pipes; returns the report parsed from the eval JSON line. Raises
        ValueError when the two iterables have different lengths.
        """
        self.version()
        if self._busy:
            raise AdapterError(self.executable, -1, "session already has a live pipeline")
        self._busy = True
        try:
            with tempfile.TemporaryDirectory(prefix="spanmark-adapter-") as tmp:
                gold_path = os.path.join(tmp, "gold.jsonl")
                with open(gold_path, "w", encoding="utf-8") as gold_file:
                    for record in gold_records:
                        gold_file.write(_dumps(record) + "\n")
                return self._pipe_score(tmp, gold_path, predicted_texts)
        finally:
            self._busy = False

    def _pipe_score(self, tmp: str, gold_path: str, predicted_texts) -> dict:
        decode_argv = [*self.executable, "decode", "--tolerant"]
        if self.labelmap is not None:
            decode_argv += ["--labelmap", str(self.labelmap)]
        eval_argv = [*self.executable, "eval", "--gold", gold_path, "--pred", "-"]
        with open(os.path.join(tmp, "decode.err"), "w+", encoding="utf-8") as derr, \
                open(os.path.join(tmp, "eval.err"), "w+", encoding="utf-8") as eerr:
            decoder = subprocess.Popen(
                decode_argv,
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                stderr=derr,
                text=True,
            )
            scorer = subprocess.Popen(
                eval_argv,
                stdin=decoder.stdout,
                stdout=subprocess.PIPE,
                stderr=eerr,
                text=True,
            )
            decoder.stdout.close()  # the scorer owns that end now
            try:
                with open(gold_path, encoding="utf-8") as src, decoder.stdin:
                    for line, text in zip(src, predicted_texts, strict=True):
                        record = {"tokens": json.loads(line)["tokens"], "text": text}
                        decoder.stdin.write(_dumps(record) + "\n")
            except BaseException:
                decoder.kill()
                scorer.kill()
                raise
            out = scorer.stdout.read()
            decode_rc = decoder.wait(timeout=self.timeout)
            eval_rc = scorer.wait(timeout=self.timeout)
            if decode_rc != 0:
                derr.seek(0)
                raise AdapterError(decode_argv, decode_rc, derr.read())
            if eval_rc != 0:
                eerr.seek(0)
                raise AdapterError(eval_argv, eval_rc, eerr.read())
        return json.loads(out)
