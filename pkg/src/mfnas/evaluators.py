"""Accuracy sources: synthetic surrogate, lookup table, external process.

All evaluators return an Evaluation with accuracy in [0, 1]. The surrogate is
a pure function of (genotype, spec) so replayed runs are bit-stable; the
external evaluator speaks the "mfnas-eval/1" line-delimited JSON protocol
over a child process's stdio.
"""

from __future__ import annotations

import csv
import hashlib
import json
import selectors
import shlex
import subprocess
import time
from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import (EvaluationFailed, EvaluatorDied, EvaluatorTimeout, InvalidSpace,
                     MissingEntry, ProtocolError)
from .space import PAPER_SPACE, Genotype, SpaceSpec, encode, validate_genotype

PROTOCOL_NAME = "mfnas-eval/1"


@dataclass(frozen=True)
class Evaluation:
    genotype: Genotype
    accuracy: float
    source: str
    wall_time: float


@dataclass(frozen=True)
class SurrogateSpec:
    """Pattern-match accuracy landscape.

    Accuracy rises by `step` for every slot agreeing with `target`, from
    `base`, plus optional deterministic hash noise. The target deliberately
    mixes expensive kernels so the accuracy optimum conflicts with the size
    optimum.
    """

    target: Genotype = (0, 1, 2, 0, 1, 2, 0, 1, 2)
    base: float = 0.50
    step: float = 0.03
    noise_amplitude: float = 0.0
    noise_seed: int = 0

    def __post_init__(self):
        if self.noise_amplitude < 0:
            raise InvalidSpace("noise_amplitude must be non-negative")
        if self.base + len(self.target) * self.step + self.noise_amplitude > 1.0:
            raise InvalidSpace("surrogate range exceeds [0, 1]")


DEFAULT_SURROGATE = SurrogateSpec()


def _hash_unit(seed: int, digits: str) -> float:
    """Deterministic value in [-1, 1) derived from sha256(seed, genotype digits)."""
    h = hashlib.sha256(f"mfnas:{seed}:{digits}".encode()).digest()
    n = int.from_bytes(h[:8], "big")
    return (n >> 11) / float(2 ** 53) * 2.0 - 1.0


def surrogate_accuracy(g: Sequence[int], spec: SurrogateSpec = DEFAULT_SURROGATE) -> float:
    """base + step * (slots matching target) + hash noise, clamped to [0, 1]."""
    g = tuple(int(v) for v in g)
    if len(g) != len(spec.target):
        raise InvalidSpace(f"genotype length {len(g)} != target length {len(spec.target)}")
    matches = sum(a == b for a, b in zip(g, spec.target))
    acc = spec.base + spec.step * matches
    if spec.noise_amplitude:
        acc += spec.noise_amplitude * _hash_unit(spec.noise_seed, "".join(map(str, g)))
    return min(1.0, max(0.0, acc))


class SurrogateEvaluator:
    """In-process deterministic evaluator."""

    source = "surrogate"

    def __init__(self, spec: SurrogateSpec = DEFAULT_SURROGATE):
        self.spec = spec

    def evaluate(self, g: Genotype) -> Evaluation:
        return Evaluation(tuple(g), surrogate_accuracy(g, self.spec), self.source, 0.0)

    def close(self) -> None:
        pass


def load_table(path) -> dict[int, float]:
    """Read an 'arch_id,accuracy' CSV into a lookup dict."""
    table: dict[int, float] = {}
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != ["arch_id", "accuracy"]:
            raise ProtocolError(f"bad table header {reader.fieldnames}")
        for row in reader:
            table[int(row["arch_id"])] = float(row["accuracy"])
    return table


def write_table(path, table: Mapping[int, float]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["arch_id", "accuracy"])
        for arch_id in sorted(table):
            writer.writerow([arch_id, repr(table[arch_id])])


def table_accuracy(g: Sequence[int], table: Mapping[int, float],
                   space: SpaceSpec = PAPER_SPACE) -> float:
    """Exact lookup by arch_id; absent entries are an error, never interpolated."""
    arch_id = encode(g, space)
    try:
        return table[arch_id]
    except KeyError:
        raise MissingEntry(f"arch_id {arch_id} not in table") from None


class TableEvaluator:
    source = "table"

    def __init__(self, table: Mapping[int, float], space: SpaceSpec = PAPER_SPACE):
        self.table = dict(table)
        self.space = space

    @classmethod
    def from_csv(cls, path, space: SpaceSpec = PAPER_SPACE) -> "TableEvaluator":
        return cls(load_table(path), space)

    def evaluate(self, g: Genotype) -> Evaluation:
        return Evaluation(tuple(g), table_accuracy(g, self.table, self.space), self.source, 0.0)

    def close(self) -> None:
        pass


class ExternalSession:
    """Serial request/response channel to a child evaluator process.

    Not safe for concurrent callers; use one session per worker.
    """

    source = "external"

    def __init__(self, command: str | Sequence[str], space: SpaceSpec = PAPER_SPACE,
                 timeout: float = 60.0):
        self.space = space
        self.timeout = timeout
        argv = shlex.split(command) if isinstance(command, str) else list(command)
        self._proc = subprocess.Popen(argv, stdin=subprocess.PIPE, stdout=subprocess.PIPE)
        self._buffer = b""
        self._selector = selectors.DefaultSelector()
        self._selector.register(self._proc.stdout, selectors.EVENT_READ)
        self._next_id = 0
        hello = self._read_message(time.monotonic() + timeout)
        if hello.get("protocol") != PROTOCOL_NAME:
            self.close()
            raise ProtocolError(f"bad handshake: {hello!r}")

    def evaluate(self, g: Genotype) -> Evaluation:
        g = validate_genotype(g, self.space)
        request_id = self._next_id
        self._next_id += 1
        request = {"id": request_id,
                   "genotype": list(g),
                   "kernels": [self.space.kernel_of(v) for v in g]}
        start = time.monotonic()
        self._send(request)
        response = self._read_message(start + self.timeout)
        if response.get("id") != request_id:
            raise ProtocolError(f"response id {response.get('id')} != request id {request_id}")
        if "error" in response:
            raise EvaluationFailed(str(response["error"]))
        accuracy = response.get("accuracy")
        if not isinstance(accuracy, (int, float)) or not 0.0 <= accuracy <= 1.0:
            raise ProtocolError(f"accuracy {accuracy!r} outside [0, 1]")
        return Evaluation(g, float(accuracy), self.source, time.monotonic() - start)

    def close(self) -> None:
        if self._proc.poll() is None:
            try:
                self._proc.stdin.close()
                self._proc.wait(timeout=5)
            except Exception:
                self._proc.kill()
                self._proc.wait()
        self._selector.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()

    def _send(self, message: dict) -> None:
        if self._proc.poll() is not None:
            raise EvaluatorDied(f"evaluator exited with code {self._proc.returncode}")
        try:
            self._proc.stdin.write((json.dumps(message) + "\n").encode())
            self._proc.stdin.flush()
        except BrokenPipeError:
            raise EvaluatorDied("evaluator closed its input") from None

    def _read_message(self, deadline: float) -> dict:
        line = self._read_line(deadline)
        try:
            message = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ProtocolError(f"malformed JSON from evaluator: {line[:200]!r}") from exc
        if not isinstance(message, dict):
            raise ProtocolError(f"expected JSON object, got {message!r}")
        return message

    def _read_line(self, deadline: float) -> bytes:
        while b"\n" not in self._buffer:
            remaining = deadline - time.monotonic()
            if remaining <= 0:
                raise EvaluatorTimeout(f"no response within {self.timeout} s")
            if not self._selector.select(timeout=remaining):
                continue
            chunk = self._proc.stdout.read1(65536)
            if not chunk:
                code = self._proc.wait()
                raise EvaluatorDied(f"evaluator exited with code {code}")
            self._buffer += chunk
        line, self._buffer = self._buffer.split(b"\n", 1)
        return line
