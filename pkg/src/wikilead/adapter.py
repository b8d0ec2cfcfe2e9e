"""Bridge to an external abstractive model running as a child process.

Requests go to the child's stdin as ``{"id": int, "input": str}`` lines and
responses come back on its stdout as ``{"id": int, "summary": str}`` lines,
in any order.  The child signals completion by closing stdout.
"""

from __future__ import annotations

import json
import logging
import shlex
import subprocess
import threading
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Union

from wikilead.extractive import JOINER, SEP
from wikilead.text import normalize, tokenize_words

logger = logging.getLogger(__name__)

TokenCounter = Callable[[str], int]


class AdapterError(Exception):
    """The external model broke the exchange protocol or failed."""


@dataclass(frozen=True)
class AbstractiveConfig:
    J: int = 768
    K_max: int = 256
    K_min: int = 20
    command: Union[str, Sequence[str], None] = None

    def __post_init__(self):
        if self.J <= 0:
            raise ValueError("J must be positive")
        if not 0 < self.K_min < self.K_max:
            raise ValueError("need 0 < K_min < K_max")

    def argv(self) -> List[str]:
        if not self.command:
            raise ValueError("no external command configured")
        if isinstance(self.command, str):
            return shlex.split(self.command)
        return list(self.command)


@dataclass(frozen=True)
class Summary:
    id: int
    text: str
    n_tokens: int
    within_bounds: bool


def word_tokens(text: str) -> int:
    return len(tokenize_words(normalize(text)))


def truncate_input(assembled: str, J: int, token_counter: Optional[TokenCounter] = None) -> str:
    """Longest whitespace-boundary prefix holding at most ``J`` tokens.

    A separator left dangling at the cut is dropped.  For an assembled
    extract, raises if the title (text before the first separator) alone
    exceeds ``J``.
    """
    if J < 1:
        raise ValueError("J must be >= 1")
    count = token_counter or word_tokens
    if JOINER in assembled:
        title = assembled.split(JOINER, 1)[0]
        if count(title) > J:
            raise ValueError(f"J={J} is smaller than the title's {count(title)} tokens")
    if count(assembled) <= J:
        return assembled

    pieces = assembled.split(" ")
    if token_counter is None:
        kept, n = 0, 0
        for piece in pieces:
            n += len(tokenize_words(piece))
            if n > J:
                break
            kept += 1
    else:
        # largest k with count(prefix_k) <= J, assuming counts grow with k
        lo, hi = 0, len(pieces)
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if count(" ".join(pieces[:mid])) <= J:
                lo = mid
            else:
                hi = mid - 1
        kept = lo
    while kept and pieces[kept - 1] in (SEP, ""):
        kept -= 1
    return " ".join(pieces[:kept])


def _feed(stdin, inputs: Sequence[str], errors: list) -> None:
    try:
        for i, text in enumerate(inputs):
            stdin.write(json.dumps({"id": i, "input": text}, ensure_ascii=False) + "\n")
        stdin.close()
    except (BrokenPipeError, OSError) as exc:
        errors.append(exc)


def invoke_external(config: AbstractiveConfig, inputs: Sequence[str]) -> List[Summary]:
    """Run the configured command over ``inputs`` and collect summaries by id.

    Summaries outside ``[K_min, K_max]`` tokens are flagged and logged, not
    dropped.
    """
    proc = subprocess.Popen(
        config.argv(),
        stdin=subprocess.PIPE,
        stdout=subprocess.PIPE,
        stderr=subprocess.PIPE,
        text=True,
        encoding="utf-8",
    )
    feed_errors: list = []
    writer = threading.Thread(target=_feed, args=(proc.stdin, inputs, feed_errors), daemon=True)
    writer.start()
    stderr_chunks: List[str] = []
    drain = threading.Thread(target=lambda: stderr_chunks.append(proc.stderr.read()), daemon=True)
    drain.start()

    received: Dict[int, str] = {}
    protocol_error: Optional[str] = None
    for line_no, line in enumerate(proc.stdout, start=1):
        line = line.strip()
        if not line or protocol_error:
            continue
        try:
            obj = json.loads(line)
            idx, summary = obj["id"], obj["summary"]
            if not isinstance(idx, int) or not isinstance(summary, str):
                raise TypeError
        except (ValueError, KeyError, TypeError):
            protocol_error = f"bad response line {line_no}: {line[:80]!r}"
            continue
        if idx in received or not 0 <= idx < len(inputs):
            protocol_error = f"unexpected or repeated id {idx}"
            continue
        received[idx] = summary

    returncode = proc.wait()
    writer.join()
    drain.join()
    diagnostics = "".join(stderr_chunks).strip()
    if returncode != 0:
        raise AdapterError(
            f"external model exited with status {returncode}"
            + (f": {diagnostics[-2000:]}" if diagnostics else "")
        )
    if protocol_error:
        raise AdapterError(protocol_error)
    missing = [i for i in range(len(inputs)) if i not in received]
    if missing:
        raise AdapterError(f"no summary for id {missing[0]} ({len(missing)} missing)")

    out = []
    for i in range(len(inputs)):
        n = word_tokens(received[i])
        ok = config.K_min <= n <= config.K_max
        if not ok:
            logger.warning(
                "summary %d has %d tokens, outside [%d, %d]", i, n, config.K_min, config.K_max
            )
        out.append(Summary(i, received[i], n, ok))
    return out


def run_abstractive(
    config: AbstractiveConfig,
    assembled: Sequence[str],
    token_counter: Optional[TokenCounter] = None,
) -> List[Summary]:
    """Truncate every extract to ``J`` tokens and send the batch to the model."""
    return invoke_external(config, [truncate_input(a, config.J, token_counter) for a in assembled])
