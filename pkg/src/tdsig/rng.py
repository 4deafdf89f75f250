import random
from collections import deque
from typing import Iterable, Optional, Protocol

from tdsig.errors import TapeExhausted


class RandomSource(Protocol):
    def randrange(self, start: int, stop: int) -> int: ...

    def getrandbits(self, k: int) -> int: ...


class Tape:
    """
    Scripted randomness: pinned integers handed out in draw order.

    Values are returned verbatim and are not checked against the requested
    range, so exponents larger than q (as in the worked example) replay exactly.
    """

    def __init__(self, values: Iterable[int], label: str = "tape"):
        self.label = label
        self._values = deque(int(v) for v in values)

    def _next(self) -> int:
        if not self._values:
            raise TapeExhausted(f"randomness tape {self.label!r} is exhausted")
        return self._values.popleft()

    def randrange(self, start: int, stop: Optional[int] = None) -> int:
        return self._next()

    def getrandbits(self, k: int) -> int:
        return self._next()


def live_source(seed: Optional[str] = None, label: str = "") -> RandomSource:
    if seed is None:
        return random.SystemRandom()
    return random.Random(f"{seed}:{label}")
