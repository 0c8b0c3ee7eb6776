"""Wall-time bookkeeping for named processing stages."""

from __future__ import annotations

import logging
import time
from contextlib import contextmanager
from typing import Iterator

logger = logging.getLogger(__name__)


class StageTimer:
    """Accumulates elapsed seconds per stage name.

    Use :meth:`stage` as a context manager around each step; a stage entered
    twice accumulates.
    """

    def __init__(self) -> None:
        self._elapsed: dict[str, float] = {}

    @contextmanager
    def stage(self, name: str) -> Iterator[None]:
        started = time.perf_counter()
        try:
            yield
        finally:
            dt = time.perf_counter() - started
            self._elapsed[name] = self._elapsed.get(name, 0.0) + dt
            logger.debug("Stage %s took %.3fs", name, dt)

    @property
    def elapsed(self) -> dict[str, float]:
        return dict(self._elapsed)

    @property
    def total(self) -> float:
        return sum(self._elapsed.values())
