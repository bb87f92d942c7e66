"""
Fan-out of independent per-sample checks
Each case carries its own derived seed, so results do not depend on the worker count
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Callable, List, Optional

from config import Config
from exceptions import AmplituhedronError

logger = logging.getLogger(__name__)


@dataclass
class CaseResult:
    index: int
    seed: int
    value: Any = None
    error: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.error is None


class SampleRunner:
    def __init__(self, workers: int = Config.WORKERS):
        self.workers = max(1, workers)

    def _run_one(self, fn: Callable[[int, int], Any], index: int, seed: int) -> CaseResult:
        try:
            return CaseResult(index, seed, value=fn(index, seed))
        except AmplituhedronError as e:
            logger.debug(f"❌ case {index} (seed {seed}) raised {type(e).__name__}: {e}")
            return CaseResult(index, seed, error=f"{type(e).__name__}: {e}")

    def run(self, fn: Callable[[int, int], Any], seeds: List[int]) -> List[CaseResult]:
        """fn(index, seed) for every seed; results come back in index order"""
        if self.workers == 1:
            return [self._run_one(fn, i, s) for i, s in enumerate(seeds)]
        with ThreadPoolExecutor(max_workers=self.workers) as pool:
            futures = [pool.submit(self._run_one, fn, i, s) for i, s in enumerate(seeds)]
            results = [f.result() for f in futures]
        return sorted(results, key=lambda r: r.index)
