import logging
import time

logger = logging.getLogger(__name__)


class SearchMetrics:
    """Node and timing tally for one obstruction search"""

    def __init__(self, label: str, budget: int):
        self.label = label
        self.budget = budget
        self.nodes = 0
        self._start = None
        self.elapsed = 0.0

    def __enter__(self) -> "SearchMetrics":
        self._start = time.perf_counter()
        logger.info(f"{self.label}: search started (budget {self.budget} nodes)")
        return self

    def __exit__(self, exc_type, exc, tb) -> None:
        self.elapsed = time.perf_counter() - self._start
        if exc_type is None:
            logger.info(f"{self.label}: {self.nodes} nodes in {self.elapsed:.3f}s")
        else:
            logger.error(f"{self.label}: search failed after {self.nodes} nodes: {str(exc)}")

    def add(self, nodes: int) -> None:
        self.nodes += nodes
