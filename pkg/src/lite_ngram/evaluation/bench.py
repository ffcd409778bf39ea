"""
Load-time and suggestion-latency benchmarks.
"""

import logging
import os
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..engine.engine import Engine
from .evalkit import SuggestionSource, TestSet, simulate_typing

logger = logging.getLogger(__name__)

MIN_TRIALS = 3


class TimedEngine:
    """Engine wrapper recording the latency of every query."""
    
    def __init__(self, engine: SuggestionSource):
        self.engine = engine
        self.nwp_seconds: List[float] = []
        self.wc_seconds: List[float] = []

    def next_word_prediction(self, ctx: Sequence[str], k: Optional[int] = None) -> list:
        start = time.perf_counter()
        result = self.engine.next_word_prediction(ctx, k=k)
        self.nwp_seconds.append(time.perf_counter() - start)
        return result

    def word_completion(self, ctx: Sequence[str], prefix: str, k: Optional[int] = None) -> list:
        start = time.perf_counter()
        result = self.engine.word_completion(ctx, prefix, k=k)
        self.wc_seconds.append(time.perf_counter() - start)
        return result

    @property
    def queries(self) -> int:
        return len(self.nwp_seconds) + len(self.wc_seconds)

    def mean_ms(self) -> Optional[float]:
        """Mean over all WC and NWP queries, weighted by their counts."""
        if not self.queries:
            return None
        return (sum(self.nwp_seconds) + sum(self.wc_seconds)) / self.queries * 1000

    def timing(self) -> Dict[str, Any]:
        """
        Latency summary of the recorded queries.
        
        Returns:
            Dict with the query count and mean, p50 and p95 milliseconds,
            overall and per query kind; None where no sample exists
        """
        every = self.nwp_seconds + self.wc_seconds
        p50, p95 = _percentiles_ms(every)
        nwp_p50, nwp_p95 = _percentiles_ms(self.nwp_seconds)
        wc_p50, wc_p95 = _percentiles_ms(self.wc_seconds)
        return {
            "queries": self.queries,
            "mean_ms": self.mean_ms(),
            "p50_ms": p50,
            "p95_ms": p95,
            "nwp_mean_ms": _mean_ms(self.nwp_seconds),
            "nwp_p50_ms": nwp_p50,
            "nwp_p95_ms": nwp_p95,
            "wc_mean_ms": _mean_ms(self.wc_seconds),
            "wc_p50_ms": wc_p50,
            "wc_p95_ms": wc_p95,
        }


def _mean_ms(samples: List[float]) -> Optional[float]:
    return float(np.mean(samples)) * 1000 if samples else None


def _percentiles_ms(samples: List[float]) -> Tuple[Optional[float], Optional[float]]:
    if not samples:
        return None, None
    p50, p95 = np.percentile(samples, [50, 95])
    return float(p50) * 1000, float(p95) * 1000


@dataclass
class BenchReport:
    trials: int
    load_ms: List[float]
    load_median_ms: float
    load_mean_ms: float
    queries: int = 0
    mean_suggestion_ms: Optional[float] = None
    p50_suggestion_ms: Optional[float] = None
    p95_suggestion_ms: Optional[float] = None
    nwp_mean_ms: Optional[float] = None
    nwp_p95_ms: Optional[float] = None
    wc_mean_ms: Optional[float] = None
    wc_p95_ms: Optional[float] = None
    rom_bytes: Dict[str, int] = field(default_factory=dict)
    resident_bytes: Optional[int] = None

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def bench(engine_factory: Callable[[], Engine], testset: TestSet, trials: int = 5,
          k: int = 3, model_files: Sequence[Union[str, Path]] = ()) -> BenchReport:
    """
    Time model loading and the queries of a full typing simulation.
    
    Args:
        engine_factory: Loads a fresh engine per call
        testset: Test set driving the queries
        trials: Load repetitions (at least 3)
        k: Suggestions per query
        model_files: Files whose sizes are reported as ROM
        
    Returns:
        BenchReport; latency fields are None when no query was issued
    """
    if trials < MIN_TRIALS:
        raise ValueError(f"trials must be at least {MIN_TRIALS}")

    load_seconds = []
    engine: Optional[Engine] = None
    for trial in range(trials):
        start = time.perf_counter()
        engine = engine_factory()
        load_seconds.append(time.perf_counter() - start)
        logger.debug(f"Load trial {trial + 1}/{trials}: {load_seconds[-1] * 1000:.2f} ms")
    assert engine is not None

    timed = TimedEngine(engine)
    for words in testset.tokenized():
        simulate_typing(words, timed, k)
    timing = timed.timing()

    report = BenchReport(
        trials=trials,
        load_ms=[s * 1000 for s in load_seconds],
        load_median_ms=float(np.median(load_seconds)) * 1000,
        load_mean_ms=float(np.mean(load_seconds)) * 1000,
        queries=timed.queries,
        mean_suggestion_ms=timing["mean_ms"],
        p50_suggestion_ms=timing["p50_ms"],
        p95_suggestion_ms=timing["p95_ms"],
        nwp_mean_ms=timing["nwp_mean_ms"],
        nwp_p95_ms=timing["nwp_p95_ms"],
        wc_mean_ms=timing["wc_mean_ms"],
        wc_p95_ms=timing["wc_p95_ms"],
        rom_bytes={Path(path).name: os.path.getsize(path) for path in model_files},
        resident_bytes=engine.resident_bytes(),
    )
    logger.info(f"Bench: median load {report.load_median_ms:.2f} ms over {trials} trials, "
                f"{report.queries} queries")
    return report


@dataclass(frozen=True)
class LinearFit:
    slope: float
    intercept: float
    r_squared: float


def fit_linearity(sizes: Sequence[float], times: Sequence[float]) -> LinearFit:
    """
    Least-squares line through (size, time) points.
    
    Raises:
        ValueError: With fewer than two points
    """
    if len(sizes) != len(times) or len(sizes) < 2:
        raise ValueError("need at least two (size, time) pairs")
    x = np.asarray(sizes, dtype=np.float64)
    y = np.asarray(times, dtype=np.float64)
    slope, intercept = np.polyfit(x, y, 1)
    residual = float(np.sum((y - (slope * x + intercept)) ** 2))
    total = float(np.sum((y - y.mean()) ** 2))
    r_squared = 1.0 - residual / total if total > 0 else 1.0
    return LinearFit(slope=float(slope), intercept=float(intercept), r_squared=r_squared)
