"""
Evaluation module initialization.
"""

from .bench import BenchReport, LinearFit, TimedEngine, bench, fit_linearity
from .evalkit import (
    EvalReport,
    TestSet,
    TestSetStats,
    TypingTrace,
    evaluate,
    ksr,
    nwp_rate,
    simulate_typing,
)
from .synthetic import synthetic_corpus, synthetic_word

__all__ = [
    'BenchReport', 'LinearFit', 'TimedEngine', 'bench', 'fit_linearity',
    'EvalReport', 'TestSet', 'TestSetStats', 'TypingTrace', 'evaluate', 'ksr', 'nwp_rate',
    'simulate_typing', 'synthetic_corpus', 'synthetic_word',
]
