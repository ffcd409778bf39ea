"""
Pruning module initialization.
"""

from .pruner import PruneParams, PrunedNgrams, PruneReport, prune, trigram_score, format_prune_report

__all__ = ['PruneParams', 'PrunedNgrams', 'PruneReport', 'prune', 'trigram_score', 'format_prune_report']
