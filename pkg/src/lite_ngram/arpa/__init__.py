"""
ARPA module initialization.
"""

from .arpa_io import (
    ArpaEntry,
    ArpaModel,
    NO_PROBABILITY_LOG10,
    assign_scores,
    load_arpa,
    read_arpa,
    save_arpa,
    write_arpa,
)

__all__ = [
    'ArpaEntry', 'ArpaModel', 'NO_PROBABILITY_LOG10', 'assign_scores',
    'load_arpa', 'read_arpa', 'save_arpa', 'write_arpa',
]
