"""
Lite Ngram - pruned trigram language models for predictive text

This package builds heavily pruned trigram and class-trigram models from raw
text, stores them in a compact multi-file binary format with quantised
probabilities, and serves word completion and next word prediction queries.
"""

__version__ = "1.0.0"
__author__ = "Lite Ngram Team"
