"""
Preprocessing module initialization.
"""

from .tokens import TagToken, Sentence, TAG_SURFACES, is_tag
from .text_preprocessor import (
    PrepConfig,
    PrepSummary,
    TextPreprocessor,
    apply_blacklist,
    clean_corpus,
    load_blacklist,
    preprocess,
    tag_rare_words,
    write_sentences,
)

__all__ = [
    'TagToken', 'Sentence', 'TAG_SURFACES', 'is_tag',
    'PrepConfig', 'PrepSummary', 'TextPreprocessor',
    'apply_blacklist', 'clean_corpus', 'load_blacklist', 'preprocess',
    'tag_rare_words', 'write_sentences',
]
