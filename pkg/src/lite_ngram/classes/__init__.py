"""
Class model module initialization.
"""

from .class_model import (
    OTHER_LABEL,
    ClassAssignment,
    ClassLexicon,
    ClassModel,
    build_class_stats,
    build_word_class,
    class_probability,
    load_lexicon,
)

__all__ = [
    'OTHER_LABEL', 'ClassAssignment', 'ClassLexicon', 'ClassModel',
    'build_class_stats', 'build_word_class', 'class_probability', 'load_lexicon',
]
