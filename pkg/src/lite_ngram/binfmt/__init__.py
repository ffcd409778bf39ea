"""
Binary model format: vocabulary trie, compressed n-gram data file and class file.
"""

from .class_file import class_file_size, decode_class_model, encode_class_model
from .data_file import (
    NgramTables,
    build_tables,
    decode_payload,
    deserialize_model,
    encode_tables,
    payload_size,
    section_sizes,
    serialize_model,
    tables_to_arpa,
)
from .fwo import FwoTables, build_fwo
from .quantizer import QuantParams, dequantization_table, dequantize, quantize, quantize_log10
from .vocab_trie import VocabTrie, build_vocab_trie

__all__ = [
    'class_file_size', 'decode_class_model', 'encode_class_model',
    'NgramTables', 'build_tables', 'decode_payload', 'deserialize_model', 'encode_tables',
    'payload_size', 'section_sizes', 'serialize_model', 'tables_to_arpa',
    'FwoTables', 'build_fwo',
    'QuantParams', 'dequantization_table', 'dequantize', 'quantize', 'quantize_log10',
    'VocabTrie', 'build_vocab_trie',
]
