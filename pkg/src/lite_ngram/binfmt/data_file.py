"""
Compressed n-gram data file.

Layout of the zlib payload (little-endian):

    header      magic "OPNG", version, n_uni, n_bi, n_tri, K, lambda*1000, r*1000
    unigrams    n_uni quantised scores (2 bytes), ID implicit by position
    bigrams     groups by context ID: ctx (3) + count (2) + [word (3), q (2)] best-first
    trigrams    groups by context bigram: index of the (w1, w2) entry in the
                flattened bigram block (3) + count (2) + successors as above
    fwo pred    K word IDs (3 bytes each), 0xFFFFFF padded
    fwo compl   entry count (2) + per entry: code point (4) + K padded word IDs
"""

import logging
import struct
import zlib
from collections import defaultdict
from dataclasses import dataclass, field
from typing import DefaultDict, Dict, List, Optional, Tuple

import numpy as np

from ..arpa.arpa_io import SCORE_DECIMALS, ArpaEntry, ArpaModel
from ..config.model_config import COMPRESSION_LEVEL
from ..counting.vocabulary import Vocabulary
from ..errors import ModelFormatError, SerializationError
from .codec import (
    ID_SENTINEL,
    MAX_CODEPOINT,
    U16_MAX,
    ByteCursor,
    pack_padded_ids,
    pack_u16,
    pack_u24,
    pack_u32,
)
from .fwo import FwoTables
from .quantizer import QuantParams, quantize_log10, quantize_log10_array

logger = logging.getLogger(__name__)

MAGIC = b"OPNG"
VERSION = 1
HEADER = struct.Struct("<4sBIIIHHH")
FILE_KIND = "ngram"

# (word ID, quantised score)
Successor = Tuple[int, int]
Group = Tuple[int, List[Successor]]


@dataclass(eq=False)
class NgramTables:
    """Parsed data-file content; identical whether built in memory or decoded."""
    
    k: int
    lam_milli: int
    r_milli: int
    unigrams: np.ndarray
    bigrams: List[Group] = field(default_factory=list)
    trigrams: List[Group] = field(default_factory=list)
    fwo_prediction: List[int] = field(default_factory=list)
    fwo_completion: Dict[str, List[int]] = field(default_factory=dict)

    @property
    def n_uni(self) -> int:
        return int(len(self.unigrams))

    @property
    def n_bi(self) -> int:
        return sum(len(successors) for _, successors in self.bigrams)

    @property
    def n_tri(self) -> int:
        return sum(len(successors) for _, successors in self.trigrams)

    @property
    def lam(self) -> float:
        return self.lam_milli / 1000

    @property
    def r(self) -> float:
        return self.r_milli / 1000

    def bigram_entries(self) -> List[Tuple[int, int]]:
        """(context, word) pairs in flattened bigram-block order."""
        return [(ctx, word_id) for ctx, successors in self.bigrams for word_id, _ in successors]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, NgramTables):
            return NotImplemented
        return (
            (self.k, self.lam_milli, self.r_milli) == (other.k, other.lam_milli, other.r_milli)
            and np.array_equal(self.unigrams, other.unigrams)
            and self.bigrams == other.bigrams
            and self.trigrams == other.trigrams
            and self.fwo_prediction == other.fwo_prediction
            and self.fwo_completion == other.fwo_completion
        )


def _best_first(successors: List[Successor]) -> List[Successor]:
    return sorted(successors, key=lambda s: (s[1], s[0]))


def _to_milli(value: float, name: str) -> int:
    milli = int(round(value * 1000))
    if not 0 <= milli <= U16_MAX:
        raise SerializationError(f"{name}={value} cannot be stored", context="header")
    return milli


def build_tables(arpa: ArpaModel, fwo: FwoTables, lam: float, r: float,
                 quant: Optional[QuantParams] = None) -> NgramTables:
    """
    Quantise an ARPA model into the data-file structure.
    
    Args:
        arpa: Closure-consistent model
        fwo: Frequent word lists
        lam: Stupid Backoff factor recorded in the header
        r: Class interpolation ratio recorded in the header
        quant: Quantiser parameters
        
    Returns:
        NgramTables
        
    Raises:
        SerializationError: If unigram IDs are not dense or a trigram context is missing
    """
    quant = quant or QuantParams.from_config()

    unigram_entries = arpa.entries(1)
    for position, entry in enumerate(unigram_entries):
        if entry.ids != (position,):
            raise SerializationError(f"unigram IDs must be dense, found {entry.ids} at {position}",
                                     context="unigrams")
    unigrams = quantize_log10_array(np.array([e.log10_score for e in unigram_entries]), quant)

    grouped: DefaultDict[int, List[Successor]] = defaultdict(list)
    for entry in arpa.entries(2):
        ctx, word_id = entry.ids
        grouped[ctx].append((word_id, quantize_log10(entry.log10_score, quant)))
    bigrams = [(ctx, _best_first(grouped[ctx])) for ctx in sorted(grouped)]

    bigram_index = {pair: idx for idx, pair in enumerate(
        (ctx, word_id) for ctx, successors in bigrams for word_id, _ in successors)}
    tri_grouped: DefaultDict[int, List[Successor]] = defaultdict(list)
    for entry in arpa.entries(3):
        w1, w2, w3 = entry.ids
        index = bigram_index.get((w1, w2))
        if index is None:
            raise SerializationError(f"trigram {entry.ids} has no context bigram",
                                     context=f"trigram context ({w1}, {w2})")
        tri_grouped[index].append((w3, quantize_log10(entry.log10_score, quant)))
    trigrams = [(index, _best_first(tri_grouped[index])) for index in sorted(tri_grouped)]

    return NgramTables(
        k=fwo.k,
        lam_milli=_to_milli(lam, "lambda"),
        r_milli=_to_milli(r, "r"),
        unigrams=unigrams,
        bigrams=bigrams,
        trigrams=trigrams,
        fwo_prediction=list(fwo.prediction),
        fwo_completion={ch: list(ids) for ch, ids in sorted(fwo.completion.items())},
    )


def _pack_groups(groups: List[Group], out: bytearray, label: str) -> None:
    for key, successors in groups:
        context = f"{label} context {key}"
        out += pack_u24(key, context)
        if len(successors) > U16_MAX:
            raise SerializationError(f"{len(successors)} successors exceed {U16_MAX}", context=context)
        out += pack_u16(len(successors), context)
        for word_id, q in successors:
            out += pack_u24(word_id, context)
            out += pack_u16(q, context)


def encode_tables(tables: NgramTables) -> bytes:
    """
    Uncompressed payload bytes.
    
    Raises:
        SerializationError: If any field overflows its width; names the context
    """
    if tables.n_bi >= ID_SENTINEL:
        raise SerializationError(f"{tables.n_bi} bigrams exceed 3-byte context indices",
                                 context="bigrams")
    out = bytearray(HEADER.pack(MAGIC, VERSION, tables.n_uni, tables.n_bi, tables.n_tri,
                                tables.k, tables.lam_milli, tables.r_milli))
    out += tables.unigrams.astype("<u2").tobytes()
    _pack_groups(tables.bigrams, out, "bigram")
    _pack_groups(tables.trigrams, out, "trigram")
    out += pack_padded_ids(tables.fwo_prediction, tables.k, "fwo prediction")
    if len(tables.fwo_completion) > U16_MAX:
        raise SerializationError(f"{len(tables.fwo_completion)} completion entries",
                                 context="fwo completion")
    out += pack_u16(len(tables.fwo_completion), "fwo completion")
    for ch, ids in tables.fwo_completion.items():
        out += pack_u32(ord(ch))
        out += pack_padded_ids(ids, tables.k, f"fwo completion {ch!r}")
    return bytes(out)


def serialize_model(arpa: ArpaModel, fwo: FwoTables, quant: Optional[QuantParams] = None,
                    lam: float = 0.4, r: float = 0.5) -> bytes:
    """
    Build, encode and compress the data file as one zlib stream.
    
    Args:
        arpa: Closure-consistent model
        fwo: Frequent word lists (their K is the header K)
        quant: Quantiser parameters
        lam: Stupid Backoff factor
        r: Class interpolation ratio
        
    Returns:
        Compressed data-file bytes
    """
    tables = build_tables(arpa, fwo, lam, r, quant)
    payload = encode_tables(tables)
    data = zlib.compress(payload, COMPRESSION_LEVEL)
    logger.info(f"Serialized data file: {len(payload)} bytes payload, {len(data)} compressed")
    return data


def _read_groups(cursor: ByteCursor, section: str, total: int, key_limit: int,
                 n_uni: int, c2: int) -> List[Group]:
    groups: List[Group] = []
    seen = 0
    previous_key = -1
    while seen < total:
        key = cursor.u24(section)
        if key >= key_limit:
            raise cursor.error(section, f"context {key} does not resolve (limit {key_limit})")
        if key <= previous_key:
            raise cursor.error(section, f"context {key} out of order")
        previous_key = key
        count = cursor.u16(section)
        if count == 0 or seen + count > total:
            raise cursor.error(section, f"context {key} has an invalid successor count {count}")
        successors: List[Successor] = []
        previous: Optional[Successor] = None
        for _ in range(count):
            word_id = cursor.u24(section)
            q = cursor.u16(section)
            if word_id >= n_uni:
                raise cursor.error(section, f"word ID {word_id} out of range in context {key}")
            if q > c2:
                raise cursor.error(section, f"score {q} above the quantiser cap")
            if previous is not None and (previous[1], previous[0]) >= (q, word_id):
                raise cursor.error(section, f"successors of context {key} not best-first")
            previous = (word_id, q)
            successors.append(previous)
        if len({word_id for word_id, _ in successors}) != count:
            raise cursor.error(section, f"duplicate successor in context {key}")
        groups.append((key, successors))
        seen += count
    return groups


def decode_payload(payload: bytes, quant: Optional[QuantParams] = None) -> NgramTables:
    """
    Parse an uncompressed payload and re-validate every reference.
    
    Raises:
        ModelFormatError: Naming the section that is truncated or inconsistent
    """
    quant = quant or QuantParams.from_config()
    cursor = ByteCursor(payload, FILE_KIND)
    magic, version, n_uni, n_bi, n_tri, k, lam_milli, r_milli = cursor.unpack(HEADER, "header")
    if magic != MAGIC:
        raise cursor.error("header", f"bad magic {magic!r}")
    if version != VERSION:
        raise cursor.error("header", f"unsupported version {version}")
    if k < 1:
        raise cursor.error("header", "K must be at least 1")

    unigrams = np.frombuffer(cursor.take(2 * n_uni, "unigrams"), dtype="<u2").astype(np.uint16)
    if unigrams.size and int(unigrams.max()) > quant.c2:
        raise cursor.error("unigrams", "score above the quantiser cap")
    bigrams = _read_groups(cursor, "bigrams", n_bi, n_uni, n_uni, quant.c2)
    trigrams = _read_groups(cursor, "trigrams", n_tri, n_bi, n_uni, quant.c2)

    prediction = cursor.padded_ids(k, "fwo_prediction")
    if any(word_id >= n_uni for word_id in prediction):
        raise cursor.error("fwo_prediction", "word ID out of range")

    completion: Dict[str, List[int]] = {}
    n_entries = cursor.u16("fwo_completion")
    previous_cp = -1
    for _ in range(n_entries):
        codepoint = cursor.u32("fwo_completion")
        if codepoint > MAX_CODEPOINT or codepoint <= previous_cp:
            raise cursor.error("fwo_completion", f"bad code point {codepoint:#x}")
        previous_cp = codepoint
        ids = cursor.padded_ids(k, "fwo_completion")
        if any(word_id >= n_uni for word_id in ids):
            raise cursor.error("fwo_completion", "word ID out of range")
        completion[chr(codepoint)] = ids
    cursor.expect_end()

    return NgramTables(k=k, lam_milli=lam_milli, r_milli=r_milli, unigrams=unigrams,
                       bigrams=bigrams, trigrams=trigrams, fwo_prediction=prediction,
                       fwo_completion=completion)


def deserialize_model(data: bytes, quant: Optional[QuantParams] = None) -> NgramTables:
    """
    Decompress and parse a data file.
    
    Raises:
        ModelFormatError: If the stream is corrupt or the payload invalid
    """
    try:
        payload = zlib.decompress(data)
    except zlib.error as e:
        raise ModelFormatError(FILE_KIND, "stream", f"corrupt zlib stream: {e}") from e
    return decode_payload(payload, quant)


def section_sizes(tables: NgramTables) -> Dict[str, int]:
    """Uncompressed byte count of every payload section."""
    k = tables.k
    return {
        "header": HEADER.size,
        "unigrams": 2 * tables.n_uni,
        "bigrams": sum(5 + 5 * len(s) for _, s in tables.bigrams),
        "trigrams": sum(5 + 5 * len(s) for _, s in tables.trigrams),
        "fwo_prediction": 3 * k,
        "fwo_completion": 2 + len(tables.fwo_completion) * (4 + 3 * k),
    }


def payload_size(tables: NgramTables) -> int:
    """Closed-form uncompressed data-file size."""
    return sum(section_sizes(tables).values())


def tables_to_arpa(tables: NgramTables, vocab: Vocabulary,
                   quant: Optional[QuantParams] = None) -> ArpaModel:
    """
    Dequantised ARPA view of the tables, for diffing against the source ARPA.
    
    Capped scores come back as -c2/10^c1 rather than their original value.
    """
    quant = quant or QuantParams.from_config()

    def log10_of(q: int) -> float:
        return round(-q / quant.scale, SCORE_DECIMALS) + 0.0

    unigrams = [ArpaEntry(log10_of(int(q)), (word_id,)) for word_id, q in enumerate(tables.unigrams)]
    bigrams = sorted(
        (ArpaEntry(log10_of(q), (ctx, word_id)) for ctx, successors in tables.bigrams
         for word_id, q in successors),
        key=lambda entry: entry.ids,
    )
    entries = tables.bigram_entries()
    trigrams = sorted(
        (ArpaEntry(log10_of(q), entries[index] + (word_id,)) for index, successors in tables.trigrams
         for word_id, q in successors),
        key=lambda entry: entry.ids,
    )
    return ArpaModel(vocab=vocab, orders={1: unigrams, 2: bigrams, 3: trigrams}, lam=tables.lam)
