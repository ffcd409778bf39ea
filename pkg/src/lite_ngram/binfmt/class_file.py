"""
Class file: header, class labels, word_class, per-class top-K IDs with
quantised emissions, and the class-pair argmax table. Stored uncompressed.
"""

import logging
import struct
from typing import List, Optional

import numpy as np

from ..classes.class_model import ClassModel
from ..errors import SerializationError
from .codec import U16_MAX, ByteCursor, pack_padded_ids, pack_u16
from .quantizer import QuantParams, dequantize, quantize

logger = logging.getLogger(__name__)

MAGIC = b"OPNC"
VERSION = 1
# magic, version, n_classes, K, n_words, labels blob size
HEADER = struct.Struct("<4sBHHII")
FILE_KIND = "class"
# emission slot of a padded top-K position
EMISSION_PAD = U16_MAX


def _encode_labels(labels: List[str]) -> bytes:
    out = bytearray()
    for label in labels:
        raw = label.encode('utf-8')
        if not 0 < len(raw) < 256:
            raise SerializationError(f"class label {label!r} must be 1..255 bytes", context="labels")
        out.append(len(raw))
        out += raw
    return bytes(out)


def encode_class_model(model: ClassModel, quant: Optional[QuantParams] = None) -> bytes:
    """
    Serialise a class model.
    
    Raises:
        SerializationError: If a class list is longer than K or a field overflows
    """
    quant = quant or QuantParams.from_config()
    n_classes, k = model.n_classes, model.top_k
    if not 1 <= n_classes <= 256:
        raise SerializationError(f"{n_classes} classes do not fit in one byte", context="header")
    labels = _encode_labels(list(model.labels))
    out = bytearray(HEADER.pack(MAGIC, VERSION, n_classes, k, len(model.word_class), len(labels)))
    out += labels
    out += np.asarray(model.word_class, dtype=np.uint8).tobytes()
    for class_id, ids in enumerate(model.class_topk):
        out += pack_padded_ids(ids, k, f"class {class_id} top-K")
    for class_id, ids in enumerate(model.class_topk):
        context = f"class {class_id} emissions"
        for word_id in ids:
            out += pack_u16(quantize(model.emission[word_id], quant), context)
        out += pack_u16(EMISSION_PAD, context) * (k - len(ids))
    out += np.asarray(model.pair_argmax, dtype=np.uint8).tobytes()
    return bytes(out)


def decode_class_model(data: bytes, quant: Optional[QuantParams] = None) -> ClassModel:
    """
    Parse a class file, validating sizes and every stored reference.
    
    Raises:
        ModelFormatError: Naming the offending section
    """
    quant = quant or QuantParams.from_config()
    cursor = ByteCursor(data, FILE_KIND)
    magic, version, n_classes, k, n_words, labels_size = cursor.unpack(HEADER, "header")
    if magic != MAGIC:
        raise cursor.error("header", f"bad magic {magic!r}")
    if version != VERSION:
        raise cursor.error("header", f"unsupported version {version}")
    if not 1 <= n_classes <= 256 or k < 1:
        raise cursor.error("header", f"invalid sizes n_classes={n_classes} K={k}")

    blob = cursor.take(labels_size, "labels")
    labels: List[str] = []
    offset = 0
    while offset < len(blob):
        length = blob[offset]
        if length == 0 or offset + 1 + length > len(blob):
            raise cursor.error("labels", "malformed label entry")
        try:
            labels.append(blob[offset + 1:offset + 1 + length].decode('utf-8'))
        except UnicodeDecodeError as e:
            raise cursor.error("labels", f"label is not UTF-8: {e}") from e
        offset += 1 + length
    if len(labels) != n_classes:
        raise cursor.error("labels", f"{len(labels)} labels for {n_classes} classes")

    word_class = np.frombuffer(cursor.take(n_words, "word_class"), dtype=np.uint8).copy()
    if word_class.size and int(word_class.max()) >= n_classes:
        raise cursor.error("word_class", "class ID out of range")

    class_topk = [cursor.padded_ids(k, "class_topk") for _ in range(n_classes)]
    emission = {}
    for class_id, ids in enumerate(class_topk):
        for slot in range(k):
            q = cursor.u16("emissions")
            if slot >= len(ids):
                if q != EMISSION_PAD:
                    raise cursor.error("emissions", f"class {class_id} padding holds a score")
                continue
            if q > quant.c2:
                raise cursor.error("emissions", f"score {q} above the quantiser cap")
            word_id = ids[slot]
            if word_id >= n_words or int(word_class[word_id]) != class_id:
                raise cursor.error("class_topk", f"word {word_id} is not a member of class {class_id}")
            emission[word_id] = dequantize(q, quant)

    pair_argmax = np.frombuffer(cursor.take(n_classes * n_classes, "pair_argmax"),
                                dtype=np.uint8).reshape(n_classes, n_classes).copy()
    if int(pair_argmax.max()) >= n_classes:
        raise cursor.error("pair_argmax", "class ID out of range")
    cursor.expect_end()

    return ClassModel(labels=tuple(labels), word_class=word_class, class_topk=class_topk,
                      emission=emission, pair_argmax=pair_argmax, top_k=k)


def class_file_size(n_words: int, n_classes: int, k: int, labels_size: int) -> int:
    """Exact class-file size from its header fields."""
    return HEADER.size + labels_size + n_words + n_classes * k * (3 + 2) + n_classes * n_classes
