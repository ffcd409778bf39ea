"""
Fixed-width little-endian field helpers shared by the model file codecs.
"""

import struct
from typing import List

from ..errors import ModelFormatError, SerializationError

U16_MAX = 0xFFFF
U24_MAX = 0xFFFFFF
# 3-byte ID slots that hold no word
ID_SENTINEL = U24_MAX
MAX_CODEPOINT = 0x10FFFF

_U16 = struct.Struct("<H")
_U32 = struct.Struct("<I")


def pack_u16(value: int, context: str) -> bytes:
    if not 0 <= value <= U16_MAX:
        raise SerializationError(f"value {value} does not fit in 2 bytes", context=context)
    return _U16.pack(value)


def pack_u24(value: int, context: str) -> bytes:
    if not 0 <= value <= U24_MAX:
        raise SerializationError(f"value {value} does not fit in 3 bytes", context=context)
    return value.to_bytes(3, "little")


def pack_u32(value: int) -> bytes:
    return _U32.pack(value)


def pack_padded_ids(ids: List[int], width: int, context: str) -> bytes:
    """Pack up to `width` IDs as 3-byte fields, padding with the sentinel."""
    if len(ids) > width:
        raise SerializationError(f"{len(ids)} IDs exceed the slot width {width}", context=context)
    out = bytearray()
    for word_id in ids:
        if word_id >= ID_SENTINEL:
            raise SerializationError(f"word ID {word_id} collides with the sentinel", context=context)
        out += pack_u24(word_id, context)
    out += ID_SENTINEL.to_bytes(3, "little") * (width - len(ids))
    return bytes(out)


class ByteCursor:
    """Sequential reader that reports truncation by file and section."""
    
    def __init__(self, data: bytes, file_kind: str):
        self._data = memoryview(data)
        self._pos = 0
        self.file_kind = file_kind

    @property
    def remaining(self) -> int:
        return len(self._data) - self._pos

    def error(self, section: str, message: str) -> ModelFormatError:
        return ModelFormatError(self.file_kind, section, message)

    def take(self, n: int, section: str) -> bytes:
        if n > self.remaining:
            raise self.error(section, f"truncated: needed {n} bytes at offset {self._pos}, "
                                      f"{self.remaining} left")
        chunk = self._data[self._pos:self._pos + n].tobytes()
        self._pos += n
        return chunk

    def unpack(self, fmt: struct.Struct, section: str) -> tuple:
        return fmt.unpack(self.take(fmt.size, section))

    def u8(self, section: str) -> int:
        return self.take(1, section)[0]

    def u16(self, section: str) -> int:
        return _U16.unpack(self.take(2, section))[0]

    def u24(self, section: str) -> int:
        return int.from_bytes(self.take(3, section), "little")

    def u32(self, section: str) -> int:
        return _U32.unpack(self.take(4, section))[0]

    def padded_ids(self, width: int, section: str) -> List[int]:
        """Read `width` 3-byte slots; sentinels may only trail."""
        raw = self.take(3 * width, section)
        ids: List[int] = []
        padding = False
        for offset in range(0, len(raw), 3):
            word_id = int.from_bytes(raw[offset:offset + 3], "little")
            if word_id == ID_SENTINEL:
                padding = True
            elif padding:
                raise self.error(section, "word ID found after sentinel padding")
            else:
                ids.append(word_id)
        return ids

    def expect_end(self) -> None:
        if self.remaining:
            raise self.error("trailer", f"{self.remaining} unexpected trailing bytes")
