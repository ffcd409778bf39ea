"""
Prefix trie over the vocabulary with a compact pre-order byte encoding.
"""

import logging
import struct
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Tuple

from ..counting.vocabulary import Vocabulary
from .codec import ID_SENTINEL, MAX_CODEPOINT, ByteCursor, pack_u16, pack_u24, pack_u32

logger = logging.getLogger(__name__)

MAGIC = b"OPNV"
VERSION = 1
_HEADER = struct.Struct("<4sBI")
# word ID (3) + child count (2)
_NODE_BYTES = 5
FILE_KIND = "vocab"


@dataclass
class _Node:
    word_id: Optional[int] = None
    children: Dict[str, "_Node"] = field(default_factory=dict)


class VocabTrie:
    """Word <-> ID bijection with prefix enumeration."""
    
    def __init__(self, words: Iterable[str]):
        """
        Build the trie; IDs are positions in `words`.
        
        Raises:
            ValueError: If a word repeats
        """
        self._words: Tuple[str, ...] = tuple(words)
        if len(self._words) >= ID_SENTINEL:
            raise ValueError(f"vocabulary of {len(self._words)} words exceeds 3-byte IDs")
        self._root = _Node()
        for word_id, word in enumerate(self._words):
            node = self._root
            for ch in word:
                node = node.children.setdefault(ch, _Node())
            if node.word_id is not None:
                raise ValueError(f"Duplicate vocabulary word {word!r}")
            node.word_id = word_id

    def __len__(self) -> int:
        return len(self._words)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, VocabTrie) and self._words == other._words

    @property
    def words(self) -> Tuple[str, ...]:
        return self._words

    def _find(self, prefix: str) -> Optional[_Node]:
        node = self._root
        for ch in prefix:
            node = node.children.get(ch)
            if node is None:
                return None
        return node

    def lookup(self, word: str) -> Optional[int]:
        node = self._find(word)
        return node.word_id if node is not None else None

    def word(self, word_id: int) -> str:
        return self._words[word_id]

    def ids_with_prefix(self, prefix: str) -> List[int]:
        """IDs of every word starting with `prefix`, ascending."""
        node = self._find(prefix)
        if node is None:
            return []
        ids = []
        stack = [node]
        while stack:
            current = stack.pop()
            if current.word_id is not None:
                ids.append(current.word_id)
            stack.extend(current.children.values())
        return sorted(ids)

    def to_bytes(self) -> bytes:
        """
        Encode as header then a pre-order node stream.
        
        Each node is its word ID (3 bytes, sentinel when no word ends there)
        and child count (2 bytes); each child follows as its code point
        (4 bytes) and the child node. Children are ordered by code point.
        """
        out = bytearray(_HEADER.pack(MAGIC, VERSION, len(self._words)))
        stack: List[Tuple[Optional[str], _Node]] = [(None, self._root)]
        while stack:
            ch, node = stack.pop()
            if ch is not None:
                out += pack_u32(ord(ch))
            out += pack_u24(ID_SENTINEL if node.word_id is None else node.word_id, "vocab node")
            out += pack_u16(len(node.children), f"children of {ch!r}")
            for child_ch in sorted(node.children, reverse=True):
                stack.append((child_ch, node.children[child_ch]))
        return bytes(out)

    @classmethod
    def from_bytes(cls, data: bytes) -> "VocabTrie":
        """
        Decode a vocabulary file.
        
        Raises:
            ModelFormatError: On bad magic, truncation or a broken bijection
        """
        cursor = ByteCursor(data, FILE_KIND)
        magic, version, word_count = cursor.unpack(_HEADER, "header")
        if magic != MAGIC:
            raise cursor.error("header", f"bad magic {magic!r}")
        if version != VERSION:
            raise cursor.error("header", f"unsupported version {version}")
        # every word ID needs at least one node of _NODE_BYTES
        if word_count > cursor.remaining // _NODE_BYTES:
            raise cursor.error("header", f"word count {word_count} exceeds the {cursor.remaining} node bytes")

        words: List[Optional[str]] = [None] * word_count

        def read_node(path: str) -> int:
            word_id = cursor.u24("nodes")
            n_children = cursor.u16("nodes")
            if word_id != ID_SENTINEL:
                if word_id >= word_count:
                    raise cursor.error("nodes", f"word ID {word_id} out of range")
                if words[word_id] is not None:
                    raise cursor.error("nodes", f"word ID {word_id} appears twice")
                words[word_id] = path
            return n_children

        # (path, children left, last code point read)
        stack: List[List] = [["", read_node(""), -1]]
        while stack:
            top = stack[-1]
            if top[1] == 0:
                stack.pop()
                continue
            top[1] -= 1
            codepoint = cursor.u32("nodes")
            if codepoint > MAX_CODEPOINT or codepoint <= top[2]:
                raise cursor.error("nodes", f"bad child code point {codepoint:#x}")
            top[2] = codepoint
            path = top[0] + chr(codepoint)
            stack.append([path, read_node(path), -1])
        cursor.expect_end()

        missing = [idx for idx, word in enumerate(words) if word is None]
        if missing:
            raise cursor.error("nodes", f"{len(missing)} word IDs have no node (first {missing[0]})")
        return cls(words)  # type: ignore[arg-type]


def build_vocab_trie(vocab: Vocabulary) -> VocabTrie:
    """Trie whose IDs follow the vocabulary rank order."""
    trie = VocabTrie(vocab.words)
    logger.info(f"Built vocabulary trie over {len(trie)} words")
    return trie

