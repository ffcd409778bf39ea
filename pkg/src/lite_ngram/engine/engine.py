"""
Suggestion engine: loads the three model files and answers word completion
and next word prediction queries with the Stupid Backoff cascade.

Scores per candidate w given context (c1, c2):

    trigram stored          P(w | c1, c2)
    else bigram stored      lam * P(w | c2)
    else                    lam^2 * (r * P_class(w | c1, c2) + (1 - r) * P(w))
"""

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Set, Tuple, Union

import numpy as np

from ..binfmt.class_file import decode_class_model
from ..binfmt.data_file import NgramTables, deserialize_model
from ..binfmt.quantizer import QuantParams, dequantization_table
from ..binfmt.vocab_trie import VocabTrie
from ..classes.class_model import ClassModel, class_probability
from ..config.engine_config import get_engine_config
from ..counting.vocabulary import NUM_TAGS, SENTENCE_START_ID, UNKNOWN_ID, Vocabulary
from ..errors import ModelFormatError
from .topk import TopKSelector

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]
MAX_K = 9


class Branch(Enum):
    """Which cascade case produced a score."""
    
    TRI = "Tri"
    BI = "Bi"
    CLASS_UNI = "ClassUni"


@dataclass(frozen=True)
class Suggestion:
    word: str
    score: float
    branch: Branch


@dataclass(frozen=True)
class EngineConfig:
    """Suggestion count, backoff factor and class interpolation ratio."""
    
    k: int = 3
    lam: float = 0.4
    r: float = 0.5

    def __post_init__(self) -> None:
        if not 1 <= self.k <= MAX_K:
            raise ValueError(f"k must be between 1 and {MAX_K}")
        if not 0 < self.lam <= 1:
            raise ValueError("lam must be in (0, 1]")
        if not 0 <= self.r <= 1:
            raise ValueError("r must be in [0, 1]")

    @classmethod
    def from_config(cls) -> "EngineConfig":
        config = get_engine_config()
        return cls(k=config['k'], lam=config['lam'], r=config['r'])


def model_paths(basename: PathLike) -> Tuple[Path, Path, Path]:
    """The <name>.vocab, <name>.ngram and <name>.class paths of a model."""
    base = str(basename)
    return Path(f"{base}.vocab"), Path(f"{base}.ngram"), Path(f"{base}.class")


class Engine:
    """Read-only query engine over loaded model tables."""
    
    def __init__(self, trie: VocabTrie, tables: NgramTables, class_model: Optional[ClassModel],
                 config: Optional[EngineConfig] = None, quant: Optional[QuantParams] = None):
        """
        Index the tables for querying.
        
        Args:
            trie: Vocabulary trie
            tables: Parsed data file
            class_model: Class model, or None to run without the class term
            config: Query configuration
            quant: Quantiser the tables were written with
            
        Raises:
            ModelFormatError: If the three components disagree on the vocabulary
        """
        self.logger = logging.getLogger(__name__)
        self.config = config or EngineConfig.from_config()
        if len(trie) != tables.n_uni:
            raise ModelFormatError("model", "consistency",
                                   f"vocabulary has {len(trie)} words, data file {tables.n_uni}")
        if class_model is not None and len(class_model.word_class) != tables.n_uni:
            raise ModelFormatError("model", "consistency",
                                   f"class file covers {len(class_model.word_class)} words, "
                                   f"data file {tables.n_uni}")
        self._trie = trie
        self._tables = tables
        self._class_model = class_model

        table = dequantization_table(quant or QuantParams.from_config())
        self._unigram_p: List[float] = [table[q] for q in tables.unigrams.tolist()]

        self._bigram_rows: Dict[int, List[int]] = {}
        self._bigram_p: Dict[int, Dict[int, float]] = {}
        for ctx, successors in tables.bigrams:
            self._bigram_rows[ctx] = [word_id for word_id, _ in successors]
            self._bigram_p[ctx] = {word_id: table[q] for word_id, q in successors}

        entries = tables.bigram_entries()
        self._trigram_rows: Dict[Tuple[int, int], List[int]] = {}
        self._trigram_p: Dict[Tuple[int, int], Dict[int, float]] = {}
        for index, successors in tables.trigrams:
            context = entries[index]
            self._trigram_rows[context] = [word_id for word_id, _ in successors]
            self._trigram_p[context] = {word_id: table[q] for word_id, q in successors}

        # Words with no stored successor score, in the order their plain
        # lam^2 * (1 - r) * P(w) scores rank them
        non_tag = np.arange(NUM_TAGS, tables.n_uni, dtype=np.int64)
        if class_model is not None and self.config.r >= 1:
            self._plain_order: List[int] = non_tag.tolist()
        else:
            order = np.lexsort((non_tag, tables.unigrams[non_tag]))
            self._plain_order = non_tag[order].tolist()

    @classmethod
    def from_components(cls, trie: VocabTrie, tables: NgramTables,
                        class_model: Optional[ClassModel] = None,
                        config: Optional[EngineConfig] = None,
                        quant: Optional[QuantParams] = None) -> "Engine":
        """Engine over in-memory components, as produced before serialisation."""
        return cls(trie, tables, class_model, config, quant)

    @property
    def trie(self) -> VocabTrie:
        return self._trie

    @property
    def tables(self) -> NgramTables:
        return self._tables

    @property
    def class_model(self) -> Optional[ClassModel]:
        return self._class_model

    @property
    def vocab_size(self) -> int:
        return len(self._trie)

    def word_id(self, word: str) -> int:
        """ID of a word; unknown words map to <unk>."""
        word_id = self._trie.lookup(word)
        return UNKNOWN_ID if word_id is None else word_id

    def _resolve_k(self, k: Optional[int]) -> int:
        if k is None:
            return self.config.k
        if not 1 <= k <= MAX_K:
            raise ValueError(f"k must be between 1 and {MAX_K}")
        return k

    def _context_ids(self, ctx: Sequence[str]) -> Tuple[int, int]:
        padded = [SENTENCE_START_ID, SENTENCE_START_ID] + [self.word_id(w) for w in ctx[-2:]]
        return padded[-2], padded[-1]

    def score_candidate(self, word_id: int, c1: Optional[int],
                        c2: Optional[int]) -> Tuple[float, Branch]:
        """
        Cascade score of one candidate.
        
        Args:
            word_id: Candidate word ID
            c1: Older context word ID, None without context
            c2: Newer context word ID, None without context
            
        Returns:
            (score, branch)
        """
        lam = self.config.lam
        if c1 is not None and c2 is not None:
            p = self._trigram_p.get((c1, c2), {}).get(word_id)
            if p is not None:
                return p, Branch.TRI
        if c2 is not None:
            p = self._bigram_p.get(c2, {}).get(word_id)
            if p is not None:
                return lam * p, Branch.BI
        unigram = self._unigram_p[word_id]
        model = self._class_model
        if model is None or c1 is None or c2 is None:
            return lam * lam * unigram, Branch.CLASS_UNI
        r = self.config.r
        class_p = class_probability(word_id, (model.class_of(c1), model.class_of(c2)), model)
        return lam * lam * (r * class_p + (1 - r) * unigram), Branch.CLASS_UNI

    def _rank(self, candidates: Iterable[int], c1: Optional[int], c2: Optional[int],
              k: int) -> List[Suggestion]:
        selector = TopKSelector(k)
        branches: Dict[int, Branch] = {}
        for word_id in candidates:
            if Vocabulary.is_tag(word_id) or word_id in branches:
                continue
            score, branches[word_id] = self.score_candidate(word_id, c1, c2)
            selector.offer(score, word_id)
        return [Suggestion(self._trie.word(word_id), score, branches[word_id])
                for word_id, score in selector.ranked()]

    def next_word_prediction(self, ctx: Sequence[str], k: Optional[int] = None) -> List[Suggestion]:
        """
        Rank likely next words after `ctx`.
        
        An empty context asks for sentence-initial words: the bigram row of
        <s> ranked by its stored probabilities, with the prediction list
        filling any slots the row leaves open. Otherwise the context is padded
        on the left with <s> to two words. Trigram and bigram rows are read best-first
        and only their top K non-tag entries can place; the class top-K list of
        the predicted class is scored in full; the remaining words all score on
        the unigram term, so the first K of them in plain order complete the pool.
        
        Args:
            ctx: Preceding words (unknown words map to <unk>)
            k: Suggestion count, the configured K by default
            
        Returns:
            At most K suggestions, best first, without tags

        Raises:
            ValueError: If k is outside 1..9
        """
        k = self._resolve_k(k)
        if not ctx:
            return self._sentence_start(k)
        c1, c2 = self._context_ids(ctx)
        tri_p = self._trigram_p.get((c1, c2), {})
        bi_p = self._bigram_p.get(c2, {})

        def head(row: List[int], skip: Callable[[int], bool]) -> List[int]:
            picked: List[int] = []
            for word_id in row:
                if len(picked) == k:
                    break
                if not Vocabulary.is_tag(word_id) and not skip(word_id):
                    picked.append(word_id)
            return picked

        pool: List[int] = head(self._trigram_rows.get((c1, c2), []), lambda w: False)
        pool += head(self._bigram_rows.get(c2, []), lambda w: w in tri_p)

        class_members: Set[int] = set()
        model = self._class_model
        if model is not None:
            members = model.class_topk[model.argmax_class(model.class_of(c1), model.class_of(c2))]
            class_members.update(members)
            pool += members
        pool += self._tables.fwo_prediction
        pool += head(self._plain_order,
                     lambda w: w in tri_p or w in bi_p or w in class_members)
        return self._rank(pool, c1, c2, k)

    def _sentence_start(self, k: int) -> List[Suggestion]:
        row = [w for w in self._bigram_rows.get(SENTENCE_START_ID, []) if not Vocabulary.is_tag(w)]
        ranked = self._rank(row[:k], None, SENTENCE_START_ID, k)
        if len(ranked) == k:
            return ranked
        taken = set(row)
        fill = [w for w in self._tables.fwo_prediction if w not in taken]
        return ranked + self._rank(fill, None, SENTENCE_START_ID, k - len(ranked))

    def word_completion(self, ctx: Sequence[str], prefix: str,
                        k: Optional[int] = None) -> List[Suggestion]:
        """
        Rank vocabulary words starting with `prefix`.
        
        A one-character prefix with a completion entry uses that entry as the
        whole pool; otherwise the trie supplies every matching word. An empty
        context scores candidates without any context.
        
        Raises:
            ValueError: If the prefix is empty or k is outside 1..9
        """
        if not prefix:
            raise ValueError("prefix must be non-empty")
        k = self._resolve_k(k)
        c1: Optional[int]
        c2: Optional[int]
        c1, c2 = self._context_ids(ctx) if ctx else (None, None)
        entry = self._tables.fwo_completion.get(prefix) if len(prefix) == 1 else None
        pool = entry if entry is not None else self._trie.ids_with_prefix(prefix)
        return self._rank(pool, c1, c2, k)

    def resident_bytes(self) -> int:
        """Bytes the model occupies when held in its packed on-disk field widths."""
        tables = self._tables
        size = sum(len(word.encode('utf-8')) + 3 for word in self._trie.words)
        size += tables.unigrams.nbytes
        size += 5 * (len(tables.bigrams) + tables.n_bi + len(tables.trigrams) + tables.n_tri)
        size += 3 * len(tables.fwo_prediction)
        size += sum(4 + 3 * len(ids) for ids in tables.fwo_completion.values())
        if self._class_model is not None:
            model = self._class_model
            size += model.word_class.nbytes + model.pair_argmax.nbytes
            size += 5 * sum(len(ids) for ids in model.class_topk)
        return size

    def tables_equal(self, other: "Engine") -> bool:
        """True when both engines hold identical vocabulary, n-gram and class tables."""
        if self._trie != other._trie or self._tables != other._tables:
            return False
        if self._class_model is None or other._class_model is None:
            return self._class_model is None and other._class_model is None
        return self._class_model.equals(other._class_model)


def load_model(vocab_path: PathLike, ngram_path: PathLike, class_path: Optional[PathLike],
               config: Optional[EngineConfig] = None, parallel: Optional[bool] = None,
               lenient: Optional[bool] = None, quant: Optional[QuantParams] = None) -> Engine:
    """
    Load the three model files and build an engine.
    
    Args:
        vocab_path: Vocabulary trie file
        ngram_path: Compressed data file
        class_path: Class file; may be missing in lenient mode
        config: Query configuration
        parallel: Decode the files on three threads
        lenient: Run without the class term when the class file is missing
        quant: Quantiser parameters
        
    Returns:
        Engine
        
    Raises:
        ModelFormatError: If any file is corrupt or the files disagree
        OSError: If a required file cannot be read
    """
    engine_config = get_engine_config()
    parallel = engine_config['parallel_load'] if parallel is None else parallel
    lenient = engine_config['lenient_load'] if lenient is None else lenient
    quant = quant or QuantParams.from_config()
    start = time.perf_counter()

    def read_vocab() -> VocabTrie:
        return VocabTrie.from_bytes(Path(vocab_path).read_bytes())

    def read_ngram() -> NgramTables:
        return deserialize_model(Path(ngram_path).read_bytes(), quant)

    def read_class() -> Optional[ClassModel]:
        try:
            if class_path is None:
                raise FileNotFoundError("no class file given")
            data = Path(class_path).read_bytes()
        except FileNotFoundError:
            if lenient:
                logger.warning(f"Class file {class_path} missing; running without the class term")
                return None
            raise
        return decode_class_model(data, quant)

    loaders = (read_vocab, read_ngram, read_class)
    try:
        if parallel:
            with ThreadPoolExecutor(max_workers=len(loaders)) as executor:
                futures = [executor.submit(loader) for loader in loaders]
                trie, tables, class_model = (future.result() for future in futures)
        else:
            trie, tables, class_model = (loader() for loader in loaders)
    except (ModelFormatError, OSError) as e:
        logger.error(f"Model load failed: {e}")
        raise

    engine = Engine(trie, tables, class_model, config, quant)
    logger.info(f"Loaded model of {engine.vocab_size} words in "
                f"{(time.perf_counter() - start) * 1000:.1f} ms (parallel={parallel})")
    return engine
