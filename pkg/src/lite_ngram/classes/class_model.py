"""
Class-trigram companion model built from a part-of-speech lexicon.

The stored model keeps, per context class pair, only the most likely next
class. At inference the class transition factor is therefore an indicator:
1 when the candidate's class is that argmax class, 0 otherwise.
"""

import logging
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import DefaultDict, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from ..counting.ngram_counter import NgramCounts
from ..counting.vocabulary import Vocabulary
from ..preprocessing.tokens import is_tag

logger = logging.getLogger(__name__)

OTHER_LABEL = "OTHER"
MAX_CLASSES = 256


@dataclass
class ClassLexicon:
    """Word -> class label, one label per word."""
    
    entries: Dict[str, str] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.entries)

    def label(self, word: str) -> Optional[str]:
        return self.entries.get(word)


def load_lexicon(path: Union[str, Path], lowercase: bool = True) -> ClassLexicon:
    """
    Load a "word<TAB>LABEL" lexicon file.
    
    Args:
        path: Lexicon path
        lowercase: Lowercase words to match preprocessed text
        
    Returns:
        ClassLexicon; the first label seen for a word wins
    """
    entries: Dict[str, str] = {}
    duplicates = 0
    with open(path, 'r', encoding='utf-8') as f:
        for line_no, line in enumerate(f, start=1):
            line = line.rstrip("\r\n")
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2 or not parts[0] or not parts[1]:
                raise ValueError(f"{path}:{line_no}: expected 'word<TAB>LABEL'")
            word = parts[0].strip().lower() if lowercase else parts[0].strip()
            if word in entries:
                duplicates += 1
                continue
            entries[word] = parts[1].strip()
    if duplicates:
        logger.warning(f"Ignored {duplicates} duplicate lexicon entries in {path}")
    return ClassLexicon(entries)


@dataclass
class ClassAssignment:
    """Class labels (index = class ID, OTHER last) and the per-word class array."""
    
    labels: Tuple[str, ...]
    word_class: np.ndarray

    @property
    def n_classes(self) -> int:
        return len(self.labels)

    @property
    def other_id(self) -> int:
        return len(self.labels) - 1


@dataclass
class ClassModel:
    """Word classes, per-class top-K words with emissions, and pair argmax table."""
    
    labels: Tuple[str, ...]
    word_class: np.ndarray
    class_topk: List[List[int]]
    emission: Dict[int, float]
    pair_argmax: np.ndarray
    top_k: int

    @property
    def n_classes(self) -> int:
        return len(self.labels)

    @property
    def other_id(self) -> int:
        return len(self.labels) - 1

    def class_of(self, word_id: int) -> int:
        if 0 <= word_id < len(self.word_class):
            return int(self.word_class[word_id])
        return self.other_id

    def argmax_class(self, ci: int, cj: int) -> int:
        return int(self.pair_argmax[ci, cj])

    def equals(self, other: "ClassModel") -> bool:
        """Structural equality, comparing arrays element-wise."""
        return (
            self.labels == other.labels
            and self.top_k == other.top_k
            and np.array_equal(self.word_class, other.word_class)
            and self.class_topk == other.class_topk
            and self.emission == other.emission
            and np.array_equal(self.pair_argmax, other.pair_argmax)
        )

    def with_quantized_emission(self, quant: Optional[object] = None) -> "ClassModel":
        """
        Copy of the model whose emissions went through the 2-byte quantiser.
        
        Args:
            quant: QuantParams; defaults from configuration
            
        Returns:
            ClassModel with the emissions an engine sees after loading the class file
        """
        from ..binfmt.quantizer import QuantParams, dequantize, quantize

        params = quant if isinstance(quant, QuantParams) else QuantParams.from_config()
        emission = {
            word_id: dequantize(quantize(p, params), params)
            for word_id, p in self.emission.items()
        }
        return ClassModel(
            labels=self.labels,
            word_class=self.word_class.copy(),
            class_topk=[list(ids) for ids in self.class_topk],
            emission=emission,
            pair_argmax=self.pair_argmax.copy(),
            top_k=self.top_k,
        )


def build_word_class(lexicon: ClassLexicon, vocab: Vocabulary, max_classes: int) -> ClassAssignment:
    """
    Assign class IDs to the most frequent labels and map every word.
    
    Args:
        lexicon: Word -> label lexicon
        vocab: Vocabulary with unigram counts
        max_classes: Total classes including OTHER (at most 256)
        
    Returns:
        ClassAssignment; labels ranked by mapped-word mass, OTHER last
    """
    if not 1 <= max_classes <= MAX_CLASSES:
        raise ValueError(f"max_classes must be between 1 and {MAX_CLASSES}")

    mass: Counter = Counter()
    for word_id, word in enumerate(vocab.words):
        if is_tag(word):
            continue
        label = lexicon.label(word)
        if label is not None and label != OTHER_LABEL:
            mass[label] += vocab.count(word_id)

    ranked = sorted(mass.items(), key=lambda item: (-item[1], item[0]))
    kept = [label for label, _ in ranked[:max_classes - 1]]
    labels = tuple(kept) + (OTHER_LABEL,)
    label_ids = {label: idx for idx, label in enumerate(kept)}
    other_id = len(labels) - 1

    word_class = np.full(len(vocab), other_id, dtype=np.uint8)
    for word_id, word in enumerate(vocab.words):
        if is_tag(word):
            continue
        label = lexicon.label(word)
        if label in label_ids:
            word_class[word_id] = label_ids[label]

    if not lexicon:
        logger.warning("Empty class lexicon; every word maps to OTHER")
    logger.info(f"Assigned {len(labels)} classes ({len(ranked)} labels seen)")
    return ClassAssignment(labels=labels, word_class=word_class)


def build_class_stats(assignment: ClassAssignment, counts: NgramCounts, vocab: Vocabulary,
                      top_k: int) -> ClassModel:
    """
    Compute per-class top-K words and the most likely class per context pair.
    
    Every corpus trigram is mapped to its class triple. Tags (<s>, <e>, <unk>,
    <bad>) and words outside the vocabulary count as OTHER in every position,
    so sentence ends pull a pair towards OTHER.
    
    Args:
        assignment: Word class assignment
        counts: Corpus counts (the trigram counts are the corpus trigrams)
        vocab: Vocabulary the assignment was built on
        top_k: Words kept per class
        
    Returns:
        ClassModel
    """
    if top_k < 1:
        raise ValueError("top_k must be at least 1")
    n_classes = assignment.n_classes
    word_class = assignment.word_class

    members: DefaultDict[int, List[Tuple[int, int]]] = defaultdict(list)
    for word_id in range(len(vocab)):
        if vocab.is_tag(word_id) or vocab.count(word_id) <= 0:
            continue
        members[int(word_class[word_id])].append((vocab.count(word_id), word_id))

    class_topk: List[List[int]] = []
    emission: Dict[int, float] = {}
    for class_id in range(n_classes):
        entries = members.get(class_id, [])
        mass = sum(count for count, _ in entries)
        ranked = sorted(entries, key=lambda item: (-item[0], item[1]))[:top_k]
        class_topk.append([word_id for _, word_id in ranked])
        for count, word_id in ranked:
            emission[word_id] = count / mass

    def class_of(word: str) -> int:
        word_id = vocab.get(word)
        return int(word_class[word_id]) if word_id is not None else assignment.other_id

    transitions: DefaultDict[Tuple[int, int], Counter] = defaultdict(Counter)
    for (w1, w2, w3), count in counts.tri.items():
        transitions[(class_of(w1), class_of(w2))][class_of(w3)] += count

    pair_argmax = np.full((n_classes, n_classes), assignment.other_id, dtype=np.uint8)
    for (ci, cj), following in transitions.items():
        best = min(following.items(), key=lambda item: (-item[1], item[0]))[0]
        pair_argmax[ci, cj] = best

    logger.info(f"Built class statistics for {n_classes} classes over {len(transitions)} pairs")
    return ClassModel(
        labels=assignment.labels,
        word_class=word_class.copy(),
        class_topk=class_topk,
        emission=emission,
        pair_argmax=pair_argmax,
        top_k=top_k,
    )


def class_probability(word_id: int, ctx_classes: Tuple[int, int], model: ClassModel,
                      emission: Optional[Mapping[int, float]] = None) -> float:
    """
    Class probability P(w|C_w) * P(C_w|Ci,Cj) with an indicator transition.
    
    Args:
        word_id: Candidate word ID (non-tag)
        ctx_classes: (Ci, Cj) classes of the two context words
        model: Class model
        emission: Emission store; the model's top-K emissions by default
        
    Returns:
        Emission of the word when its class is the argmax class of the pair, else 0
    """
    store = model.emission if emission is None else emission
    ci, cj = ctx_classes
    if model.class_of(word_id) != model.argmax_class(ci, cj):
        return 0.0
    return store.get(word_id, 0.0)
