"""
Shared fixtures: a small corpus, a class lexicon and the model built from them.
"""

from types import SimpleNamespace
from typing import Optional, Sequence

import pytest

from lite_ngram.arpa import assign_scores
from lite_ngram.binfmt import (
    QuantParams,
    build_fwo,
    build_tables,
    build_vocab_trie,
    encode_class_model,
    serialize_model,
)
from lite_ngram.classes import ClassLexicon, build_class_stats, build_word_class
from lite_ngram.counting import ModelCaps, count_ngrams, select_vocabulary
from lite_ngram.preprocessing import PrepConfig, preprocess
from lite_ngram.pruning import PruneParams, prune

FIXTURE_LINES = [
    "The cat sat on the mat.",
    "The cat ran to the door.",
    "The cat sat by the fire.",
    "A dog ran in the park.",
    "The dog sat on the mat.",
    "A cat and a dog ran.",
    "The bird sang in the tree.",
    "A bird sat on the fence.",
]

FIXTURE_LEXICON = {
    "the": "DET", "a": "DET",
    "cat": "NOUN", "dog": "NOUN", "mat": "NOUN", "door": "NOUN", "fire": "NOUN",
    "park": "NOUN", "bird": "NOUN", "tree": "NOUN", "fence": "NOUN",
    "sat": "VERB", "ran": "VERB", "sang": "VERB",
    "on": "ADP", "to": "ADP", "by": "ADP", "in": "ADP",
    "and": "CONJ",
}

WIDE_CAPS = ModelCaps(n_uni=200, n_bi=400, n_tri=400)
TIGHT_CAPS = ModelCaps(n_uni=12, n_bi=10, n_tri=8)


def build_components(lines: Sequence[str] = tuple(FIXTURE_LINES), caps: ModelCaps = WIDE_CAPS,
                     lexicon: Optional[ClassLexicon] = None, k: int = 3, lam: float = 0.4,
                     r: float = 0.5, max_classes: int = 8, top_k: int = 3,
                     rare_threshold: int = 1) -> SimpleNamespace:
    """Run the in-memory build pipeline and return every intermediate product."""
    sentences, summary = preprocess("\n".join(lines), PrepConfig(rare_threshold=rare_threshold))
    counts = count_ngrams(sentences)
    vocab = select_vocabulary(counts, caps)
    pruned = prune(counts, vocab, PruneParams(caps=caps, alpha=0.4))
    arpa = assign_scores(pruned, counts, lam)
    fwo = build_fwo(counts, vocab, k)
    lexicon = lexicon if lexicon is not None else ClassLexicon(dict(FIXTURE_LEXICON))
    assignment = build_word_class(lexicon, vocab, max_classes)
    class_model = build_class_stats(assignment, counts, vocab, top_k)
    quant = QuantParams()
    return SimpleNamespace(
        sentences=sentences,
        summary=summary,
        counts=counts,
        vocab=vocab,
        pruned=pruned,
        arpa=arpa,
        fwo=fwo,
        class_model=class_model,
        quant=quant,
        trie=build_vocab_trie(vocab),
        tables=build_tables(arpa, fwo, lam, r, quant),
        lam=lam,
        r=r,
    )


@pytest.fixture
def fixture_lines():
    return list(FIXTURE_LINES)


@pytest.fixture
def components():
    return build_components()


@pytest.fixture
def tight_components():
    return build_components(caps=TIGHT_CAPS)


@pytest.fixture
def build_model():
    """Factory fixture for non-default builds."""
    return build_components


def write_model_files(parts: SimpleNamespace, basename) -> str:
    base = str(basename)
    with open(f"{base}.vocab", 'wb') as f:
        f.write(parts.trie.to_bytes())
    with open(f"{base}.ngram", 'wb') as f:
        f.write(serialize_model(parts.arpa, parts.fwo, parts.quant, parts.lam, parts.r))
    with open(f"{base}.class", 'wb') as f:
        f.write(encode_class_model(parts.class_model, parts.quant))
    return base


@pytest.fixture
def model_files(tmp_path, components):
    """Basename of the fixture model written as .vocab/.ngram/.class files."""
    return write_model_files(components, tmp_path / "fixture")


@pytest.fixture
def corpus_file(tmp_path):
    path = tmp_path / "corpus.txt"
    path.write_text("\n".join(FIXTURE_LINES) + "\n", encoding='utf-8')
    return path


@pytest.fixture
def lexicon_file(tmp_path):
    path = tmp_path / "lexicon.tsv"
    lines = ["# word<TAB>label"] + [f"{word}\t{label}" for word, label in FIXTURE_LEXICON.items()]
    path.write_text("\n".join(lines) + "\n", encoding='utf-8')
    return path


@pytest.fixture
def write_model():
    """Writes a build_components() result to <basename>.vocab/.ngram/.class."""
    return write_model_files
