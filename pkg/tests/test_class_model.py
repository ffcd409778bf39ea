"""
Unit tests for the class-trigram companion model.
"""

import numpy as np
import pytest

from lite_ngram.classes import (
    OTHER_LABEL,
    ClassLexicon,
    build_class_stats,
    build_word_class,
    class_probability,
    load_lexicon,
)
from lite_ngram.counting import ModelCaps


class TestLexicon:
    """Test cases for lexicon loading."""

    def test_load(self, lexicon_file):
        """Lexicon files map words to labels."""
        lexicon = load_lexicon(lexicon_file)
        assert lexicon.label("cat") == "NOUN"
        assert lexicon.label("missing") is None
        assert len(lexicon) == 19

    def test_first_label_wins(self, tmp_path):
        """Duplicate words keep their first label; words are lowercased."""
        path = tmp_path / "lex.tsv"
        path.write_text("Run\tVERB\nrun\tNOUN\n\n# comment\n", encoding="utf-8")
        lexicon = load_lexicon(path)
        assert lexicon.entries == {"run": "VERB"}

    def test_malformed_line(self, tmp_path):
        """Lines without a tab-separated label are rejected."""
        path = tmp_path / "lex.tsv"
        path.write_text("run VERB\n", encoding="utf-8")
        with pytest.raises(ValueError, match="word<TAB>LABEL"):
            load_lexicon(path)


class TestBuildWordClass:
    """Test cases for class assignment."""

    def test_labels_ranked_by_mass(self, components):
        """Labels are ordered by mapped word mass and OTHER comes last."""
        assignment = build_word_class(ClassLexicon(
            {"the": "DET", "a": "DET", "cat": "NOUN", "dog": "NOUN", "sat": "VERB"}),
            components.vocab, 8)
        # DET 16, NOUN 7, VERB 4
        assert assignment.labels == ("DET", "NOUN", "VERB", OTHER_LABEL)
        assert assignment.other_id == 3

    def test_every_word_has_a_class(self, components):
        """Unlabelled words and tags map to OTHER."""
        assignment = build_word_class(ClassLexicon({"cat": "NOUN"}), components.vocab, 8)
        vocab = components.vocab
        assert assignment.word_class.shape == (len(vocab),)
        assert assignment.word_class[vocab.get("cat")] == 0
        assert assignment.word_class[vocab.get("the")] == assignment.other_id
        assert all(assignment.word_class[i] == assignment.other_id for i in range(4))

    def test_max_classes_folds_rare_labels(self, components):
        """Labels beyond the limit fold into OTHER."""
        assignment = build_word_class(ClassLexicon({"the": "DET", "cat": "NOUN", "sat": "VERB"}),
                                      components.vocab, 2)
        assert assignment.labels == ("DET", OTHER_LABEL)
        assert assignment.word_class[components.vocab.get("cat")] == 1

    def test_empty_lexicon(self, components):
        """An empty lexicon gives the single OTHER class."""
        assignment = build_word_class(ClassLexicon(), components.vocab, 8)
        assert assignment.labels == (OTHER_LABEL,)
        assert not assignment.word_class.any()

    def test_limits(self, components):
        """The class count must fit in one byte."""
        with pytest.raises(ValueError):
            build_word_class(ClassLexicon(), components.vocab, 0)
        with pytest.raises(ValueError):
            build_word_class(ClassLexicon(), components.vocab, 257)


class TestClassStats:
    """Test cases for class statistics."""

    def test_topk_lists(self, components):
        """Each class lists its most frequent members, ties by ID."""
        model, vocab = components.class_model, components.vocab
        noun = model.labels.index("NOUN")
        assert [vocab.word(i) for i in model.class_topk[noun]] == ["cat", "dog", "bird"]
        for class_id, ids in enumerate(model.class_topk):
            assert len(ids) <= model.top_k
            assert all(model.class_of(i) == class_id for i in ids)

    def test_emission_is_class_share(self, components):
        """Emission is the word count over the class count."""
        model, vocab = components.class_model, components.vocab
        # NOUN mass: cat 4, dog 3, bird 2, mat 2, door/fire/park/tree/fence 1 each
        assert model.emission[vocab.get("cat")] == pytest.approx(4 / 16)

    def test_pair_argmax(self, components):
        """The most frequent following class is stored per pair."""
        model = components.class_model
        det, noun, verb = (model.labels.index(label) for label in ("DET", "NOUN", "VERB"))
        assert model.argmax_class(det, noun) == verb
        assert model.pair_argmax.shape == (model.n_classes, model.n_classes)
        assert model.pair_argmax.dtype == np.uint8

    def test_unseen_pair_is_other(self, components):
        """Pairs never observed point to OTHER."""
        model = components.class_model
        conj = model.labels.index("CONJ")
        assert model.argmax_class(conj, conj) == model.other_id

    def test_sentence_end_counts_as_other(self, build_model):
        """A pair mostly followed by <e> predicts OTHER."""
        lexicon = ClassLexicon({"the": "DET", "cat": "NOUN", "sat": "VERB"})
        model = build_model(lines=["the cat"] * 3 + ["the cat sat"], lexicon=lexicon).class_model
        det, noun = model.labels.index("DET"), model.labels.index("NOUN")
        assert model.argmax_class(det, noun) == model.other_id

    def test_out_of_vocabulary_follower_counts_as_other(self, build_model):
        """Followers cut from the vocabulary still count, as OTHER."""
        lexicon = ClassLexicon({"the": "DET", "cat": "NOUN", "sat": "VERB"})
        lines = ["the cat sat"] * 2 + ["the cat xx", "the cat yy", "the cat zz"]
        parts = build_model(lines=lines, lexicon=lexicon, caps=ModelCaps(n_uni=7, n_bi=20, n_tri=20))
        assert parts.vocab.get("xx") is None
        model = parts.class_model
        det, noun = model.labels.index("DET"), model.labels.index("NOUN")
        assert model.argmax_class(det, noun) == model.other_id

    def test_invalid_topk(self, components):
        """top_k must be positive."""
        assignment = build_word_class(ClassLexicon(), components.vocab, 8)
        with pytest.raises(ValueError, match="top_k"):
            build_class_stats(assignment, components.counts, components.vocab, 0)

    def test_equals_and_quantized_copy(self, components):
        """Quantised emissions change values but not structure."""
        model = components.class_model
        copy = model.with_quantized_emission()
        assert model.equals(model)
        assert copy.class_topk == model.class_topk
        assert set(copy.emission) == set(model.emission)
        for word_id, p in model.emission.items():
            assert copy.emission[word_id] == pytest.approx(p, rel=2.4e-3)


class TestClassProbability:
    """Test cases for the class probability term."""

    def test_indicator_transition(self, components):
        """The term is the emission inside the argmax class and 0 elsewhere."""
        model, vocab = components.class_model, components.vocab
        ctx = (model.class_of(vocab.get("the")), model.class_of(vocab.get("cat")))
        sat, dog = vocab.get("sat"), vocab.get("dog")
        assert class_probability(sat, ctx, model) == model.emission[sat]
        assert class_probability(dog, ctx, model) == 0.0

    def test_member_outside_topk(self, components):
        """Words of the argmax class beyond the top-K list get 0."""
        model, vocab = components.class_model, components.vocab
        ctx = (model.class_of(vocab.get("<s>")), model.class_of(vocab.get("the")))
        assert model.argmax_class(*ctx) == model.labels.index("NOUN")
        assert class_probability(vocab.get("cat"), ctx, model) == model.emission[vocab.get("cat")]
        assert class_probability(vocab.get("fence"), ctx, model) == 0.0
