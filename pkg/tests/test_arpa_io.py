"""
Unit tests for score assignment and the ARPA text format.
"""

import io
import math

import pytest

from lite_ngram.arpa import (
    NO_PROBABILITY_LOG10,
    ArpaEntry,
    ArpaModel,
    assign_scores,
    load_arpa,
    read_arpa,
    save_arpa,
    write_arpa,
)
from lite_ngram.counting import Vocabulary
from lite_ngram.errors import ArpaParseError


def _arpa_text(model):
    sink = io.StringIO()
    write_arpa(model, sink)
    return sink.getvalue()


SMALL_ARPA = """# stupid-backoff lambda=0.4
\\data\\
ngram 1=5
ngram 2=1
ngram 3=0

\\1-grams:
-99.000000\t<s>
-0.301030\t<e>
-99.000000\t<unk>
-99.000000\t<bad>
-0.301030\thello

\\2-grams:
0.000000\t<s> hello

\\end\\
"""


class TestAssignScores:
    """Test cases for relative-frequency scores."""

    def test_unigram_scores(self, components):
        """Unigrams score count / tokens excluding <s>."""
        arpa, vocab = components.arpa, components.vocab
        unigrams = {entry.ids[0]: entry.log10_score for entry in arpa.entries(1)}
        assert unigrams[vocab.get("the")] == round(math.log10(12 / 56), 6)
        assert unigrams[vocab.get("<e>")] == round(math.log10(8 / 56), 6)
        assert unigrams[vocab.get("<s>")] == NO_PROBABILITY_LOG10
        assert unigrams[vocab.get("<bad>")] == NO_PROBABILITY_LOG10

    def test_conditional_scores(self, components):
        """Bigrams and trigrams score their conditional relative frequency."""
        arpa, vocab = components.arpa, components.vocab
        the, cat, sat = vocab.get("the"), vocab.get("cat"), vocab.get("sat")
        bigrams = {entry.ids: entry.log10_score for entry in arpa.entries(2)}
        trigrams = {entry.ids: entry.log10_score for entry in arpa.entries(3)}
        assert bigrams[(the, cat)] == round(math.log10(3 / 12), 6)
        assert trigrams[(the, cat, sat)] == round(math.log10(2 / 3), 6)

    def test_entries_sorted_and_dense(self, components):
        """Each order is sorted by ID tuple; unigrams cover every ID."""
        arpa = components.arpa
        assert [e.ids for e in arpa.entries(1)] == [(i,) for i in range(len(components.vocab))]
        for order in (2, 3):
            ids = [e.ids for e in arpa.entries(order)]
            assert ids == sorted(ids)

    def test_conditionals_sum_to_at_most_one(self, components):
        """Successor probabilities of a context never exceed 1."""
        totals = {}
        for entry in components.arpa.entries(2):
            totals[entry.ids[0]] = totals.get(entry.ids[0], 0.0) + 10 ** entry.log10_score
        assert max(totals.values()) <= 1.0 + 1e-5

    def test_lambda_recorded(self, components):
        """The backoff factor travels with the model."""
        assert components.arpa.lam == 0.4
        assert _arpa_text(components.arpa).startswith("# stupid-backoff lambda=0.4\n\\data\\\n")


class TestArpaFormat:
    """Test cases for reading and writing ARPA text."""

    def test_header_counts(self, components):
        """The data section declares the count of every order."""
        text = _arpa_text(components.arpa)
        counts = components.arpa.header_counts()
        for order in (1, 2, 3):
            assert f"ngram {order}={counts[order]}\n" in text
        assert text.endswith("\\end\\\n")

    def test_round_trip(self, components):
        """Reading written text reproduces the model."""
        text = _arpa_text(components.arpa)
        model = read_arpa(io.StringIO(text), components.vocab)
        assert model.orders == components.arpa.orders
        assert model.lam == components.arpa.lam
        assert _arpa_text(model) == text

    def test_round_trip_through_file(self, tmp_path, tight_components):
        """save_arpa and load_arpa use UTF-8 files."""
        path = tmp_path / "model.arpa"
        save_arpa(tight_components.arpa, path)
        assert load_arpa(path, tight_components.vocab).orders == tight_components.arpa.orders

    def test_parse_small_model(self):
        """A hand-written model parses, empty sections included."""
        vocab = Vocabulary(["<s>", "<e>", "<unk>", "<bad>", "hello"])
        model = read_arpa(io.StringIO(SMALL_ARPA), vocab)
        assert model.header_counts() == {1: 5, 2: 1, 3: 0}
        assert model.entries(2) == [ArpaEntry(0.0, (0, 4))]

    def test_unknown_words_map_to_unk(self):
        """Surfaces missing from the vocabulary resolve to <unk>."""
        vocab = Vocabulary(["<s>", "<e>", "<unk>", "<bad>", "hello"])
        model = read_arpa(io.StringIO(SMALL_ARPA.replace("<s> hello", "<s> bye")), vocab)
        assert model.entries(2)[0].ids == (0, 2)

    def test_count_mismatch(self):
        """A section shorter than its header count is rejected with its location."""
        vocab = Vocabulary(["<s>", "<e>", "<unk>", "<bad>", "hello"])
        text = SMALL_ARPA.replace("ngram 2=1", "ngram 2=2")
        with pytest.raises(ArpaParseError) as excinfo:
            read_arpa(io.StringIO(text), vocab)
        assert excinfo.value.section == "2-grams"
        assert excinfo.value.line_no is not None

    def test_bad_score(self):
        """Unparsable scores are rejected."""
        vocab = Vocabulary(["<s>", "<e>", "<unk>", "<bad>", "hello"])
        with pytest.raises(ArpaParseError, match="unparsable score"):
            read_arpa(io.StringIO(SMALL_ARPA.replace("0.000000\t<s>", "abc\t<s>")), vocab)

    def test_missing_end(self):
        """A file without \\end\\ is incomplete."""
        vocab = Vocabulary(["<s>", "<e>", "<unk>", "<bad>", "hello"])
        with pytest.raises(ArpaParseError, match="end"):
            read_arpa(io.StringIO(SMALL_ARPA.replace("\\end\\\n", "")), vocab)

    def test_missing_header(self):
        """Text without a data header is rejected."""
        vocab = Vocabulary(["<s>", "<e>", "<unk>", "<bad>", "hello"])
        with pytest.raises(ArpaParseError):
            read_arpa(io.StringIO("just text\n"), vocab)

    def test_wrong_arity(self):
        """Entries with the wrong number of words are rejected."""
        vocab = Vocabulary(["<s>", "<e>", "<unk>", "<bad>", "hello"])
        with pytest.raises(ArpaParseError, match="expected 2 words"):
            read_arpa(io.StringIO(SMALL_ARPA.replace("0.000000\t<s> hello", "0.000000\t<s>")), vocab)

    def test_empty_model(self):
        """A model without entries writes a valid file."""
        vocab = Vocabulary(["<s>", "<e>", "<unk>", "<bad>"])
        model = ArpaModel(vocab=vocab)
        text = _arpa_text(model)
        assert read_arpa(io.StringIO(text), vocab).header_counts() == {1: 0, 2: 0, 3: 0}
