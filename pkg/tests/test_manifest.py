"""
Unit tests for build manifests.
"""

from pathlib import Path

import pytest

from lite_ngram.config.manifest import BuildManifest, load_manifest
from lite_ngram.errors import ManifestError


def _write(tmp_path, text):
    path = tmp_path / "build.manifest"
    path.write_text(text, encoding='utf-8')
    return path


class TestLoadManifest:
    """Test cases for load_manifest."""

    def test_parse(self, tmp_path):
        """Keys, comments and relative paths are handled."""
        path = _write(tmp_path, "\n".join([
            "# news model",
            "corpus = a.txt, b.txt",
            "corpus = more/c.txt   # third file",
            "output = out/news",
            "lexicon = lexicon.tsv",
            "n_uni = 5000",
            "lambda = 0.3",
            "r = 0.25",
            "lowercase = no",
            "max_bytes = 1000000",
            "",
        ]))
        manifest = load_manifest(path)
        assert manifest.corpus_paths == [tmp_path / "a.txt", tmp_path / "b.txt", tmp_path / "more" / "c.txt"]
        assert manifest.output == tmp_path / "out" / "news"
        assert manifest.name == "news"
        assert manifest.lexicon_path == tmp_path / "lexicon.tsv"
        assert manifest.blacklist_path is None
        assert (manifest.n_uni, manifest.lam, manifest.r) == (5000, 0.3, 0.25)
        assert manifest.lowercase is False
        assert manifest.max_bytes == 1_000_000

    def test_missing_output(self, tmp_path):
        """The output basename is required."""
        with pytest.raises(ManifestError, match="output"):
            load_manifest(_write(tmp_path, "corpus = a.txt\n"))

    @pytest.mark.parametrize("line,message", [
        ("colour = blue", "unknown key"),
        ("k = three", "bad value"),
        ("lowercase = maybe", "bad value"),
        ("just some words", "key = value"),
    ])
    def test_bad_lines(self, tmp_path, line, message):
        """Unknown keys, bad values and malformed lines name their line."""
        with pytest.raises(ManifestError, match=message) as excinfo:
            load_manifest(_write(tmp_path, f"output = m\n{line}\n"))
        assert ":2:" in str(excinfo.value)

    def test_unreadable(self, tmp_path):
        """A missing manifest is a manifest error."""
        with pytest.raises(ManifestError, match="cannot read"):
            load_manifest(tmp_path / "absent.manifest")


class TestBuildManifest:
    """Test cases for BuildManifest validation."""

    def _manifest(self, corpus_file, **overrides):
        values = dict(corpus_paths=[corpus_file], output=corpus_file.parent / "m", k=3,
                      lam=0.4, r=0.5, n_uni=100, n_bi=100, n_tri=100, rare_threshold=1)
        values.update(overrides)
        return BuildManifest(**values)

    def test_valid(self, corpus_file):
        """A complete manifest validates."""
        self._manifest(corpus_file).validate()

    @pytest.mark.parametrize("overrides", [
        {"corpus_paths": []},
        {"corpus_paths": [Path("/nonexistent/corpus.txt")]},
        {"lexicon_path": Path("/nonexistent/lexicon.tsv")},
        {"n_uni": 4},
        {"n_tri": 0},
        {"k": 10},
        {"lam": 0.0},
        {"r": 1.5},
        {"alpha": 0.0},
        {"max_classes": 300},
        {"class_topk": 0},
        {"rare_threshold": 0},
        {"workers": 0},
    ])
    def test_invalid(self, corpus_file, overrides):
        """Missing files and out-of-range parameters are rejected."""
        with pytest.raises(ManifestError):
            self._manifest(corpus_file, **overrides).validate()

    def test_to_dict(self, corpus_file):
        """Paths serialise as strings."""
        data = self._manifest(corpus_file).to_dict()
        assert data["corpus_paths"] == [str(corpus_file)]
        assert data["output"] == str(corpus_file.parent / "m")
        assert data["k"] == 3
