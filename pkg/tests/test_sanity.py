"""
Self-training sanity check on a public-domain text.

The default corpus is tests/data/genesis_exodus.txt, about 50k tokens of
King James Version text, one verse per line. LITE_NGRAM_SANITY_CORPUS points
the check at another UTF-8 text. The first 90% of the lines train the model
and the rest are the test set.
"""

import os
from pathlib import Path

import pytest

from lite_ngram.config.manifest import BuildManifest
from lite_ngram.counting import count_ngrams, coverage_curve
from lite_ngram.engine import load_model, model_paths
from lite_ngram.evaluation import TestSet, evaluate
from lite_ngram.jobs import ModelBuildJob
from lite_ngram.preprocessing import PrepConfig, preprocess

SANITY_CORPUS = Path(os.getenv('LITE_NGRAM_SANITY_CORPUS') or Path(__file__).parent / "data" / "genesis_exodus.txt")

pytestmark = pytest.mark.integration


@pytest.fixture(scope="module")
def split(tmp_path_factory):
    lines = [line for line in SANITY_CORPUS.read_text(encoding='utf-8').splitlines() if line.strip()]
    cut = int(len(lines) * 0.9)
    root = tmp_path_factory.mktemp("sanity")
    train = root / "train.txt"
    train.write_text("\n".join(lines[:cut]) + "\n", encoding='utf-8')
    return root, train, lines[cut:]


class TestSelfTraining:
    """Direction-of-effect checks on a held-out split."""

    def test_ksr_and_nwp_floors(self, split):
        """K=3 saves at least 30% of keystrokes and predicts at least 8% of words."""
        root, train, held_out = split
        manifest = BuildManifest(corpus_paths=[train], output=root / "sanity", rare_threshold=2,
                                 k=3, n_uni=20_000, n_bi=50_000, n_tri=50_000)
        ModelBuildJob(manifest, configure_logging=False).run()
        engine = load_model(*model_paths(root / "sanity"), lenient=True)
        report = evaluate(TestSet.from_lines(held_out), engine, 3, max_workers=4)
        assert report.ksr_percent >= 30.0
        assert report.nwp_percent >= 8.0

    def test_coverage_curve_concave(self, split):
        """Coverage never drops and each step adds less than the one before."""
        _, train, _ = split
        sentences, _ = preprocess(train.read_bytes(), PrepConfig(rare_threshold=1))
        counts = count_ngrams(sentences)
        curve = [value for _, value in coverage_curve(counts, [500, 1000, 1500, 2000, 2500])]
        assert curve == sorted(curve)
        gains = [b - a for a, b in zip(curve, curve[1:])]
        assert all(later <= earlier + 1e-12 for earlier, later in zip(gains, gains[1:]))
