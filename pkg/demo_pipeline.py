#!/usr/bin/env python3
"""
Demo script running the whole model pipeline on a synthetic corpus.
Builds a model, answers a few queries and scores it on held-out lines,
without needing any corpus download.
"""

import logging
import sys
from pathlib import Path

from lite_ngram.config.manifest import BuildManifest
from lite_ngram.config.storage_config import get_storage_config
from lite_ngram.engine import load_model, model_paths
from lite_ngram.evaluation import TestSet, evaluate, synthetic_corpus
from lite_ngram.jobs import ModelBuildJob
from lite_ngram.reports import format_table, write_json_report
from lite_ngram.storage import StorageFactory

logging.basicConfig(level=logging.INFO, format='%(asctime)s - %(name)s - %(levelname)s - %(message)s')
logger = logging.getLogger(__name__)


class PipelineDemo:
    """Build, query and evaluate a model end to end."""

    def __init__(self, vocab_size: int = 2000, n_tokens: int = 100_000):
        self.vocab_size = vocab_size
        self.n_tokens = n_tokens

        # Artifacts go wherever the storage configuration points
        storage_config = get_storage_config()
        self.storage = StorageFactory.create_adapter(storage_config)
        self.root = Path(storage_config['storage_root'])
        self.basename = self.root / "demo"

    def prepare_corpus(self):
        """Write a Zipf-distributed corpus and hold back a tenth of it."""
        lines = synthetic_corpus(self.vocab_size, self.n_tokens, seed=42)
        cut = int(len(lines) * 0.9)
        self.storage.save("demo_corpus.txt", ("\n".join(lines[:cut]) + "\n").encode('utf-8'))
        logger.info(f"Wrote {cut} training lines, holding back {len(lines) - cut}")
        return self.storage.full_path("demo_corpus.txt"), lines[cut:]

    def run_build(self, corpus_path: Path):
        """Run the build job against the demo corpus."""
        manifest = BuildManifest(corpus_paths=[corpus_path], output=self.basename,
                                 n_uni=self.vocab_size, n_bi=4 * self.vocab_size,
                                 n_tri=4 * self.vocab_size, rare_threshold=2)
        job = ModelBuildJob(manifest, storage=self.storage, configure_logging=False)
        report = job.run()
        logger.info(f"Build stages: {', '.join(job.completed_stages)}")
        return report

    def run_queries(self, engine, held_out):
        """Show next-word and completion suggestions for a few held-out contexts."""
        for line in held_out[:3]:
            words = line.rstrip(".").split()
            ctx, target = words[:2], words[2]
            predicted = [s.word for s in engine.next_word_prediction(ctx)]
            completed = [s.word for s in engine.word_completion(ctx, target[:2])]
            logger.info(f"{' '.join(ctx)!r} -> next {predicted}, "
                        f"'{target[:2]}' -> {completed} (actual {target!r})")

    def run_full_pipeline(self):
        """Run the complete pipeline demo."""
        logger.info("Starting full pipeline demo")

        logger.info("=== STEP 1: CORPUS ===")
        corpus_path, held_out = self.prepare_corpus()

        logger.info("=== STEP 2: BUILD ===")
        build_report = self.run_build(corpus_path)

        logger.info("=== STEP 3: QUERY ===")
        engine = load_model(*model_paths(self.basename))
        self.run_queries(engine, held_out)

        logger.info("=== STEP 4: EVALUATE ===")
        rows = []
        for k in (1, 3, 5):
            report = evaluate(TestSet.from_lines(held_out), engine, k, max_workers=4)
            rows.append((k, report.ksr_percent, report.nwp_percent))
        eval_report = evaluate(TestSet.from_lines(held_out), engine, 3)
        eval_report.resident_bytes = engine.resident_bytes()
        write_json_report(eval_report, f"{self.basename}.eval.json")

        print(format_table(rows, header=("K", "KSR %", "NWP %")))
        print(format_table(sorted(build_report.file_sizes.items()), header=("file", "bytes")))
        logger.info("Full pipeline demo completed!")


def main():
    """Main function to run the pipeline demo."""
    try:
        demo = PipelineDemo()
        demo.run_full_pipeline()
    except KeyboardInterrupt:
        logger.info("Demo interrupted by user")
    except Exception as e:
        logger.error(f"Demo failed: {e}")
        raise


if __name__ == "__main__":
    sys.exit(main())
