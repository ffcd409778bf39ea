"""
Model build job.

Runs the whole pipeline from raw corpus files to the three model files
(plus the ARPA text and a JSON report) and commits the artifact set at once.
"""

import io
import itertools
import json
import logging
import sys
import time
from contextlib import ExitStack
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, TypeVar

from ..arpa.arpa_io import ArpaModel, assign_scores, write_arpa
from ..binfmt.class_file import encode_class_model
from ..binfmt.data_file import serialize_model
from ..binfmt.fwo import build_fwo
from ..binfmt.quantizer import QuantParams
from ..binfmt.vocab_trie import build_vocab_trie
from ..classes.class_model import ClassLexicon, ClassModel, build_class_stats, build_word_class, load_lexicon
from ..config.manifest import BuildManifest
from ..counting.ngram_counter import ModelCaps, NgramCounts, count_ngrams, count_ngrams_sharded, coverage
from ..counting.vocabulary import Vocabulary, select_vocabulary
from ..errors import BuildError, LiteNgramError
from ..preprocessing.text_preprocessor import PrepConfig, load_blacklist, preprocess
from ..preprocessing.tokens import Sentence
from ..pruning.pruner import PrunedNgrams, PruneParams, prune
from ..storage.storage_adapter import LocalStorageAdapter, StorageAdapter

T = TypeVar("T")


@dataclass
class BuildReport:
    """What a build produced."""
    
    name: str
    sentences: int = 0
    tokens: int = 0
    unigrams: int = 0
    bigram_candidates: int = 0
    bigrams_kept: int = 0
    trigram_candidates: int = 0
    trigrams_kept: int = 0
    min_kept_trigram_score: Optional[float] = None
    coverage: float = 0.0
    n_classes: int = 0
    duration_seconds: float = 0.0
    file_sizes: Dict[str, int] = field(default_factory=dict)
    prep: Dict[str, Any] = field(default_factory=dict)
    manifest: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    def to_record(self) -> Dict[str, Any]:
        """Record matching build_report.avsc."""
        keys = ("name", "sentences", "tokens", "unigrams", "bigram_candidates", "bigrams_kept",
                "trigram_candidates", "trigrams_kept", "coverage", "n_classes",
                "duration_seconds", "file_sizes")
        return {key: getattr(self, key) for key in keys}


class ModelBuildJob:
    """Job turning a build manifest into a model artifact set."""
    
    def __init__(self, manifest: BuildManifest, storage: Optional[StorageAdapter] = None,
                 log_file: Optional[str] = None, configure_logging: bool = True):
        """
        Initialize the build job.
        
        Args:
            manifest: Build manifest
            storage: Artifact storage; defaults to the output's directory
            log_file: Optional log file next to stdout logging
            configure_logging: Install the job's logging handlers
        """
        self.manifest = manifest
        self.storage = storage or LocalStorageAdapter(str(manifest.output.parent))
        self.quant = QuantParams.from_config()

        # Job state
        self.current_stage: Optional[str] = None
        self.completed_stages: List[str] = []
        self.report = BuildReport(name=manifest.name, manifest=manifest.to_dict())

        if configure_logging:
            self._setup_logging(log_file)
        self.logger = logging.getLogger(__name__)

    def _setup_logging(self, log_file: Optional[str]) -> None:
        """Setup logging configuration."""
        handlers: List[logging.Handler] = [logging.StreamHandler(sys.stdout)]
        if log_file:
            handlers.append(logging.FileHandler(log_file))
        logging.basicConfig(
            level=logging.INFO,
            format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
            handlers=handlers,
        )

    def _stage(self, name: str, action: Callable[[], T]) -> T:
        """Run one stage, wrapping failures in a BuildError naming it."""
        self.current_stage = name
        stage_start = time.time()
        self.logger.info(f"Stage '{name}' started")
        try:
            result = action()
        except BuildError:
            raise
        except (LiteNgramError, OSError, ValueError) as e:
            self.logger.error(f"Stage '{name}' failed: {str(e)}")
            raise BuildError(name, str(e)) from e
        self.completed_stages.append(name)
        self.logger.info(f"Stage '{name}' finished in {time.time() - stage_start:.2f}s")
        return result

    def _preprocess(self) -> List[Sentence]:
        manifest = self.manifest
        blacklist = load_blacklist(manifest.blacklist_path) if manifest.blacklist_path else frozenset()
        config = PrepConfig(rare_threshold=manifest.rare_threshold, blacklist=blacklist,
                            lowercase_input=manifest.lowercase, max_bytes=manifest.max_bytes)
        with ExitStack() as stack:
            files = [stack.enter_context(open(path, 'rb')) for path in manifest.corpus_paths]
            sentences, summary = preprocess(itertools.chain.from_iterable(files), config)
        self.report.prep = summary.to_dict()
        self.report.sentences = len(sentences)
        self.report.tokens = summary.tokens
        return sentences

    def _count(self, sentences: List[Sentence]) -> NgramCounts:
        workers = self.manifest.workers
        if workers <= 1:
            return count_ngrams(sentences)
        shards = [sentences[i::workers] for i in range(workers)]
        return count_ngrams_sharded(shards, max_workers=workers)

    def _classes(self, counts: NgramCounts, vocab: Vocabulary) -> ClassModel:
        manifest = self.manifest
        lexicon = load_lexicon(manifest.lexicon_path) if manifest.lexicon_path else ClassLexicon()
        assignment = build_word_class(lexicon, vocab, manifest.max_classes)
        return build_class_stats(assignment, counts, vocab, manifest.class_topk)

    def _encode(self, counts: NgramCounts, vocab: Vocabulary, arpa: ArpaModel,
                class_model: ClassModel) -> Dict[str, bytes]:
        manifest = self.manifest
        name = manifest.name
        arpa_text = io.StringIO()
        write_arpa(arpa, arpa_text)
        fwo = build_fwo(counts, vocab, manifest.k)
        return {
            f"{name}.vocab": build_vocab_trie(vocab).to_bytes(),
            f"{name}.ngram": serialize_model(arpa, fwo, self.quant, manifest.lam, manifest.r),
            f"{name}.class": encode_class_model(class_model, self.quant),
            f"{name}.arpa": arpa_text.getvalue().encode('utf-8'),
        }

    def run(self) -> BuildReport:
        """
        Run every stage and write the artifacts.
        
        Returns:
            BuildReport
            
        Raises:
            ManifestError: If the manifest is invalid; nothing has been read yet
            BuildError: If a stage fails; no artifact is written
        """
        start = time.time()
        self.manifest.validate()
        manifest = self.manifest
        self.logger.info(f"Building model {manifest.name!r} from {len(manifest.corpus_paths)} corpus files")

        sentences = self._stage("preprocess", self._preprocess)
        counts = self._stage("count", lambda: self._count(sentences))
        caps = ModelCaps(n_uni=manifest.n_uni, n_bi=manifest.n_bi, n_tri=manifest.n_tri)
        vocab = self._stage("vocabulary", lambda: select_vocabulary(counts, caps))
        pruned: PrunedNgrams = self._stage(
            "prune", lambda: prune(counts, vocab, PruneParams(caps=caps, alpha=manifest.alpha)))
        self._stage("closure", pruned.check_closure)
        arpa = self._stage("score", lambda: assign_scores(pruned, counts, manifest.lam))
        class_model = self._stage("classes", lambda: self._classes(counts, vocab))
        artifacts = self._stage("serialize", lambda: self._encode(counts, vocab, arpa, class_model))

        report = self.report
        report.unigrams = len(vocab)
        report.bigram_candidates = pruned.report.bigram_candidates
        report.bigrams_kept = pruned.report.bigrams_kept
        report.trigram_candidates = pruned.report.trigram_candidates
        report.trigrams_kept = pruned.report.trigrams_kept
        report.min_kept_trigram_score = pruned.report.min_kept_trigram_score
        report.coverage = coverage(counts, vocab)
        report.n_classes = class_model.n_classes
        report.file_sizes = {path: len(data) for path, data in artifacts.items()}
        report.duration_seconds = time.time() - start

        report_bytes = (json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n").encode('utf-8')
        artifacts[f"{manifest.name}.report.json"] = report_bytes
        self._stage("write", lambda: self.storage.save_many(artifacts))
        self.current_stage = None
        self.logger.info(f"Build of {manifest.name!r} completed in {report.duration_seconds:.2f}s: "
                         f"{report.unigrams} unigrams, {report.bigrams_kept} bigrams, "
                         f"{report.trigrams_kept} trigrams")
        return report

    def get_status(self) -> Dict[str, Any]:
        """
        Get current job status.
        
        Returns:
            Dictionary with current job status.
        """
        return {
            'model': self.manifest.name,
            'current_stage': self.current_stage,
            'completed_stages': list(self.completed_stages),
            'report': self.report.to_dict(),
        }
