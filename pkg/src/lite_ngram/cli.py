"""
Command-line interface: build, suggest, evaluate, inspect and bench.

Exit codes: 0 success, 1 usage error, 2 data or format error.
"""

import argparse
import logging
import sys
import time
import zlib
from pathlib import Path
from typing import List, Optional, Sequence, TextIO, Tuple

from .arpa.arpa_io import save_arpa
from .binfmt.class_file import decode_class_model
from .binfmt.data_file import deserialize_model, payload_size, section_sizes, tables_to_arpa
from .binfmt.quantizer import QuantParams, dequantize
from .binfmt.vocab_trie import VocabTrie
from .config.manifest import BuildManifest, load_manifest
from .counting.vocabulary import Vocabulary
from .engine.engine import Engine, EngineConfig, load_model, model_paths
from .errors import LiteNgramError
from .evaluation.bench import TimedEngine, bench, fit_linearity
from .evaluation.evalkit import TestSet, evaluate
from .jobs.build_job import ModelBuildJob
from .preprocessing.text_preprocessor import TextPreprocessor
from .reports.report_writer import eval_record, format_table, write_avro_report, write_json_report

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2

# build flag -> manifest field
_BUILD_OVERRIDES = {
    'blacklist': 'blacklist_path', 'lexicon': 'lexicon_path', 'n_uni': 'n_uni', 'n_bi': 'n_bi',
    'n_tri': 'n_tri', 'rare_threshold': 'rare_threshold', 'k': 'k', 'lam': 'lam', 'r': 'r',
    'alpha': 'alpha', 'max_classes': 'max_classes', 'class_topk': 'class_topk',
    'workers': 'workers', 'max_bytes': 'max_bytes',
}


class UsageError(Exception):
    """Bad command-line usage."""


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _k_value(text: str) -> int:
    value = int(text)
    if not 1 <= value <= 9:
        raise argparse.ArgumentTypeError(f"K must be between 1 and 9, got {value}")
    return value


def _engine_config(args: argparse.Namespace) -> EngineConfig:
    defaults = EngineConfig.from_config()
    return EngineConfig(
        k=args.k if args.k is not None else defaults.k,
        lam=args.lam if args.lam is not None else defaults.lam,
        r=args.r if args.r is not None else defaults.r,
    )


def _load(basename: str, args: argparse.Namespace) -> Engine:
    vocab_path, ngram_path, class_path = model_paths(basename)
    return load_model(vocab_path, ngram_path, class_path, _engine_config(args),
                      lenient=getattr(args, 'lenient', None))


def _manifest_from_args(args: argparse.Namespace) -> BuildManifest:
    if args.config:
        manifest = load_manifest(args.config)
        if args.corpus:
            manifest.corpus_paths = [Path(p) for p in args.corpus]
        if args.output:
            manifest.output = Path(args.output)
    else:
        if not args.corpus or not args.output:
            raise UsageError("build needs --config or both --corpus and --output")
        manifest = BuildManifest(corpus_paths=[Path(p) for p in args.corpus], output=Path(args.output))
    for flag, field_name in _BUILD_OVERRIDES.items():
        value = getattr(args, flag)
        if value is not None:
            setattr(manifest, field_name, Path(value) if field_name.endswith('_path') else value)
    return manifest


def cmd_build(args: argparse.Namespace, out: TextIO) -> int:
    manifest = _manifest_from_args(args)
    job = ModelBuildJob(manifest, configure_logging=False)
    report = job.run()
    rows = [
        ("sentences", report.sentences),
        ("tokens", report.tokens),
        ("unigrams", report.unigrams),
        ("bigrams kept", f"{report.bigrams_kept}/{report.bigram_candidates}"),
        ("trigrams kept", f"{report.trigrams_kept}/{report.trigram_candidates}"),
        ("coverage", report.coverage),
        ("classes", report.n_classes),
    ]
    rows += [(name, size) for name, size in sorted(report.file_sizes.items())]
    out.write(format_table(rows, header=("build", manifest.name)) + "\n")
    if args.avro:
        write_avro_report([report.to_record()], "build_report.avsc", args.avro)
    return EXIT_OK


def parse_query(line: str, preprocessor: TextPreprocessor) -> Tuple[List[str], Optional[str]]:
    """Split "context words|prefix" into context tokens and an optional prefix."""
    if "|" in line:
        context, prefix = line.rsplit("|", 1)
    else:
        context, prefix = line, ""
    words = [w for sentence in preprocessor.line_sentences(context) for w in sentence]
    prefix = prefix.strip()
    if preprocessor.config.lowercase_input:
        prefix = prefix.lower()
    return words, prefix or None


def _answer(engine: Engine, line: str, preprocessor: TextPreprocessor, out: TextIO) -> None:
    ctx, prefix = parse_query(line, preprocessor)
    if prefix is None:
        suggestions = engine.next_word_prediction(ctx)
    else:
        suggestions = engine.word_completion(ctx, prefix)
    if not suggestions:
        out.write("(no suggestions)\n")
    for rank, suggestion in enumerate(suggestions, start=1):
        out.write(f"{rank}. {suggestion.word}\t{suggestion.score:.6g}\t{suggestion.branch.value}\n")


def cmd_suggest(args: argparse.Namespace, out: TextIO) -> int:
    engine = _load(args.model, args)
    preprocessor = TextPreprocessor()
    if args.query:
        for line in args.query:
            _answer(engine, line, preprocessor, out)
        return EXIT_OK
    interactive = args.interactive
    while True:
        if interactive:
            out.write("> ")
            out.flush()
        line = sys.stdin.readline()
        if not line:
            break
        _answer(engine, line.rstrip("\n"), preprocessor, out)
    return EXIT_OK


def cmd_evaluate(args: argparse.Namespace, out: TextIO) -> int:
    start = time.perf_counter()
    engine = _load(args.model, args)
    load_ms = (time.perf_counter() - start) * 1000
    testset = TestSet.load(args.testset)
    timed = TimedEngine(engine)
    report = evaluate(testset, timed, engine.config.k, max_workers=args.workers)
    report.timing = {"load_ms": load_ms, **timed.timing()}
    report.sizes = {path.name: path.stat().st_size for path in model_paths(args.model) if path.exists()}
    report.resident_bytes = engine.resident_bytes()

    output = Path(args.output) if args.output else Path(f"{args.model}.eval.json")
    write_json_report(report, output)
    if args.avro:
        write_avro_report([eval_record(Path(args.model).name, report)], "eval_report.avsc", args.avro)
    rows = [
        ("K", report.k),
        ("KSR %", report.ksr_percent),
        ("NWP %", report.nwp_percent),
        ("n_c", report.n_c),
        ("n_k", report.n_k),
        ("words", report.words),
        ("lines", report.testset.lines),
        ("suggest p50 ms", report.timing["p50_ms"]),
        ("suggest p95 ms", report.timing["p95_ms"]),
    ]
    out.write(format_table(rows, header=("metric", "value")) + "\n")
    return EXIT_OK


def cmd_inspect(args: argparse.Namespace, out: TextIO) -> int:
    vocab_path, ngram_path, class_path = model_paths(args.model)
    quant = QuantParams.from_config()
    trie = VocabTrie.from_bytes(vocab_path.read_bytes())
    data = ngram_path.read_bytes()
    tables = deserialize_model(data, quant)

    out.write(format_table([
        ("n_uni", tables.n_uni), ("n_bi", tables.n_bi), ("n_tri", tables.n_tri),
        ("K", tables.k), ("lambda", tables.lam), ("r", tables.r),
        ("vocab file bytes", vocab_path.stat().st_size),
        ("ngram file bytes", len(data)),
        ("payload bytes", len(zlib.decompress(data))),
        ("closed-form payload bytes", payload_size(tables)),
    ], header=("field", "value")) + "\n\n")
    out.write(format_table(sorted(section_sizes(tables).items(), key=lambda kv: kv[0]),
                           header=("section", "bytes")) + "\n")

    if args.top:
        ranked = sorted(range(tables.n_uni), key=lambda i: (int(tables.unigrams[i]), i))[:args.top]
        out.write("\n" + format_table(
            [(trie.word(i), int(tables.unigrams[i]), dequantize(int(tables.unigrams[i]), quant))
             for i in ranked], header=("unigram", "q", "p")) + "\n")
        groups = sorted(tables.bigrams, key=lambda g: -len(g[1]))[:args.top]
        out.write("\n" + format_table(
            [(trie.word(ctx), len(successors),
              " ".join(trie.word(w) for w, _ in successors[:tables.k])) for ctx, successors in groups],
            header=("bigram context", "successors", "best")) + "\n")

    if args.classes:
        model = decode_class_model(class_path.read_bytes(), quant)
        rows = [(class_id, label, int((model.word_class == class_id).sum()),
                 " ".join(trie.word(w) for w in model.class_topk[class_id]))
                for class_id, label in enumerate(model.labels)]
        out.write("\n" + format_table(rows, header=("class", "label", "words", "top-K")) + "\n")

    if args.arpa:
        save_arpa(tables_to_arpa(tables, Vocabulary(trie.words), quant), args.arpa)
        out.write(f"\nwrote dequantised ARPA view to {args.arpa}\n")
    return EXIT_OK


def cmd_bench(args: argparse.Namespace, out: TextIO) -> int:
    testset = TestSet.load(args.testset)
    rows = []
    sizes: List[float] = []
    medians: List[float] = []
    for basename in args.models:
        files = [path for path in model_paths(basename) if path.exists()]
        report = bench(lambda: _load(basename, args), testset, trials=args.trials,
                       k=_engine_config(args).k, model_files=files)
        sizes.append(float(model_paths(basename)[1].stat().st_size))
        medians.append(report.load_median_ms)
        rows.append((Path(basename).name, report.load_median_ms, report.load_mean_ms,
                     report.mean_suggestion_ms, report.queries, sum(report.rom_bytes.values())))
    out.write(format_table(rows, header=("model", "load median ms", "load mean ms",
                                         "suggest mean ms", "queries", "rom bytes")) + "\n")
    if len(args.models) >= 2:
        fit = fit_linearity(sizes, medians)
        out.write(f"\nload time vs data-file size: slope {fit.slope:.3g} ms/byte, "
                  f"R^2 {fit.r_squared:.3f}\n")
    return EXIT_OK


def _add_engine_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--k", type=_k_value, help="Suggestions per query (1-9)")
    parser.add_argument("--lambda", dest="lam", type=float, help="Stupid Backoff factor")
    parser.add_argument("--r", type=float, help="Class interpolation ratio")
    parser.add_argument("--lenient", action="store_true", default=None,
                        help="Run without the class term if the class file is missing")


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="lite-ngram", description=__doc__.strip().splitlines()[0])
    parser.add_argument("--log-level", default="WARNING",
                        choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    parser.add_argument("--log-file", help="Also write logs to this file")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)

    p_build = sub.add_parser("build", help="Build a model from corpus text")
    p_build.add_argument("--config", help="Manifest file (key = value lines)")
    p_build.add_argument("--corpus", nargs="+", help="Corpus text files")
    p_build.add_argument("--output", help="Output basename, e.g. models/en")
    p_build.add_argument("--blacklist")
    p_build.add_argument("--lexicon", help="word<TAB>LABEL class lexicon")
    p_build.add_argument("--n-uni", dest="n_uni", type=int)
    p_build.add_argument("--n-bi", dest="n_bi", type=int)
    p_build.add_argument("--n-tri", dest="n_tri", type=int)
    p_build.add_argument("--rare-threshold", dest="rare_threshold", type=int)
    p_build.add_argument("--k", type=_k_value)
    p_build.add_argument("--lambda", dest="lam", type=float)
    p_build.add_argument("--r", type=float)
    p_build.add_argument("--alpha", type=float)
    p_build.add_argument("--max-classes", dest="max_classes", type=int)
    p_build.add_argument("--class-topk", dest="class_topk", type=int)
    p_build.add_argument("--max-bytes", dest="max_bytes", type=int)
    p_build.add_argument("--workers", type=int)
    p_build.add_argument("--avro", help="Also write the build report as an Avro record")
    p_build.set_defaults(handler=cmd_build)

    p_suggest = sub.add_parser("suggest", help="Query a model with 'context|prefix' lines")
    p_suggest.add_argument("model", help="Model basename")
    p_suggest.add_argument("--query", action="append", help="One query; repeatable")
    p_suggest.add_argument("--interactive", action="store_true", help="Prompt until EOF")
    _add_engine_flags(p_suggest)
    p_suggest.set_defaults(handler=cmd_suggest)

    p_eval = sub.add_parser("evaluate", help="Compute KSR and NWP rate on a test set")
    p_eval.add_argument("model")
    p_eval.add_argument("testset", help="UTF-8 text, one sentence per line")
    p_eval.add_argument("--output", help="JSON report path (default <model>.eval.json)")
    p_eval.add_argument("--avro", help="Also write an Avro report")
    p_eval.add_argument("--workers", type=int, default=1)
    _add_engine_flags(p_eval)
    p_eval.set_defaults(handler=cmd_evaluate)

    p_inspect = sub.add_parser("inspect", help="Dump model headers, sections and tables")
    p_inspect.add_argument("model")
    p_inspect.add_argument("--arpa", help="Write the dequantised ARPA view here")
    p_inspect.add_argument("--top", type=int, default=0, help="Show the top N entries")
    p_inspect.add_argument("--classes", action="store_true", help="Show the class tables")
    p_inspect.set_defaults(handler=cmd_inspect)

    p_bench = sub.add_parser("bench", help="Time loading and queries")
    p_bench.add_argument("models", nargs="+", help="Model basenames")
    p_bench.add_argument("--testset", required=True)
    p_bench.add_argument("--trials", type=int, default=5)
    _add_engine_flags(p_bench)
    p_bench.set_defaults(handler=cmd_bench)
    return parser


def _setup_logging(level: str, log_file: Optional[str]) -> None:
    handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if log_file:
        handlers.append(logging.FileHandler(log_file))
    logging.basicConfig(
        level=getattr(logging, level),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=handlers,
        force=True,
    )


def main(argv: Optional[Sequence[str]] = None, out: Optional[TextIO] = None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    _setup_logging(args.log_level, args.log_file)
    try:
        return args.handler(args, out)
    except UsageError as e:
        print(f"lite-ngram: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (LiteNgramError, OSError, ValueError) as e:
        logger.error(f"{args.command} failed: {e}")
        print(f"lite-ngram: {args.command} failed: {e}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
