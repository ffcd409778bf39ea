"""
Unit tests for report rendering.
"""

import json

import pytest

from lite_ngram.evaluation import TestSet, evaluate
from lite_ngram.jobs import BuildReport
from lite_ngram.reports import (
    eval_record,
    format_table,
    load_schema,
    read_avro_report,
    write_avro_report,
    write_json_report,
)


class _Silent:
    def next_word_prediction(self, ctx, k=None):
        return []

    def word_completion(self, ctx, prefix, k=None):
        return []


class TestJsonReport:
    """Test cases for JSON reports."""

    def test_mapping(self, tmp_path):
        """Keys are sorted and the file ends with a newline."""
        path = tmp_path / "report.json"
        write_json_report({"b": 1, "a": [1, 2]}, path)
        text = path.read_text(encoding='utf-8')
        assert text.endswith("\n")
        assert text.index('"a"') < text.index('"b"')
        assert json.loads(text) == {"a": [1, 2], "b": 1}

    def test_object_with_to_dict(self, tmp_path):
        """Dataclass reports are written through to_dict."""
        path = tmp_path / "build.json"
        write_json_report(BuildReport(name="en", sentences=3), path)
        data = json.loads(path.read_text(encoding='utf-8'))
        assert data["name"] == "en"
        assert data["sentences"] == 3


class TestAvroReport:
    """Test cases for Avro reports."""

    def test_schemas_parse(self):
        """Both shipped schemas are valid Avro."""
        assert load_schema("eval_report.avsc")["name"] == "lite_ngram.reports.EvalReport"
        assert load_schema("build_report.avsc")["name"] == "lite_ngram.reports.BuildReport"

    def test_missing_schema(self):
        """An unknown schema name raises."""
        with pytest.raises(FileNotFoundError):
            load_schema("absent.avsc")

    def test_eval_records(self, tmp_path, fixture_lines):
        """Evaluation records survive the container file."""
        report = evaluate(TestSet.from_lines(fixture_lines), _Silent(), 3)
        report.sizes = {"vocab": 120, "ngram": 400}
        report.timing = {"queries": 12, "p50_ms": 0.5, "wc_p95_ms": None}
        path = tmp_path / "eval.avro"
        assert write_avro_report([eval_record("fixture", report)], "eval_report.avsc", path) == 1
        [record] = read_avro_report(path)
        assert record["model"] == "fixture"
        assert record["ksr_percent"] == 0.0
        assert record["testset_lines"] == 8
        assert record["resident_bytes"] is None
        assert record["sizes"] == {"vocab": 120, "ngram": 400}
        assert record["timing"] == {"queries": 12.0, "p50_ms": 0.5, "wc_p95_ms": None}

    def test_build_record(self, tmp_path):
        """Build reports map onto their schema."""
        report = BuildReport(name="en", sentences=10, tokens=50, coverage=0.9,
                             file_sizes={"en.vocab": 10})
        path = tmp_path / "build.avro"
        write_avro_report([report.to_record()], "build_report.avsc", path)
        assert read_avro_report(path) == [report.to_record()]


class TestFormatTable:
    """Test cases for format_table."""

    def test_layout(self):
        """Columns are padded, floats get two decimals and None is a dash."""
        table = format_table([["en", 12.5, None]], header=("model", "ksr", "rss"))
        assert table.splitlines() == [
            "model  ksr    rss",
            "-----  -----  ---",
            "en     12.50  -",
        ]

    def test_without_header(self):
        """Rows alone are rendered without a rule."""
        assert format_table([[1, 2], [30, 4]]) == "1   2\n30  4"

    def test_empty(self):
        """Nothing renders as an empty string."""
        assert format_table([]) == ""
