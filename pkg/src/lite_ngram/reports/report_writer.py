"""
JSON, Avro and plain-text renderings of build, evaluation and bench reports.
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, Iterable, List, Mapping, Sequence, Union

import fastavro

logger = logging.getLogger(__name__)

SCHEMA_DIR = Path(__file__).resolve().parent.parent / "schemas"


def load_schema(schema_name: str) -> Dict[str, Any]:
    """
    Load and parse an Avro schema shipped with the package.
    
    Args:
        schema_name: File name under schemas/, e.g. 'eval_report.avsc'
        
    Returns:
        Parsed schema
        
    Raises:
        FileNotFoundError: If the schema does not exist
    """
    schema_path = SCHEMA_DIR / schema_name
    try:
        with open(schema_path, 'r', encoding='utf-8') as f:
            schema = json.load(f)
    except FileNotFoundError:
        logger.error(f"Schema file not found: {schema_path}")
        raise
    return fastavro.parse_schema(schema)


def write_json_report(report: Union[Mapping[str, Any], Any], path: Union[str, Path]) -> None:
    """Write a report (a mapping or an object with to_dict) as indented, key-sorted JSON."""
    data = report.to_dict() if hasattr(report, "to_dict") else dict(report)
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(data, f, indent=2, sort_keys=True, ensure_ascii=False, default=str)
        f.write("\n")
    logger.info(f"Wrote report {path}")


def write_avro_report(records: Iterable[Mapping[str, Any]], schema_name: str,
                      path: Union[str, Path]) -> int:
    """
    Write records into an Avro container file.
    
    Args:
        records: Records matching the schema
        schema_name: Schema file under schemas/
        path: Output path
        
    Returns:
        Number of records written
    """
    schema = load_schema(schema_name)
    rows = [dict(record) for record in records]
    with open(path, 'wb') as f:
        fastavro.writer(f, schema, rows)
    logger.info(f"Wrote {len(rows)} Avro records to {path}")
    return len(rows)


def read_avro_report(path: Union[str, Path]) -> List[Dict[str, Any]]:
    with open(path, 'rb') as f:
        return list(fastavro.reader(f))


def eval_record(model: str, report: Any) -> Dict[str, Any]:
    """Flatten an EvalReport into an eval_report.avsc record."""
    return {
        "model": model,
        "k": report.k,
        "ksr_percent": report.ksr_percent,
        "nwp_percent": report.nwp_percent,
        "n_c": report.n_c,
        "n_k": report.n_k,
        "words": report.words,
        "nwp_hits": report.nwp_hits,
        "testset_lines": report.testset.lines,
        "testset_words": report.testset.words,
        "testset_characters": report.testset.characters,
        "resident_bytes": report.resident_bytes,
        "sizes": dict(report.sizes),
        "timing": {name: None if value is None else float(value)
                   for name, value in (report.timing or {}).items()},
    }


def format_table(rows: Sequence[Sequence[Any]], header: Sequence[str] = ()) -> str:
    """Left-aligned text table; floats get two decimals."""
    def cell(value: Any) -> str:
        if isinstance(value, float):
            return f"{value:.2f}"
        return "-" if value is None else str(value)

    lines = [[cell(v) for v in row] for row in ([list(header)] if header else []) + [list(r) for r in rows]]
    if not lines:
        return ""
    widths = [max(len(line[i]) for line in lines if i < len(line)) for i in range(max(map(len, lines)))]
    rendered = ["  ".join(value.ljust(widths[i]) for i, value in enumerate(line)).rstrip() for line in lines]
    if header:
        rendered.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(rendered)
