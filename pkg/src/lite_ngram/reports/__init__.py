"""
Report writers.
"""

from .report_writer import (
    eval_record,
    format_table,
    load_schema,
    read_avro_report,
    write_avro_report,
    write_json_report,
)

__all__ = [
    'eval_record', 'format_table', 'load_schema', 'read_avro_report',
    'write_avro_report', 'write_json_report',
]
