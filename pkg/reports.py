"""Report writers: deterministic JSON documents and CSV tables.

Identical inputs produce byte-identical files: JSON keys are sorted, floats
are written with `repr` precision and every CSV starts with its header row.
The writers return status dicts instead of raising.
"""

import csv
import io
import json
from pathlib import Path
from typing import Any, Dict, Iterable, Mapping, Sequence

import numpy as np

REPORT_FORMAT = "atomc-report/1"
MISSING = "none"


def _default(value: Any) -> Any:
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, (set, frozenset)):
        return sorted(value)
    if isinstance(value, tuple):
        return list(value)
    if hasattr(value, "value"):
        return value.value
    raise TypeError(f"cannot serialize {type(value).__name__}")


def to_json(data: Any) -> str:
    return json.dumps(data, indent=2, sort_keys=True, default=_default, ensure_ascii=False) + "\n"


def format_cell(value: Any) -> str:
    if value is None:
        return MISSING
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, (list, tuple)):
        return " ".join(format_cell(v) for v in value)
    return str(value)


def to_csv(columns: Sequence[str], rows: Iterable[Mapping[str, Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_cell(row.get(column)) for column in columns])
    return buffer.getvalue()


def write_text(file_path: str, content: str) -> Dict[str, Any]:
    """
    Write content to a file, creating directories if needed.

    Args:
        file_path: Path to the file (relative or absolute)
        content: Content to write to the file

    Returns:
        Dict with status and message
    """
    try:
        path = Path(file_path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(content, encoding="utf-8")
        return {
            "status": "success",
            "message": f"Wrote {len(content)} characters to {file_path}",
            "file_path": str(path),
        }
    except OSError as e:
        return {
            "status": "error",
            "message": f"Failed to write file: {e}",
            "file_path": file_path,
        }


def write_json(file_path: str, data: Any) -> Dict[str, Any]:
    return write_text(file_path, to_json(data))


def write_csv(file_path: str, columns: Sequence[str], rows: Iterable[Mapping[str, Any]]) -> Dict[str, Any]:
    return write_text(file_path, to_csv(columns, rows))


SCHEDULE_COLUMNS = ("index", "op", "kind", "traps", "qubits", "start_us", "end_us", "source")
