"""JSON encoding and report output."""
from __future__ import annotations

import json
import logging
import os
import sys
import tempfile
from dataclasses import asdict, is_dataclass
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Optional, TextIO

from .polytope import LatticePolytope

logger = logging.getLogger(__name__)

INT64_LIMIT = 1 << 63


def to_jsonable(value: Any) -> Any:
    """Plain JSON data; rationals and integers beyond 64 bits become strings."""
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, int):
        return str(value) if abs(value) >= INT64_LIMIT else value
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, LatticePolytope):
        return polytope_summary(value)
    if hasattr(value, "to_dict"):
        return to_jsonable(value.to_dict())
    if is_dataclass(value):
        return to_jsonable(asdict(value))
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    raise TypeError(f"cannot encode {type(value).__name__} as JSON")


def polytope_summary(p: LatticePolytope) -> Dict[str, Any]:
    return {
        "dim": p.dim,
        "vertices": [list(v) for v in p.vertices],
        "facets": [{"normal": list(nrm), "offset": off} for nrm, off in p.facets],
    }


def dumps(report: Any) -> str:
    return json.dumps(to_jsonable(report), indent=2, sort_keys=True, ensure_ascii=False)


def dump_lines(records: Iterable[Any]) -> str:
    return "".join(json.dumps(to_jsonable(r), sort_keys=True, ensure_ascii=False) + "\n" for r in records)


def render_text(report: Any, indent: int = 0) -> str:
    """Indented ``key: value`` rendering of a JSON-ready report."""
    data = to_jsonable(report)
    pad = "  " * indent
    if isinstance(data, dict):
        lines: List[str] = []
        for key in sorted(data):
            value = data[key]
            if isinstance(value, (dict, list)) and value and any(isinstance(v, (dict, list)) for v in (value.values() if isinstance(value, dict) else value)):
                lines.append(f"{pad}{key}:")
                lines.append(render_text(value, indent + 1))
            else:
                lines.append(f"{pad}{key}: {json.dumps(value, ensure_ascii=False)}")
        return "\n".join(lines)
    if isinstance(data, list):
        return "\n".join(
            render_text(item, indent) if isinstance(item, dict) else f"{pad}- {json.dumps(item, ensure_ascii=False)}"
            for item in data
        )
    return f"{pad}{json.dumps(data, ensure_ascii=False)}"


def write_atomic(path: str, text: str) -> None:
    """Write via a temp file in the target directory, then rename over ``path``."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, temp_path = tempfile.mkstemp(suffix=".tmp", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            handle.write(text)
        os.replace(temp_path, path)
    except Exception:
        if os.path.exists(temp_path):
            os.remove(temp_path)
        raise
    logger.info("wrote %s", path)


def emit(text: str, output: Optional[str] = None, stream: Optional[TextIO] = None) -> None:
    if output:
        write_atomic(output, text)
        return
    (stream or sys.stdout).write(text if text.endswith("\n") else text + "\n")
