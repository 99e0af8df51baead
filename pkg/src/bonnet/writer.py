"""
Report and constants file writing.

Reports are JSON documents with keys in a fixed order and no timestamps or
host data, so identical runs produce byte-identical files. Floats are
written with 17 significant digits; non-finite values become null.
"""

import json
import logging
import math
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np

from .identities import GaussBonnetConstants

logger = logging.getLogger(__name__)


def format_float(value: float) -> str:
    """17 significant digits, keeping a decimal point so the value reads back as a float."""
    if not math.isfinite(value):
        raise ValueError(f"Out of range float value: {value!r}")
    text = format(value, ".17g")
    if "." not in text and "e" not in text:
        text += ".0"
    return text


class FloatDigitsEncoder(json.JSONEncoder):
    """JSON encoder writing floats through format_float."""

    def iterencode(self, o, _one_shot=False):
        markers = {} if self.check_circular else None
        encoder = json.encoder.encode_basestring_ascii if self.ensure_ascii else json.encoder.encode_basestring
        return json.encoder._make_iterencode(
            markers, self.default, encoder, self.indent, format_float,
            self.key_separator, self.item_separator, self.sort_keys, self.skipkeys, _one_shot,
        )(o, 0)


def dump_json(document: Any) -> str:
    """Serialize a JSON-ready document with two-space indentation and a trailing newline."""
    return json.dumps(document, indent=2, allow_nan=False, cls=FloatDigitsEncoder) + "\n"


def to_plain(value: Any) -> Any:
    """Convert NumPy scalars/arrays, enums and dataclass records to JSON-ready values."""
    if isinstance(value, Enum):
        return value.value
    if hasattr(value, "to_dict"):
        return to_plain(value.to_dict())
    if isinstance(value, dict):
        return {str(key): to_plain(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_plain(item) for item in value]
    if isinstance(value, np.ndarray):
        return [to_plain(item) for item in value.tolist()]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    if isinstance(value, Path):
        return str(value)
    return value


class ReportWriter:
    """
    Writes one JSON report per command.
    """

    def __init__(self, output_path: Path):
        """
        Initialize the report writer.

        Args:
            output_path: Report file to write
        """
        self.output_path = Path(output_path)
        self.output_path.parent.mkdir(parents=True, exist_ok=True)

        logger.info(f"Initialized report writer with output: {self.output_path}")

    def build_document(self, command: str, config: Dict[str, Any], records: List[Any]) -> Dict[str, Any]:
        """
        Assemble the report document.

        Args:
            command: CLI command that produced the records
            config: Run configuration echo
            records: Identity reports, scan results or calibration records

        Returns:
            Document with tool, version, command, config, reports and summary
        """
        from . import __version__

        reports = [to_plain(record) for record in records]
        passed = sum(1 for report in reports if report.get("pass"))
        return {
            "tool": "bonnet",
            "version": __version__,
            "command": command,
            "config": to_plain(config),
            "reports": reports,
            "summary": {"total": len(reports), "passed": passed, "failed": len(reports) - passed},
        }

    def write(self, command: str, config: Dict[str, Any], records: List[Any]) -> Path:
        """
        Write the report file.

        Returns:
            Path to the written report
        """
        document = self.build_document(command, config, records)
        text = dump_json(document)
        try:
            self.output_path.write_text(text, encoding="utf-8")
        except OSError as e:
            logger.error(f"Failed to write report: {e}")
            raise
        logger.info(f"Report written to: {self.output_path} ({document['summary']['passed']}/"
                    f"{document['summary']['total']} passed)")
        return self.output_path


def write_constants(constants: GaussBonnetConstants, path: Path, extra: Optional[Dict[str, Any]] = None) -> Path:
    """
    Write a constants file {"n": ..., "k-independent": ..., "c": [...]}.

    Args:
        constants: Constants to store
        path: Destination
        extra: Additional diagnostic keys appended after the required ones

    Returns:
        Path to the written file
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    document = constants.to_dict()
    if extra:
        document.update(to_plain(extra))
    path.write_text(dump_json(to_plain(document)), encoding="utf-8")
    logger.info(f"Constants written to: {path}")
    return path
