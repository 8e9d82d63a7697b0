from __future__ import annotations

import io
import json
import logging
import math
import os
import tempfile
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from models.entities import Reject

logger = logging.getLogger(__name__)

SIGNIFICANT_DIGITS = 6


def format_float(value: Any) -> Any:
    """Six significant digits for floats; everything else passes through."""
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        v = float(value)
        if math.isnan(v):
            return ""
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return f"{v:.{SIGNIFICANT_DIGITS}g}"
    return value


def _json_ready(value: Any) -> Any:
    """Round floats to six significant digits; non-finite floats become null."""
    if isinstance(value, Mapping):
        return {str(k): _json_ready(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_ready(v) for v in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        v = float(value)
        if not math.isfinite(v):
            return None
        return float(f"{v:.{SIGNIFICANT_DIGITS}g}")
    if isinstance(value, Path):
        return str(value)
    return value


def atomic_write_text(path: Path, text: str) -> Path:
    """Write to a temp file in the target directory, then rename over the target."""
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def _reject_order(reject: Reject) -> Tuple[str, int, str, str]:
    # rejects without a line (play-level) sort ahead of row rejects of the same file
    line = reject.line if reject.line is not None else -1
    return (reject.file, line, reject.play_key or "", reject.reason)


class ReportService:
    """Writes the artifacts of one subcommand under ``out_dir``."""

    def __init__(self, out_dir: str | Path, subcommand: str, output_format: str = "csv"):
        self.out_dir = Path(out_dir).expanduser()
        self.subcommand = subcommand
        self.output_format = output_format
        self.artifacts: List[Path] = []

    def _track(self, path: Path) -> Path:
        self.artifacts.append(path)
        logger.info("[ReportService] wrote %s", path)
        return path

    # ---------------------------------------------------------
    #  tabelle
    # ---------------------------------------------------------
    def write_table(self, stem: str, rows: Sequence[Mapping[str, Any]], columns: Sequence[str]) -> Path:
        """One table as CSV or JSON, following the configured output format."""
        if self.output_format == "json":
            payload = [{col: row.get(col) for col in columns} for row in rows]
            return self.write_json(f"{stem}.json", payload)
        return self.write_csv(f"{stem}.csv", rows, columns)

    def write_csv(self, name: str, rows: Sequence[Mapping[str, Any]], columns: Sequence[str]) -> Path:
        """CSV regardless of the output format (diagnostic exports)."""
        frame = pd.DataFrame(
            [[format_float(row.get(col)) for col in columns] for row in rows],
            columns=list(columns),
            dtype=object,
        )
        buffer = io.StringIO()
        frame.to_csv(buffer, index=False, lineterminator="\n")
        return self._track(atomic_write_text(self.out_dir / name, buffer.getvalue()))

    def write_json(self, name: str, payload: Any) -> Path:
        text = json.dumps(_json_ready(payload), indent=2, sort_keys=True) + "\n"
        return self._track(atomic_write_text(self.out_dir / name, text))

    def write_rejects(self, rejects: Iterable[Reject]) -> Path:
        ordered = sorted(rejects, key=_reject_order)
        lines = [json.dumps(r.to_dict(), sort_keys=True) for r in ordered]
        text = "\n".join(lines) + ("\n" if lines else "")
        return self._track(atomic_write_text(self.out_dir / "rejects.jsonl", text))

    # ---------------------------------------------------------
    #  manifest
    # ---------------------------------------------------------
    def write_manifest(
        self,
        *,
        status: str,
        exit_code: int,
        started_at: datetime,
        config: Optional[Mapping[str, Any]] = None,
        config_hash: Optional[str] = None,
        timings: Optional[Mapping[str, float]] = None,
        inputs: Sequence[Path] = (),
        row_counts: Optional[Mapping[str, Any]] = None,
        extra: Optional[Mapping[str, Any]] = None,
        error: Optional[str] = None,
    ) -> Path:
        """Manifest is written last and never raises for a missing input file."""
        files = []
        for path in inputs:
            p = Path(path)
            files.append({"path": str(p), "bytes": p.stat().st_size if p.is_file() else None})
        manifest = {
            "subcommand": self.subcommand,
            "status": status,
            "exitCode": exit_code,
            "startedAt": started_at.isoformat(),
            "finishedAt": datetime.now(timezone.utc).isoformat(),
            "config": dict(config or {}),
            "configHash": config_hash,
            "timings": dict(timings or {}),
            "inputs": files,
            "rowCounts": dict(row_counts or {}),
            "artifacts": [str(p) for p in self.artifacts],
        }
        if extra:
            manifest.update(extra)
        if error:
            manifest["error"] = error
        path = self.out_dir / f"manifest_{self.subcommand}.json"
        text = json.dumps(_json_ready(manifest), indent=2, sort_keys=True) + "\n"
        atomic_write_text(path, text)
        logger.info("[ReportService] manifest → %s (%s)", path, status)
        return path


__all__ = [
    "SIGNIFICANT_DIGITS",
    "format_float",
    "atomic_write_text",
    "ReportService",
]
