"""
Report writers: CSV and JSON rendering plus an atomic output bundle

Every output of a run is staged in memory and written once, at the end, to a
temporary file beside its destination followed by an atomic rename.
"""

import csv
import io
import json
import logging
import os
import tempfile
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Union

logger = logging.getLogger(__name__)


def _cell(value: Any) -> Any:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return value


def csv_text(rows: Iterable[Dict[str, Any]], fieldnames: Sequence[str]) -> str:
    """Render dict rows as CSV; None becomes an empty cell"""
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=list(fieldnames), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({name: _cell(row.get(name)) for name in fieldnames})
    return buffer.getvalue()


def json_text(document: Any) -> str:
    return json.dumps(document, indent=2, sort_keys=False) + "\n"


class OutputBundle:
    """Collects named text outputs and commits them together"""

    def __init__(self, out_dir: Union[str, Path]) -> None:
        self.out_dir = Path(out_dir)
        self._files: Dict[str, str] = {}

    def add(self, name: str, content: str) -> None:
        if name in self._files:
            raise ValueError(f"output {name} staged twice")
        self._files[name] = content

    def add_csv(self, name: str, rows: Iterable[Dict[str, Any]], fieldnames: Sequence[str]) -> None:
        self.add(name, csv_text(rows, fieldnames))

    def add_json(self, name: str, document: Any) -> None:
        self.add(name, json_text(document))

    @property
    def names(self) -> List[str]:
        return sorted(self._files)

    def __contains__(self, name: str) -> bool:
        return name in self._files

    def commit(self, manifest: Optional[Dict[str, Any]] = None) -> List[Path]:
        """Write every staged file (and manifest.json last) via temp file + rename"""
        self.out_dir.mkdir(parents=True, exist_ok=True)
        staged = dict(self._files)
        if manifest is not None:
            manifest = dict(manifest)
            manifest["outputs"] = sorted(staged)
            staged["manifest.json"] = json_text(manifest)

        written = []
        for name in sorted(staged, key=lambda n: (n == "manifest.json", n)):
            target = self.out_dir / name
            fd, tmp_name = tempfile.mkstemp(prefix=f".{name}.", dir=self.out_dir)
            try:
                with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
                    f.write(staged[name])
                os.replace(tmp_name, target)
            except BaseException:
                if os.path.exists(tmp_name):
                    os.unlink(tmp_name)
                raise
            logger.debug("wrote %s", target)
            written.append(target)
        return written
