"""
Report Storage - JSON File Persistence

Writes analysis reports and debug exports (CFG GraphML, partition lists,
rendered slices) and reads bench manifests back.
"""

import json
import os
from threading import Lock
from typing import Any, Dict, Iterable, List, Optional

from api.validators import validate_manifest, validate_report
from models.analysis_report import AnalysisReport
from models.cfg_graph import Cfg
from models.partition import Partition
from models.rendered_slice import RenderedSlice
from models.slice_program import SliceProgram
from utils.exceptions import StorageException, ValidationError
from utils.logger import get_logger


class ReportStorage:
    """
    File persistence for reports and exports

    Features:
    - Thread-safe writes
    - Parent directories created on demand
    - Reports are schema-checked before they are written
    """

    def __init__(self):
        self.logger = get_logger(__name__)
        self._lock = Lock()

    def _ensure_directory(self, path: str):
        directory = os.path.dirname(path)
        if directory and not os.path.exists(directory):
            os.makedirs(directory, exist_ok=True)
            self.logger.info(f"Created directory: {directory}")

    def _write_json(self, path: str, data: Any, operation: str):
        with self._lock:
            try:
                self._ensure_directory(path)
                with open(path, 'w', encoding='utf-8') as f:
                    json.dump(data, f, indent=2, default=str)
            except OSError as e:
                self.logger.error(f"Error writing {path}: {e}")
                raise StorageException(operation, f"Failed to write {path}: {e}", {"path": path})

    def _read_json(self, path: str, operation: str) -> Any:
        try:
            with open(path, 'r', encoding='utf-8') as f:
                return json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            self.logger.error(f"Error reading {path}: {e}")
            raise StorageException(operation, f"Failed to read {path}: {e}", {"path": path})

    # ------------------------------------------------------------------
    # Reports
    # ------------------------------------------------------------------

    def save_report(self, report: AnalysisReport, path: str) -> Dict[str, Any]:
        """
        Write a report as JSON

        Returns:
            The dictionary that was written

        Raises:
            ValidationError: The report does not match the report schema
            StorageException: The file cannot be written
        """
        data = report.to_dict()
        is_valid, errors = validate_report(data)
        if not is_valid:
            raise ValidationError('report', report.unit, "; ".join(errors))
        self._write_json(path, data, "save_report")
        self.logger.info(f"Report for {report.unit} written to {path}")
        return data

    def save_bench(self, rows: List[Dict[str, Any]], path: str):
        self._write_json(path, rows, "save_bench")

    def load_report(self, path: str) -> Dict[str, Any]:
        data = self._read_json(path, "load_report")
        is_valid, errors = validate_report(data)
        if not is_valid:
            raise ValidationError('report', path, "; ".join(errors))
        return data

    def load_manifest(self, path: str) -> List[Dict[str, Any]]:
        """
        Read a bench manifest, resolving entry paths against its directory

        Raises:
            StorageException: The manifest cannot be read
            ValidationError: The manifest does not match its schema
        """
        entries = self._read_json(path, "load_manifest")
        is_valid, errors = validate_manifest(entries)
        if not is_valid:
            raise ValidationError('manifest', path, "; ".join(errors))

        base = os.path.dirname(os.path.abspath(path))
        resolved = []
        for entry in entries:
            entry = dict(entry)
            entry['file'] = os.path.join(base, entry['file'])
            if entry.get('mock_script'):
                entry['mock_script'] = os.path.join(base, entry['mock_script'])
            resolved.append(entry)
        self.logger.info(f"Loaded manifest with {len(resolved)} entr{'y' if len(resolved) == 1 else 'ies'} from {path}")
        return resolved

    # ------------------------------------------------------------------
    # Debug exports
    # ------------------------------------------------------------------

    def export_cfg(self, cfg: Cfg, path: str, coverage: Optional[Iterable[int]] = None):
        """GraphML of the CFG (truncated view when a coverage set is given)"""
        with self._lock:
            try:
                self._ensure_directory(path)
                cfg.write_graphml(path, coverage)
            except OSError as e:
                raise StorageException("export_cfg", f"Failed to write {path}: {e}", {"path": path})
        self.logger.info(f"CFG with {len(cfg)} node(s) exported to {path}")

    def export_partitions(self, partitions: List[Partition], path: str):
        """JSON array of node-id lists, one per partition in discovery order"""
        self._write_json(path, [sorted(p.coverage) for p in partitions], "export_partitions")
        self.logger.info(f"{len(partitions)} partition(s) exported to {path}")

    def export_slices(self, slices: List[RenderedSlice], programs: List[SliceProgram], directory: str,
                      cfg: Optional[Cfg] = None) -> List[str]:
        """
        One slice_<n>.txt / slice_<n>.json pair per slice (n is the position in size order)

        With a CFG, a slice_<n>.graphml truncated view is written too.

        Returns:
            Paths of the text files
        """
        written = []
        try:
            os.makedirs(directory, exist_ok=True)
        except OSError as e:
            raise StorageException("export_slices", f"Cannot create {directory}: {e}", {"path": directory})

        for n, (rendered, program) in enumerate(zip(slices, programs)):
            stem = os.path.join(directory, f"slice_{n}")
            try:
                with open(f"{stem}.txt", 'w', encoding='utf-8') as f:
                    f.write(rendered.text)
            except OSError as e:
                raise StorageException("export_slices", f"Failed to write {stem}.txt: {e}", {"path": stem})
            meta = rendered.to_dict()
            meta["slice"] = program.to_dict()
            self._write_json(f"{stem}.json", meta, "export_slices")
            if cfg is not None:
                self.export_cfg(cfg, f"{stem}.graphml", program.partition.coverage)
            written.append(f"{stem}.txt")
        self.logger.info(f"{len(written)} slice(s) exported to {directory}")
        return written
