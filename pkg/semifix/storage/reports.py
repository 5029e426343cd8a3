"""
Report and verification history storage

Reports are written as JSON; every verification run is appended to
<home>/history.json so that dimensions can be compared across sessions.
"""

import json
import logging
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

from semifix.api.schemas import ReportFile
from semifix.storage.config import load_runtime_settings

logger = logging.getLogger(__name__)


class ReportStorage:
    """Report files plus the verification history"""

    def __init__(self, data_dir: Optional[Path] = None):
        """
        Initialize report storage.

        Args:
            data_dir: Custom data directory. Defaults to SEMIFIX_HOME (~/.semifix)
        """
        if data_dir is None:
            self.data_dir = load_runtime_settings().home
        else:
            self.data_dir = Path(data_dir)

        self.data_dir.mkdir(parents=True, exist_ok=True)
        self.history_file = self.data_dir / "history.json"

    # --- Reports ---

    @staticmethod
    def render(report: ReportFile) -> str:
        """Deterministic JSON text of a report"""
        return json.dumps(report.model_dump(by_alias=True), indent=2, sort_keys=True) + "\n"

    # --- History ---

    def load_history(self) -> List[Dict[str, Any]]:
        """
        Verification history, oldest first.

        Returns:
            List of entries, or empty list if the file doesn't exist

        Raises:
            ValueError: If the file is corrupted
        """
        if not self.history_file.exists():
            return []
        try:
            history = json.loads(self.history_file.read_text(encoding="utf-8"))
        except json.JSONDecodeError as e:
            raise ValueError(f"Corrupted history file: invalid JSON - {e}")
        if not isinstance(history, list):
            raise ValueError("Corrupted history file: expected list")
        return history

    def save_history(self, history: List[Dict[str, Any]]) -> bool:
        if not isinstance(history, list):
            raise ValueError("History must be a list")
        self.history_file.write_text(json.dumps(history, indent=2) + "\n", encoding="utf-8")
        return True

    def append_history(self, entry: Dict[str, Any]) -> bool:
        """Append one verification run, stamping it with the current UTC time"""
        if not isinstance(entry, dict):
            raise ValueError("Entry must be a dictionary")
        history = self.load_history()
        history.append({"timestamp": datetime.now(timezone.utc).isoformat(), **entry})
        return self.save_history(history)

    def get_recent_entries(self, count: int = 10) -> List[Dict[str, Any]]:
        history = self.load_history()
        return history[-count:] if len(history) > count else history

    def filter_entries(self, filter_func: Callable[[Dict[str, Any]], bool]) -> List[Dict[str, Any]]:
        return [entry for entry in self.load_history() if filter_func(entry)]

    def clear_history(self) -> bool:
        return self.save_history([])
