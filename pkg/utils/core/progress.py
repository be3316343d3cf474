"""
Status and progress reporting shared by simulations and experiments.
"""
import logging
from typing import Callable, Optional

StatusCallback = Callable[[str, float], None]


class StatusReporter:
    """Mixin holding a status string, a progress fraction and an optional callback"""

    def __init__(self):
        self.status = "idle"
        self.progress = 0.0
        self._status_callback: Optional[StatusCallback] = None

    def set_status_callback(self, callback: Optional[StatusCallback]):
        """Set the callback for status updates"""
        self._status_callback = callback

    def update_status(self, status: str, progress: float):
        """Update status and progress, then notify the callback"""
        self.status = status
        self.progress = min(max(float(progress), 0.0), 1.0)
        logging.getLogger(type(self).__module__).debug("%s (%.0f%%)", status, 100 * self.progress)
        if self._status_callback:
            self._status_callback(status, self.progress)
