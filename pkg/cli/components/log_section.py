import sys
from datetime import datetime

from tqdm import tqdm


class LogSection:
    """Activity log written to stderr, so stdout carries results only"""

    def __init__(self, stream=None, quiet=False, show_progress=True):
        self.stream = stream
        self.quiet = quiet
        self.show_progress = show_progress

    @property
    def _stream(self):
        return self.stream if self.stream is not None else sys.stderr

    def add_message(self, message):
        """Write one timestamped line"""
        if self.quiet:
            return
        timestamp = datetime.now().strftime("%H:%M:%S")
        self._stream.write(f"[{timestamp}] {message}\n")
        self._stream.flush()

    def progress(self, iterable, total=None, desc=None):
        """Wrap an iterable in a tqdm bar on the log stream"""
        return tqdm(iterable, total=total, desc=desc, file=self._stream,
                    disable=self.quiet or not self.show_progress, leave=False)

    def write_error(self, payload):
        """Machine-readable error line; printed even when quiet"""
        self._stream.write(payload + "\n")
        self._stream.flush()
