import sys

from colorama import Fore, Style

from .diagnostics import ERROR, NOTE, WARNING

SEVERITY_COLORS = {
    ERROR: Fore.RED,
    WARNING: Fore.YELLOW,
    NOTE: Fore.CYAN,
}


class Console:
    """Writes diagnostics and notes to stderr; stdout is left to the artifacts."""

    def __init__(self, color="auto", verbose=False, stream=None):
        self.color = color
        self.verbose = verbose
        self._stream = stream

    @property
    def stream(self):
        return self._stream or sys.stderr

    def use_color(self):
        if self.color == "always":
            return True
        if self.color == "never":
            return False
        isatty = getattr(self.stream, "isatty", None)
        return bool(isatty and isatty())

    def _paint(self, text, color):
        if not self.use_color():
            return text
        return f"{color}{text}{Style.RESET_ALL}"

    def diagnostic(self, d):
        severity = self._paint(d.severity, SEVERITY_COLORS.get(d.severity, ""))
        print(f"{d.file}:{d.line}:{d.column}: {severity}: {d.message}", file=self.stream)

    def diagnostics(self, items):
        for d in items:
            self.diagnostic(d)

    def note(self, message):
        if self.verbose:
            print(self._paint(message, Fore.CYAN), file=self.stream)

    def error(self, message):
        print(f"grammarworks: {self._paint('error', Fore.RED)}: {message}", file=self.stream)
