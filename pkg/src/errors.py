"""Exception types shared across the simulator."""

from dataclasses import dataclass
from typing import List, Optional


@dataclass
class Diagnostic:
    """One configuration problem, located by dotted key path and YAML line."""
    path: str
    message: str
    line: Optional[int] = None

    def __str__(self) -> str:
        where = f"line {self.line}: " if self.line is not None else ""
        return f"{where}{self.path}: {self.message}"


class ConfigError(ValueError):
    """Scenario configuration failed to load or validate."""

    def __init__(self, diagnostics: List[Diagnostic], source: Optional[str] = None):
        self.diagnostics = list(diagnostics)
        self.source = source
        header = f"Invalid configuration{f' ({source})' if source else ''}"
        body = "\n".join(f"  {d}" for d in self.diagnostics)
        super().__init__(f"{header}:\n{body}")


class InvariantViolation(RuntimeError):
    """A model invariant was broken while a run was executing."""
