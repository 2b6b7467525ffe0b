from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""
    witness: Any = None


@dataclass(frozen=True)
class Report:
    """Outcome of a validation or verification pass.

    Violations are content, not exceptions: callers decide whether a failed
    report is fatal.
    """

    items: tuple[Check, ...] = field(default_factory=tuple)

    @property
    def passed(self) -> bool:
        return all(item.passed for item in self.items)

    def __bool__(self):
        return self.passed

    @property
    def first_failure(self) -> Check | None:
        return next((item for item in self.items if not item.passed), None)

    def __getitem__(self, name: str) -> Check:
        for item in self.items:
            if item.name == name:
                return item
        raise KeyError(name)
