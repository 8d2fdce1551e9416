"""Stand-in for the fastmcp Context passed to gkreduce tools."""

from typing import Any


class MockContext:
    """Records every message and progress report a tool sends to its client."""

    def __init__(self):
        self.info_messages: list[str] = []
        self.error_messages: list[str] = []
        self.warning_messages: list[str] = []
        self.debug_messages: list[str] = []
        self.progress: list[tuple[float, float | None]] = []

    async def info(self, message: str, **extra: Any) -> None:
        self.info_messages.append(message)

    async def error(self, message: str, **extra: Any) -> None:
        self.error_messages.append(message)

    async def warning(self, message: str, **extra: Any) -> None:
        self.warning_messages.append(message)

    async def debug(self, message: str, **extra: Any) -> None:
        self.debug_messages.append(message)

    async def report_progress(self, progress: float, total: float | None = None, message: str | None = None) -> None:
        self.progress.append((progress, total))
