from collections.abc import Iterable, Sequence
from typing import TYPE_CHECKING, Any

from rich.console import Console
from rich.table import Table
from rich.text import Text
from rich.traceback import Traceback

if TYPE_CHECKING:
    import loguru

MAX_WIDTH = 120


class TerminalHandler:
    """Singleton class for all terminal output of hypfull. Use only classmethods; do not instantiate."""

    _console: Console | None = None
    _main_col: str = "cyan"
    _use_colors: bool = True

    def __new__(cls) -> None:
        """Prevent instantiation of TerminalHandler."""
        msg = "TerminalHandler is a static utility class and cannot be instantiated."
        raise RuntimeError(msg)

    @classmethod
    def _init_console(cls) -> Console:
        """Initialize Rich console if not already done."""
        if cls._console is None:
            cls._console = Console(
                width=MAX_WIDTH,
                color_system="auto" if cls._use_colors else None,
                highlight=False,
            )
        return cls._console

    @classmethod
    def reset(cls, *, use_colors: bool = True) -> None:
        """Drop the console so the next call binds to the current stdout."""
        cls._console = None
        cls._use_colors = use_colors

    @classmethod
    def display_loguru_message(cls, message: "loguru.Message") -> None:
        """Logging handler which echoes loguru logger messages into Rich console."""
        log_level_color_map = {
            "DEBUG": "blue",
            "INFO": "white",
            "SUCCESS": "green",
            "WARNING": "yellow",
            "ERROR": "red",
            "CRITICAL": "red",
        }
        record = message.record
        level = record["level"].name
        console = cls._init_console()

        if cls._use_colors:
            color = log_level_color_map.get(level, "white")
            formatted = Text()
            formatted.append("→ ", style="white")
            formatted.append(f"[{level}] ", style=color)
            formatted.append(record["time"].strftime("%H:%M:%S "), style="white")
            formatted.append(record["message"], style=color)
        else:
            formatted = Text(f"→ [{level}] {record['time'].strftime('%H:%M:%S ')} {record['message']}")
        console.print(formatted)

        if record.get("exception"):
            exc = record["exception"]
            console.print(
                Traceback.from_exception(
                    exc.type, exc.value, exc.traceback, width=console.size.width, show_locals=False, max_frames=10
                )
            )

    @classmethod
    def display_message(cls, message: str) -> None:
        cls._init_console().print(message)

    @classmethod
    def display_table(cls, title: str, columns: Sequence[str], rows: Iterable[Sequence[Any]]) -> None:
        """Render rows as a rich table; numbers are right-aligned."""
        table = Table(title=title, title_style=cls._main_col, header_style=f"bold {cls._main_col}")
        rows = [list(row) for row in rows]
        for index, column in enumerate(columns):
            numeric = all(isinstance(row[index], int | float) for row in rows if row[index] not in ("", None))
            table.add_column(column, justify="right" if numeric else "left")
        for row in rows:
            table.add_row(*("" if value is None else str(value) for value in row))
        cls._init_console().print(table)

    @classmethod
    def display_mapping(cls, title: str, values: dict[str, Any]) -> None:
        """Two-column key/value table."""
        cls.display_table(title, ["field", "value"], [[key, value] for key, value in values.items()])
