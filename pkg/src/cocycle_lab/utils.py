"""Core utility functions: logging, seeded randomness, number formatting, fan-out."""

import json
import os
from collections.abc import Callable, Iterable
from concurrent.futures import ThreadPoolExecutor
from typing import Any, TypeVar

import numpy as np
from rich.console import Console

from cocycle_lab.config import FLOAT_DIGITS, LOG_FILE_NAME, log_dir, thread_cap
from cocycle_lab.errors import RepresentationFormatError

# Reports go to stdout or --out; everything human-facing goes to stderr.
console = Console(stderr=True)

T = TypeVar("T")
R = TypeVar("R")


def _append_log_line(channel: str, message: str) -> None:
    """Append '[channel] message' to the run log when a log directory is set. Never raises."""
    directory = log_dir()
    if not directory:
        return
    try:
        os.makedirs(directory, exist_ok=True)
        with open(os.path.join(directory, LOG_FILE_NAME), "a", encoding="utf-8") as f:
            f.write(f"[{channel}] {message}\n")
    except OSError:
        pass


def log(channel: str, message: str, style: str = "") -> None:
    """Write a message to the console (with optional style) and the run log."""
    if style:
        console.print(message, style=style)
    else:
        console.print(message)

    _append_log_line(channel, message)


def log_banner(channel: str, message: str, style: str) -> None:
    """Log a framed banner line."""
    log(channel, "======================================", style=style)
    log(channel, f" {message}", style=style)
    log(channel, "======================================", style=style)


def make_rng(seed: int) -> np.random.Generator:
    """Return the single seeded generator all randomness flows through."""
    return np.random.Generator(np.random.PCG64(seed))


def format_float(value: float) -> str:
    """Format a float with 12 significant digits.

    Pure function: integers print without a trailing '.0' and non-finite
    values print as 'inf', '-inf' or 'nan'.
    """
    if value is None:
        return ""
    return f"{float(value):.{FLOAT_DIGITS}g}"


def round_float(value: float | None) -> float | None:
    """Round to 12 significant digits for JSON output (None and non-finite become None)."""
    if value is None:
        return None
    value = float(value)
    if not np.isfinite(value):
        return None
    return float(format_float(value))


def fan_out(func: Callable[[T], R], items: Iterable[T], workers: int | None = None) -> list[R]:
    """Map func over items, in parallel up to the COCYCLE_LAB_THREADS cap.

    Results come back in input order regardless of completion order.
    """
    items = list(items)
    workers = thread_cap() if workers is None else max(1, workers)
    if workers == 1 or len(items) <= 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))


def parse_json_text(text: str, source: str = "<input>") -> Any:
    """Parse JSON text, converting decode errors into RepresentationFormatError with location."""
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise RepresentationFormatError(f"{source}: {exc.msg}", exc.lineno, exc.colno) from exc


def read_json_file(path: str) -> Any:
    """Read and parse a JSON file."""
    try:
        with open(path, "r", encoding="utf-8") as f:
            text = f.read()
    except OSError as exc:
        raise RepresentationFormatError(f"cannot read {path}: {exc.strerror}") from exc
    return parse_json_text(text, source=path)
