"""Shared store for the one-line acceptance results printed at the end of a run."""

LINES: dict[int, str] = {}


def record(number: int, ok: bool, detail: str) -> None:
    LINES[number] = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
