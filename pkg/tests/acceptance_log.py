"""Shared record of acceptance verdicts, printed at the end of the run."""

RESULTS: dict[int, str] = {}


def record(num: int, title: str, ok: bool, detail: str = "") -> None:
    line = f"criterion {num} [{'PASS' if ok else 'FAIL'}] {title}"
    if detail:
        line += f" ({detail})"
    RESULTS[num] = line
    print(line)
