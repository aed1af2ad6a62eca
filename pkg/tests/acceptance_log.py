"""Pass/fail lines collected by test_acceptance.py and printed at the end of the run."""

LINES: list[str] = []


def record(number: int, ok: bool, elapsed: float, limit: float | None, detail: str) -> str:
    budget = f"{elapsed:6.2f}s" + (f" / {limit:g}s" if limit is not None else "")
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  [{budget}]  {detail}"
    LINES.append(line)
    print(line)
    return line
