"""One line per acceptance criterion, printed in the pytest summary."""

LINES: list[str] = []


def record(number: int, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'} criterion {number:2d}: {detail}"
    print(line)
    LINES.append(line)
