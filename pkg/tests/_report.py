"""Collects one summary line per acceptance criterion for the terminal report."""

LINES = []


def record(number, ok, detail):
    LINES.append(f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}")
    print(LINES[-1])
    return ok
