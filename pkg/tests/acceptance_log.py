"""Per-criterion result lines, shared between the acceptance tests and conftest."""

RESULTS: dict[int, str] = {}


def record(number: int, ok: bool, detail: str) -> str:
    line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS[number] = line
    print(line, flush=True)
    return line
