import re
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

_ACCEPT: dict[str, list[tuple[bool, str]]] = {}


@pytest.fixture
def criterion():
    """record(number, ok, detail): one entry per sub-check of an acceptance criterion."""
    def record(key, ok, detail=""):
        _ACCEPT.setdefault(str(key), []).append((bool(ok), detail))
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPT:
        return
    terminalreporter.section("acceptance criteria")
    groups: dict[int, list[str]] = {}
    for key in _ACCEPT:
        groups.setdefault(int(re.match(r"\d+", key).group()), []).append(key)
    for num in sorted(groups):
        keys = sorted(groups[num])
        ok = all(p for k in keys for p, _ in _ACCEPT[k])
        if len(keys) == 1:
            detail = "; ".join(d for _, d in _ACCEPT[keys[0]] if d)
        else:
            detail = " | ".join(f"{k} {'PASS' if all(p for p, _ in _ACCEPT[k]) else 'FAIL'}: "
                                + "; ".join(d for _, d in _ACCEPT[k] if d) for k in keys)
        terminalreporter.write_line(f"criterion {num:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
