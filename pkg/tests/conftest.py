import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from hriapproach import kernels  # noqa: E402

BACKENDS = kernels.available_backends()

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(params=sorted(BACKENDS))
def backend(request, monkeypatch):
    """Run the test once per importable kernel backend."""
    mod = BACKENDS[request.param]
    monkeypatch.setattr(kernels, "wavefront", mod.wavefront)
    monkeypatch.setattr(kernels, "astar", mod.astar)
    monkeypatch.setattr(kernels, "_impl", mod)
    return mod


@pytest.fixture
def record_acceptance():
    def record(number: int, title: str, ok: bool, detail: str = "") -> None:
        ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}"
                                + (f" -- {detail}" if detail else ""))
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
