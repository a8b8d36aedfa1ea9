import re

import pytest

from gaitsym.ingest import preprocess
from gaitsym.synth import GaitParams, generate_gait


@pytest.fixture
def make_traj():
    """Cleaned trajectories for a synthetic record."""

    def make(**kw):
        return preprocess(generate_gait(GaitParams(**kw)))

    return make


_CRITERION = re.compile(r"test_criterion_(\d+)_(\w+)")


def pytest_terminal_summary(terminalreporter):
    lines = []
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            if getattr(rep, "when", "call") != "call" and outcome != "error":
                continue
            m = _CRITERION.search(rep.nodeid)
            if m:
                verdict = "PASS" if outcome == "passed" else "FAIL"
                lines.append((int(m.group(1)), f"criterion {m.group(1)}: {verdict} ({m.group(2).replace('_', ' ')})"))
    if lines:
        terminalreporter.section("acceptance")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
