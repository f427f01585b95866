import time

from acceptance_log import RESULTS

SUITE_LIMIT_S = 120.0
_start = time.perf_counter()


def pytest_terminal_summary(terminalreporter):
    if not RESULTS:
        return
    elapsed = time.perf_counter() - _start
    tr = terminalreporter
    tr.section("acceptance criteria")
    for line in sorted(RESULTS, key=lambda s: int(s.split()[1].rstrip(":"))):
        tr.write_line(line)
    verdict = "PASS" if elapsed < SUITE_LIMIT_S else "FAIL"
    tr.write_line(f"criterion 11 (suite runtime): {verdict}  {elapsed:.1f} s, limit {SUITE_LIMIT_S:.0f} s")
