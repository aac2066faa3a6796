import os

from hypothesis import HealthCheck, settings

settings.register_profile(
    "critflow",
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
    max_examples=int(os.environ.get("CRITFLOW_EXAMPLES", "25")),
)
settings.load_profile("critflow")


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        title, ok, note, secs = RESULTS[n]
        line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {title}"
        if note:
            line += f"  [{note}]"
        terminalreporter.write_line(line + f"  ({secs:.1f}s)")
