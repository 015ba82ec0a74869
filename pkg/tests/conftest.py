from fractions import Fraction

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

settings.register_profile(
    "fixed",
    derandomize=True,
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("fixed")


def rationals(num=9, den=9):
    return st.builds(Fraction, st.integers(-num, num), st.integers(1, den))


def nonzero_rationals(num=9, den=9):
    return rationals(num, den).filter(lambda x: x != 0)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for i in sorted(RESULTS):
        passed, note = RESULTS[i]
        terminalreporter.write_line(f"criterion {i}: {'PASS' if passed else 'FAIL'} ({note})")
