import pytest

from circtel.harness import McConfig, run_suite

_CACHE = {}


def run_check(check_id, config=None):
    """Run one registered check (default configuration results are cached per session)."""
    if config is not None:
        return run_suite([check_id], config)[0]
    if check_id not in _CACHE:
        _CACHE[check_id] = run_suite([check_id], McConfig())[0]
    return _CACHE[check_id]


@pytest.fixture
def check():
    return run_check
