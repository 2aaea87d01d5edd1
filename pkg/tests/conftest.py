import os

import pytest


def pytest_addoption(parser):
    parser.addoption("--skip-large", action="store_true", default=False,
                     help="skip the long-running sporadic table rows (also ABQUOT_SKIP_LARGE=1)")


@pytest.fixture(scope="session")
def include_large(request) -> bool:
    if request.config.getoption("--skip-large"):
        return False
    return os.environ.get("ABQUOT_SKIP_LARGE", "") not in ("1", "true", "yes")
