import os

import pytest

HEAVY = os.environ.get("ORTHO_INVAR_HEAVY") == "1"


def pytest_collection_modifyitems(config, items):
    if HEAVY:
        return
    skip = pytest.mark.skip(reason="long run; set ORTHO_INVAR_HEAVY=1")
    for item in items:
        if "heavy" in item.keywords:
            item.add_marker(skip)
