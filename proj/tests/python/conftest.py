import os
import pathlib

import pytest


@pytest.fixture(scope="session")
def fixtures():
    root = os.environ.get("HOPFBIF_FIXTURES")
    if root:
        return pathlib.Path(root)
    return pathlib.Path(__file__).resolve().parents[1] / "fixtures"
