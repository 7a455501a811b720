"""Shared fixtures."""

import pytest


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    """Keep ATOMC_* settings from the developer's shell out of the tests."""
    for name in ("ATOMC_HW_DIR", "ATOMC_SEED", "ATOMC_IDLE_MODE", "ATOMC_GRID_ROWS",
                 "ATOMC_GRID_COLS"):
        monkeypatch.delenv(name, raising=False)
