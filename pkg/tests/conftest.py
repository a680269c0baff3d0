"""Shared fixtures: the chirped-transfer run is computed once per session."""

import pytest

from chirptls import build_grid, fig3_preset, run_backends


@pytest.fixture(scope="session")
def fig3():
    return fig3_preset()


@pytest.fixture(scope="session")
def fig3_grid(fig3):
    return build_grid(fig3.drive)


@pytest.fixture(scope="session")
def fig3_traces(fig3, fig3_grid):
    # all four backends on the shared grid; reused by several test modules
    return run_backends(fig3, fig3_grid)
