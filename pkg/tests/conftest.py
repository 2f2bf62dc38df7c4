import pytest

from pmefront import verify


@pytest.fixture(scope="session")
def reference_runs():
    """The m=2, dr=0.05, t_end=200 runs for N = 1, 2, 3 (computed in parallel, once)."""
    runs = verify.ReferenceRuns(jobs=3)
    runs.ensure((1, 2, 3))
    return runs
