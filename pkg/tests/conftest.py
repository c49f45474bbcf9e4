import pytest

from sceneforge.fixtures import make_object_library


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One PASS/FAIL line per acceptance criterion at the end of the run."""
    rows = []
    for status in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(status, []):
            nodeid = getattr(rep, "nodeid", "")
            if "test_acceptance" in nodeid and getattr(rep, "when", "call") == "call":
                rows.append((nodeid.split("::", 1)[-1], status))
    if rows:
        terminalreporter.write_sep("-", "acceptance criteria")
        for name, status in sorted(rows):
            tag = "PASS" if status == "passed" else "FAIL"
            terminalreporter.write_line(f"{tag}: {name}")
from sceneforge.geometry import compute_stable_poses
from sceneforge.reachability import (
    GridSpec,
    TableSpec,
    analytic_reach_oracle,
    compute_reachability_map,
)
from sceneforge.scenes import ObjectModel


@pytest.fixture(scope="session")
def object_library():
    return make_object_library()


@pytest.fixture(scope="session")
def object_models(object_library):
    return [
        ObjectModel(mesh, tuple(compute_stable_poses(mesh)))
        for mesh in object_library.values()
    ]


@pytest.fixture(scope="session")
def reach_map():
    oracle = analytic_reach_oracle((0.0, 0.0, 1.0), 0.35, 1.1)
    return compute_reachability_map(TableSpec(), GridSpec(), oracle, iterations=20)
