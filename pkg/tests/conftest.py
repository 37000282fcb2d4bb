import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from latres.koszul import GeneratedModule, LatticeModule  # noqa: E402
from latres.lattice import certify_lattice  # noqa: E402
from latres.linalg import kernel_basis  # noqa: E402
from latres.resolution import resolve_equivariant  # noqa: E402

FIXTURES = os.path.join(os.path.dirname(os.path.dirname(__file__)), "fixtures")


def segment():
    return LatticeModule(certify_lattice([[1, -1]], 2))


def koszul_xy():
    return GeneratedModule(2, ((1, 0), (0, 1)))


def twisted_cubic():
    return LatticeModule(certify_lattice(kernel_basis([[1, 1, 1, 1], [0, 1, 2, 3]]), 4))


def laplacian_k3():
    return LatticeModule(certify_lattice([[2, -1, -1], [-1, 2, -1]], 3))


@pytest.fixture(scope="session")
def fixtures_dir():
    return FIXTURES


@pytest.fixture(scope="session")
def resolutions():
    return {
        "segment": resolve_equivariant(segment()),
        "xy": resolve_equivariant(koszul_xy()),
        "cubic": resolve_equivariant(twisted_cubic()),
        "k3": resolve_equivariant(laplacian_k3()),
    }


def pytest_terminal_summary(terminalreporter):
    """One PASS/FAIL line per acceptance criterion."""
    outcome: dict = {}
    for key in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(key, []):
            props = dict(getattr(rep, "user_properties", []) or [])
            name = props.get("criterion")
            if name is None:
                continue
            ok = rep.passed and outcome.get(name, True)
            outcome[name] = ok
    if not outcome:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(outcome, key=lambda s: int(s.split()[0].lstrip("C"))):
        terminalreporter.write_line(f"{'PASS' if outcome[name] else 'FAIL'}  {name}")
