import json
from pathlib import Path

import numpy as np
import pytest

from qfgr import DeltaKernel, SystemSpec

FIXTURES = Path(__file__).parent / "fixtures"
REPO_ROOT = Path(__file__).parent.parent
SCENARIOS = REPO_ROOT / "scenarios"


def load_golden_dict() -> dict:
    with open(FIXTURES / "golden_instance.json") as fh:
        return json.load(fh)


def spec_from_dict(d: dict, kernel: DeltaKernel | None = None) -> SystemSpec:
    interaction = np.asarray(d["interaction"]["re"], dtype=float) + 1j * np.asarray(
        d["interaction"]["im"], dtype=float
    )
    return SystemSpec(
        energies=np.asarray(d["energies"], dtype=float),
        interaction=interaction,
        kernel=kernel or DeltaKernel.from_dict(d["kernel"]),
        hbar=d.get("hbar", 1.0),
    )


@pytest.fixture(scope="session")
def golden() -> SystemSpec:
    """Frozen seed-3 N=4 instance with its gaussian kernel."""
    return spec_from_dict(load_golden_dict())


@pytest.fixture(scope="session")
def golden_sharp() -> SystemSpec:
    """The golden instance numbers with a sharp kernel of the same width."""
    return spec_from_dict(load_golden_dict(), kernel=DeltaKernel("sharp", 0.05))


@pytest.fixture(scope="session")
def two_level_generic() -> SystemSpec:
    """Two-level instance with nonzero diagonal and off-diagonal coupling."""
    return SystemSpec(
        energies=np.array([0.0, 1.0]),
        interaction=np.array([[0.6, 0.3], [0.3, -0.4]], dtype=complex),
        kernel=DeltaKernel("sharp", 0.05),
    )


@pytest.fixture(scope="session")
def search_report_dict() -> dict:
    with open(FIXTURES / "search_report.json") as fh:
        return json.load(fh)
