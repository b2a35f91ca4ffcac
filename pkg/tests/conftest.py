"""
Pytest configuration and fixtures for eisenlat tests.
"""

import json
import sys
from pathlib import Path

import pytest
from hypothesis import strategies as st

# Add project root to path for imports
PROJECT_ROOT = Path(__file__).parent.parent
sys.path.insert(0, str(PROJECT_ROOT))

from eisenlat.models.eisenstein import EisInt  # noqa: E402
from eisenlat.models.lattice import AmbientSpace, HermitianLattice  # noqa: E402

DATA_DIR = PROJECT_ROOT / "data"


# ==================== hypothesis strategies ====================


def eisints(bound: int = 50) -> st.SearchStrategy[EisInt]:
    return st.builds(EisInt, st.integers(-bound, bound), st.integers(-bound, bound))


def nonzero_eisints(bound: int = 50) -> st.SearchStrategy[EisInt]:
    return eisints(bound).filter(bool)


@st.composite
def sublattices_of_in(draw):
    """Random full-rank sublattices of I_n, n <= 3, from upper triangular generators."""
    n = draw(st.integers(1, 3))
    rows = []
    for i in range(n):
        diag = draw(eisints(2).filter(bool))
        rest = [draw(eisints(2)) for _ in range(n - i - 1)]
        rows.append([EisInt(0)] * i + [diag] + rest)
    return HermitianLattice.from_generators(AmbientSpace.standard(n), rows)


# ==================== shipped data ====================


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture(scope="session")
def fixture_json():
    """Load a file from data/fixtures by name."""

    def load(name: str):
        with open(DATA_DIR / "fixtures" / name, encoding="utf-8") as f:
            return json.load(f)

    return load


@pytest.fixture(scope="session")
def catalog_rows():
    from eisenlat.services.catalog import load_catalog

    return load_catalog()


@pytest.fixture(scope="session")
def recipes():
    from eisenlat.services.catalog import load_recipes

    return load_recipes()


# ==================== lattices ====================


@pytest.fixture
def i1():
    from eisenlat.services.standard import standard

    return standard("I1")


@pytest.fixture
def a2():
    from eisenlat.services.standard import standard

    return standard("A_2")


@pytest.fixture(scope="session")
def u6():
    from eisenlat.services.standard import standard

    return standard("U6")


@pytest.fixture
def write_lattice(tmp_path):
    """Write a lattice file and return its path as a string."""

    def write(L, name: str = "lattice.json") -> str:
        from eisenlat.models.schemas import dump_json

        path = tmp_path / name
        path.write_text(dump_json(L.to_file()), encoding="utf-8")
        return str(path)

    return write
