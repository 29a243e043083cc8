import json
from pathlib import Path

import pytest

from mcbc.io import dumps_code, read_code
from mcbc.setsystem import McbcCode

DATA = Path(__file__).parent / "data"


def load_affine4() -> McbcCode:
    """The 16x20 server-by-item incidence matrix of the order-4 affine layout."""
    rows = [list(map(int, line.split())) for line in (DATA / "affine4_incidence.txt").read_text().splitlines()]
    servers = [[i + 1 for i, bit in enumerate(row) if bit] for row in rows]
    return McbcCode.from_servers(len(rows[0]), servers)


@pytest.fixture(scope="session")
def example1() -> McbcCode:
    return read_code(DATA / "example1.json")


@pytest.fixture(scope="session")
def example1_path() -> Path:
    return DATA / "example1.json"


@pytest.fixture(scope="session")
def affine4() -> McbcCode:
    return load_affine4()


@pytest.fixture(scope="session")
def affine4_path(tmp_path_factory, affine4) -> Path:
    path = tmp_path_factory.mktemp("fixtures") / "affine4.json"
    path.write_text(dumps_code(affine4))
    return path


@pytest.fixture
def write_json(tmp_path):
    def write(data, name="code.json") -> Path:
        path = tmp_path / name
        path.write_text(json.dumps(data))
        return path

    return write
