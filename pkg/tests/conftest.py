import pathlib

import pytest

from spmul.polycore import parse_poly

DATA = pathlib.Path(__file__).parent / "data"


def load_example(name):
    return parse_poly((DATA / f"example_{name}.sp").read_text())


@pytest.fixture(scope="session")
def example_pqr():
    """The worked 3-variable example: a 4-term P, a 3-term Q, and their
    10-term product R (hand-transcribed golden files)."""
    return load_example("p"), load_example("q"), load_example("r")
