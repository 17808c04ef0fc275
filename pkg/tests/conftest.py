import pathlib

import pytest

from kulshammer import algebra as A

FIXTURES = pathlib.Path(__file__).resolve().parents[1] / "fixtures"


@pytest.fixture(scope="session")
def dualnum_p2():
    return A.dual_numbers(2)


@pytest.fixture(scope="session")
def dualnum_p3():
    return A.dual_numbers(3)


@pytest.fixture(scope="session")
def gf3_c3():
    return A.group_algebra([[0, 1, 2], [1, 2, 0], [2, 0, 1]], 3)


@pytest.fixture(scope="session")
def klein_p2():
    return A.group_algebra(
        [[0, 1, 2, 3], [1, 0, 3, 2], [2, 3, 0, 1], [3, 2, 1, 0]], 2
    )


@pytest.fixture(scope="session")
def gf2():
    return A.from_structure_constants(
        {"p": 2, "dim": 1, "labels": ["1"], "unit": [1], "table": [[[1]]], "form": [[1]]}
    )


@pytest.fixture(scope="session")
def k_times_k():
    return A.from_structure_constants(
        {
            "p": 2,
            "dim": 2,
            "labels": ["e1", "e2"],
            "unit": [1, 1],
            "table": [[[1, 0], [0, 0]], [[0, 0], [0, 1]]],
        }
    )


@pytest.fixture(scope="session")
def m2_gf2():
    base = A.from_structure_constants(
        {"p": 2, "dim": 1, "labels": ["1"], "unit": [1], "table": [[[1]]]}
    )
    return A.matrix_algebra(base, 2)


@pytest.fixture(scope="session")
def m2_gf3():
    base = A.from_structure_constants(
        {"p": 3, "dim": 1, "labels": ["1"], "unit": [1], "table": [[[1]]]}
    )
    return A.matrix_algebra(base, 2)


def symmetric_fixture_list():
    """The four symmetric fixtures with validated forms."""
    return [
        A.dual_numbers(2),
        A.dual_numbers(3),
        A.group_algebra([[0, 1, 2], [1, 2, 0], [2, 0, 1]], 3),
        A.group_algebra([[0, 1, 2, 3], [1, 0, 3, 2], [2, 3, 0, 1], [3, 2, 1, 0]], 2),
    ]
