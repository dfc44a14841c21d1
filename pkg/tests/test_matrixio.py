import json

import numpy as np
import pytest

from nhthermo.errors import ParseError
from nhthermo.matrixio import loads_matrix, matrix_to_obj, read_matrix, write_matrix


def test_round_trip(tmp_path):
    rng = np.random.default_rng(0)
    a = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    path = tmp_path / "a.json"
    write_matrix(path, a)
    assert np.array_equal(read_matrix(path), a)


def test_flat_and_nested_layouts():
    nested = {"dim": 2, "entries": [[[1, 0], [2, 0]], [[3, 0], [4, 1]]]}
    flat = {"dim": 2, "entries": [[1, 0], [2, 0], [3, 0], [4, 1]]}
    expected = np.array([[1, 2], [3, 4 + 1j]])
    assert np.array_equal(loads_matrix(json.dumps(nested)), expected)
    assert np.array_equal(loads_matrix(json.dumps(flat)), expected)


@pytest.mark.parametrize(
    "text",
    [
        "not json",
        '{"dim": 2}',
        '{"dim": 0, "entries": []}',
        '{"dim": 2, "entries": [[[1, 0], [2, 0]], [[3, 0]]]}',
        '{"dim": 2, "entries": [[1, 0], [2, 0], [3, 0]]}',
        '{"dim": 1, "entries": [[NaN, 0]]}',
        '{"dim": 1, "entries": [[Infinity, 0]]}',
        '{"dim": 1, "entries": [[1, 2, 3]]}',
        '{"dim": 1, "entries": [["1", 0]]}',
        '{"dim": true, "entries": [[1, 0]]}',
    ],
)
def test_rejects_malformed(text):
    with pytest.raises(ParseError):
        loads_matrix(text)


def test_writer_rejects_bad_input():
    with pytest.raises(ParseError):
        matrix_to_obj(np.ones((2, 3)))
    with pytest.raises(ParseError):
        matrix_to_obj(np.array([[np.nan]]))


def test_missing_file(tmp_path):
    with pytest.raises(ParseError):
        read_matrix(tmp_path / "missing.json")
