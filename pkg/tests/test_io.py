import json

import numpy as np
import pytest

from conftest import random_density
from unifact.io import (
    csv_text,
    dumps,
    matrix_from_json,
    matrix_to_json,
    parse_operator,
    write_csv,
    write_json,
)
from unifact.operators import SX, SY, SZ, destroy


def test_matrix_round_trip(rng):
    rho = random_density(rng, 5)
    d = matrix_to_json(rho)
    assert d["dim"] == 5 and len(d["re"]) == 25
    np.testing.assert_array_equal(matrix_from_json(json.loads(json.dumps(d))), rho)


def test_matrix_from_json_size_check():
    with pytest.raises(ValueError):
        matrix_from_json({"dim": 2, "re": [1, 0, 0], "im": [0, 0, 0]})


@pytest.mark.parametrize("desc, expected", [
    ("X", SX),
    ("sy", SY),
    ("ZX", np.kron(SZ, SX)),
    ({"kron": ["Z", {"destroy": 3}]}, np.kron(SZ, destroy(3))),
    ({"sum": ["X", "Z"]}, SX + SZ),
    ({"scale": [0, 2], "op": "Y"}, 2j * SY),
    ({"dagger": {"destroy": 4}}, destroy(4).conj().T),
    ({"dim": 2, "re": [0, 1, 1, 0]}, SX),
])
def test_parse_operator(desc, expected):
    np.testing.assert_array_equal(parse_operator(desc), expected)


def test_parse_operator_rejects_unknown():
    with pytest.raises(ValueError):
        parse_operator("Q")
    with pytest.raises(ValueError):
        parse_operator({"hadamard": 1})


def test_dumps_special_values():
    text = dumps({"b": float("inf"), "a": np.float64(1.5), "c": float("nan"), "d": np.arange(2)})
    obj = json.loads(text)
    assert obj == {"a": 1.5, "b": "inf", "c": None, "d": [0, 1]}
    assert text.index('"a"') < text.index('"b"')


def test_csv_format():
    text = csv_text(["t", "entry", "value"], [[0.1, "gg-EG", 1e-17], [2.0, 'say "hi", ok', float("inf")]])
    lines = text.split("\n")
    assert lines[0] == "t,entry,value"
    assert lines[1] == "0.1,gg-EG,1e-17"
    assert lines[2] == '2.0,"say ""hi"", ok",inf'
    assert "\r" not in text and text.endswith("\n")


def test_atomic_writes_leave_no_temp_files(tmp_path):
    write_csv(tmp_path / "a.csv", ["x"], [[1.0]])
    write_json(tmp_path / "sub" / "b.json", {"x": 1})
    names = sorted(p.name for p in tmp_path.rglob("*"))
    assert names == ["a.csv", "b.json", "sub"]
