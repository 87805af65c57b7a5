import json
import math

import numpy as np
import pytest

from georate.errors import ConfigError
from georate.io import dumps, fmt, jsonable, loads, path_rows, read_path_csv, table_to_csv, write_path
from georate.manifold import Sphere
from georate.increments import UniformSphereShell
from georate.walk import run_walks


def test_fmt():
    assert fmt(1 / 3) == "0.333333333333"
    assert fmt(math.inf) == "inf"
    assert fmt(-math.inf) == "-inf"
    assert fmt(None) == ""
    assert fmt(True) == "true"
    assert fmt(np.int64(7)) == "7"


def test_jsonable_rounds_and_flags_infinity():
    out = jsonable({"a": np.float64(2 / 3), "b": [math.inf], "c": np.arange(2)})
    assert out == {"a": 0.666666666667, "b": ["inf"], "c": [0, 1]}
    assert json.loads(dumps(out)) == out


def test_loads_reports_position():
    with pytest.raises(ConfigError, match=r"cfg:2:5"):
        loads('{"a": 1,\n    }', "cfg")


def test_table_to_csv():
    text = table_to_csv([{"x": 0.1, "y": None, "z": "s"}], ["x", "y", "z"])
    assert text == "x,y,z\n0.1,,s\n"


def test_path_round_trip(tmp_path):
    S = Sphere(2, 1.0)
    path = run_walks(S, UniformSphereShell(1.0, 2), 20, S.origin(), 0, 1)[0]
    cols, rows = path_rows(path)
    assert cols[0] == "step" and cols[-1] == "weight"
    write_path(path, tmp_path / "w.csv", tmp_path / "w.json")
    back = read_path_csv(tmp_path / "w.csv")
    np.testing.assert_allclose(back["points"], path.points, atol=1e-11)
    np.testing.assert_allclose(back["weights"], path.row.theta, rtol=1e-11)
    manifest = json.loads((tmp_path / "w.json").read_text())
    assert manifest["n"] == 20 and manifest["seed"] == [0, 0]
