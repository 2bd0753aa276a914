import json

import numpy as np
import pytest

from qbsic import io
from qbsic.definetti import Mixture
from qbsic.exceptions import SchemaError
from qbsic.scenarios import cega_table
from qbsic.sic import tetrahedron_fiducial


def _write(tmp_path, obj, name="doc.json"):
    path = tmp_path / name
    path.write_text(json.dumps(obj) if not isinstance(obj, str) else obj)
    return path


class TestRoundTrips:
    def test_matrix(self, tmp_path, rng):
        m = rng.standard_normal((2, 3)) + 1j * rng.standard_normal((2, 3))
        path = tmp_path / "m.json"
        io.write_json(path, io.encode_matrix(m))
        np.testing.assert_array_equal(io.validate_schema(path, "matrix"), m)

    def test_vector(self, tmp_path):
        v = np.array([1 + 2j, -0.5j, 3])
        path = _write(tmp_path, io.encode_vector(v))
        np.testing.assert_array_equal(io.validate_schema(path, "vector"), v)

    def test_fiducial(self, tmp_path):
        f = tetrahedron_fiducial()
        path = tmp_path / "f.json"
        io.write_json(path, io.encode_fiducial(f))
        g = io.validate_schema(path, "fiducial")
        np.testing.assert_array_equal(g.vector, f.vector)
        assert g.provenance == {"source": "analytic"}

    def test_probvector(self, tmp_path):
        path = _write(tmp_path, io.encode_probvector(np.full(4, 0.25), 2))
        d, p = io.validate_schema(path, "probvector")
        assert d == 2 and p.tolist() == [0.25] * 4

    def test_conditional(self, tmp_path):
        r = np.array([[0.2, 0.5, 1.0], [0.8, 0.5, 0.0]])
        path = _write(tmp_path, io.encode_conditional(r, 2))
        d, got = io.validate_schema(path, "conditional")
        np.testing.assert_array_equal(got, r)

    def test_table(self, tmp_path):
        path = _write(tmp_path, cega_table().to_dict())
        assert io.validate_schema(path, "table") == cega_table()

    def test_mixture(self, tmp_path):
        m = Mixture(np.array([0.25, 0.75]), np.array([np.diag([1, 0]), np.eye(2) / 2]))
        path = _write(tmp_path, io.encode_mixture(m))
        got = io.validate_schema(path, "mixture")
        np.testing.assert_array_equal(got.weights, m.weights)
        np.testing.assert_array_equal(got.states, m.states)


class TestErrors:
    def test_nan_entry_named(self, tmp_path):
        path = _write(tmp_path, '{"rows": 1, "cols": 2, "data": [[1, 0], [NaN, 0]]}')
        with pytest.raises(SchemaError, match=r"data\[1\]\[0\]: non-finite"):
            io.validate_schema(path, "matrix")

    def test_probability_sum(self, tmp_path):
        path = _write(tmp_path, {"d": 2, "p": [0.3, 0.2, 0.2, 0.2]})
        with pytest.raises(SchemaError, match="sum deviates from 1"):
            io.validate_schema(path, "probvector")

    def test_malformed_json(self, tmp_path):
        path = _write(tmp_path, "{not json")
        with pytest.raises(SchemaError, match="malformed"):
            io.validate_schema(path, "matrix")

    def test_wrong_count(self, tmp_path):
        path = _write(tmp_path, {"rows": 2, "cols": 2, "data": [[1, 0]]})
        with pytest.raises(SchemaError, match="data: expected 4 entries"):
            io.validate_schema(path, "matrix")

    def test_missing_field(self, tmp_path):
        path = _write(tmp_path, {"rows": 2, "data": []})
        with pytest.raises(SchemaError, match="cols: missing"):
            io.validate_schema(path, "matrix")

    def test_mixture_nested_path(self, tmp_path):
        doc = {"d": 2, "components": [{"w": 1.0, "rho": {"rows": 2, "cols": 2, "data": [[1, 0]]}}]}
        path = _write(tmp_path, doc)
        with pytest.raises(SchemaError, match=r"components\[0\]\.rho\.data"):
            io.validate_schema(path, "mixture")

    def test_unnormalized_fiducial(self, tmp_path):
        path = _write(tmp_path, {"d": 2, "vector": [[1, 0], [1, 0]]})
        with pytest.raises(SchemaError, match="vector"):
            io.validate_schema(path, "fiducial")

    def test_unknown_kind(self, tmp_path):
        with pytest.raises(SchemaError):
            io.validate_schema(_write(tmp_path, {}), "nope")


def test_atomic_write_leaves_no_temp(tmp_path):
    io.write_json(tmp_path / "a.json", {"x": 1})
    io.write_json(tmp_path / "a.json", {"x": 2})
    assert [p.name for p in tmp_path.iterdir()] == ["a.json"]
    assert json.loads((tmp_path / "a.json").read_text()) == {"x": 2}


def test_write_refuses_nan(tmp_path):
    with pytest.raises(ValueError):
        io.write_json(tmp_path / "a.json", {"x": float("nan")})
    assert list(tmp_path.iterdir()) == []
