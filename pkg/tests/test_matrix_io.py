import csv
import json

import numpy as np
import pytest

from src.core.detect import isotropic_state
from src.core.errors import DimensionError, MatrixFormatError, StateInvariantError
from src.core.matrix_io import (
    dumps_state,
    format_number,
    load_bipartite,
    load_density,
    loads_matrix,
    matrix_to_document,
    write_csv,
    write_state,
)
from src.core.qstate import DensityMatrix, random_density


class TestDocuments:
    def test_layout(self):
        document = matrix_to_document(np.array([[0.5, 0.1j], [-0.1j, 0.5]]))
        assert document["dim"] == 2
        assert document["entries"] == [[0.5, 0.0], [0.0, 0.1], [0.0, -0.1], [0.5, 0.0]]
        assert "dims" not in document

    def test_text_is_stable(self):
        rho = random_density(3, 4)
        text = dumps_state(rho)
        matrix, dims = loads_matrix(text)
        assert dims is None
        assert np.array_equal(matrix, rho.matrix)
        assert dumps_state(DensityMatrix.from_matrix(matrix)) == text

    def test_bipartite_carries_dims(self):
        state = isotropic_state(0.4, 2)
        matrix, dims = loads_matrix(dumps_state(state))
        assert dims == (2, 2)
        assert np.array_equal(matrix, state.matrix)

    @pytest.mark.parametrize("text", [
        "not json",
        "[1, 2]",
        '{"entries": [[1, 0]]}',
        '{"dim": 1}',
        '{"dim": 0, "entries": []}',
        '{"dim": true, "entries": [[1, 0]]}',
        '{"dim": 2, "entries": [[1, 0]]}',
        '{"dim": 1, "entries": [[1, 0, 0]]}',
        '{"dim": 1, "entries": [["a", 0]]}',
        '{"dim": 1, "entries": [[1, 0]], "dims": [1]}',
        '{"dim": 1, "entries": [[1, 0]], "dims": [1, 0]}',
    ])
    def test_malformed(self, text):
        with pytest.raises(MatrixFormatError):
            loads_matrix(text)


class TestFiles:
    def test_load_density(self, tmp_path):
        path = tmp_path / "rho.json"
        rho = random_density(8, 3)
        write_state(path, rho)
        assert np.array_equal(load_density(path).matrix, rho.matrix)

    def test_load_density_rejects_non_states(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(matrix_to_document(np.diag([1.1, -0.1]))))
        with pytest.raises(StateInvariantError):
            load_density(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(MatrixFormatError):
            load_density(tmp_path / "missing.json")

    def test_load_bipartite(self, tmp_path):
        path = tmp_path / "state.json"
        write_state(path, isotropic_state(0.7, 3))
        assert load_bipartite(path).dims == (3, 3)
        assert load_bipartite(path, (3, 3)).dims == (3, 3)
        with pytest.raises(DimensionError):
            load_bipartite(path, (1, 9))

    def test_load_bipartite_needs_dims(self, tmp_path):
        path = tmp_path / "plain.json"
        write_state(path, random_density(1, 4))
        with pytest.raises(MatrixFormatError):
            load_bipartite(path)
        assert load_bipartite(path, (2, 2)).dims == (2, 2)


class TestCsv:
    def test_format_number(self):
        assert format_number(0.1) == "0.10000000000000001"
        assert float(format_number(1 / 3)) == 1 / 3

    def test_write_csv(self, tmp_path):
        path = tmp_path / "out.csv"
        write_csv(path, ["param", "value", "verdict"], [[0.5, np.float64(2 / 3), "entangled"]])
        with open(path, newline="") as handle:
            header, row = list(csv.reader(handle))
        assert header == ["param", "value", "verdict"]
        assert row == ["0.5", format(2 / 3, ".17g"), "entangled"]
