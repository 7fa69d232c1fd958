"""
File formats: matrix JSON documents and result CSV files.

A matrix document is ``{"dim": n, "entries": [[re, im], ...]}`` with n^2
row-major pairs; bipartite states add ``"dims": [m, n]``.
"""

import csv
import json
import logging
from pathlib import Path

import numpy as np

from .errors import DimensionError, MatrixFormatError
from .qstate import BipartiteState, DensityMatrix

logger = logging.getLogger(__name__)


def format_number(value):
    """17 significant digits, enough to round-trip any double."""
    return format(float(value), '.17g')


def matrix_to_document(matrix, dims=None):
    matrix = np.asarray(matrix, dtype=np.complex128)
    document = {
        "dim": int(matrix.shape[0]),
        "entries": [[float(z.real), float(z.imag)] for z in matrix.ravel()],
    }
    if dims is not None:
        document["dims"] = [int(d) for d in dims]
    return document


def dumps_state(state, indent=None):
    """JSON text for a DensityMatrix or BipartiteState."""
    if isinstance(state, BipartiteState):
        document = matrix_to_document(state.matrix, state.dims)
    else:
        document = matrix_to_document(state.matrix)
    return json.dumps(document, indent=indent)


def write_state(path, state):
    Path(path).write_text(dumps_state(state) + "\n", encoding="utf-8")


def document_to_matrix(document):
    """Decode a parsed matrix document; returns (matrix, dims or None)."""
    if not isinstance(document, dict):
        raise MatrixFormatError("matrix document must be a JSON object")
    try:
        dim = document["dim"]
        entries = document["entries"]
    except KeyError as e:
        raise MatrixFormatError(f"matrix document is missing the {e.args[0]!r} field") from None
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise MatrixFormatError(f"'dim' must be a positive integer, got {dim!r}")
    if not isinstance(entries, list) or len(entries) != dim * dim:
        raise MatrixFormatError(f"'entries' must hold {dim * dim} [re, im] pairs")
    try:
        pairs = np.array(entries, dtype=float)
    except (TypeError, ValueError):
        raise MatrixFormatError("'entries' must contain numeric [re, im] pairs") from None
    if pairs.shape != (dim * dim, 2):
        raise MatrixFormatError("every entry must be a [re, im] pair")
    matrix = (pairs[:, 0] + 1j * pairs[:, 1]).reshape(dim, dim)

    dims = document.get("dims")
    if dims is not None:
        if (not isinstance(dims, list) or len(dims) != 2
                or not all(isinstance(d, int) and not isinstance(d, bool) and d > 0 for d in dims)):
            raise MatrixFormatError(f"'dims' must be two positive integers, got {dims!r}")
        dims = tuple(dims)
    return matrix, dims


def loads_matrix(text):
    try:
        document = json.loads(text)
    except json.JSONDecodeError as e:
        raise MatrixFormatError(f"invalid JSON: {e}") from None
    return document_to_matrix(document)


def read_matrix(path):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise MatrixFormatError(f"cannot read {path}: {e.strerror}") from None
    return loads_matrix(text)


def load_density(path):
    matrix, _ = read_matrix(path)
    return DensityMatrix.from_matrix(matrix)


def load_bipartite(path, dims=None):
    """Bipartite state from a file; explicit dims must agree with the file's."""
    matrix, file_dims = read_matrix(path)
    if dims is not None and file_dims is not None and tuple(dims) != file_dims:
        raise DimensionError(f"--dims {dims} disagree with the file's dims {file_dims}",
                             expected=file_dims, actual=tuple(dims))
    dims = dims if dims is not None else file_dims
    if dims is None:
        raise MatrixFormatError(f"{path} carries no 'dims' and none were given")
    return BipartiteState(tuple(dims), DensityMatrix.from_matrix(matrix))


def write_csv(path, header, rows):
    """Write rows of floats and strings; floats use format_number."""
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_number(v) if isinstance(v, (float, np.floating)) else v for v in row])
    logger.debug("wrote %d rows to %s", len(rows), path)
