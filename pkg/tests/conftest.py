import numpy as np
import pytest
from click.testing import CliRunner

from src.core.qstate import DensityMatrix
from src.core.specfun import SLD, WY, WYD, MonotoneFunctionSpec, catalog

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]])
SIGMA_Z = np.diag([1.0, -1.0]).astype(complex)


@pytest.fixture(params=[s.identifier for s in catalog()])
def spec(request):
    """Every member of the default catalog."""
    return next(s for s in catalog() if s.identifier == request.param)


@pytest.fixture
def wy():
    return MonotoneFunctionSpec(WY)


@pytest.fixture
def sld():
    return MonotoneFunctionSpec(SLD)


@pytest.fixture
def wyd_half():
    return MonotoneFunctionSpec(WYD, 0.5)


@pytest.fixture
def diagonal_state():
    """diag(0.7, 0.3)."""
    return DensityMatrix.from_matrix(np.diag([0.7, 0.3]))


@pytest.fixture
def runner():
    return CliRunner()
