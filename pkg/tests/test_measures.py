import numpy as np
import pytest

from src.core.errors import DimensionError, KernelSupportError
from src.core.measures import (
    MeanSuperoperatorContext,
    brukner_zeilinger_information,
    commutator,
    local_correlation,
    monotone_metric,
    q_uncertainty_basis,
    q_uncertainty_routes,
    q_uncertainty_spectral,
    q_uncertainty_tilde,
    qwy_closed_form,
    skew_information,
    sqrt_density,
    total_variance,
    variance,
    von_neumann_entropy,
    wigner_yanase_commutator,
)
from src.core.qstate import (
    BipartiteState,
    DensityMatrix,
    child_seeds,
    conjugate,
    eigen_adapted_basis,
    gell_mann_basis,
    haar_unitary,
    maximally_mixed,
    mixture,
    pure_state,
    random_density,
    random_observable,
    rotate_basis,
    tensor,
)

from .conftest import SIGMA_X, SIGMA_Z

Q_WY_DIAGONAL = 1 - 2 * np.sqrt(0.21)


def random_states(seed, count, dims=(2, 3, 4, 5)):
    for k, s in enumerate(child_seeds(seed, count)):
        yield random_density(s, dims[k % len(dims)])


class TestVariance:
    def test_examples(self, diagonal_state):
        ground = pure_state([1, 0])
        assert variance(ground, SIGMA_X) == pytest.approx(1.0)
        assert variance(diagonal_state, np.eye(2)) == pytest.approx(0.0, abs=1e-15)
        assert variance(diagonal_state, SIGMA_Z) == pytest.approx(0.84)

    def test_dimension_mismatch(self, diagonal_state):
        with pytest.raises(DimensionError):
            variance(diagonal_state, np.eye(3))

    def test_total_variance(self, diagonal_state):
        assert total_variance(diagonal_state) == pytest.approx(1.42)
        for rho in random_states(3, 8):
            summed = sum(variance(rho, H) for H in gell_mann_basis(rho.dim))
            assert summed == pytest.approx(total_variance(rho), abs=1e-9)


class TestSkewInformation:
    def test_wy_example(self, wy, diagonal_state):
        expected = (np.sqrt(0.7) - np.sqrt(0.3)) ** 2
        assert skew_information(wy, diagonal_state, SIGMA_X) == pytest.approx(expected, rel=1e-12)

    def test_commuting_is_zero(self, spec, diagonal_state):
        assert skew_information(spec, diagonal_state, SIGMA_Z) == pytest.approx(0.0, abs=1e-12)
        rho = random_density(4, 3)
        assert skew_information(spec, rho, rho.matrix) == pytest.approx(0.0, abs=1e-12)

    def test_pure_state_equals_variance(self, spec):
        ground = pure_state([1, 0])
        assert skew_information(spec, ground, SIGMA_X) == pytest.approx(1.0, abs=1e-10)
        psi = random_density(9, 4, rank=1)
        H = random_observable(10, 4)
        assert skew_information(spec, psi, H) == pytest.approx(variance(psi, H), abs=1e-10)

    def test_bounded_by_variance(self, spec):
        seeds = child_seeds(31, 30)
        for k in range(30):
            rho = random_density(seeds[k], 2 + k % 4)
            H = random_observable(seeds[k] + 1, rho.dim)
            I = skew_information(spec, rho, H)
            assert -1e-12 <= I <= variance(rho, H) + 1e-10

    def test_wy_matches_commutator_definition(self, wy):
        seeds = child_seeds(47, 40)
        for k in range(40):
            rho = random_density(seeds[k], 2 + k % 5, rank=1 + k % 2)
            H = random_observable(seeds[k] + 7, rho.dim)
            assert skew_information(wy, rho, H) == pytest.approx(wigner_yanase_commutator(rho, H), abs=1e-9)

    def test_unitary_invariance(self, spec):
        rho = random_density(12, 4)
        H = random_observable(13, 4)
        U = haar_unitary(14, 4)
        rotated = conjugate(rho, U)
        assert skew_information(spec, rotated, U @ H.matrix @ U.conj().T) == pytest.approx(
            skew_information(spec, rho, H), abs=1e-9)
        assert q_uncertainty_spectral(spec, rotated) == pytest.approx(q_uncertainty_spectral(spec, rho), abs=1e-9)

    def test_convex_in_state(self, spec):
        for k, s in enumerate(child_seeds(20, 50)):
            n = 2 + k % 3
            sa, sb, sh = child_seeds(s, 3)
            a, b = random_density(sa, n), random_density(sb, n)
            H = random_observable(sh, n)
            weight = float(np.random.default_rng(s).uniform(0.05, 0.95))
            self._assert_convex(spec, a, b, H, weight)

    def _assert_convex(self, spec, a, b, H, weight):
        mixed = mixture([a, b], [weight, 1 - weight])
        bound = weight * skew_information(spec, a, H) + (1 - weight) * skew_information(spec, b, H)
        assert skew_information(spec, mixed, H) <= bound + 1e-9
        q_bound = weight * q_uncertainty_spectral(spec, a) + (1 - weight) * q_uncertainty_spectral(spec, b)
        assert q_uncertainty_spectral(spec, mixed) <= q_bound + 1e-9

    def test_skew_sum_of_stack(self, spec):
        rho = random_density(2, 3)
        basis = gell_mann_basis(3)
        context = MeanSuperoperatorContext.of(spec, rho)
        individual = sum(skew_information(spec, rho, H) for H in basis)
        assert context.skew_sum(basis.stack()) == pytest.approx(individual, abs=1e-12)


class TestMonotoneMetric:
    def test_commutator_gives_skew_information(self, spec):
        for k, s in enumerate(child_seeds(5, 10)):
            rho = random_density(s, 3, rank=1 + k % 3)
            H = random_observable(s + 1, 3)
            X = commutator(rho, H)
            assert monotone_metric(spec, rho, X, X) == pytest.approx(skew_information(spec, rho, H), rel=1e-10, abs=1e-14)

    def test_symmetric_and_bilinear(self, spec):
        rho = random_density(6, 3)
        A = random_observable(7, 3).matrix
        B = random_observable(8, 3).matrix
        assert abs(monotone_metric(spec, rho, A, B) - monotone_metric(spec, rho, B, A)) <= 1e-12
        assert monotone_metric(spec, rho, np.zeros((3, 3)), B) == 0
        assert monotone_metric(spec, rho, 2 * A, B) == pytest.approx(2 * monotone_metric(spec, rho, A, B))

    def test_kernel_support(self, spec):
        rho = DensityMatrix.from_matrix(np.diag([1.0, 0.0, 0.0]))
        A = np.zeros((3, 3))
        A[1, 2] = A[2, 1] = 1
        with pytest.raises(KernelSupportError):
            monotone_metric(spec, rho, A, A)
        # commutators never touch the kernel
        X = commutator(rho, random_observable(3, 3))
        assert monotone_metric(spec, rho, X, X) >= 0


class TestQuantumUncertainty:
    def test_diagonal_examples(self, wy, sld, diagonal_state):
        assert q_uncertainty_spectral(wy, diagonal_state) == pytest.approx(Q_WY_DIAGONAL, rel=1e-12)
        assert q_uncertainty_tilde(wy, diagonal_state) == pytest.approx(Q_WY_DIAGONAL, rel=1e-10)
        assert qwy_closed_form(diagonal_state) == pytest.approx(0.0834849, abs=1e-7)
        # f(0)/2 * 2 * 0.4^2 / m_a(0.7, 0.3)
        assert q_uncertainty_spectral(sld, diagonal_state) == pytest.approx(0.16, rel=1e-12)

    def test_pauli_basis(self, wy, diagonal_state):
        assert q_uncertainty_basis(wy, diagonal_state, gell_mann_basis(2)) == pytest.approx(Q_WY_DIAGONAL, rel=1e-12)

    def test_routes_agree(self, spec):
        for rho in random_states(101, 20):
            report = q_uncertainty_routes(spec, rho)
            assert report.max_deviation <= 1e-8
            assert report.within_bounds

    def test_wy_closed_form(self, wy):
        for rho in random_states(102, 20):
            assert q_uncertainty_spectral(wy, rho) == pytest.approx(qwy_closed_form(rho), abs=1e-9)

    def test_basis_independence(self, spec):
        for k, rho in enumerate(random_states(103, 20)):
            reference = q_uncertainty_spectral(spec, rho)
            bases = [gell_mann_basis(rho.dim), eigen_adapted_basis(rho)]
            bases += [rotate_basis(gell_mann_basis(rho.dim), 1000 * k + j) for j in range(10)]
            for basis in bases:
                assert q_uncertainty_basis(spec, rho, basis) == pytest.approx(reference, abs=1e-8)

    @pytest.mark.parametrize("n", range(2, 9))
    def test_tight_bounds(self, spec, n):
        assert abs(q_uncertainty_spectral(spec, maximally_mixed(n))) <= 1e-12
        pure = random_density(n, n, rank=1)
        assert q_uncertainty_spectral(spec, pure) == pytest.approx(n - 1, abs=1e-10)
        assert q_uncertainty_basis(spec, pure, gell_mann_basis(n)) == pytest.approx(n - 1, abs=1e-9)

    def test_bounds_on_random_states(self, spec):
        for rho in random_states(104, 100, dims=(2, 3, 4, 5, 6)):
            q = q_uncertainty_spectral(spec, rho)
            assert 0 <= q <= rho.dim - 1 + 1e-10

    def test_sld_is_largest(self, spec, sld):
        for rho in random_states(105, 50):
            assert q_uncertainty_spectral(spec, rho) <= q_uncertainty_spectral(sld, rho) + 1e-9

    def test_basis_dimension_mismatch(self, spec, diagonal_state):
        with pytest.raises(DimensionError):
            q_uncertainty_basis(spec, diagonal_state, gell_mann_basis(3))

    def test_report(self, wy, sld, diagonal_state):
        report = q_uncertainty_routes(wy, diagonal_state)
        document = report.to_dict()
        assert document["spec"] == "wy"
        assert set(document["routes"]) == {"basis", "spectral", "tilde", "wy_closed_form"}
        assert document["upper_bound"] == 1.0
        assert "wy_closed_form" not in q_uncertainty_routes(sld, diagonal_state).to_dict()["routes"]

    def test_one_dimensional_state(self, spec):
        report = q_uncertainty_routes(spec, DensityMatrix.from_matrix([[1.0]]))
        assert report.q_basis == report.q_spectral == report.q_tilde == 0.0


class TestAuxiliary:
    def test_entropy(self, diagonal_state):
        assert von_neumann_entropy(pure_state([0, 1, 0])) == pytest.approx(0.0, abs=1e-12)
        assert von_neumann_entropy(maximally_mixed(3)) == pytest.approx(np.log(3))
        assert von_neumann_entropy(DensityMatrix.from_matrix(np.diag([0.5, 0.5]))) == pytest.approx(np.log(2))

    def test_brukner_zeilinger(self, diagonal_state):
        assert brukner_zeilinger_information(diagonal_state) == pytest.approx(0.08)
        assert brukner_zeilinger_information(maximally_mixed(4)) == pytest.approx(0.0, abs=1e-15)

    def test_sqrt_density(self):
        rho = random_density(15, 4)
        root = sqrt_density(rho)
        np.testing.assert_allclose(root @ root, rho.matrix, atol=1e-12)


class TestLocalCorrelation:
    def test_weak_superadditivity(self, spec):
        for k, s in enumerate(child_seeds(201, 50)):
            m, n = [(2, 2), (2, 3), (3, 3)][k % 3]
            state = BipartiteState((m, n), random_density(s, m * n))
            A = random_observable(s + 3, m)
            joint = skew_information(spec, state.state, tensor(A, np.eye(n)))
            assert joint >= skew_information(spec, state.reduced('a'), A) - 1e-9
            assert local_correlation(spec, state, 'b') >= -1e-9

    def test_pure_state_partial_trace(self, spec):
        for s in child_seeds(202, 10):
            psi = random_density(s, 6, rank=1)
            state = BipartiteState((3, 2), psi)
            assert q_uncertainty_spectral(spec, psi) >= q_uncertainty_spectral(spec, state.reduced('a')) - 1e-9
