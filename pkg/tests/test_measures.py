import numpy as np
import pytest
from numpy.testing import assert_allclose

from qmono.measures import (
    DiscordResult,
    MeasurementBasis,
    OptimizerTrace,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    bloch_basis,
    concurrence,
    conditional_entropy_min,
    conditional_entropy_qubit_batch,
    discord,
    eof_pure,
    eof_two_qubit,
    mutual_information,
    unitary_from_angles,
)
from qmono.qcore import Bipartition, DensityMatrix, PureState, partial_trace, vn_entropy

AB = Bipartition(("A",), ("B",))


def dm(matrix, dims=(2, 2)):
    return DensityMatrix(matrix, dims)


def bell_phi_plus():
    return PureState([1, 0, 0, 1], (2, 2))


def bell_mixture():
    # (|00><00| + |11><11|) / 2 = equal mixture of the two phase Bell states
    return dm(np.diag([0.5, 0.0, 0.0, 0.5]))


def classically_correlated():
    return dm(np.diag([0.5, 0.0, 0.0, 0.5]))


def w_marginal():
    amps = np.zeros(8)
    amps[1] = amps[2] = amps[4] = 1
    w = PureState(amps, (2, 2, 2))
    return partial_trace(w.density(), ("A", "B"))


def haar_pure(rng, dim=4):
    z = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return PureState(z, (2, dim // 2))


def wishart_state(rng, dim=4, dims=(2, 2)):
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    m = g @ g.conj().T
    return DensityMatrix(m / np.trace(m).real, dims)


def random_unitary(rng, dim):
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(g)
    return q * (np.diag(r) / np.abs(np.diag(r)))


class TestMeasurementBasis:
    def test_bloch_basis_valid(self):
        b = bloch_basis(0.7, 1.3)
        total = sum(b.projectors)
        assert np.max(np.abs(total - np.eye(2))) <= 1e-12

    def test_completeness_enforced(self):
        p = np.diag([1.0, 0.0])
        with pytest.raises(ValueError):
            MeasurementBasis(("B",), (p, p), (0.0,))

    def test_rank_one_enforced(self):
        with pytest.raises(ValueError):
            MeasurementBasis(("B",), (np.eye(2), np.zeros((2, 2))), (0.0,))

    def test_unitary_from_angles_is_unitary(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            u = unitary_from_angles(rng.uniform(0, np.pi, 12))
            assert np.max(np.abs(u @ u.conj().T - np.eye(4))) <= 1e-12


class TestConcurrence:
    def test_bell_state(self):
        assert_allclose(concurrence(bell_phi_plus().density()), 1.0, atol=1e-10)

    def test_product(self):
        assert_allclose(concurrence(dm(np.diag([1.0, 0, 0, 0]))), 0.0, atol=1e-10)

    def test_w_marginal_two_thirds(self):
        # independent oracle: eigenvalues of rho * rho~ straight from eigvals
        rho = w_marginal().matrix
        yy = np.kron(SIGMA_Y, SIGMA_Y)
        ev = np.linalg.eigvals(rho @ yy @ rho.conj() @ yy)
        lam = np.sqrt(np.clip(np.sort(ev.real)[::-1], 0, None))
        oracle = max(0.0, lam[0] - lam[1] - lam[2] - lam[3])
        assert_allclose(oracle, 2 / 3, atol=1e-9)
        assert_allclose(concurrence(w_marginal()), 2 / 3, atol=1e-9)

    def test_local_unitary_invariance(self):
        rng = np.random.default_rng(42)
        for _ in range(50):
            rho = wishart_state(rng)
            u = np.kron(random_unitary(rng, 2), random_unitary(rng, 2))
            rotated = dm(u @ rho.matrix @ u.conj().T)
            assert abs(concurrence(rotated) - concurrence(rho)) <= 1e-9

    def test_wrong_dimension(self):
        with pytest.raises(ValueError):
            concurrence(DensityMatrix(np.eye(8) / 8, (2, 2, 2)))


class TestEoF:
    def test_pure_ghz_cut(self):
        amps = np.zeros(8)
        amps[0] = amps[7] = 1
        ghz = PureState(amps, (2, 2, 2))
        cut = Bipartition(("A",), ("B", "C"))
        assert_allclose(eof_pure(ghz, cut), 1.0, atol=1e-12)

    def test_pure_product(self):
        amps = np.zeros(8)
        amps[0] = 1
        psi = PureState(amps, (2, 2, 2))
        cut = Bipartition(("A",), ("B", "C"))
        assert_allclose(eof_pure(psi, cut), 0.0, atol=1e-12)

    def test_pure_w_cut(self):
        amps = np.zeros(8)
        amps[1] = amps[2] = amps[4] = 1
        w = PureState(amps, (2, 2, 2))
        cut = Bipartition(("A",), ("B", "C"))
        assert_allclose(eof_pure(w, cut), np.log2(3) - 2 / 3, atol=1e-12)

    def test_two_qubit_extremes(self):
        assert_allclose(eof_two_qubit(bell_phi_plus().density()), 1.0, atol=1e-10)
        assert_allclose(eof_two_qubit(dm(np.diag([1.0, 0, 0, 0]))), 0.0, atol=1e-12)

    def test_two_qubit_w_marginal(self):
        # C = 2/3 so h = (1 + sqrt(5)/3)/2; evaluate H(h) independently
        h = (1 + np.sqrt(5) / 3) / 2
        expected = -h * np.log2(h) - (1 - h) * np.log2(1 - h)
        assert_allclose(eof_two_qubit(w_marginal()), expected, atol=1e-9)
        assert_allclose(expected, 0.55005, atol=5e-5)


class TestMutualInformation:
    def test_product_zero(self):
        rng = np.random.default_rng(1)
        a = wishart_state(rng, 2, (2,)).matrix
        b = wishart_state(rng, 2, (2,)).matrix
        rho = dm(np.kron(a, b))
        assert_allclose(mutual_information(rho, AB), 0.0, atol=1e-10)

    def test_bell_two_bits(self):
        assert_allclose(mutual_information(bell_phi_plus().density(), AB), 2.0, atol=1e-10)

    def test_bell_mixture_one_bit(self):
        assert_allclose(mutual_information(bell_mixture(), AB), 1.0, atol=1e-10)


def brute_force_cond_entropy(rho_ab, n_theta=200, n_phi=400):
    """Direct oracle: explicit projectors, explicit post-measurement states."""
    best = np.inf
    eye = np.eye(2)
    m = rho_ab.matrix if isinstance(rho_ab, DensityMatrix) else rho_ab
    for th in np.linspace(0, np.pi, n_theta):
        for ph in np.linspace(0, 2 * np.pi, n_phi, endpoint=False):
            v = np.array([np.cos(th / 2), np.exp(1j * ph) * np.sin(th / 2)])
            total = 0.0
            for ket in (v, np.array([np.sin(th / 2), -np.exp(1j * ph) * np.cos(th / 2)])):
                proj = np.kron(eye, np.outer(ket, ket.conj()))
                post = proj @ m @ proj
                p = np.trace(post).real
                if p < 1e-14:
                    continue
                red = post.reshape(2, 2, 2, 2).trace(axis1=1, axis2=3) / p
                w = np.clip(np.linalg.eigvalsh(red), 0, None)
                w = w[w > 1e-12]
                total += p * float(-(w * np.log2(w)).sum())
            best = min(best, total)
    return best


class TestConditionalEntropyMin:
    def test_pure_product(self):
        rho = dm(np.diag([1.0, 0, 0, 0]))
        val, basis = conditional_entropy_min(rho, AB)
        assert_allclose(val, 0.0, atol=1e-9)
        assert basis.subsystem == ("B",)

    def test_bell_state(self):
        val, _ = conditional_entropy_min(bell_phi_plus().density(), AB)
        assert_allclose(val, 0.0, atol=1e-9)

    def test_bell_mixture_matches_brute_force(self):
        # the 200x400 grid oracle gives 0: the z measurement leaves A pure
        oracle = brute_force_cond_entropy(bell_mixture(), n_theta=60, n_phi=120)
        assert_allclose(oracle, 0.0, atol=1e-9)
        val, _ = conditional_entropy_min(bell_mixture(), AB)
        assert_allclose(val, oracle, atol=1e-8)

    def test_random_mixed_matches_brute_force(self):
        rng = np.random.default_rng(7)
        rho = wishart_state(rng)
        oracle = brute_force_cond_entropy(rho, n_theta=100, n_phi=200)
        val, _ = conditional_entropy_min(rho, AB)
        assert val <= oracle + 1e-6
        assert abs(val - oracle) <= 5e-4  # oracle grid resolution limit

    def test_bell_diagonal_closed_form(self):
        # for (I + sum_j c_j s_j x s_j)/4 the minimum is H((1 + c)/2), c = max |c_j|
        rng = np.random.default_rng(12)
        verts = np.array([[-1, -1, -1], [-1, 1, 1], [1, -1, 1], [1, 1, -1]], dtype=float)
        for _ in range(10):
            p = rng.dirichlet(np.ones(4))
            c = p @ verts
            m = np.eye(4, dtype=complex) / 4
            for cj, s in zip(c, (SIGMA_X, SIGMA_Y, SIGMA_Z)):
                m += cj * np.kron(s, s) / 4
            val, _ = conditional_entropy_min(dm(m), AB)
            top = max(abs(x) for x in c)
            h = (1 + top) / 2
            expected = -h * np.log2(h) - (1 - h) * np.log2(1 - h) if h < 1 else 0.0
            assert_allclose(val, expected, atol=1e-7)

    def test_sanity_bound_and_restart_monotonicity(self):
        rng = np.random.default_rng(3)
        for _ in range(10):
            rho = wishart_state(rng)
            val, _ = conditional_entropy_min(rho, AB)
            s_a = vn_entropy(partial_trace(rho, ("A",)))
            s_b = vn_entropy(partial_trace(rho, ("B",)))
            assert val <= s_a + s_b + 1e-9
            val2, _ = conditional_entropy_min(rho, AB, refine_from=10)
            assert val2 <= val + 1e-8

    def test_batch_agrees_with_scalar(self):
        rng = np.random.default_rng(5)
        rhos = np.stack([wishart_state(rng).matrix for _ in range(12)])
        batch = conditional_entropy_qubit_batch(rhos)
        for i in range(12):
            val, _ = conditional_entropy_min(dm(rhos[i]), AB)
            assert abs(batch[i] - val) <= 1e-7

    def test_unsupported_dimension(self):
        rho = DensityMatrix(np.eye(6) / 6, (2, 3))
        with pytest.raises(ValueError, match="measured dimension"):
            conditional_entropy_min(rho, Bipartition(("A",), ("B",)))


class TestDim4MeasuredSide:
    def test_product_state_gives_nodal_entropy(self):
        rng = np.random.default_rng(9)
        rho_a = wishart_state(rng, 2, (2,)).matrix
        rho_bc = wishart_state(rng, 4, (2, 2)).matrix
        rho = DensityMatrix(np.kron(rho_a, rho_bc), (2, 2, 2))
        cut = Bipartition(("A",), ("B", "C"))
        val, basis = conditional_entropy_min(rho, cut, restarts=16, seed=2)
        s_a = vn_entropy(partial_trace(rho, ("A",)))
        assert abs(val - s_a) <= 1e-5
        assert len(basis.projectors) == 4

    def test_classically_correlated_resolves(self):
        m = np.zeros((8, 8), dtype=complex)
        m[0, 0] = 0.5  # |0>|00>
        m[7, 7] = 0.5  # |1>|11>
        rho = DensityMatrix(m, (2, 2, 2))
        cut = Bipartition(("A",), ("B", "C"))
        val, _ = conditional_entropy_min(rho, cut, restarts=16, seed=2)
        assert_allclose(val, 0.0, atol=1e-6)

    def test_restart_monotonicity(self):
        rng = np.random.default_rng(31)
        rho = wishart_state(rng, 8, (2, 2, 2))
        cut = Bipartition(("A",), ("B", "C"))
        v1, _ = conditional_entropy_min(rho, cut, restarts=8, seed=4)
        v2, _ = conditional_entropy_min(rho, cut, restarts=16, seed=4)
        assert v2 <= v1 + 1e-8


class TestDiscord:
    def test_bell_mixture_zero(self):
        res = discord(bell_mixture(), AB)
        assert_allclose(res.discord, 0.0, atol=1e-8)

    def test_pure_fast_path(self):
        res = discord(bell_phi_plus().density(), AB)
        assert_allclose(res.discord, 1.0, atol=1e-12)
        assert res.best_basis is None
        assert res.optimizer_trace.restarts == 0

    def test_classically_correlated_zero(self):
        res = discord(classically_correlated(), AB)
        assert_allclose(res.discord, 0.0, atol=1e-8)
        assert_allclose(res.classical_correlation, res.mutual_information, atol=1e-8)

    def test_result_identities(self):
        rng = np.random.default_rng(8)
        res = discord(wishart_state(rng), AB)
        assert abs(res.discord - (res.mutual_information - res.classical_correlation)) <= 1e-12
        s_a = vn_entropy(partial_trace(wishart_state(np.random.default_rng(8)), ("A",)))
        assert abs(res.classical_correlation - (s_a - res.conditional_entropy)) <= 1e-12

    def test_pure_discord_equals_eof(self):
        rng = np.random.default_rng(99)
        for _ in range(500):
            psi = haar_pure(rng)
            res = discord(psi.density(), AB)
            assert abs(res.discord - eof_pure(psi, AB)) <= 1e-6

    def test_nonnegative_on_wishart(self):
        rng = np.random.default_rng(13)
        for _ in range(60):
            res = discord(wishart_state(rng), AB)
            assert res.discord >= -1e-6

    def test_trace_gap(self):
        rng = np.random.default_rng(2)
        res = discord(wishart_state(rng), AB)
        assert res.optimizer_trace.restarts >= 1
        assert res.optimizer_trace.gap >= 0.0
