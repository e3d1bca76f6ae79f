import numpy as np
import pytest

from qmarginal.linalg import (
    ConvergenceError,
    PSDViolationError,
    Spectrum,
    _round_robin,
    eigh,
    eigh_batch,
    hermitian,
    is_isometry,
    overlap_lower_bound,
    min_trace_isometry,
    qr_haar_unitary,
    random_hermitian,
    random_isometry,
)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.mark.parametrize("n", range(1, 9))
def test_round_robin_covers_each_pair_once(n):
    seen = []
    for p, q in _round_robin(n):
        assert len(set(p) | set(q)) == 2 * len(p)
        seen += [tuple(sorted(x)) for x in zip(p, q)]
    assert sorted(seen) == sorted((i, j) for i in range(n) for j in range(i + 1, n))


@pytest.mark.parametrize("n", [1, 2, 3, 5, 8, 12])
def test_eigh_matches_lapack(rng, n):
    a = random_hermitian(n, rng)
    w, v = eigh(a)
    np.testing.assert_allclose(w, np.linalg.eigvalsh(a), atol=1e-11)
    assert np.all(np.diff(w) >= 0)
    np.testing.assert_allclose(np.conj(v.T) @ v, np.eye(n), atol=1e-12)
    np.testing.assert_allclose(a @ v, v * w, atol=1e-10)


def test_eigh_diagonal_and_pauli_x():
    w, v = eigh(np.diag([3.0, 1.0, 2.0]))
    np.testing.assert_array_equal(w, [1, 2, 3])
    np.testing.assert_allclose(np.abs(v), np.eye(3)[:, [1, 2, 0]])
    w, _ = eigh(np.array([[0, 1], [1, 0]]))
    np.testing.assert_allclose(w, [-1, 1], atol=1e-15)


def test_eigh_degenerate_spectrum(rng):
    u = qr_haar_unitary(6, rng)
    a = (u * np.array([0.1, 0.1, 0.1, 0.3, 0.3, 0.1])) @ np.conj(u.T)
    w, v = eigh(a)
    np.testing.assert_allclose(w, [0.1] * 4 + [0.3] * 2, atol=1e-12)
    np.testing.assert_allclose(a @ v, v * w, atol=1e-12)


def test_batch_results_independent_of_batch_companions(rng):
    mats = np.stack([random_hermitian(5, rng) for _ in range(4)])
    mats[2] = np.diag(np.arange(5.0))
    w_all, v_all = eigh_batch(mats)
    for i in range(4):
        w1, v1 = eigh_batch(mats[i : i + 1])
        np.testing.assert_array_equal(w_all[i], w1[0])
        np.testing.assert_array_equal(v_all[i], v1[0])


def test_convergence_error_on_zero_sweeps(rng):
    with pytest.raises(ConvergenceError) as info:
        eigh(random_hermitian(4, rng), max_sweeps=0)
    assert info.value.off_norm > 0


def test_hermitian_symmetrizes_and_rejects():
    a = np.array([[1, 1j], [-1j + 1e-12, 2]])
    np.testing.assert_allclose(hermitian(a), np.conj(hermitian(a).T))
    with pytest.raises(ValueError):
        hermitian(np.array([[1, 1], [0, 1]]))


def test_haar_unitary_and_isometry(rng):
    u = qr_haar_unitary(7, rng)
    assert is_isometry(u)
    stack = random_isometry(6, 2, rng, size=5)
    assert stack.shape == (5, 6, 2)
    assert all(is_isometry(x) for x in stack)
    with pytest.raises(ValueError):
        random_isometry(3, 4, rng)


def test_haar_phases_are_uniform():
    # without the phase fix, diag(R) > 0 biases the diagonal of Q
    rng = np.random.default_rng(5)
    diag = np.array([qr_haar_unitary(2, rng)[0, 0] for _ in range(4000)])
    assert abs(np.mean(diag)) < 0.05
    assert abs(np.mean(np.abs(diag) ** 2) - 0.5) < 0.02


def test_spectrum_sorting_clamping_and_errors():
    s = Spectrum([0.5, -1e-12, 0.5])
    assert s.tolist() == [0.0, 0.5, 0.5]
    assert len(s) == 3 and s[2] == 0.5
    assert s == Spectrum((0.5, 0.5, 0.0))
    assert hash(s) == hash(Spectrum((0.5, 0.5, 0.0)))
    with pytest.raises(PSDViolationError):
        Spectrum([1.1, -0.1])
    with pytest.raises(ValueError):
        Spectrum([0.2, 0.2])
    with pytest.raises(ValueError):
        Spectrum([])
    with pytest.raises(AttributeError):
        s.values = None
    assert Spectrum((x / 4 for x in range(1, 3)), trace=0.75).tolist() == [0.25, 0.5]


def test_min_trace_isometry_attains_bottom_eigenvalues(rng):
    a = random_hermitian(6, rng)
    w = np.linalg.eigvalsh(a)
    for r in range(1, 7):
        value, u = min_trace_isometry(a, r)
        assert value == pytest.approx(w[:r].sum(), abs=1e-10)
        assert np.real(np.trace(np.conj(u.T) @ a @ u)) == pytest.approx(value, abs=1e-10)
    with pytest.raises(ValueError):
        min_trace_isometry(a, 7)


def test_overlap_lower_bound():
    lam = Spectrum([0.1, 0.2, 0.3, 0.4])
    assert overlap_lower_bound(lam, 3, 1) == pytest.approx(0.1 + 0.3)
    assert overlap_lower_bound(lam, 4, 2) == pytest.approx(0.6)
    with pytest.raises(ValueError):
        overlap_lower_bound(lam, 6, 1)
