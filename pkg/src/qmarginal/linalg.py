"""Dense complex linear algebra used throughout the package.

Matrices are plain ``numpy`` arrays of dtype ``complex128``.  The Hermitian
eigensolver is a cyclic complex Jacobi method that works on a whole stack of
matrices at once (leading batch axis), which is what the sampling campaigns
need: thousands of small matrices per call.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

ASYMMETRY_TOL = 1e-10
ZERO_TOL = 1e-10
TRACE_TOL = 1e-10
JACOBI_TOL = 1e-12
MAX_SWEEPS = 100


class ConvergenceError(RuntimeError):
    """Jacobi sweeps hit the cap before the off-diagonal part vanished."""

    def __init__(self, off_norm: float, sweeps: int):
        super().__init__(
            f"Jacobi eigensolver did not converge after {sweeps} sweeps "
            f"(off-diagonal norm {off_norm:.3e})"
        )
        self.off_norm = off_norm
        self.sweeps = sweeps


class PSDViolationError(ValueError):
    """An eigenvalue is negative beyond the clamping tolerance."""


def hermitian(a, tol: float = ASYMMETRY_TOL) -> np.ndarray:
    """Return ``(a + a^dagger) / 2`` after checking ``a`` is Hermitian to ``tol``.

    Works on single matrices and on stacks ``(..., n, n)``.
    """
    a = np.asarray(a, dtype=complex)
    if a.ndim < 2 or a.shape[-1] != a.shape[-2]:
        raise ValueError(f"expected square matrix, got shape {a.shape}")
    ah = np.conj(np.swapaxes(a, -1, -2))
    if a.size and np.max(np.abs(a - ah)) > tol:
        raise ValueError(
            f"matrix is not Hermitian (max |A - A^H| = {np.max(np.abs(a - ah)):.3e})"
        )
    return (a + ah) / 2


def _off_norm(a: np.ndarray) -> np.ndarray:
    n = a.shape[-1]
    off = a.copy()
    idx = np.arange(n)
    off[..., idx, idx] = 0
    return np.sqrt(np.sum(np.abs(off) ** 2, axis=(-2, -1)))


def _round_robin(n: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """Tournament schedule: n - 1 rounds (n even) of disjoint (p, q) pairs.

    Every pair p < q appears exactly once per sweep.
    """
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        pairs = [
            (min(players[i], players[m - 1 - i]), max(players[i], players[m - 1 - i]))
            for i in range(m // 2)
        ]
        pairs = [pq for pq in pairs if pq[1] < n]
        if pairs:
            p, q = zip(*sorted(pairs))
            rounds.append((np.array(p), np.array(q)))
        players = [players[0], players[-1]] + players[1:-1]
    return rounds


def _sweep(a: np.ndarray, v: np.ndarray, rounds) -> None:
    """One cyclic sweep, in place on the stacks a and v.

    Pairs inside a round are disjoint, so their rotations commute and are
    applied together.
    """
    for p, q in rounds:
        apq = a[:, p, q]
        mag = np.abs(apq)
        rot = mag > 0
        if not rot.any():
            continue
        safe = np.where(rot, mag, 1.0)
        phase = np.where(rot, apq / safe, 1.0)
        tau = (np.real(a[:, q, q]) - np.real(a[:, p, p])) / (2 * safe)
        sign = np.where(tau >= 0, 1.0, -1.0)
        t = np.where(rot, sign / (np.abs(tau) + np.hypot(1.0, tau)), 0.0)
        c = 1 / np.sqrt(1 + t * t)
        s = t * c
        ph_c = np.conj(phase)

        cc, ss = c[:, None, :], s[:, None, :]
        col_p = a[:, :, p]
        col_q = a[:, :, q] * ph_c[:, None, :]
        a[:, :, p] = cc * col_p - ss * col_q
        a[:, :, q] = ss * col_p + cc * col_q

        cr, sr = c[:, :, None], s[:, :, None]
        row_p = a[:, p, :]
        row_q = a[:, q, :] * phase[:, :, None]
        a[:, p, :] = cr * row_p - sr * row_q
        a[:, q, :] = sr * row_p + cr * row_q
        a[:, p, q] = 0
        a[:, q, p] = 0
        a[:, p, p] = np.real(a[:, p, p])
        a[:, q, q] = np.real(a[:, q, q])

        v_p = v[:, :, p]
        v_q = v[:, :, q] * ph_c[:, None, :]
        v[:, :, p] = cc * v_p - ss * v_q
        v[:, :, q] = ss * v_p + cc * v_q


def eigh_batch(
    a, tol: float = JACOBI_TOL, max_sweeps: int = MAX_SWEEPS
) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decompose a stack of Hermitian matrices with cyclic Jacobi.

    Parameters
    ----------
    a : array_like, shape (B, n, n)
        Hermitian matrices.  Only the Hermitian part is used.
    tol : float
        A matrix is converged once its off-diagonal Frobenius norm is at most
        ``tol * ||A||_F``.
    max_sweeps : int
        Hard cap on sweeps.

    Returns
    -------
    w : ndarray, shape (B, n)
        Eigenvalues in increasing order.
    v : ndarray, shape (B, n, n)
        Matching eigenvectors as columns.

    Each matrix stops rotating as soon as it has converged, so the result for
    one matrix does not depend on which other matrices share the batch.
    """
    a = np.array(a, dtype=complex)
    if a.ndim != 3 or a.shape[1] != a.shape[2]:
        raise ValueError(f"expected a (B, n, n) stack, got shape {a.shape}")
    a = (a + np.conj(np.swapaxes(a, -1, -2))) / 2
    batch, n, _ = a.shape
    v = np.broadcast_to(np.eye(n, dtype=complex), (batch, n, n)).copy()
    scale = np.sqrt(np.sum(np.abs(a) ** 2, axis=(-2, -1)))
    rounds = _round_robin(n)

    for _ in range(max_sweeps):
        active = np.nonzero(_off_norm(a) > tol * scale)[0]
        if active.size == 0:
            break
        sub_a = a[active]
        sub_v = v[active]
        _sweep(sub_a, sub_v, rounds)
        a[active] = sub_a
        v[active] = sub_v
    else:
        off = _off_norm(a)
        bad = off > tol * scale
        if bad.any():
            raise ConvergenceError(float(off[bad].max()), max_sweeps)

    w = np.real(np.diagonal(a, axis1=1, axis2=2)).copy()
    order = np.argsort(w, axis=1, kind="stable")
    w = np.take_along_axis(w, order, axis=1)
    v = np.take_along_axis(v, order[:, None, :], axis=2)
    return w, v


def eigh(a, tol: float = JACOBI_TOL, max_sweeps: int = MAX_SWEEPS):
    """Eigenvalues (increasing) and eigenvector columns of one Hermitian matrix.

    ``a`` is symmetrized first; asymmetry above 1e-10 is rejected.
    """
    a = hermitian(a)
    w, v = eigh_batch(a[None], tol=tol, max_sweeps=max_sweeps)
    return w[0], v[0]


def eigvalsh_batch(a) -> np.ndarray:
    return eigh_batch(a)[0]


class Spectrum:
    """Eigenvalues of a density-type matrix, stored in increasing order.

    Values in ``(-zero_tol, 0)`` are clamped to zero; anything more negative
    raises :class:`PSDViolationError`.  The values must sum to ``trace``
    within ``trace_tol``.
    """

    __slots__ = ("values",)

    def __init__(
        self,
        values: Iterable[float],
        trace: float = 1.0,
        zero_tol: float = ZERO_TOL,
        trace_tol: float = TRACE_TOL,
    ):
        if not hasattr(values, "__len__"):
            values = list(values)
        arr = np.sort(np.asarray(values, dtype=float).ravel())
        if arr.size == 0:
            raise ValueError("spectrum must be non-empty")
        if not np.all(np.isfinite(arr)):
            raise ValueError("spectrum contains non-finite values")
        if arr[0] < -zero_tol:
            raise PSDViolationError(
                f"eigenvalue {arr[0]:.3e} is below -{zero_tol:g}"
            )
        total = float(np.sum(arr))
        if abs(total - trace) > trace_tol:
            raise ValueError(f"spectrum sums to {total!r}, expected {trace!r}")
        arr = np.where(arr < 0, 0.0, arr)
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)

    def __setattr__(self, name, value):
        raise AttributeError("Spectrum is immutable")

    def __len__(self) -> int:
        return self.values.size

    def __iter__(self):
        return iter(self.values.tolist())

    def __getitem__(self, i):
        return self.values[i]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Spectrum):
            return NotImplemented
        return np.array_equal(self.values, other.values)

    def __hash__(self):
        return hash(self.values.tobytes())

    def __repr__(self) -> str:
        return f"Spectrum({self.values.tolist()!r})"

    def tolist(self) -> list[float]:
        return self.values.tolist()


def as_values(spectrum) -> np.ndarray:
    """Increasing-ordered float array from a Spectrum or any sequence."""
    if isinstance(spectrum, Spectrum):
        return spectrum.values
    return Spectrum(spectrum).values


def ginibre(shape: Sequence[int], rng: np.random.Generator) -> np.ndarray:
    """Complex Ginibre entries with E|z|^2 = 1."""
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def _phase_fixed_qr(z: np.ndarray) -> np.ndarray:
    q, r = np.linalg.qr(z)
    d = np.diagonal(r, axis1=-2, axis2=-1)
    ph = np.where(np.abs(d) > 0, d / np.where(np.abs(d) > 0, np.abs(d), 1), 1)
    return q * ph[..., None, :]


def qr_haar_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random n x n unitary (Ginibre + QR with the R-diagonal phase fix)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return _phase_fixed_qr(ginibre((n, n), rng))


def random_isometry(n: int, r: int, rng: np.random.Generator, size: int | None = None):
    """Haar-random n x r isometries; with ``size`` a stack of them."""
    if not 1 <= r <= n:
        raise ValueError(f"need 1 <= r <= n, got r={r}, n={n}")
    shape = (n, r) if size is None else (size, n, r)
    return _phase_fixed_qr(ginibre(shape, rng))


def is_isometry(u, tol: float = 1e-10) -> bool:
    u = np.asarray(u)
    gram = np.conj(u.T) @ u
    return bool(np.max(np.abs(gram - np.eye(u.shape[1]))) <= tol)


def random_hermitian(n: int, rng: np.random.Generator) -> np.ndarray:
    g = ginibre((n, n), rng)
    return (g + np.conj(g.T)) / 2


def min_trace_isometry(a, r: int) -> tuple[float, np.ndarray]:
    """Minimum of tr(U^H A U) over n x r isometries U, and a minimizer.

    The minimum is the sum of the r smallest eigenvalues, attained by the
    isometry whose columns are the matching eigenvectors.
    """
    a = hermitian(a)
    n = a.shape[0]
    if not 1 <= r <= n:
        raise ValueError(f"r must lie in [1, {n}], got {r}")
    w, v = eigh(a)
    return float(np.sum(w[:r])), v[:, :r]


def overlap_lower_bound(spectrum, s: int, kappa: int) -> float:
    """Lower bound on tr(U^H A U) for two orthonormal column groups.

    ``s`` is the total column count and ``kappa`` the (integer) overlap
    ``sum |<u_a, u_b>|^2`` between the groups.  The bound double-counts the
    ``kappa`` smallest eigenvalues::

        sum_{i<=kappa} lam_i + sum_{i<=s-kappa} lam_i
    """
    lam = np.sort(np.asarray(spectrum.values if isinstance(spectrum, Spectrum) else spectrum,
                             dtype=float))
    if s < 1 or kappa < 0:
        raise ValueError("need s >= 1 and kappa >= 0")
    if kappa > s or s - kappa > lam.size or kappa > lam.size:
        raise ValueError(
            f"indices out of range: s={s}, kappa={kappa}, len={lam.size}"
        )
    return float(np.sum(lam[:kappa]) + np.sum(lam[: s - kappa]))
