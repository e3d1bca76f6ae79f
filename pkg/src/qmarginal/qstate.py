"""Density matrices on tensor-product spaces.

Index convention: subsystem 0 is the most significant digit, so the global
basis index of ``|i_0 i_1 ... i_{n-1}>`` is ``sum_k i_k * prod(dims[k+1:])``
(row-major, the same layout ``numpy.kron`` produces).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .linalg import (
    ASYMMETRY_TOL,
    TRACE_TOL,
    ZERO_TOL,
    PSDViolationError,
    Spectrum,
    eigh,
    eigh_batch,
    hermitian,
    qr_haar_unitary,
    random_isometry,
)

RANK_TOL = 1e-9


def _check_dims(dims: Sequence[int]) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if not dims or any(d < 1 for d in dims):
        raise ValueError(f"dims must be a non-empty list of positive integers, got {dims}")
    return dims


def _check_keep(keep: Sequence[int], n: int) -> tuple[int, ...]:
    keep = tuple(int(k) for k in keep)
    if not keep:
        raise ValueError("keep list must be non-empty")
    if any(k < 0 or k >= n for k in keep):
        raise ValueError(f"keep indices {keep} out of range for {n} subsystems")
    if any(b <= a for a, b in zip(keep, keep[1:])):
        raise ValueError(f"keep indices must be strictly increasing, got {keep}")
    return keep


def ptrace_array(mat: np.ndarray, dims: Sequence[int], keep: Sequence[int]) -> np.ndarray:
    """Partial trace on raw arrays, shape ``(..., D, D)`` with ``D = prod(dims)``."""
    dims = _check_dims(dims)
    keep = _check_keep(keep, len(dims))
    mat = np.asarray(mat)
    lead = mat.shape[:-2]
    b = len(lead)
    t = mat.reshape(lead + dims + dims)
    n = len(dims)
    for i in sorted(set(range(len(dims))) - set(keep), reverse=True):
        t = np.trace(t, axis1=b + i, axis2=b + n + i)
        n -= 1
    d = int(np.prod([dims[k] for k in keep]))
    return t.reshape(lead + (d, d))


@dataclass(frozen=True)
class DensityMatrix:
    """A Hermitian, trace-one, positive semidefinite matrix with subsystem dims.

    The matrix is symmetrized on construction and stored read-only.  Pass
    ``check_psd=False`` only when positivity holds by construction.
    """

    dims: tuple[int, ...]
    mat: np.ndarray = field(repr=False)
    check_psd: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self):
        dims = _check_dims(self.dims)
        total = int(np.prod(dims))
        mat = np.asarray(self.mat, dtype=complex)
        if mat.shape != (total, total):
            raise ValueError(f"matrix shape {mat.shape} does not match dims {dims}")
        mat = hermitian(mat, ASYMMETRY_TOL)
        tr = np.trace(mat).real
        if abs(tr - 1) > TRACE_TOL:
            raise ValueError(f"trace is {tr!r}, expected 1")
        if self.check_psd:
            w, _ = eigh(mat)
            if w[0] < -ZERO_TOL:
                raise PSDViolationError(f"smallest eigenvalue {w[0]:.3e} is negative")
        mat.flags.writeable = False
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "mat", mat)

    @property
    def dim(self) -> int:
        return self.mat.shape[0]


def partial_trace(rho: DensityMatrix, keep: Sequence[int]) -> DensityMatrix:
    """Reduce ``rho`` onto the subsystems listed in ``keep`` (0-based, increasing)."""
    keep = _check_keep(keep, len(rho.dims))
    red = ptrace_array(rho.mat, rho.dims, keep)
    return DensityMatrix(tuple(rho.dims[k] for k in keep), red, check_psd=False)


def spectrum_from_values(w: np.ndarray) -> Spectrum:
    return Spectrum(w)


def spectrum(rho: DensityMatrix) -> Spectrum:
    """Increasing-ordered eigenvalues of ``rho``; tiny negatives are clamped."""
    w, _ = eigh(rho.mat)
    return Spectrum(w)


def numerical_rank(values, rank_tol: float = RANK_TOL) -> int:
    """Number of eigenvalues above ``rank_tol * max eigenvalue``."""
    w = np.asarray(values.values if isinstance(values, Spectrum) else values, dtype=float)
    top = w.max()
    if top <= 0:
        return 0
    return int(np.count_nonzero(w > rank_tol * top))


def tensor(a: DensityMatrix, b: DensityMatrix) -> DensityMatrix:
    return DensityMatrix(a.dims + b.dims, np.kron(a.mat, b.mat), check_psd=False)


def _fixed_spectrum_array(lam: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    u = qr_haar_unitary(lam.size, rng)
    rho = (u * lam) @ np.conj(u.T)
    return (rho + np.conj(rho.T)) / 2


def _pure_array(total: int, rng: np.random.Generator) -> np.ndarray:
    psi = rng.standard_normal(total) + 1j * rng.standard_normal(total)
    psi /= np.linalg.norm(psi)
    return np.outer(psi, np.conj(psi))


def random_fixed_spectrum_state(
    dims: Sequence[int], spectrum, rng: np.random.Generator
) -> DensityMatrix:
    """``U diag(spectrum) U^H`` with ``U`` Haar-random."""
    dims = _check_dims(dims)
    lam = spectrum.values if isinstance(spectrum, Spectrum) else Spectrum(spectrum).values
    total = int(np.prod(dims))
    if lam.size != total:
        raise ValueError(f"spectrum has {lam.size} entries, dims need {total}")
    return DensityMatrix(dims, _fixed_spectrum_array(lam, rng), check_psd=False)


def random_pure_state(dims: Sequence[int], rng: np.random.Generator) -> DensityMatrix:
    """Projector onto a normalized complex Gaussian vector (uniform on the sphere)."""
    dims = _check_dims(dims)
    return DensityMatrix(dims, _pure_array(int(np.prod(dims)), rng), check_psd=False)


def maximally_mixed(dims: Sequence[int]) -> DensityMatrix:
    dims = _check_dims(dims)
    total = int(np.prod(dims))
    return DensityMatrix(dims, np.eye(total) / total, check_psd=False)


def pure_state(dims: Sequence[int], psi) -> DensityMatrix:
    psi = np.asarray(psi, dtype=complex)
    psi = psi / np.linalg.norm(psi)
    return DensityMatrix(tuple(dims), np.outer(psi, np.conj(psi)))


def bell_state() -> DensityMatrix:
    return pure_state((2, 2), [1, 0, 0, 1])


def ghz_state(d: int = 2, parties: int = 3) -> DensityMatrix:
    """``sum_i |i...i>`` normalized, on ``parties`` copies of C^d."""
    total = d**parties
    psi = np.zeros(total, dtype=complex)
    step = sum(d**k for k in range(parties))
    psi[:: step] = 1
    return pure_state((d,) * parties, psi)


def werner_state(p: float) -> DensityMatrix:
    """``p |Phi+><Phi+| + (1 - p) I/4`` on two qubits."""
    return DensityMatrix((2, 2), p * bell_state().mat + (1 - p) * np.eye(4) / 4)


@dataclass(frozen=True)
class TripartiteRanks:
    abc: int
    ab: int
    bc: int
    b: int


def tripartite_ranks(mat: np.ndarray, dims: Sequence[int], rank_tol: float = RANK_TOL) -> TripartiteRanks:
    """Numerical ranks of rho_ABC and its AB, BC, B reductions."""
    dims = _check_dims(dims)
    if len(dims) != 3:
        raise ValueError("tripartite_ranks needs three subsystems")
    ranks = []
    for keep in ((0, 1, 2), (0, 1), (1, 2), (1,)):
        red = ptrace_array(mat, dims, keep) if len(keep) < 3 else mat
        w = eigh_batch(red[None])[0][0]
        ranks.append(numerical_rank(w, rank_tol))
    return TripartiteRanks(*ranks)


def engineered_support_state(
    dims: Sequence[int],
    r: int,
    s: int,
    rng: np.random.Generator,
    mix_rank: int | None = None,
    rank_tol: float = RANK_TOL,
) -> tuple[DensityMatrix, TripartiteRanks]:
    """Tripartite state whose reductions are pushed toward the requested deficiencies.

    Builds a random ``(M - t)``-dimensional subspace ``S_B`` of C^M with
    ``t = r // L``, a random ``(MN - s)``-dimensional subspace ``S_BC`` inside
    ``S_B (x) C^N``, and mixes ``mix_rank`` random pure states supported on
    ``C^L (x) S_BC`` (all of it by default).  Generically this gives
    ``rank(rho_BC) = MN - s``, ``rank(rho_ABC) = L(MN - s)`` and
    ``rank(rho_AB) = L(M - t)``.  Nothing is guaranteed: the achieved ranks are
    measured and returned, and callers must use those.
    """
    L, M, N = _check_dims(dims)
    if not (0 <= r < L * M and 0 <= s < M * N and N * r <= L * s):
        raise ValueError(f"need 0 <= r < LM, 0 <= s < MN, N*r <= L*s; got r={r}, s={s}")
    t = r // L
    s_b = random_isometry(M, M - t, rng)
    inner = random_isometry((M - t) * N, M * N - s, rng)
    s_bc = np.kron(s_b, np.eye(N)) @ inner
    support = np.kron(np.eye(L), s_bc)
    k = support.shape[1]
    mix = k if mix_rank is None else max(1, min(int(mix_rank), k))
    weights = np.zeros(k)
    weights[:mix] = rng.dirichlet(np.ones(mix))
    core = _fixed_spectrum_array(weights, rng)
    rho = support @ core @ np.conj(support.T)
    rho = (rho + np.conj(rho.T)) / 2
    rho /= np.trace(rho).real
    state = DensityMatrix((L, M, N), rho, check_psd=False)
    return state, tripartite_ranks(state.mat, (L, M, N), rank_tol)
