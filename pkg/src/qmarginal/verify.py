"""Monte Carlo campaigns, structured-isometry witnesses and polytope scans.

Every sample ``i`` of a campaign draws from its own generator seeded with
``derive_seed(seed, i)``, and samples are processed in fixed-size chunks whose
partial aggregates merge with ``min``/``max``/``+`` (ties broken by sample
index).  The result is therefore identical for any worker count.
"""

from __future__ import annotations

import itertools
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from . import conditions as cond
from .linalg import Spectrum, eigh, eigh_batch, ginibre, overlap_lower_bound, random_isometry
from .qstate import (
    RANK_TOL,
    DensityMatrix,
    _fixed_spectrum_array,
    _pure_array,
    engineered_support_state,
    numerical_rank,
    partial_trace,
    ptrace_array,
)

MODES = ("haar-pure", "haar-induced", "fixed-spectrum", "dirichlet", "engineered")
CHUNK = 250


def derive_seed(seed: int, index: int) -> int:
    """64-bit seed for sample ``index`` of a campaign seeded with ``seed``."""
    state = np.random.SeedSequence([int(seed), int(index)]).generate_state(2, np.uint32)
    return int(state[0]) << 32 | int(state[1])


@dataclass(frozen=True)
class CampaignConfig:
    dims: tuple[int, ...]
    samples: int
    seed: int = 0
    mode: str = "dirichlet"
    spectrum: tuple[float, ...] | None = None
    tol: float = cond.SLACK_TOL
    rank_tol: float = RANK_TOL
    floor: str = "strict"
    workers: int = 1
    measure_global: bool = False

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        object.__setattr__(self, "dims", dims)
        if not dims or any(d < 1 for d in dims):
            raise ValueError(f"invalid dims {dims}")
        if self.samples < 1:
            raise ValueError("samples must be >= 1")
        if self.seed < 0 or self.seed >= 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}; expected one of {MODES}")
        if self.mode == "fixed-spectrum":
            if self.spectrum is None:
                raise ValueError("fixed-spectrum mode needs a spectrum")
            lam = Spectrum(self.spectrum)
            if len(lam) != int(np.prod(dims)):
                raise ValueError(
                    f"spectrum has {len(lam)} entries, dims need {int(np.prod(dims))}"
                )
            object.__setattr__(self, "spectrum", tuple(lam.tolist()))
        elif self.spectrum is not None:
            raise ValueError(f"mode {self.mode!r} does not take a spectrum")
        if self.mode == "engineered" and len(dims) != 3:
            raise ValueError("engineered mode needs three subsystems")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")

    def as_dict(self) -> dict:
        out = asdict(self)
        out["dims"] = list(self.dims)
        out["spectrum"] = None if self.spectrum is None else list(self.spectrum)
        del out["workers"]
        return out


@dataclass
class RecordStats:
    min_slack: float
    argmin_sample: int
    max_slack: float
    violation_count: int
    equality_count: int

    @classmethod
    def first(cls, rec: cond.InequalityRecord, i: int) -> "RecordStats":
        return cls(
            rec.slack, i, rec.slack,
            int(rec.verdict == cond.VIOLATED), int(rec.verdict == cond.EQUALITY),
        )

    def add(self, rec: cond.InequalityRecord, i: int) -> None:
        if (rec.slack, i) < (self.min_slack, self.argmin_sample):
            self.min_slack, self.argmin_sample = rec.slack, i
        self.max_slack = max(self.max_slack, rec.slack)
        self.violation_count += rec.verdict == cond.VIOLATED
        self.equality_count += rec.verdict == cond.EQUALITY

    def merge(self, other: "RecordStats") -> None:
        if (other.min_slack, other.argmin_sample) < (self.min_slack, self.argmin_sample):
            self.min_slack, self.argmin_sample = other.min_slack, other.argmin_sample
        self.max_slack = max(self.max_slack, other.max_slack)
        self.violation_count += other.violation_count
        self.equality_count += other.equality_count


class _Tally:
    """Per-chunk aggregate; merged associatively."""

    def __init__(self):
        self.records: dict[str, RecordStats] = {}
        self.extra: dict[str, RecordStats] = {}
        self.counters: Counter = Counter()
        self.maxima: dict[str, float] = {}

    def add_report(self, report: cond.CompatReport, i: int) -> None:
        for target, recs in ((self.records, report.records), (self.extra, report.extra_records)):
            for rec in recs:
                st = target.get(rec.name)
                if st is None:
                    target[rec.name] = RecordStats.first(rec, i)
                else:
                    st.add(rec, i)

    def bump_max(self, key: str, value: float) -> None:
        self.maxima[key] = max(self.maxima.get(key, -np.inf), value)

    def merge(self, other: "_Tally") -> None:
        for target, src in ((self.records, other.records), (self.extra, other.extra)):
            for name, st in src.items():
                if name in target:
                    target[name].merge(st)
                else:
                    target[name] = st
        self.counters.update(other.counters)
        for k, v in other.maxima.items():
            self.bump_max(k, v)


@dataclass
class CampaignResult:
    campaign: str
    config: CampaignConfig
    total_samples: int
    records: dict[str, RecordStats]
    extra_records: dict[str, RecordStats] = field(default_factory=dict)
    counters: dict[str, int] = field(default_factory=dict)
    maxima: dict[str, float] = field(default_factory=dict)
    wall_clock: float = 0.0

    @property
    def total_violations(self) -> int:
        return sum(st.violation_count for st in self.records.values()) + self.counters.get(
            "rank_violated", 0
        )

    @property
    def min_slack(self) -> float:
        return min(st.min_slack for st in self.records.values())

    def argmin_seed(self, name: str) -> int:
        return derive_seed(self.config.seed, self.records[name].argmin_sample)

    def as_dict(self, include_timing: bool = False) -> dict:
        def stats(d):
            return {
                name: {
                    "min_slack": st.min_slack,
                    "max_slack": st.max_slack,
                    "argmin_sample": st.argmin_sample,
                    "argmin_seed": derive_seed(self.config.seed, st.argmin_sample),
                    "violation_count": st.violation_count,
                    "equality_count": st.equality_count,
                }
                for name, st in d.items()
            }

        out = {
            "campaign": self.campaign,
            "config": self.config.as_dict(),
            "total_samples": self.total_samples,
            "total_violations": self.total_violations,
            "min_slack": self.min_slack,
            "records": stats(self.records),
        }
        if self.extra_records:
            out["extra_records"] = stats(self.extra_records)
        if self.counters:
            out["counters"] = dict(sorted(self.counters.items()))
        if self.maxima:
            out["maxima"] = dict(sorted(self.maxima.items()))
        if include_timing:
            out["wall_clock_s"] = self.wall_clock
        return out


def _engineered_requests(dims: Sequence[int]) -> list[tuple[int, int]]:
    L, M, N = dims
    return [
        (r, s)
        for s in range(M * N)
        for r in range(L * M)
        if N * r <= L * s
    ]


def _draw(cfg: CampaignConfig, i: int):
    """State array and, when known by construction, its sorted spectrum."""
    rng = np.random.default_rng(derive_seed(cfg.seed, i))
    total = int(np.prod(cfg.dims))
    if cfg.mode == "haar-pure":
        lam = np.zeros(total)
        lam[-1] = 1.0
        return _pure_array(total, rng), lam
    if cfg.mode == "haar-induced":
        # reduction of a Haar pure state on C^total (x) C^total
        g = ginibre((total, total), rng)
        rho = g @ np.conj(g.T)
        return (rho + np.conj(rho.T)) / (2 * np.trace(rho).real), None
    if cfg.mode == "fixed-spectrum":
        lam = np.asarray(cfg.spectrum)
        return _fixed_spectrum_array(lam, rng), lam
    if cfg.mode == "dirichlet":
        lam = np.sort(rng.dirichlet(np.ones(total)))
        return _fixed_spectrum_array(lam, rng), lam
    requests = _engineered_requests(cfg.dims)
    r, s = requests[i % len(requests)]
    state, _ = engineered_support_state(cfg.dims, r, s, rng, rank_tol=cfg.rank_tol)
    return state.mat, None


def _reduced_spectra(mats: np.ndarray, dims, keeps) -> dict:
    out = {}
    for keep in keeps:
        if len(keep) == len(dims):
            red = mats
        else:
            red = ptrace_array(mats, dims, keep)
        out[keep] = eigh_batch(red)[0]
    return out


def _global_spectra(cfg, mats, known):
    if cfg.measure_global or any(k is None for k in known):
        return eigh_batch(mats)[0]
    return np.stack(known)


def _chunk_bipartite(cfg: CampaignConfig, start: int, stop: int) -> _Tally:
    tally = _Tally()
    draws = [_draw(cfg, i) for i in range(start, stop)]
    mats = np.stack([d[0] for d in draws])
    glob = _global_spectra(cfg, mats, [d[1] for d in draws])
    red = _reduced_spectra(mats, cfg.dims, [(0,), (1,)])
    two_qubit = cfg.dims == (2, 2)
    for j, i in enumerate(range(start, stop)):
        lam_a, lam_b, lam_ab = Spectrum(red[(0,)][j]), Spectrum(red[(1,)][j]), Spectrum(glob[j])
        tally.add_report(cond.check_bipartite(lam_a, lam_b, lam_ab, cfg.tol), i)
        if two_qubit:
            tally.add_report(cond.check_two_qubit(lam_a, lam_b, lam_ab, cfg.tol), i)
    return tally


def _chunk_tripartite(cfg: CampaignConfig, start: int, stop: int) -> _Tally:
    tally = _Tally()
    draws = [_draw(cfg, i) for i in range(start, stop)]
    mats = np.stack([d[0] for d in draws])
    glob = _global_spectra(cfg, mats, [d[1] for d in draws])
    red = _reduced_spectra(mats, cfg.dims, [(0, 1), (1, 2), (1,)])
    for j, i in enumerate(range(start, stop)):
        w_ab, w_bc, w_b, w_abc = red[(0, 1)][j], red[(1, 2)][j], red[(1,)][j], glob[j]
        report = cond.check_tripartite(
            Spectrum(w_ab), Spectrum(w_bc), Spectrum(w_b), Spectrum(w_abc), cfg.dims, cfg.tol
        )
        tally.add_report(report, i)
        ranks = [numerical_rank(w, cfg.rank_tol) for w in (w_abc, w_bc, w_ab, w_b)]
        rc = cond.check_rank_deficiency(*ranks, cfg.dims, floor=cfg.floor)
        tally.counters[f"rank_{rc.status.replace('-', '_')}"] += 1
        nontrivial = False
        for label, o in (("direct", rc.direct), ("swapped", rc.swapped)):
            tally.counters[f"rank_{label}_{o.status.replace('-', '_')}"] += 1
            if o.status != "not-applicable" and (o.r or o.s or o.t):
                tally.counters[f"rank_{label}_nontrivial_applicable"] += 1
                nontrivial = True
        tally.counters["rank_nontrivial_applicable"] += nontrivial
    return tally


def _chunk_pure(cfg: CampaignConfig, start: int, stop: int) -> _Tally:
    tally = _Tally()
    n = len(cfg.dims)
    mats = np.stack([_draw(cfg, i)[0] for i in range(start, stop)])
    red = _reduced_spectra(mats, cfg.dims, [(p,) for p in range(n)])
    qutrits = cfg.dims == (3, 3, 3)
    for j, i in enumerate(range(start, stop)):
        spectra = [Spectrum(red[(p,)][j]) for p in range(n)]
        multi = cond.check_pure_multipartite(spectra, cfg.tol)
        tally.add_report(multi, i)
        if n == 2:
            diff = float(np.max(np.abs(spectra[0].values - spectra[1].values)))
            tally.bump_max("schmidt_spectrum_gap", diff)
        if qutrits:
            poly = cond.check_three_qutrit_polytope(*spectra, tol=cfg.tol)
            tally.add_report(poly, i)
            if poly.compatible and not multi.compatible:
                tally.counters["qutrit_rows_without_party_bounds"] += 1
    return tally


_CHUNK_FUNCS = {
    "bipartite": _chunk_bipartite,
    "tripartite": _chunk_tripartite,
    "pure-multipartite": _chunk_pure,
}


def _run_chunk(args) -> _Tally:
    kind, cfg, start, stop = args
    return _CHUNK_FUNCS[kind](cfg, start, stop)


def _run(kind: str, cfg: CampaignConfig) -> CampaignResult:
    t0 = time.perf_counter()
    jobs = [
        (kind, cfg, start, min(start + CHUNK, cfg.samples))
        for start in range(0, cfg.samples, CHUNK)
    ]
    if cfg.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            parts = list(pool.map(_run_chunk, jobs))
    else:
        parts = [_run_chunk(job) for job in jobs]
    total = _Tally()
    for part in parts:
        total.merge(part)
    return CampaignResult(
        kind,
        cfg,
        cfg.samples,
        total.records,
        total.extra,
        dict(total.counters),
        total.maxima,
        time.perf_counter() - t0,
    )


def run_bipartite_campaign(cfg: CampaignConfig) -> CampaignResult:
    """Sample two-party states and check every bipartite condition on each."""
    if len(cfg.dims) != 2:
        raise ValueError("bipartite campaign needs two subsystems")
    if cfg.mode == "engineered":
        raise ValueError("engineered mode is tripartite only")
    return _run("bipartite", cfg)


def run_tripartite_campaign(cfg: CampaignConfig) -> CampaignResult:
    """Sample three-party states; check the two-party conditions and the rank
    implication (tallied under ``counters``) on each."""
    if len(cfg.dims) != 3:
        raise ValueError("tripartite campaign needs three subsystems")
    return _run("tripartite", cfg)


def run_pure_multipartite_campaign(cfg: CampaignConfig) -> CampaignResult:
    """Haar pure states on equal local dimensions; one-party bounds for all
    parties, plus the qutrit rows when the system is three qutrits."""
    if len(cfg.dims) < 2 or len(set(cfg.dims)) != 1:
        raise ValueError("pure multipartite campaign needs >= 2 equal local dimensions")
    if cfg.mode != "haar-pure":
        raise ValueError("pure multipartite campaign samples haar-pure states only")
    return _run("pure-multipartite", cfg)


def run_rank_sweep(dims: Sequence[int], samples: int, seed: int = 0, **kw) -> CampaignResult:
    """Engineered-support states cycling over every admissible ``(r, s)`` request."""
    return run_tripartite_campaign(
        CampaignConfig(tuple(dims), samples, seed, mode="engineered", **kw)
    )


# --- structured isometries -------------------------------------------------


def structured_isometries(u: np.ndarray, w: np.ndarray, L: int, N: int):
    """Block isometries on C^L (x) C^N built from ``u`` (L x k) and ``w`` (N x l).

    Block ``i`` of the first is ``u_i (x) I_N`` (nonzeros at ``(pN + q, q)``);
    block ``j`` of the second is ``I_L (x) w_j`` (nonzeros at ``(pN + q, p)``).
    Their traces against rho_AB equal ``sum <u_i|rho_A|u_i>`` and
    ``sum <w_j|rho_B|w_j>``.  With ``k = l = 1`` and ``L = N = 2`` the two
    side by side are the 4 x 4 two-qubit construction.
    """
    u = np.asarray(u, dtype=complex).reshape(L, -1)
    w = np.asarray(w, dtype=complex).reshape(N, -1)
    return _left_blocks(u, N), _right_blocks(w, L)


def _left_blocks(u: np.ndarray, n: int) -> np.ndarray:
    cols = [np.kron(u[:, [i]], np.eye(n)) for i in range(u.shape[1])]
    return np.hstack(cols) if cols else np.zeros((u.shape[0] * n, 0), complex)


def _right_blocks(w: np.ndarray, m: int) -> np.ndarray:
    cols = [np.kron(np.eye(m), w[:, [j]]) for j in range(w.shape[1])]
    return np.hstack(cols) if cols else np.zeros((m * w.shape[0], 0), complex)


def overlap_number(u1: np.ndarray, u2: np.ndarray) -> float:
    """``sum |<a|b>|^2`` over columns a of ``u1`` and b of ``u2``."""
    return float(np.sum(np.abs(np.conj(u1.T) @ u2) ** 2))


def _trace_form(u: np.ndarray, rho: np.ndarray) -> float:
    return float(np.real(np.trace(np.conj(u.T) @ rho @ u)))


@dataclass(frozen=True)
class WitnessReport:
    k: int
    l: int
    trials: int
    bound: float
    min_trial: float
    violations: int
    kappa_min: float
    kappa_max: float
    optimum: float
    marginal_sum: float

    def as_dict(self) -> dict:
        return asdict(self)


def joint_bound_witness(
    rho: DensityMatrix, k: int, l: int, trials: int, rng: np.random.Generator,
    tol: float = cond.SLACK_TOL,
) -> WitnessReport:
    """Random structured isometries never beat the joint lower bound.

    For each trial, random ``u`` (L x k) and ``w`` (N x l) isometries give
    ``tr(U1^H rho U1) + tr(U2^H rho U2)``, compared with the double-counted
    bound ``P(kN + lL - kl) + P(kl)`` on the global spectrum.  Blocks built
    from the lowest eigenvectors of rho_A and rho_B give ``optimum``, which
    should equal ``marginal_sum`` (the k + l smallest marginal eigenvalues).
    """
    if len(rho.dims) != 2:
        raise ValueError("joint_bound_witness needs a bipartite state")
    L, N = rho.dims
    if not (1 <= k <= L - 1 and 1 <= l <= N - 1):
        raise ValueError(f"need 1 <= k <= {L - 1} and 1 <= l <= {N - 1}")
    lam, _ = eigh(rho.mat)
    lam = Spectrum(lam)
    bound = overlap_lower_bound(lam, k * N + l * L, k * l)
    mat = rho.mat
    values = []
    kappas = []
    for _ in range(trials):
        u1, u2 = structured_isometries(
            random_isometry(L, k, rng), random_isometry(N, l, rng), L, N
        )
        values.append(_trace_form(u1, mat) + _trace_form(u2, mat))
        kappas.append(overlap_number(u1, u2))
    w_a, v_a = eigh(partial_trace(rho, [0]).mat)
    w_b, v_b = eigh(partial_trace(rho, [1]).mat)
    u1, u2 = structured_isometries(v_a[:, :k], v_b[:, :l], L, N)
    optimum = _trace_form(u1, mat) + _trace_form(u2, mat)
    values = np.asarray(values) if values else np.array([np.inf])
    return WitnessReport(
        k, l, trials, bound,
        float(values.min()),
        int(np.count_nonzero(values < bound - tol)),
        float(min(kappas, default=np.nan)),
        float(max(kappas, default=np.nan)),
        optimum,
        float(np.sum(w_a[:k]) + np.sum(w_b[:l])),
    )


def tripartite_structured_isometries(u: np.ndarray, w: np.ndarray, L: int, M: int, N: int):
    """Blocks ``u_i (x) I_N`` (u: LM x R) and ``I_L (x) w_j`` (w: MN x S) on C^LMN."""
    u = np.asarray(u, dtype=complex).reshape(L * M, -1)
    w = np.asarray(w, dtype=complex).reshape(M * N, -1)
    return _left_blocks(u, N), _right_blocks(w, L)


def _isometry_or_empty(n: int, r: int, rng) -> np.ndarray:
    return random_isometry(n, r, rng) if r else np.zeros((n, 0), complex)


def tripartite_bound_witness(
    rho: DensityMatrix, mu: int, r: int, s: int, trials: int, rng: np.random.Generator,
    tol: float = cond.SLACK_TOL,
) -> dict:
    """Structured-isometry traces against the two-party joint bound for ``(mu, r, s)``."""
    L, M, N = rho.dims
    if not (0 <= mu < M and 0 <= r < L and 0 <= s < N) or (mu, r, s) == (0, 0, 0):
        raise ValueError(f"inadmissible index triple {(mu, r, s)}")
    n_ab, n_bc = mu * L + r, mu * N + s
    lam, _ = eigh(rho.mat)
    cum = np.concatenate(([0.0], np.cumsum(Spectrum(lam).values)))
    bound = float(cum[mu * L * N + N * r + L * s - r * s] + cum[mu * L * N + r * s])
    values = []
    for _ in range(trials):
        u1, u2 = tripartite_structured_isometries(
            _isometry_or_empty(L * M, n_ab, rng), _isometry_or_empty(M * N, n_bc, rng), L, M, N
        )
        values.append(_trace_form(u1, rho.mat) + _trace_form(u2, rho.mat))
    values = np.asarray(values)
    return {
        "bound": bound,
        "min_trial": float(values.min()),
        "violations": int(np.count_nonzero(values < bound - tol)),
        "trials": trials,
    }


# --- polytope scans ---------------------------------------------------------


def _compositions(total: int, parts: int):
    """Increasing integer tuples of length ``parts`` summing to ``total``, lexicographic."""
    for combo in itertools.combinations_with_replacement(range(total + 1), parts):
        if sum(combo) == total:
            yield combo


def _checker_shape(checker: str, parties: int, dim: int) -> tuple[int, int]:
    if checker == "three-qutrit":
        return 3, 3
    if checker == "pure-multipartite":
        if parties < 2 or dim < 2:
            raise ValueError("pure-multipartite scan needs parties >= 2 and dim >= 2")
        return parties, dim
    raise ValueError(f"unknown checker {checker!r}")


def _evaluate(checker: str, spectra) -> cond.CompatReport:
    if checker == "three-qutrit":
        return cond.check_three_qutrit_polytope(*spectra)
    return cond.check_pure_multipartite(spectra)


def lipschitz_constant(checker: str, parties: int, dim: int) -> float:
    """Bound on |slack change| per unit sup-norm change of any one spectrum.

    Sorting is 1-Lipschitz in the sup norm, so this is the largest total
    absolute coefficient of any record.
    """
    n, m = _checker_shape(checker, parties, dim)
    if checker == "three-qutrit":
        return float(max(sum(map(abs, a)) + sum(b) + sum(c) for a, b, c in cond.QUTRIT_ROWS))
    return float(n * (m - 1))


@dataclass(frozen=True)
class ScanTable:
    header: tuple[str, ...]
    rows: tuple[tuple, ...]
    resolution: int
    checker: str
    parties: int
    dim: int

    def lookup(self) -> dict:
        return {row[0]: row for row in self.rows}


def scan_polytope(
    resolution: int, checker: str = "three-qutrit", parties: int = 3, dim: int = 3
) -> ScanTable:
    """Evaluate a checker on every tuple of grid spectra.

    Each party's spectrum ranges over increasing tuples ``c / resolution``
    with integer ``c`` summing to ``resolution``.  Rows are
    ``(grid key, coordinates, verdict, min_slack)`` in lexicographic order of
    the integer grid keys.
    """
    if resolution < 2:
        raise ValueError("resolution must be >= 2")
    n, m = _checker_shape(checker, parties, dim)
    party_grid = list(_compositions(resolution, m))
    header = tuple(
        f"{'ABCDEFGHIJKLMNOPQRSTUVWXYZ'[p] if n <= 26 else p}{i + 1}"
        for p in range(n)
        for i in range(m)
    ) + ("verdict", "min_slack")
    rows = []
    for key in itertools.product(party_grid, repeat=n):
        spectra = [np.asarray(c, float) / resolution for c in key]
        report = _evaluate(checker, spectra)
        coords = tuple(float(x) for sp in spectra for x in sp)
        rows.append((key, coords, report.overall, report.min_slack))
    return ScanTable(header, tuple(rows), resolution, checker, n, m)


def snap_to_grid(values: np.ndarray, resolution: int) -> tuple[int, ...]:
    """Largest-remainder rounding of a probability vector onto the grid.

    Each coordinate moves by less than ``1 / resolution``.
    """
    x = np.asarray(values, float) * resolution
    base = np.floor(x).astype(int)
    missing = resolution - int(base.sum())
    order = np.argsort(-(x - base), kind="stable")
    base[order[:missing]] += 1
    return tuple(sorted(int(c) for c in base))


@dataclass(frozen=True)
class ContainmentReport:
    samples: int
    bins: int
    strictly_satisfied_bins: int
    margin: float
    outside: tuple[tuple, ...]

    @property
    def contained(self) -> bool:
        return not self.outside

    def as_dict(self) -> dict:
        return {
            "samples": self.samples,
            "bins": self.bins,
            "strictly_satisfied_bins": self.strictly_satisfied_bins,
            "margin": self.margin,
            "contained": self.contained,
            "outside": [[list(c) for c in key] for key in self.outside],
        }


def achievable_bins(
    resolution: int, checker: str, parties: int, dim: int, samples: int, seed: int
) -> Counter:
    """Grid cells hit by one-party spectra of Haar-random pure states."""
    n, m = _checker_shape(checker, parties, dim)
    cfg = CampaignConfig((m,) * n, samples, seed, mode="haar-pure")
    bins: Counter = Counter()
    for start in range(0, samples, CHUNK):
        stop = min(start + CHUNK, samples)
        mats = np.stack([_draw(cfg, i)[0] for i in range(start, stop)])
        red = _reduced_spectra(mats, cfg.dims, [(p,) for p in range(n)])
        for j in range(stop - start):
            bins[tuple(snap_to_grid(red[(p,)][j], resolution) for p in range(n))] += 1
    return bins


def check_containment(table: ScanTable, bins: Counter) -> ContainmentReport:
    """Sampled cells must lie in the satisfied region, up to the snapping margin.

    A snapped grid point is within ``1 / resolution`` (sup norm) of a genuine
    marginal spectrum, so its slacks can drop by at most
    ``lipschitz_constant / resolution`` below those of the genuine point.
    """
    margin = lipschitz_constant(table.checker, table.parties, table.dim) / table.resolution
    rows = table.lookup()
    outside = []
    strict = 0
    for key in sorted(bins):
        _, _, verdict, slack = rows[key]
        if verdict == cond.COMPATIBLE:
            strict += 1
        if slack < -margin - cond.SLACK_TOL:
            outside.append(key)
    return ContainmentReport(
        sum(bins.values()), len(bins), strict, margin, tuple(outside)
    )


def compare_qutrit_conditions(samples: int, seed: int, concentration: float = 0.3) -> Counter:
    """Classify random spectrum triples by (qutrit rows hold, party bounds hold).

    The qutrit rows are claimed necessary and sufficient and the party bounds
    are necessary, so ``rows_only`` (rows hold, bounds fail) must stay zero.
    """
    out: Counter = Counter()
    for i in range(samples):
        rng = np.random.default_rng(derive_seed(seed, i))
        spectra = [Spectrum(np.sort(rng.dirichlet(np.full(3, concentration)))) for _ in range(3)]
        rows_ok = cond.check_three_qutrit_polytope(*spectra).compatible
        bounds_ok = cond.check_pure_multipartite(spectra).compatible
        out[{(True, True): "both", (True, False): "rows_only",
             (False, True): "bounds_only", (False, False): "neither"}[(rows_ok, bounds_ok)]] += 1
    return out
