"""Spectral compatibility conditions between a global state and its reductions.

Every checker takes increasing-ordered spectra (a :class:`Spectrum` or any
sequence, which is validated and sorted) and returns a :class:`CompatReport`
with one :class:`InequalityRecord` per inequality instance.  Records are in
``lhs >= rhs`` form, so ``slack = lhs - rhs`` and a negative slack beyond the
tolerance means the candidate spectra cannot come from any global state.

Record names:

* ``A_majorization[k=..]`` style records are prefix-sum comparisons of a
  majorization; the final ``k`` is the equal-totals condition, whose slack is
  ``-|lhs - rhs|``.
* ``joint_AB[k=..,l=..]`` couple the two single-party spectra to the global one.
* ``joint_AB_BC[mu=..,r=..,s=..]`` couple the two-party spectra of a
  tripartite state to the global one.
* ``party_bound[k=..,l=..,p=..]`` are the pure multipartite one-party bounds
  (parties numbered from 1).
* ``qutrit[row=..,roles=XYZ]`` are the three-qutrit pure-state rows with the
  parties X, Y, Z playing roles A, B, C.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .linalg import Spectrum
from .majorization import block_sums

SLACK_TOL = 1e-8

SATISFIED = "satisfied"
EQUALITY = "equality-within-tol"
VIOLATED = "violated"
COMPATIBLE = "compatible-necessary"
INCOMPATIBLE = "incompatible"


def classify(slack: float, tol: float = SLACK_TOL) -> str:
    if slack < -tol:
        return VIOLATED
    if abs(slack) <= tol:
        return EQUALITY
    return SATISFIED


@dataclass(frozen=True)
class InequalityRecord:
    name: str
    lhs: float
    rhs: float
    slack: float
    verdict: str

    @classmethod
    def geq(cls, name: str, lhs: float, rhs: float, tol: float = SLACK_TOL):
        slack = lhs - rhs
        return cls(name, float(lhs), float(rhs), float(slack), classify(slack, tol))

    @classmethod
    def equal(cls, name: str, lhs: float, rhs: float, tol: float = SLACK_TOL):
        slack = 0.0 - abs(lhs - rhs)
        return cls(name, float(lhs), float(rhs), float(slack), classify(slack, tol))

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "slack": self.slack,
            "verdict": self.verdict,
        }


@dataclass(frozen=True)
class CompatReport:
    """Outcome of one checker.

    ``overall`` and ``min_slack`` are computed from ``records`` only.
    ``extra_records`` hold conditions that enter ``sufficient_verdict`` but
    not the necessity verdict.
    """

    checker: str
    records: tuple[InequalityRecord, ...]
    tolerance: float = SLACK_TOL
    claimed_sufficient: bool = False
    extra_records: tuple[InequalityRecord, ...] = ()
    sufficient_verdict: str | None = None
    overall: str = field(init=False)
    min_slack: float = field(init=False)

    def __post_init__(self):
        bad = any(r.verdict == VIOLATED for r in self.records)
        object.__setattr__(self, "overall", INCOMPATIBLE if bad else COMPATIBLE)
        slack = min((r.slack for r in self.records), default=math.inf)
        object.__setattr__(self, "min_slack", slack)

    @property
    def compatible(self) -> bool:
        return self.overall == COMPATIBLE

    def violated(self) -> list[InequalityRecord]:
        return [r for r in self.records if r.verdict == VIOLATED]

    def by_name(self) -> dict[str, InequalityRecord]:
        return {r.name: r for r in self.records + self.extra_records}

    def as_dict(self) -> dict:
        out = {
            "checker": self.checker,
            "overall": self.overall,
            "min_slack": self.min_slack,
            "tolerance": self.tolerance,
            "claimed_sufficient": self.claimed_sufficient,
            "records": [r.as_dict() for r in self.records],
        }
        if self.extra_records:
            out["extra_records"] = [r.as_dict() for r in self.extra_records]
        if self.sufficient_verdict is not None:
            out["sufficient_verdict"] = self.sufficient_verdict
        return out


def _sorted_values(v, length: int | None = None, label: str = "spectrum") -> np.ndarray:
    lam = v.values if isinstance(v, Spectrum) else Spectrum(v).values
    if length is not None and lam.size != length:
        raise ValueError(f"{label} must have {length} entries, got {lam.size}")
    return lam


def _cum(lam: np.ndarray) -> np.ndarray:
    # _cum(lam)[k] is the sum of the k smallest entries
    return np.concatenate(([0.0], np.cumsum(lam)))


def majorization_records(
    name: str, y: np.ndarray, x: np.ndarray, tol: float = SLACK_TOL
) -> list[InequalityRecord]:
    """Records for ``y`` majorizing ``x`` (both already sorted increasing)."""
    cx, cy = _cum(x), _cum(y)
    n = x.size
    recs = [InequalityRecord.geq(f"{name}[k={k}]", cx[k], cy[k], tol) for k in range(1, n)]
    recs.append(InequalityRecord.equal(f"{name}[k={n}]", cx[n], cy[n], tol))
    return recs


def check_two_qubit(lam_a, lam_b, lam_ab, tol: float = SLACK_TOL) -> CompatReport:
    """Two-qubit conditions on the smallest marginal eigenvalues.

    Necessity uses the three records; the extra ``two_qubit_gap`` record,
    ``|a1 - b1| <= min(l3 - l1, l4 - l2)``, joins them for
    ``sufficient_verdict``.
    """
    a = _sorted_values(lam_a, 2, "lam_a")
    b = _sorted_values(lam_b, 2, "lam_b")
    ab = _sorted_values(lam_ab, 4, "lam_ab")
    ca, cb, cab = _cum(a), _cum(b), _cum(ab)
    records = (
        InequalityRecord.geq("A_min_vs_AB", ca[1], cab[2], tol),
        InequalityRecord.geq("B_min_vs_AB", cb[1], cab[2], tol),
        InequalityRecord.geq("AB_min_sum", ca[1] + cb[1], cab[3] + cab[1], tol),
    )
    gap = InequalityRecord.geq(
        "two_qubit_gap", min(ab[2] - ab[0], ab[3] - ab[1]), abs(a[0] - b[0]), tol
    )
    suff_ok = all(r.verdict != VIOLATED for r in records + (gap,))
    return CompatReport(
        "two-qubit",
        records,
        tol,
        claimed_sufficient=True,
        extra_records=(gap,),
        sufficient_verdict="compatible" if suff_ok else "incompatible",
    )


def check_bipartite(lam_a, lam_b, lam_ab, tol: float = SLACK_TOL) -> CompatReport:
    """Majorization of each marginal by the block sums of the global spectrum,
    plus the joint bounds for every ``1 <= k < L``, ``1 <= l < N``::

        sum_{i<=k} a_i + sum_{j<=l} b_j >= sum_{i<=kN+lL-kl} g_i + sum_{i<=kl} g_i
    """
    a = _sorted_values(lam_a, label="lam_a")
    b = _sorted_values(lam_b, label="lam_b")
    L, N = a.size, b.size
    ab = _sorted_values(lam_ab, L * N, "lam_ab")
    ca, cb, cab = _cum(a), _cum(b), _cum(ab)
    records = majorization_records("A_majorization", block_sums(ab, N), a, tol)
    records += majorization_records("B_majorization", block_sums(ab, L), b, tol)
    for k in range(1, L):
        for l in range(1, N):
            records.append(
                InequalityRecord.geq(
                    f"joint_AB[k={k},l={l}]",
                    ca[k] + cb[l],
                    cab[k * N + l * L - k * l] + cab[k * l],
                    tol,
                )
            )
    return CompatReport("bipartite", tuple(records), tol)


def tripartite_joint_indices(L: int, M: int, N: int):
    """Admissible ``(mu, r, s)`` with the prefix lengths each one needs."""
    for mu in range(M):
        for r in range(L):
            for s in range(N):
                if (mu, r, s) == (0, 0, 0):
                    continue
                yield (
                    mu, r, s,
                    mu * L + r,
                    mu * N + s,
                    mu * L * N + N * r + L * s - r * s,
                    mu * L * N + r * s,
                )


def check_tripartite(
    lam_ab, lam_bc, lam_b, lam_abc, dims: Sequence[int], tol: float = SLACK_TOL
) -> CompatReport:
    """Conditions linking rho_AB, rho_BC, rho_B and rho_ABC on C^L (x) C^M (x) C^N.

    Four majorizations (AB and BC by block sums of the global spectrum, B by
    block sums of each two-party spectrum) and, for every
    ``(mu, r, s) != (0, 0, 0)`` with ``mu < M``, ``r < L``, ``s < N``::

        P_AB(mu L + r) + P_BC(mu N + s)
            >= P_ABC(mu LN + Nr + Ls - rs) + P_ABC(mu LN + rs)

    where ``P_X(n)`` sums the n smallest eigenvalues of rho_X.
    """
    L, M, N = (int(d) for d in dims)
    ab = _sorted_values(lam_ab, L * M, "lam_ab")
    bc = _sorted_values(lam_bc, M * N, "lam_bc")
    b = _sorted_values(lam_b, M, "lam_b")
    abc = _sorted_values(lam_abc, L * M * N, "lam_abc")
    records = majorization_records("AB_majorization", block_sums(abc, N), ab, tol)
    records += majorization_records("BC_majorization", block_sums(abc, L), bc, tol)
    records += majorization_records("B_via_BC_majorization", block_sums(bc, N), b, tol)
    records += majorization_records("B_via_AB_majorization", block_sums(ab, L), b, tol)
    cab, cbc, cabc = _cum(ab), _cum(bc), _cum(abc)
    for mu, r, s, i_ab, i_bc, i_big, i_small in tripartite_joint_indices(L, M, N):
        records.append(
            InequalityRecord.geq(
                f"joint_AB_BC[mu={mu},r={r},s={s}]",
                cab[i_ab] + cbc[i_bc],
                cabc[i_big] + cabc[i_small],
                tol,
            )
        )
    return CompatReport("tripartite", tuple(records), tol)


def strict_floor(x: float) -> int:
    """Largest integer strictly below ``x`` (so ``strict_floor(2) == 1``)."""
    return math.ceil(x) - 1


@dataclass(frozen=True)
class RankOrientation:
    status: str  # "not-applicable" | "satisfied" | "violated"
    r: int
    s: int
    t: int
    bound: int | None
    reason: str

    def as_dict(self) -> dict:
        return {
            "status": self.status,
            "r": self.r,
            "s": self.s,
            "t": self.t,
            "bound": self.bound,
            "reason": self.reason,
        }


@dataclass(frozen=True)
class RankCheck:
    direct: RankOrientation
    swapped: RankOrientation

    @property
    def status(self) -> str:
        states = {self.direct.status, self.swapped.status}
        if "violated" in states:
            return "violated"
        if "satisfied" in states:
            return "satisfied"
        return "not-applicable"

    def as_dict(self) -> dict:
        return {
            "status": self.status,
            "direct": self.direct.as_dict(),
            "swapped": self.swapped.as_dict(),
        }


def _rank_orientation(r_abc, r_near, r_far, r_b, L, M, N, floor) -> RankOrientation:
    # "near" is the pair whose deficiency s sets the premise (BC in the direct
    # orientation), "far" the other pair; L is the dimension of the party
    # outside the near pair.
    s = M * N - r_near
    r = L * M - r_far
    t = M - r_b
    if r_abc != L * M * N - L * s:
        return RankOrientation(
            "not-applicable", r, s, t, None,
            f"rank(ABC)={r_abc} differs from {L * M * N}-{L}*{s}",
        )
    if N * r > L * s:
        return RankOrientation(
            "not-applicable", r, s, t, None, f"{N}*{r} > {L}*{s}"
        )
    x = (r - 1) / L
    bound = (strict_floor(x) if floor == "strict" else math.floor(x)) + 1
    status = "satisfied" if t <= bound else "violated"
    return RankOrientation(status, r, s, t, bound, f"t={t} vs bound {bound}")


def check_rank_deficiency(
    r_abc: int, r_bc: int, r_ab: int, r_b: int, dims: Sequence[int], floor: str = "strict"
) -> RankCheck:
    """Rank-deficiency implication for a tripartite state.

    With ``s = MN - rank(BC)``, ``r = LM - rank(AB)``, ``t = M - rank(B)``:
    if ``rank(ABC) = LMN - Ls`` and ``Nr <= Ls`` then
    ``t <= [(r - 1)/L] + 1``.  ``floor="strict"`` reads ``[x]`` as the largest
    integer strictly below ``x``; ``floor="standard"`` uses ``math.floor``.
    The A <-> C exchanged statement is evaluated as ``swapped``.
    """
    if floor not in ("strict", "standard"):
        raise ValueError(f"unknown floor convention {floor!r}")
    L, M, N = (int(d) for d in dims)
    for name, val, hi in (
        ("rank(ABC)", r_abc, L * M * N),
        ("rank(BC)", r_bc, M * N),
        ("rank(AB)", r_ab, L * M),
        ("rank(B)", r_b, M),
    ):
        if not 1 <= val <= hi:
            raise ValueError(f"{name}={val} outside [1, {hi}]")
    direct = _rank_orientation(r_abc, r_bc, r_ab, r_b, L, M, N, floor)
    swapped = _rank_orientation(r_abc, r_ab, r_bc, r_b, N, M, L, floor)
    return RankCheck(direct, swapped)


def check_pure_multipartite(spectra: Sequence, tol: float = SLACK_TOL) -> CompatReport:
    """One-party bounds for a pure state of ``n`` parties of dimension ``M``.

    For every ordered pair ``k != l`` and ``1 <= p < M``::

        sum_{j != k,l} (1 - max eigenvalue of j) + P_k(p) >= P_l(p)
    """
    lams = [_sorted_values(s, label=f"party {i + 1}") for i, s in enumerate(spectra)]
    if len(lams) < 2:
        raise ValueError("need at least two parties")
    m = lams[0].size
    if any(lam.size != m for lam in lams):
        raise ValueError("all parties must have the same local dimension")
    cums = [_cum(lam) for lam in lams]
    records = []
    n = len(lams)
    for k in range(n):
        for l in range(n):
            if k == l:
                continue
            rest = sum(cums[j][m - 1] for j in range(n) if j not in (k, l))
            for p in range(1, m):
                records.append(
                    InequalityRecord.geq(
                        f"party_bound[k={k + 1},l={l + 1},p={p}]",
                        rest + cums[k][p],
                        cums[l][p],
                        tol,
                    )
                )
    return CompatReport("pure-multipartite", tuple(records), tol)


# Three-qutrit pure-state rows as (role A, role B, role C) coefficient vectors
# over increasing eigenvalues; each row reads A . lam_A <= B . lam_B + C . lam_C.
QUTRIT_ROWS = (
    ((1, 1, 0), (1, 1, 0), (1, 1, 0)),
    ((1, 0, 1), (1, 1, 0), (1, 0, 1)),
    ((0, 1, 1), (1, 1, 0), (0, 1, 1)),
    ((1, 2, 0), (1, 2, 0), (1, 2, 0)),
    ((2, 1, 0), (1, 2, 0), (2, 1, 0)),
    ((0, 2, 1), (1, 2, 0), (0, 2, 1)),
    ((0, 2, 1), (2, 1, 0), (0, 1, 2)),
)
PARTY_NAMES = "ABC"


def _canonical(coeffs: dict[int, np.ndarray]) -> tuple:
    # rewrite each party's form using lam_3 = 1 - lam_1 - lam_2
    const = 0.0
    parts = []
    for party in range(3):
        c = coeffs[party]
        parts.append((c[0] - c[2], c[1] - c[2]))
        const += c[2]
    return tuple(parts) + (const,)


@functools.lru_cache(maxsize=None)
def qutrit_polytope_rows():
    """Deduplicated (row, roles, per-party coefficient) triples.

    Coefficients are in slack form: positive on the roles-B and roles-C
    parties, negative on the roles-A party.
    """
    seen = set()
    out = []
    for row, (ca, cb, cc) in enumerate(QUTRIT_ROWS, start=1):
        for perm in itertools.permutations(range(3)):
            coeffs = {
                perm[0]: -np.asarray(ca, float),
                perm[1]: np.asarray(cb, float),
                perm[2]: np.asarray(cc, float),
            }
            key = _canonical(coeffs)
            if key in seen:
                continue
            seen.add(key)
            roles = "".join(PARTY_NAMES[p] for p in perm)
            out.append((row, roles, coeffs))
    return out


def check_three_qutrit_polytope(lam_a, lam_b, lam_c, tol: float = SLACK_TOL) -> CompatReport:
    """The three-qutrit pure-state rows under every relabeling of A, B, C.

    Claimed necessary and sufficient for the three spectra to be the
    one-party marginals of a pure state on C^3 (x) C^3 (x) C^3.
    """
    lams = [
        _sorted_values(lam_a, 3, "lam_a"),
        _sorted_values(lam_b, 3, "lam_b"),
        _sorted_values(lam_c, 3, "lam_c"),
    ]
    records = []
    for row, roles, coeffs in qutrit_polytope_rows():
        a_party = PARTY_NAMES.index(roles[0])
        rhs = float(-coeffs[a_party] @ lams[a_party])
        lhs = float(sum(coeffs[p] @ lams[p] for p in range(3) if p != a_party))
        records.append(InequalityRecord.geq(f"qutrit[row={row},roles={roles}]", lhs, rhs, tol))
    ok = all(r.verdict != VIOLATED for r in records)
    return CompatReport(
        "qutrit-polytope",
        tuple(records),
        tol,
        claimed_sufficient=True,
        sufficient_verdict="compatible" if ok else "incompatible",
    )
