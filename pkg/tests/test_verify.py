import json

import numpy as np
import pytest

from qmarginal import conditions as cond
from qmarginal import verify
from qmarginal.qstate import maximally_mixed, random_fixed_spectrum_state


def test_derive_seed_is_stable_and_distinct():
    assert verify.derive_seed(7, 3) == verify.derive_seed(7, 3)
    seeds = {verify.derive_seed(7, i) for i in range(1000)}
    assert len(seeds) == 1000
    assert verify.derive_seed(7, 0) != verify.derive_seed(8, 0)


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(dims=(2, 2), samples=0),
        dict(dims=(2, 0), samples=1),
        dict(dims=(2, 2), samples=1, mode="nope"),
        dict(dims=(2, 2), samples=1, mode="fixed-spectrum"),
        dict(dims=(2, 2), samples=1, mode="fixed-spectrum", spectrum=(0.5, 0.5)),
        dict(dims=(2, 2), samples=1, spectrum=(0.25,) * 4),
        dict(dims=(2, 2), samples=1, mode="engineered"),
        dict(dims=(2, 2), samples=1, seed=-1),
    ],
)
def test_config_validation(kwargs):
    with pytest.raises(ValueError):
        verify.CampaignConfig(**kwargs)


def test_pure_two_qubit_campaign():
    res = verify.run_bipartite_campaign(verify.CampaignConfig((2, 2), 400, 7, mode="haar-pure"))
    assert res.total_violations == 0
    assert "two_qubit_gap" in res.extra_records
    # closing trace records are equalities on every sample
    assert res.records["A_majorization[k=2]"].equality_count == 400


def test_maximally_mixed_gives_constant_slacks():
    cfg = verify.CampaignConfig((2, 2), 50, 1, mode="fixed-spectrum", spectrum=(0.25,) * 4)
    res = verify.run_bipartite_campaign(cfg)
    for st in res.records.values():
        assert st.max_slack - st.min_slack < 1e-12


def test_tripartite_mixed_majorizations_are_equalities():
    cfg = verify.CampaignConfig((2, 2, 2), 20, 1, mode="fixed-spectrum", spectrum=(0.125,) * 8)
    res = verify.run_tripartite_campaign(cfg)
    maj = {k: v for k, v in res.records.items() if "majorization" in k}
    assert maj and all(v.equality_count == 20 for v in maj.values())


def test_result_independent_of_workers_and_chunking(monkeypatch):
    cfg = verify.CampaignConfig((2, 3), 600, 11)
    a = json.dumps(verify.run_bipartite_campaign(cfg).as_dict())
    b = json.dumps(
        verify.run_bipartite_campaign(verify.CampaignConfig((2, 3), 600, 11, workers=3)).as_dict()
    )
    monkeypatch.setattr(verify, "CHUNK", 97)
    c = json.dumps(verify.run_bipartite_campaign(cfg).as_dict())
    assert a == b == c


def test_argmin_seed_reproduces_sample():
    cfg = verify.CampaignConfig((2, 3), 200, 5)
    res = verify.run_bipartite_campaign(cfg)
    name = "joint_AB[k=1,l=1]"
    i = res.records[name].argmin_sample
    assert res.argmin_seed(name) == verify.derive_seed(5, i)
    single = verify.run_bipartite_campaign(verify.CampaignConfig((2, 3), i + 1, 5))
    assert single.records[name].min_slack <= res.records[name].min_slack


def test_measure_global_matches_known_spectrum():
    cfg = dict(dims=(2, 3), samples=100, seed=2)
    known = verify.run_bipartite_campaign(verify.CampaignConfig(**cfg))
    measured = verify.run_bipartite_campaign(verify.CampaignConfig(**cfg, measure_global=True))
    for name, st in known.records.items():
        assert measured.records[name].min_slack == pytest.approx(st.min_slack, abs=1e-10)


def test_pure_multipartite_campaign_rules():
    with pytest.raises(ValueError):
        verify.run_pure_multipartite_campaign(verify.CampaignConfig((2, 3), 1, mode="haar-pure"))
    with pytest.raises(ValueError):
        verify.run_pure_multipartite_campaign(verify.CampaignConfig((2, 2), 1))
    res = verify.run_pure_multipartite_campaign(
        verify.CampaignConfig((3, 3), 200, 3, mode="haar-pure")
    )
    assert res.total_violations == 0
    assert res.maxima["schmidt_spectrum_gap"] < 1e-9


def test_rank_sweep_is_mostly_applicable():
    res = verify.run_rank_sweep((2, 2, 2), 60, 4)
    assert res.counters.get("rank_violated", 0) == 0
    assert res.counters.get("rank_direct_nontrivial_applicable", 0) >= 30


def test_structured_isometries_two_qubit_layout():
    u = np.array([0.6, 0.8])
    w = np.array([1j, 0.0])
    u1, u2 = verify.structured_isometries(u, w, 2, 2)
    big = np.hstack([u1, u2])
    expected = np.array(
        [
            [u[0], 0, w[0], 0],
            [0, u[0], w[1], 0],
            [u[1], 0, 0, w[0]],
            [0, u[1], 0, w[1]],
        ]
    )
    np.testing.assert_allclose(big, expected)
    assert verify.overlap_number(u1, u2) == pytest.approx(1.0)


def test_witness_on_maximally_mixed():
    rng = np.random.default_rng(0)
    rep = verify.joint_bound_witness(maximally_mixed((2, 3)), 1, 2, 50, rng)
    assert rep.min_trial == pytest.approx((1 * 3 + 2 * 2) / 6)
    assert rep.violations == 0 and rep.bound <= rep.min_trial + 1e-12


def test_witness_optimum_and_bound():
    rng = np.random.default_rng(3)
    rho = random_fixed_spectrum_state((2, 3), rng.dirichlet(np.ones(6)), rng)
    rep = verify.joint_bound_witness(rho, 1, 1, 1000, rng)
    assert rep.violations == 0
    assert rep.min_trial >= rep.bound - 1e-8
    assert rep.optimum == pytest.approx(rep.marginal_sum, abs=1e-9)
    assert rep.kappa_min == pytest.approx(1.0) and rep.kappa_max == pytest.approx(1.0)
    with pytest.raises(ValueError):
        verify.joint_bound_witness(rho, 2, 1, 1, rng)


def test_tripartite_witness():
    rng = np.random.default_rng(8)
    rho = random_fixed_spectrum_state((2, 3, 2), rng.dirichlet(np.ones(12)), rng)
    for mu, r, s in [(0, 0, 1), (1, 1, 0), (2, 1, 1)]:
        out = verify.tripartite_bound_witness(rho, mu, r, s, 50, rng)
        assert out["violations"] == 0
    with pytest.raises(ValueError):
        verify.tripartite_bound_witness(rho, 0, 0, 0, 1, rng)


def test_scan_corners_and_order():
    table = verify.scan_polytope(2, "pure-multipartite", 3, 2)
    keys = [row[0] for row in table.rows]
    assert keys == sorted(keys)
    rows = table.lookup()
    assert rows[((0, 2), (0, 2), (0, 2))][2] == cond.COMPATIBLE
    assert rows[((1, 1), (0, 2), (0, 2))][2] == cond.INCOMPATIBLE
    assert table.header[-2:] == ("verdict", "min_slack")
    with pytest.raises(ValueError):
        verify.scan_polytope(1)


def test_snap_to_grid():
    assert verify.snap_to_grid([0.2, 0.3, 0.5], 4) == (1, 1, 2)
    x = np.random.default_rng(0).dirichlet(np.ones(3))
    snapped = np.array(verify.snap_to_grid(x, 10)) / 10
    assert np.max(np.abs(snapped - np.sort(x))) < 0.1


def test_qubit_containment():
    table = verify.scan_polytope(12, "pure-multipartite", 3, 2)
    bins = verify.achievable_bins(12, "pure-multipartite", 3, 2, 1500, 1)
    report = verify.check_containment(table, bins)
    assert report.contained and report.bins > 10


def test_rows_never_hold_without_party_bounds():
    counts = verify.compare_qutrit_conditions(1500, 2)
    assert counts["rows_only"] == 0
    assert counts["both"] > 0 and counts["bounds_only"] > 0
