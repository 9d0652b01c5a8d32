from __future__ import annotations

import random

import pytest

from cohsys.curve import subcurve_data
from cohsys.errors import ValidationError
from cohsys.sheaf import locally_free
from cohsys.stability import Bounds, SystemType, walls
from cohsys.verify import (
    SUITES,
    TrialConfig,
    alpha_scan,
    compare_walls_with_scan,
    genus_by_euler,
    random_curve,
    results_to_json,
    run_suite,
    scan_grid,
    trial_rng,
)


def test_walls_oracle_t1(t1, t1_system):
    assert compare_walls_with_scan(t1_system, t1) == []


def test_scan_detects_wall_two(t1, t1_system):
    rep = walls(t1_system, t1)
    D, upper = scan_grid(rep)
    scan = alpha_scan(t1_system, t1, Bounds(), D, upper)
    assert 2 in scan.walls


def test_oracle_reports_disagreement(t1, t1_system):
    rep = walls(t1_system, t1)
    broken = type(rep)(**{**rep.__dict__, "walls": rep.walls[1:]})
    assert compare_walls_with_scan(t1_system, t1, Bounds(), broken)


@pytest.mark.parametrize("name", sorted(SUITES))
def test_every_suite_passes_small(name):
    (res,) = run_suite(TrialConfig(seed=7, trials=5, suite=name))
    assert res.failed == 0, res.counterexample
    assert res.passed == 5


def test_unknown_suite():
    with pytest.raises(ValidationError):
        run_suite(TrialConfig(suite="nope"))


def test_runs_are_reproducible():
    cfg = TrialConfig(seed=3, trials=5, suite="chi-bounds")
    assert results_to_json(cfg, run_suite(cfg)) == results_to_json(cfg, run_suite(cfg))
    a = random_curve(trial_rng(3, "x", 0), 6, 4)
    b = random_curve(trial_rng(3, "x", 0), 6, 4)
    assert a == b


def test_random_curves_are_valid_trees():
    rng = random.Random(0)
    for _ in range(50):
        c = random_curve(rng, 8, 5)
        assert c.delta == c.gamma - 1
        assert all(2 <= g <= 5 for g in c.genera)
        assert min(c.ample_degrees) >= 1


def test_genus_by_euler_matches(p3):
    for members in ([1], [2], [1, 3], [2, 3]):
        assert genus_by_euler(p3, frozenset(members)) == subcurve_data(p3, members).genus


def test_failure_is_reported(monkeypatch):
    monkeypatch.setitem(SUITES, "bn-identity", lambda rng, cfg: {"boom": True})
    cfg = TrialConfig(trials=3, suite="bn-identity")
    doc = results_to_json(cfg, run_suite(cfg))
    assert not doc["ok"]
    assert doc["suites"][0]["failed"] == 3
    assert doc["suites"][0]["counterexample"] == {"trial": 0, "boom": True}


def test_scan_handles_line_bundle_system(t1):
    system = SystemType(locally_free(t1, 1, [3, 4]), 2)
    assert compare_walls_with_scan(system, t1, Bounds(degree_floor=-1)) == []
