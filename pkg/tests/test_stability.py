from __future__ import annotations

import itertools
from fractions import Fraction

import pytest

from cohsys.curve import build_curve
from cohsys.errors import BoundsError, ValidationError, ZeroKError
from cohsys.sheaf import SheafClass, chi_total, locally_free, make_sheaf, w_deg, w_rank
from cohsys.stability import (
    DESTABILIZED,
    ON_WALL,
    SEMISTABLE,
    STABLE,
    Bounds,
    ClassKey,
    StabHypotheses,
    SubsystemCandidate,
    SystemType,
    _Scan,
    alpha_g,
    alpha_slope,
    candidate_count,
    check_alpha,
    default_max_candidates,
    enumerate_candidates,
    format_rational,
    property_star,
    representative,
    restriction_dimension_bound,
    strong_instability_check,
    theorem_stab_verdict,
    verdict_at,
    wall_for_candidate,
    walls,
)


def line_candidate(curve, degrees, h):
    return SubsystemCandidate(locally_free(curve, 1, degrees), h)


# -- slopes and thresholds -------------------------------------------------


def test_alpha_slope_examples(t1, t1_system):
    assert alpha_slope(t1_system, 2, t1) == 8
    assert alpha_slope(t1_system, 0, t1) == 5
    assert alpha_slope(line_candidate(t1, [3, 3], 1), 2, t1) == 8


def test_alpha_g_t1(t1):
    ag = alpha_g(t1, 2, 10, 3)
    assert ag.alpha_g == Fraction(64, 3)
    assert ag.k_alpha_g == 64


def test_alpha_g_other_examples(t1):
    assert alpha_g(t1, 1, 0, 1).alpha_g == 6
    low = build_curve([(1, 1), (2, 0)], [[1, 2]], [1, 1], allow_low_genus=True)
    assert low.p_a == 1
    assert alpha_g(low, 3, 0, 2).alpha_g == 0


def test_alpha_g_errors(t1):
    with pytest.raises(ZeroKError):
        alpha_g(t1, 2, 10, 0)
    with pytest.raises(ValidationError):
        alpha_g(t1, 2, -1, 3)


# -- property (star) and strong instability ---------------------------------


def test_property_star_examples(t1, t1_system):
    star = property_star(t1_system, line_candidate(t1, [3, 3], 1), t1)
    assert star.star1 and not star.violated
    assert property_star(t1_system, line_candidate(t1, [3, 3], 2), t1).violated


def test_property_star_boundary(t1):
    # h / wrank = k / r and wdeg(F) / wrank(F) = d / r
    system = SystemType(locally_free(t1, 2, [5, 5]), 2)
    cand = line_candidate(t1, [3, 2], 1)
    assert w_deg(cand.sheaf, t1) == 5
    star = property_star(system, cand, t1)
    assert star.star2_prime and not star.star2
    assert star.violated
    assert not property_star(system, cand, t1, strict=False).violated


def test_strong_instability_examples(t1, t1_system):
    assert strong_instability_check(t1_system, line_candidate(t1, [3, 3], 2), t1)
    assert not strong_instability_check(t1_system, line_candidate(t1, [3, 3], 1), t1)
    assert not strong_instability_check(t1_system, line_candidate(t1, [5, 5], 0), t1)


# -- walls for single candidates -------------------------------------------


def test_wall_for_candidate_examples(t1, t1_system):
    wall = wall_for_candidate(t1_system, line_candidate(t1, [3, 3], 1), t1)
    assert wall.alpha == 2 and wall.destabilizing_side == "below"
    # h / wrank = k / r: parallel slopes
    system = SystemType(locally_free(t1, 2, [5, 5]), 2)
    assert wall_for_candidate(system, line_candidate(t1, [3, 3], 1), t1) is None
    # wall at -2: destabilizes for every alpha >= 0
    cand = line_candidate(t1, [3, 3], 2)
    assert wall_for_candidate(t1_system, cand, t1) is None
    for alpha in (0, 1, 100):
        assert alpha_slope(cand, alpha, t1) > alpha_slope(t1_system, alpha, t1)


def test_wall_sign_change_for_every_candidate(t1, t1_system):
    for cand in enumerate_candidates(t1_system, t1):
        wall = wall_for_candidate(t1_system, cand, t1)
        if wall is None:
            continue
        eps = Fraction(1, wall.alpha.denominator * 2)
        diff = lambda a: alpha_slope(cand, a, t1) - alpha_slope(t1_system, a, t1)  # noqa: E731
        assert diff(wall.alpha) == 0
        below, above = diff(wall.alpha - eps), diff(wall.alpha + eps)
        if wall.destabilizing_side == "below":
            assert above < 0 and (wall.alpha == 0 or below > 0)
        else:
            assert above > 0 and (wall.alpha == 0 or below < 0)


# -- enumeration ------------------------------------------------------------


def brute_force_candidates(system, curve, lo, hi):
    r, k = system.rank, system.k
    full = (system.sheaf.multirank, system.sheaf.degrees, system.sheaf.gluings, k)
    out = []
    for s in itertools.product(range(r + 1), repeat=curve.gamma):
        if not any(s):
            continue
        f_ranges = [range(lo[i], hi[i] + 1) if s[i] else [0] for i in range(curve.gamma)]
        g_ranges = [range(min(s[i], s[j]) + 1) for i, j in curve.edges]
        for f in itertools.product(*f_ranges):
            for gl in itertools.product(*g_ranges):
                for h in range(k + 1):
                    if (s, f, gl, h) != full:
                        out.append((s, f, gl, h))
    return out


def test_enumeration_tiny_count(t1):
    system = SystemType(locally_free(t1, 1, [1, 1]), 1)
    got = [(c.sheaf.multirank, c.sheaf.degrees, c.sheaf.gluings, c.h) for c in enumerate_candidates(system, t1)]
    # (1,0) and (0,1): 2 degrees x 2 h each; (1,1): 4 degree pairs x 2 gluings x 2 h; minus the full system
    assert len(got) == 4 + 4 + 16 - 1 == 23
    assert got == brute_force_candidates(system, t1, [0, 0], [1, 1])
    assert candidate_count(system, t1, Bounds()) == 23


def test_enumeration_matches_brute_force_t1(t1, t1_system):
    got = [(c.sheaf.multirank, c.sheaf.degrees, c.sheaf.gluings, c.h) for c in enumerate_candidates(t1_system, t1)]
    expected = brute_force_candidates(t1_system, t1, [0, 0], [5, 5])
    assert got == expected
    assert len(got) == candidate_count(t1_system, t1, Bounds()) == 1391


def test_enumeration_negative_floor_p3(p3):
    system = SystemType(make_sheaf(p3, [1, 1, 1], [1, 2, 1], [0, 1]), 2)
    bounds = Bounds(degree_floor=-1)
    got = [(c.sheaf.multirank, c.sheaf.degrees, c.sheaf.gluings, c.h) for c in enumerate_candidates(system, p3, bounds)]
    assert got == brute_force_candidates(system, p3, [-1, -1, -1], [1, 2, 1])


def test_enumeration_k_zero(t1):
    system = SystemType(locally_free(t1, 1, [1, 1]), 0)
    assert {c.h for c in enumerate_candidates(system, t1)} == {0}


def test_enumeration_empty_box(t1, t1_system):
    with pytest.raises(BoundsError):
        list(enumerate_candidates(t1_system, t1, Bounds(degree_floor=6)))


def test_enumeration_cap(t1, t1_system):
    with pytest.raises(BoundsError):
        enumerate_candidates(t1_system, t1, Bounds(max_candidates=100))
    with pytest.raises(BoundsError):
        walls(t1_system, t1, Bounds(max_candidates=100))


def test_cap_from_environment(monkeypatch):
    monkeypatch.setenv("COHSYS_MAX_CANDIDATES", "1234")
    assert default_max_candidates() == 1234
    assert Bounds().max_candidates == 1234


# -- wall reports -----------------------------------------------------------


def test_walls_t1(t1, t1_system):
    rep = walls(t1_system, t1)
    values = rep.wall_values
    assert values == sorted(set(values))
    assert 2 in values and max(values) <= 64
    assert rep.stabilizes_below_k_alpha_g and rep.thm_a_shadow_checked
    assert rep.k_alpha_g == 64 and rep.alpha_g == Fraction(64, 3)
    assert all(w.witnesses for w in rep.walls)
    at_two = next(w for w in rep.walls if w.alpha == 2)
    found = False
    for key, side in at_two.witnesses:
        cand = representative(t1_system, t1, key, rep.bounds)
        if (w_rank(cand.sheaf, t1), w_deg(cand.sheaf, t1), cand.h) == (1, 6, 1):
            assert side == "below"
            found = True
    assert found


def test_walls_match_single_candidate_walls(t1, t1_system):
    rep = walls(t1_system, t1)
    singles = {}
    for cand in enumerate_candidates(t1_system, t1):
        wall = wall_for_candidate(t1_system, cand, t1)
        if wall is not None:
            singles.setdefault(wall.alpha, set()).add(wall.destabilizing_side)
    assert sorted(singles) == rep.wall_values
    for w in rep.walls:
        assert {side for _, side in w.witnesses} == singles[w.alpha]


def test_dedup_one_wall_several_witnesses(t1, t1_system):
    rep = walls(t1_system, t1)
    assert any(len(w.witnesses) > 1 for w in rep.walls)


def test_chambers_partition(t1, t1_system):
    rep = walls(t1_system, t1)
    chambers = rep.chambers
    assert chambers[0].lower == 0 and chambers[-1].upper is None
    for a, b in zip(chambers, chambers[1:]):
        assert a.upper == b.lower
    for ch in chambers:
        assert ch.lower < ch.sample and (ch.upper is None or ch.sample < ch.upper)


def test_walls_k_zero(t1):
    system = SystemType(locally_free(t1, 2, [5, 5]), 0)
    rep = walls(system, t1)
    assert rep.alpha_g is None
    assert rep.chambers
    for w in rep.walls:
        assert all(key.h == 0 for key, _ in w.witnesses)


def test_negative_floor_disables_shadow(t1, t1_system):
    rep = walls(t1_system, t1, Bounds(degree_floor=-1))
    assert not rep.thm_a_shadow_checked
    assert any("not asserted" in n for n in rep.notes)


def test_walls_parallel_identical(p3):
    system = SystemType(locally_free(p3, 2, [4, 5, 4]), 3)
    one = walls(system, p3, Bounds(), workers=1)
    many = walls(system, p3, Bounds(), workers=3)
    assert one == many


def test_representative_in_class(t1, t1_system):
    rep = walls(t1_system, t1)
    for w in rep.walls:
        for key, _ in w.witnesses:
            cand = representative(t1_system, t1, key, rep.bounds)
            assert cand.sheaf.multirank == key.multirank and cand.h == key.h
            assert chi_total(cand.sheaf, t1) == key.chi
            assert wall_for_candidate(t1_system, cand, t1).alpha == w.alpha


# -- single-alpha verdicts --------------------------------------------------


@pytest.fixture
def line_system(t1):
    return SystemType(locally_free(t1, 1, [5, 5]), 2), Bounds(degree_ceiling=(4, 4))


def test_check_alpha_verdicts(t1, line_system):
    system, bounds = line_system
    assert check_alpha(system, t1, Fraction(1, 4), bounds) == (STABLE, None)
    verdict, witness = check_alpha(system, t1, Fraction(1, 2), bounds)
    assert verdict == ON_WALL and witness is not None
    verdict, witness = check_alpha(system, t1, 1, bounds)
    assert verdict == DESTABILIZED
    cand = representative(system, t1, witness, bounds)
    assert alpha_slope(cand, 1, t1) > alpha_slope(system, 1, t1)


def test_check_alpha_rejects_negative(t1, line_system):
    with pytest.raises(ValidationError, match="alpha must be a nonnegative rational"):
        check_alpha(line_system[0], t1, -1)


def test_verdict_at_semistable():
    tie = ClassKey((1, 1), 3, 1)
    assert verdict_at(_Scan(walls={}, tie=tie), Fraction(1)) == (SEMISTABLE, tie)
    assert verdict_at(_Scan(walls={}), Fraction(1)) == (STABLE, None)


# -- conditional verdicts ---------------------------------------------------


def test_theorem_stab_verdict(t1, t1_system):
    v = theorem_stab_verdict(t1_system, t1, StabHypotheses(True, True, True, False))
    assert v.conditional_stable and v.threshold == 64
    assert "conditional" in v.label
    k4 = SystemType(locally_free(t1, 2, [5, 5]), 4)
    v = theorem_stab_verdict(k4, t1, StabHypotheses(True, True, True, False))
    assert not v.conditional_stable and "w_stable_or_coprime" in v.failing
    v = theorem_stab_verdict(t1_system, t1, StabHypotheses(False, True, True, True))
    assert v.label.startswith("inconclusive")


def test_restriction_dimension_bound(t1, t1_system):
    assert restriction_dimension_bound(t1_system, 1, 2, t1)
    assert not restriction_dimension_bound(t1_system, 1, 1, t1)
    k0 = SystemType(locally_free(t1, 2, [5, 5]), 0)
    assert restriction_dimension_bound(k0, 2, 0, t1)


def test_format_rational():
    assert format_rational(Fraction(64, 3)) == "64/3"
    assert format_rational(Fraction(64, 1)) == "64"
    assert format_rational(Fraction(-1, 2)) == "-1/2"


def test_system_requires_uniform_rank(t1):
    system = SystemType(SheafClass((1, 2), (0, 0), (1,), False), 1)
    with pytest.raises(ValidationError):
        system.rank
