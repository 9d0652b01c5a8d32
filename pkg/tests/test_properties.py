"""Property-based checks of the algebraic identities."""

from __future__ import annotations

import itertools
import math

from hypothesis import given, settings
from hypothesis import strategies as st

from cohsys.curve import build_curve, leaf_component, subcurve_data
from cohsys.dualspan import brill_noether, dimension_report
from cohsys.sheaf import chi_bounds, chi_total, locally_free, make_sheaf, w_deg, w_rank
from cohsys.stability import SubsystemCandidate, SystemType, alpha_slope, wall_for_candidate


@st.composite
def curves(draw, max_gamma=7):
    gamma = draw(st.integers(2, max_gamma))
    parents = [draw(st.integers(1, i)) for i in range(1, gamma)]
    edges = [[p, i + 1] for i, p in enumerate(parents, start=1)]
    genera = draw(st.lists(st.integers(2, 6), min_size=gamma, max_size=gamma))
    ample = draw(st.lists(st.integers(1, 6), min_size=gamma, max_size=gamma))
    if math.gcd(*ample) != 1:
        ample[0] = 1
    return build_curve([(i + 1, g) for i, g in enumerate(genera)], edges, ample)


@st.composite
def sheaves(draw, curve, max_rank=3):
    ranks = draw(st.lists(st.integers(0, max_rank), min_size=curve.gamma, max_size=curve.gamma))
    if not any(ranks):
        ranks[0] = 1
    degrees = draw(st.lists(st.integers(-10, 10), min_size=curve.gamma, max_size=curve.gamma))
    gluings = [draw(st.integers(0, min(ranks[i], ranks[j]))) for i, j in curve.edges]
    return make_sheaf(curve, ranks, degrees, gluings)


@given(curves())
def test_tree_handshake_and_weights(curve):
    assert curve.delta == curve.gamma - 1
    assert sum(curve.node_degrees) == 2 * curve.delta
    assert sum(curve.weights) == 1
    assert all(0 < w < 1 for w in curve.weights)
    assert curve.node_degrees[leaf_component(curve) - 1] == 1


@settings(max_examples=40)
@given(curves(max_gamma=8))
def test_genus_identity_all_subcurves(curve):
    ids = range(1, curve.gamma + 1)
    for size in range(1, curve.gamma):
        for members in itertools.combinations(ids, size):
            data = subcurve_data(curve, members)
            assert curve.p_a == data.genus + data.complement_genus + len(data.boundary) - 1


@given(st.data())
def test_chi_bounds_and_wdeg(data):
    curve = data.draw(curves(max_gamma=5))
    sheaf = data.draw(sheaves(curve))
    lo, hi = chi_bounds(sheaf, curve)
    assert lo <= chi_total(sheaf, curve) <= hi
    if sheaf.is_uniform:
        r = sheaf.multirank[0]
        assert sum(sheaf.degrees) <= w_deg(sheaf, curve) <= sum(sheaf.degrees) + r * (curve.gamma - 1)


@given(curves(), st.integers(1, 5), st.lists(st.integers(-10, 10), min_size=7, max_size=7))
def test_locally_free_equalities(curve, r, degrees):
    degrees = degrees[: curve.gamma]
    e = locally_free(curve, r, degrees)
    assert w_deg(e, curve) == sum(degrees)
    assert w_rank(e, curve) == r


@given(st.data())
def test_w_rank_linear(data):
    curve = data.draw(curves())
    a = data.draw(st.lists(st.integers(0, 4), min_size=curve.gamma, max_size=curve.gamma))
    b = data.draw(st.lists(st.integers(0, 4), min_size=curve.gamma, max_size=curve.gamma))
    assert w_rank([x + y for x, y in zip(a, b)], curve) == w_rank(a, curve) + w_rank(b, curve)


@given(st.integers(0, 50), st.integers(1, 20), st.integers(-10**4, 10**4))
def test_brill_noether_identity(p_a, r, d):
    closed = p_a + (r + 1) * (d - r - p_a)
    assert brill_noether(p_a, 1, d, r + 1) == brill_noether(p_a, r, d, r + 1) == closed


@given(st.data())
def test_dimension_identities(data):
    curve = data.draw(curves())
    r = data.draw(st.integers(1, 8))
    degrees = data.draw(st.lists(st.integers(-20, 60), min_size=curve.gamma, max_size=curve.gamma))
    rep = dimension_report(curve, r, degrees)
    assert all(rep.identities.values())
    assert rep.dim_x - rep.dim_product == curve.delta * r * (r + 1)


@given(st.data())
def test_wall_is_slope_equality(data):
    curve = data.draw(curves(max_gamma=4))
    r = data.draw(st.integers(1, 3))
    degrees = data.draw(st.lists(st.integers(0, 8), min_size=curve.gamma, max_size=curve.gamma))
    system = SystemType(locally_free(curve, r, degrees), data.draw(st.integers(1, r + 3)))
    sub = data.draw(sheaves(curve, max_rank=r))
    cand = SubsystemCandidate(sub, data.draw(st.integers(0, system.k)))
    wall = wall_for_candidate(system, cand, curve)
    if wall is not None:
        assert wall.alpha >= 0
        assert alpha_slope(cand, wall.alpha, curve) == alpha_slope(system, wall.alpha, curve)
        probe = wall.alpha + 1
        above = alpha_slope(cand, probe, curve) > alpha_slope(system, probe, curve)
        assert above == (wall.destabilizing_side == "above")
