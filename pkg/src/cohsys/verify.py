"""Randomized and exhaustive checks against brute-force oracles.

Each suite draws its instances from a per-trial RNG seeded by
``(seed, suite, trial)``, so results do not depend on execution order.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Callable

import networkx as nx
import numpy as np

from .curve import NodalCurve, build_curve, subcurve_data
from .dualspan import brill_noether, dimension_report
from .sheaf import SheafClass, chi_component, chi_total, locally_free, make_sheaf, w_deg
from .stability import (
    DESTABILIZED,
    ON_WALL,
    SEMISTABLE,
    STABLE,
    Bounds,
    StabHypotheses,
    SubsystemCandidate,
    SystemType,
    alpha_slope,
    candidate_count,
    enumerate_candidates,
    format_rational,
    k_alpha_g,
    restriction_dimension_bound,
    strong_instability_check,
    theorem_stab_verdict,
    walls,
)


@dataclass(frozen=True)
class TrialConfig:
    seed: int = 1
    trials: int = 1000
    max_gamma: int = 4
    max_genus: int = 4
    max_rank: int = 3
    max_degree: int = 8
    max_k_extra: int = 3
    suite: str = "all"


@dataclass
class SuiteResult:
    suite: str
    trials: int
    passed: int = 0
    failed: int = 0
    counterexample: dict | None = None

    @property
    def ok(self) -> bool:
        return self.failed == 0


def trial_rng(seed: int, suite: str, index: int) -> random.Random:
    return random.Random(f"{seed}:{suite}:{index}")


def random_curve(rng: random.Random, max_gamma: int, max_genus: int, min_gamma: int = 2) -> NodalCurve:
    gamma = rng.randint(min_gamma, max_gamma)
    if gamma == 1:
        edges = []
    else:
        tree = nx.from_prufer_sequence([rng.randrange(gamma) for _ in range(gamma - 2)])
        edges = [[i + 1, j + 1] for i, j in sorted(tree.edges())]
    genera = [rng.randint(2, max(2, max_genus)) for _ in range(gamma)]
    while True:
        ample = [rng.randint(1, 6) for _ in range(gamma)]
        if math.gcd(*ample) == 1:
            break
    return build_curve(
        [(i + 1, g) for i, g in enumerate(genera)], edges, ample, allow_smooth=gamma == 1
    )


def random_uniform_system(rng: random.Random, cfg: TrialConfig, curve: NodalCurve) -> SystemType:
    r = rng.randint(1, cfg.max_rank)
    degrees = [rng.randint(0, cfg.max_degree) for _ in range(curve.gamma)]
    if rng.random() < 0.5:
        sheaf = locally_free(curve, r, degrees)
    else:
        sheaf = make_sheaf(curve, [r] * curve.gamma, degrees, [rng.randint(0, r) for _ in curve.edges])
    return SystemType(sheaf, rng.randint(1, r + cfg.max_k_extra))


def serialize(curve: NodalCurve, **objs) -> dict:
    doc = {"curve": curve.to_json()}
    for name, obj in objs.items():
        doc[name] = obj.to_json() if hasattr(obj, "to_json") else obj
    return doc


# ---------------------------------------------------------------------------
# Oracles
# ---------------------------------------------------------------------------


def genus_by_euler(curve: NodalCurve, members: frozenset[int]) -> int:
    """p_a(B) = 1 - chi(O_B) = 1 - sum(1 - g_i) + #(nodes inside B)."""
    inner = sum(1 for i, j in curve.edges if (i + 1) in members and (j + 1) in members)
    return 1 - sum(1 - curve.genera[m - 1] for m in members) + inner


VERDICT_CODES = (STABLE, SEMISTABLE, ON_WALL, DESTABILIZED)


@dataclass
class ScanResult:
    walls: list[Fraction]
    codes: np.ndarray  # index into VERDICT_CODES for alpha = n / denominator
    denominator: int

    def verdict(self, n: int) -> str:
        return VERDICT_CODES[self.codes[n]]


def alpha_scan(system: SystemType, curve: NodalCurve, bounds: Bounds, denominator: int, upper: Fraction) -> ScanResult:
    """Evaluate every candidate's slope difference on the grid ``n / denominator``.

    Candidates come from the full enumeration; the slope difference is
    affine in alpha, so it is read off at alpha = 0 and 1 and evaluated
    exactly on the whole grid with integer arithmetic.
    """
    coeffs = set()
    e0, e1 = alpha_slope(system, 0, curve), alpha_slope(system, 1, curve)
    for cand in enumerate_candidates(system, curve, bounds):
        c0 = alpha_slope(cand, 0, curve) - e0
        c1 = alpha_slope(cand, 1, curve) - e1 - c0
        coeffs.add((c0, c1))
    coeffs = sorted(coeffs)
    lcm = 1
    for c0, c1 in coeffs:
        lcm = math.lcm(lcm, c0.denominator, c1.denominator)
    n_max = math.ceil(upper * denominator)
    a_int = [int(c0 * lcm) * denominator for c0, _ in coeffs]
    b_int = [int(c1 * lcm) for _, c1 in coeffs]
    if max(abs(x) for x in a_int + b_int) * (n_max + 2) >= 2**62:
        raise OverflowError("scan grid too fine for int64 evaluation")
    a = np.array(a_int, dtype=np.int64)[:, None]
    b = np.array(b_int, dtype=np.int64)[:, None]
    moving = b != 0
    codes = np.zeros(n_max + 1, dtype=np.int8)
    crossings = np.zeros(n_max + 1, dtype=bool)
    for start in range(0, n_max + 1, 4096):
        stop = min(n_max + 1, start + 4096)
        vals = a + b * np.arange(start, stop, dtype=np.int64)[None, :]
        zero = vals == 0
        crossing = (zero & moving).any(axis=0)
        code = np.where(zero.any(axis=0), 1, 0)
        code = np.where(crossing, 2, code)
        code = np.where((vals > 0).any(axis=0), 3, code)
        codes[start:stop] = code
        crossings[start:stop] = crossing
    walls_found = [Fraction(int(n), denominator) for n in np.flatnonzero(crossings)]
    return ScanResult(walls_found, codes, denominator)


def scan_grid(report) -> tuple[int, Fraction]:
    """Grid denominator (twice the lcm of wall denominators) and upper end."""
    values = report.wall_values
    D = 2
    for w in values:
        D = math.lcm(D, 2 * w.denominator)
    return D, max([report.k_alpha_g] + values) + 1


def compare_walls_with_scan(
    system: SystemType, curve: NodalCurve, bounds: Bounds | None = None, report=None
) -> list[str]:
    """Differences between :func:`walls` and the brute-force alpha scan (empty when they agree)."""
    bounds = bounds or Bounds()
    report = report or walls(system, curve, bounds)
    values = report.wall_values
    D, upper = scan_grid(report)
    scan = alpha_scan(system, curve, bounds, D, upper)
    problems = []
    if scan.walls != values:
        problems.append(
            "wall sets differ: closed form "
            + str([format_rational(v) for v in values])
            + " scan "
            + str([format_rational(v) for v in scan.walls])
        )
    # grid points strictly inside each chamber must carry the chamber's verdict
    for ch in report.chambers:
        lo = int(ch.lower * D) + 1
        hi = len(scan.codes) if ch.upper is None else int(ch.upper * D)
        inside = scan.codes[lo:hi]
        expected = VERDICT_CODES.index(ch.verdict)
        bad = np.flatnonzero(inside != expected)
        if bad.size:
            n = lo + int(bad[0])
            problems.append(
                f"chamber starting at {format_rational(ch.lower)} says {ch.verdict}, "
                f"scan at {format_rational(Fraction(n, D))} says {scan.verdict(n)}"
            )
    return problems


# ---------------------------------------------------------------------------
# Suites
# ---------------------------------------------------------------------------


def _all_gluings(curve: NodalCurve, multirank):
    caps = [min(multirank[i], multirank[j]) for i, j in curve.edges]
    return itertools.product(*(range(c + 1) for c in caps))


def suite_chi_bounds(rng, cfg):
    curve = random_curve(rng, cfg.max_gamma, cfg.max_genus)
    while True:
        ranks = [rng.randint(0, cfg.max_rank) for _ in range(curve.gamma)]
        if any(ranks):
            break
    if rng.random() < 0.5:
        ranks = [max(ranks)] * curve.gamma
    degrees = [rng.randint(-cfg.max_degree, cfg.max_degree) if r else 0 for r in ranks]
    sum_chi = sum(chi_component(g, r, d) for g, r, d in zip(curve.genera, ranks, degrees))
    r_max = max(ranks)
    uniform = len(set(ranks)) == 1
    for gl in _all_gluings(curve, ranks):
        sheaf = make_sheaf(curve, ranks, degrees, list(gl))
        chi = chi_total(sheaf, curve)
        if not sum_chi - r_max * (curve.gamma - 1) <= chi <= sum_chi:
            return serialize(curve, sheaf=sheaf, chi=chi)
        if uniform:
            sd = sum(sheaf.degrees)
            wd = w_deg(sheaf, curve)
            if not sd <= wd <= sd + r_max * (curve.gamma - 1):
                return serialize(curve, sheaf=sheaf, wdeg=format_rational(wd))
    return None


def suite_locally_free(rng, cfg):
    curve = random_curve(rng, cfg.max_gamma, cfg.max_genus)
    r = rng.randint(1, cfg.max_rank)
    degrees = [rng.randint(-cfg.max_degree, cfg.max_degree) for _ in range(curve.gamma)]
    sheaf = locally_free(curve, r, degrees)
    sum_chi = sum(chi_component(g, r, d) for g, d in zip(curve.genera, degrees))
    if chi_total(sheaf, curve) != sum_chi - r * (curve.gamma - 1) or w_deg(sheaf, curve) != sum(degrees):
        return serialize(curve, sheaf=sheaf)
    return None


def suite_genus_identity(rng, cfg):
    curve = random_curve(rng, max(cfg.max_gamma, 10), cfg.max_genus)
    ids = range(1, curve.gamma + 1)
    for size in range(1, curve.gamma):
        for members in itertools.combinations(ids, size):
            data = subcurve_data(curve, members)
            members = frozenset(members)
            rest = frozenset(ids) - members
            lhs = genus_by_euler(curve, members) + genus_by_euler(curve, rest) + len(data.boundary) - 1
            if (
                not data.identity_holds
                or data.genus != genus_by_euler(curve, members)
                or lhs != curve.p_a
            ):
                return serialize(curve, subcurve=sorted(members))
    return None


SCAN_GRID_LIMIT = 200_000


def suite_walls_oracle(rng, cfg):
    bounds = Bounds()
    while True:
        curve = random_curve(rng, min(cfg.max_gamma, 3), min(cfg.max_genus, 3))
        system = random_uniform_system(rng, TrialConfig(max_rank=2, max_degree=3, max_k_extra=2), curve)
        if candidate_count(system, curve, bounds) > 10**4:
            continue
        report = walls(system, curve, bounds)
        D, upper = scan_grid(report)
        if D * upper <= SCAN_GRID_LIMIT:
            break
    problems = compare_walls_with_scan(system, curve, bounds, report)
    if problems:
        return serialize(curve, system=system, problems=problems)
    return None


def suite_thm_a_shadow(rng, cfg):
    curve = random_curve(rng, cfg.max_gamma, cfg.max_genus)
    system = random_uniform_system(rng, cfg, curve)
    try:
        report = walls(system, curve, Bounds())
    except AssertionError as exc:  # walls() asserts the same bound internally
        return serialize(curve, system=system, error=str(exc))
    if any(w > report.k_alpha_g for w in report.wall_values):
        return serialize(curve, system=system, k_alpha_g=format_rational(report.k_alpha_g))
    return None


def _random_candidate(rng, system: SystemType, curve: NodalCurve) -> SubsystemCandidate:
    r = system.rank
    while True:
        s = [rng.randint(0, r) for _ in range(curve.gamma)]
        if any(s):
            break
    f = [rng.randint(0, d) for d in system.sheaf.degrees]
    gl = [rng.randint(0, min(s[i], s[j])) for i, j in curve.edges]
    return SubsystemCandidate(make_sheaf(curve, s, f, gl), rng.randint(0, system.k))


def suite_strong_instability(rng, cfg):
    curve = random_curve(rng, cfg.max_gamma, cfg.max_genus)
    system = random_uniform_system(rng, cfg, curve)
    probe = k_alpha_g(curve, system.rank, w_deg(system.sheaf, curve)) + 1
    mu_e = alpha_slope(system, probe, curve)
    for _ in range(20):
        cand = _random_candidate(rng, system, curve)
        if strong_instability_check(system, cand, curve) and not alpha_slope(cand, probe, curve) > mu_e:
            return serialize(curve, system=system, candidate=cand)
    return None


def suite_bn_identity(rng, cfg):
    curve = random_curve(rng, cfg.max_gamma, cfg.max_genus)
    r = rng.randint(1, 20)
    d = rng.randint(-10**4, 10**4)
    closed = curve.p_a + (r + 1) * (d - r - curve.p_a)
    if not brill_noether(curve, 1, d, r + 1) == brill_noether(curve, r, d, r + 1) == closed:
        return serialize(curve, r=r, d=d)
    return None


def suite_dimension_identities(rng, cfg):
    curve = random_curve(rng, max(cfg.max_gamma, 6), cfg.max_genus, min_gamma=1)
    r = rng.randint(1, 10)
    degrees = [rng.randint(-50, 200) for _ in range(curve.gamma)]
    rep = dimension_report(curve, r, degrees)
    if not all(rep.identities.values()) or rep.dim_x - rep.dim_product != curve.delta * r * (r + 1):
        return serialize(curve, r=r, degrees=degrees)
    return None


def suite_corollary_bound(rng, cfg):
    curve = random_curve(rng, cfg.max_gamma, cfg.max_genus)
    system = random_uniform_system(rng, cfg, curve)
    hyp = StabHypotheses(True, True, True, rng.random() < 0.5)
    verdict = theorem_stab_verdict(system, curve, hyp)
    if verdict.conditional_stable:
        for i in range(1, curve.gamma + 1):
            if not restriction_dimension_bound(system, i, system.k, curve):
                return serialize(curve, system=system, component=i)
    return None


SUITES: dict[str, Callable] = {
    "chi-bounds": suite_chi_bounds,
    "locally-free-equalities": suite_locally_free,
    "genus-identity": suite_genus_identity,
    "walls-oracle": suite_walls_oracle,
    "thmA-shadow": suite_thm_a_shadow,
    "strong-instability": suite_strong_instability,
    "bn-identity": suite_bn_identity,
    "dimension-identities": suite_dimension_identities,
    "corollary-bound": suite_corollary_bound,
}


def run_suite(config: TrialConfig) -> list[SuiteResult]:
    names = list(SUITES) if config.suite == "all" else [config.suite]
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        from .errors import ValidationError

        raise ValidationError(f"unknown suite {unknown[0]!r}; choose from {', '.join(SUITES)} or all", "suite")
    results = []
    for name in names:
        res = SuiteResult(name, config.trials)
        for i in range(config.trials):
            failure = SUITES[name](trial_rng(config.seed, name, i), config)
            if failure is None:
                res.passed += 1
            else:
                res.failed += 1
                if res.counterexample is None:
                    res.counterexample = {"trial": i, **failure}
        results.append(res)
    return results


def results_to_json(config: TrialConfig, results: list[SuiteResult]) -> dict:
    return {
        "config": asdict(config),
        "suites": [
            {
                "suite": r.suite,
                "trials": r.trials,
                "passed": r.passed,
                "failed": r.failed,
                "counterexample": r.counterexample,
            }
            for r in results
        ],
        "ok": all(r.ok for r in results),
    }
