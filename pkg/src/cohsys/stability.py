"""(w, alpha)-stability of coherent systems: slopes, thresholds and walls.

A coherent system ``(E, V)`` is analysed numerically. A proper subsystem
``(F, U)`` is represented by its numerical class plus ``h = dim U``; the
tool enumerates every class in a declared degree box and reports where in
``alpha`` one of them can destabilize. Verdicts are therefore numerical:
they certify absence of numerical destabilizers within the box, not
sheaf-theoretic stability.

Internally everything is scaled by ``S = sum(a_i)`` so that w-ranks and
w-degrees become integers:

    rho   = S * wrank(F) = sum(a_i s_i)
    delta = S * wdeg(F)  = S * chi(F) + rho * (p_a - 1)

and ``mu(F,U) - mu(E,V)`` has the sign of ``A + alpha * B`` with
``A = r*delta - d*rho`` and ``B = h*r*S - k*rho``.
"""

from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, NamedTuple, Sequence

from .curve import NodalCurve
from .errors import BoundsError, ValidationError, ZeroKError, ZeroRankError
from .sheaf import SheafClass, chi_component, chi_total, w_deg, w_rank

DEFAULT_MAX_CANDIDATES = 10**8
NUMERICAL_DISCLAIMER = (
    "numerical verdict: certifies absence of numerical destabilizers within the declared "
    "candidate box, not sheaf-theoretic stability"
)
H_RANGE_NOTE = (
    "h ranges over [0, k] with no chi-based cap; unrealizable candidates can only make "
    "verdicts more conservative"
)

STABLE = "no-numerical-destabilizer"
SEMISTABLE = "numerically-semistable"
DESTABILIZED = "destabilized"
ON_WALL = "on-wall"


def default_max_candidates() -> int:
    value = os.environ.get("COHSYS_MAX_CANDIDATES")
    if value is None:
        return DEFAULT_MAX_CANDIDATES
    try:
        cap = int(value)
    except ValueError:
        raise ValidationError(f"not an integer: {value!r}", "COHSYS_MAX_CANDIDATES") from None
    if cap < 1:
        raise ValidationError("must be positive", "COHSYS_MAX_CANDIDATES")
    return cap


@dataclass(frozen=True)
class SystemType:
    sheaf: SheafClass
    k: int

    def __post_init__(self):
        if not isinstance(self.k, int) or self.k < 0:
            raise ValidationError("k must be a nonnegative integer", "k")

    @property
    def dim(self) -> int:
        return self.k

    @property
    def rank(self) -> int:
        if not self.sheaf.is_uniform:
            raise ValidationError("analysis needs uniform multirank (r,...,r)", "multirank")
        return self.sheaf.multirank[0]

    def to_json(self) -> dict:
        return {**self.sheaf.to_json(), "k": self.k}


@dataclass(frozen=True, order=True)
class SubsystemCandidate:
    sheaf: SheafClass
    h: int

    @property
    def dim(self) -> int:
        return self.h

    def to_json(self) -> dict:
        return {**self.sheaf.to_json(), "h": self.h}


def alpha_slope(obj: SystemType | SubsystemCandidate, alpha, curve: NodalCurve) -> Fraction:
    """``wdeg/wrank + alpha * dim/wrank``."""
    rank = w_rank(obj.sheaf, curve)
    if rank == 0:
        raise ZeroRankError("w-rank is zero", "multirank")
    return (w_deg(obj.sheaf, curve) + Fraction(alpha) * obj.dim) / rank


class AlphaG(NamedTuple):
    alpha_g: Fraction
    k_alpha_g: Fraction


def k_alpha_g(curve: NodalCurve, r: int, d) -> Fraction:
    """The large-alpha threshold ``k * alpha_g``; it does not depend on k."""
    return curve.ample_total * (Fraction(d) * r + r * r * (curve.p_a - 1))


def alpha_g(curve: NodalCurve, r: int, d, k: int) -> AlphaG:
    if k < 1:
        raise ZeroKError("alpha_g needs k >= 1", "k")
    if r < 1:
        raise ValidationError("r must be >= 1", "r")
    if d < 0:
        raise ValidationError("d must be >= 0", "d")
    threshold = k_alpha_g(curve, r, d)
    return AlphaG(threshold / k, threshold)


class StarClass(NamedTuple):
    star1: bool
    star2: bool
    star2_prime: bool
    violated: bool


def property_star(
    system: SystemType, candidate: SubsystemCandidate, curve: NodalCurve, strict: bool = True
) -> StarClass:
    """Classify one candidate against the two branches of property (star).

    ``strict`` selects the strict second branch (star) over the weak one
    (star').
    """
    r = system.rank
    rank_f = w_rank(candidate.sheaf, curve)
    if rank_f == 0:
        raise ZeroRankError("candidate w-rank is zero", "multirank")
    d = w_deg(system.sheaf, curve)
    sections = Fraction(candidate.h) / rank_f
    target = Fraction(system.k, r)
    slope_f = w_deg(candidate.sheaf, curve) / rank_f
    star1 = sections < target
    star2 = sections == target and slope_f < d / r
    star2p = sections == target and slope_f <= d / r
    ok = star1 or (star2 if strict else star2p)
    return StarClass(star1, star2, star2p, not ok)


def strong_instability_check(
    system: SystemType, candidate: SubsystemCandidate, curve: NodalCurve
) -> bool:
    """True when ``h/wrank(F) > k/wrank(E)``: not semistable for alpha > k*alpha_g."""
    rank_f = w_rank(candidate.sheaf, curve)
    if rank_f == 0:
        raise ZeroRankError("candidate w-rank is zero", "multirank")
    return Fraction(candidate.h) / rank_f > Fraction(system.k) / w_rank(system.sheaf, curve)


class Wall(NamedTuple):
    alpha: Fraction
    destabilizing_side: str  # "below" or "above"


def wall_for_candidate(
    system: SystemType, candidate: SubsystemCandidate, curve: NodalCurve
) -> Wall | None:
    """The alpha >= 0 where the candidate's slope meets the system's, if any."""
    r = system.rank
    d = w_deg(system.sheaf, curve)
    rank_f = w_rank(candidate.sheaf, curve)
    if rank_f == 0:
        raise ZeroRankError("candidate w-rank is zero", "multirank")
    den = system.k * rank_f - candidate.h * r
    if den == 0:
        return None
    alpha = (r * w_deg(candidate.sheaf, curve) - d * rank_f) / den
    if alpha < 0:
        return None
    return Wall(alpha, "below" if den > 0 else "above")


def restriction_dimension_bound(
    system: SystemType, component_id: int, dim_vi: int, curve: NodalCurve
) -> bool:
    if not 1 <= component_id <= curve.gamma:
        raise ValidationError(f"unknown component {component_id}", "component")
    return dim_vi >= curve.weights[component_id - 1] * system.k


@dataclass(frozen=True)
class StabHypotheses:
    generically_generated: bool = False
    restrictions_full_k: bool = False
    restrictions_alpha_stable: bool = False
    w_stable: bool = False


@dataclass(frozen=True)
class StabVerdict:
    conditional_stable: bool
    threshold: Fraction
    coprime: bool
    failing: tuple[str, ...]
    label: str


def theorem_stab_verdict(
    system: SystemType, curve: NodalCurve, hypotheses: StabHypotheses
) -> StabVerdict:
    """Sufficient condition for stability above ``k * alpha_g``.

    Only the coprimality of (r, k) is checked here; the other hypotheses are
    sheaf-level facts the caller vouches for.
    """
    r = system.rank
    d = w_deg(system.sheaf, curve)
    threshold = k_alpha_g(curve, r, d)
    coprime = math.gcd(r, system.k) == 1
    failing = []
    if not hypotheses.generically_generated:
        failing.append("generically_generated")
    if not hypotheses.restrictions_full_k:
        failing.append("restrictions_full_k")
    if not hypotheses.restrictions_alpha_stable:
        failing.append("restrictions_alpha_stable")
    if not (coprime or hypotheses.w_stable):
        failing.append("w_stable_or_coprime")
    if failing:
        label = "inconclusive: unmet hypotheses " + ", ".join(failing)
    else:
        label = (
            f"(w,alpha)-stable for every alpha > {format_rational(threshold)} "
            "(conditional on supplied sheaf-level hypotheses)"
        )
    return StabVerdict(not failing, threshold, coprime, tuple(failing), label)


# ---------------------------------------------------------------------------
# Candidate box
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Bounds:
    """Degree box for candidate subsystems.

    ``degree_floor`` is one integer for every component or a per-component
    list. ``degree_ceiling`` defaults to the system's degrees.
    """

    degree_floor: int | tuple[int, ...] = 0
    degree_ceiling: tuple[int, ...] | None = None
    max_candidates: int = field(default_factory=default_max_candidates)

    def boxes(self, system: SystemType) -> list[tuple[int, int]]:
        gamma = len(system.sheaf.multirank)
        floor = self.degree_floor
        lo = [floor] * gamma if isinstance(floor, int) else list(floor)
        hi = list(system.sheaf.degrees if self.degree_ceiling is None else self.degree_ceiling)
        if len(lo) != gamma or len(hi) != gamma:
            raise ValidationError(f"expected {gamma} entries", "degree_floor")
        for i, (a, b) in enumerate(zip(lo, hi)):
            if a > b:
                raise BoundsError(f"empty degree box on component {i + 1}: [{a}, {b}]")
        return list(zip(lo, hi))

    @property
    def generically_generated_regime(self) -> bool:
        floor = self.degree_floor
        return (floor >= 0) if isinstance(floor, int) else all(f >= 0 for f in floor)

    def to_json(self) -> dict:
        floor = self.degree_floor
        return {
            "degree_floor": floor if isinstance(floor, int) else list(floor),
            "degree_ceiling": None if self.degree_ceiling is None else list(self.degree_ceiling),
            "h_range": "[0, k]",
            "max_candidates": self.max_candidates,
        }


def _multiranks(r: int, gamma: int) -> Iterator[tuple[int, ...]]:
    for s in itertools.product(range(r + 1), repeat=gamma):
        if any(s):
            yield s


def _gluing_caps(curve: NodalCurve, s: Sequence[int]) -> list[int]:
    return [min(s[i], s[j]) for i, j in curve.edges]


def candidate_count(system: SystemType, curve: NodalCurve, bounds: Bounds) -> int:
    """Size of the candidate box, computed without enumerating it."""
    r = system.rank
    boxes = bounds.boxes(system)
    if (r + 1) ** curve.gamma - 1 > bounds.max_candidates:
        return (r + 1) ** curve.gamma - 1  # every multirank contributes at least one
    total = 0
    for s in _multiranks(r, curve.gamma):
        n = system.k + 1
        for si, (lo, hi) in zip(s, boxes):
            if si:
                n *= hi - lo + 1
        for cap in _gluing_caps(curve, s):
            n *= cap + 1
        total += n
    if _full_in_box(system, boxes):
        total -= 1
    return total


def _full_in_box(system: SystemType, boxes) -> bool:
    return all(lo <= d <= hi for d, (lo, hi) in zip(system.sheaf.degrees, boxes))


def enumerate_candidates(
    system: SystemType, curve: NodalCurve, bounds: Bounds | None = None
) -> Iterator[SubsystemCandidate]:
    """Every proper candidate in the box, in lexicographic order of
    ``(multirank, degrees, gluings, h)``.

    Pure torsion classes and the full system are excluded.
    """
    bounds = bounds or Bounds()
    count = candidate_count(system, curve, bounds)
    if count > bounds.max_candidates:
        raise BoundsError(f"{count} candidates exceed the cap of {bounds.max_candidates}")
    return _enumerate(system, curve, bounds.boxes(system))


def _enumerate(system, curve, boxes):
    full = system.sheaf
    for s in _multiranks(system.rank, curve.gamma):
        ranges = [range(lo, hi + 1) if si else range(0, 1) for si, (lo, hi) in zip(s, boxes)]
        caps = _gluing_caps(curve, s)
        for f in itertools.product(*ranges):
            for gl in itertools.product(*(range(c + 1) for c in caps)):
                sheaf = SheafClass(s, f, gl, False)
                is_full_sheaf = s == full.multirank and f == full.degrees and gl == full.gluings
                for h in range(system.k + 1):
                    if is_full_sheaf and h == system.k:
                        continue
                    yield SubsystemCandidate(sheaf, h)


# ---------------------------------------------------------------------------
# Numerical classes and walls
# ---------------------------------------------------------------------------


def _range_counts(ranges: Sequence[tuple[int, int]]) -> tuple[int, list[int]]:
    """Distribution of the sum of independent integer ranges: (offset, counts)."""
    offset, counts = 0, [1]
    for lo, hi in ranges:
        width = hi - lo + 1
        new = [0] * (len(counts) + width - 1)
        for i, c in enumerate(counts):
            if c:
                for j in range(width):
                    new[i + j] += c
        offset += lo
        counts = new
    return offset, counts


@dataclass(frozen=True, order=True)
class ClassKey:
    """A numerical class of candidates: all share wrank, chi and h."""

    multirank: tuple[int, ...]
    chi: int
    h: int


@dataclass
class _Scan:
    walls: dict  # (num, den) -> list[(ClassKey, side)]
    up: tuple | None = None  # lowest alpha* among B > 0 classes: (Fraction, ClassKey)
    down: tuple | None = None  # highest alpha* among B < 0 classes
    always: ClassKey | None = None  # B == 0, A > 0
    tie: ClassKey | None = None  # B == 0, A == 0
    classes: int = 0


def _scan_multiranks(system, curve, boxes, multiranks) -> _Scan:
    r, k = system.rank, system.k
    S = curve.ample_total
    pa1 = curve.p_a - 1
    d = w_deg(system.sheaf, curve)
    assert d.denominator == 1
    d = int(d)
    full = system.sheaf
    full_chi = chi_total(full, curve)
    full_fixed = None
    if _full_in_box(system, boxes):
        full_fixed = (full.multirank, full_chi)
    out = _Scan(walls={})
    seen: set = set()
    for s in multiranks:
        rho = sum(a * si for a, si in zip(curve.ample_degrees, s))
        base = sum(chi_component(g, si, 0) for g, si in zip(curve.genera, s))
        f_off, f_counts = _range_counts([b for si, b in zip(s, boxes) if si])
        g_caps = _gluing_caps(curve, s)
        g_max = sum(g_caps)
        _, g_counts = _range_counts([(0, c) for c in g_caps])
        # chi = base + F - G
        chi_lo = base + f_off - g_max
        chi_hi = base + f_off + len(f_counts) - 1
        for chi in range(chi_lo, chi_hi + 1):
            mult = _class_multiplicity(chi - base - f_off, f_counts, g_counts)
            if mult == 0:
                continue
            delta = S * chi + rho * pa1
            A = r * delta - d * rho
            for h in range(k + 1):
                if full_fixed == (s, chi) and h == k and mult == 1:
                    continue
                out.classes += 1
                inv = (rho, chi, h)
                if inv in seen:
                    continue
                seen.add(inv)
                key = ClassKey(s, chi, h)
                B = h * r * S - k * rho
                if B == 0:
                    if A > 0 and (out.always is None or key < out.always):
                        out.always = key
                    if A == 0 and (out.tie is None or key < out.tie):
                        out.tie = key
                    continue
                # (star1)-type classes: k*wrank(F) - h*r >= 1/S
                assert B > 0 or -B >= 1
                g = math.gcd(A, B)
                num, den = -A // g, B // g
                if den < 0:
                    num, den = -num, -den
                alpha = (num, den)
                side = "above" if B > 0 else "below"
                if B > 0:
                    if out.up is None or _lt(alpha, key, out.up):
                        out.up = (alpha, key)
                else:
                    if out.down is None or _gt(alpha, key, out.down):
                        out.down = (alpha, key)
                if num >= 0:
                    out.walls.setdefault(alpha, []).append((key, side))
    return out


def _class_multiplicity(v: int, f_counts, g_counts) -> int:
    # number of (F, G) with F - G == v, F and G measured from their offsets
    total = 0
    for G, ng in enumerate(g_counts):
        F = v + G
        if 0 <= F < len(f_counts):
            total += f_counts[F] * ng
    return total


def _frac(pair) -> Fraction:
    return Fraction(pair[0], pair[1])


def _lt(alpha, key, best) -> bool:
    a, b = _frac(alpha), _frac(best[0])
    return a < b or (a == b and key < best[1])


def _gt(alpha, key, best) -> bool:
    a, b = _frac(alpha), _frac(best[0])
    return a > b or (a == b and key < best[1])


def _merge(parts: list[_Scan]) -> _Scan:
    out = _Scan(walls={})
    for p in parts:
        out.classes += p.classes
        for alpha, ws in p.walls.items():
            out.walls.setdefault(alpha, []).extend(ws)
        if p.up is not None and (out.up is None or _lt(p.up[0], p.up[1], out.up)):
            out.up = p.up
        if p.down is not None and (out.down is None or _gt(p.down[0], p.down[1], out.down)):
            out.down = p.down
        if p.always is not None and (out.always is None or p.always < out.always):
            out.always = p.always
        if p.tie is not None and (out.tie is None or p.tie < out.tie):
            out.tie = p.tie
    return out


def _dedupe_invariants(scan: _Scan, curve: NodalCurve) -> None:
    # partitions may each keep a representative of the same (rho, chi, h)
    for alpha, ws in scan.walls.items():
        best = {}
        for key, side in ws:
            rho = sum(a * si for a, si in zip(curve.ample_degrees, key.multirank))
            inv = (rho, key.chi, key.h)
            if inv not in best or key < best[inv][0]:
                best[inv] = (key, side)
        scan.walls[alpha] = sorted(best.values())


@dataclass(frozen=True)
class WallEntry:
    alpha: Fraction
    witnesses: tuple[tuple[ClassKey, str], ...]  # (class, destabilizing side)


@dataclass(frozen=True)
class Chamber:
    lower: Fraction
    upper: Fraction | None  # None for +infinity
    sample: Fraction
    verdict: str
    witness: ClassKey | None


@dataclass(frozen=True)
class WallReport:
    system: SystemType
    bounds: Bounds
    walls: tuple[WallEntry, ...]
    chambers: tuple[Chamber, ...]
    alpha_g: Fraction | None
    k_alpha_g: Fraction
    classes_scanned: int
    candidate_count: int
    thm_a_shadow_checked: bool
    stabilizes_below_k_alpha_g: bool
    strongly_unstable_witness: ClassKey | None
    notes: tuple[str, ...] = ()

    @property
    def wall_values(self) -> list[Fraction]:
        return [w.alpha for w in self.walls]


def verdict_at(scan: _Scan, alpha: Fraction) -> tuple[str, ClassKey | None]:
    """Verdict at a single alpha from the aggregated class extremes."""
    if scan.always is not None:
        return DESTABILIZED, scan.always
    if scan.up is not None and _frac(scan.up[0]) < alpha:
        return DESTABILIZED, scan.up[1]
    if scan.down is not None and _frac(scan.down[0]) > alpha:
        return DESTABILIZED, scan.down[1]
    if scan.tie is not None:
        return SEMISTABLE, scan.tie
    return STABLE, None


def _partition(items: list, n: int) -> list[list]:
    n = max(1, min(n, len(items)))
    size = -(-len(items) // n)
    return [items[i : i + size] for i in range(0, len(items), size)]


def _scan_worker(args):
    return _scan_multiranks(*args)


def scan_classes(
    system: SystemType, curve: NodalCurve, bounds: Bounds | None = None, workers: int = 1
) -> _Scan:
    bounds = bounds or Bounds()
    boxes = bounds.boxes(system)
    r = system.rank
    if r < 1:
        raise ValidationError("r must be >= 1", "multirank")
    multiranks = list(_multiranks(r, curve.gamma)) if (r + 1) ** curve.gamma <= 10**7 else None
    if multiranks is None:
        raise BoundsError(f"{(r + 1) ** curve.gamma - 1} multiranks exceed the enumeration limit")
    chunks = _partition(multiranks, workers)
    if workers <= 1 or len(chunks) == 1:
        parts = [_scan_multiranks(system, curve, boxes, c) for c in chunks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_scan_worker, [(system, curve, boxes, c) for c in chunks]))
    scan = _merge(parts)
    if scan.classes > bounds.max_candidates:
        raise BoundsError(f"{scan.classes} candidate classes exceed the cap of {bounds.max_candidates}")
    _dedupe_invariants(scan, curve)
    return scan


def walls(
    system: SystemType, curve: NodalCurve, bounds: Bounds | None = None, workers: int = 1
) -> WallReport:
    """Walls and chambers in alpha for every numerical class in the box."""
    bounds = bounds or Bounds()
    r = system.rank
    d = w_deg(system.sheaf, curve)
    scan = scan_classes(system, curve, bounds, workers)
    entries = tuple(
        WallEntry(_frac(a), tuple(ws)) for a, ws in sorted(scan.walls.items(), key=lambda kv: _frac(kv[0]))
    )
    points = [w.alpha for w in entries]
    chambers = []
    lower = Fraction(0)
    for p in points + [None]:
        if p is not None and p == lower:
            continue
        sample = (lower + p) / 2 if p is not None else lower + 1
        verdict, witness = verdict_at(scan, sample)
        chambers.append(Chamber(lower, p, sample, verdict, witness))
        lower = p
    threshold = k_alpha_g(curve, r, d)
    ag = threshold / system.k if system.k >= 1 else None
    max_wall = points[-1] if points else None
    stabilizes = max_wall is None or max_wall <= threshold
    notes = [NUMERICAL_DISCLAIMER, H_RANGE_NOTE, "walls are potential: realizability by actual subsystems is not checked"]
    notes.extend(curve.hypotheses_weakened)
    ceiling_ok = bounds.degree_ceiling is None or all(
        c <= di for c, di in zip(bounds.degree_ceiling, system.sheaf.degrees)
    )
    shadow = (
        bounds.generically_generated_regime and ceiling_ok and d >= 0 and min(curve.genera) >= 2
    )
    if not shadow:
        notes.append("box or curve outside the generically generated regime: the k*alpha_g bound on walls is not asserted")
    if shadow and not stabilizes:
        raise AssertionError(
            f"wall {max_wall} exceeds k*alpha_g = {threshold} in the generically generated box"
        )
    strong = scan.up[1] if scan.up is not None else None
    return WallReport(
        system=system,
        bounds=bounds,
        walls=entries,
        chambers=tuple(chambers),
        alpha_g=ag,
        k_alpha_g=threshold,
        classes_scanned=scan.classes,
        candidate_count=candidate_count(system, curve, bounds),
        thm_a_shadow_checked=shadow,
        stabilizes_below_k_alpha_g=stabilizes,
        strongly_unstable_witness=strong,
        notes=tuple(notes),
    )


def check_alpha(
    system: SystemType, curve: NodalCurve, alpha, bounds: Bounds | None = None, workers: int = 1
) -> tuple[str, ClassKey | None]:
    """Numerical verdict at one alpha; ``on-wall`` when a wall sits exactly there."""
    alpha = Fraction(alpha)
    if alpha < 0:
        raise ValidationError("alpha must be a nonnegative rational", "alpha")
    scan = scan_classes(system, curve, bounds, workers)
    verdict, witness = verdict_at(scan, alpha)
    if verdict != DESTABILIZED:
        for a, ws in scan.walls.items():
            if _frac(a) == alpha:
                return ON_WALL, ws[0][0]
    return verdict, witness


# ---------------------------------------------------------------------------
# Materializing a class as a concrete candidate
# ---------------------------------------------------------------------------


def representative(
    system: SystemType, curve: NodalCurve, key: ClassKey, bounds: Bounds | None = None
) -> SubsystemCandidate:
    """The lexicographically first candidate of the class, never the full system."""
    bounds = bounds or Bounds()
    boxes = bounds.boxes(system)
    s = key.multirank
    base = sum(chi_component(g, si, 0) for g, si in zip(curve.genera, s))
    target = key.chi - base  # sum(f) - sum(gluings)
    f_ranges = [(lo, hi) if si else (0, 0) for si, (lo, hi) in zip(s, boxes)]
    g_ranges = [(0, c) for c in _gluing_caps(curve, s)]
    full = system.sheaf
    for values in _realizations(f_ranges, g_ranges, target):
        f, gl = tuple(values[: len(f_ranges)]), tuple(values[len(f_ranges) :])
        if key.h == system.k and (s, f, gl) == (full.multirank, full.degrees, full.gluings):
            continue
        return SubsystemCandidate(SheafClass(s, f, gl, False), key.h)
    raise ValidationError(f"class {key} is empty in the box", "class")


def _realizations(f_ranges, g_ranges, target) -> Iterator[list[int]]:
    signs = [1] * len(f_ranges) + [-1] * len(g_ranges)
    ranges = list(f_ranges) + list(g_ranges)
    n = len(ranges)
    # reachable signed sums of the suffix starting at position i
    lo_suf = [0] * (n + 1)
    hi_suf = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        a, b = ranges[i]
        lo_suf[i] = lo_suf[i + 1] + (a if signs[i] > 0 else -b)
        hi_suf[i] = hi_suf[i + 1] + (b if signs[i] > 0 else -a)

    def rec(i, remaining, prefix):
        if i == n:
            if remaining == 0:
                yield list(prefix)
            return
        a, b = ranges[i]
        for v in range(a, b + 1):
            rest = remaining - signs[i] * v
            if lo_suf[i + 1] <= rest <= hi_suf[i + 1]:
                prefix.append(v)
                yield from rec(i + 1, rest, prefix)
                prefix.pop()

    yield from rec(0, target, [])


def format_rational(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
