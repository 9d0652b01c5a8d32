"""Dual span of generated line-bundle systems and Brill-Noether dimensions.

For a generated ``(L, W)`` of multitype ``(1, d, r+1)`` the dual span is the
rank ``r`` bundle ``E = (Ker ev_W)^*`` with ``V = W^*``. Only its numerical
class is produced here; the section-level hypotheses (generation, vanishing
of the spaces ``R_i``) are flags supplied by the caller.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, NamedTuple, Sequence

from .curve import NodalCurve
from .errors import HypothesisError, ShapeError, ValidationError
from .sheaf import chi_total, locally_free, w_deg
from .stability import SystemType, format_rational, k_alpha_g

FORMULA_ONLY = "formula only - theorem hypotheses unmet"


@dataclass(frozen=True)
class LineSystemType:
    degrees: tuple[int, ...]
    k: int
    generated: bool = False
    r_zero: tuple[bool, ...] = ()

    @property
    def r(self) -> int:
        return self.k - 1

    @property
    def d(self) -> int:
        return sum(self.degrees)

    def to_json(self) -> dict:
        return {
            "degrees": list(self.degrees),
            "k": self.k,
            "generated": self.generated,
            "R_zero": list(self.r_zero),
        }


def line_system(
    curve: NodalCurve,
    degrees: Sequence[int],
    k: int,
    generated: bool = False,
    r_zero: Sequence[bool] | None = None,
    assume_generic: bool = False,
) -> LineSystemType:
    """Validate a line-bundle system.

    With ``assume_generic`` and degrees meeting the general-W degree
    thresholds, ``generated`` and every ``R_i = 0`` flag are switched on.
    """
    if len(degrees) != curve.gamma:
        raise ShapeError(f"expected {curve.gamma} entries, got {len(degrees)}", "degrees")
    if not isinstance(k, int) or k < 2:
        raise ValidationError("k must be an integer >= 2", "k")
    if r_zero is None:
        r_zero = [False] * curve.gamma
    if len(r_zero) != curve.gamma:
        raise ShapeError(f"expected {curve.gamma} flags, got {len(r_zero)}", "R_zero")
    if assume_generic and prop3_hypotheses(curve, degrees, k - 1).all:
        generated, r_zero = True, [True] * curve.gamma
    return LineSystemType(tuple(degrees), k, bool(generated), tuple(bool(x) for x in r_zero))


def line_system_from_json(curve: NodalCurve, doc: Mapping, assume_generic: bool = False):
    for key in ("degrees", "k"):
        if key not in doc:
            raise ValidationError("missing", key)
    return line_system(
        curve, doc["degrees"], doc["k"], doc.get("generated", False), doc.get("R_zero"), assume_generic
    )


class RestrictionVerdict(NamedTuple):
    component: int
    stable: bool
    threshold: Fraction | None  # stable for alpha above this
    destabilizing_ranks: tuple[int, ...]  # s_i of the witnessing (s_i, d_i, s_i+1) subsystems
    label: str


def restriction_dual_span_verdict(
    ls: LineSystemType, component_id: int, curve: NodalCurve
) -> RestrictionVerdict:
    if not 1 <= component_id <= curve.gamma:
        raise ValidationError(f"unknown component {component_id}", "component")
    r = ls.r
    di = ls.degrees[component_id - 1]
    if ls.r_zero[component_id - 1] or r == 1:
        t = Fraction((r - 1) * di)
        return RestrictionVerdict(
            component_id, True, t, (), f"alpha-stable for alpha > {format_rational(t)}"
        )
    witnesses = []
    for s in range(1, r):
        # d_i/s + alpha (s+1)/s  vs  d_i/r + alpha (r+1)/r: both coefficients must dominate
        const = Fraction(di, s) > Fraction(di, r)
        slope = Fraction(s + 1, s) > Fraction(r + 1, r)
        if not (const and slope):
            raise AssertionError(f"destabilizing inequality fails for s={s}, d_i={di}, r={r}")
        witnesses.append(s)
    return RestrictionVerdict(
        component_id, False, None, tuple(witnesses), "alpha-unstable for every alpha > 0"
    )


@dataclass(frozen=True)
class DualSpanResult:
    system: SystemType
    chi: int
    wdeg: Fraction
    stability_threshold: Fraction  # (r+1) alpha_g
    restriction_verdicts: tuple[RestrictionVerdict, ...]
    verdict: str | None


def dual_span(ls: LineSystemType, curve: NodalCurve) -> DualSpanResult:
    if not ls.generated:
        raise HypothesisError("the dual span needs a generated system", "generated")
    bad = [i + 1 for i, d in enumerate(ls.degrees) if d < 1]
    if bad:
        raise HypothesisError(f"d_i >= 1 fails on components {bad}", "degrees")
    r = ls.r
    sheaf = locally_free(curve, r, ls.degrees)
    system = SystemType(sheaf, ls.k)
    wdeg = w_deg(sheaf, curve)
    assert wdeg == ls.d
    threshold = k_alpha_g(curve, r, ls.d)
    verdicts = tuple(restriction_dual_span_verdict(ls, i, curve) for i in range(1, curve.gamma + 1))
    verdict = None
    if all(ls.r_zero):
        verdict = (
            f"(w,alpha)-stable for alpha > {format_rational(threshold)} "
            "(conditional on generation and R_i = 0)"
        )
    return DualSpanResult(system, chi_total(sheaf, curve), wdeg, threshold, verdicts, verdict)


def inverse_dual_span(result: DualSpanResult) -> tuple[tuple[int, ...], int]:
    """Recover ``(degrees, k)`` of the line system from its dual span."""
    sheaf = result.system.sheaf
    if not sheaf.locally_free or result.system.k != sheaf.multirank[0] + 1:
        raise ValidationError("not the numerical class of a dual span", "system")
    return sheaf.degrees, result.system.k


class Prop3(NamedTuple):
    per_component: tuple[bool, ...]
    all: bool


def prop3_hypotheses(curve: NodalCurve, degrees: Sequence[int], r: int) -> Prop3:
    """``d_i >= max(2 g_i + 1, g_i + r)`` on every component."""
    if len(degrees) != curve.gamma:
        raise ShapeError(f"expected {curve.gamma} entries, got {len(degrees)}", "degrees")
    per = tuple(d >= max(2 * g + 1, g + r) for d, g in zip(degrees, curve.genera))
    return Prop3(per, all(per))


def thm2_nonemptiness(curve: NodalCurve, r: int, d: int) -> bool:
    if r < 1:
        raise ValidationError("r must be >= 1", "r")
    return d >= max(2 * curve.p_a + curve.gamma, curve.p_a + r * curve.gamma)


def brill_noether(curve: NodalCurve | int, r: int, d: int, k: int) -> int:
    """``r^2 (p_a - 1) + 1 - k (k - d + r (p_a - 1))``; ``curve`` may be p_a itself."""
    p_a = curve if isinstance(curve, int) else curve.p_a
    return r * r * (p_a - 1) + 1 - k * (k - d + r * (p_a - 1))


@dataclass(frozen=True)
class DimensionReport:
    r: int
    d: int
    dim_x: int
    dim_y: int
    dim_product: int
    fiber_dim: int
    dim_s: int
    grassmannian_fiber_dim: int
    identities: dict
    hypotheses_met: bool
    label: str


def dimension_report(curve: NodalCurve, r: int, degrees: Sequence[int]) -> DimensionReport:
    prop3 = prop3_hypotheses(curve, degrees, r)
    p_a, delta = curve.p_a, curve.delta
    d = sum(degrees)
    dim_x = p_a + (r + 1) * (d - r - p_a)
    dim_product = sum(g + (r + 1) * (di - g - r) for g, di in zip(curve.genera, degrees))
    fiber = delta * r * (r + 1)
    dim_s = delta * r + r + 1
    grass = (r + 1) * (dim_s - (r + 1))
    identities = {
        "dim_X - dim_product == fiber_dim": dim_x - dim_product == fiber,
        "dim_product closed form": dim_product == p_a + (r + 1) * (d - p_a - r) - (r + 1) * r * delta,
        "beta(1,d,r+1) == beta(r,d,r+1)": brill_noether(p_a, 1, d, r + 1) == brill_noether(p_a, r, d, r + 1),
        "dim_X == beta(1,d,r+1)": dim_x == brill_noether(p_a, 1, d, r + 1),
        "grassmannian fiber == fiber_dim": grass == fiber,
    }
    label = "theorem hypotheses met" if prop3.all else FORMULA_ONLY
    return DimensionReport(r, d, dim_x, dim_x, dim_product, fiber, dim_s, grass, identities, prop3.all, label)
