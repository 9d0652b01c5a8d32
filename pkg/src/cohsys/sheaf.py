"""Numerical invariants of depth-one sheaves on a curve of compact type.

A depth-one sheaf ``E`` is recorded only through its numerical class: the
rank ``r_i`` and degree ``d_i`` of its restriction modulo torsion to each
component, and at every node ``p`` the integer ``s_p`` with ``T_p = C^s_p``
in ``0 -> E -> (+) E_i -> T -> 0``. That is enough for every Euler
characteristic and polarized degree used downstream, since ``chi(E)``
sees the torsion only through ``l(T) = sum(s_p)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, NamedTuple, Sequence

from .curve import NodalCurve
from .errors import HypothesisError, ShapeError, ValidationError, ZeroRankError


@dataclass(frozen=True, order=True)
class SheafClass:
    multirank: tuple[int, ...]
    degrees: tuple[int, ...]
    gluings: tuple[int, ...]  # one per node, in the curve's edge order
    locally_free: bool = False

    @property
    def is_uniform(self) -> bool:
        return len(set(self.multirank)) == 1

    @property
    def max_rank(self) -> int:
        return max(self.multirank)

    @property
    def torsion_length(self) -> int:
        return sum(self.gluings)

    def to_json(self) -> dict:
        return {
            "multirank": list(self.multirank),
            "degrees": list(self.degrees),
            "gluings": list(self.gluings),
            "locally_free": self.locally_free,
        }


def make_sheaf(
    curve: NodalCurve,
    multirank: Sequence[int],
    degrees: Sequence[int],
    gluings: Sequence[int] | None = None,
    locally_free: bool = False,
) -> SheafClass:
    """Validate a sheaf class against ``curve``.

    Degrees on components where the rank vanishes are reset to 0. When
    ``gluings`` is omitted a locally free class gets ``s_p = r`` at every
    node and any other class gets the maximal ``min(r_i, r_j)``.
    """
    gamma = curve.gamma
    if len(multirank) != gamma:
        raise ShapeError(f"expected {gamma} entries, got {len(multirank)}", "multirank")
    if len(degrees) != gamma:
        raise ShapeError(f"expected {gamma} entries, got {len(degrees)}", "degrees")
    for name, seq in (("multirank", multirank), ("degrees", degrees)):
        if not all(isinstance(x, int) and not isinstance(x, bool) for x in seq):
            raise ValidationError("entries must be integers", name)
    if any(r < 0 for r in multirank):
        raise ValidationError("ranks must be nonnegative", "multirank")
    if not any(multirank):
        raise ZeroRankError("multirank is identically zero", "multirank")
    if locally_free and len(set(multirank)) != 1:
        raise ValidationError("a locally free class has constant multirank", "multirank")

    caps = [min(multirank[i], multirank[j]) for i, j in curve.edges]
    if gluings is None:
        gluings = caps
    if len(gluings) != curve.delta:
        raise ShapeError(f"expected {curve.delta} entries, got {len(gluings)}", "gluings")
    for p, (s, cap) in enumerate(zip(gluings, caps)):
        if not isinstance(s, int) or isinstance(s, bool) or not 0 <= s <= cap:
            i, j = curve.edges[p]
            raise ValidationError(
                f"node {p + 1} joining {i + 1},{j + 1} needs 0 <= s_p <= {cap}, got {s}", "gluings"
            )
        if locally_free and s != multirank[0]:
            raise ValidationError("a locally free class has s_p = r at every node", "gluings")
    degrees = tuple(d if r > 0 else 0 for r, d in zip(multirank, degrees))
    return SheafClass(tuple(multirank), degrees, tuple(gluings), bool(locally_free))


def sheaf_from_json(curve: NodalCurve, doc: Mapping) -> SheafClass:
    for key in ("multirank", "degrees"):
        if key not in doc:
            raise ValidationError("missing", key)
    return make_sheaf(
        curve, doc["multirank"], doc["degrees"], doc.get("gluings"), doc.get("locally_free", False)
    )


def locally_free(curve: NodalCurve, r: int, degrees: Sequence[int]) -> SheafClass:
    return make_sheaf(curve, [r] * curve.gamma, degrees, [r] * curve.delta, True)


def chi_component(genus: int, rank: int, degree: int) -> int:
    """Riemann-Roch on a smooth component."""
    return degree + rank * (1 - genus)


def _check_shape(sheaf: SheafClass, curve: NodalCurve) -> None:
    if len(sheaf.multirank) != curve.gamma or len(sheaf.gluings) != curve.delta:
        raise ShapeError(
            f"class has {len(sheaf.multirank)} components/{len(sheaf.gluings)} nodes, "
            f"curve has {curve.gamma}/{curve.delta}",
            "sheaf",
        )


def chi_restrictions(sheaf: SheafClass, curve: NodalCurve) -> int:
    return sum(
        chi_component(g, r, d) for g, r, d in zip(curve.genera, sheaf.multirank, sheaf.degrees)
    )


def chi_total(sheaf: SheafClass, curve: NodalCurve) -> int:
    _check_shape(sheaf, curve)
    return chi_restrictions(sheaf, curve) - sheaf.torsion_length


def w_rank(sheaf: SheafClass | Sequence[int], curve: NodalCurve) -> Fraction:
    ranks = sheaf.multirank if isinstance(sheaf, SheafClass) else sheaf
    return sum((w * r for w, r in zip(curve.weights, ranks)), Fraction(0))


def w_deg(sheaf: SheafClass, curve: NodalCurve) -> Fraction:
    # chi(O_C) = 1 - p_a
    return chi_total(sheaf, curve) - w_rank(sheaf, curve) * (1 - curve.p_a)


def w_slope(sheaf: SheafClass, curve: NodalCurve) -> Fraction:
    rank = w_rank(sheaf, curve)
    if rank == 0:
        raise ZeroRankError("w-rank is zero", "multirank")
    return Fraction(chi_total(sheaf, curve)) / rank


def chi_bounds(sheaf: SheafClass, curve: NodalCurve) -> tuple[int, int]:
    """Bounds on chi(E) that hold for every admissible choice of gluings."""
    upper = chi_restrictions(sheaf, curve)
    return upper - sheaf.max_rank * (curve.gamma - 1), upper


class LineBundleCriteria(NamedTuple):
    ample: bool
    h1_vanishing_and_gg: bool
    very_ample_and_restriction_surjective: bool


def line_bundle_criteria(curve: NodalCurve, degrees: Sequence[int]) -> LineBundleCriteria:
    if len(degrees) != curve.gamma:
        raise ShapeError(f"expected {curve.gamma} entries, got {len(degrees)}", "degrees")
    pairs = list(zip(degrees, curve.genera))
    return LineBundleCriteria(
        all(d > 0 for d, _ in pairs),
        all(d >= 2 * g for d, g in pairs),
        all(d >= 2 * g + 1 for d, g in pairs),
    )


def h0_vanishing_propagation(
    curve: NodalCurve, h0_zero: Sequence[bool], locally_free: bool
) -> bool:
    """Whether ``h^0(E) = 0`` follows from vanishing on every component.

    This is an inference rule for locally free ``E``; ``False`` means no
    conclusion, not ``h^0(E) != 0``.
    """
    if not locally_free:
        raise HypothesisError("the vanishing rule needs a locally free sheaf", "locally_free")
    if len(h0_zero) != curve.gamma:
        raise ShapeError(f"expected {curve.gamma} flags, got {len(h0_zero)}", "h0_zero")
    return all(h0_zero)
