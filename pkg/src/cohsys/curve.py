"""Polarized nodal curves of compact type.

A curve is stored as its dual graph: one vertex per smooth component
(weighted by its genus) and one edge per node. The dual graph must be a
tree. The ample multidegree ``a`` induces the polarization
``w_i = a_i / sum(a)``.

Component ids are 1-based everywhere in the public API; list positions are
0-based.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import networkx as nx

from .errors import (
    CycleError,
    DegreeError,
    DisconnectedError,
    EmptySubcurveError,
    GcdError,
    GenusError,
    ShapeError,
    SingleComponentError,
    ValidationError,
)

MAX_COMPONENTS = 64


@dataclass(frozen=True)
class Polarization:
    weights: tuple[Fraction, ...]
    denominator: int

    def __iter__(self):
        return iter(self.weights)

    def __len__(self) -> int:
        return len(self.weights)

    def __getitem__(self, i: int) -> Fraction:
        return self.weights[i]


@dataclass(frozen=True)
class NodalCurve:
    """Validated curve of compact type; build with :func:`build_curve`."""

    genera: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]  # 0-based, each pair sorted
    ample_degrees: tuple[int, ...]
    allow_smooth: bool = False
    allow_low_genus: bool = False

    @property
    def gamma(self) -> int:
        return len(self.genera)

    @property
    def delta(self) -> int:
        return len(self.edges)

    @cached_property
    def polarization(self) -> Polarization:
        total = sum(self.ample_degrees)
        return Polarization(tuple(Fraction(a, total) for a in self.ample_degrees), total)

    @property
    def weights(self) -> tuple[Fraction, ...]:
        return self.polarization.weights

    @property
    def ample_total(self) -> int:
        return self.polarization.denominator

    @cached_property
    def p_a(self) -> int:
        return sum(self.genera)

    @cached_property
    def node_degrees(self) -> tuple[int, ...]:
        deg = [0] * self.gamma
        for i, j in self.edges:
            deg[i] += 1
            deg[j] += 1
        return tuple(deg)

    @cached_property
    def graph(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.gamma))
        g.add_edges_from(self.edges)
        return nx.freeze(g)

    @property
    def hypotheses_weakened(self) -> list[str]:
        notes = []
        if self.allow_low_genus and min(self.genera) < 2:
            notes.append("component genus < 2 admitted; results assuming g_i >= 2 are not guaranteed")
        if self.gamma == 1:
            notes.append("smooth curve (one component) admitted; results are stated for reducible curves")
        return notes

    def to_json(self) -> dict:
        return {
            "components": [{"id": i + 1, "genus": g} for i, g in enumerate(self.genera)],
            "edges": [[i + 1, j + 1] for i, j in self.edges],
            "ample_degrees": list(self.ample_degrees),
        }


def build_curve(
    components: Sequence[tuple[int, int]] | Sequence[Mapping],
    edges: Iterable[Sequence[int]],
    ample_degrees: Sequence[int],
    *,
    allow_smooth: bool = False,
    allow_low_genus: bool = False,
    max_components: int | None = None,
) -> NodalCurve:
    """Validate and build a curve from 1-based component ids.

    ``components`` holds ``(id, genus)`` pairs or ``{"id":..., "genus":...}``
    mappings; ids must be exactly ``1..gamma``.
    """
    pairs = []
    for c in components:
        if isinstance(c, Mapping):
            try:
                pairs.append((c["id"], c["genus"]))
            except KeyError as exc:
                raise ValidationError(f"missing key {exc.args[0]!r}", "components") from None
        else:
            cid, genus = c
            pairs.append((cid, genus))
    gamma = len(pairs)
    if gamma == 0:
        raise ValidationError("at least one component is required", "components")
    if max_components is not None and gamma > max_components:
        raise ValidationError(f"{gamma} components exceeds the cap of {max_components}", "components")
    for cid, genus in pairs:
        if not _is_int(cid) or not _is_int(genus):
            raise ValidationError("ids and genera must be integers", "components")
    if sorted(cid for cid, _ in pairs) != list(range(1, gamma + 1)):
        raise ValidationError(f"ids must be 1..{gamma} without gaps or repeats", "components")
    genera = [0] * gamma
    for cid, genus in pairs:
        genera[cid - 1] = genus
    if gamma == 1 and not allow_smooth:
        raise SingleComponentError("a single component requires allow_smooth", "components")
    for i, g in enumerate(genera):
        if g < 0:
            raise GenusError(f"component {i + 1} has negative genus {g}", "components")
        if g < 2 and not allow_low_genus:
            raise GenusError(f"component {i + 1} has genus {g} < 2", "components")

    if len(ample_degrees) != gamma:
        raise ShapeError(f"expected {gamma} entries, got {len(ample_degrees)}", "ample_degrees")
    for i, a in enumerate(ample_degrees):
        if not _is_int(a):
            raise ValidationError("entries must be integers", "ample_degrees")
        if a < 1:
            raise DegreeError(f"a_{i + 1} = {a} < 1", "ample_degrees")
    if math.gcd(*ample_degrees) != 1:
        raise GcdError(f"gcd{tuple(ample_degrees)} != 1", "ample_degrees")

    norm_edges = []
    g = nx.MultiGraph()
    g.add_nodes_from(range(gamma))
    for e in edges:
        if len(e) != 2 or not all(_is_int(v) for v in e):
            raise ValidationError(f"malformed edge {list(e)!r}", "edges")
        i, j = e
        if not (1 <= i <= gamma and 1 <= j <= gamma):
            raise ValidationError(f"edge {[i, j]} references an unknown component", "edges")
        if i == j:
            raise CycleError(f"self-loop at component {i}", "edges")
        g.add_edge(i - 1, j - 1)
        norm_edges.append((min(i, j) - 1, max(i, j) - 1))
    if not nx.is_forest(g):
        raise CycleError("dual graph contains a cycle", "edges")
    if not nx.is_connected(g):
        raise DisconnectedError("dual graph is disconnected", "edges")

    return NodalCurve(
        genera=tuple(genera),
        edges=tuple(norm_edges),
        ample_degrees=tuple(ample_degrees),
        allow_smooth=allow_smooth,
        allow_low_genus=allow_low_genus,
    )


def curve_from_json(doc: Mapping, **flags) -> NodalCurve:
    for key in ("components", "edges", "ample_degrees"):
        if key not in doc:
            raise ValidationError("missing", key)
    return build_curve(doc["components"], doc["edges"], doc["ample_degrees"], **flags)


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def arithmetic_genus(curve: NodalCurve) -> int:
    return curve.p_a


@dataclass(frozen=True)
class Subcurve:
    members: frozenset[int]  # 1-based ids
    gamma: int = field(compare=False)

    @property
    def proper(self) -> bool:
        return len(self.members) < self.gamma

    def __iter__(self):
        return iter(sorted(self.members))


def subcurve(curve: NodalCurve, members: Iterable[int]) -> Subcurve:
    ids = frozenset(members)
    if not ids:
        raise EmptySubcurveError("subcurve must contain a component", "subcurve")
    bad = [i for i in ids if not (1 <= i <= curve.gamma)]
    if bad:
        raise ValidationError(f"unknown component ids {sorted(bad)}", "subcurve")
    return Subcurve(ids, curve.gamma)


@dataclass(frozen=True)
class SubcurveData:
    genus: int
    boundary: tuple[tuple[int, int], ...]  # nodes in Delta_B, 1-based
    complement: Subcurve | None
    complement_genus: int | None
    connected_components: int
    identity_holds: bool | None  # None when B is the whole curve


def _genus_of(curve: NodalCurve, members: frozenset[int]) -> tuple[int, int]:
    idx = [m - 1 for m in members]
    parts = list(nx.connected_components(curve.graph.subgraph(idx)))
    genus = sum(sum(curve.genera[i] for i in part) for part in parts) - (len(parts) - 1)
    return genus, len(parts)


def subcurve_data(curve: NodalCurve, sub: Subcurve | Iterable[int]) -> SubcurveData:
    """Genus, boundary nodes and complement of a (possibly disconnected) subcurve."""
    if not isinstance(sub, Subcurve):
        sub = subcurve(curve, sub)
    if not sub.members:
        raise EmptySubcurveError("subcurve must contain a component", "subcurve")
    genus, parts = _genus_of(curve, sub.members)
    boundary = tuple(
        (i + 1, j + 1) for i, j in curve.edges if ((i + 1) in sub.members) != ((j + 1) in sub.members)
    )
    rest = frozenset(range(1, curve.gamma + 1)) - sub.members
    if not rest:
        return SubcurveData(genus, boundary, None, None, parts, None)
    comp_genus, _ = _genus_of(curve, rest)
    holds = curve.p_a == genus + comp_genus + len(boundary) - 1
    return SubcurveData(genus, boundary, Subcurve(rest, curve.gamma), comp_genus, parts, holds)


def leaf_component(curve: NodalCurve) -> int:
    """Smallest 1-based id of a component carrying exactly one node."""
    if curve.gamma < 2:
        raise SingleComponentError("a curve with one component has no leaf", "components")
    return next(i + 1 for i, d in enumerate(curve.node_degrees) if d == 1)
