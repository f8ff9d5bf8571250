"""Crossing changes along unions of double curves.

Swapping the upper/lower information along a union of curves is admissible
exactly when, at every triple point, reversing the pairwise height relations
on the flipped lines still leaves an acyclic (total) order on the three
local sheets. Of the eight subsets of {bm, bt, mt} exactly six are valid;
flipping only the bottom/top line, or the bottom/middle and middle/top lines
together, forces a cyclic height relation.

A valid change relabels the line types at each triple point by the sheet
role permutation the new height order induces, and swaps the decker tags of
descendent-disk arcs that ride on flipped curves. The incidence structure
(points, edges, traced curves) is untouched.
"""

from dataclasses import dataclass, replace
from typing import Iterable

from .errors import NotExchangeableError, UnknownIdError
from .singularity import (
    SHEET_PAIR,
    TYPE_OF_PAIR,
    LineType,
    SingularityComplex,
    TriplePoint,
)

ExchangeSet = frozenset[str]


@dataclass(frozen=True)
class FlipSet:
    """The lines flipped at one triple point by a crossing change."""

    triple_id: str
    flipped_lines: frozenset[int]
    flipped_types: frozenset[LineType]


def exchange_set(cx: SingularityComplex, curve_ids: Iterable[str]) -> ExchangeSet:
    """Normalize an iterable of curve ids, rejecting unknown ones."""
    gamma = frozenset(curve_ids)
    unknown = gamma - set(cx.curves_by_id)
    if unknown:
        raise UnknownIdError(f"unknown curve id(s): {', '.join(sorted(unknown))}")
    return gamma


def role_permutation(flipped: frozenset[LineType]) -> dict[str, str] | None:
    """Sheet-role permutation induced by flipping the given line types.

    Returns None when the flipped relations are cyclic (invalid flip); else
    maps each old role in {b, m, t} to its role in the new height order.
    """
    wins = {"b": 0, "m": 0, "t": 0}
    for line_type, (upper, lower) in SHEET_PAIR.items():
        if line_type in flipped:
            upper, lower = lower, upper
        wins[upper] += 1
    if sorted(wins.values()) != [0, 1, 2]:
        return None
    by_wins = {2: "t", 1: "m", 0: "b"}
    return {role: by_wins[n] for role, n in wins.items()}


def is_valid_flip(flipped: Iterable[LineType]) -> bool:
    """True iff reversing the height relations on exactly these line types
    leaves a total (acyclic) order on the three sheets."""
    return role_permutation(frozenset(flipped)) is not None


def flip_sets(cx: SingularityComplex, gamma: Iterable[str]) -> list[FlipSet]:
    """One FlipSet per triple point: a line flips iff its through-curve
    belongs to gamma."""
    gamma = exchange_set(cx, gamma)
    out = []
    for t in cx.triple_points:
        lines = frozenset(
            i for i in range(3) if cx.line_curve(t.id, i) in gamma)
        types = frozenset(t.line_types[i] for i in lines)
        out.append(FlipSet(t.id, lines, types))
    return out


def first_invalid_flip(cx: SingularityComplex, gamma: Iterable[str]) -> FlipSet | None:
    for fs in flip_sets(cx, gamma):
        if not is_valid_flip(fs.flipped_types):
            return fs
    return None


def is_exchangeable(cx: SingularityComplex, gamma: Iterable[str]) -> bool:
    """True iff the flip set at every triple point is valid."""
    return first_invalid_flip(cx, gamma) is None


def _relabelled_triple(t: TriplePoint, flipped: frozenset[LineType]) -> TriplePoint:
    perm = role_permutation(flipped)
    assert perm is not None
    new_types = []
    for lt in t.line_types:
        pair = frozenset(perm[role] for role in SHEET_PAIR[lt])
        new_types.append(TYPE_OF_PAIR[pair])
    return TriplePoint(t.id, tuple(new_types))


def crossing_change(cx: SingularityComplex, gamma: Iterable[str]) -> SingularityComplex:
    """The diagram obtained by exchanging upper/lower information along gamma.

    Incidence structure is preserved exactly; line types at each triple
    point are relabelled by the induced sheet-role permutation, and each
    disk tag on a flipped curve is swapped between upper and lower.
    Raises NotExchangeableError naming the first triple point whose flip
    set is invalid.
    """
    gamma = exchange_set(cx, gamma)
    if not gamma:
        return cx
    bad = first_invalid_flip(cx, gamma)
    if bad is not None:
        types = "{" + ", ".join(sorted(t.value for t in bad.flipped_types)) + "}"
        raise NotExchangeableError(
            bad.triple_id,
            f"flip set {types} at triple point {bad.triple_id} is not valid")
    new_triples = []
    for t in cx.triple_points:
        flipped = frozenset(
            t.line_types[i] for i in range(3) if cx.line_curve(t.id, i) in gamma)
        new_triples.append(_relabelled_triple(t, flipped))
    new_disks = []
    for d in cx.disks:
        level1 = d.level1.flipped() if cx.curve_of(d.edge1) in gamma else d.level1
        level2 = d.level2.flipped() if cx.curve_of(d.edge2) in gamma else d.level2
        new_disks.append(replace(d, level1=level1, level2=level2))
    return SingularityComplex.build(
        new_triples, cx.branch_points, cx.edges, new_disks)


def satisfies_dd_condition(cx: SingularityComplex, gamma: Iterable[str]) -> bool:
    """Descendent disk condition: every disk has both of its curves in
    gamma or both outside it. Decided purely from the disk registry."""
    gamma = exchange_set(cx, gamma)
    for d in cx.disks:
        if (cx.curve_of(d.edge1) in gamma) != (cx.curve_of(d.edge2) in gamma):
            return False
    return True


def all_curves(cx: SingularityComplex) -> ExchangeSet:
    """The union of all double curves (always exchangeable and dd-satisfying)."""
    return frozenset(cx.curves_by_id)
