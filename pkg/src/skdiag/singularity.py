"""Singularity complex of a surface-knot diagram and double-curve tracing.

The model keeps only the combinatorics of a generic projection's singularity
set: isolated triple points (each carrying three typed double-point lines),
isolated branch points, and double edges, which are open arcs bounded by
triple-point slots and/or branch points, or free circles. Descendent disks
are declared annotations on pairs of edges; no embedding is represented.

A double curve is a maximal chain of edges glued at triple points through
opposite slots of the same line. Tracing yields a partition of the edge set;
all higher operations (crossing changes, moves) are defined on top of it.
"""

from dataclasses import dataclass
from enum import Enum
from functools import cached_property

from .errors import StructuralError, UnknownIdError


class LineType(str, Enum):
    """Which pair of local sheets crosses along a line at a triple point."""

    BM = "bm"  # bottom/middle
    BT = "bt"  # bottom/top
    MT = "mt"  # middle/top


# sheet roles meeting along each line type, as (upper, lower) in the
# reference height order top > middle > bottom
SHEET_PAIR = {
    LineType.BM: ("m", "b"),
    LineType.BT: ("t", "b"),
    LineType.MT: ("t", "m"),
}

TYPE_OF_PAIR = {
    frozenset(("b", "m")): LineType.BM,
    frozenset(("b", "t")): LineType.BT,
    frozenset(("m", "t")): LineType.MT,
}


class CurveKind(str, Enum):
    OPEN = "open"
    CLOSED = "closed"


class Pairing(str, Enum):
    """Corner pairing of a descendent disk: which edge ends a saddle
    exchange would join (end1/end2 refer to the edge records)."""

    CROSS = "cross"  # end1-of-e1 with end2-of-e2, end2-of-e1 with end1-of-e2
    PARALLEL = "parallel"  # end1 with end1, end2 with end2

    def flipped(self) -> "Pairing":
        return Pairing.PARALLEL if self is Pairing.CROSS else Pairing.CROSS


class Level(str, Enum):
    """Decker-level tag: which preimage sheet a disk boundary arc ends on."""

    UPPER = "upper"
    LOWER = "lower"

    def flipped(self) -> "Level":
        return Level.LOWER if self is Level.UPPER else Level.UPPER


@dataclass(frozen=True)
class TripleSlot:
    """One of the six edge attachment slots at a triple point: line 0-2,
    slot 'a' or 'b'. The two slots of a line are the opposite branches."""

    triple_id: str
    line: int
    slot: str  # "a" | "b"

    def mate(self) -> "TripleSlot":
        return TripleSlot(self.triple_id, self.line, "b" if self.slot == "a" else "a")

    def __str__(self) -> str:
        return f"T:{self.triple_id}.{self.line}.{self.slot}"


@dataclass(frozen=True)
class BranchRef:
    branch_id: str

    def __str__(self) -> str:
        return f"B:{self.branch_id}"


EndpointRef = TripleSlot | BranchRef


@dataclass(frozen=True)
class TriplePoint:
    """A triple point; line_types[i] is the type of line i. The three types
    must be a bijection onto {bm, bt, mt} (checked by validate)."""

    id: str
    line_types: tuple[LineType, LineType, LineType]


@dataclass(frozen=True)
class BranchPoint:
    id: str


@dataclass(frozen=True)
class Arc:
    id: str
    end1: EndpointRef
    end2: EndpointRef

    @property
    def ends(self) -> tuple[EndpointRef, EndpointRef]:
        return (self.end1, self.end2)


@dataclass(frozen=True)
class Circle:
    """A double-point circle: a closed curve on its own, no endpoints."""

    id: str


DoubleEdge = Arc | Circle


@dataclass(frozen=True)
class DescendentDisk:
    """Declared descendent disk annotation.

    The disk meets edge1 and edge2 at one interior point each; ``pair``
    records the corner pairing a saddle exchange along the disk realizes,
    and level1/level2 are the decker tags of the distinguished boundary
    arc over the edge1 / edge2 touch points. A genuine descendent disk has
    level1 == level2 (one whole boundary arc upper, the other lower);
    unequal tags record a disk broken by a crossing change.
    """

    id: str
    edge1: str
    edge2: str
    pair: Pairing
    level1: Level
    level2: Level

    @property
    def consistent(self) -> bool:
        return self.level1 == self.level2


@dataclass(frozen=True)
class DoubleCurve:
    """A traced double curve: ordered edge ids in canonical form.

    Open curves are listed from the lexicographically smaller branch point;
    closed curves are rotated to start at the smallest edge id with the
    direction chosen to make the second edge id smaller. The curve id is
    the smallest edge id it contains, which is stable under relabelings
    that do not touch the curve's own edges.
    """

    id: str
    edges: tuple[str, ...]
    kind: CurveKind


@dataclass(frozen=True)
class Violation:
    """One violated invariant; subjects name the records involved as
    (record kind, id) pairs so reports can point at their definitions."""

    code: str
    message: str
    subjects: tuple[tuple[str, str], ...] = ()


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


@dataclass(frozen=True)
class CensusRecord:
    triple_points: int
    branch_points: int
    arc_edges: int
    circles: int
    open_curves: int
    closed_curves: int


@dataclass(frozen=True)
class SingularityComplex:
    """Immutable singularity complex. Use :meth:`build` so records are kept
    sorted by id; all operations are pure functions of the value."""

    triple_points: tuple[TriplePoint, ...]
    branch_points: tuple[BranchPoint, ...]
    edges: tuple[DoubleEdge, ...]
    disks: tuple[DescendentDisk, ...]

    @classmethod
    def build(cls, triples=(), branches=(), edges=(), disks=()) -> "SingularityComplex":
        triples = tuple(sorted(triples, key=lambda t: t.id))
        branches = tuple(sorted(branches, key=lambda b: b.id))
        edges = tuple(sorted(edges, key=lambda e: e.id))
        disks = tuple(sorted(disks, key=lambda d: d.id))
        for kind, items in (("triple point", triples), ("branch point", branches),
                            ("edge", edges), ("disk", disks)):
            seen = set()
            for item in items:
                if item.id in seen:
                    raise StructuralError(f"duplicate {kind} id {item.id!r}")
                seen.add(item.id)
        return cls(triples, branches, edges, disks)

    @classmethod
    def empty(cls) -> "SingularityComplex":
        return cls.build()

    # -- indexed views -------------------------------------------------

    @cached_property
    def triples_by_id(self) -> dict[str, TriplePoint]:
        return {t.id: t for t in self.triple_points}

    @cached_property
    def branches_by_id(self) -> dict[str, BranchPoint]:
        return {b.id: b for b in self.branch_points}

    @cached_property
    def edges_by_id(self) -> dict[str, DoubleEdge]:
        return {e.id: e for e in self.edges}

    @cached_property
    def disks_by_id(self) -> dict[str, DescendentDisk]:
        return {d.id: d for d in self.disks}

    @cached_property
    def arcs(self) -> tuple[Arc, ...]:
        return tuple(e for e in self.edges if isinstance(e, Arc))

    @cached_property
    def circles(self) -> tuple[Circle, ...]:
        return tuple(e for e in self.edges if isinstance(e, Circle))

    @cached_property
    def endpoint_claims(self) -> dict[EndpointRef, list[tuple[str, int]]]:
        """Every (edge id, end index) claiming each endpoint, in edge order.

        Lenient: built even for malformed complexes so that validation can
        report conflicts instead of crashing.
        """
        claims: dict[EndpointRef, list[tuple[str, int]]] = {}
        for arc in self.arcs:
            for idx, ref in enumerate(arc.ends):
                claims.setdefault(ref, []).append((arc.id, idx))
        return claims

    def edge_end_at(self, ref: EndpointRef) -> tuple[str, int]:
        """The unique (edge id, end index) attached at ``ref``.

        Raises StructuralError when the reference is unused or contested.
        """
        claims = self.endpoint_claims.get(ref, [])
        if len(claims) != 1:
            state = "unused" if not claims else "claimed by multiple edges"
            raise StructuralError(f"endpoint {ref} is {state}")
        return claims[0]

    # -- traced curves -------------------------------------------------

    @cached_property
    def curves(self) -> tuple[DoubleCurve, ...]:
        return trace_curves(self)

    @cached_property
    def curves_by_id(self) -> dict[str, DoubleCurve]:
        return {c.id: c for c in self.curves}

    @cached_property
    def curve_by_edge(self) -> dict[str, str]:
        return {e: c.id for c in self.curves for e in c.edges}

    def curve_of(self, edge_id: str) -> str:
        try:
            return self.curve_by_edge[edge_id]
        except KeyError:
            raise UnknownIdError(f"unknown edge id {edge_id!r}") from None

    def line_curve(self, triple_id: str, line: int) -> str:
        """The curve passing through line ``line`` of a triple point."""
        edge_id, _ = self.edge_end_at(TripleSlot(triple_id, line, "a"))
        return self.curve_of(edge_id)


def _line_type_violations(cx: SingularityComplex):
    for t in cx.triple_points:
        if set(t.line_types) != {LineType.BM, LineType.BT, LineType.MT}:
            yield Violation(
                "type-bijection",
                f"triple point {t.id}: line types {[lt.value for lt in t.line_types]} "
                "are not a permutation of bm,bt,mt",
                (("triple", t.id),),
            )


def _reference_violations(cx: SingularityComplex):
    for arc in cx.arcs:
        subject = (("edge", arc.id),)
        for ref in arc.ends:
            if isinstance(ref, BranchRef):
                if ref.branch_id not in cx.branches_by_id:
                    yield Violation("dangling-ref",
                                    f"edge {arc.id}: unknown branch point "
                                    f"{ref.branch_id!r}", subject)
            else:
                if ref.triple_id not in cx.triples_by_id:
                    yield Violation("dangling-ref",
                                    f"edge {arc.id}: unknown triple point "
                                    f"{ref.triple_id!r}", subject)
                elif not (0 <= ref.line <= 2 and ref.slot in ("a", "b")):
                    yield Violation("dangling-ref",
                                    f"edge {arc.id}: bad slot {ref}", subject)
        if arc.end1 == arc.end2:
            yield Violation("self-slot",
                            f"edge {arc.id} uses endpoint {arc.end1} twice", subject)


def _coverage_violations(cx: SingularityComplex):
    claims = cx.endpoint_claims
    for t in cx.triple_points:
        for line in range(3):
            for slot in ("a", "b"):
                ref = TripleSlot(t.id, line, slot)
                n = len(claims.get(ref, []))
                if n == 0:
                    yield Violation("slot-unused",
                                    f"slot {ref} is not used by any edge",
                                    (("triple", t.id),))
                elif n > 1:
                    users = [e for e, _ in claims[ref]]
                    yield Violation("slot-conflict",
                                    f"slot {ref} claimed by edges " + ", ".join(users),
                                    tuple(("edge", e) for e in users))
    for b in cx.branch_points:
        ref = BranchRef(b.id)
        n = len(claims.get(ref, []))
        if n == 0:
            yield Violation("branch-unused",
                            f"branch point {b.id} is not used by any edge",
                            (("branch", b.id),))
        elif n > 1:
            users = [e for e, _ in claims[ref]]
            yield Violation("branch-conflict",
                            f"branch point {b.id} claimed by edges " + ", ".join(users),
                            tuple(("edge", e) for e in users))


def _disk_violations(cx: SingularityComplex):
    for d in cx.disks:
        subject = (("disk", d.id),)
        for label, eid in (("e1", d.edge1), ("e2", d.edge2)):
            if eid not in cx.edges_by_id:
                yield Violation("disk-dangling",
                                f"disk {d.id}: {label} references unknown edge {eid!r}",
                                subject)
        if d.edge1 == d.edge2:
            yield Violation("disk-edges-equal",
                            f"disk {d.id} references edge {d.edge1!r} twice", subject)


def validate(cx: SingularityComplex) -> ValidationReport:
    """Report every violated structural invariant; empty report iff well-formed.

    Checks slot and branch-point coverage, line-type bijections, dangling
    references, the counting identity 2|arcs| = 6|T| + |B|, and disk edge
    references. Violations are report entries, never exceptions.
    """
    violations = []
    violations.extend(_line_type_violations(cx))
    violations.extend(_reference_violations(cx))
    violations.extend(_coverage_violations(cx))
    violations.extend(_disk_violations(cx))
    n_arcs = len(cx.arcs)
    expected = 6 * len(cx.triple_points) + len(cx.branch_points)
    if 2 * n_arcs != expected:
        violations.append(Violation(
            "counting-identity",
            f"2*|arcs| = {2 * n_arcs} but 6*|triples| + |branches| = {expected}"))
    return ValidationReport(tuple(violations))


def _walk_from(cx: SingularityComplex, start: Arc):
    """Follow the curve through ``start`` (traversed end1->end2).

    Returns (oriented chain, closed flag); each chain element is
    (edge id, forward) where forward means traversed end1->end2.
    """
    chain: list[tuple[str, bool]] = [(start.id, True)]
    closed = False
    ref = start.end2
    while isinstance(ref, TripleSlot):
        edge_id, entry = cx.edge_end_at(ref.mate())
        if (edge_id, entry) == (start.id, 0):
            closed = True
            break
        chain.append((edge_id, entry == 0))
        nxt = cx.edges_by_id[edge_id]
        assert isinstance(nxt, Arc)
        ref = nxt.end2 if entry == 0 else nxt.end1
    if closed:
        return chain, True
    # extend backwards from end1
    ref = start.end1
    head: list[tuple[str, bool]] = []
    while isinstance(ref, TripleSlot):
        edge_id, entry = cx.edge_end_at(ref.mate())
        head.append((edge_id, entry == 1))
        nxt = cx.edges_by_id[edge_id]
        assert isinstance(nxt, Arc)
        ref = nxt.end1 if entry == 1 else nxt.end2
    head.reverse()
    return head + chain, False


def _terminal_branch(cx: SingularityComplex, edge_id: str, forward: bool, last: bool) -> str:
    arc = cx.edges_by_id[edge_id]
    assert isinstance(arc, Arc)
    ref = (arc.end2 if forward else arc.end1) if last else (arc.end1 if forward else arc.end2)
    assert isinstance(ref, BranchRef)
    return ref.branch_id


def _canonical_closed(ids: list[str]) -> tuple[str, ...]:
    pivot = ids.index(min(ids))
    fwd = ids[pivot:] + ids[:pivot]
    rev = [fwd[0]] + list(reversed(fwd[1:]))
    if len(fwd) > 2 and rev[1] < fwd[1]:
        return tuple(rev)
    return tuple(fwd)


def _check_references(cx: SingularityComplex) -> None:
    """Raise on the first broken reference of a malformed complex."""
    for arc in cx.arcs:
        for ref in arc.ends:
            if isinstance(ref, BranchRef):
                if ref.branch_id not in cx.branches_by_id:
                    raise StructuralError(
                        f"edge {arc.id} references unknown branch point "
                        f"{ref.branch_id!r}")
            elif (ref.triple_id not in cx.triples_by_id
                  or not (0 <= ref.line <= 2) or ref.slot not in ("a", "b")):
                raise StructuralError(f"edge {arc.id} references broken slot {ref}")
    for t in cx.triple_points:
        for line in range(3):
            for slot in ("a", "b"):
                cx.edge_end_at(TripleSlot(t.id, line, slot))
    for b in cx.branch_points:
        cx.edge_end_at(BranchRef(b.id))


def trace_curves(cx: SingularityComplex) -> tuple[DoubleCurve, ...]:
    """Partition the edges into maximal double curves.

    Traversal continues through a triple point on the opposite slot of the
    same line; a curve is open iff both of its ends are branch points.
    Raises StructuralError (naming the first broken reference) when the
    complex is malformed.
    """
    _check_references(cx)
    curves: list[DoubleCurve] = []
    for circle in cx.circles:
        curves.append(DoubleCurve(circle.id, (circle.id,), CurveKind.CLOSED))
    remaining = {a.id for a in cx.arcs}
    for arc in cx.arcs:
        if arc.id not in remaining:
            continue
        chain, closed = _walk_from(cx, arc)
        ids = [e for e, _ in chain]
        remaining.difference_update(ids)
        if closed:
            edges = _canonical_closed(ids)
            curves.append(DoubleCurve(edges[0], edges, CurveKind.CLOSED))
        else:
            first = _terminal_branch(cx, chain[0][0], chain[0][1], last=False)
            last = _terminal_branch(cx, chain[-1][0], chain[-1][1], last=True)
            if last < first:
                ids.reverse()
            curves.append(DoubleCurve(min(ids), tuple(ids), CurveKind.OPEN))
    curves.sort(key=lambda c: c.id)
    return tuple(curves)


def curve_of(cx: SingularityComplex, edge_id: str) -> str:
    """Id of the unique traced curve containing ``edge_id``."""
    return cx.curve_of(edge_id)


def census(cx: SingularityComplex) -> CensusRecord:
    """Point/edge/curve counts of a well-formed complex."""
    kinds = [c.kind for c in cx.curves]
    return CensusRecord(
        triple_points=len(cx.triple_points),
        branch_points=len(cx.branch_points),
        arc_edges=len(cx.arcs),
        circles=len(cx.circles),
        open_curves=kinds.count(CurveKind.OPEN),
        closed_curves=kinds.count(CurveKind.CLOSED),
    )
