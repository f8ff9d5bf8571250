"""Enumeration of exchangeable unions and du-exchange-index upper bounds.

Unknottedness of a surface-knot diagram is not decided here: a
TrivialityOracle is a declared annotation set mapping complex fingerprints
to trivial/nontrivial verdicts, and lookups of unannotated diagrams return
unknown. The du report therefore certifies upper bounds only, and only
relative to the single diagram it was computed on; the index itself is a
minimum over all diagrams of the surface-knot, which no finite run can
reach. Every report says so.
"""

import logging
import random
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from itertools import combinations

from .canonical import fingerprint
from .crossing import crossing_change, is_exchangeable, satisfies_dd_condition
from .errors import EnumerationCapExceeded
from .singularity import (
    Arc,
    BranchPoint,
    BranchRef,
    Circle,
    LineType,
    SingularityComplex,
    TriplePoint,
    TripleSlot,
)

logger = logging.getLogger(__name__)

#: Enumerating more candidate subsets than this requires an explicit
#: max_size bound.
ENUMERATION_CAP = 2 ** 20

DIAGRAM_BOUND_NOTE = (
    "upper bound relative to this diagram only; the du-exchange index is a "
    "minimum over all du-exchangeable diagrams of the surface-knot")


class Verdict(str, Enum):
    TRIVIAL = "trivial"
    NONTRIVIAL = "nontrivial"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class TrivialityOracle:
    """Declared triviality annotations keyed by canonical fingerprint."""

    entries: tuple[tuple[str, Verdict], ...] = ()

    @classmethod
    def from_mapping(cls, mapping) -> "TrivialityOracle":
        return cls(tuple(sorted((fp, Verdict(v)) for fp, v in dict(mapping).items())))

    @cached_property
    def _index(self) -> dict[str, Verdict]:
        return dict(self.entries)

    def lookup(self, fp: str) -> Verdict:
        return self._index.get(fp, Verdict.UNKNOWN)

    def merged_with(self, other: "TrivialityOracle") -> "TrivialityOracle":
        combined = dict(self.entries)
        combined.update(other.entries)
        return TrivialityOracle.from_mapping(combined)


EMPTY_ORACLE = TrivialityOracle()


@dataclass(frozen=True)
class DuWitness:
    gamma: tuple[str, ...]
    size: int
    exchangeable: bool
    dd: bool
    verdict: Verdict


@dataclass(frozen=True)
class DuReport:
    witnesses: tuple[DuWitness, ...]
    best_size: int | None
    note: str = DIAGRAM_BOUND_NOTE

    def best_witness(self) -> DuWitness | None:
        candidates = [w for w in self.witnesses
                      if w.exchangeable and w.dd and w.verdict is Verdict.TRIVIAL]
        return min(candidates, key=lambda w: (w.size, w.gamma), default=None)


class DuStatus(str, Enum):
    DU_EXCHANGEABLE = "du-exchangeable"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class DuVerdict:
    status: DuStatus
    witness: tuple[str, ...] | None = None


def _eval_chunk(args):
    """Worker for parallel enumeration: (canonical text, candidate chunk)."""
    from .formats import parse_skd

    text, chunk = args
    cx = parse_skd(text)
    return [is_exchangeable(cx, frozenset(combo)) for combo in chunk]


def enumerate_exchangeable(cx: SingularityComplex, max_size: int | None = None,
                           cap: int = ENUMERATION_CAP,
                           jobs: int = 1) -> list[frozenset[str]]:
    """All exchangeable unions of double curves, in size-then-lexicographic
    order (size bounded by max_size when given).

    Refuses with the cap value when the candidate-subset count would
    exceed ``cap`` and no max_size was supplied. ``jobs`` > 1 evaluates the
    candidates in a process pool.
    """
    ids = sorted(cx.curves_by_id)
    n = len(ids)
    if max_size is None and 2 ** n > cap:
        raise EnumerationCapExceeded(
            cap, f"2^{n} candidate subsets exceed the enumeration cap {cap}; "
            "pass max_size to bound the scan")
    limit = n if max_size is None else min(max_size, n)
    candidates = [combo for k in range(limit + 1) for combo in combinations(ids, k)]
    if jobs > 1 and len(candidates) > 1:
        from concurrent.futures import ProcessPoolExecutor

        from .canonical import serialize_canonical

        text = serialize_canonical(cx)
        step = max(1, len(candidates) // jobs)
        chunks = [candidates[i:i + step] for i in range(0, len(candidates), step)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            flags = [f for part in pool.map(_eval_chunk,
                                            ((text, c) for c in chunks))
                     for f in part]
    else:
        flags = [is_exchangeable(cx, frozenset(c)) for c in candidates]
    return [frozenset(c) for c, ok in zip(candidates, flags) if ok]


def du_index_upper_bound(cx: SingularityComplex, oracle: TrivialityOracle,
                         max_size: int | None = None,
                         cap: int = ENUMERATION_CAP,
                         jobs: int = 1) -> DuReport:
    """Filter exchangeable unions through the descendent disk condition,
    apply the crossing change, and look each result up in the oracle.

    best_size is the smallest union size whose changed diagram the oracle
    marks trivial; the already-unknotted branch appears as the empty union
    (size 0, identity change). Unknown verdicts are carried, never dropped.
    """
    witnesses = []
    best: int | None = None
    for gamma in enumerate_exchangeable(cx, max_size=max_size, cap=cap, jobs=jobs):
        dd = satisfies_dd_condition(cx, gamma)
        verdict = Verdict.UNKNOWN
        if dd:
            changed = crossing_change(cx, gamma)
            verdict = oracle.lookup(fingerprint(changed))
        witnesses.append(DuWitness(tuple(sorted(gamma)), len(gamma), True, dd, verdict))
        if dd and verdict is Verdict.TRIVIAL and (best is None or len(gamma) < best):
            best = len(gamma)
    return DuReport(tuple(witnesses), best)


def is_du_exchangeable(cx: SingularityComplex, oracle: TrivialityOracle,
                       max_size: int | None = None) -> DuVerdict:
    """du-exchangeability relative to the oracle: yes with a witness union
    when some enumerated union (possibly the empty one) passes all three
    conditions, unknown otherwise. Never 'no'."""
    report = du_index_upper_bound(cx, oracle, max_size=max_size)
    witness = report.best_witness()
    if witness is not None:
        return DuVerdict(DuStatus.DU_EXCHANGEABLE, witness.gamma)
    return DuVerdict(DuStatus.UNKNOWN)


# -- random complexes (property-test fuel) ----------------------------------


@dataclass(frozen=True)
class SizeBudget:
    triples: int = 2
    branches: int = 2
    circles: int = 1


def generate_random_complex(seed: int, budget: SizeBudget = SizeBudget(),
                            disks: int = 0) -> SingularityComplex:
    """A uniformly wired well-formed complex, deterministic per seed.

    All triple slots and branch points are paired into arcs at random; when
    the endpoint count is odd one extra branch point is added (logged).
    Optionally declares consistent descendent disks on random edge pairs.
    """
    rng = random.Random(seed)
    n_branches = budget.branches
    if (6 * budget.triples + n_branches) % 2:
        logger.info("seed %d: odd endpoint count, adding one branch point", seed)
        n_branches += 1
    triples = []
    for i in range(budget.triples):
        types = [LineType.BM, LineType.BT, LineType.MT]
        rng.shuffle(types)
        triples.append(TriplePoint(f"T{i + 1}", tuple(types)))
    branches = [BranchPoint(f"B{i + 1}") for i in range(n_branches)]
    refs: list = []
    for t in triples:
        refs.extend(TripleSlot(t.id, line, slot)
                    for line in range(3) for slot in ("a", "b"))
    refs.extend(BranchRef(b.id) for b in branches)
    rng.shuffle(refs)
    edges: list[Arc | Circle] = []
    for i in range(0, len(refs), 2):
        edges.append(Arc(f"E{i // 2 + 1}", refs[i], refs[i + 1]))
    edges.extend(Circle(f"C{i + 1}") for i in range(budget.circles))
    cx = SingularityComplex.build(triples, branches, edges)
    if disks and len(edges) >= 2:
        from .singularity import DescendentDisk, Level, Pairing
        registry = []
        ids = [e.id for e in edges]
        for i in range(disks):
            e1, e2 = rng.sample(ids, 2)
            level = rng.choice((Level.UPPER, Level.LOWER))
            registry.append(DescendentDisk(
                f"D{i + 1}", e1, e2,
                rng.choice((Pairing.CROSS, Pairing.PARALLEL)), level, level))
        cx = SingularityComplex.build(triples, branches, edges, registry)
    return cx


def oracle_from_document(oracle_mapping) -> TrivialityOracle:
    """Oracle from the `.skd` oracle section (fingerprint -> verdict token)."""
    return TrivialityOracle.from_mapping(oracle_mapping)
