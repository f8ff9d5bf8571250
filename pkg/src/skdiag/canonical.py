"""Canonical text form and fingerprinting of a singularity complex.

The canonical text lists records sorted by id within each record kind
(triple, branch, edge, circle, disk), one per line, with normalized
spacing. Two complexes that differ only in record order serialize
identically; the fingerprint is the SHA-256 of the canonical text.
Oracle annotations are not part of the complex and never enter the
fingerprint.
"""

import hashlib

from .singularity import Arc, SingularityComplex


def serialize_canonical(cx: SingularityComplex) -> str:
    """Deterministic `.skd` text for a complex (no comments, sorted ids)."""
    lines = []
    for t in cx.triple_points:
        types = ",".join(lt.value for lt in t.line_types)
        lines.append(f"triple {t.id} lines={types}")
    for b in cx.branch_points:
        lines.append(f"branch {b.id}")
    for e in cx.edges:
        if isinstance(e, Arc):
            lines.append(f"edge {e.id} {e.end1} {e.end2}")
    for e in cx.edges:
        if not isinstance(e, Arc):
            lines.append(f"circle {e.id}")
    for d in cx.disks:
        lines.append(
            f"disk {d.id} e1={d.edge1} e2={d.edge2} pair={d.pair.value} "
            f"level1={d.level1.value} level2={d.level2.value}")
    return "".join(line + "\n" for line in lines)


def fingerprint(cx: SingularityComplex) -> str:
    """SHA-256 hex digest of the canonical serialization."""
    return hashlib.sha256(serialize_canonical(cx).encode("utf-8")).hexdigest()
