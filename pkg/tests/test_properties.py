"""Property tests over seeded random complexes."""

from hypothesis import given, settings
from hypothesis import strategies as st

from skdiag import (
    all_curves,
    census,
    crossing_change,
    fingerprint,
    is_exchangeable,
    parse_skd,
    satisfies_dd_condition,
    serialize_canonical,
    validate,
)
from skdiag.explorer import SizeBudget, generate_random_complex

from tests.test_singularity import traced_partition, unionfind_partition

budgets = st.builds(SizeBudget,
                    triples=st.integers(min_value=0, max_value=3),
                    branches=st.integers(min_value=0, max_value=4),
                    circles=st.integers(min_value=0, max_value=3))


@given(seed=st.integers(min_value=0, max_value=10 ** 6), budget=budgets)
@settings(max_examples=80, deadline=None)
def test_generated_complexes_are_well_formed(seed, budget):
    cx = generate_random_complex(seed, budget)
    assert validate(cx).ok
    rec = census(cx)
    assert 2 * rec.arc_edges == 6 * rec.triple_points + rec.branch_points
    assert rec.branch_points == 2 * rec.open_curves
    assert traced_partition(cx) == unionfind_partition(cx)


@given(seed=st.integers(min_value=0, max_value=10 ** 6), budget=budgets)
@settings(max_examples=60, deadline=None)
def test_full_union_involution_and_round_trip(seed, budget):
    cx = generate_random_complex(seed, budget, disks=1)
    gamma = all_curves(cx)
    assert is_exchangeable(cx, gamma)
    assert satisfies_dd_condition(cx, gamma)
    twice = crossing_change(crossing_change(cx, gamma), gamma)
    assert serialize_canonical(twice) == serialize_canonical(cx)
    assert parse_skd(serialize_canonical(cx)) == cx


@given(seed=st.integers(min_value=0, max_value=10 ** 6), budget=budgets)
@settings(max_examples=60, deadline=None)
def test_fingerprint_deterministic_and_order_free(seed, budget):
    cx = generate_random_complex(seed, budget)
    lines = serialize_canonical(cx).splitlines()
    reversed_text = "\n".join(reversed(lines)) + "\n" if lines else ""
    assert fingerprint(parse_skd(reversed_text)) == fingerprint(cx)
