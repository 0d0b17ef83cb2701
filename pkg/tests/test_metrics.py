import io
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cogmine.abstraction import StrategyKind
from cogmine.errors import EmptySubmap
from cogmine.metrics import (
    CognitionControlSequence, as_fraction, ccm_sequence, coverage, decimal6, prune_irrelevant, recognize_strategies, write_curve_csv,
)
from cogmine.submaps import Submap, ThinkingMapKind, comparison_triple, search_single

from conftest import WORKED_LAS, make_km


@pytest.fixture(scope="module")
def triple(sample_km):
    return comparison_triple(sample_km, "array", "pointer", 2)


def test_coverage_half(triple):
    assert coverage(triple[0], {"array_definition", "array_type", "array_2d"}) == F(1, 2)


def test_coverage_bounds(triple):
    desc1 = triple[0]
    assert coverage(desc1, set()) == 0
    assert coverage(desc1, set(desc1.unit_ids) | {"pointer"}) == 1


def test_coverage_empty_submap():
    empty = Submap(ThinkingMapKind.CIRCLE, ("x",), frozenset(), frozenset())
    with pytest.raises(EmptySubmap):
        coverage(empty, {"a"})


def test_worked_example_final_ccm(triple):
    s = ccm_sequence(WORKED_LAS, triple)
    assert s.final == (F(1, 2), F(3, 5), F(0))
    assert len(s) == 7


def test_outside_visit_leaves_coverage_flat():
    km = make_km([("A", "an attribute", f"d{i}") for i in range(1, 7)], extra=["x_outside"])
    desc1 = search_single(km, "A")[ThinkingMapKind.BUBBLE]
    s = ccm_sequence(["d1", "x_outside", "d2"], [desc1])
    assert [c[0] for c in s.ccms] == [F(1, 6), F(1, 6), F(2, 6)]


def test_empty_las(triple):
    s = ccm_sequence([], triple)
    assert s.ccms == () and s.final == (0, 0, 0)


def test_prune_single_cku(sample_km):
    subs = list(search_single(sample_km, "array", 2).values())
    kept = prune_irrelevant(subs, ["array_definition", "char_array"])
    assert [s.kind for s in kept] == [ThinkingMapKind.BUBBLE, ThinkingMapKind.TREE]


def test_prune_keeps_triple_at_zero(triple):
    assert prune_irrelevant(list(triple), ["array_definition"], keep=triple) == list(triple)
    assert prune_irrelevant(list(triple), ["array_definition"]) == [triple[0]]


def test_prune_drops_empty_even_if_kept():
    empty = Submap(ThinkingMapKind.BUBBLE, ("x",), frozenset(), frozenset())
    assert prune_irrelevant([empty], [], keep=[empty]) == []


def test_recognize_staged_order(sample_km, triple):
    desc1, conn, desc2 = (sorted(s.unit_ids) for s in triple)
    s = ccm_sequence(desc1 + conn + desc2, triple)
    found = recognize_strategies(s, F(3, 5), sample_km)
    assert [str(i.label) for i in found] == [
        "Description(Array)", "Comparison(Array, Pointer)", "Description(Pointer)"]
    assert [i.label.kind for i in found] == [StrategyKind.DESCRIPTION, StrategyKind.COMPARISON, StrategyKind.DESCRIPTION]
    assert [i.crossing_index for i in found] == [3, 8, 13]
    assert all(i.final_coverage == 1 for i in found)


def test_recognize_no_crossing(triple):
    s = ccm_sequence(WORKED_LAS[:2], triple)
    assert recognize_strategies(s, F(3, 5)) == []


def test_recognize_tie_keeps_submap_order(triple):
    s = CognitionControlSequence(triple, ((F(0), F(0), F(0)), (F(3, 5), F(3, 5), F(1, 5))))
    found = recognize_strategies(s, F(3, 5))
    assert [(i.position, i.crossing_index) for i in found] == [(0, 1), (1, 1)]


def test_threshold_is_inclusive(triple):
    # 3/5 of the connective submap reaches the default threshold exactly
    s = ccm_sequence(["array_pointer", "pointer_array", "array_pointer_structure"], triple)
    found = recognize_strategies(s, 0.6)
    assert [i.crossing_index for i in found] == [2]


def test_threshold_validation(triple):
    s = ccm_sequence(WORKED_LAS, triple)
    with pytest.raises(ValueError):
        recognize_strategies(s, 0)
    with pytest.raises(ValueError):
        recognize_strategies(s, F(6, 5))


def test_as_fraction():
    assert as_fraction(0.6) == F(3, 5)
    assert as_fraction("3/5") == F(3, 5)
    assert as_fraction("0.25") == F(1, 4)


def test_decimal6():
    assert decimal6(F(1, 3)) == "0.333333"
    assert decimal6(F(2, 3)) == "0.666667"
    assert decimal6(F(1)) == "1.000000"
    assert decimal6(F(0)) == "0.000000"


def test_curve_csv(triple):
    buf = io.StringIO()
    write_curve_csv(ccm_sequence(WORKED_LAS[:3], triple), buf)
    assert buf.getvalue() == (
        "event_index,desc1,conn,desc2\n"
        "1,0.166667,0.000000,0.000000\n"
        "2,0.333333,0.000000,0.000000\n"
        "3,0.500000,0.000000,0.000000\n"
    )


units = ["array_definition", "array_type", "array_2d", "array_element", "array_pointer",
         "pointer_array", "null_pointer", "pointer_type", "array_2d_init", "memory_address"]


@given(st.lists(st.sampled_from(units), max_size=25), st.randoms(use_true_random=False))
def test_monotone_and_permutation_invariant_final(sample_km, visits, rnd):
    triple = comparison_triple(sample_km, "array", "pointer")
    s = ccm_sequence(visits, triple)
    for before, after in zip(s.ccms, s.ccms[1:]):
        assert all(a >= b for a, b in zip(after, before))
    expected = tuple(F(len(set(visits) & sub.unit_ids), len(sub.unit_ids)) for sub in triple)
    assert s.final == expected
    shuffled = list(visits)
    rnd.shuffle(shuffled)
    assert ccm_sequence(shuffled, triple).final == s.final
    assert ccm_sequence(visits + visits, triple).final == s.final


def test_single_cku_visit_counts_for_every_containing_submap():
    km = make_km([("A", "an attribute", "u"), ("A", "an association", "u"), ("A", "an attribute", "v")])
    subs = search_single(km, "A")
    s = ccm_sequence(["u"], [subs[ThinkingMapKind.BUBBLE], subs[ThinkingMapKind.CIRCLE]])
    assert s.final == (F(1, 2), F(1))
