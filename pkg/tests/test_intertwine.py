import pytest
from hypothesis import given, settings

import modules.intertwine as intertwine
from modules.errors import ElementNotFree, OverlappingSets, TheoremViolation
from modules.experiments import build_grid_instance
from modules.intertwine import (
    IntertwineInstance,
    c_bound,
    conjecture_bound,
    exhaustive_pair_table,
    find_intertwined_element,
    shrink_preserving_both,
    verify_intertwined,
)
from modules.matroids.base_matroid import Operation
from modules.matroids.matroids import GraphicMatroid, UniformMatroid

from strategies import instances


def test_bound_formulas():
    assert c_bound(1, 1) == 24
    assert c_bound(2, 1) == 96
    assert c_bound(1, 2) == 40
    assert conjecture_bound(2, 2) == 5
    with pytest.raises(ValueError):
        c_bound(-1, 1)
    with pytest.raises(ValueError):
        conjecture_bound(1, -1)


def test_instance_validation(c4):
    with pytest.raises(OverlappingSets):
        IntertwineInstance(c4, q=0b0001, r=0b0001, s=0, t=0)
    with pytest.raises(OverlappingSets):
        IntertwineInstance(c4, q=0b0001, r=0b0100, s=0b0010, t=0b0010)


def test_free_set_is_derived(c4_instance):
    inst = c4_instance
    assert inst.free == 0
    assert (inst.k, inst.l) == (1, 1)


def test_grid_has_no_qualifying_element():
    inst = build_grid_instance(1, 2).instance
    report = find_intertwined_element(inst)
    assert not report.found
    assert not report.guaranteed
    assert report.free_size == 1
    assert report.c_bound == 40
    assert report.kappa_qr_after is None
    rows = exhaustive_pair_table(inst, fresh=True)
    assert [row.operation for row in rows] == [Operation.Delete, Operation.Contract]
    assert not any(row.preserves for row in rows)
    assert (rows[0].kappa_qr, rows[0].kappa_st) == (1, 1)
    assert rows[1].kappa_qr == 0


def test_loop_qualifies(loop_instance):
    report = find_intertwined_element(loop_instance)
    assert report.found
    assert (report.element, report.operation) == (4, Operation.Delete)
    assert (report.kappa_qr_after, report.kappa_st_after) == (1, 1)
    assert verify_intertwined(loop_instance, 4, Operation.Contract)


def test_verify_requires_free_element(loop_instance):
    with pytest.raises(ElementNotFree):
        verify_intertwined(loop_instance, 0, Operation.Delete)


def test_proof_path_on_loop(loop_instance):
    report = find_intertwined_element(loop_instance, proof_path=True)
    assert (report.element, report.operation) == (4, Operation.Delete)
    assert report.shrunk_pair == (0b00010, 0b01000)
    assert report.trace == []


def test_guaranteed_region_and_alarm(monkeypatch):
    inst = IntertwineInstance(UniformMatroid(0, 6), q=0b1, r=0b10, s=0b100, t=0b1000)
    report = find_intertwined_element(inst)
    assert report.guaranteed
    assert (report.element, report.operation) == (4, Operation.Delete)

    monkeypatch.setattr(intertwine, "_first_preserving", lambda *args, **kwargs: None)
    with pytest.raises(TheoremViolation) as info:
        find_intertwined_element(inst)
    assert info.value.instance is inst


def test_shrink_removes_the_loop(loop_instance):
    result = shrink_preserving_both(loop_instance)
    assert result.steps == [(4, Operation.Delete)]
    assert result.consistent
    assert result.instance.free_size == 0
    assert result.result.size == 4


def test_shrink_along_proof_path(loop_instance):
    result = shrink_preserving_both(loop_instance, proof_path=True)
    assert result.steps == [(4, Operation.Delete)]
    assert result.consistent


def test_fingerprint_sees_high_elements():
    path = [(i, i + 1) for i in range(13)]
    first = GraphicMatroid(15, path + [(13, 14)])
    second = GraphicMatroid(15, path + [(0, 14)])
    same = GraphicMatroid(15, path + [(13, 14)])
    a, b, c = (IntertwineInstance(M, q=0b1, r=0b10, s=0b100, t=0b1000) for M in (first, second, same))
    assert a.fingerprint() != b.fingerprint()
    assert a.fingerprint() == c.fingerprint()
    assert IntertwineInstance(UniformMatroid(2, 5), 1, 2, 4, 8).fingerprint() != IntertwineInstance(
        UniformMatroid(3, 5), 1, 2, 4, 8
    ).fingerprint()


@settings(max_examples=40, deadline=None)
@given(instances(max_size=7))
def test_search_agrees_with_exhaustive_table(inst):
    report = find_intertwined_element(inst, threads=1)
    rows = exhaustive_pair_table(inst)
    qualifying = [(row.element, row.operation) for row in rows if row.preserves]
    if qualifying:
        assert (report.element, report.operation) == qualifying[0]
        assert verify_intertwined(inst, report.element, report.operation)
    else:
        assert not report.found


@settings(max_examples=25, deadline=None)
@given(instances(max_size=7))
def test_threads_do_not_change_the_answer(inst):
    one = find_intertwined_element(inst, threads=1)
    many = find_intertwined_element(inst, threads=3)
    assert (one.element, one.operation) == (many.element, many.operation)


@settings(max_examples=25, deadline=None)
@given(instances(max_size=7))
def test_proof_path_finds_only_valid_elements(inst):
    report = find_intertwined_element(inst, proof_path=True)
    if report.found:
        assert inst.free >> report.element & 1
        assert verify_intertwined(inst, report.element, report.operation)


@settings(max_examples=25, deadline=None)
@given(instances(max_size=7))
def test_shrink_keeps_both_connectivities(inst):
    result = shrink_preserving_both(inst)
    assert (result.instance.k, result.instance.l) == (inst.k, inst.l)
    assert len(result.steps) == inst.free_size - result.instance.free_size


@settings(max_examples=25, deadline=None)
@given(instances(max_size=7))
def test_shrink_along_proof_path_keeps_both_connectivities(inst):
    result = shrink_preserving_both(inst, proof_path=True)
    assert (result.instance.k, result.instance.l) == (inst.k, inst.l)
    assert result.consistent
