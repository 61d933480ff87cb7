import json
from dataclasses import replace

import networkx as nx
import pytest

import modules.experiments as experiments
from modules import shared
from modules.connectivity import kappa
from modules.errors import InvalidRankFunction, SizeCapExceeded
from modules.intertwine import find_intertwined_element, shrink_preserving_both, verify_intertwined
from modules.experiments import (
    ScanConfig,
    build_grid_instance,
    conjecture_scan,
    random_instance,
    run_extremal_check,
    save_scan_results,
)
from modules.matroids.base_matroid import carry_mask
from modules.matroids.matroids import GraphicMatroid, TableMatroid, UniformMatroid
from modules.presets import REGION_GUARANTEED, SCAN_COLUMNS
from modules.utils import popcount


@pytest.mark.parametrize("k, l", [(1, 1), (1, 2), (2, 1), (2, 2), (2, 3)])
def test_grid_arithmetic(k, l):
    grid = build_grid_instance(k, l)
    inst = grid.instance
    assert inst.matroid.size == 2 * k * l + k + l
    assert popcount(inst.q) == popcount(inst.r) == k
    assert popcount(inst.s) == popcount(inst.t) == l
    assert inst.free_size == 2 * k * l - k - l
    assert (inst.k, inst.l) == (k, l)


def test_c4_is_the_smallest_grid():
    inst = build_grid_instance(1, 1).instance
    assert inst.matroid.labels == ("h0_0", "v0_0", "v0_1", "h1_0")
    assert inst.free == 0


def test_grid_arguments():
    with pytest.raises(ValueError):
        build_grid_instance(0, 2)
    with pytest.raises(SizeCapExceeded):
        build_grid_instance(4, 4)


@pytest.mark.parametrize("k, l, candidates", [(1, 1, 0), (1, 2, 1), (2, 1, 1), (2, 2, 4), (2, 3, 7)])
def test_extremal_grids_have_no_qualifying_element(k, l, candidates):
    result = run_extremal_check(k, l)
    assert not result.report.found
    assert result.candidates == candidates
    assert len(result.table) == 2 * candidates
    assert not any(row.preserves for row in result.table)


def test_scan_config_validation():
    with pytest.raises(ValueError):
        ScanConfig(family="transversal")
    with pytest.raises(SizeCapExceeded):
        ScanConfig(size=(4, 40))
    with pytest.raises(ValueError):
        ScanConfig(size=(2, 3), q_size=1, r_size=1, s_size=1, t_size=1)
    with pytest.raises(ValueError):
        ScanConfig.from_dict({"seed": 1, "colour": "blue"})
    assert ScanConfig(size=[5, 9]).size == (5, 9)


def test_scan_config_file(tmp_path):
    path = tmp_path / "scan.json"
    path.write_text('{\n  // comments are allowed\n  "seed": 3, "samples": 2, "size": 6\n}\n', encoding="utf-8")
    scan = ScanConfig.from_file(path)
    assert (scan.seed, scan.samples, scan.size) == (3, 2, (6, 6))


def test_random_instance_is_deterministic():
    scan = ScanConfig(seed=11, family="uniform-mix", size=(6, 10), samples=5)
    for index in range(5):
        assert random_instance(scan, index).fingerprint() == random_instance(scan, index).fingerprint()
    with pytest.raises(ValueError):
        random_instance(scan, 5)


def test_uniform_mix_matches_its_table():
    scan = ScanConfig(seed=5, family="uniform-mix", size=8, samples=4)
    for index in range(4):
        M = random_instance(scan, index).matroid
        table = TableMatroid.from_oracle(M)
        assert all(table.rank(X) == M.rank(X) for X in range(256))


def test_graphic_instances_are_connected():
    scan = ScanConfig(seed=9, family="graphic", size=12, samples=5)
    for index in range(5):
        inst = random_instance(scan, index)
        M = inst.matroid
        assert isinstance(M, GraphicMatroid)
        graph = nx.MultiGraph()
        graph.add_nodes_from(range(M.vertex_count))
        graph.add_edges_from(M.edges)
        assert nx.is_connected(graph)
        sets = [inst.q, inst.r, inst.s, inst.t]
        assert all(popcount(x) == 1 for x in sets)
        assert popcount(inst.q | inst.r | inst.s | inst.t) == 4


def test_empty_scan(tmp_path):
    result = conjecture_scan(ScanConfig(samples=0), threads=1, counterexample_dir=tmp_path)
    assert result.records == []
    assert result.summary.empty
    csv_path, json_path = save_scan_results(result, tmp_path / "out")
    assert csv_path.read_text(encoding="utf-8").strip() == ",".join(SCAN_COLUMNS)
    summary = json.loads(json_path.read_text(encoding="utf-8"))
    assert summary["records"] == 0
    assert summary["bins"] == []


def test_scan_bookkeeping_and_determinism(tmp_path):
    scan = ScanConfig(seed=1, family="graphic", size=(6, 9), samples=6, time_budget=60)
    first = conjecture_scan(scan, threads=1, counterexample_dir=tmp_path)
    second = conjecture_scan(scan, threads=2, counterexample_dir=tmp_path)
    strip = lambda records: [replace(r, wall_time=0) for r in records]
    assert strip(first.records) == strip(second.records)
    assert [r.index for r in first.records] == list(range(6))
    assert int(first.summary["records"].sum()) == len(first.records)
    for record in first.records:
        if record.region == REGION_GUARANTEED:
            assert record.found
    csv_path, json_path = save_scan_results(first, tmp_path / "out")
    lines = csv_path.read_text(encoding="utf-8").splitlines()
    assert len(lines) == 7
    summary = json.loads(json_path.read_text(encoding="utf-8"))
    assert sum(b["records"] for b in summary["bins"]) == 6
    assert summary["records"] == 6


def test_interrupted_scan_keeps_finished_chunks(monkeypatch, tmp_path):
    calls = []

    def flaky(func, items, threads=None, processes=False):
        calls.append(list(items))
        if len(calls) == 2:
            raise KeyboardInterrupt
        return [func(item) for item in items]

    monkeypatch.setattr(experiments, "parallel_map", flaky)
    scan = ScanConfig(seed=4, family="graphic", size=6, samples=12)
    result = conjecture_scan(scan, threads=1, counterexample_dir=tmp_path)
    assert [r.index for r in result.records] == [0, 1, 2, 3]
    assert len(calls) == 2
    assert shared.state.interrupted
    conjecture_scan(ScanConfig(samples=0), threads=1, counterexample_dir=tmp_path)
    assert not shared.state.interrupted



def test_disconnected_graphic_draw_is_rejected(monkeypatch):
    monkeypatch.setattr(experiments.nx, "is_connected", lambda graph: False)
    with pytest.raises(RuntimeError):
        random_instance(ScanConfig(seed=2, family="graphic", size=8, samples=1), 0)


def test_rank_table_disagreement_is_rejected(monkeypatch):
    monkeypatch.setattr(experiments.TableMatroid, "from_oracle", staticmethod(lambda M: UniformMatroid(0, M.size)))
    with pytest.raises(InvalidRankFunction):
        random_instance(ScanConfig(seed=2, family="graphic", size=8, samples=1), 0)


def test_guaranteed_graphic_instances_qualify():
    # k = l = 1 with 28 edges leaves |F| = 24 = c(1, 1)
    scan = ScanConfig(seed=3, family="graphic", size=28, samples=400)
    found = []
    for index in range(scan.samples):
        inst = random_instance(scan, index)
        if (inst.k, inst.l) == (1, 1):
            found.append(inst)
            if len(found) == 20:
                break
    assert len(found) == 20
    for inst in found:
        report = find_intertwined_element(inst, threads=1)
        assert report.guaranteed and report.found
        assert verify_intertwined(inst, report.element, report.operation)


def test_shrinking_graphic_instances_keeps_both_connectivities():
    scan = ScanConfig(seed=7, family="graphic", size=14, samples=10)
    for index in range(scan.samples):
        inst = random_instance(scan, index)
        result = shrink_preserving_both(inst, threads=1)
        assert (result.instance.k, result.instance.l) == (inst.k, inst.l)
        assert result.consistent
        M, view = inst.matroid, inst.matroid
        for e, op in result.steps:
            view = op.apply(view, carry_mask(1 << e, M, view).bit_length() - 1)
            move = lambda mask: carry_mask(mask, M, view)
            assert kappa(view, move(inst.q), move(inst.r)).value == inst.k
            assert kappa(view, move(inst.s), move(inst.t)).value == inst.l
