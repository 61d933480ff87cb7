import json
from pathlib import Path

import pytest

import modules.intertwine as intertwine
from Intertwiner import main
from modules import config, shared
from modules.presets import EXIT_OK, EXIT_RESOURCE_CAP, EXIT_THEOREM_VIOLATION, EXIT_VALIDATION

CONFIG_DIR = Path(__file__).resolve().parent.parent / "configs"


@pytest.fixture(autouse=True)
def keep_threads(monkeypatch):
    # --threads changes process-wide state
    monkeypatch.setattr(shared.state, "threads", shared.state.threads)


@pytest.fixture
def write_inst(tmp_path):
    def write(text, name="case"):
        path = tmp_path / f"{name}.inst"
        path.write_text(text, encoding="utf-8")
        return str(path)

    return write


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_kappa(capsys, instance_dir):
    code, out, _ = run(capsys, "kappa", instance_dir / "c4.inst")
    assert code == EXIT_OK
    assert out == "kappa=1 witness={e1}\n"
    code, out, _ = run(capsys, "kappa", instance_dir / "p4.inst")
    assert out.startswith("kappa=0 ")


def test_kappa_of_second_pair(capsys, instance_dir):
    code, out, _ = run(capsys, "kappa", instance_dir / "k4.inst", "--pair", "ST")
    assert code == EXIT_OK
    assert out.startswith("kappa=1 ")


def test_classify(capsys, instance_dir):
    code, out, _ = run(capsys, "classify", instance_dir / "c4.inst")
    assert code == EXIT_OK
    assert out.splitlines() == [
        "element\tdeletable\tcontractible\tflexible\tkappa_after_delete\tkappa_after_contract",
        "e2\tno\tyes\tno\t0\t1",
        "e4\tno\tyes\tno\t0\t1",
    ]
    _, out, _ = run(capsys, "classify", instance_dir / "c4_loop.inst")
    assert out.splitlines()[-1] == "e5\tyes\tyes\tyes\t1\t1"


def test_classify_with_nothing_outside_the_pair(capsys, write_inst):
    path = write_inst("type uniform\nrank 1\nsize 2\nQ e1\nR e2\nS\nT\n")
    code, out, _ = run(capsys, "classify", path)
    assert code == EXIT_OK
    assert out.count("\n") == 1
    assert out.startswith("element\t")


def test_intertwine_on_grid(capsys, instance_dir, tmp_path):
    report = tmp_path / "grid.json"
    code, out, _ = run(capsys, "intertwine", instance_dir / "grid_1x2.inst", "--json", report)
    assert code == EXIT_OK
    assert out == "none (|F|=1 < c=40, consistent)\n"
    data = json.loads(report.read_text(encoding="utf-8"))
    assert data["element"] is None
    assert data["guaranteed"] is False
    assert (data["freeSize"], data["cBound"], data["conjectureBound"]) == (1, 40, 2)


def test_intertwine_finds_the_loop(capsys, instance_dir):
    code, out, _ = run(capsys, "intertwine", instance_dir / "c4_loop.inst")
    assert code == EXIT_OK
    assert out.startswith("delete e5 (kappaQR 1->1, kappaST 1->1")


def test_intertwine_shrink(capsys, instance_dir, tmp_path):
    report = tmp_path / "shrink.json"
    code, out, _ = run(capsys, "intertwine", instance_dir / "c4_loop.inst", "--shrink", "--json", report)
    assert code == EXIT_OK
    assert out.splitlines()[0] == "delete e5"
    data = json.loads(report.read_text(encoding="utf-8"))
    assert data["steps"] == [{"element": "e5", "operation": "delete"}]
    assert data["consistent"] is True


def test_intertwine_shrink_along_proof_path(capsys, instance_dir, monkeypatch):
    calls = []
    search = intertwine._proof_path_search

    def counted(*args, **kwargs):
        calls.append(args[0])
        return search(*args, **kwargs)

    monkeypatch.setattr(intertwine, "_proof_path_search", counted)
    code, out, _ = run(capsys, "intertwine", instance_dir / "c4_loop.inst", "--shrink", "--proof-path")
    assert code == EXIT_OK
    assert calls
    assert out.splitlines()[0] == "delete e5"


def test_grid_extremal_check(capsys, tmp_path):
    target = tmp_path / "grid.inst"
    code, out, _ = run(capsys, "grid", "--k", 2, "--l", 2, "--extremal-check", "--write", target)
    assert code == EXIT_OK
    assert "no qualifying element among 4 candidates" in out
    assert target.exists()
    _, again, _ = run(capsys, "kappa", target)
    assert again.startswith("kappa=2 ")


def test_nested_certificate(capsys, instance_dir):
    code, out, _ = run(capsys, "nested", instance_dir / "c4.inst", "--elements", "e2")
    assert code == EXIT_OK
    lines = out.splitlines()
    assert lines[0] == "(e2),({e1,e2}),coguts"
    assert lines[1:] == ["(i) PASS", "(ii) PASS", "(iii) PASS", "(iv) PASS"]


def test_empty_scan(capsys, tmp_path):
    code, out, _ = run(capsys, "scan", CONFIG_DIR / "scan_empty.json", "--out", tmp_path)
    assert code == EXIT_OK
    assert out.startswith("scan finished: 0 records")
    assert (tmp_path / "scan_records.csv").exists()
    assert (tmp_path / "scan_summary.json").exists()


def test_thread_count_does_not_change_output(capsys, instance_dir):
    for argv in (["intertwine", instance_dir / "c4_loop.inst"], ["kappa", instance_dir / "k4.inst"]):
        _, single, _ = run(capsys, "--threads", 1, *argv)
        _, several, _ = run(capsys, "--threads", 3, *argv)
        assert single == several


def test_validation_errors(capsys, write_inst):
    code, _, err = run(capsys, "kappa", write_inst("type uniform\nrank 1\nsize 3\nQ e1\nR e1\nS\nT\n"))
    assert code == EXIT_VALIDATION
    assert err.startswith("error: ")
    code, _, err = run(capsys, "kappa", write_inst("type uniform\nsize 3\nQ e1\nR e2\nS\nT\n"))
    assert code == EXIT_VALIDATION
    code, _, err = run(capsys, "kappa", write_inst("type graphic\nvertices 2\nedges\n0 1 1\nQ\nR\nS\nT\n"))
    assert code == EXIT_VALIDATION
    assert "line 4" in err


def test_size_cap(capsys, write_inst):
    code, _, _ = run(capsys, "kappa", write_inst("type uniform\nrank 2\nsize 33\nQ e1\nR e2\nS\nT\n"))
    assert code == EXIT_RESOURCE_CAP


def test_theorem_violation_is_persisted(capsys, write_inst, monkeypatch, tmp_path):
    monkeypatch.setattr(config, "counterexample_dir", str(tmp_path / "violations"))
    monkeypatch.setattr(intertwine, "_first_preserving", lambda *args, **kwargs: None)
    path = write_inst("type uniform\nrank 0\nsize 6\nQ e1\nR e2\nS e3\nT e4\n", name="u06")
    code, _, err = run(capsys, "intertwine", path)
    assert code == EXIT_THEOREM_VIOLATION
    saved = tmp_path / "violations" / "violation-u06.inst"
    assert saved.exists()
    assert str(saved) in err
