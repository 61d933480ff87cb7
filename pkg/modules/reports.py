"""Plain-text, JSON and tab-separated renderings of library results.

Everything here is a pure function of its inputs, so identical inputs give
byte-identical reports.
"""

from __future__ import annotations
from typing import List, Optional
import io
import json

import pandas as pd

from .certificates import CONDITIONS, NestedSequence, VerificationReport
from .classification import PairClassification
from .connectivity import KappaResult
from .experiments import ExtremalReport, ScanResult
from .intertwine import IntertwineInstance, IntertwineReport, ShrinkResult
from .matroids.base_matroid import BaseMatroid
from .presets import *


def _yes(flag: bool) -> str:
    return "yes" if flag else "no"


def format_kappa(M: BaseMatroid, result: KappaResult) -> str:
    return f"kappa={result.value} witness={M.ground.format(result.witness.side)}"


def format_classification(M: BaseMatroid, rows: List[PairClassification]) -> str:
    """Tab-separated table, one row per element; header only when there are none."""
    frame = pd.DataFrame(
        [
            [
                M.labels[c.element],
                _yes(c.deletable),
                _yes(c.contractible),
                _yes(c.flexible),
                c.kappa_after_delete,
                c.kappa_after_contract,
            ]
            for c in rows
        ],
        columns=CLASSIFY_COLUMNS,
    )
    buffer = io.StringIO()
    frame.to_csv(buffer, sep="\t", index=False, lineterminator="\n")
    return buffer.getvalue()


def format_intertwine(inst: IntertwineInstance, report: IntertwineReport) -> str:
    M = inst.matroid
    if not report.found:
        verdict = NONE_CONSISTENT_MSG if not report.guaranteed else NONE_ALARM_MSG
        relation = "<" if report.free_size < report.c_bound else ">="
        lines = [f"none (|F|={report.free_size} {relation} c={report.c_bound}, {verdict})"]
    else:
        lines = [
            f"{report.operation.value} {M.labels[report.element]} "
            f"(kappaQR {report.kappa_qr_before}->{report.kappa_qr_after}, "
            f"kappaST {report.kappa_st_before}->{report.kappa_st_after}, "
            f"|F|={report.free_size}, c={report.c_bound})"
        ]
    if report.shrunk_pair is not None:
        S1, T1 = report.shrunk_pair
        lines.append(f"linking pair S1={M.ground.format(S1)} T1={M.ground.format(T1)}")
        for e, op in report.trace:
            lines.append(f"  {op.value} {M.labels[e]}")
    return "\n".join(lines) + "\n"


def intertwine_json(inst: IntertwineInstance, report: IntertwineReport) -> dict:
    M = inst.matroid
    data = {
        "element": M.labels[report.element] if report.found else None,
        "operation": report.operation.value if report.found else None,
        "kappaQR_before": report.kappa_qr_before,
        "kappaST_before": report.kappa_st_before,
        "kappaQR_after": report.kappa_qr_after,
        "kappaST_after": report.kappa_st_after,
        "guaranteed": report.guaranteed,
        "freeSize": report.free_size,
        "cBound": report.c_bound,
        "conjectureBound": report.conjecture_bound,
    }
    if report.shrunk_pair is not None:
        data["shrunkPair"] = {
            "S1": M.ground.labels_of(report.shrunk_pair[0]),
            "T1": M.ground.labels_of(report.shrunk_pair[1]),
        }
        data["trace"] = [{"element": M.labels[e], "operation": op.value} for e, op in report.trace]
    return data


def format_shrink(inst: IntertwineInstance, result: ShrinkResult) -> str:
    lines = [f"{op.value} {inst.matroid.labels[e]}" for e, op in result.steps]
    final = result.instance
    lines.append(
        f"final |E|={final.matroid.size} |F|={final.free_size} "
        f"kappaQR={final.k} kappaST={final.l} ({NONE_CONSISTENT_MSG})"
    )
    return "\n".join(lines) + "\n"


def shrink_json(inst: IntertwineInstance, result: ShrinkResult) -> dict:
    final = result.instance
    return {
        "steps": [{"element": inst.matroid.labels[e], "operation": op.value} for e, op in result.steps],
        "finalSize": final.matroid.size,
        "freeSize": final.free_size,
        "kappaQR": final.k,
        "kappaST": final.l,
        "consistent": result.consistent,
    }


def format_nested(M: BaseMatroid, cert: NestedSequence, verdict: Optional[VerificationReport] = None) -> str:
    fmt = M.ground.format
    ordering = "(" + ",".join(M.labels[f] for f in cert.ordering) + ")"
    chain = "(" + ",".join(fmt(A) for A in cert.chain) + ")"
    branches = ",".join(b.value for b in cert.branch)
    if len(cert.branch) != 1:
        branches = f"({branches})"
    lines = [f"{ordering},{chain},{branches}"]
    if verdict is not None:
        for name in CONDITIONS:
            v = verdict.conditions[name]
            lines.append(f"({name}) " + ("PASS" if v.passed else f"FAIL at position {v.first_violation}"))
        lines += [f"warning: {w}" for w in verdict.warnings]
    return "\n".join(lines) + "\n"


def format_grid(extremal_or_grid) -> str:
    grid = getattr(extremal_or_grid, "grid", extremal_or_grid)
    inst = grid.instance
    lines = [
        f"grid k={grid.k} l={grid.l}: |E|={inst.matroid.size} |F|={inst.free_size}",
        inst.describe(),
    ]
    if isinstance(extremal_or_grid, ExtremalReport):
        ext = extremal_or_grid
        if ext.report.found:
            lines.append(
                FOUND_QUALIFYING_MSG.format(
                    element=inst.matroid.labels[ext.report.element],
                    operation=ext.report.operation.value,
                    count=ext.candidates,
                )
            )
        else:
            lines.append(NO_QUALIFYING_MSG.format(count=ext.candidates))
        for row in ext.table:
            lines.append(
                f"  {row.operation.value:<8} {inst.matroid.labels[row.element]:<6} "
                f"kappaQR={row.kappa_qr} kappaST={row.kappa_st}"
            )
    return "\n".join(lines) + "\n"


def format_scan(result: ScanResult) -> str:
    lines = [
        SCAN_DONE_MSG.format(
            records=len(result.records),
            flagged=len(result.flagged),
            exhausted=sum(r.budget_exhausted for r in result.records),
        )
    ]
    if len(result.summary):
        lines.append(result.summary.to_string(index=False))
    for path in result.saved:
        lines.append(f"{COUNTEREXAMPLE_MSG} {path}")
    return "\n".join(lines) + "\n"


def dumps_json(data: dict) -> str:
    return json.dumps(data, indent=2, ensure_ascii=False) + "\n"
