from __future__ import annotations
from dataclasses import asdict, dataclass, field, fields
from functools import partial
from pathlib import Path
from typing import List, Optional, Tuple
import logging
import time

import colorama
import networkx as nx
import numpy as np
import pandas as pd
from tqdm import tqdm

from . import config
from . import shared
from .errors import BudgetExhausted, InvalidRankFunction, KappaMismatch, SizeCapExceeded, TheoremViolation
from .intertwine import (
    IntertwineInstance,
    IntertwineReport,
    PairRow,
    c_bound,
    conjecture_bound,
    exhaustive_pair_table,
    find_intertwined_element,
)
from .matroids.base_matroid import BaseMatroid, validate_rank_axioms
from .matroids.matroids import GraphicMatroid, LinearMatroid, TableMatroid, UniformMatroid
from .presets import *
from .utils import Deadline, parallel_map, popcount, save_json


@dataclass
class GridInstance:
    k: int
    l: int
    instance: IntertwineInstance


def build_grid_instance(k: int, l: int) -> GridInstance:
    """Cycle matroid of the (k+1) x (l+1) vertex grid.

    Q and R are the vertical edges of the leftmost and rightmost columns, S
    and T the horizontal edges of the top and bottom rows. Edges are labelled
    ``h<row>_<col>`` / ``v<row>_<col>`` after their upper-left end.
    """
    if k < 1 or l < 1:
        raise ValueError(f"grid needs k, l >= 1, got ({k}, {l})")
    if 2 * k * l + k + l > MAX_GROUND_SIZE:
        raise SizeCapExceeded(f"the ({k}+1)x({l}+1) grid has {2 * k * l + k + l} edges")
    graph = nx.grid_2d_graph(k + 1, l + 1)
    vertex = {node: i for i, node in enumerate(sorted(graph.nodes))}
    edges, labels = [], []
    q = r = s = t = 0
    for u, v in sorted(tuple(sorted(e)) for e in graph.edges):
        j = len(edges)
        (row, col), (row2, _) = u, v
        edges.append((vertex[u], vertex[v]))
        if row == row2:
            labels.append(f"h{row}_{col}")
            s |= (row == 0) << j
            t |= (row == k) << j
        else:
            labels.append(f"v{row}_{col}")
            q |= (col == 0) << j
            r |= (col == l) << j
    matroid = GraphicMatroid(len(vertex), edges, labels)
    instance = IntertwineInstance(matroid, q, r, s, t, name=f"grid-{k}x{l}")
    found = instance.connectivities()
    if found != (k, l):
        logging.error(colorama.Back.RED + f"grid ({k}, {l}) has kappa pair {found}" + colorama.Style.RESET_ALL)
        raise KappaMismatch(f"{KAPPA_MISMATCH_MSG}: expected {(k, l)}, computed {found}")
    logging.debug(f"grid ({k}, {l}): {matroid.size} edges, |F| = {instance.free_size}")
    return GridInstance(k, l, instance)


@dataclass
class ExtremalReport:
    grid: GridInstance
    report: IntertwineReport
    table: List[PairRow]

    @property
    def candidates(self) -> int:
        return self.grid.instance.free_size


def run_extremal_check(k: int, l: int, threads=None) -> ExtremalReport:
    grid = build_grid_instance(k, l)
    inst = grid.instance
    report = find_intertwined_element(inst, threads=threads)
    table = exhaustive_pair_table(inst, fresh=True)
    if report.found != any(row.preserves for row in table):
        raise TheoremViolation("the element search and the exhaustive table disagree", inst)
    return ExtremalReport(grid, report, table)


def _range(value, name) -> Tuple[int, int]:
    if isinstance(value, int):
        value = (value, value)
    lo, hi = (int(x) for x in value)
    if lo < 0 or lo > hi:
        raise ValueError(f"{name} range must satisfy 0 <= min <= max, got {value}")
    return lo, hi


@dataclass
class ScanConfig:
    seed: int = 0
    family: str = "graphic"
    size: Tuple[int, int] = (6, 10)
    q_size: Tuple[int, int] = (1, 1)
    r_size: Tuple[int, int] = (1, 1)
    s_size: Tuple[int, int] = (1, 1)
    t_size: Tuple[int, int] = (1, 1)
    samples: int = 0
    time_budget: Optional[float] = None  # seconds per instance

    def __post_init__(self):
        if self.family not in SCAN_FAMILIES:
            raise ValueError(f"unknown instance family {self.family!r}; choose from {SCAN_FAMILIES}")
        for name in ("size", "q_size", "r_size", "s_size", "t_size"):
            setattr(self, name, _range(getattr(self, name), name))
        if self.size[1] > MAX_GROUND_SIZE:
            raise SizeCapExceeded(f"instance size {self.size[1]} exceeds the {MAX_GROUND_SIZE}-element cap")
        if self.size[0] < 1:
            raise ValueError("instances need at least one element")
        if sum(getattr(self, name)[0] for name in ("q_size", "r_size", "s_size", "t_size")) > self.size[0]:
            raise ValueError("the smallest Q, R, S, T do not fit into the smallest ground set")
        if self.samples < 0:
            raise ValueError(f"sample count must be non-negative, got {self.samples}")

    @classmethod
    def from_dict(cls, data: dict) -> "ScanConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown scan configuration keys: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def from_file(cls, path) -> "ScanConfig":
        return cls.from_dict(config.load_json_config(path))


def _draw(rng, bounds: Tuple[int, int], cap: int) -> int:
    lo, hi = bounds[0], min(bounds[1], cap)
    return int(rng.integers(lo, hi + 1))


def _random_graphic(rng, n: int) -> GraphicMatroid:
    """Random connected multigraph with n edges: a random recursive tree plus extra edges."""
    vertices = int(rng.integers(2, n + 2)) if n > 1 else 2
    edges = [(int(rng.integers(0, v)), v) for v in range(1, vertices)]
    while len(edges) < n:
        u, v = (int(x) for x in rng.choice(vertices, size=2, replace=False))
        edges.append((u, v))
    order = rng.permutation(n)
    edges = [edges[i] for i in order]
    graph = nx.MultiGraph()
    graph.add_nodes_from(range(vertices))
    graph.add_edges_from(edges)
    if not nx.is_connected(graph):
        raise RuntimeError(f"random tree construction left {vertices} vertices disconnected")
    return GraphicMatroid(vertices, edges)


def _random_linear(rng, n: int, prime: int) -> LinearMatroid:
    rows = int(rng.integers(1, max(2, n // 2 + 2)))
    return LinearMatroid(prime, rng.integers(0, prime, size=(rows, n)))


def _random_matroid(rng, family: str, n: int) -> BaseMatroid:
    if family == "graphic":
        return _random_graphic(rng, n)
    if family.startswith("linear-GF("):
        return _random_linear(rng, n, int(family[len("linear-GF(") : -1]))
    if family == "uniform":
        return UniformMatroid(int(rng.integers(0, n + 1)), n)
    raise ValueError(f"unknown instance family {family!r}")


def instance_family(scan: ScanConfig, index: int) -> str:
    rng = np.random.default_rng([scan.seed, index, 1])
    if scan.family == "uniform-mix":
        return UNIFORM_MIX_MEMBERS[int(rng.integers(0, len(UNIFORM_MIX_MEMBERS)))]
    return scan.family


def random_instance(scan: ScanConfig, index: int) -> IntertwineInstance:
    """Deterministic in (seed, index); the oracle is checked against the rank axioms."""
    if not 0 <= index < scan.samples:
        raise ValueError(f"instance index {index} outside 0..{scan.samples - 1}")
    family = instance_family(scan, index)
    rng = np.random.default_rng([scan.seed, index])
    n = _draw(rng, scan.size, MAX_GROUND_SIZE)
    sizes = []
    reserve = sum(bounds[0] for bounds in (scan.q_size, scan.r_size, scan.s_size, scan.t_size))
    left = n
    for bounds in (scan.q_size, scan.r_size, scan.s_size, scan.t_size):
        reserve -= bounds[0]
        size = _draw(rng, bounds, left - reserve)
        sizes.append(size)
        left -= size
    matroid = _random_matroid(rng, family, n)
    if n <= EXHAUSTIVE_AXIOM_LIMIT:
        table = TableMatroid.from_oracle(matroid)
        if any(table.rank(X) != matroid.rank(X) for X in range(1 << n)):
            raise InvalidRankFunction(f"{family} oracle for instance {index} disagrees with its rank table")
    else:
        validate_rank_axioms(matroid, samples=AXIOM_SAMPLES, seed=scan.seed + index)
    order = [int(i) for i in rng.permutation(n)]
    masks, start = [], 0
    for size in sizes:
        masks.append(sum(1 << i for i in order[start : start + size]))
        start += size
    return IntertwineInstance(matroid, *masks, name=f"{family}-{scan.seed}-{index}")


def conjecture_threshold(k: int, l: int) -> int:
    """Smallest |F| the conjecture speaks about; an empty F never qualifies."""
    return max(1, conjecture_bound(k, l))


def region_of(k: Optional[int], l: Optional[int], free_size: int) -> str:
    if k is None or l is None:
        return REGION_UNKNOWN
    if free_size >= c_bound(k, l):
        return REGION_GUARANTEED
    if free_size >= conjecture_threshold(k, l):
        return REGION_CONJECTURE_TO_C
    return REGION_BELOW_CONJECTURE


@dataclass
class ScanRecord:
    family: str
    seed: int
    index: int
    size: int
    q_size: int
    r_size: int
    s_size: int
    t_size: int
    k: Optional[int] = None
    l: Optional[int] = None
    free_size: int = 0
    found: bool = False
    element: str = ""
    operation: str = ""
    budget_exhausted: bool = False
    flagged: bool = False
    wall_time: float = 0.0

    @property
    def region(self) -> str:
        return region_of(self.k, self.l, self.free_size)


def evaluate_instance(scan: ScanConfig, index: int) -> ScanRecord:
    """Generate instance ``index`` and run the element search within the time budget.

    A record with no element above the conjectured bound is re-verified on a
    freshly generated copy with rank memoization off before it is flagged.
    """
    start = time.perf_counter()
    inst = random_instance(scan, index)
    M = inst.matroid
    record = ScanRecord(
        family=instance_family(scan, index),
        seed=scan.seed,
        index=index,
        size=M.size,
        q_size=popcount(inst.q),
        r_size=popcount(inst.r),
        s_size=popcount(inst.s),
        t_size=popcount(inst.t),
        free_size=inst.free_size,
    )
    deadline = Deadline(scan.time_budget)
    try:
        record.k, record.l = inst.connectivities(deadline)
        report = find_intertwined_element(inst, threads=1, deadline=deadline)
        if report.found:
            record.found = True
            record.element = M.labels[report.element]
            record.operation = report.operation.value
    except BudgetExhausted:
        record.budget_exhausted = True
    except TheoremViolation as e:
        logging.error(colorama.Back.RED + f"{inst.name}: {e}" + colorama.Style.RESET_ALL)

    if not record.found and not record.budget_exhausted and record.free_size >= conjecture_threshold(record.k, record.l):
        fresh = random_instance(scan, index)
        rows = [row for row in exhaustive_pair_table(fresh, fresh=True) if row.preserves]
        if rows:
            logging.error(f"{inst.name}: the search missed {fresh.matroid.labels[rows[0].element]}")
            record.found = True
            record.element = fresh.matroid.labels[rows[0].element]
            record.operation = rows[0].operation.value
        else:
            record.flagged = True
    record.wall_time = round(time.perf_counter() - start, 6)
    return record


@dataclass
class ScanResult:
    records: List[ScanRecord] = field(default_factory=list)
    summary: pd.DataFrame = field(default_factory=lambda: pd.DataFrame(columns=SUMMARY_COLUMNS))
    saved: List[Path] = field(default_factory=list)

    @property
    def flagged(self) -> List[ScanRecord]:
        return [r for r in self.records if r.flagged]


def records_frame(records: List[ScanRecord]) -> pd.DataFrame:
    frame = pd.DataFrame([asdict(r) for r in records], columns=SCAN_COLUMNS)
    frame[["k", "l"]] = frame[["k", "l"]].astype("Int64")
    return frame


def _plain(value):
    if value is pd.NA or value is None:
        return None
    if isinstance(value, np.integer):
        return int(value)
    return value


def summarize(records: List[ScanRecord]) -> pd.DataFrame:
    """Counts per (k, l, region); every record lands in exactly one bin."""
    if not records:
        return pd.DataFrame(columns=SUMMARY_COLUMNS)
    frame = records_frame(records)
    frame["region"] = [r.region for r in records]
    frame["records"] = 1
    summary = (
        frame.groupby(["k", "l", "region"], dropna=False)[["records", "found", "budget_exhausted", "flagged"]]
        .sum()
        .reset_index()
    )
    for column in ("records", "found", "budget_exhausted", "flagged"):
        summary[column] = summary[column].astype(int)
    return summary[SUMMARY_COLUMNS]


def conjecture_scan(scan: ScanConfig, threads=None, counterexample_dir=None) -> ScanResult:
    """Evaluate ``scan.samples`` random instances on a process pool; records come back in index order."""
    from .file_formats import write_instance

    threads = shared.state.threads if threads is None else threads
    indices = list(range(scan.samples))
    worker = partial(evaluate_instance, scan)
    records: List[ScanRecord] = []
    chunk = max(1, threads) * 4
    shared.state.recover()
    with tqdm(total=len(indices), disable=not config.show_progress, desc="scan") as progress:
        for start in range(0, len(indices), chunk):
            if shared.state.interrupted:
                logging.warning(SCAN_INTERRUPTED_MSG.format(done=len(records), total=len(indices)))
                break
            part = indices[start : start + chunk]
            try:
                records += parallel_map(worker, part, threads, processes=True)
            except KeyboardInterrupt:
                # keep the finished chunks
                shared.state.interrupt()
                continue
            progress.update(len(part))

    result = ScanResult(records, summarize(records))
    target = Path(counterexample_dir or config.counterexample_dir)
    for record in result.flagged:
        path = write_instance(target / f"{record.family}-{record.seed}-{record.index}{INSTANCE_SUFFIX}",
                              random_instance(scan, record.index))
        logging.warning(colorama.Back.YELLOW + f"{COUNTEREXAMPLE_MSG} {path}" + colorama.Style.RESET_ALL)
        result.saved.append(path)
    logging.info(
        SCAN_DONE_MSG.format(
            records=len(records),
            flagged=len(result.flagged),
            exhausted=sum(r.budget_exhausted for r in records),
        )
    )
    return result


def save_scan_results(result: ScanResult, out_dir) -> Tuple[Path, Path]:
    """CSV with one record per row and a JSON summary."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / SCAN_RECORDS_FILE
    records_frame(result.records).to_csv(csv_path, index=False)
    bins = [{key: _plain(value) for key, value in row.items()} for row in result.summary.to_dict(orient="records")]
    json_path = save_json(
        out_dir / SCAN_SUMMARY_FILE,
        {
            "records": len(result.records),
            "found": sum(r.found for r in result.records),
            "budget_exhausted": sum(r.budget_exhausted for r in result.records),
            "flagged": len(result.flagged),
            "counterexamples": [str(p) for p in result.saved],
            "bins": bins,
        },
    )
    return csv_path, json_path
