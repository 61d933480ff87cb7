"""Line-oriented text formats for matroids and intertwining instances.

A matroid file starts with ``type`` and carries a type-specific body::

    # the 4-cycle
    type graphic
    vertices 4
    edges
    0 1
    1 2
    2 3
    3 0
    labels a b c d

An instance file adds the four sets by label, and either inlines a matroid
body or points at a matroid file with ``matroid <path>`` (relative to the
instance file).
"""

from __future__ import annotations
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple
import logging

from .errors import ParseError, SizeCapExceeded
from .intertwine import IntertwineInstance
from .matroids.base_matroid import BaseMatroid, MatroidType, default_labels
from .matroids.matroids import GraphicMatroid, LinearMatroid, TableMatroid, UniformMatroid, get_matroid
from .presets import TABLE_MAX_SIZE

MATROID_DIRECTIVES = {"type", "field", "rows", "matrix", "vertices", "edges", "rank", "size", "labels"}
SET_DIRECTIVES = ("Q", "R", "S", "T")
FILE_TYPES = {
    MatroidType.Uniform: "uniform",
    MatroidType.Graphic: "graphic",
    MatroidType.Linear: "linear",
    MatroidType.Table: "table",
}

Line = Tuple[int, List[str]]


def _tokenize(text: str) -> List[Line]:
    lines = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split("#", 1)[0].split()
        if tokens:
            lines.append((line_no, tokens))
    return lines


def _int(token: str, line_no: int, what: str) -> int:
    try:
        return int(token, 0)
    except ValueError:
        raise ParseError(f"{what} must be an integer, got {token!r}", line_no) from None


def _single(tokens: List[str], line_no: int) -> int:
    if len(tokens) != 2:
        raise ParseError(f"'{tokens[0]}' takes exactly one value", line_no)
    return _int(tokens[1], line_no, tokens[0])


@dataclass
class MatroidFile:
    matroid_type: MatroidType
    params: Dict[str, Any] = field(default_factory=dict)
    labels: Optional[List[str]] = None

    @classmethod
    def parse(cls, text: str) -> "MatroidFile":
        return cls._from_lines(_tokenize(text))

    @classmethod
    def _from_lines(cls, lines: List[Line]) -> "MatroidFile":
        if not lines:
            raise ParseError("empty matroid description")
        first_no, first = lines[0]
        if first[0] != "type" or len(first) != 2:
            raise ParseError("the first directive must be 'type <linear|graphic|uniform|table>'", first_no)
        matroid_type = MatroidType.get_type(first[1])
        if matroid_type not in FILE_TYPES:
            raise ParseError(f"unknown matroid type {first[1]!r}", first_no)

        values: Dict[str, Tuple[int, int]] = {}
        body: List[Line] = []
        block = None
        labels = None
        for line_no, tokens in lines[1:]:
            head = tokens[0]
            if head not in MATROID_DIRECTIVES:
                if block is None:
                    raise ParseError(f"unexpected line starting with {head!r}", line_no)
                body.append((line_no, tokens))
                continue
            if head == "type":
                raise ParseError("'type' may appear only once", line_no)
            if head == "labels":
                labels = tokens[1:]
                block = None
            elif head in ("matrix", "edges"):
                if len(tokens) != 1:
                    raise ParseError(f"'{head}' takes no value; its rows follow on the next lines", line_no)
                block = head
            else:
                values[head] = (_single(tokens, line_no), line_no)
                block = "table" if head == "size" and matroid_type == MatroidType.Table else None

        def need(key):
            if key not in values:
                raise ParseError(f"missing '{key}' directive for type {first[1]}", first_no)
            return values[key][0]

        params: Dict[str, Any] = {}
        if matroid_type == MatroidType.Uniform:
            params = {"rank": need("rank"), "size": need("size")}
        elif matroid_type == MatroidType.Graphic:
            edges = []
            for line_no, tokens in body:
                if len(tokens) != 2:
                    raise ParseError("an edge line needs two vertex numbers 'u v'", line_no)
                edges.append((_int(tokens[0], line_no, "vertex"), _int(tokens[1], line_no, "vertex")))
            params = {"vertices": need("vertices"), "edges": edges}
        elif matroid_type == MatroidType.Linear:
            rows = need("rows")
            matrix = [_matrix_row(tokens, line_no) for line_no, tokens in body]
            if len(matrix) != rows:
                raise ParseError(f"'rows {rows}' but {len(matrix)} matrix rows follow", values["rows"][1])
            widths = {len(row) for row in matrix}
            if len(widths) > 1:
                raise ParseError(f"matrix rows have different lengths {sorted(widths)}", body[0][0])
            params = {"field": need("field"), "matrix": matrix}
        else:
            size = need("size")
            if size > TABLE_MAX_SIZE:
                raise SizeCapExceeded(f"rank tables are limited to {TABLE_MAX_SIZE} elements, got {size}")
            ranks: List[Optional[int]] = [None] * (1 << size)
            for line_no, tokens in body:
                if len(tokens) != 2:
                    raise ParseError("a table line needs 'mask rank'", line_no)
                mask = _int(tokens[0], line_no, "mask")
                if not 0 <= mask < len(ranks):
                    raise ParseError(f"mask {mask} is outside 0..{len(ranks) - 1}", line_no)
                if ranks[mask] is not None:
                    raise ParseError(f"mask {mask} appears twice", line_no)
                ranks[mask] = _int(tokens[1], line_no, "rank")
            missing = [mask for mask, value in enumerate(ranks) if value is None]
            if missing:
                raise ParseError(f"table is missing {len(missing)} masks, first {missing[0]}", values["size"][1])
            params = {"ranks": ranks}
        return cls(matroid_type, params, labels)

    @classmethod
    def from_matroid(cls, matroid: BaseMatroid) -> "MatroidFile":
        """Describe a concrete oracle; views are materialized as rank tables."""
        labels = list(matroid.labels)
        if tuple(labels) == default_labels(matroid.size):
            labels = None
        if isinstance(matroid, UniformMatroid):
            return cls(MatroidType.Uniform, {"rank": matroid.r, "size": matroid.size}, labels)
        if isinstance(matroid, GraphicMatroid):
            return cls(MatroidType.Graphic, {"vertices": matroid.vertex_count, "edges": list(matroid.edges)}, labels)
        if isinstance(matroid, LinearMatroid):
            return cls(MatroidType.Linear, {"field": matroid.prime, "matrix": matroid.matrix.tolist()}, labels)
        if isinstance(matroid, TableMatroid):
            return cls(MatroidType.Table, {"ranks": list(matroid.table)}, labels)
        if matroid.size > TABLE_MAX_SIZE:
            raise SizeCapExceeded(f"cannot write {matroid!r} as a table of more than {TABLE_MAX_SIZE} elements")
        return cls(MatroidType.Table, {"ranks": [matroid.rank(X) for X in range(1 << matroid.size)]}, labels)

    def build(self) -> BaseMatroid:
        return get_matroid(self.matroid_type, labels=self.labels, **self.params)

    def dumps(self) -> str:
        lines = [f"type {FILE_TYPES[self.matroid_type]}"]
        p = self.params
        if self.matroid_type == MatroidType.Uniform:
            lines += [f"rank {p['rank']}", f"size {p['size']}"]
        elif self.matroid_type == MatroidType.Graphic:
            lines += [f"vertices {p['vertices']}", "edges"]
            lines += [f"{u} {v}" for u, v in p["edges"]]
        elif self.matroid_type == MatroidType.Linear:
            lines += [f"field {p['field']}", f"rows {len(p['matrix'])}", "matrix"]
            lines += ["".join(str(int(x)) for x in row) for row in p["matrix"]]
        else:
            ranks = p["ranks"]
            lines.append(f"size {len(ranks).bit_length() - 1}")
            lines += [f"{mask} {rank}" for mask, rank in enumerate(ranks)]
        if self.labels is not None:
            lines.append("labels " + " ".join(self.labels))
        return "\n".join(lines) + "\n"


def _matrix_row(tokens: List[str], line_no: int) -> List[int]:
    # "1011" and "1 0 1 1" are both accepted
    digits = list(tokens[0]) if len(tokens) == 1 else tokens
    return [_int(d, line_no, "matrix entry") for d in digits]


@dataclass
class InstanceFile:
    matroid_file: MatroidFile
    sets: Dict[str, List[str]]
    matroid_path: Optional[str] = None
    set_lines: Dict[str, int] = field(default_factory=dict, compare=False)

    @classmethod
    def parse(cls, text: str, base_dir: Optional[Path] = None) -> "InstanceFile":
        matroid_lines: List[Line] = []
        sets: Dict[str, List[str]] = {}
        set_lines: Dict[str, int] = {}
        matroid_path = None
        for line_no, tokens in _tokenize(text):
            head = tokens[0]
            if head in SET_DIRECTIVES:
                if head in sets:
                    raise ParseError(f"'{head}' is given twice", line_no)
                sets[head] = tokens[1:]
                set_lines[head] = line_no
            elif head == "matroid":
                if len(tokens) != 2:
                    raise ParseError("'matroid' takes one path", line_no)
                matroid_path = tokens[1]
            else:
                matroid_lines.append((line_no, tokens))
        missing = [name for name in SET_DIRECTIVES if name not in sets]
        if missing:
            raise ParseError(f"missing set directive(s): {' '.join(missing)}")
        if matroid_path is not None:
            if matroid_lines:
                raise ParseError("an instance either references a matroid file or inlines one", matroid_lines[0][0])
            target = Path(base_dir or ".") / matroid_path
            matroid_file = read_matroid_file(target)
        else:
            matroid_file = MatroidFile._from_lines(matroid_lines)
        return cls(matroid_file, sets, matroid_path, set_lines)

    @classmethod
    def from_instance(cls, inst: IntertwineInstance) -> "InstanceFile":
        labels_of = inst.matroid.ground.labels_of
        sets = {"Q": labels_of(inst.q), "R": labels_of(inst.r), "S": labels_of(inst.s), "T": labels_of(inst.t)}
        return cls(MatroidFile.from_matroid(inst.matroid), sets)

    def build(self, name: str = "") -> IntertwineInstance:
        matroid = self.matroid_file.build()
        masks = {}
        for key in SET_DIRECTIVES:
            try:
                masks[key] = matroid.ground.mask_of(self.sets[key])
            except ValueError as e:
                raise ParseError(str(e), self.set_lines.get(key)) from None
            if len(set(self.sets[key])) != len(self.sets[key]):
                raise ParseError(f"'{key}' lists an element twice", self.set_lines.get(key))
        return IntertwineInstance(matroid, masks["Q"], masks["R"], masks["S"], masks["T"], name)

    def dumps(self) -> str:
        if self.matroid_path is not None:
            text = f"matroid {self.matroid_path}\n"
        else:
            text = self.matroid_file.dumps()
        for key in SET_DIRECTIVES:
            text += " ".join([key] + list(self.sets[key])) + "\n"
        return text


def read_matroid_file(path) -> MatroidFile:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ParseError(f"cannot read matroid file {path}: {e.strerror}") from None
    return MatroidFile.parse(text)


def read_matroid(path) -> BaseMatroid:
    return read_matroid_file(path).build()


def write_matroid(path, matroid: BaseMatroid) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(MatroidFile.from_matroid(matroid).dumps(), encoding="utf-8")
    return path


def read_instance(path) -> IntertwineInstance:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ParseError(f"cannot read instance file {path}: {e.strerror}") from None
    instance = InstanceFile.parse(text, base_dir=path.parent).build(name=path.stem)
    logging.debug(f"loaded {path}: {instance.describe()}")
    return instance


def write_instance(path, inst: IntertwineInstance) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(InstanceFile.from_instance(inst).dumps(), encoding="utf-8")
    logging.debug(f"wrote {path}")
    return path
