"""Hypothesis strategies for small random oracles and instances."""

from hypothesis import strategies as st

from modules.intertwine import IntertwineInstance
from modules.matroids.matroids import GraphicMatroid, LinearMatroid, TableMatroid, UniformMatroid


@st.composite
def graphic_matroids(draw, max_edges=7):
    vertices = draw(st.integers(1, 5))
    vertex = st.integers(0, vertices - 1)
    edges = draw(st.lists(st.tuples(vertex, vertex), min_size=1, max_size=max_edges))
    return GraphicMatroid(vertices, edges)


@st.composite
def uniform_matroids(draw, max_size=7):
    size = draw(st.integers(1, max_size))
    return UniformMatroid(draw(st.integers(0, size)), size)


@st.composite
def linear_matroids(draw, max_size=7):
    prime = draw(st.sampled_from([2, 3, 5]))
    rows = draw(st.integers(1, 3))
    size = draw(st.integers(1, max_size))
    entry = st.integers(0, prime - 1)
    matrix = draw(st.lists(st.lists(entry, min_size=size, max_size=size), min_size=rows, max_size=rows))
    return LinearMatroid(prime, matrix)


@st.composite
def table_matroids(draw, max_size=6):
    source = draw(st.one_of(graphic_matroids(max_size), uniform_matroids(max_size), linear_matroids(max_size)))
    return TableMatroid.from_oracle(source)


def matroids(max_size=7):
    return st.one_of(
        graphic_matroids(max_size),
        uniform_matroids(max_size),
        linear_matroids(max_size),
        table_matroids(min(max_size, 6)),
    )


@st.composite
def masks(draw, matroid):
    return draw(st.integers(0, matroid.full))


@st.composite
def pairs(draw, max_size=7):
    """A matroid with disjoint Q, R."""
    M = draw(matroids(max_size))
    roles = draw(st.lists(st.sampled_from("QR-"), min_size=M.size, max_size=M.size))
    Q = sum(1 << i for i, role in enumerate(roles) if role == "Q")
    R = sum(1 << i for i, role in enumerate(roles) if role == "R")
    return M, Q, R


@st.composite
def instances(draw, max_size=7):
    M = draw(matroids(max_size))
    q_role = draw(st.lists(st.sampled_from("QR-"), min_size=M.size, max_size=M.size))
    s_role = draw(st.lists(st.sampled_from("ST-"), min_size=M.size, max_size=M.size))
    pick = lambda roles, name: sum(1 << i for i, role in enumerate(roles) if role == name)
    return IntertwineInstance(M, pick(q_role, "Q"), pick(q_role, "R"), pick(s_role, "S"), pick(s_role, "T"))
