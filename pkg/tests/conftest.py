import os
from pathlib import Path

# messages are compared verbatim, so pin the language before modules.presets is imported
os.environ["INTERTWINE_LANGUAGE"] = "en_US"
os.environ.setdefault("INTERTWINE_THREADS", "1")

import pytest

from modules.intertwine import IntertwineInstance
from modules.matroids.matroids import GraphicMatroid, LinearMatroid, UniformMatroid

INSTANCE_DIR = Path(__file__).resolve().parent.parent / "instances"


@pytest.fixture
def instance_dir():
    return INSTANCE_DIR


@pytest.fixture
def c4():
    return GraphicMatroid(4, [(0, 1), (1, 2), (2, 3), (3, 0)])


@pytest.fixture
def p4():
    return GraphicMatroid(5, [(0, 1), (1, 2), (2, 3), (3, 4)])


@pytest.fixture
def k3():
    return GraphicMatroid(3, [(0, 1), (1, 2), (0, 2)])


@pytest.fixture
def k4():
    return GraphicMatroid(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])


@pytest.fixture
def u24():
    return UniformMatroid(2, 4)


@pytest.fixture
def fano():
    return LinearMatroid(2, [[1, 0, 0, 1, 1, 0, 1], [0, 1, 0, 1, 0, 1, 1], [0, 0, 1, 0, 1, 1, 1]])


@pytest.fixture
def c4_instance(c4):
    return IntertwineInstance(c4, q=0b0001, r=0b0100, s=0b0010, t=0b1000)


@pytest.fixture
def loop_instance():
    # C4 plus a loop e5, which is the only element of F
    M = GraphicMatroid(4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 0)])
    return IntertwineInstance(M, q=0b00001, r=0b00100, s=0b00010, t=0b01000)
