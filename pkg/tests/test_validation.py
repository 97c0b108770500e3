import numpy as np
import pytest

from streamchroma.errors import SelfLoop, VertexOutOfRange
from streamchroma.graph import EdgeStream, Graph
from streamchroma.validation import check_coloring, check_delta, check_edges


def test_check_edges_forms():
    n, e = check_edges([[0, 1], [1, 2]])
    assert n == 3 and e.dtype == np.int64 and e.shape == (2, 2)
    g = Graph.from_edges(4, [(0, 3)])
    assert check_edges(g)[0] == 4
    assert check_edges(EdgeStream(5, 2, [(0, 1)]))[0] == 5
    assert check_edges([], n_vertices=3)[1].shape == (0, 2)


def test_check_edges_errors():
    with pytest.raises(SelfLoop):
        check_edges([[1, 1]])
    with pytest.raises(VertexOutOfRange):
        check_edges([[0, 5]], n_vertices=3)
    with pytest.raises(VertexOutOfRange):
        check_edges([[-1, 2]])
    with pytest.raises(ValueError):
        check_edges([[0, 1, 2]])
    with pytest.raises(ValueError):
        check_edges([[0.5, 1]])


def test_check_delta():
    e = np.array([[0, 1], [0, 2]])
    assert check_delta(None, 3, e) == 2
    assert check_delta(5, 3, e) == 5
    with pytest.raises(ValueError):
        check_delta(1, 3, e)


def test_check_coloring():
    assert check_coloring([1, 0, 2], 3).tolist() == [1, 0, 2]
    for bad in ([1, 2], [1.5, 1, 1], [-1, 1, 1]):
        with pytest.raises(ValueError):
            check_coloring(bad, 3)
