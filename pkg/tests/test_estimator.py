import numpy as np
import pytest
from sklearn.exceptions import NotFittedError

from streamchroma import IncompleteColoring, StreamingColorer
from streamchroma.graph import verify_coloring

from conftest import planted


def test_fit_predict_on_planted():
    g, _ = planted(32, 0)
    est = StreamingColorer(delta=32, seed=0)
    try:
        colors = est.fit_predict(g.edge_array())
    except IncompleteColoring as exc:
        assert exc.status != "colored"
        return
    assert verify_coloring(g, colors, 31).ok
    assert est.q_ == 31 and est.n_colors_ <= 31 and est.status_ == "colored"


def test_predict_before_fit():
    with pytest.raises(NotFittedError):
        StreamingColorer().predict()


def test_small_graph_uses_exact_fallback():
    edges = np.array([(i, (i + 1) % 7) for i in range(7)])
    est = StreamingColorer(delta=5).fit(edges)
    assert est.status_ == "colored" and est.colors_.max() <= 4


def test_unsat_raises_unless_allowed():
    k5 = np.array([(a, b) for a in range(5) for b in range(a + 1, 5)])
    with pytest.raises(IncompleteColoring):
        StreamingColorer().fit(k5)
    est = StreamingColorer(allow_incomplete=True).fit(k5)
    assert est.status_ == "fallback-unsat"


def test_get_params_roundtrip():
    est = StreamingColorer(delta=9, seed=4, rho=4)
    assert est.get_params()["seed"] == 4
    assert StreamingColorer(**est.get_params()).get_params() == est.get_params()
