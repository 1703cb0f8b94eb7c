import random

import pytest

from pigeom.errors import ConfigError
from pigeom.matrix_ring import Mat
from pigeom.overconv import chern_overconvergence_check, lc_overconvergence_check

from conftest import base

W = base(5, 2, 4)


def metric_over_W(rng):
    while True:
        X = Mat.random(W, 2, rng)
        q = X + X.T
        if q.is_invertible():
            return q


def torsion_over_W(rng):
    mats = []
    for _ in range(2):
        v = rng.choice([-1, 1])
        mats.append(Mat(W, [[0, v], [-v, 0]]))
    return mats


@pytest.fixture
def data(rng):
    return metric_over_W(rng), torsion_over_W(rng)


def test_levi_civita_is_independent_of_pi(data):
    q, L = data
    rep = lc_overconvergence_check(q, L, [1, 2, 4])
    assert rep.passed, rep.to_json()
    assert rep.precision >= 1 and len(rep.contexts) == 3


def test_chern_is_independent_of_pi(data):
    q, _ = data
    assert chern_overconvergence_check(q, [1, 2, 4]).passed


def test_pi_dependent_torsion_is_flagged(data):
    q, L = data
    rep = lc_overconvergence_check(q, L, [1, 2, 4], torsion_scale=lambda ring: ring.one())
    assert not rep.passed
    assert rep.to_json()["first_disagreement"] is not None or not rep.in_W


def test_report_json_shape(data):
    q, L = data
    js = lc_overconvergence_check(q, L, [1, 2]).to_json()
    assert set(js) == {"name", "e_list", "agree", "in_W", "precision", "passed",
                       "first_disagreement", "contexts"}


def test_bad_ramification_rejected(data):
    q, L = data
    with pytest.raises(ConfigError):
        lc_overconvergence_check(q, L, [5])
    with pytest.raises(ConfigError):
        chern_overconvergence_check(q, [])
    with pytest.raises(ConfigError):
        lc_overconvergence_check(q, L[:1], [1])
