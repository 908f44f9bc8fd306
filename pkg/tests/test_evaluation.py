import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rocscale.errors import SingleClassError
from rocscale.evaluation import auc_standard_error, confusion_at, empirical_auc, roc_curve

from conftest import brute_auc


def test_auc_hand_example():
    scores = [0.9, 0.4, 0.5, 0.1]
    labels = [1, 1, -1, -1]
    assert empirical_auc(scores, labels) == 0.75
    assert brute_auc(scores, labels) == 0.75


def test_auc_perfect_and_constant():
    assert empirical_auc([3, 2, 1, 0], [1, 1, -1, -1]) == 1.0
    assert empirical_auc([5.0] * 6, [1, -1, 1, -1, -1, -1]) == 0.5


def test_single_class_rejected():
    with pytest.raises(SingleClassError):
        empirical_auc([1, 2, 3], [1, 1, 1])


@st.composite
def scored_labels(draw):
    n = draw(st.integers(2, 60))
    labels = draw(st.lists(st.sampled_from([-1, 1]), min_size=n, max_size=n))
    labels[0], labels[1] = 1, -1
    # small integer range forces plenty of ties
    scores = draw(st.lists(st.integers(-5, 5) | st.floats(-3, 3), min_size=n, max_size=n))
    return np.array(scores, dtype=float), np.array(labels)


@settings(max_examples=200, deadline=None)
@given(scored_labels())
def test_rank_auc_equals_pairwise_count(case):
    scores, labels = case
    assert empirical_auc(scores, labels) == brute_auc(scores, labels)


@settings(max_examples=100, deadline=None)
@given(scored_labels())
def test_trapezoid_matches_rank_auc(case):
    scores, labels = case
    curve = roc_curve(scores, labels)
    assert curve.auc_trapezoid == pytest.approx(empirical_auc(scores, labels), abs=1e-10)
    assert curve.points[0] == (0.0, 0.0) and curve.points[-1] == (1.0, 1.0)
    assert np.all(np.diff(curve.fpr) >= 0) and np.all(np.diff(curve.tpr) >= 0)


@settings(max_examples=100, deadline=None)
@given(scored_labels())
def test_monotone_transform_and_reversal(case):
    scores, labels = case
    auc = empirical_auc(scores, labels)
    # strictly increasing map applied to the distinct values, immune to rounding collisions
    _, dense = np.unique(scores, return_inverse=True)
    assert empirical_auc(np.exp(dense / 7.0) * 2 + 1, labels) == auc
    assert empirical_auc(-scores, labels) == pytest.approx(1.0 - auc, abs=1e-15)


def test_roc_perfect_two_points():
    curve = roc_curve([1.0, 0.0], [1, -1])
    assert curve.points == [(0.0, 0.0), (0.0, 1.0), (1.0, 1.0)]
    assert curve.auc_trapezoid == 1.0


def test_roc_hand_example():
    curve = roc_curve([0.9, 0.4, 0.5, 0.1], [1, 1, -1, -1])
    assert curve.points == [(0.0, 0.0), (0.0, 0.5), (0.5, 0.5), (0.5, 1.0), (1.0, 1.0)]
    assert curve.auc_trapezoid == 0.75


def test_roc_reversed_scores():
    rng = np.random.default_rng(0)
    s = rng.standard_normal(40)
    y = np.where(rng.random(40) < 0.3, 1, -1)
    y[:2] = [1, -1]
    assert roc_curve(-s, y).auc_trapezoid == pytest.approx(1 - roc_curve(s, y).auc_trapezoid, abs=1e-12)


def test_roc_csv(tmp_path):
    path = tmp_path / "roc.csv"
    roc_curve([0.9, 0.4, 0.5, 0.1], [1, 1, -1, -1]).to_csv(path)
    lines = path.read_text().splitlines()
    assert lines[0] == "fpr,tpr"
    assert lines[1] == "0.0,0.0" and lines[-1] == "1.0,1.0"


def test_confusion_extremes_and_hand_count():
    s = np.array([0.9, 0.4, 0.5, 0.1])
    y = np.array([1, 1, -1, -1])
    assert confusion_at(s, y, -1.0) == {"tpr": 1.0, "fpr": 1.0, "accuracy": 0.5}
    assert confusion_at(s, y, 2.0) == {"tpr": 0.0, "fpr": 0.0, "accuracy": 0.5}
    # threshold 0.45: predicted positive {0.9, 0.5}
    assert confusion_at(s, y, 0.45) == {"tpr": 0.5, "fpr": 0.5, "accuracy": 0.5}
    # strict inequality: a score equal to the threshold is negative
    assert confusion_at(s, y, 0.5)["fpr"] == 0.0


def test_delong_se_constant_and_shrinking():
    auc, se = auc_standard_error([1.0] * 10, [1, -1] * 5)
    assert auc == 0.5 and se == 0.0
    rng = np.random.default_rng(1)
    ses = []
    for n in (200, 2000, 20000):
        y = np.where(rng.random(n) < 0.3, 1, -1)
        s = rng.standard_normal(n) + (y > 0)
        a, se = auc_standard_error(s, y)
        assert a == pytest.approx(empirical_auc(s, y), abs=1e-12)
        ses.append(se)
    assert ses[0] > ses[1] > ses[2] > 0
