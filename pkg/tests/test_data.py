import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from rocscale.data import (
    Dataset,
    SyntheticSpec,
    calibrate_offset,
    generate,
    generate_latent,
    load_csv,
    mc_population_auc,
    parse_label_map,
    true_score,
    write_csv,
    Scenario,
)
from rocscale.errors import LabelError, NoBracketError, ParseError, SingleClassError

from conftest import quad_neg_fraction, quad_population_auc

# bisection on the fixed 1e6-draw calibration sample, frozen
RADIAL_OFFSET_GOLDEN = -3.473109563747201
LINEAR_OFFSET_GOLDEN = -1.457476712622352


def test_dataset_counts_and_freeze():
    ds = Dataset([[0.0], [1.0], [2.0]], [1, -1, 1])
    assert (ds.n, ds.n_pos, ds.n_neg, ds.p) == (3, 2, 1, 1)
    assert ds.pos_idx.tolist() == [0, 2] and ds.neg_idx.tolist() == [1]
    with pytest.raises(ValueError):
        ds.features[0, 0] = 5.0


def test_dataset_rejects_bad_values():
    with pytest.raises(ValueError):
        Dataset([[np.nan]], [1])
    with pytest.raises(LabelError):
        Dataset([[0.0], [1.0]], [0, 1])


def test_single_class_only_at_training_time():
    ds = Dataset([[0.0], [1.0]], [1, 1])
    with pytest.raises(SingleClassError):
        ds.require_both_classes()


def test_load_csv_three_rows(tmp_path):
    path = tmp_path / "d.csv"
    path.write_text("a,b,y\n1.0,2.0,1\n3.0,4.0,-1\n5.0,6.0,1\n")
    ds = load_csv(path)
    assert (ds.n, ds.n_pos, ds.n_neg) == (3, 2, 1)
    assert ds.features.tolist() == [[1.0, 2.0], [3.0, 4.0], [5.0, 6.0]]


def test_load_csv_bad_cell_names_location(tmp_path):
    path = tmp_path / "d.csv"
    path.write_text("a,y\n1.0,1\nabc,-1\n")
    with pytest.raises(ParseError, match=r"row 3, column 0"):
        load_csv(path)


def test_load_csv_label_map_and_named_column(tmp_path):
    path = tmp_path / "d.csv"
    path.write_text("y,a\n0,1.5\n1,2.5\n0,3.5\n")
    ds = load_csv(path, label_column="y", label_map=parse_label_map("0:-1,1:1"))
    assert ds.labels.tolist() == [-1, 1, -1]
    assert ds.features[:, 0].tolist() == [1.5, 2.5, 3.5]
    with pytest.raises(LabelError):
        load_csv(path, label_column="y")


def test_load_csv_ragged(tmp_path):
    path = tmp_path / "d.csv"
    path.write_text("1,2,1\n3,-1\n")
    with pytest.raises(ParseError):
        load_csv(path)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 20), st.integers(1, 4), st.integers(0, 2**32 - 1))
def test_csv_round_trip(tmp_path_factory, n, p, seed):
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((n, p)) * 10.0 ** rng.integers(-300, 300, size=(n, p))
    y = np.where(rng.random(n) < 0.5, 1, -1)
    ds = Dataset(x, y)
    path = tmp_path_factory.mktemp("rt") / "d.csv"
    write_csv(ds, path)
    back = load_csv(path)
    assert np.array_equal(back.features, ds.features)
    assert np.array_equal(back.labels, ds.labels)


def test_linear_offset_closed_form():
    alpha = calibrate_offset(SyntheticSpec("linear", 10))
    closed = -np.sqrt(3.0) * stats.norm.ppf(0.8)
    assert closed == pytest.approx(-1.4577, abs=1e-4)
    # analytic negative fraction at the calibrated offset
    assert abs(stats.norm.cdf(-alpha / np.sqrt(3.0)) - 0.8) < 0.005
    assert alpha == pytest.approx(LINEAR_OFFSET_GOLDEN, abs=1e-9)


def test_linear_offset_symmetric_case():
    alpha = calibrate_offset(SyntheticSpec("linear", 10, target_neg_fraction=0.5))
    assert abs(alpha) < 0.01
    assert abs(quad_neg_fraction("linear", alpha) - 0.5) < 0.005


def test_radial_offset_golden_and_quadrature():
    alpha = calibrate_offset(SyntheticSpec("radial", 10))
    assert alpha == pytest.approx(RADIAL_OFFSET_GOLDEN, abs=1e-9)
    assert abs(quad_neg_fraction("radial", alpha) - 0.8) < 0.005


def test_calibration_unbracketed():
    with pytest.raises(NoBracketError):
        calibrate_offset(SyntheticSpec("radial", 10, target_neg_fraction=0.01), bracket=(-1.0, 1.0))
    with pytest.raises(ValueError):
        calibrate_offset(SyntheticSpec("linear", 10), mc_samples=100)


@pytest.mark.parametrize("seed", [0, 1, 2, 3])
def test_generate_negative_fraction_band(seed):
    ds = generate(SyntheticSpec("linear", 1000, seed=seed))
    assert 0.76 <= ds.n_neg / ds.n <= 0.84


def test_generate_large_sample_matches_analytic():
    alpha = calibrate_offset(SyntheticSpec("linear", 10))
    n = 20_000
    ds = generate(SyntheticSpec("linear", n, seed=11))
    p = stats.norm.cdf(-alpha / np.sqrt(3.0))
    assert abs(ds.n_neg / n - p) <= 3 * np.sqrt(p * (1 - p) / n)


@pytest.mark.parametrize("scenario", ["linear", "radial"])
def test_generate_deterministic(scenario):
    a = generate(SyntheticSpec(scenario, 500, seed=7))
    b = generate(SyntheticSpec(scenario, 500, seed=7))
    c = generate(SyntheticSpec(scenario, 500, seed=8))
    assert np.array_equal(a.features, b.features) and np.array_equal(a.labels, b.labels)
    assert not np.array_equal(a.features, c.features)


def test_radial_labels_replay_latent_rule():
    spec = SyntheticSpec("radial", 2000, seed=3)
    x, eps, y = generate_latent(spec)
    alpha = calibrate_offset(spec)
    assert np.array_equal(y, np.where(alpha + (x ** 2).sum(1) + eps > 0, 1, -1))
    assert np.array_equal(generate(spec).features, x)


def test_fixed_offset_bypasses_calibration():
    x, eps, y = generate_latent(SyntheticSpec("linear", 300, offset=0.25, seed=5))
    assert np.array_equal(y, np.where(0.25 + x.sum(1) + eps > 0, 1, -1))


def test_constant_scorer_population_auc():
    auc, se = mc_population_auc(SyntheticSpec("linear", 10), lambda x: np.zeros(len(x)), 10_000)
    assert auc == 0.5 and se == 0.0


@pytest.mark.parametrize("scenario", ["linear", "radial"])
def test_true_scorer_population_auc_matches_quadrature(scenario):
    spec = SyntheticSpec(scenario, 10, seed=123)
    alpha = calibrate_offset(spec)
    auc, se = mc_population_auc(spec, lambda x: true_score(Scenario(scenario), x))
    assert 0 < se < 1e-3
    assert abs(auc - quad_population_auc(scenario, alpha)) < 4 * se


@pytest.mark.xfail(strict=True, reason="published reference AUCs disagree with the stated "
                   "generating model; see the decisions ledger")
@pytest.mark.parametrize("scenario,published", [("linear", 0.90377), ("radial", 0.90985)])
def test_published_population_auc(scenario, published):
    spec = SyntheticSpec(scenario, 10, seed=123)
    auc, se = mc_population_auc(spec, lambda x: true_score(Scenario(scenario), x))
    assert abs(auc - published) < 4 * se
