import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from hotelling_equicorr import HotellingT2Test, hotelling_t2, permutation_test
from hotelling_equicorr.exceptions import DegenerateDimension, InvalidInput


@pytest.fixture
def two_groups():
    rng = np.random.default_rng(0)
    x, y = rng.standard_normal((12, 3)), rng.standard_normal((10, 3)) + 0.8
    X = np.vstack([x, y])
    labels = np.array(["a"] * 12 + ["b"] * 10)
    return x, y, X, labels


def test_params_roundtrip():
    est = HotellingT2Test(method="permutation", n_permutations=300)
    params = est.get_params()
    assert params == {"method": "permutation", "n_permutations": 300,
                      "random_state": 20100315, "rank_tol": 1e-10}
    twin = clone(est)
    assert twin.get_params() == params
    assert est.set_params(n_permutations=400).n_permutations == 400


def test_exact_fit_matches_function(two_groups):
    x, y, X, labels = two_groups
    est = HotellingT2Test().fit(X, labels)
    assert est.result_ == hotelling_t2(x, y)
    assert est.method_ == "exact_f"
    assert list(est.classes_) == ["a", "b"]
    assert est.n_features_in_ == 3
    assert est.reject(0.05) == (est.p_value_ <= 0.05)


def test_permutation_fit_matches_function(two_groups):
    x, y, X, labels = two_groups
    est = HotellingT2Test(method="permutation", n_permutations=200, random_state=4).fit(X, labels)
    assert est.result_ == permutation_test(x, y, 200, 4)


def test_auto_switches_on_degenerate_dimension():
    rng = np.random.default_rng(1)
    X = rng.standard_normal((6, 6))
    labels = [0, 0, 0, 1, 1, 1]
    assert HotellingT2Test(n_permutations=150).fit(X, labels).method_ == "permutation"
    with pytest.raises(DegenerateDimension):
        HotellingT2Test(method="exact").fit(X, labels)


def test_validation(two_groups):
    _, _, X, labels = two_groups
    with pytest.raises(InvalidInput):
        HotellingT2Test(method="bogus").fit(X, labels)
    with pytest.raises(InvalidInput):
        HotellingT2Test().fit(X, np.arange(len(X)) % 3)
    with pytest.raises(NotFittedError):
        HotellingT2Test().reject()
