import json

import pytest

sf = pytest.importorskip("schemefactor")


def test_factor_cubic():
    res = sf.factor(7, [-1, 0, 0, 1], m=2)
    assert res["status"] == "factored"
    assert res["factor"] == [6, 1]
    assert sorted(p[0] for p in res["parts"]) == [3, 5, 6]
    assert json.loads(res["log"])[0]["event"] == "field"


def test_factor_quadratic_least_root():
    assert sf.factor(13, [1, 0, 1], m=2)["factor"] == [8, 1]


def test_not_split():
    with pytest.raises(sf.SchemeFactorError, match="NotSplit"):
        sf.factor(7, [1, 0, 1])


def test_prime_degree():
    res = sf.prime_degree_factor(11, [-1, 0, 0, 0, 0, 1], r=2, ell=1)
    assert res["factor"] == [10, 1]
    with pytest.raises(sf.SchemeFactorError, match="NotPrimeDegree"):
        sf.prime_degree_factor(7, [-1, 0, 0, 0, 0, 0, 1], r=2, ell=1)


def test_number_theory():
    assert sf.smooth_divisor(12, 3) == 12
    assert sf.smooth_divisor(21, 2) == 1
    assert sf.linnik_p1s(8) == 17
    assert sf.linnik_p1s(1) == 2


def test_schemes():
    assert sf.cyclotomic_valencies(13, 6) == [1, 2, 2, 2, 2, 2, 2]
    z5 = sf.orbit_scan("Z5", 4)
    assert z5["homogeneous"] and z5["antisymmetric"] and z5["matchings"] > 0
    assert not sf.orbit_scan("Z6", 4)["antisymmetric"]
