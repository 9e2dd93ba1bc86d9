import json
import math
import os

import pytest

import exptract

DYADIC = {"family": "ExpPower", "alpha": math.log(2), "beta": 1}
ONES = {"family": "ConstantOne"}


def test_dyadic_count_is_six():
    n, nodes, m = exptract.count(DYADIC, ONES, 0.5 * math.log(5), 2)
    assert n == 6
    assert m == 2


def test_matches_brute_force():
    gam = {"family": "Tabulated", "values": [math.log(2), 2 * math.log(2)]}
    E = 0.5 * math.log(16)
    assert exptract.count(DYADIC, gam, E, 2)[0] == 4
    assert exptract.brute_force_count(DYADIC, gam, E, 2, 8) == 4


def test_large_counts_are_exact_ints():
    lam = {"family": "PowerLaw", "a": 1}
    n, _, _ = exptract.count(lam, ONES, 15.0, 1)
    assert isinstance(n, int) and n > 2**40
    assert n == exptract.j_of_eps(lam, 15.0) == math.ceil(math.exp(30.0)) - 1


def test_example_thresholds():
    lam = {"family": "DoubleExpPower", "alpha": 1, "beta": 1}
    gam = {"family": "DoubleExpPower", "alpha": 1, "beta": 2, "normalize": False}
    assert exptract.j_of_eps(lam, 100.0) == 5
    assert exptract.d_of_eps(gam, 100.0) == 2


def test_classify_spt():
    lam = {"family": "DoubleExpPower", "alpha": 1, "beta": 1}
    gam = {"family": "DoubleExpPower", "alpha": 1, "beta": 2, "normalize": False}
    v = exptract.classify(lam, gam, "EXP-SPT")
    assert v["status"] == "Holds"
    assert v["mode"] == "analytic"
    assert v["exponent"] == 0


def test_unsupported_notion_raises():
    with pytest.raises(exptract.ExptractError, match="UnsupportedNotion"):
        exptract.classify(DYADIC, ONES, "EXP-(s,t)-WT", 0.5, 0.5)


def test_top_costs_sorted():
    costs = exptract.top_costs(DYADIC, ONES, 2, 6)
    assert costs == sorted(costs)
    assert costs[0] == 0.0


def test_run_count_csv():
    cfg = {"schema": 1, "lambda": DYADIC, "gamma": ONES,
           "queries": {"E": [0.5 * math.log(5)], "d": [2]}}
    code, text = exptract.run("count", cfg)
    assert code == 0
    lines = text.strip().splitlines()
    assert lines[0].startswith("E,d,jE,dE,count")
    assert lines[1].split(",")[4] == "6"


def test_bad_config_rejected():
    with pytest.raises(exptract.ExptractError, match="ConfigError"):
        exptract.run("count", {"schema": 1, "lambda": DYADIC, "gamma": ONES,
                               "queries": {"E": [-1.0], "d": [2]}})


def test_shipped_config_runs():
    cdir = os.environ.get("EXPTRACT_CONFIG_DIR")
    if not cdir:
        pytest.skip("config dir not provided")
    with open(os.path.join(cdir, "double_exp_beta1.json")) as f:
        cfg = json.load(f)
    code, text = exptract.run("classify", cfg, cdir)
    doc = json.loads(text)
    by_notion = {v["notion"]: v for v in doc["verdicts"]}
    assert by_notion["EXP-QPT"]["status"] == "Holds"
    assert by_notion["EXP-QPT"]["exponent"] == 1
    assert by_notion["EXP-SPT"]["status"] == "Fails"
