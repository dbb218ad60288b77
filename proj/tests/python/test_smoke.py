import mmwb


def test_semicircle_moments():
    out = mmwb.moments("0", ["x1^2", "x1^4", "x1^6"], order=0)
    assert out["x1^2"] == {(): "1"}
    assert out["x1^4"] == {(): "2"}
    assert out["x1^6"] == {(): "5"}


def test_quartic_first_order():
    out = mmwb.moments("x1^4", ["x1^2"], order=2)
    assert out["x1^2"][(1,)] == "-8"


def test_census():
    assert mmwb.census(["x1^4"]) == {0: 2, 1: 1}
    assert mmwb.census(["x1*x2"]) == {}


def test_sigma2_anchor():
    assert mmwb.sigma2("0", "x1^4", "x1^4", order=0) == {(): "36"}


def test_free_energy():
    r = mmwb.free_energy("x1^4", order=2)
    assert r["pass"]
    assert r["F0"][(1,)] == "-2"
    assert r["F1"][(1,)] == "-1"


def test_cli_round_trip():
    doc = mmwb.cli_json("maps", "census", "--stars", "x1^4,x1^4")
    assert doc["result"]["genus_counts"]["0"] == 36
    assert doc["manifest"]["tool_version"] == mmwb.__version__


def test_cli_error_status():
    status, _, err = mmwb.run_cli(["moments", "--potential", "(1+i)*x1*x2"])
    assert status == 2
    assert err


def test_verify_one_criterion():
    r = mmwb.verify("1")
    assert r["pass"]
