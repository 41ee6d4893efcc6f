import csv
import json

import pytest

from padic_kirillov.cli import main
from padic_kirillov.errors import SchemaError
from padic_kirillov.io import load_newform, parse_newform
from padic_kirillov.qexp import tau


def _count_points(p):
    # affine solutions of y^2 = x^3 - x over F_p, plus the point at infinity
    return 1 + sum(1 for x in range(p) for y in range(p) if (y * y - x**3 + x) % p == 0)


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 97])
def test_cm_dataset_matches_point_counts(p):
    f = load_newform("cm_32a")
    assert f.a(p) == p + 1 - _count_points(p)
    if p % 4 == 3:
        assert f.a(p) == 0


def test_delta_dataset():
    f = load_newform("delta")
    assert f.N == 1000 and f.a(997) == tau(997)
    assert f.metadata["name"] == "Delta"


def _doc(**kw):
    d = {"level": 1, "weight": 12, "nebentypus": {"modulus": 1, "values": []},
         "coeffs": [str(tau(n)) for n in range(1, 50)]}
    d.update(kw)
    return d


def test_schema_errors_name_the_field():
    with pytest.raises(SchemaError, match="weight"):
        parse_newform(_doc(weight="twelve"))
    with pytest.raises(SchemaError, match="coeffs/3"):
        parse_newform(_doc(coeffs=["1", "2", "3", "x4"]))
    with pytest.raises(SchemaError, match="a_1"):
        parse_newform(_doc(coeffs=["2", "0"]))


def test_missing_nebentypus_and_multiplicativity_warn():
    d = _doc()
    del d["nebentypus"]
    assert any("nebentypus" in w for w in parse_newform(d).warnings)
    bad = _doc()
    bad["coeffs"] = list(bad["coeffs"])
    bad["coeffs"][5] = "7"
    assert any("multiplicativity" in w for w in parse_newform(bad).warnings)
    with pytest.raises(SchemaError):
        parse_newform(bad, strict=True)


def _run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_cli_ingest(tmp_path, capsys):
    path = tmp_path / "f.json"
    path.write_text(json.dumps(_doc()))
    code, out, _ = _run(capsys, "ingest", str(path))
    assert code == 0 and json.loads(out)["data"]["weight"] == 12
    path.write_text("{not json")
    code, _, err = _run(capsys, "ingest", str(path))
    assert code == 2 and "error" in err
    code, _, _ = _run(capsys, "ingest", str(tmp_path / "missing.json"))
    assert code == 2


def test_cli_config_errors(capsys):
    assert _run(capsys, "verify", "-k", "0")[0] == 2
    assert _run(capsys, "verify", "-p", "4")[0] == 2
    assert _run(capsys, "predict", "--form", "cm_32a", "-p", "2")[0] == 2


def test_cli_predict_deterministic(capsys, tmp_path):
    code, a, _ = _run(capsys, "predict", "-p", "11", "-k", "5")
    code2, b, _ = _run(capsys, "predict", "-p", "11", "-k", "5")
    assert code == code2 == 0 and a == b
    rep = json.loads(a)
    assert rep["metadata"]["command"] == "predict"
    assert rep["data"]["ordinary"] and len(rep["data"]["predicted_lower"]) == 1
    out = tmp_path / "r.json"
    assert main(["predict", "-p", "11", "-k", "5", "-o", str(out)]) == 0
    assert out.read_text() == a


def test_cli_predict_non_ordinary_split_warns(capsys):
    code, out, _ = _run(capsys, "predict", "-p", "2", "-k", "5", "--splitness", "split")
    d = json.loads(out)["data"]
    assert code == 0 and not d["ordinary"] and d["predicted_lower"] == [] and d["warnings"]


def test_cli_verify_suites(capsys):
    code, out, _ = _run(capsys, "verify", "--suite", "ordinary", "-p", "11", "-k", "5", "-N", "400")
    assert code == 0 and json.loads(out)["passed"]
    code, out, _ = _run(capsys, "verify", "--suite", "doublecoset", "-p", "3", "-k", "3", "-N", "300")
    assert code == 0
    # the degenerate Jordan case at p=3, k=1 is reported as a failed identity
    code, out, _ = _run(capsys, "verify", "--suite", "kirillov", "-p", "3", "-k", "1", "-N", "100")
    assert code == 1


def test_cli_dump(tmp_path, capsys):
    q = tmp_path / "q.csv"
    assert main(["dump", "qexp", "-p", "5", "-k", "3", "-N", "20", "-o", str(q)]) == 0
    rows = list(csv.reader(q.open()))
    assert rows[0] == ["n", "a_n"] and rows[2] == ["2", "-24"] and len(rows) == 21
    kf = tmp_path / "k.csv"
    assert main(["dump", "kirillov", "-p", "11", "-k", "5", "-o", str(kf)]) == 0
    rows = list(csv.reader(kf.open()))
    assert rows[1][0] == "tail" and rows[1][6] == "51459"
    assert main(["dump", "kirillov", "-p", "2", "-k", "5", "-o", str(kf)]) == 0
    assert len(list(csv.reader(kf.open()))) == 1
    assert main(["dump", "qexp", "--form", "cm_32a", "-o", str(q), "-N", "5000"]) == 2
    capsys.readouterr()


def test_cli_dump_delta_row_six(tmp_path, capsys):
    q = tmp_path / "d.csv"
    assert main(["dump", "qexp", "-p", "101", "-k", "4", "-N", "200", "-o", str(q)]) == 0
    assert list(csv.reader(q.open()))[6] == ["6", "-6048"]
    capsys.readouterr()


def test_cli_verify_ordinary_full_size(capsys):
    code, out, _ = _run(capsys, "verify", "--suite", "ordinary", "-p", "11", "-k", "5", "-N", "1500")
    rep = json.loads(out)
    data = rep["suites"]["ordinary"]["data"]
    assert code == 0 and data["rank_e"] == 1 and data["kernel_verdict"] == "equal"
    names = [c["name"] for c in rep["suites"]["ordinary"]["checks"]]
    assert "rank_stable_double_N" in names
