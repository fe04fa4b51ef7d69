import io
import json

import pytest

from src.cli.app import main


def run(argv, environ=None):
    out = io.StringIO()
    code = main(argv, environ=environ or {}, stdout=out)
    return code, out.getvalue()


def test_pi():
    assert run(["pi", "45"]) == (0, "14\n")


def test_nth_prime():
    assert run(["nth-prime", "29"]) == (0, "109\n")


def test_nth_prime_json():
    code, out = run(["--format", "json", "nth-prime", "1000"])
    assert code == 0
    assert json.loads(out) == {'k': 1000, 'p_k': 7919}


def test_s_value():
    assert run(["s", "5"]) == (0, "37\n")


def test_search_f():
    assert run(["search", "f", "--m", "4"]) == (0, "5\n")


def test_search_without_witness():
    code, out = run(["search", "s", "--m", "4", "--n-limit", "1000"])
    assert code == 0
    assert out == "none up to 1000\n"


def test_json_from_environment():
    code, out = run(["pi", "45"], environ={"PRL_FORMAT": "json"})
    assert code == 0
    assert json.loads(out) == {'x': 45, 'pi': 14}


def test_csv_flag():
    assert run(["--format", "csv", "pi", "10"]) == (0, "x,pi\n10,4\n")


def test_practical_count():
    assert run(["practical", "count", "100"]) == (0, "30\n")


def test_practical_export(tmp_path):
    path = tmp_path / "q.csv"
    code, _ = run(["practical", "export", str(path), "--k-max", "3"])
    assert code == 0
    assert path.read_text() == "k,q\n1,1\n2,2\n3,4\n"


def test_verify_suite():
    code, out = run(["verify", "dusart", "--limit", "1000"])
    assert code == 0
    assert out.startswith("dusart: passed")


@pytest.mark.parametrize("argv", [
    ["pi", "-1"],
    ["nth-prime", "0"],
    ["--threads", "0", "pi", "10"],
    ["--segment-length", "1000", "pi", "10"],
    ["search", "tau", "--m", "3", "--variant", "tau_sum"],
    ["reproduce", "--table", "T9.9"],
    ["frobnicate"],
    [],
])
def test_usage_errors(argv):
    code, _ = run(argv)
    assert code == 2


def test_bad_environment_value():
    code, _ = run(["pi", "10"], environ={"PRL_THREADS": "many"})
    assert code == 2


def test_bound_exceeded_is_a_computation_failure():
    code, _ = run(["--bound", "100000", "pi", "200000"])
    assert code == 1
