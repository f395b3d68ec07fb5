import json
import subprocess
import sys
from fractions import Fraction

import pytest

from wirtinger_g2.cli import SCHEMA, main, parse_config
from wirtinger_g2.errors import AdmissibilityError, ParseError

FIXTURE = {
    "exponents": ["-1/5", "-3/20", "-1/10", "1/20", "11/50", "9/50"],
    "z": [0.2, 0.45, 0.7],
}
LAURICELLA = {"lauricella": {"a": 0.36, "b1": 0.3, "b2": 0.2, "b3": -0.1, "c": 0.8}, "z": [0.2, 0.45, 0.7]}


@pytest.fixture
def cfg_path(tmp_path):
    path = tmp_path / "fixture.json"
    path.write_text(json.dumps(FIXTURE))
    return path


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out


def test_parse_exact_exponents():
    c = parse_config(FIXTURE)
    assert c.exponents.exact and c.exponents.c[0] == Fraction(-1, 5)
    assert c.z == (0.2, 0.45, 0.7)


def test_parse_lauricella_block():
    c = parse_config(LAURICELLA)
    assert abs(complex(c.exponents.c[5]) - 0.18) < 1e-15


def test_parse_toml(tmp_path):
    path = tmp_path / "c.toml"
    path.write_text('z = [0.2, 0.45, 0.7]\n[lauricella]\na = 0.36\nb1 = 0.3\nb2 = 0.2\nb3 = -0.1\nc = 0.8\n')
    assert parse_config(path).lauricella is not None


def test_parse_complex_point():
    c = parse_config({**FIXTURE, "z": [[0.2, 0.1], 0.45, 0.7]})
    assert c.z[0] == 0.2 + 0.1j


@pytest.mark.parametrize(
    "doc,field",
    [
        ({**FIXTURE, **LAURICELLA}, "lauricella/exponents"),
        ({"z": [0.2, 0.45, 0.7]}, "lauricella/exponents"),
        ({"exponents": FIXTURE["exponents"]}, "z"),
        ({**FIXTURE, "z": [0.2, 0.45]}, "z"),
        ({**FIXTURE, "exponents": [0.1] * 5}, "exponents"),
        ({**FIXTURE, "exponents": [True] * 6}, "exponents"),
        ({**FIXTURE, "quadrature": {"bogus": 1}}, "quadrature"),
        ({**FIXTURE, "seed": "x"}, "seed"),
        ({"lauricella": {"a": 1}, "z": [0.2, 0.45, 0.7]}, "lauricella"),
    ],
)
def test_parse_errors_name_field(doc, field):
    with pytest.raises(ParseError) as info:
        parse_config(doc)
    assert info.value.field == field


def test_parse_error_reports_line(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{\n  "z": [0.2, 0.45, 0.7],\n  "exponents": [1, 2\n}\n')
    with pytest.raises(ParseError) as info:
        parse_config(path)
    assert info.value.line == 4


def test_inadmissible_exponents():
    with pytest.raises(AdmissibilityError):
        parse_config({**FIXTURE, "exponents": ["1/4", "-1/4", "1/10", "-1/10", "1/5", "-1/5"]})


@pytest.mark.parametrize(
    "extra",
    [
        ["--space", "X", "--pairing", "cohomology"],
        ["--space", "X", "--pairing", "homology"],
        ["--space", "Y", "--pairing", "cohomology"],
        ["--space", "Y", "--pairing", "homology"],
        ["--space", "Y", "--pairing", "cohomology", "--twist", "f"],
        ["--space", "Y", "--pairing", "homology", "--twist", "f"],
    ],
)
def test_intersect_determinants(extra, cfg_path, capsys):
    code, out = run(["intersect", "--config", str(cfg_path), *extra], capsys)
    assert code == 0
    doc = json.loads(out.out)
    assert doc["schema"] == SCHEMA and doc["command"] == "intersect"
    assert doc["config_echo"] == FIXTURE
    assert doc["determinant"]["relative_deviation"] < 1e-10


def test_intersect_f_twist_on_X_is_validation_error(cfg_path, capsys):
    code, out = run(["intersect", "--config", str(cfg_path), "--space", "X", "--twist", "f"], capsys)
    assert code == 2 and "validation error" in out.err


def test_homology_f_twist_note(cfg_path, capsys):
    code, out = run(["intersect", "--config", str(cfg_path), "--space", "Y", "--pairing", "homology", "--twist", "f"], capsys)
    assert json.loads(out.out)["notes"]["max_deviation_from_H(-1)"] < 1e-12


def test_periods_command(cfg_path, capsys):
    code, out = run(["periods", "--config", str(cfg_path)], capsys)
    assert code == 0
    block = json.loads(out.out)["matrices"]["periods"]
    assert len(block["entries"]) == 8 and block["rows"][0] == "sigma01+"
    assert not any(any(r) for r in block["flagged"])


def test_fd_command(tmp_path, capsys):
    path = tmp_path / "fd.json"
    path.write_text(json.dumps(LAURICELLA))
    code, out = run(["fd", "--config", str(path)], capsys)
    fd = json.loads(out.out)["fd"]
    assert code == 0 and fd["relative_deviation"] < 1e-10


def test_fd_divergent_is_numeric_error(tmp_path, capsys):
    path = tmp_path / "fd.json"
    path.write_text(json.dumps({**LAURICELLA, "z": [0.2, 1.5, 0.7]}))
    code, out = run(["fd", "--config", str(path)], capsys)
    assert code == 3 and "DivergenceError" in out.err


def test_verify_passing_suite(cfg_path, capsys):
    code, out = run(["verify", "--config", str(cfg_path), "--suite", "monodromy"], capsys)
    doc = json.loads(out.out)
    assert code == 0 and doc["passed"]
    assert doc["checks"][0]["name"] == "monodromy"


def test_verify_failing_suite_exit_code(cfg_path, capsys):
    code, out = run(["verify", "--config", str(cfg_path), "--suite", "corollary"], capsys)
    assert code == 1 and not json.loads(out.out)["passed"]


def test_verify_output_deterministic(cfg_path, tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        assert main(["verify", "--config", str(cfg_path), "--suite", "dets", "--seed", "4", "--out", str(path)]) == 0
    assert a.read_text() == b.read_text()


def test_config_error_exit_code(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("{}")
    code, out = run(["periods", "--config", str(path)], capsys)
    assert code == 2 and "ParseError" in out.err


def test_missing_file(tmp_path, capsys):
    code, _ = run(["periods", "--config", str(tmp_path / "none.json")], capsys)
    assert code == 2


def test_module_entry_point_reads_stdin():
    proc = subprocess.run(
        [sys.executable, "-m", "wirtinger_g2", "intersect", "--config", "-", "--space", "Y"],
        input=json.dumps(FIXTURE),
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["matrices"]["intersection"]["pairing"] == "ch0"
