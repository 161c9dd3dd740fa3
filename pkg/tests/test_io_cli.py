import json
from fractions import Fraction

import pytest

from freelip import fileio
from freelip.cli import main
from freelip.elements import canonicalize
from freelip.errors import ParseError
from freelip.functions import lip_function, partial_function, weight_function
from freelip.rationals import as_fraction, format_fraction


@pytest.fixture
def line3_file(tmp_path):
    path = tmp_path / "line3.json"
    path.write_text(
        json.dumps(
            {
                "labels": ["0", "1", "2"],
                "base": "0",
                "dist": [["0", "1", "2"], ["1", "0", "1"], ["2", "1", "0"]],
            }
        )
    )
    return path


def test_rational_parsing():
    assert as_fraction("1/3") == Fraction(1, 3)
    assert as_fraction("5") == 5
    assert as_fraction("0.1") == Fraction(1, 10)
    assert as_fraction("-7/2") == Fraction(-7, 2)
    with pytest.raises(ValueError):
        as_fraction("abc")
    with pytest.raises(TypeError):
        as_fraction(0.1)
    assert format_fraction(Fraction(3, 4)) == "3/4"
    assert format_fraction(Fraction(6, 3)) == "2"


def test_space_round_trip(tmp_path, line3_file):
    space = fileio.load_space(line3_file)
    assert space.labels == ("0", "1", "2")
    assert space.d(0, 2) == 2
    # serialize, reload, byte-for-byte stable
    out = tmp_path / "copy.json"
    text = fileio.machine_dumps(fileio.space_payload(space))
    out.write_text(text)
    again = fileio.load_space(out)
    assert again == space
    assert fileio.machine_dumps(fileio.space_payload(again)) == text


def test_space_accepts_decimal_entries(tmp_path):
    path = tmp_path / "dec.json"
    path.write_text(
        json.dumps(
            {"labels": ["0", "1"], "base": "0", "dist": [["0", "0.1"], ["0.1", "0"]]}
        )
    )
    assert fileio.load_space(path).d(0, 1) == Fraction(1, 10)


def test_malformed_space_files(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ParseError):
        fileio.load_space(bad)
    bad.write_text(json.dumps({"labels": ["0"], "base": "1", "dist": [["0"]]}))
    with pytest.raises(ParseError):
        fileio.load_space(bad)
    bad.write_text(json.dumps({"labels": ["0", "1"], "base": "0", "dist": [["0", "x"], ["x", "0"]]}))
    with pytest.raises(ParseError):
        fileio.load_space(bad)


def test_element_round_trip(tmp_path, line3_file):
    space = fileio.load_space(line3_file)
    mu = canonicalize(space, {1: Fraction(1, 2), 2: -3})
    path = tmp_path / "mu.json"
    text = fileio.machine_dumps(fileio.element_payload(mu))
    path.write_text(text)
    again = fileio.load_element(path, space)
    assert again == mu
    assert fileio.machine_dumps(fileio.element_payload(again)) == text


def test_element_accepts_bare_mapping(tmp_path, line3_file):
    space = fileio.load_space(line3_file)
    path = tmp_path / "mu.json"
    path.write_text(json.dumps({"1": "2/3"}))
    assert fileio.load_element(path, space).coeffs == {1: Fraction(2, 3)}


def test_function_round_trips(tmp_path, line3_file):
    space = fileio.load_space(line3_file)
    cases = [
        lip_function(space, [0, 1, 2]),
        weight_function(space, [Fraction(1, 3), 0, 1]),
        partial_function(space, {0: 0, 2: 2}),
    ]
    for f in cases:
        path = tmp_path / "f.json"
        text = fileio.machine_dumps(fileio.function_payload(f))
        path.write_text(text)
        again = fileio.load_function(path, space)
        assert again == f
        assert fileio.machine_dumps(fileio.function_payload(again)) == text


# ---------------------------------------------------------------------------
# CLI


def _write(tmp_path, name, payload):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


def test_cli_norm(tmp_path, line3_file, capsys):
    mu = _write(tmp_path, "mu.json", {"1": "1", "2": "1"})
    assert main(["norm", "--space", str(line3_file), "--element", mu]) == 0
    out = capsys.readouterr().out
    assert "norm = 3" in out


def test_cli_norm_machine_is_deterministic(tmp_path, line3_file, capsys):
    mu = _write(tmp_path, "mu.json", {"1": "1", "2": "1"})
    argv = ["norm", "--space", str(line3_file), "--element", mu, "--format", "machine"]
    assert main(argv) == 0
    first = capsys.readouterr().out
    assert main(argv) == 0
    second = capsys.readouterr().out
    assert first == second
    payload = json.loads(first)
    assert payload["value"] == "3"
    assert payload["schema_version"] == "1"


def test_cli_segment(line3_file, capsys):
    assert main(["segment", "--space", str(line3_file), "--pair", "0,2"]) == 0
    assert "{0, 1, 2}" in capsys.readouterr().out


def test_cli_classify(tmp_path, capsys):
    tri = _write(
        tmp_path,
        "tri.json",
        {
            "labels": ["0", "a", "b"],
            "base": "0",
            "dist": [["0", "1", "1"], ["1", "0", "3/2"], ["1", "3/2", "0"]],
        },
    )
    assert main(["classify-molecule", "--space", tri, "--pair", "a,b"]) == 0
    assert "Exposed" in capsys.readouterr().out


def test_cli_support_and_extremes(tmp_path, line3_file, capsys):
    mu = _write(tmp_path, "mu.json", {"1": "1", "2": "-1"})
    assert main(["support", "--space", str(line3_file), "--element", mu]) == 0
    assert "{1, 2}" in capsys.readouterr().out
    assert main(["positive-extremes", "--space", str(line3_file)]) == 0
    out = capsys.readouterr().out
    assert "{1: 1}" in out and "{2: 1/2}" in out


def test_cli_extend_and_fpq_and_weight(tmp_path, line3_file, capsys):
    pf = _write(tmp_path, "pf.json", {"kind": "partial", "values": {"0": "0", "2": "2"}})
    assert main(["extend", "--space", str(line3_file), "--function", pf]) == 0
    assert "1 -> 1" in capsys.readouterr().out

    assert main(["fpq", "--space", str(line3_file), "--pair", "2,0"]) == 0
    assert "2 -> 2" in capsys.readouterr().out

    mu = _write(tmp_path, "mu.json", {"1": "1", "2": "1"})
    h = _write(tmp_path, "h.json", {"kind": "weight", "values": {"1": "1"}})
    assert main(["weight", "--space", str(line3_file), "--element", mu, "--weight", h]) == 0
    assert "{1: 1}" in capsys.readouterr().out


def test_cli_witness(tmp_path, capsys):
    line4 = _write(
        tmp_path,
        "line4.json",
        {
            "labels": ["0", "1", "2", "3"],
            "base": "0",
            "dist": [
                ["0", "1", "2", "3"],
                ["1", "0", "1", "2"],
                ["2", "1", "0", "1"],
                ["3", "2", "1", "0"],
            ],
        },
    )
    lam = _write(tmp_path, "lam.json", {"1": "1/6", "2": "1/6", "3": "1/6"})
    assert main(["witness", "--space", line4, "--lam", lam]) == 0
    assert "present" in capsys.readouterr().out

    single = _write(tmp_path, "single.json", {"1": "1"})
    assert main(["witness", "--space", line4, "--lam", single]) == 0
    assert "absent" in capsys.readouterr().out


def test_cli_input_errors_exit_2(tmp_path, line3_file, capsys):
    missing = str(tmp_path / "nope.json")
    assert main(["norm", "--space", str(line3_file), "--element", missing]) == 2
    bad_space = _write(
        tmp_path,
        "bad.json",
        {"labels": ["0", "1"], "base": "0", "dist": [["0", "5"], ["5", "0"]]},
    )
    # valid space but a degenerate pair request
    assert main(["segment", "--space", bad_space, "--pair", "0,0"]) == 2
    # triangle violation in the file
    worse = _write(
        tmp_path,
        "worse.json",
        {
            "labels": ["0", "a", "b"],
            "base": "0",
            "dist": [["0", "1", "1"], ["1", "0", "5"], ["1", "5", "0"]],
        },
    )
    assert main(["segment", "--space", worse, "--pair", "a,b"]) == 2
    capsys.readouterr()


def test_cli_not_positive_is_input_error(tmp_path, line3_file, capsys):
    lam = _write(tmp_path, "lam.json", {"1": "-1"})
    assert main(["witness", "--space", str(line3_file), "--lam", lam]) == 2
    capsys.readouterr()


def test_cli_check_suite_quick(capsys):
    assert main(["check-suite", "--seed", "3", "--max-points", "6", "--scale", "0.02"]) == 0
    out = capsys.readouterr().out
    assert "PASS" in out and "FAIL" not in out


def test_cli_unknown_command_exits_2():
    with pytest.raises(SystemExit) as exc:
        main(["no-such-command"])
    assert exc.value.code == 2


def test_cli_check_suite_env_size_cap(capsys, monkeypatch):
    monkeypatch.setenv("FREELIP_MAX_POINTS", "4")
    assert main(["check-suite", "--seed", "5", "--scale", "0.02"]) == 0
    capsys.readouterr()


def test_cli_check_suite_machine_deterministic(capsys):
    argv = [
        "check-suite",
        "--seed",
        "3",
        "--max-points",
        "5",
        "--scale",
        "0.02",
        "--format",
        "machine",
    ]
    assert main(argv) == 0
    first = capsys.readouterr().out
    assert main(argv) == 0
    second = capsys.readouterr().out
    assert first == second
    assert json.loads(first)["all_passed"] is True
