import json
import subprocess
import sys

import pytest

from mvop.cli import dumps17, main

P0_ARGS = ["--n", "2", "--k", "1", "--ell", "1", "--m", "0"]


def run_cli(argv, capsys):
    rc = main(argv)
    captured = capsys.readouterr()
    return rc, captured.out, captured.err


def test_eigen_json_payload(capsys):
    rc, out, err = run_cli(["eigen", *P0_ARGS, "--w", "1", "--r", "0"], capsys)
    assert rc == 0 and err == ""
    payload = json.loads(out)
    assert payload["lambda"] == -4
    assert payload["label"] == {"w": 1, "r": 0}
    assert payload["f0"][0] == 1
    assert len(payload["coeffs"]) == 2


def test_eigen_degree_zero(capsys):
    rc, out, _ = run_cli(["eigen", *P0_ARGS, "--w", "0", "--r", "1"], capsys)
    assert rc == 0
    payload = json.loads(out)
    assert payload["lambda"] == -2 and payload["mu"] == 2
    assert len(payload["coeffs"]) == 1


def test_eigen_requires_label(capsys):
    rc, _, err = run_cli(["eigen", *P0_ARGS], capsys)
    assert rc == 2
    assert "error:" in err


def test_malformed_params_exit_code(capsys):
    rc, _, err = run_cli(["eigen", "--n", "2", "--k", "5", "--ell", "1",
                          "--m", "0", "--w", "0", "--r", "0"], capsys)
    assert rc == 2
    assert "error:" in err


def test_missing_params_exit_code(capsys):
    rc, _, err = run_cli(["eigen", "--w", "0", "--r", "0"], capsys)
    assert rc == 2
    assert "missing parameters" in err


def test_unknown_subcommand_exit_code(capsys):
    rc, _, _ = run_cli(["frobnicate"], capsys)
    assert rc == 2


def test_unknown_suite_choice_exit_code(capsys):
    rc, _, _ = run_cli(["verify", *P0_ARGS, "--suite", "nonsense"], capsys)
    assert rc == 2


@pytest.mark.parametrize("argv", [
    ["eigen", *P0_ARGS, "--w", "2", "--r", "1"],
    ["gram", *P0_ARGS, "--wmax", "2", "--format", "json"],
    ["verify", *P0_ARGS, "--suite", "eigen", "--format", "json"],
])
def test_json_round_trip_byte_identical(argv, capsys):
    rc, out, _ = run_cli(argv, capsys)
    assert rc == 0
    body = out.rstrip("\n")
    assert dumps17(json.loads(body)) == body


def test_walk_csv_deterministic(capsys):
    argv = ["walk", *P0_ARGS, "--steps", "50", "--seed", "3"]
    rc1, out1, _ = run_cli(argv, capsys)
    rc2, out2, _ = run_cli(argv, capsys)
    assert rc1 == rc2 == 0
    assert out1 == out2
    lines = out1.strip().split("\n")
    assert lines[0] == "step,w,r"
    assert lines[1] == "0,0,0"
    assert len(lines) == 52


def test_walk_json_format(capsys):
    rc, out, _ = run_cli(["walk", *P0_ARGS, "--steps", "5", "--seed", "1",
                          "--format", "json"], capsys)
    assert rc == 0
    payload = json.loads(out)
    assert payload["steps"] == 5
    assert len(payload["trajectory"]) == 6
    assert payload["trajectory"][0] == [0, 0]


def test_gram_csv_shape(capsys):
    rc, out, _ = run_cli(["gram", *P0_ARGS, "--wmax", "1"], capsys)
    assert rc == 0
    lines = out.strip().split("\n")
    assert lines[0] == "label,w0r0,w0r1,w1r0,w1r1"
    assert len(lines) == 5
    first = lines[1].split(",")
    assert first[0] == "w0r0"
    assert float(first[1]) > 0
    assert abs(float(first[2])) < 1e-9 * float(first[1])


def test_gram_jacobi_flags(capsys):
    rc, out, _ = run_cli(["gram", "--jacobi", "--alpha", "0.5", "--beta", "1.5",
                          "--k", "1", "--ell", "1", "--wmax", "1"], capsys)
    assert rc == 0
    assert out.startswith("label,")


def test_recursion_json(capsys):
    rc, out, _ = run_cli(["recursion", *P0_ARGS, "--wmax", "2"], capsys)
    assert rc == 0
    payload = json.loads(out)
    assert [b["w"] for b in payload["blocks"]] == [0, 1, 2]
    for b in payload["blocks"]:
        assert b["row_sum_residual"] <= 1e-12
        assert b["three_term_residual"] <= 1e-9
        assert len(b["A"]) == 2 and len(b["A"][0]) == 2


def test_family_json(capsys):
    rc, out, _ = run_cli(["family", *P0_ARGS, "--wmax", "2"], capsys)
    assert rc == 0
    payload = json.loads(out)
    assert payload["wmax"] == 2
    assert [f["w"] for f in payload["family"]] == [0, 1, 2]
    assert len(payload["family"][2]["coeffs"]) == 3


def test_verify_single_params_text(capsys):
    rc, out, _ = run_cli(["verify", *P0_ARGS, "--suite", "eigen"], capsys)
    assert rc == 0
    lines = out.strip().split("\n")
    assert all(line.startswith("[PASS]") for line in lines[:-1])
    assert lines[-1].startswith("summary:")
    assert "eigen/operator_residuals" in out


def test_verify_out_file(tmp_path, capsys):
    target = tmp_path / "report.json"
    rc, out, _ = run_cli(["verify", *P0_ARGS, "--suite", "recursion",
                          "--format", "json", "--out", str(target)], capsys)
    assert rc == 0
    assert out == ""
    payload = json.loads(target.read_text())
    assert all(c["status"] == "pass" for c in payload[0]["checks"])


def test_dumps17_rejects_non_finite():
    with pytest.raises(ValueError, match="non-finite"):
        dumps17({"x": float("nan")})
    with pytest.raises(ValueError, match="non-finite"):
        dumps17([float("inf")])


def test_dumps17_zero_and_ints():
    assert dumps17(0.0) == "0"
    assert dumps17(-4.0) == "-4"
    assert dumps17({"a": 1, "b": [True, None]}) == '{"a":1,"b":[true,null]}'


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "mvop.cli", "eigen", *P0_ARGS, "--w", "0", "--r", "0"],
        capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["lambda"] == 0
