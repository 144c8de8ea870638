"""End-to-end checks of the command-line interface via run(argv)."""

import json

import pytest

from ramkit import ram_signal
from ramkit.cli import run

PI_42 = "3.141592653589793238462643383279502884197169"


def out_of(capsys):
    captured = capsys.readouterr()
    return captured.out, captured.err


def test_pi_text_is_one_line(capsys):
    assert run(["pi", "--method", "machin", "--digits", "42"]) == 0
    out, err = out_of(capsys)
    assert out == PI_42 + "\n"
    assert err == ""


def test_pi_json_payload(capsys):
    assert run(["pi", "--method", "madhava", "--digits", "20", "--json"]) == 0
    out, _ = out_of(capsys)
    payload = json.loads(out)
    assert payload["method"] == "madhava"
    assert payload["digits"] == 20
    assert isinstance(payload["terms_used"], int) and payload["terms_used"] > 20
    assert payload["value"] == "3.14159265358979323846"


def test_pi_terms_flag_is_madhava_only(capsys):
    assert run(["pi", "--method", "machin", "--digits", "10", "--terms", "5"]) == 1
    _, err = out_of(capsys)
    assert err.startswith("error:")


def test_pi_report_convergence(capsys):
    argv = ["pi", "--method", "chudnovsky", "--digits", "30", "--json",
            "--report-convergence"]
    assert run(argv) == 0
    out, _ = out_of(capsys)
    payload = json.loads(out)
    assert abs(payload["digits_per_term"] - 14.18) < 0.3
    # text mode keeps stdout to the bare number; the rate goes to stderr
    assert run(["pi", "--method", "ramanujan", "--digits", "20",
                "--report-convergence"]) == 0
    out, err = out_of(capsys)
    assert len(out.strip().splitlines()) == 1
    assert "digits_per_term" in err
    assert run(["pi", "--method", "madhava", "--digits", "10",
                "--report-convergence"]) == 1


def test_exit_codes(capsys):
    assert run(["pi", "--method", "machin", "--digits", "0"]) == 1
    assert run(["pi", "--method", "machin"]) == 2  # missing --digits
    assert run(["frobnicate"]) == 2
    assert run(["--help"]) == 0
    assert run(["graph", "build", "--p", "4", "--q", "29"]) == 1
    capsys.readouterr()


def test_cf_eval(capsys):
    argv = ["cf", "eval", "--a-poly", "3,7,4", "--b-poly", "0,0,-2",
            "--a0", "4", "--digits", "20", "--depth", "400"]
    assert run(argv) == 0
    out, _ = out_of(capsys)
    assert out == "3.85645844807353723880\n"
    assert run(argv + ["--json"]) == 0
    out, _ = out_of(capsys)
    payload = json.loads(out)
    assert payload["value"] == "3.85645844807353723880"
    assert payload["error_estimate"] == 0.0
    assert payload["a_poly"] == [3, 7, 4]


def test_cf_eval_bad_poly(capsys):
    assert run(["cf", "eval", "--a-poly", "3;7", "--b-poly", "1",
                "--a0", "0", "--digits", "10"]) == 1
    capsys.readouterr()


def test_cf_expand_rational(capsys):
    assert run(["cf", "expand", "--value", "5000/127", "--terms", "10"]) == 0
    out, _ = out_of(capsys)
    assert out == "39 2 1 2 2 1 4\n"


def test_cf_expand_constant_json(capsys):
    assert run(["cf", "expand", "--constant", "pi", "--terms", "5", "--json"]) == 0
    out, _ = out_of(capsys)
    payload = json.loads(out)
    assert payload["coefficients"] == [3, 7, 15, 1, 292]
    assert payload["truncated"] is False
    assert run(["cf", "expand", "--constant", "e", "--terms", "12"]) == 0
    out, _ = out_of(capsys)
    assert out == "2 1 2 1 1 4 1 1 6 1 1 8\n"


def test_cf_expand_needs_one_source(capsys):
    assert run(["cf", "expand", "--terms", "5"]) == 1
    assert run(["cf", "expand", "--value", "1/2", "--constant", "pi"]) == 1
    capsys.readouterr()


def test_cf_verify_json_keys(capsys):
    assert run(["cf", "verify", "--name", "e", "--digits", "30", "--json"]) == 0
    out, _ = out_of(capsys)
    payload = json.loads(out)
    assert set(payload) == {"name", "status", "digits", "abs_error",
                            "depth_used", "match"}
    assert payload["name"] == "e"
    assert payload["match"] is True
    assert payload["abs_error"] < 1e-30
    assert run(["cf", "verify", "--name", "nonsense"]) == 1
    capsys.readouterr()


def test_sums_table(capsys):
    assert run(["sums", "table", "--q", "6", "--n", "12"]) == 0
    out, _ = out_of(capsys)
    assert out == "2 1 -1 -2 -1 1 2 1 -1 -2 -1 1\n"
    assert run(["sums", "table", "--q", "6", "--n", "12", "--json"]) == 0
    out, _ = out_of(capsys)
    assert json.loads(out)["values"] == [2, 1, -1, -2, -1, 1, 2, 1, -1, -2, -1, 1]


def test_sums_tau(capsys):
    assert run(["sums", "tau", "--max", "5"]) == 0
    out, _ = out_of(capsys)
    assert out == "1 -24 252 -1472 4830\n"
    assert run(["sums", "tau", "--max", "100", "--check-bound", "--json"]) == 0
    out, _ = out_of(capsys)
    payload = json.loads(out)
    assert payload["bound"]["holds"] is True
    assert payload["bound"]["primes_checked"] == 25
    assert run(["sums", "tau", "--max", "1", "--check-bound"]) == 1
    capsys.readouterr()


@pytest.fixture(scope="module")
def built_graph(tmp_path_factory):
    path = tmp_path_factory.mktemp("graph") / "x513.txt"
    import io
    from contextlib import redirect_stdout

    buf = io.StringIO()
    with redirect_stdout(buf):
        code = run(["graph", "build", "--p", "5", "--q", "13",
                    "--out", str(path), "--json"])
    assert code == 0
    return path, buf.getvalue()


def test_graph_build_sidecar(built_graph):
    path, stdout = built_graph
    payload = json.loads(stdout)
    assert set(payload) == {"p", "q", "branch", "vertices", "degree",
                            "lambda", "bound", "is_ramanujan"}
    assert payload["branch"] == "PGL"
    assert payload["vertices"] == 2184
    assert payload["degree"] == 6
    assert abs(payload["lambda"] - 4.249720849060802) < 1e-9
    assert abs(payload["bound"] - 4.47213595499958) < 1e-12
    assert payload["is_ramanujan"] is True
    sidecar = json.loads((path.parent / (path.name + ".json")).read_text())
    assert sidecar == payload


def test_graph_edge_list_format(built_graph):
    path, _ = built_graph
    lines = path.read_text().splitlines()
    assert lines[0] == "2184 6552"
    assert len(lines) == 6553
    u, v = lines[1].split()
    assert 0 <= int(u) < 2184 and 0 <= int(v) < 2184


def test_graph_check_roundtrip(built_graph, capsys):
    path, _ = built_graph
    assert run(["graph", "check", "--in", str(path), "--degree", "6",
                "--json"]) == 0
    out, _ = out_of(capsys)
    payload = json.loads(out)
    assert payload["vertices"] == 2184
    assert abs(payload["lambda"] - 4.249720849060802) < 1e-6
    assert abs(payload["lambda_second"] - 6.0) < 1e-6
    assert payload["bipartite"] is True
    assert payload["is_ramanujan"] is True
    assert abs(payload["bound_alt"] - 4.898979485566356) < 1e-9


def test_graph_check_bad_file(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("3 2\n0 1\n")
    assert run(["graph", "check", "--in", str(bad), "--degree", "2"]) == 1
    capsys.readouterr()


def _write_c3_c7(path):
    samples = [ram_signal.ramanujan_sum(3, n) + ram_signal.ramanujan_sum(7, n)
               for n in range(21)]
    path.write_text("\n".join(str(v) for v in samples) + "\n")
    return samples


def test_signal_decompose_json(tmp_path, capsys):
    sig = tmp_path / "sig.txt"
    _write_c3_c7(sig)
    assert run(["signal", "decompose", "--in", str(sig), "--json"]) == 0
    out, _ = out_of(capsys)
    payload = json.loads(out)
    assert payload["N"] == 21
    assert payload["residual"] == 0.0
    qs = [comp["q"] for comp in payload["components"]]
    assert qs == [1, 3, 7, 21]
    by_q = {comp["q"]: comp for comp in payload["components"]}
    assert by_q[7]["samples"][0] == 6
    assert by_q[7]["energy_fraction"] == 0.75
    assert by_q[3]["energy_fraction"] == 0.25
    assert all(v == 0 for v in by_q[1]["samples"])


def test_signal_periods_text(tmp_path, capsys):
    sig = tmp_path / "sig.txt"
    _write_c3_c7(sig)
    assert run(["signal", "periods", "--in", str(sig), "--top", "2"]) == 0
    out, _ = out_of(capsys)
    assert out.splitlines() == ["7 0.75", "3 0.25"]


def test_signal_csv_input(tmp_path, capsys):
    sig = tmp_path / "sig.csv"
    sig.write_text("1, -1, 1, -1, 1, -1\n")
    assert run(["signal", "periods", "--in", str(sig), "--top", "1",
                "--json"]) == 0
    out, _ = out_of(capsys)
    payload = json.loads(out)
    assert payload["N"] == 6
    assert payload["top"][0]["q"] == 2
    assert payload["top"][0]["energy_fraction"] == 1.0


def test_signal_missing_file(capsys):
    assert run(["signal", "decompose", "--in", "/nonexistent/sig.txt"]) == 1
    capsys.readouterr()


def test_reruns_are_byte_identical(capsys):
    for argv in (
        ["pi", "--method", "chudnovsky", "--digits", "60", "--json"],
        ["cf", "verify", "--name", "pi", "--digits", "30", "--json"],
        ["sums", "tau", "--max", "30", "--check-bound", "--json"],
        ["cf", "expand", "--constant", "catalan", "--terms", "15"],
    ):
        assert run(argv) == 0
        first, _ = out_of(capsys)
        assert run(argv) == 0
        second, _ = out_of(capsys)
        assert first == second


def test_selftest_quick(capsys):
    assert run(["selftest", "--level", "quick", "--json"]) == 0
    out, _ = out_of(capsys)
    payload = json.loads(out)
    assert payload["level"] == "quick"
    assert payload["failed"] == 0
    assert payload["passed"] == len(payload["checks"]) == 14
    names = {c["name"] for c in payload["checks"]}
    assert "Table c_6" in names
    assert "X^(5,13) spectrum" in names


def test_selftest_catches_corrupted_table(monkeypatch, capsys):
    real = ram_signal.ramanujan_sum

    def corrupted(q, n):
        value = real(q, n)
        return value + 1 if (q, n % max(q, 1)) == (6, 4) else value

    monkeypatch.setattr(ram_signal, "ramanujan_sum", corrupted)
    assert run(["selftest", "--level", "quick", "--json"]) == 1
    out, _ = out_of(capsys)
    payload = json.loads(out)
    assert payload["failed"] >= 1
    failed_names = {c["name"] for c in payload["checks"] if not c["ok"]}
    assert "Table c_6" in failed_names
