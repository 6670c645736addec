"""Tests for the command-line interface: parsing, formats, exit codes."""

import csv
import io
import json
import math
import shlex

import pytest

from cotlattice.cli import (
    COLUMNS,
    format_complex,
    main,
    parse_complex,
    parse_grid_file,
)


@pytest.fixture(autouse=True)
def isolated_config(monkeypatch, tmp_path):
    """Point config discovery at an empty directory for every test."""
    monkeypatch.delenv("COTLATTICE_CONFIG", raising=False)
    monkeypatch.setenv("XDG_CONFIG_HOME", str(tmp_path / "xdg"))


def run_cli(argv, capsys):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out.splitlines(), captured.err


def parse_plain(line):
    """Decode one plain-format record into a dict of strings."""
    return dict(token.split("=", 1) for token in shlex.split(line))


class TestParseComplex:
    """The CLI accepts exactly the documented complex syntax."""

    def test_forms(self):
        assert parse_complex("2") == 2 + 0j
        assert parse_complex("-0.5") == -0.5 + 0j
        assert parse_complex("1.5+2i") == 1.5 + 2j
        assert parse_complex("1.5-2i") == 1.5 - 2j
        assert parse_complex("1e-3-2.5e2i") == 1e-3 - 250j
        assert parse_complex(".5+.25i") == 0.5 + 0.25j

    def test_rejections(self):
        for bad in ("1+i", "i", "2i", "1 + 2i", "1+2j", "nan", "inf", "", "abc"):
            with pytest.raises(ValueError):
                parse_complex(bad)

    def test_round_trip(self):
        for z in (0.3 + 0j, -2.0 + 0j, 1 + 2j, 1 - 2j, 0.1 + 0.2j, -0.25 - 1e-3j):
            assert parse_complex(format_complex(z)) == z

    def test_real_renders_without_i(self):
        assert "i" not in format_complex(0.75 + 0j)


class TestGridFiles:
    """Grid files list explicit (n, z) pairs."""

    def test_parse(self, tmp_path):
        p = tmp_path / "g.txt"
        p.write_text("# heading\nn 4 z 1\n\nn 3 z 0.5+0.5i # trailing\n")
        assert parse_grid_file(str(p)) == ((4, 1 + 0j), (3, 0.5 + 0.5j))

    def test_bad_syntax_exits_2(self, tmp_path, capsys):
        p = tmp_path / "g.txt"
        p.write_text("n 4 w 1\n")
        code, out, err = run_cli(["verify", "--grid", str(p)], capsys)
        assert code == 2
        assert "g.txt:1" in err

    def test_empty_exits_2(self, tmp_path, capsys):
        p = tmp_path / "g.txt"
        p.write_text("# nothing\n")
        code, out, err = run_cli(["verify", "--grid", str(p)], capsys)
        assert code == 2


class TestEval:
    """eval emits one record per method and meaningful exit codes."""

    def test_closed_value(self, capsys):
        code, out, err = run_cli(["eval", "-n", "1", "-z", "0.3",
                                  "--method", "closed"], capsys)
        assert code == 0
        rec = parse_plain(out[0])
        assert rec["record"] == "eval" and rec["method"] == "closed"
        exact = math.pi / math.tan(0.3 * math.pi)
        assert abs(float(rec["value_re"]) - exact) < 1e-10

    def test_all_methods_at_power_of_two(self, capsys):
        code, out, err = run_cli(["eval", "-n", "4", "-z", "1"], capsys)
        assert code == 0
        methods = {parse_plain(line)["method"] for line in out}
        assert methods == {"direct", "closed", "dyadic", "theta"}

    def test_origin_even_is_domain_error(self, capsys):
        code, out, err = run_cli(["eval", "-n", "2", "-z", "0"], capsys)
        assert code == 2
        assert out == []
        assert "z=0 excluded for even n" in err

    def test_pole_is_domain_error(self, capsys):
        code, out, err = run_cli(["eval", "-n", "1", "-z", "2"], capsys)
        assert code == 2
        assert "pole" in err

    def test_method_order_mismatch(self, capsys):
        code, out, err = run_cli(["eval", "-n", "3", "-z", "0.5",
                                  "--method", "dyadic"], capsys)
        assert code == 2
        code, out, err = run_cli(["eval", "-n", "3", "-z", "0.5",
                                  "--method", "theta"], capsys)
        assert code == 2

    def test_budget_miss_is_exit_1(self, capsys):
        code, out, err = run_cli(["eval", "-n", "1", "-z", "0.5",
                                  "--method", "direct", "--max-terms", "1000"],
                                 capsys)
        assert code == 1
        rec = parse_plain(out[0])
        assert "max_terms" in rec["error"]

    def test_bad_complex_is_usage_error(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["eval", "-n", "1", "-z", "1+i"])
        assert exc.value.code == 2

    def test_zero_tolerances_rejected(self, capsys):
        code, out, err = run_cli(["eval", "-n", "1", "-z", "0.3",
                                  "--abs-tol", "0", "--rel-tol", "0"], capsys)
        assert code == 2


class TestFormats:
    """All three formats carry the same record content."""

    def test_csv_header_and_values(self, capsys):
        code, out, err = run_cli(["eval", "-n", "2", "-z", "0.7",
                                  "--method", "closed", "--format", "csv"],
                                 capsys)
        assert code == 0
        assert out[0] == ",".join(COLUMNS)
        rows = list(csv.DictReader(io.StringIO("\n".join(out))))
        assert len(rows) == 1
        exact = (math.pi / 0.7) / math.tanh(math.pi * 0.7)
        assert abs(float(rows[0]["value_re"]) - exact) < 1e-10
        assert rows[0]["x"] == ""

    def test_json_lines(self, capsys):
        code, out, err = run_cli(["eval", "-n", "2", "-z", "0.5+0.5i",
                                  "--method", "closed", "--format",
                                  "json-lines"], capsys)
        assert code == 0
        obj = json.loads(out[0])
        assert obj["record"] == "eval"
        assert obj["z"] == "0.5+0.5i"
        assert set(obj) <= set(COLUMNS)
        assert isinstance(obj["value_re"], float)

    def test_formats_agree(self, capsys):
        args = ["eval", "-n", "3", "-z", "0.4", "--method", "closed"]
        _, plain_out, _ = run_cli(args + ["--format", "plain"], capsys)
        _, json_out, _ = run_cli(args + ["--format", "json-lines"], capsys)
        plain_rec = parse_plain(plain_out[0])
        json_rec = json.loads(json_out[0])
        assert float(plain_rec["value_re"]) == json_rec["value_re"]
        assert float(plain_rec["err_estimate"]) == json_rec["err_estimate"]


class TestZetaCommand:
    """zeta reports the series value and the limit diagnostic."""

    def test_two_sides(self, capsys):
        code, out, err = run_cli(["zeta", "-n", "1"], capsys)
        assert code == 0
        recs = [parse_plain(line) for line in out]
        assert [r["side"] for r in recs] == ["series", "limit"]
        assert abs(float(recs[0]["value_re"]) - math.pi**2 / 6.0) < 1e-10

    def test_limit_never_gates(self, capsys):
        # At n=8 the limit route has a huge error bar; exit stays 0.
        code, out, err = run_cli(["zeta", "-n", "8"], capsys)
        assert code == 0
        limit = parse_plain(out[1])
        assert float(limit["err_estimate"]) > 1.0


class TestProductCommand:
    """product reports the closed ratio and the series cross-check."""

    def test_values(self, capsys):
        code, out, err = run_cli(["product", "-n", "1", "-x", "0.25",
                                  "-y", "0.5", "--abs-tol", "1e-6"], capsys)
        assert code == 0
        recs = [parse_plain(line) for line in out]
        assert [r["side"] for r in recs] == ["closed", "series"]
        assert abs(float(recs[0]["value_re"]) - 2.0) < 1e-8

    def test_stock_defaults_report_shortfall(self, capsys):
        # The series cross-check cannot certify 1e-10 inside the default
        # term budget, so the stock invocation exits 1 by design.
        code, out, err = run_cli(["product", "-n", "1", "-x", "0.25",
                                  "-y", "0.5"], capsys)
        assert code == 1
        assert abs(float(parse_plain(out[0])["value_re"]) - 2.0) < 1e-9

    def test_degenerate_is_exact(self, capsys):
        code, out, err = run_cli(["product", "-n", "1", "-x", "0.5",
                                  "-y", "0.5"], capsys)
        assert code == 0
        rec = parse_plain(out[0])
        assert float(rec["value_re"]) == 1.0
        assert float(rec["err_estimate"]) == 0.0

    def test_reversed_endpoints(self, capsys):
        code, out, err = run_cli(["product", "-n", "1", "-x", "0.7",
                                  "-y", "0.2"], capsys)
        assert code == 2


class TestThetaCommand:
    """theta evaluates Psi_n(q)."""

    def test_value(self, capsys):
        code, out, err = run_cli(["theta", "-n", "1", "-q", "0.1"], capsys)
        assert code == 0
        assert float(parse_plain(out[0])["value_re"]) == 1.2002000019999999

    def test_bad_nome(self, capsys):
        code, out, err = run_cli(["theta", "-n", "1", "-q", "1.5"], capsys)
        assert code == 2


class TestVerifyCommand:
    """verify emits runs, pairs, and a gating summary."""

    def test_default_grid_passes(self, capsys):
        code, out, err = run_cli(["verify", "--grid", "default"], capsys)
        assert code == 0
        summary = parse_plain(out[-1])
        assert summary["record"] == "verify-summary"
        assert summary["passed"] == "true"
        assert summary["pairs_passed"] == "50"
        assert summary["pairs_total"] == "50"
        assert summary["schema_version"] == "1"

    def test_file_grid(self, tmp_path, capsys):
        p = tmp_path / "g.txt"
        p.write_text("n 4 z 1\n")
        code, out, err = run_cli(["verify", "--grid", str(p)], capsys)
        assert code == 0
        kinds = [parse_plain(line)["record"] for line in out]
        assert kinds.count("verify-run") == 4
        assert kinds.count("verify-pair") == 6
        assert kinds[-1] == "verify-summary"

    def test_domain_failures_exit_2(self, tmp_path, capsys):
        p = tmp_path / "g.txt"
        p.write_text("n 2 z 0\n")
        code, out, err = run_cli(["verify", "--grid", str(p)], capsys)
        assert code == 2
        runs = [parse_plain(line) for line in out
                if parse_plain(line)["record"] == "verify-run"]
        assert all(r["passed"] == "false" for r in runs)


class TestBenchCommand:
    """bench tabulates work and wall time."""

    def test_file_grid(self, tmp_path, capsys):
        p = tmp_path / "g.txt"
        p.write_text("n 4 z 1\nn 3 z 0.5\n")
        code, out, err = run_cli(["bench", "--grid", str(p)], capsys)
        assert code == 0
        recs = [parse_plain(line) for line in out]
        assert all(r["record"] == "bench" for r in recs)
        assert len(recs) == 6
        assert all(int(r["wall_time_ns"]) > 0 for r in recs)


class TestConfigFile:
    """Config file overrides defaults; flags override the config."""

    def _write_config(self, tmp_path, body):
        cfg_dir = tmp_path / "xdg" / "cotlattice"
        cfg_dir.mkdir(parents=True)
        (cfg_dir / "config.json").write_text(body)

    def test_config_loosens_target(self, tmp_path, capsys):
        self._write_config(tmp_path, '{"abs_tol": 5e-7}')
        code, out, err = run_cli(["eval", "-n", "1", "-z", "0.5",
                                  "--method", "direct"], capsys)
        assert code == 0

    def test_flag_beats_config(self, tmp_path, capsys):
        self._write_config(tmp_path, '{"abs_tol": 5e-7}')
        code, out, err = run_cli(["eval", "-n", "1", "-z", "0.5",
                                  "--method", "direct", "--abs-tol", "1e-12"],
                                 capsys)
        assert code == 1

    def test_unknown_key_rejected(self, tmp_path, capsys):
        self._write_config(tmp_path, '{"abstol": 1e-6}')
        code, out, err = run_cli(["eval", "-n", "1", "-z", "0.3"], capsys)
        assert code == 2
        assert "unknown key" in err

    def test_explicit_missing_config_rejected(self, monkeypatch, tmp_path, capsys):
        monkeypatch.setenv("COTLATTICE_CONFIG", str(tmp_path / "absent.json"))
        code, out, err = run_cli(["eval", "-n", "1", "-z", "0.3"], capsys)
        assert code == 2
        assert "COTLATTICE_CONFIG" in err
