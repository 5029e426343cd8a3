"""
Tests for the command handlers and the CLI entry point
"""

import io
import json
from pathlib import Path
from unittest.mock import patch

import pytest

from semifix.api.commands import (
    EXIT_ERROR,
    EXIT_MISMATCH,
    EXIT_OK,
    SELFTEST_CONFIGS,
    TEXT,
    cmd_classify,
    cmd_history,
    cmd_selftest,
    cmd_table,
    cmd_verify,
    parse_bounds,
    table_entries,
)
from semifix.classifier import DimRange, PredictedDimensions
from semifix.main import build_parser, main
from semifix.storage.config import ConfigStorage
from semifix.storage.reports import ReportStorage

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


@pytest.fixture
def storage(tmp_path):
    return ConfigStorage(data_dir=tmp_path / "home")


@pytest.fixture
def reports(tmp_path):
    return ReportStorage(data_dir=tmp_path / "home")


def _write(tmp_path, name, data):
    path = tmp_path / name
    path.write_text(json.dumps(data) if not isinstance(data, str) else data, encoding="utf-8")
    return path


class TestClassifyCommand:
    def test_json_report(self, storage):
        out = io.StringIO()
        code = cmd_classify(CONFIGS / "ve1_cyclic_orthogonal.json", storage=storage, out=out)
        assert code == EXIT_OK
        report = json.loads(out.getvalue())
        assert [c["shape"] for c in report["components"]] == ["VE-1"]
        assert report["predicted_dims"]["dims"]["H"] == {"low": 1, "high": 1}

    def test_text_report(self, storage):
        out = io.StringIO()
        assert cmd_classify(CONFIGS / "loop_odd_cycle.json", fmt=TEXT, storage=storage, out=out) == EXIT_OK
        assert "VE-0" in out.getvalue()
        assert "Quiver:" in out.getvalue()
        assert "Loop case A (VE): agrees" in out.getvalue()

    def test_loop_report_names_its_table_row(self, storage):
        out = io.StringIO()
        assert cmd_classify(CONFIGS / "loop_odd_cycle.json", storage=storage, out=out) == EXIT_OK
        assert json.loads(out.getvalue())["loop_case"] == {"key": "A", "shape": "VE", "agrees": True}

    def test_numberfield_report_has_no_loop_case(self, storage):
        out = io.StringIO()
        assert cmd_classify(CONFIGS / "ve1_cyclic_orthogonal.json", storage=storage, out=out) == EXIT_OK
        assert json.loads(out.getvalue())["loop_case"] is None

    def test_save_then_classify_by_name(self, storage):
        assert cmd_classify(CONFIGS / "cc1_swapped_pair.json", save="cc1", storage=storage,
                            out=io.StringIO()) == EXIT_OK
        assert storage.config_file("cc1").exists()
        out = io.StringIO()
        assert cmd_classify("cc1", storage=storage, out=out) == EXIT_OK
        assert json.loads(out.getvalue())["vertices"]

    def test_invalid_setup_is_not_saved(self, storage, tmp_path):
        config = dict(SELFTEST_CONFIGS["cyclic-orthogonal-ve1"], c={"cyclo_coeffs": ["2"]})
        assert cmd_classify(_write(tmp_path, "bad.json", config), save="bad", storage=storage) == EXIT_ERROR
        assert not storage.config_file("bad").exists()

    def test_output_file(self, storage, tmp_path):
        target = tmp_path / "reports" / "cc1.json"
        assert cmd_classify(CONFIGS / "cc1_swapped_pair.json", output=target, storage=storage) == EXIT_OK
        assert json.loads(target.read_text(encoding="utf-8"))["vertices"]

    def test_norm_violation(self, storage, tmp_path):
        config = dict(SELFTEST_CONFIGS["cyclic-orthogonal-ve1"], c={"cyclo_coeffs": ["2"]})
        assert cmd_classify(_write(tmp_path, "bad.json", config), storage=storage) == EXIT_ERROR

    def test_bad_json(self, storage, tmp_path):
        assert cmd_classify(_write(tmp_path, "bad.json", "{"), storage=storage) == EXIT_ERROR

    def test_missing_file(self, storage, tmp_path):
        assert cmd_classify(tmp_path / "absent.json", storage=storage) == EXIT_ERROR


class TestVerifyCommand:
    def test_passes_and_records_history(self, storage, reports):
        out = io.StringIO()
        code = cmd_verify(CONFIGS / "ve1_cyclic_orthogonal.json", trials=2, storage=storage,
                          reports=reports, out=out)
        assert code == EXIT_OK
        report = json.loads(out.getvalue())
        assert report["verification"]["passed"]
        history = reports.load_history()
        assert len(history) == 1
        assert history[0]["passed"]
        assert history[0]["dims"]["H"] == 1

    def test_seed_override(self, storage, reports):
        out = io.StringIO()
        cmd_verify(CONFIGS / "cc1_swapped_pair.json", trials=1, seed=42, storage=storage, reports=reports, out=out)
        assert reports.load_history()[0]["seed"] == 42

    def test_loop_regime_is_an_error(self, storage, reports):
        code = cmd_verify(CONFIGS / "loop_odd_cycle.json", storage=storage, reports=reports, out=io.StringIO())
        assert code == EXIT_ERROR
        assert reports.load_history() == []

    def test_mismatch(self, storage, reports):
        wrong = PredictedDimensions(H=DimRange(99, 99), g_xi=DimRange(99, 99), over="k_sigma")
        out = io.StringIO()
        with patch("semifix.oracle.verify.predict_dimensions", return_value=wrong):
            code = cmd_verify(CONFIGS / "ve1_cyclic_orthogonal.json", trials=1, fmt=TEXT,
                              storage=storage, reports=reports, out=out)
        assert code == EXIT_MISMATCH
        assert "FAIL dim Lie H" in out.getvalue()
        assert reports.load_history()[0]["passed"] is False

    def test_save_stores_the_setup(self, storage, reports):
        code = cmd_verify(CONFIGS / "ve1_cyclic_orthogonal.json", trials=1, save="ve1", storage=storage,
                          reports=reports, out=io.StringIO())
        assert code == EXIT_OK
        assert storage.load_config("ve1")["M"] == 3


class TestHistoryCommand:
    @pytest.fixture
    def recorded(self, reports):
        for i, passed in enumerate([True, False, True]):
            reports.append_history({"config": f"setup{i}.json", "seed": i, "trials": 1, "passed": passed,
                                    "dims": {"H": i, "g_xi": 1}})
        return reports

    def test_recent_runs(self, recorded):
        out = io.StringIO()
        assert cmd_history(last=2, fmt="json", reports=recorded, out=out) == EXIT_OK
        assert [run["seed"] for run in json.loads(out.getvalue())["runs"]] == [1, 2]

    def test_failed_only(self, recorded):
        out = io.StringIO()
        assert cmd_history(failed=True, reports=recorded, out=out) == EXIT_OK
        assert "setup1.json" in out.getvalue()
        assert "FAILED" in out.getvalue()
        assert "setup0.json" not in out.getvalue()

    def test_clear(self, recorded):
        assert cmd_history(clear=True, reports=recorded, out=io.StringIO()) == EXIT_OK
        assert recorded.load_history() == []

    def test_empty(self, reports):
        out = io.StringIO()
        assert cmd_history(reports=reports, out=out) == EXIT_OK
        assert out.getvalue() == "No verification runs recorded\n"

    def test_corrupted_history(self, reports):
        reports.history_file.write_text("{}", encoding="utf-8")
        assert cmd_history(reports=reports, out=io.StringIO()) == EXIT_ERROR


class TestTableCommand:
    def test_default_lists_every_row(self):
        entries = table_entries()
        assert [e["key"] for e in entries] == list("ABCDEFGHIJKL")
        assert all(e["agrees"] is not False for e in entries)

    def test_bounds_keep_rows_with_witnesses(self):
        entries = table_entries((1, 1))
        assert entries
        assert len(entries) < 12
        assert all(e["agrees"] for e in entries)

    def test_json_output(self):
        out = io.StringIO()
        assert cmd_table(bounds="1:1", fmt="json", out=out) == EXIT_OK
        assert json.loads(out.getvalue())["rows"][0]["key"] == "A"

    def test_bad_bounds(self):
        assert cmd_table(bounds="x", out=io.StringIO()) == EXIT_ERROR

    @pytest.mark.parametrize("bounds", ["1", "a:b", "0:2", "1:2:3"])
    def test_parse_bounds_rejects(self, bounds):
        with pytest.raises(ValueError):
            parse_bounds(bounds)

    def test_parse_bounds(self):
        assert parse_bounds("2:4") == (2, 4)
        assert parse_bounds(None) is None


class TestSelftest:
    def test_reports_each_setup(self):
        fake = {"passed": True, "failures": [], "summary": {"checks": 7, "trials": 1, "failed": 0}}
        out = io.StringIO()
        with patch("semifix.api.commands.verify", return_value=fake) as mocked, \
                patch("semifix.api.commands.table_entries", return_value=[{"key": "A", "agrees": True}]):
            code = cmd_selftest(trials=1, out=out)
        assert code == EXIT_OK
        assert mocked.call_count == len(SELFTEST_CONFIGS)
        for name in SELFTEST_CONFIGS:
            assert f"{name}: ok (7 checks)" in out.getvalue()
        assert "loop table: ok (1 rows with witnesses)" in out.getvalue()

    def test_failure_sets_exit_code(self):
        failure = {"name": "dim Lie H", "status": "fail"}
        fake = {"passed": False, "failures": [failure], "summary": {"checks": 7, "trials": 1, "failed": 1}}
        out = io.StringIO()
        with patch("semifix.api.commands.verify", return_value=fake), \
                patch("semifix.api.commands.table_entries", return_value=[]):
            assert cmd_selftest(trials=1, out=out) == EXIT_MISMATCH
        assert "FAILED dim Lie H" in out.getvalue()

    def test_zero_trials_is_an_error(self):
        out = io.StringIO()
        with patch("semifix.api.commands.table_entries", return_value=[]):
            assert cmd_selftest(trials=0, out=out) == EXIT_ERROR
        assert "trials must be positive" in out.getvalue()


class TestMain:
    def test_parser(self):
        args = build_parser().parse_args(["verify", "setup.json", "--trials", "3", "--exact", "--text"])
        assert (args.command, args.trials, args.exact, args.fmt) == ("verify", 3, True, "text")

    def test_table(self, capsys, semifix_home):
        assert main(["table", "--bounds", "1:1", "--json"]) == EXIT_OK
        assert json.loads(capsys.readouterr().out)["rows"]
        assert (semifix_home / "semifix.log").exists()

    @pytest.mark.parametrize("argv", [
        ["verify"],
        ["frobnicate"],
        ["table", "--unknown-flag"],
        ["verify", "setup.json", "--trials", "abc"],
        ["classify", "setup.json", "--json", "--text"],
    ])
    def test_usage_errors_exit_with_error(self, argv, capsys):
        assert main(argv) == EXIT_ERROR
        assert "usage:" in capsys.readouterr().err

    def test_help_exits_ok(self, capsys):
        assert main(["--help"]) == EXIT_OK
        assert "selftest" in capsys.readouterr().out

    @pytest.mark.parametrize("command", ["verify", "selftest"])
    @pytest.mark.parametrize("trials", ["0", "-2"])
    def test_rejects_non_positive_trials(self, command, trials):
        argv = [command, "--trials", trials]
        if command == "verify":
            argv.insert(1, str(CONFIGS / "ve1_cyclic_orthogonal.json"))
        assert main(argv) == EXIT_ERROR

    def test_history(self, capsys, semifix_home):
        ReportStorage(data_dir=semifix_home).append_history({"config": "x.json", "passed": True})
        assert main(["history", "--json"]) == EXIT_OK
        assert json.loads(capsys.readouterr().out)["runs"][0]["config"] == "x.json"
        assert main(["history", "--clear"]) == EXIT_OK
        assert ReportStorage(data_dir=semifix_home).load_history() == []

    def test_bad_environment(self, monkeypatch):
        monkeypatch.setenv("SEMIFIX_PRIME_BITS", "abc")
        assert main(["table", "--bounds", "1:1"]) == EXIT_ERROR
