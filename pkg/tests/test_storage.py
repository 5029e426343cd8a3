"""
Tests for the storage layer (runtime settings, configs, reports, history)
"""

import json

import pytest

from semifix.api.schemas import ReportFile
from semifix.errors import ConfigError
from semifix.oracle.linsolve import DEFAULT_EXACT_LIMIT
from semifix.storage.config import ConfigStorage, load_runtime_settings
from semifix.storage.reports import ReportStorage

VE1_CONFIG = {
    "regime": "numberfield",
    "M": 3,
    "m": 3,
    "beta": {"zeta_exp": "0"},
    "c": {"zeta_exp": "0"},
    "xi": {"zeta_exp": "1/3"},
    "multiplicities": [{"vertex": "b0", "d": 1}],
}


class TestRuntimeSettings:
    def test_defaults(self, semifix_home):
        settings = load_runtime_settings()
        assert settings.home == semifix_home
        assert settings.log_level == "INFO"
        assert settings.exact_limit == DEFAULT_EXACT_LIMIT

    def test_environment_overrides(self, monkeypatch):
        monkeypatch.setenv("SEMIFIX_LOG_LEVEL", "debug")
        monkeypatch.setenv("SEMIFIX_EXACT_LIMIT", "10")
        monkeypatch.setenv("SEMIFIX_PRIME_BITS", "20")
        settings = load_runtime_settings()
        assert (settings.log_level, settings.exact_limit, settings.prime_bits) == ("DEBUG", 10, 20)

    def test_bad_integer(self, monkeypatch):
        monkeypatch.setenv("SEMIFIX_EXACT_LIMIT", "abc")
        with pytest.raises(ConfigError, match="field 'SEMIFIX_EXACT_LIMIT'"):
            load_runtime_settings()

    def test_prime_bits_minimum(self, monkeypatch):
        monkeypatch.setenv("SEMIFIX_PRIME_BITS", "4")
        with pytest.raises(ConfigError, match="at least 8"):
            load_runtime_settings()


class TestConfigStorage:
    @pytest.fixture
    def storage(self, tmp_path):
        return ConfigStorage(data_dir=tmp_path)

    def test_save_and_load_roundtrip(self, storage):
        path = storage.save_config(VE1_CONFIG, "ve1")
        assert path == storage.config_file("ve1")
        assert path.exists()
        loaded = storage.parse_config(storage.load_config(path))
        assert loaded == storage.parse_config(VE1_CONFIG)

    def test_load_by_name(self, storage):
        storage.save_config(VE1_CONFIG, "ve1")
        assert storage.load_config("ve1")["M"] == 3

    def test_missing_file(self, storage, tmp_path):
        with pytest.raises(FileNotFoundError):
            storage.load_config(tmp_path / "absent.json")

    def test_invalid_json_reports_line(self, storage, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text('{\n  "regime": "loop",\n  "m": \n}\n', encoding="utf-8")
        with pytest.raises(ConfigError, match="line 4") as info:
            storage.load_config(path)
        assert info.value.line == 4

    def test_top_level_must_be_object(self, storage, tmp_path):
        path = tmp_path / "list.json"
        path.write_text("[1, 2]", encoding="utf-8")
        with pytest.raises(ConfigError, match="object"):
            storage.load_config(path)

    def test_parse_names_the_field(self, storage):
        with pytest.raises(ConfigError, match="field 'm'") as info:
            storage.parse_config({**VE1_CONFIG, "m": 0})
        assert info.value.field == "m"

    def test_invalid_name(self, storage):
        with pytest.raises(ConfigError, match="invalid config name"):
            storage.save_config(VE1_CONFIG, "../escape")

    def test_defaults_to_home(self, semifix_home):
        assert ConfigStorage().configs_dir == semifix_home / "configs"


class TestReportStorage:
    @pytest.fixture
    def storage(self, tmp_path):
        return ReportStorage(data_dir=tmp_path)

    @pytest.fixture
    def report(self):
        return ReportFile(
            params={"regime": "numberfield", "M": 1},
            vertices=[{"id": "b0", "b_value": "1", "residue_degree": 1}],
            arrows=[{"from": "b0", "to": "b0"}],
            components=[],
        )

    def test_render_is_deterministic(self, storage, report):
        text = storage.render(report)
        assert text == storage.render(ReportFile.model_validate(json.loads(text)))
        assert '"from": "b0"' in text

    def test_history_append_and_recent(self, storage):
        assert storage.load_history() == []
        for i in range(3):
            storage.append_history({"run": i, "passed": i != 1})
        history = storage.load_history()
        assert [entry["run"] for entry in history] == [0, 1, 2]
        assert all("timestamp" in entry for entry in history)
        assert [e["run"] for e in storage.get_recent_entries(2)] == [1, 2]
        assert [e["run"] for e in storage.filter_entries(lambda e: not e["passed"])] == [1]

    def test_history_corruption(self, storage):
        storage.history_file.write_text("{}", encoding="utf-8")
        with pytest.raises(ValueError, match="expected list"):
            storage.load_history()

    def test_append_needs_dict(self, storage):
        with pytest.raises(ValueError, match="dictionary"):
            storage.append_history(["not", "a", "dict"])

    def test_clear_history(self, storage):
        storage.append_history({"run": 0})
        storage.clear_history()
        assert storage.load_history() == []
