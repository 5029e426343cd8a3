"""
Tests for the schema <-> core adapter
"""

from unittest.mock import patch

import pytest

from semifix.adapter import (
    config_from_params,
    multiplicities_from_config,
    params_from_config,
    report_to_file,
    table_row_to_dict,
)
from semifix.api.schemas import ConfigFile, ReportFile
from semifix.classifier import classify
from semifix.errors import ConfigError, SetupValidationError
from semifix.loop_table import report_agrees, table_with_witnesses


def _config(**overrides):
    data = {
        "regime": "numberfield",
        "M": 3,
        "m": 3,
        "beta": {"zeta_exp": "0"},
        "c": {"zeta_exp": "0"},
        "xi": {"zeta_exp": "1/3"},
    }
    data.update(overrides)
    return ConfigFile.model_validate(data)


class TestParamsFromConfig:
    def test_ve1(self, ve1_params):
        p = params_from_config(_config())
        assert p.describe() == ve1_params.describe()
        assert p.xi_in_Xi

    def test_norm_violation(self):
        with pytest.raises(SetupValidationError):
            params_from_config(_config(c={"cyclo_coeffs": ["2"]}))

    def test_loop_scalars_need_zeta_exp(self):
        config = _config(regime="loop", c=None, M=1, m=1, beta={"cyclo_coeffs": ["1"]},
                         gamma={"zeta_exp": "0", "val": "0"}, xi={"zeta_exp": "0"})
        with pytest.raises(ConfigError, match="field 'beta'"):
            params_from_config(config)

    def test_val_outside_loop(self):
        with pytest.raises(ConfigError, match="only valid in the loop regime"):
            params_from_config(_config(beta={"zeta_exp": "0", "val": "1"}))

    def test_f_coords_need_rank_two(self):
        xi = {"f_coords": [{"zeta_exp": "0"}, {"zeta_exp": "0"}]}
        with pytest.raises(ConfigError, match="rank-2 presentation"):
            params_from_config(_config(xi=xi))

    def test_structure_violation(self):
        with pytest.raises(SetupValidationError):
            params_from_config(_config(n=2, sigma="identity", presentation="trivial"))


class TestMultiplicities:
    def test_by_id_and_by_value(self):
        config = _config(multiplicities=[{"vertex": "b1", "d": 2}])
        spectrum = classify(params_from_config(config)).spectrum
        assert multiplicities_from_config(config, spectrum) == {"b0": 0, "b1": 2, "b2": 0}
        label = spectrum.vertex("b2").label
        by_value = _config(multiplicities=[{"vertex": label, "d": 1}])
        assert multiplicities_from_config(by_value, spectrum)["b2"] == 1

    def test_no_match(self):
        config = _config(multiplicities=[{"vertex": "b9", "d": 1}])
        spectrum = classify(params_from_config(config)).spectrum
        with pytest.raises(SetupValidationError, match="no vertex matches 'b9'"):
            multiplicities_from_config(config, spectrum)

    def test_two_selectors_for_one_vertex(self):
        spectrum = classify(params_from_config(_config())).spectrum
        label = spectrum.vertex("b0").label
        config = _config(multiplicities=[{"vertex": "b0", "d": 1}, {"vertex": label, "d": 1}])
        with pytest.raises(SetupValidationError, match="both select b0"):
            multiplicities_from_config(config, spectrum)


class TestConfigFromParams:
    @pytest.mark.parametrize("name", ["ve1_params", "cc1_params", "ee1_params", "outer_gl_params",
                                      "linear_params", "loop_odd_params"])
    def test_round_trip(self, name, request):
        p = request.getfixturevalue(name)
        back = params_from_config(ConfigFile.model_validate(config_from_params(p)))
        assert back.describe() == p.describe()
        assert back.mode == p.mode

    def test_multiplicities_skip_zero(self, ve1_params):
        config = config_from_params(ve1_params, {"b0": 1, "b1": 0, "b2": 0})
        assert config["multiplicities"] == [{"vertex": "b0", "d": 1}]

    def test_witnesses_round_trip(self):
        for row, witness, _ in table_with_witnesses(nmax=1, mnmax=2):
            back = params_from_config(ConfigFile.model_validate(config_from_params(witness)))
            assert back.describe() == witness.describe(), row.key


class TestReportToFile:
    def test_ve1(self, ve1_params):
        report = report_to_file(classify(ve1_params), {"b0": 1, "b1": 1, "b2": 1})
        assert [c.shape for c in report.components] == ["VE-1"]
        assert [v.star for v in report.vertices] == ["b0", "b2", "b1"]
        assert report.predicted_dims.over == "k_sigma"
        assert (report.predicted_dims.dims.H.low, report.predicted_dims.dims.g_xi.low) == (1, 1)
        assert report.predicted_dims.prime_field.H.low == 2

    def test_json_round_trip(self, ve1_params):
        report = report_to_file(classify(ve1_params), {"b0": 1, "b1": 1, "b2": 1})
        dumped = report.model_dump(by_alias=True)
        assert "from" in dumped["arrows"][0]
        assert ReportFile.model_validate(dumped) == report

    def test_without_multiplicities(self, ve1_params):
        assert report_to_file(classify(ve1_params)).predicted_dims is None

    def test_undetermined_options(self, outer_gl_params):
        report = report_to_file(classify(outer_gl_params), {"b0": 2})
        factor = report.components[0].factors[0]
        assert sorted(factor.options) == ["Orth", "Symp"]
        assert report.predicted_dims.dims.H.high == 3

    def test_linear_has_no_star(self, linear_params):
        report = report_to_file(classify(linear_params))
        assert all(v.star is None for v in report.vertices)
        assert "xi_in_Xi" in report.params
        assert report.loop_case is None

    def test_loop_case(self, loop_odd_params):
        report = report_to_file(classify(loop_odd_params))
        assert report.loop_case == {"key": "A", "shape": "VE", "agrees": True}

    def test_loop_case_disagreement_is_reported(self, loop_odd_params):
        with patch("semifix.adapter.report_agrees", return_value=False):
            report = report_to_file(classify(loop_odd_params))
        assert report.loop_case["agrees"] is False


class TestTableRows:
    def test_row_dict(self):
        row, witness, report = table_with_witnesses(nmax=1, mnmax=1)[0]
        entry = table_row_to_dict(row, witness, report, report_agrees(row, report))
        assert entry["key"] == "A"
        assert entry["agrees"]
        assert entry["witness"]["regime"] == "loop"
        assert entry["classified"] == ["VE-0"]
