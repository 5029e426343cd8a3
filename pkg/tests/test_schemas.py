"""
Tests for the configuration and report schemas
"""

import pytest
from pydantic import ValidationError

from semifix.api.schemas import ArrowEntry, ConfigFile, MultiplicityEntry, ScalarSpec


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
    return data


class TestScalarSpec:
    def test_variants(self):
        assert ScalarSpec(zeta_exp="1/3").variant == "zeta_exp"
        assert ScalarSpec(zeta_exp="0", val="2").variant == "loop"
        assert ScalarSpec(cyclo_coeffs=["1", "-1/2"]).variant == "cyclo_coeffs"
        coords = ScalarSpec(f_coords=[{"zeta_exp": "0"}, {"cyclo_coeffs": ["2"]}])
        assert coords.variant == "f_coords"

    def test_integers_are_accepted_as_rationals(self):
        assert ScalarSpec(zeta_exp=0).zeta_exp == "0"

    def test_exactly_one_variant(self):
        with pytest.raises(ValidationError, match="exactly one"):
            ScalarSpec(zeta_exp="0", cyclo_coeffs=["1"])
        with pytest.raises(ValidationError, match="exactly one"):
            ScalarSpec()

    def test_val_needs_zeta_exp(self):
        with pytest.raises(ValidationError, match="val is only valid"):
            ScalarSpec(val="1", cyclo_coeffs=["1"])

    @pytest.mark.parametrize("bad", ["1/0", "abc", 0.5, True])
    def test_bad_rationals(self, bad):
        with pytest.raises(ValidationError):
            ScalarSpec(zeta_exp=bad)

    def test_f_coords_shape(self):
        with pytest.raises(ValidationError, match="needs 2 entries"):
            ScalarSpec(f_coords=[{"zeta_exp": "0"}])
        nested = {"f_coords": [{"zeta_exp": "0"}, {"zeta_exp": "0"}]}
        with pytest.raises(ValidationError, match="k-scalars"):
            ScalarSpec(f_coords=[nested, {"zeta_exp": "0"}])

    def test_empty_coefficients(self):
        with pytest.raises(ValidationError, match="non-empty"):
            ScalarSpec(cyclo_coeffs=[])


class TestConfigFile:
    def test_defaults(self):
        config = ConfigFile.model_validate(_config())
        assert config.mode == "polarized"
        assert config.epsilon == 1
        assert config.trials == 5
        assert config.multiplicities == []

    def test_extra_fields_are_forbidden(self):
        with pytest.raises(ValidationError):
            ConfigFile.model_validate(_config(colour="blue"))

    def test_gamma_only_in_loop_regime(self):
        with pytest.raises(ValidationError, match="loop regime"):
            ConfigFile.model_validate(_config(gamma={"zeta_exp": "0", "val": "1"}))

    def test_numberfield_n_bound(self):
        with pytest.raises(ValidationError, match="n <= 2"):
            ConfigFile.model_validate(_config(n=3))

    def test_quadratic_needs_discriminant(self):
        with pytest.raises(ValidationError, match="discriminant d"):
            ConfigFile.model_validate(_config(presentation="quadratic"))
        with pytest.raises(ValidationError, match="nonzero"):
            ConfigFile.model_validate(_config(presentation="quadratic", d=0))

    def test_loop_rejects_presentation(self):
        loop = _config(regime="loop", presentation="split")
        with pytest.raises(ValidationError, match="numberfield regime only"):
            ConfigFile.model_validate(loop)

    def test_c_and_gamma_are_exclusive(self):
        loop = _config(regime="loop", gamma={"zeta_exp": "0", "val": "0"})
        with pytest.raises(ValidationError, match="c or gamma"):
            ConfigFile.model_validate(loop)

    def test_duplicate_selectors(self):
        entries = [{"vertex": "b0", "d": 1}, {"vertex": "b0", "d": 2}]
        with pytest.raises(ValidationError, match="duplicate vertex selectors"):
            ConfigFile.model_validate(_config(multiplicities=entries))

    def test_negative_multiplicity(self):
        with pytest.raises(ValidationError):
            MultiplicityEntry(vertex="b0", d=-1)


class TestReportSchemas:
    def test_arrow_alias(self):
        arrow = ArrowEntry.model_validate({"from": "b0", "to": "b1"})
        assert arrow.source == "b0"
        assert arrow.model_dump(by_alias=True)["from"] == "b0"
        assert ArrowEntry(source="b1", to="b2").source == "b1"
