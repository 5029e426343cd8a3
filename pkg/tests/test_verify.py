"""
Tests for the verification harness
"""

from unittest.mock import patch

import pytest

from semifix.classifier import ORTH, ORTH_OR_SYMP, DimRange, PredictedDimensions, classify
from semifix.errors import OracleRegimeError, SetupValidationError
from semifix.oracle.checks import extract_vertex_pairing
from semifix.oracle.verify import FAIL, PASS, resolution_keys, resolution_label, verify

VE1_MULT = {"b0": 1, "b1": 1, "b2": 1}


def _checks_named(result, name):
    return [c for trial in result["trials"] for c in trial["checks"] if c["name"] == name]


class TestVerify:
    def test_ve1_passes(self, ve1_params):
        result = verify(ve1_params, {"b0": 1, "b1": 1, "b2": 1}, trials=2)
        assert result["passed"], result["failures"]
        assert result["summary"]["trials"] == 2
        assert result["summary"]["failed"] == 0
        assert result["trials"][0]["dims"] == {"H": 1, "g_xi": 1, "H_prime": 2, "g_xi_prime": 2}

    def test_checks_are_named(self, ve1_params):
        result = verify(ve1_params, {"b0": 1, "b1": 1, "b2": 1}, trials=1)
        names = {c["name"] for c in result["trials"][0]["checks"]}
        assert {"isotypic-multiplicities", "dim Lie H", "dim g(xi)", "twist-coherence"} <= names
        assert "pairing-perfect:b0" in names
        assert all(c["status"] == PASS for c in result["trials"][0]["checks"])

    def test_choice_independence_is_checked(self, ve1_params):
        result = verify(ve1_params, {"b0": 1, "b1": 1, "b2": 1}, trials=2, seed=10)
        assert result["trials"][1]["checks"][-1]["name"] == "choice-independence"
        assert [t["seed"] for t in result["trials"]] == [10, 11]

    def test_cc1(self, cc1_params):
        result = verify(cc1_params, {"b0": 2, "b1": 2}, trials=1)
        assert result["passed"], result["failures"]
        assert (result["trials"][0]["dims"]["H"], result["trials"][0]["dims"]["g_xi"]) == (4, 4)

    def test_ee1(self, ee1_params):
        result = verify(ee1_params, {"b0": 1, "b1": 1}, trials=1)
        assert result["passed"], result["failures"]
        assert (result["trials"][0]["dims"]["H"], result["trials"][0]["dims"]["g_xi"]) == (1, 2)

    def test_linear(self, linear_params):
        result = verify(linear_params, {"b0": 1, "b1": 1}, trials=1)
        assert result["passed"], result["failures"]
        assert (result["trials"][0]["dims"]["H"], result["trials"][0]["dims"]["g_xi"]) == (2, 1)

    def test_outer_split_resolution(self, outer_gl_params):
        result = verify(outer_gl_params, {"b0": 2}, trials=2)
        assert result["passed"], result["failures"]
        assert set(result["resolution"]) == {"vertex b0", "arrow b0->b0"}
        assert result["resolution"]["vertex b0"] in ("Orth", "Symp")
        assert result["resolution"]["arrow b0->b0"] in ("Wedge2", "Sym2")

    def test_corrupted_prediction_fails(self, ve1_params):
        wrong = PredictedDimensions(H=DimRange(99, 99), g_xi=DimRange(99, 99), over="k_sigma")
        with patch("semifix.oracle.verify.predict_dimensions", return_value=wrong):
            result = verify(ve1_params, {"b0": 1, "b1": 1, "b2": 1}, trials=1)
        assert not result["passed"]
        failed = {c["name"] for c in result["failures"]}
        assert {"dim Lie H", "dim g(xi)"} <= failed
        assert all(c["status"] == FAIL for c in result["failures"])
        assert result["failures"][0]["expected"] == "99"

    def test_loop_regime_is_rejected(self, loop_odd_params):
        with pytest.raises(OracleRegimeError):
            verify(loop_odd_params, {"b0": 1})

    def test_inconsistent_multiplicities(self, ve1_params):
        with pytest.raises(SetupValidationError, match="perfect pairing"):
            verify(ve1_params, {"b1": 1, "b2": 2})

    @pytest.mark.parametrize("trials", [0, -1])
    def test_trials_must_be_positive(self, ve1_params, trials):
        with pytest.raises(ValueError, match="trials must be positive"):
            verify(ve1_params, VE1_MULT, trials=trials)


class TestSignConsistency:
    def test_vertex_sign_is_read_from_the_pairing(self, ve1_params):
        with patch("semifix.oracle.verify.vertex_sign", return_value=-1):
            result = verify(ve1_params, VE1_MULT, trials=1)
        [check] = _checks_named(result, "vertex-sign:b0")
        assert check["status"] == PASS
        assert check["detail"] == "epsilon_i = +1"

    def test_flipped_pairing_sign_is_a_failure(self, ve1_params):
        def flipped(setup, vertex_id):
            pairing = extract_vertex_pairing(setup, vertex_id)
            return {**pairing, "epsilon_i": -pairing["epsilon_i"]}

        with patch("semifix.oracle.verify.extract_vertex_pairing", side_effect=flipped):
            result = verify(ve1_params, VE1_MULT, trials=1)
        assert not result["passed"]
        [check] = _checks_named(result, "vertex-sign:b0")
        assert (check["status"], check["expected"], check["actual"]) == (FAIL, ORTH, "Symp")

    def test_zero_multiplicity_vertex_is_skipped(self, ve1_params):
        result = verify(ve1_params, {"b0": 0, "b1": 1, "b2": 1}, trials=1)
        assert _checks_named(result, "vertex-sign:b0") == []


class TestResolutionLabels:
    def test_labels_round_trip(self, outer_gl_params):
        report = classify(outer_gl_params)
        assert report.factors[0].kind == ORTH_OR_SYMP
        key = report.factors[0].key
        assert resolution_label(key, report) == "vertex b0"
        assert resolution_keys(report, {"vertex b0": ORTH}) == {key: ORTH}

    def test_arrow_label_names_target(self, ve1_params):
        report = classify(ve1_params)
        assert resolution_label(("arrow", "b1"), report) == "arrow b1->b2"
