import json

import pytest

from betweenu import (
    BlackBoxOracle,
    DisappointmentAversion,
    ExpectedUtility,
    ImplicitKernel,
    WeightedUtility,
    load_model,
    model_from_spec,
)


class TestModelFromSpec:
    def test_expected_utility(self):
        m = model_from_spec({"kind": "expected_utility", "u": [0.0, 0.4, 1.0]})
        assert isinstance(m, ExpectedUtility)
        assert m.n_outcomes == 3

    def test_weighted_utility(self):
        m = model_from_spec(
            {"kind": "weighted_utility", "u": [0.0, 1.0], "w": [1.0, 2.0]}
        )
        assert isinstance(m, WeightedUtility)

    def test_disappointment_aversion(self):
        m = model_from_spec(
            {"kind": "disappointment_aversion", "u": [0.0, 1.0], "beta": 2.0}
        )
        assert isinstance(m, DisappointmentAversion)
        assert m.beta == 2.0

    def test_implicit_kernel(self):
        m = model_from_spec(
            {
                "kind": "implicit_kernel",
                "t_grid": [0.0, 1.0],
                "phi": [[0.0, 0.2], [0.8, 1.0]],
            }
        )
        assert isinstance(m, ImplicitKernel)

    def test_fixture_kinds(self):
        assert isinstance(model_from_spec({"kind": "cyclic_oracle"}), BlackBoxOracle)
        assert isinstance(
            model_from_spec({"kind": "jump", "threshold": 0.4, "drop": 0.2}),
            BlackBoxOracle,
        )
        assert isinstance(model_from_spec({"kind": "quadratic"}), BlackBoxOracle)

    def test_eps_pref_override(self):
        m = model_from_spec(
            {"kind": "expected_utility", "u": [0.0, 1.0], "eps_pref": 1e-7}
        )
        assert m.eps_pref == 1e-7

    def test_unknown_kind_rejected(self):
        with pytest.raises(ValueError):
            model_from_spec({"kind": "prospect_theory"})

    def test_missing_fields_rejected(self):
        with pytest.raises(ValueError):
            model_from_spec({"kind": "expected_utility"})
        with pytest.raises(ValueError):
            model_from_spec({"kind": "weighted_utility", "u": [0.0, 1.0]})
        with pytest.raises(ValueError):
            model_from_spec({"kind": "implicit_kernel"})


class TestLoadModel:
    def test_round_trip(self, tmp_path):
        path = tmp_path / "model.json"
        path.write_text(json.dumps({"kind": "expected_utility", "u": [0.0, 1.0]}))
        m = load_model(str(path))
        assert isinstance(m, ExpectedUtility)

    def test_bad_json_raises_value_error_family(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        with pytest.raises(ValueError):
            load_model(str(path))
