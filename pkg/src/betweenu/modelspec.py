"""Build preference models from JSON descriptions.

The CLI reads models from files; tests and embedders can call
:func:`model_from_spec` on a plain dict.  Every description carries a
``kind`` plus kind-specific fields, and optionally ``eps_pref``:

    {"kind": "expected_utility", "u": [0.0, 0.4, 1.0]}
    {"kind": "weighted_utility", "u": [...], "w": [...]}
    {"kind": "disappointment_aversion", "u": [...], "beta": 1.0}
    {"kind": "implicit_kernel", "t_grid": [0.0, 0.5, 1.0],
     "phi": [[...], [...], [...]]}

Planted counterexample oracles are addressable too, so the checker CLI
can be pointed at known-bad preferences:

    {"kind": "cyclic_oracle"}
    {"kind": "jump", "threshold": 0.5, "drop": 0.2}
    {"kind": "quadratic", "matrix": [[...], ...]}
"""

from __future__ import annotations

import json

from .fixtures import cyclic_oracle, jump_oracle, quadratic_oracle
from .models import (
    DEFAULT_EPS_PREF,
    DisappointmentAversion,
    ExpectedUtility,
    ImplicitKernel,
    PreferenceModel,
    WeightedUtility,
)

KINDS = (
    "expected_utility",
    "weighted_utility",
    "disappointment_aversion",
    "implicit_kernel",
    "cyclic_oracle",
    "jump",
    "quadratic",
)


def _require(spec: dict, key: str, kind: str):
    if key not in spec:
        raise ValueError(f"model kind {kind!r} requires field {key!r}")
    return spec[key]


def model_from_spec(spec: dict) -> PreferenceModel:
    """Instantiate the model a JSON-style dict describes."""
    if not isinstance(spec, dict):
        raise ValueError(f"model description must be an object, got {type(spec).__name__}")
    kind = spec.get("kind")
    if kind not in KINDS:
        raise ValueError(f"unknown model kind {kind!r}; expected one of {', '.join(KINDS)}")
    eps_pref = float(spec.get("eps_pref", DEFAULT_EPS_PREF))

    if kind == "expected_utility":
        return ExpectedUtility(_require(spec, "u", kind), eps_pref)
    if kind == "weighted_utility":
        return WeightedUtility(_require(spec, "u", kind), _require(spec, "w", kind), eps_pref)
    if kind == "disappointment_aversion":
        return DisappointmentAversion(
            _require(spec, "u", kind), float(_require(spec, "beta", kind)), eps_pref
        )
    if kind == "implicit_kernel":
        return ImplicitKernel.from_table(
            _require(spec, "t_grid", kind), _require(spec, "phi", kind), eps_pref
        )
    if kind == "cyclic_oracle":
        return cyclic_oracle(eps_pref)
    if kind == "jump":
        return jump_oracle(
            float(spec.get("threshold", 0.5)), float(spec.get("drop", 0.2)), eps_pref
        )
    return quadratic_oracle(spec.get("matrix"), eps_pref)


def load_model(path: str) -> PreferenceModel:
    """Read a JSON model description from ``path`` and instantiate it."""
    with open(path, "r", encoding="utf-8") as fh:
        spec = json.load(fh)
    return model_from_spec(spec)
