"""JSON configuration loading and validation for model parameters.

The schema (see ``docs/config.md``) mirrors the physical constants:

    {
      "Q": 343.0, "A": 202.0, "B": 1.9, "Tc": -10.0,
      "transport": "diffusive",            # or "relax_to_mean"
      "D": 0.35,                           # diffusive only
      "C": 3.09,                           # relax_to_mean only
      "R": 1.0, "eps": 0.01, "N": 1,
      "beta": 23.5,                        # obliquity for computed series
      "s_mode": "quadratic",               # or "computed"
      "albedo": {"kind": "budyko", "alpha1": 0.32, "alpha2": 0.62},
      # jormungand adds "alphai" and "rho"
    }

``s_mode = "computed"`` projects the exact insolation integral at the
given obliquity onto modes 0..N; ``"quadratic"`` uses the fixed two-term
series.
"""

from __future__ import annotations

import json
from pathlib import Path

from .albedo import BudykoAlbedo, JormungandAlbedo
from .insolation import DEFAULT_OBLIQUITY_DEG, s_coefficients, s_quadratic
from .model import DIFFUSIVE, RELAX_TO_MEAN, ModelParams

__all__ = ["ConfigError", "params_from_dict", "params_to_dict", "load_config"]

_TRANSPORTS = {
    "diffusive": DIFFUSIVE,
    "relax_to_mean": RELAX_TO_MEAN,
    "relax": RELAX_TO_MEAN,
}

_TOP_KEYS = {"Q", "A", "B", "C", "D", "R", "Tc", "eps", "N", "beta",
             "transport", "albedo", "s_mode"}
_ALBEDO_KEYS = {"kind", "alpha1", "alphai", "alpha2", "rho"}


class ConfigError(ValueError):
    """A configuration file or dictionary violates the schema."""


def _require(cond: bool, message: str):
    if not cond:
        raise ConfigError(message)


def _number(d: dict, key: str, default=None) -> float | None:
    if key not in d:
        return default
    value = d[key]
    _require(isinstance(value, (int, float)) and not isinstance(value, bool),
             f"key {key!r} must be a number, got {value!r}")
    return float(value)


def params_from_dict(config: dict) -> ModelParams:
    """Validate a configuration dictionary and build the parameter set."""
    _require(isinstance(config, dict), "configuration must be a JSON object")
    unknown = set(config) - _TOP_KEYS
    _require(not unknown, f"unknown configuration keys: {sorted(unknown)}")
    for key in ("Q", "A", "B", "Tc", "transport", "albedo"):
        _require(key in config, f"missing required key {key!r}")

    transport_raw = config["transport"]
    _require(transport_raw in _TRANSPORTS,
             f"transport must be one of {sorted(set(_TRANSPORTS))}, "
             f"got {transport_raw!r}")
    transport = _TRANSPORTS[transport_raw]

    albedo_cfg = config["albedo"]
    _require(isinstance(albedo_cfg, dict), "albedo must be an object")
    unknown = set(albedo_cfg) - _ALBEDO_KEYS
    _require(not unknown, f"unknown albedo keys: {sorted(unknown)}")
    kind = albedo_cfg.get("kind")
    _require(kind in ("budyko", "jormungand"),
             f"albedo.kind must be 'budyko' or 'jormungand', got {kind!r}")
    alpha1 = _number(albedo_cfg, "alpha1")
    alpha2 = _number(albedo_cfg, "alpha2")
    _require(alpha1 is not None and alpha2 is not None,
             "albedo requires alpha1 and alpha2")
    try:
        if kind == "jormungand":
            alphai = _number(albedo_cfg, "alphai")
            rho = _number(albedo_cfg, "rho")
            _require(alphai is not None and rho is not None,
                     "jormungand albedo requires alphai and rho")
            albedo = JormungandAlbedo(alpha1, alphai, alpha2, rho)
        else:
            _require("alphai" not in albedo_cfg and "rho" not in albedo_cfg,
                     "alphai/rho apply only to the jormungand albedo")
            albedo = BudykoAlbedo(alpha1, alpha2)
    except ValueError as exc:
        raise ConfigError(f"invalid albedo: {exc}") from exc

    N = config.get("N", 1)
    _require(isinstance(N, int) and not isinstance(N, bool) and N >= 1,
             f"N must be an integer >= 1, got {N!r}")

    s_mode = config.get("s_mode", "quadratic")
    _require(s_mode in ("quadratic", "computed"),
             f"s_mode must be 'quadratic' or 'computed', got {s_mode!r}")
    beta = _number(config, "beta", DEFAULT_OBLIQUITY_DEG)
    if s_mode == "computed":
        s = s_coefficients(beta_deg=beta, max_mode=N)
    else:
        s = s_quadratic()

    try:
        return ModelParams(
            Q=_number(config, "Q"),
            A=_number(config, "A"),
            B=_number(config, "B"),
            T_c=_number(config, "Tc"),
            albedo=albedo,
            transport=transport,
            D=_number(config, "D"),
            C=_number(config, "C"),
            N=N,
            eps=_number(config, "eps", 1e-2),
            R=_number(config, "R", 1.0),
            s=s,
        )
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"invalid parameters: {exc}") from exc


def params_to_dict(params: ModelParams, s_mode: str = "quadratic",
                   beta: float = DEFAULT_OBLIQUITY_DEG) -> dict:
    """Schema dictionary for a parameter set (inverse of params_from_dict)."""
    albedo = {"kind": params.albedo_kind,
              "alpha1": params.albedo.alpha1,
              "alpha2": params.albedo.alpha2}
    if params.albedo_kind == "jormungand":
        albedo["alphai"] = params.albedo.alpha_ice
        albedo["rho"] = params.albedo.rho
    out = {
        "Q": params.Q, "A": params.A, "B": params.B, "Tc": params.T_c,
        "transport": params.transport, "R": params.R, "eps": params.eps,
        "N": params.N, "albedo": albedo, "s_mode": s_mode, "beta": beta,
    }
    if params.D is not None:
        out["D"] = params.D
    if params.C is not None:
        out["C"] = params.C
    return out


def load_config(path) -> ModelParams:
    """Load and validate a JSON configuration file."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed JSON in {path}: {exc}") from exc
    return params_from_dict(data)
