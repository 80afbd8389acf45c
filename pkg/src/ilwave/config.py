"""Config-file parsing and validation for the scenario runner.

The format is a flat key = value text file with ``#`` comments; keys are
dotted paths (``grid.n``, ``solver.dt``).  Every scenario declares its full
key set with defaults; unknown keys are hard errors, as are values that
break module invariants.  Validation collects all problems with their field
paths before giving up.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

SCENARIOS = (
    "soliton_travel", "two_soliton", "decay_liminf", "far_field_decay",
    "corollary_ll", "bo_limit", "kdv_limit", "regularity_propagation",
    "breather_obstruction", "symbol_table",
)


class ConfigError(Exception):
    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


def parse_kv_text(text: str) -> dict:
    """Parse ``key = value`` lines; later duplicates are errors."""
    raw = {}
    errors = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            errors.append(f"line {lineno}: expected 'key = value', got {stripped!r}")
            continue
        key, value = stripped.split("=", 1)
        key = key.strip()
        value = value.strip()
        if not key:
            errors.append(f"line {lineno}: empty key")
            continue
        if key in raw:
            errors.append(f"line {lineno}: duplicate key {key!r}")
            continue
        raw[key] = value
    if errors:
        raise ConfigError(errors)
    return raw


def parse_kv_file(path) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_kv_text(fh.read())


# ---------------------------------------------------------------------------
# typed field specs

def _float(s):
    return float(s)


def _int(s):
    v = float(s)
    if v != int(v):
        raise ValueError(f"expected an integer, got {s!r}")
    return int(v)


def _bool(s):
    low = s.strip().lower()
    if low in ("true", "1", "yes"):
        return True
    if low in ("false", "0", "no"):
        return False
    raise ValueError(f"expected a boolean, got {s!r}")


def _str(s):
    return s


def _float_list(s):
    parts = [p for p in s.replace(",", " ").split() if p]
    return tuple(float(p) for p in parts)


@dataclass(frozen=True)
class FieldSpec:
    parse: object
    default: object = None   # None with required=True means mandatory
    required: bool = False
    check: object = None     # value -> error message or None


def _positive(name):
    return lambda v: None if (isinstance(v, (int, float)) and math.isfinite(v) and v > 0) \
        else f"{name} must be positive and finite"


def _nonneg(name):
    return lambda v: None if v >= 0 else f"{name} must be nonnegative"


def _even_min16(v):
    return None if (v % 2 == 0 and v >= 16) else "grid size must be even and >= 16"


def _choice(options):
    return lambda v: None if v in options else f"must be one of {sorted(options)}"


_COMMON = {
    "scenario": FieldSpec(_str, required=True, check=_choice(set(SCENARIOS))),
    "seed": FieldSpec(_int, 0, check=_nonneg("seed")),
    "output_dir": FieldSpec(_str, ""),
}

_GRID = {
    "grid.n": FieldSpec(_int, required=True, check=_even_min16),
    "grid.l_domain": FieldSpec(_float, required=True, check=_positive("period length")),
}

def _solver(dt, t_end, stride):
    return {
        "solver.dt": FieldSpec(_float, dt, check=_positive("dt")),
        "solver.t_end": FieldSpec(_float, t_end, check=_nonneg("t_end")),
        "solver.snapshot_stride": FieldSpec(_int, stride, check=_positive("snapshot_stride")),
        "solver.integrator": FieldSpec(_str, "etdrk4", check=_choice({"etdrk4", "ifrk4"})),
        "solver.phi_contour_points": FieldSpec(
            _int, 32, check=lambda v: None if v >= 16 else "phi_contour_points must be >= 16"),
    }

def _equation(kind="ilw", classical=True):
    return {
        "equation.kind": FieldSpec(_str, kind, check=_choice({"ilw", "bo", "kdv"})),
        "equation.delta": FieldSpec(_float, 1.0, check=_positive("depth parameter")),
        "equation.bo_sign": FieldSpec(_int, 1, check=_choice({1, -1})),
        "equation.k": FieldSpec(_int, 2, check=lambda v: None if v >= 2 else "k must be >= 2"),
        "equation.coeffs": FieldSpec(_float_list, ()),
        "equation.classical": FieldSpec(_bool, classical),
    }

_GAUSSIAN = {
    "initial.amplitude": FieldSpec(_float, 1.0),
    "initial.width": FieldSpec(_float, 4.0, check=_positive("width")),
    "initial.center": FieldSpec(_float, 0.0),
    "initial.carrier": FieldSpec(_float, 0.0, check=_nonneg("carrier")),
    "initial.zero_mean": FieldSpec(_bool, False),
}


def _schema_for(scenario: str) -> dict:
    s = dict(_COMMON)
    if scenario == "symbol_table":
        s.update({
            "table.delta": FieldSpec(_float, 1.0, check=_positive("depth parameter")),
            "table.xi_min": FieldSpec(_float, -10.0),
            "table.xi_max": FieldSpec(_float, 10.0),
            "table.count": FieldSpec(_int, 401, check=_positive("count")),
        })
        return s
    s.update(_GRID)
    if scenario == "soliton_travel":
        s.update(_solver(1e-3, 2.0, 200))
        s.update(_equation())
        s["initial.c"] = FieldSpec(_float, 2.0)
        s["initial.center"] = FieldSpec(_float, 0.0)
        s["soliton.tol"] = FieldSpec(_float, 1e-8, check=_positive("tolerance"))
    elif scenario == "two_soliton":
        s.update(_solver(1e-3, 2.0, 200))
        s.update(_equation())
        s["initial.c1"] = FieldSpec(_float, 3.0)
        s["initial.c2"] = FieldSpec(_float, 1.8)
        s["initial.separation"] = FieldSpec(_float, 20.0, check=_positive("separation"))
        s["soliton.tol"] = FieldSpec(_float, 1e-8, check=_positive("tolerance"))
    elif scenario == "decay_liminf":
        s.update(_solver(0.02, 100.0, 100))
        s.update(_equation())
        s.update(_GAUSSIAN)
        s["initial.kind"] = FieldSpec(_str, "gaussian", check=_choice({"gaussian", "soliton"}))
        s["initial.c"] = FieldSpec(_float, 2.0)
        s["soliton.tol"] = FieldSpec(_float, 1e-8, check=_positive("tolerance"))
        s["schedule.a"] = FieldSpec(
            _float, 0.0, check=lambda v: None if 0.0 <= v < 0.5 else "exponent a must lie in [0, 1/2)")
        s["schedule.capital_c"] = FieldSpec(_float, 1.0, check=_positive("capital_c"))
    elif scenario == "far_field_decay":
        s.update(_solver(0.05, 40.0, 40))
        s.update(_equation())
        s.update(_GAUSSIAN)
        s["schedule.epsilon"] = FieldSpec(_float, 0.1, check=_positive("epsilon"))
        s["probe.times"] = FieldSpec(_float_list, (10.0, 20.0, 40.0))
    elif scenario == "corollary_ll":
        s.update(_solver(0.05, 200.0, 40))
        s.update(_equation())
        s["initial.c"] = FieldSpec(_float, 2.0)
        s["schedule.epsilon"] = FieldSpec(_float, 2.0, check=_positive("epsilon"))
        s["soliton.tol"] = FieldSpec(_float, 1e-8, check=_positive("tolerance"))
    elif scenario == "bo_limit":
        s.update(_solver(1e-3, 1.0, 100))
        s.update(_GAUSSIAN)
        s["limit.deltas"] = FieldSpec(_float_list, (5.0, 10.0, 20.0))
    elif scenario == "kdv_limit":
        s.update(_solver(1e-3, 1.0, 100))
        s.update(_GAUSSIAN)
        s["limit.deltas"] = FieldSpec(_float_list, (0.2, 0.1, 0.05))
    elif scenario == "regularity_propagation":
        s.update(_solver(2.5e-4, 0.5, 100))
        s.update(_equation())
        s["initial.x0"] = FieldSpec(_float, 0.0)
        s["initial.m"] = FieldSpec(_int, 3, check=lambda v: None if v >= 2 else "m must be >= 2")
        s["initial.left_roughness"] = FieldSpec(
            _float, 0.6, check=lambda v: None if v > 0.5 else "left_roughness must exceed 0.5")
        s["initial.rough_amplitude"] = FieldSpec(_float, 1.0, check=_nonneg("rough_amplitude"))
        s["initial.rough_extent"] = FieldSpec(_float, 24.0, check=_positive("rough_extent"))
        s["initial.right_amplitude"] = FieldSpec(_float, 0.5)
        s["initial.right_width"] = FieldSpec(_float, 4.0, check=_positive("right_width"))
        s["initial.right_offset"] = FieldSpec(_float, 8.0, check=_positive("right_offset"))
        s["initial.cutoff_margin"] = FieldSpec(_float, 1.0, check=_positive("cutoff_margin"))
        s["probe.gamma"] = FieldSpec(_float, 1.0, check=_positive("gamma"))
        s["probe.epsilon_shift"] = FieldSpec(_float, 0.5, check=_positive("epsilon_shift"))
        s["probe.r_width"] = FieldSpec(_float, 5.0, check=_positive("r_width"))
        s["probe.order"] = FieldSpec(_int, 2, check=_positive("order"))
    elif scenario == "breather_obstruction":
        s.update(_solver(2e-3, 5.0, 100))
        s.update(_equation(kind="bo", classical=False))
        s["equation.bo_sign"] = FieldSpec(_int, -1, check=_choice({1, -1}))
        s.update(_GAUSSIAN)
    return s


def validate_raw(raw: dict) -> dict:
    """Resolve + validate a parsed key-value dict; raises ConfigError."""
    errors = []
    scenario = raw.get("scenario")
    if scenario is None:
        raise ConfigError(["scenario: missing (pick one of %s)" % (SCENARIOS,)])
    if scenario not in SCENARIOS:
        raise ConfigError([f"scenario: unknown scenario {scenario!r}"])
    schema = _schema_for(scenario)

    unknown = sorted(set(raw) - set(schema))
    errors.extend(f"{k}: unknown key" for k in unknown)

    resolved = {}
    for key, spec in schema.items():
        if key in raw:
            try:
                value = spec.parse(raw[key])
            except ValueError as exc:
                errors.append(f"{key}: {exc}")
                continue
        elif spec.required:
            errors.append(f"{key}: missing required key")
            continue
        else:
            value = spec.default
        if spec.check is not None and value is not None:
            msg = spec.check(value)
            if msg:
                errors.append(f"{key}: {msg}")
                continue
        resolved[key] = value

    if not errors:
        errors.extend(_cross_checks(scenario, resolved))
    if errors:
        raise ConfigError(sorted(errors))
    if not resolved.get("output_dir"):
        resolved["output_dir"] = scenario
    return resolved


def _cross_checks(scenario: str, cfg: dict) -> list:
    errors = []
    if scenario == "symbol_table":
        if cfg["table.xi_min"] >= cfg["table.xi_max"]:
            errors.append("table.xi_min: must be below table.xi_max")
        return errors
    dt, t_end = cfg["solver.dt"], cfg["solver.t_end"]
    steps = round(t_end / dt)
    if abs(steps * dt - t_end) > 1e-9 * max(1.0, t_end):
        errors.append("solver.dt: t_end must be a whole number of steps of dt")
    delta = cfg.get("equation.delta")
    if scenario in ("soliton_travel", "corollary_ll") and cfg["initial.c"] * delta <= 1.0:
        errors.append(
            f"initial.c: soliton speed must exceed 1/delta = {1.0 / delta:.6g}")
    if scenario == "two_soliton":
        for key in ("initial.c1", "initial.c2"):
            if cfg[key] * delta <= 1.0:
                errors.append(f"{key}: soliton speed must exceed 1/delta = {1.0 / delta:.6g}")
    if scenario == "decay_liminf" and cfg["initial.kind"] == "soliton":
        if cfg["initial.c"] * delta <= 1.0:
            errors.append(f"initial.c: soliton speed must exceed 1/delta = {1.0 / delta:.6g}")
    if scenario in ("bo_limit", "kdv_limit") and len(cfg["limit.deltas"]) < 2:
        errors.append("limit.deltas: need at least two depths to compare")
    if scenario == "far_field_decay":
        times = cfg["probe.times"]
        if any(t < 10.0 for t in times):
            errors.append("probe.times: all probe times must be >= 10")
        if any(t > cfg["solver.t_end"] for t in times):
            errors.append("probe.times: probe times must not exceed solver.t_end")
        snap_dt = dt * cfg["solver.snapshot_stride"]
        for t in times:
            if abs(t / snap_dt - round(t / snap_dt)) > 1e-9:
                errors.append(
                    f"probe.times: {t} is not a snapshot time "
                    f"(snapshot spacing {snap_dt})")
    return errors


def load_config(path) -> dict:
    return validate_raw(parse_kv_file(path))
