"""Named experiments binding solver, initial data, and diagnostics.

Each scenario consumes a validated config dict (see :mod:`ilwave.config`),
runs deterministically given the seed, and writes into its output directory:

* ``metadata.json``  -- resolved config, library versions, wall time, the
  scenario's acceptance thresholds, and a ``results`` block;
* ``diagnostics.csv`` -- the fixed diagnostics schema, one row per snapshot;
* ``snapshots/``     -- raw binary field snapshots;
* scenario-specific extras (``gaps.csv``, ``symbols.csv``).

Timestamps only ever appear inside metadata, so repeated runs with the same
config and seed produce bit-identical CSV artifacts.
"""

from __future__ import annotations

import json
import time
from pathlib import Path

import numpy as np

from . import diagnostics as diag
from .config import ConfigError
from .diagnostics import DiagnosticRecord, write_diagnostics_csv
from .integrator import (
    EquationSpec,
    SolverConfig,
    bo_dispersion,
    evolve,
    ilw_dispersion,
    kdv_dispersion,
)
from .solutions import (
    RegularityDatum,
    gaussian,
    make_regularity_datum,
    solve_soliton,
    two_soliton_data,
)
from .spectral import (
    Field,
    Grid,
    Nonlinearity,
    l2_norm,
    remove_mean,
    write_field_binary,
)
from .symbols import big_l, bo_ilw_gap, omega, omega_prime, psi_symbol, q_symbol
from .weights import Weight, corollary_schedule, farfield_schedule, thm1_schedule


def _grid(cfg) -> Grid:
    return Grid(cfg["grid.n"], cfg["grid.l_domain"])


def _solver(cfg, **overrides) -> SolverConfig:
    kw = dict(
        dt=cfg["solver.dt"],
        t_end=cfg["solver.t_end"],
        snapshot_stride=cfg["solver.snapshot_stride"],
        integrator=cfg["solver.integrator"],
        phi_contour_points=cfg["solver.phi_contour_points"],
    )
    kw.update(overrides)
    return SolverConfig(**kw)


def _nonlinearity(cfg) -> Nonlinearity:
    leading = 0.5 if cfg["equation.classical"] else 1.0
    return Nonlinearity(cfg["equation.k"], cfg["equation.coeffs"], leading)


def _dispersion(cfg):
    kind = cfg["equation.kind"]
    if kind == "ilw":
        return ilw_dispersion(cfg["equation.delta"])
    if kind == "bo":
        return bo_dispersion(cfg["equation.bo_sign"])
    return kdv_dispersion()


def _gaussian_data(cfg, grid) -> Field:
    f = gaussian(grid, cfg["initial.amplitude"], cfg["initial.width"],
                 cfg["initial.center"])
    carrier = cfg.get("initial.carrier", 0.0)
    if carrier:
        f = Field(grid, f.values * np.cos(carrier * (grid.x - cfg["initial.center"])))
    if cfg.get("initial.zero_mean"):
        f = remove_mean(f)
    return f


class _SnapshotWriter:
    def __init__(self, out_dir: Path):
        self.dir = out_dir / "snapshots"
        self.dir.mkdir(parents=True, exist_ok=True)
        self.count = 0

    def __call__(self, t, field):
        write_field_binary(field, self.dir / f"snap_{self.count:06d}.bin", time=t)
        self.count += 1


def _write_artifacts(out_dir: Path, cfg, records, thresholds, results,
                     wall_time, notes=()):
    write_diagnostics_csv(records, out_dir / "diagnostics.csv")
    meta = {
        "scenario": cfg["scenario"],
        "config": {k: (list(v) if isinstance(v, tuple) else v) for k, v in cfg.items()},
        "versions": _versions(),
        "wall_time_seconds": wall_time,
        "taper_points": diag.TAPER_POINTS,
        "thresholds": thresholds,
        "results": results,
        "notes": list(notes),
    }
    with open(out_dir / "metadata.json", "w", encoding="utf-8") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _versions():
    import scipy

    from . import __version__

    return {"ilwave": __version__, "numpy": np.__version__, "scipy": scipy.__version__}


def _strictly_decreasing(seq) -> bool:
    return all(a > b for a, b in zip(seq, seq[1:]))


def _strictly_increasing(seq) -> bool:
    return all(a < b for a, b in zip(seq, seq[1:]))


# ---------------------------------------------------------------------------
# scenarios

def run_soliton_travel(cfg, out_dir: Path) -> dict:
    grid = _grid(cfg)
    delta = cfg["equation.delta"]
    c = cfg["initial.c"]
    profile = solve_soliton(c, delta, grid, tol=cfg["soliton.tol"],
                            center=cfg["initial.center"])
    spec = EquationSpec(_dispersion(cfg), _nonlinearity(cfg))
    solver = _solver(cfg)
    records = []
    snap = _SnapshotWriter(out_dir)

    def observe(t, f):
        i1, i2, i3, i4 = diag.invariants(f, delta)
        records.append(DiagnosticRecord(t=t, i1=i1, i2=i2, i3=i3, i4=i4))
        snap(t, f)

    out = evolve(profile.field, spec, solver, observers=[observe])
    shifted = profile.field.shifted(c * solver.t_end)
    shape_error = l2_norm(out.final - shifted) / l2_norm(profile.field)
    arr = np.array([[r.i2, r.i3, r.i4] for r in records])
    drifts = np.max(np.abs(arr - arr[0]), axis=0) / np.abs(arr[0])
    results = {
        "a": profile.a, "b": profile.b, "peak": profile.peak,
        "residual": profile.residual, "shape_error": shape_error,
        "drift_i2": drifts[0], "drift_i3": drifts[1], "drift_i4": drifts[2],
    }
    thresholds = {"residual": cfg["soliton.tol"], "shape_error": 1e-3,
                  "drift_i2": 1e-8, "drift_i3": 1e-6, "drift_i4": 1e-6}
    return records, thresholds, results, ("quartic invariant constant term omitted",)


def run_two_soliton(cfg, out_dir: Path) -> dict:
    grid = _grid(cfg)
    delta = cfg["equation.delta"]
    data, p1, p2 = two_soliton_data(grid, cfg["initial.c1"], cfg["initial.c2"],
                                    delta, cfg["initial.separation"],
                                    tol=cfg["soliton.tol"])
    spec = EquationSpec(_dispersion(cfg), _nonlinearity(cfg))
    records = []
    snap = _SnapshotWriter(out_dir)

    def observe(t, f):
        i1, i2, i3, i4 = diag.invariants(f, delta)
        records.append(DiagnosticRecord(t=t, i1=i1, i2=i2, i3=i3, i4=i4))
        snap(t, f)

    out = evolve(data, spec, _solver(cfg), observers=[observe])
    arr = np.array([[r.i2, r.i3] for r in records])
    drifts = np.max(np.abs(arr - arr[0]), axis=0) / np.abs(arr[0])
    results = {
        "fast": {"a": p1.a, "b": p1.b, "peak": p1.peak, "residual": p1.residual},
        "slow": {"a": p2.a, "b": p2.b, "peak": p2.peak, "residual": p2.residual},
        "drift_i2": drifts[0], "drift_i3": drifts[1],
        "max_abs": out.max_abs,
    }
    thresholds = {"drift_i2": 1e-7, "drift_i3": 1e-5}
    return records, thresholds, results, ()


def run_decay_liminf(cfg, out_dir: Path) -> dict:
    grid = _grid(cfg)
    delta = cfg["equation.delta"]
    ws = thm1_schedule(cfg["schedule.a"], cfg["schedule.capital_c"])
    if cfg["initial.kind"] == "gaussian":
        data = _gaussian_data(cfg, grid)
    else:
        data = solve_soliton(cfg["initial.c"], delta, grid,
                             tol=cfg["soliton.tol"]).field
    spec = EquationSpec(_dispersion(cfg), _nonlinearity(cfg))
    records = []
    snap = _SnapshotWriter(out_dir)

    def observe(t, f):
        rec = DiagnosticRecord(t=t)
        rec.i1, rec.i2, _, _ = diag.invariants(f, delta)
        if t >= 10.0:
            rec.window_mass = diag.window_mass(f, t, ws, delta)
        records.append(rec)
        snap(t, f)

    evolve(data, spec, _solver(cfg), observers=[observe])
    masses = [(r.t, r.window_mass) for r in records if r.window_mass is not None]
    times = [t for t, _ in masses]
    vals = [m for _, m in masses]
    i2 = records[0].i2
    results = {
        "i2": i2,
        "first_time": times[0], "first_mass": vals[0],
        "min_mass": min(vals), "min_time": times[int(np.argmin(vals))],
        "final_mass": vals[-1],
        "min_over_first": min(vals) / vals[0] if vals[0] > 0 else 0.0,
        "final_over_i2": vals[-1] / i2,
    }
    if cfg["initial.kind"] == "gaussian":
        thresholds = {"min_over_first": 0.2}
    else:
        thresholds = {"final_over_i2": 1e-6}
    return records, thresholds, results, ()


def run_far_field_decay(cfg, out_dir: Path) -> dict:
    grid = _grid(cfg)
    delta = cfg["equation.delta"]
    ws = farfield_schedule(cfg["schedule.epsilon"])
    data = _gaussian_data(cfg, grid)
    spec = EquationSpec(_dispersion(cfg), _nonlinearity(cfg))
    records = []
    snap = _SnapshotWriter(out_dir)

    def observe(t, f):
        rec = DiagnosticRecord(t=t)
        rec.i1, rec.i2, _, _ = diag.invariants(f, delta)
        if t >= 10.0:
            rec.far_field_l2 = diag.far_field_l2(f, t, ws)
        records.append(rec)
        snap(t, f)

    evolve(data, spec, _solver(cfg), observers=[observe])
    by_time = {round(r.t, 9): r.far_field_l2 for r in records
               if r.far_field_l2 is not None}
    probes = []
    for t in cfg["probe.times"]:
        key = round(float(t), 9)
        if key not in by_time:
            raise ConfigError([f"probe.times: {t} is not a snapshot time"])
        probes.append(by_time[key])
    results = {
        "probe_times": list(cfg["probe.times"]),
        "probe_values": probes,
        "strictly_decreasing": _strictly_decreasing(probes),
    }
    thresholds = {"strictly_decreasing": True}
    return records, thresholds, results, ()


def run_corollary_ll(cfg, out_dir: Path) -> dict:
    grid = _grid(cfg)
    delta = cfg["equation.delta"]
    ws = corollary_schedule(cfg["schedule.epsilon"])
    w = Weight.corollary_step()
    profile = solve_soliton(cfg["initial.c"], delta, grid, tol=cfg["soliton.tol"])
    spec = EquationSpec(_dispersion(cfg), _nonlinearity(cfg))
    records = []
    snap = _SnapshotWriter(out_dir)
    running = {"sum": 0.0, "last_t": None, "series": []}

    def observe(t, f):
        rec = DiagnosticRecord(t=t)
        rec.i1, rec.i2, _, _ = diag.invariants(f, delta)
        if t >= 10.0:
            rec.corollary_integrand = diag.corollary_integrand(f, t, ws, w)
            if running["last_t"] is not None:
                dt = t - running["last_t"]
                running["sum"] += dt * rec.corollary_integrand / t
            running["last_t"] = t
            running["series"].append((t, running["sum"]))
        records.append(rec)
        snap(t, f)

    evolve(profile.field, spec, _solver(cfg), observers=[observe])
    series = running["series"]
    t_end = cfg["solver.t_end"]
    t_decade = t_end / 10.0
    sum_at_decade = max((s for t, s in series if t <= t_decade), default=0.0)
    total = series[-1][1]
    growth = (total - sum_at_decade) / sum_at_decade if sum_at_decade > 0 else np.inf
    results = {
        "running_sum_final": total,
        "running_sum_at_decade_start": sum_at_decade,
        "last_decade_growth": growth,
        "soliton": {"a": profile.a, "b": profile.b, "residual": profile.residual},
    }
    thresholds = {"last_decade_growth": 0.05}
    return records, thresholds, results, ()


def _sup_gap(a: Field, b: Field) -> float:
    return float(np.max(np.abs(a.values - b.values)))


def run_bo_limit(cfg, out_dir: Path) -> dict:
    grid = _grid(cfg)
    data = _gaussian_data(cfg, grid)
    nl = Nonlinearity(2, (), 0.5)
    solver = _solver(cfg, snapshot_stride=10**9)
    reference = evolve(data, EquationSpec(bo_dispersion(1), nl), solver).final
    gaps = []
    for d in cfg["limit.deltas"]:
        out = evolve(data, EquationSpec(ilw_dispersion(d), nl), solver).final
        gaps.append(_sup_gap(out, reference))
    _write_gaps_csv(out_dir / "gaps.csv", cfg["limit.deltas"], gaps)
    records = [DiagnosticRecord(t=solver.t_end, i2=diag.invariants(reference, 1.0)[1])]
    results = {"deltas": list(cfg["limit.deltas"]), "gaps": gaps,
               "strictly_decreasing": _strictly_decreasing(gaps)}
    thresholds = {"strictly_decreasing": True}
    return records, thresholds, results, ()


def run_kdv_limit(cfg, out_dir: Path) -> dict:
    grid = _grid(cfg)
    w0 = _gaussian_data(cfg, grid)
    nl = Nonlinearity(2, (), 0.5)
    solver = _solver(cfg, snapshot_stride=10**9)
    reference = evolve(w0, EquationSpec(kdv_dispersion(), nl), solver).final
    gaps = []
    for d in cfg["limit.deltas"]:
        scale = 3.0 / d
        u0 = (1.0 / scale) * w0
        inner = SolverConfig(dt=scale * solver.dt, t_end=scale * solver.t_end,
                             snapshot_stride=10**9, integrator=solver.integrator,
                             phi_contour_points=solver.phi_contour_points)
        out = evolve(u0, EquationSpec(ilw_dispersion(d), nl), inner).final
        gaps.append(_sup_gap(scale * out, reference))
    _write_gaps_csv(out_dir / "gaps.csv", cfg["limit.deltas"], gaps)
    records = [DiagnosticRecord(t=solver.t_end, i2=diag.invariants(reference, 1.0)[1])]
    results = {"deltas": list(cfg["limit.deltas"]), "gaps": gaps,
               "strictly_decreasing": _strictly_decreasing(gaps)}
    thresholds = {"strictly_decreasing": True}
    return records, thresholds, results, ()


def _write_gaps_csv(path, deltas, gaps):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("delta,sup_gap\n")
        for d, g in zip(deltas, gaps):
            fh.write(f"{d!r},{g!r}\n")


def run_regularity_propagation(cfg, out_dir: Path) -> dict:
    grid = _grid(cfg)
    delta = cfg["equation.delta"]
    datum = RegularityDatum(
        x0=cfg["initial.x0"], m=cfg["initial.m"],
        left_roughness=cfg["initial.left_roughness"],
        right_amplitude=cfg["initial.right_amplitude"],
        right_width=cfg["initial.right_width"],
        right_offset=cfg["initial.right_offset"],
        rough_amplitude=cfg["initial.rough_amplitude"],
        cutoff_margin=cfg["initial.cutoff_margin"],
        rough_extent=cfg["initial.rough_extent"],
        seed=cfg["seed"],
    )
    data = make_regularity_datum(datum, grid)
    spec = EquationSpec(_dispersion(cfg), _nonlinearity(cfg))
    gamma = cfg["probe.gamma"]
    eps = cfg["probe.epsilon_shift"]
    r_width = cfg["probe.r_width"]
    order = cfg["probe.order"]
    x0 = cfg["initial.x0"]
    edge = 0.5 * grid.l_domain
    margin = 4.0 * cfg["initial.cutoff_margin"]
    records = []
    snap = _SnapshotWriter(out_dir)
    accum = {"integral": 0.0, "last_t": None}

    def observe(t, f):
        rec = DiagnosticRecord(t=t)
        rec.i1, rec.i2, _, _ = diag.invariants(f, delta)
        lo = x0 + eps - gamma * t
        rec.local_hm_left = diag.local_sobolev(f, (-edge + margin, x0), order)
        rec.local_hm_right = diag.local_sobolev(f, (lo, edge - margin), order)
        rec.smoothing_halfnorm = diag.smoothing_halfnorm(
            f, (lo, lo + r_width), order)
        if accum["last_t"] is not None:
            accum["integral"] += (t - accum["last_t"]) * rec.smoothing_halfnorm
        accum["last_t"] = t
        records.append(rec)
        snap(t, f)

    evolve(data, spec, _solver(cfg), observers=[observe])
    right = [r.local_hm_right for r in records]
    left0 = records[0].local_hm_left
    results = {
        "right_initial": right[0],
        "right_max": max(right),
        "right_max_over_initial": max(right) / right[0],
        "left_over_right_initial": left0 / right[0],
        "smoothing_time_integral": accum["integral"],
    }
    thresholds = {"right_max_over_initial": 3.0, "left_over_right_initial_min": 10.0}
    return records, thresholds, results, ()


def run_breather_obstruction(cfg, out_dir: Path) -> dict:
    grid = _grid(cfg)
    nl = _nonlinearity(cfg)
    data = _gaussian_data(cfg, grid)
    spec = EquationSpec(_dispersion(cfg), nl)
    records = []
    snap = _SnapshotWriter(out_dir)

    def observe(t, f):
        rec = DiagnosticRecord(t=t)
        _, rec.i2, _, _ = diag.invariants(f, cfg["equation.delta"])
        mom = diag.momentum_identity(f, nl)
        rec.x_moment = mom.x_moment
        rec.f_integral = mom.f_integral
        rec.edge_mass_flag = mom.edge_flag
        rec.weighted_moment_pred = diag.weighted_moment_rate(f, nl)
        records.append(rec)
        snap(t, f)

    evolve(data, spec, _solver(cfg), observers=[observe])
    moments = [r.x_moment for r in records]
    f_ints = [r.f_integral for r in records]
    results = {
        "x_moment_strictly_increasing": _strictly_increasing(moments),
        "f_integral_min": min(f_ints),
        "edge_flag_any": any(r.edge_mass_flag for r in records),
    }
    thresholds = {"x_moment_strictly_increasing": True, "f_integral_min": 0.0}
    return records, thresholds, results, ()


def write_symbol_table(path, delta, xi_min, xi_max, count):
    xs = np.linspace(xi_min, xi_max, count)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("xi,omega,omega_prime,q,big_l,psi,gap\n")
        for x in xs:
            fh.write(",".join(repr(float(v)) for v in (
                x, omega(delta, x), omega_prime(delta, x), q_symbol(delta, x),
                big_l(delta, x), psi_symbol(delta, x), bo_ilw_gap(delta, x),
            )) + "\n")
    return xs


def run_symbol_table(cfg, out_dir: Path) -> dict:
    delta = cfg["table.delta"]
    write_symbol_table(out_dir / "symbols.csv", delta, cfg["table.xi_min"],
                       cfg["table.xi_max"], cfg["table.count"])
    records = [DiagnosticRecord(t=0.0)]
    results = {"delta": delta, "count": cfg["table.count"]}
    thresholds = {"q_squared_ulps": 4}
    return records, thresholds, results, ()


_RUNNERS = {
    "soliton_travel": run_soliton_travel,
    "two_soliton": run_two_soliton,
    "decay_liminf": run_decay_liminf,
    "far_field_decay": run_far_field_decay,
    "corollary_ll": run_corollary_ll,
    "bo_limit": run_bo_limit,
    "kdv_limit": run_kdv_limit,
    "regularity_propagation": run_regularity_propagation,
    "breather_obstruction": run_breather_obstruction,
    "symbol_table": run_symbol_table,
}


def run_scenario(cfg: dict, output_root) -> Path:
    """Execute one validated config; returns the output directory."""
    out_dir = Path(output_root) / cfg["output_dir"]
    out_dir.mkdir(parents=True, exist_ok=True)
    start = time.perf_counter()
    records, thresholds, results, notes = _RUNNERS[cfg["scenario"]](cfg, out_dir)
    wall = time.perf_counter() - start
    _write_artifacts(out_dir, cfg, records, thresholds, _jsonable(results), wall, notes)
    return out_dir


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj
