"""File-producing experiment commands behind the CLI.

Every command resolves a Scenario, writes CSV data files plus JSON
records into the output directory, and finishes with a manifest listing
every emitted file together with the config hash.  CSV output is fully
deterministic for a fixed scenario (grid-weighted sampling or fixed seed).
"""

from __future__ import annotations

import dataclasses
import datetime
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace

import numpy as np

from . import analysis, fixed_points, scenario as sc, thermal
from .errors import ConfigError, RydsyncError
from .model import I_RR, ground_state

_FLOAT_FMT = "%.12g"


def _write_csv(path, header, columns):
    """Deterministic CSV: comma-separated, '.' decimal, LF endings."""
    rows = np.column_stack(columns)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_FLOAT_FMT % v for v in row) + "\n")


def _write_json(path, payload):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _spectral_payload(res: analysis.SpectralResult) -> dict:
    return {
        "frequency_in_cycles_per_inv_gamma": res.frequency,
        "amplitude": res.amplitude,
        "is_oscillatory": res.is_oscillatory,
        "window_in_inv_gamma": list(res.window),
    }


def write_manifest(out_dir, scn: sc.Scenario, files) -> str:
    path = os.path.join(out_dir, "manifest.json")
    _write_json(path, {
        "tool": "rydsync",
        "version": sc.TOOL_VERSION,
        "timestamp": datetime.datetime.now(
            datetime.timezone.utc).isoformat(),
        "config_hash_sha256": sc.config_hash(scn),
        "scenario": sc.serialize_scenario(scn),
        "files": sorted(files),
    })
    return path


def _prepare(scn: sc.Scenario, out_dir):
    out = out_dir or scn.output_dir
    os.makedirs(out, exist_ok=True)
    return out


def cmd_single_run(scn: sc.Scenario, out_dir=None) -> list[str]:
    """Homogeneous time series plus its spectral record."""
    out = _prepare(scn, out_dir)
    traj = fixed_points.integrate_self_consistent(
        scn.model, ground_state(), scn.integrator)
    ts_path = os.path.join(out, "timeseries.csv")
    _write_csv(ts_path,
               ["t_in_inv_gamma", "rho_gg", "rho_ee", "rho_rr",
                "re_rho_ge", "im_rho_ge", "re_rho_gr", "im_rho_gr",
                "re_rho_er", "im_rho_er"],
               [traj.t] + [traj.x[:, i] for i in range(9)])
    spectral = analysis.dominant_frequency(
        traj.x[:, I_RR], scn.integrator.output_dt,
        t_min=scn.analysis.t_min, eps_osc=scn.analysis.eps_osc)
    sp_path = os.path.join(out, "spectral.json")
    _write_json(sp_path, _spectral_payload(spectral))
    files = [ts_path, sp_path]
    files.append(write_manifest(out, scn, files))
    return files


def _regime_point(args):
    model_dict, field_name, value, grid_n = args
    from .model import ModelParams
    params = replace(ModelParams(**model_dict), **{field_name: value})
    regime = fixed_points.classify_regime(params, grid_n=grid_n)
    rows = [(fp.rho_rr, fp.stable, fp.max_real_part)
            for fp in regime.fixed_points]
    return value, regime.tag.value, len(rows), regime.n_stable, rows


def cmd_regime_scan(scn: sc.Scenario, out_dir=None, workers: int = 1,
                    grid_n: int = 2000) -> list[str]:
    """Per-grid-point regime records plus a tag-boundary summary."""
    out = _prepare(scn, out_dir)
    values, field_name = sc.scan_values(scn)
    model_dict = dataclasses.asdict(scn.model)
    tasks = [(model_dict, field_name, float(v), grid_n) for v in values]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_regime_point, tasks, chunksize=8))
    else:
        results = [_regime_point(t) for t in tasks]
    results.sort(key=lambda r: r[0])        # keyed by grid value, not arrival

    tags = [r[1] for r in results]
    max_re = [max(row[2] for row in r[4]) for r in results]
    rs_path = os.path.join(out, "regimes.csv")
    with open(rs_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"{scn.scan.parameter},tag,n_fixed_points,n_stable,"
                 "max_real_part_in_gamma,rho_rr_roots\n")
        for value, tag, n_fp, n_stable, rows in results:
            roots = ";".join(_FLOAT_FMT % r[0] for r in rows)
            fh.write(f"{_FLOAT_FMT % value},{tag},{n_fp},{n_stable},"
                     f"{_FLOAT_FMT % max(r[2] for r in rows)},{roots}\n")

    boundaries = []
    for i in range(1, len(tags)):
        if tags[i] != tags[i - 1]:
            boundaries.append({
                "between": [float(values[i - 1]), float(values[i])],
                "from_tag": tags[i - 1], "to_tag": tags[i]})
    bd_path = os.path.join(out, "boundaries.json")
    _write_json(bd_path, {"parameter": scn.scan.parameter,
                          "tags_present": sorted(set(tags)),
                          "boundaries": boundaries,
                          "max_real_part_range": [min(max_re), max(max_re)]})
    files = [rs_path, bd_path]
    files.append(write_manifest(out, scn, files))
    return files


def cmd_hysteresis(scn: sc.Scenario, out_dir=None,
                   hold_time: float = 2000.0) -> list[str]:
    """Forward/backward adiabatic sweep branches plus the loop area."""
    out = _prepare(scn, out_dir)
    if scn.scan is None:
        raise ConfigError("hysteresis requires a [scan] section over "
                          "delta_c_in_gamma")
    values, field_name = sc.scan_values(scn)
    if field_name != "delta_c":
        raise ConfigError("hysteresis sweeps delta_c_in_gamma only")
    res = fixed_points.hysteresis_sweep(
        scn.model, float(values[0]), float(values[-1]), n_steps=scn.scan.n,
        hold_time=hold_time, rel_tol=scn.integrator.rel_tol,
        abs_tol=scn.integrator.abs_tol)
    files = []
    for name, branch, osc in (
            ("forward", res.forward_rho_rr, res.forward_oscillatory),
            ("backward", res.backward_rho_rr, res.backward_oscillatory)):
        path = os.path.join(out, f"hysteresis_{name}.csv")
        _write_csv(path, ["delta_c_in_gamma", "rho_rr_avg", "oscillatory"],
                   [res.delta_c_grid, branch, osc.astype(float)])
        files.append(path)
    res_path = os.path.join(out, "hysteresis.json")
    _write_json(res_path, {"loop_area": res.loop_area,
                           "hold_time_in_inv_gamma": res.hold_time,
                           "n_steps": scn.scan.n})
    files.append(res_path)
    files.append(write_manifest(out, scn, files))
    return files


def _require_thermal(scn: sc.Scenario) -> thermal.ThermalConfig:
    if scn.thermal is None:
        raise ConfigError("this command requires a [thermal] section")
    return scn.thermal


def cmd_ensemble_run(scn: sc.Scenario, out_dir=None,
                     geometry: thermal.Geometry | None = None) -> list[str]:
    """Heatmap + averaged-series CSVs and the synchronization record."""
    out = _prepare(scn, out_dir)
    tcfg = _require_thermal(scn)
    if geometry is not None:
        tcfg = replace(tcfg, geometry=geometry)
        scn = replace(scn, thermal=tcfg)
    ens = thermal.integrate_ensemble(scn.model, tcfg, scn.transmission,
                                     scn.integrator)

    heat = ens.im_rho_eg()
    v = ens.velocities
    hm_path = os.path.join(out, "heatmap.csv")
    with open(hm_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("t_in_inv_gamma,v_in_m_per_s,im_rho_eg\n")
        for k, t in enumerate(ens.t):
            for j in range(len(v)):
                fh.write(f"{_FLOAT_FMT % t},{_FLOAT_FMT % v[j]},"
                         f"{_FLOAT_FMT % heat[k, j]}\n")

    av_path = os.path.join(out, "averages.csv")
    _write_csv(av_path,
               ["t_in_inv_gamma", "rho_rr_avg", "im_rho_ge_avg",
                "transmission", "shift_in_gamma"],
               [ens.t, ens.avg_rho_rr, ens.avg_rho_ge.imag,
                ens.transmission, ens.shift])

    metrics = analysis.sync_metrics(
        heat, ens.weights, scn.integrator.output_dt,
        t_min=scn.analysis.t_min, eps_osc=scn.analysis.eps_osc,
        freq_tol=scn.analysis.freq_tol)
    trans_spec = analysis.dominant_frequency(
        ens.transmission, scn.integrator.output_dt,
        t_min=scn.analysis.t_min, eps_osc=scn.analysis.eps_osc)
    sm_path = os.path.join(out, "sync.json")
    _write_json(sm_path, {
        "geometry": tcfg.geometry.value,
        "order_parameter": metrics.order_parameter,
        "locked_fraction": metrics.locked_fraction,
        "ensemble_frequency": _spectral_payload(metrics.ensemble_frequency),
        "transmission_spectrum": _spectral_payload(trans_spec),
    })
    files = [hm_path, av_path, sm_path]
    files.append(write_manifest(out, scn, files))
    return files


def _nonreciprocity_point(args):
    """One detuning value, both geometries; exceptions become records."""
    scn_text, delta_c = args
    scn = sc.parse_scenario(scn_text)
    scn = replace(scn, model=replace(scn.model, delta_c=float(delta_c)))
    tcfg = _require_thermal(scn)
    point = {"delta_c": float(delta_c)}
    for geom in (thermal.Geometry.COUNTER_PROPAGATING,
                 thermal.Geometry.CO_PROPAGATING):
        key = "cou" if geom is thermal.Geometry.COUNTER_PROPAGATING else "co"
        try:
            ens = thermal.integrate_ensemble(
                scn.model, replace(tcfg, geometry=geom), scn.transmission,
                scn.integrator)
            spec = analysis.dominant_frequency(
                ens.transmission, scn.integrator.output_dt,
                t_min=scn.analysis.t_min, eps_osc=scn.analysis.eps_osc)
            point[f"f_{key}"] = spec.frequency
            point[f"amp_{key}"] = spec.amplitude
        except RydsyncError as exc:
            point[f"error_{key}"] = str(exc)
    return point


def cmd_nonreciprocity(scn: sc.Scenario, out_dir=None,
                       workers: int = 1) -> list[str]:
    """Frequency/amplitude in both geometries plus eta across the scan."""
    out = _prepare(scn, out_dir)
    values, field_name = sc.scan_values(scn)
    if field_name != "delta_c":
        raise ConfigError("nonreciprocity scans delta_c_in_gamma only")
    _require_thermal(scn)
    scn_text = sc.serialize_scenario(scn)
    tasks = [(scn_text, float(v)) for v in values]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            points = list(pool.map(_nonreciprocity_point, tasks))
    else:
        points = [_nonreciprocity_point(t) for t in tasks]
    points.sort(key=lambda p: p["delta_c"])

    ok = [p for p in points if "error_cou" not in p and "error_co" not in p]
    amp_max_cou = max((p["amp_cou"] for p in ok), default=0.0) or 1.0
    amp_max_co = max((p["amp_co"] for p in ok), default=0.0) or 1.0

    scan_path = os.path.join(out, "nonreciprocity.csv")
    errors = []
    with open(scan_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("delta_c_in_gamma,f_cou_in_cycles_per_inv_gamma,amp_cou,"
                 "f_co_in_cycles_per_inv_gamma,amp_co,eta,"
                 "amp_cou_normalized,amp_co_normalized\n")
        for p in points:
            if "error_cou" in p or "error_co" in p:
                errors.append(p)
                continue
            eta = analysis.contrast_ratio(p["f_cou"], p["f_co"]).eta
            eta_s = "nan" if eta is None else _FLOAT_FMT % eta
            fh.write(",".join([
                _FLOAT_FMT % p["delta_c"], _FLOAT_FMT % p["f_cou"],
                _FLOAT_FMT % p["amp_cou"], _FLOAT_FMT % p["f_co"],
                _FLOAT_FMT % p["amp_co"], eta_s,
                _FLOAT_FMT % (p["amp_cou"] / amp_max_cou),
                _FLOAT_FMT % (p["amp_co"] / amp_max_co)]) + "\n")
    files = [scan_path]
    if errors:
        err_path = os.path.join(out, "errors.json")
        _write_json(err_path, {"failed_points": errors})
        files.append(err_path)
    files.append(write_manifest(out, scn, files))
    return files
