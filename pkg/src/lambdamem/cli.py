"""Command-line front end: ``lambdamem simulate|transduce|fit|data-path``.

Each command takes a JSON ``--config`` file plus flag overrides (flags win).
Every artifact embeds the fully resolved configuration.

Exit codes: 0 success, 2 configuration or input error, 3 solver failure,
4 fit non-convergence.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from ._svg import line_chart
from .cavity_memory import CavityMode, CavityParams, overall_efficiency, simulate_cavity_memory
from .lambda_system import LambdaParams, PulseSpec
from .maxwell_bloch import (
    Direction,
    GridError,
    MediumParams,
    SolverError,
    ats_efficiency_estimate,
    default_jobs,
    parallel_map,
    run_ats_memory,
    run_eit_memory,
)
from .spectroscopy import (
    FitError,
    LineModel,
    Spectrum,
    SpectrumFormatError,
    cavity_enhanced_od,
    concentration_from_absorption,
    correct_resolution_limited,
    fit_cpt,
    fit_line,
    fit_split_peak,
    integrated_absorption,
    t_centre_concentration_input,
    transmission_to_alpha,
    transmission_to_od,
)
from .transduction import TransducerConfig, TransductionScheme, evaluate

DATA_DIR = Path(__file__).resolve().parent / "data"

EXIT_CONFIG, EXIT_SOLVER, EXIT_FIT = 2, 3, 4


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class Opt:
    name: str
    type: type
    default: object
    help: str
    choices: tuple | None = None


def _floats(text) -> list[float]:
    if isinstance(text, (list, tuple)):
        return [float(v) for v in text]
    return [float(v) for v in str(text).split(",") if v.strip()]


_PHYS = [
    Opt("d", float, 27.0, "resonant optical depth, intensity transmission e^-d (dimensionless)"),
    Opt("gamma_mhz", float, 27.0, "homogeneous optical linewidth Gamma/2pi (MHz)"),
    Opt("gamma_s", float, 0.0, "spin-wave energy decay rate gamma_s (1/s)"),
    Opt("storage_time", float, 0.0, "storage time between write and read (s)"),
    Opt("refine", int, 1, "grid refinement factor applied to dt and dz (integer >= 1)"),
]
_SWEEP = [
    Opt("sweep_param", str, None, "name of a numeric option to sweep (option name with underscores)"),
    Opt("sweep_values", _floats, None, "comma-separated sweep values (units of the swept option)"),
]

COMMANDS: dict[str, list[Opt]] = {
    "simulate ats": _PHYS + [
        Opt("f_min", float, 1.0, "smallest ATS factor F = Omega/Gamma (dimensionless)"),
        Opt("f_max", float, 10.0, "largest ATS factor F (dimensionless)"),
        Opt("steps", int, 19, "number of evenly spaced F values (count)"),
        Opt("f_values", _floats, None, "explicit comma-separated F values (dimensionless); overrides the range"),
        Opt("direction", str, "forward", "retrieval direction (forward, backward or both)", ("forward", "backward", "both")),
    ],
    "simulate eit": _PHYS + [
        Opt("bandwidth_mhz", float, 5.0, "signal intensity-FWHM bandwidth B_sig (MHz)"),
        Opt("rabi_mhz", float, None, "control Rabi frequency Omega/2pi (MHz); default is the optimal value"),
        Opt("optimize", bool, True, "refine the control Rabi frequency by a bounded search (flag; --no-optimize disables)"),
        Opt("direction", str, "forward", "retrieval direction (forward or backward)", ("forward", "backward")),
    ] + _SWEEP,
    "simulate cavity": [
        Opt("c", float, 10.0, "cooperativity C = N g^2/(kappa gamma_e) (dimensionless)"),
        Opt("t_s", float, 0.5, "storage window t_s (units of 1/gamma_e)"),
        Opt("t_r", float, 0.5, "retrieval window t_r (units of 1/gamma_e)"),
        Opt("kappa", float, 1000.0, "cavity decay kappa (units of gamma_e)"),
        Opt("pulse_fwhm", float, 0.2, "input intensity FWHM, centred in the storage window (units of 1/gamma_e)"),
        Opt("samples", int, 4001, "time samples in the storage window (count)"),
        Opt("mode", str, "adiabatic", "cavity model (adiabatic or full)", ("adiabatic", "full")),
        Opt("asymptotic", bool, False, "report only the t_s, t_r -> infinity closed form (flag)"),
    ] + _SWEEP,
    "transduce": [
        Opt("c_s", float, 10.0, "microwave-side cooperativity C_s (dimensionless)"),
        Opt("c_r", float, 10.0, "optical-side cooperativity C_r (dimensionless)"),
        Opt("eta_m", float, 1.0, "mode-overlap factor eta_m in [0, 1] (dimensionless)"),
        Opt("kappa_s_mhz", float, 1.0, "microwave cavity decay kappa_s/2pi (MHz)"),
        Opt("gamma_es_khz", float, 1.0, "microwave-leg polarisation decay gamma_es/2pi (kHz)"),
        Opt("b_sig_khz", float, None, "signal bandwidth B_sig (kHz); default C_s gamma_es/2pi"),
        Opt("temperature_mk", float, 20.0, "microwave mode temperature (mK)"),
        Opt("mw_ghz", float, 2.25, "microwave transition frequency omega/2pi (GHz)"),
        Opt("t_s", float, 1e-6, "storage time t_s (s)"),
        Opt("t_r", float, 1e-6, "retrieval time t_r (s)"),
        Opt("scheme", str, "electron-lambda", "spin scheme tag (label; informational only)",
            tuple(s.value for s in TransductionScheme)),
    ],
    "fit line": [
        Opt("model", str, "lorentzian", "line model (lorentzian, gaussian or pseudo-voigt)",
            ("lorentzian", "gaussian", "pseudo-voigt")),
    ],
    "fit cpt": [Opt("dips", int, 2, "number of narrow dips k (count)")],
    "fit split": [],
    "fit concentration": [
        Opt("length_cm", float, 0.55, "sample thickness (cm)"),
        Opt("true_fwhm_mhz", float, 56.0, "true absorption FWHM for resolution correction (MHz); 0 skips correction"),
        Opt("eta_r", float, 1.0, "radiative efficiency eta_R in (0, 1] (dimensionless)"),
        Opt("degeneracy_ratio", float, 2.0, "ground/excited degeneracy ratio g1/g2 (dimensionless)"),
        Opt("baseline", float, 1.0, "off-resonant transmission level (fraction)"),
    ],
    "fit od": [
        Opt("length_cm", float, 0.55, "sample thickness (cm)"),
        Opt("baseline", float, 1.0, "off-resonant transmission level (fraction)"),
        Opt("finesse", float, None, "resonator finesse for the cavity-enhanced optical depth (dimensionless)"),
    ],
}

# Options that never change results and are not embedded in artifacts.
_RUNTIME_KEYS = {"output", "jobs", "config", "input"}


def _add_options(p: argparse.ArgumentParser, opts: list[Opt]):
    for o in opts:
        flag = "--" + o.name.replace("_", "-")
        default = "" if o.default is None else f" [default: {o.default}]"
        if o.type is bool:
            p.add_argument(flag, dest=o.name, action="store_true", default=argparse.SUPPRESS, help=o.help + default)
            p.add_argument("--no-" + o.name.replace("_", "-"), dest=o.name, action="store_false",
                           default=argparse.SUPPRESS, help=argparse.SUPPRESS)
        else:
            kw = {"choices": o.choices} if o.choices else {}
            p.add_argument(flag, dest=o.name, type=o.type if o.type is not _floats else str,
                           default=argparse.SUPPRESS, help=o.help + default, **kw)
    p.add_argument("--config", default=None, help="JSON file with option values (path); flags override it")
    p.add_argument("--output", default=".", help="output directory (path) [default: .]")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lambdamem", description="Λ-system quantum memory and transduction models.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    sim = sub.add_parser("simulate", help="memory efficiency simulations")
    sim_sub = sim.add_subparsers(dest="kind", required=True)
    for kind in ("ats", "eit", "cavity"):
        p = sim_sub.add_parser(kind, help=f"{kind} memory")
        _add_options(p, COMMANDS[f"simulate {kind}"])
        p.add_argument("--plot", dest="plot", action="store_true", default=True,
                       help="write efficiency.svg (flag) [default: on]")
        p.add_argument("--no-plot", dest="plot", action="store_false", help="skip efficiency.svg")
        if kind != "cavity":
            p.add_argument("--jobs", type=int, default=None,
                           help="worker processes (count) [default: $LAMBDAMEM_JOBS or CPU count]")
    p = sub.add_parser("transduce", help="transduction efficiency and fidelity")
    _add_options(p, COMMANDS["transduce"])
    fit = sub.add_parser("fit", help="spectrum fitting and absorption analysis")
    fit_sub = fit.add_subparsers(dest="kind", required=True)
    for kind in ("line", "cpt", "split", "concentration", "od"):
        p = fit_sub.add_parser(kind, help=f"{kind} analysis of a spectrum CSV")
        nargs = "?" if kind == "split" else None
        p.add_argument("input", nargs=nargs, default=None,
                       help="spectrum CSV with header axis_<unit>,value_<unit> (path)"
                       + ("; a manifest CSV fits a corpus [default: bundled AT-doublet corpus]" if kind == "split" else ""))
        _add_options(p, COMMANDS[f"fit {kind}"])
    sub.add_parser("data-path", help="print the bundled example data directory")
    return parser


def resolve_config(command: str, ns: argparse.Namespace) -> dict:
    """Defaults, then the JSON config file, then explicit flags."""
    opts = {o.name: o for o in COMMANDS[command]}
    resolved = {name: o.default for name, o in opts.items()}
    if getattr(ns, "config", None):
        try:
            data = json.loads(Path(ns.config).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {ns.config}: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a JSON object")
        sweep = data.pop("sweep", None)
        if sweep is not None:
            if "sweep_param" not in opts or not isinstance(sweep, dict) or set(sweep) - {"param", "values"}:
                raise ConfigError("config key 'sweep' must be {\"param\": ..., \"values\": [...]} on a sweepable command")
            data["sweep_param"], data["sweep_values"] = sweep.get("param"), sweep.get("values")
        for key, value in data.items():
            if key == "plot" and command.startswith("simulate"):
                continue
            if key not in opts:
                raise ConfigError(f"unknown config key '{key}'")
            resolved[key] = _coerce(opts[key], value)
    for key, value in vars(ns).items():
        if key in opts:
            resolved[key] = _coerce(opts[key], value)
    return resolved


def _coerce(o: Opt, value):
    if value is None:
        return None
    try:
        if o.type is bool:
            if not isinstance(value, bool):
                raise TypeError
            return value
        v = o.type(value)
    except (TypeError, ValueError):
        raise ConfigError(f"config key '{o.name}': cannot interpret {value!r}") from None
    if o.choices and v not in o.choices:
        raise ConfigError(f"config key '{o.name}': {v!r} not in {list(o.choices)}")
    return v


def _require(cond: bool, key: str, message: str):
    if not cond:
        raise ConfigError(f"config key '{key}': {message}")


def _embedded(cfg: dict) -> str:
    return json.dumps({k: v for k, v in cfg.items() if k not in _RUNTIME_KEYS}, sort_keys=True)


def _num(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def write_results(path: Path, cfg: dict, header: list[str], rows: list[list]) -> None:
    buf = io.StringIO()
    buf.write(f"# config: {_embedded(cfg)}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_num(v) for v in row])
    path.write_text(buf.getvalue(), encoding="utf-8", newline="\n")


def _write_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8", newline="\n")


def _sweep_points(cfg: dict) -> list[dict]:
    param = cfg.get("sweep_param")
    values = cfg.get("sweep_values")
    if param is None and values is None:
        return [cfg]
    _require(param is not None, "sweep_param", "a sweep needs a parameter name")
    _require(values is not None and len(values) > 0, "sweep_values", "sweep list must not be empty")
    _require(param in cfg and param not in ("sweep_param", "sweep_values"), "sweep_param", f"unknown parameter '{param}'")
    opt_type = type(cfg[param]) if cfg[param] is not None else float
    _require(opt_type in (int, float), "sweep_param", f"'{param}' is not numeric")
    return [{**cfg, param: opt_type(v)} for v in values]


def _jobs(ns) -> int:
    jobs = getattr(ns, "jobs", None)
    return max(1, jobs) if jobs else default_jobs()


def _lambda_params(cfg) -> LambdaParams:
    _require(cfg["gamma_mhz"] > 0, "gamma_mhz", "must be > 0")
    _require(cfg["gamma_s"] >= 0, "gamma_s", "must be >= 0")
    return LambdaParams.from_linewidth(cfg["gamma_mhz"] * 1e6, gamma_s=cfg["gamma_s"])


def _check_phys(cfg):
    _require(cfg["d"] >= 0, "d", "must be >= 0")
    _require(cfg["storage_time"] >= 0, "storage_time", "must be >= 0")
    _require(cfg["refine"] >= 1, "refine", "must be >= 1")


def _ats_task(args):
    f, direction, d, cfg = args
    r = run_ats_memory(MediumParams(d), _lambda_params(cfg), f, cfg["storage_time"], direction, refine=cfg["refine"])
    return [r.eta_storage, r.eta_retrieval, r.eta_total]


def cmd_simulate_ats(cfg: dict, out: Path, jobs: int, plot: bool) -> str:
    _check_phys(cfg)
    _lambda_params(cfg)
    if cfg["f_values"] is not None:
        fs = list(cfg["f_values"])
        _require(len(fs) > 0, "f_values", "sweep list must not be empty")
    else:
        _require(cfg["steps"] >= 1, "steps", "must be >= 1")
        _require(0 < cfg["f_min"] <= cfg["f_max"], "f_min", "need 0 < f_min <= f_max")
        fs = np.linspace(cfg["f_min"], cfg["f_max"], cfg["steps"]).tolist()
    _require(all(f > 0 for f in fs), "f_values", "ATS factors must be > 0")
    dirs = [Direction.FORWARD, Direction.BACKWARD] if cfg["direction"] == "both" else [Direction(cfg["direction"])]
    tasks = [(f, dr, cfg["d"], cfg) for dr in dirs for f in fs]
    etas = parallel_map(_ats_task, tasks, jobs)
    rows = [[dr.value, f, cfg["d"], *e, ats_efficiency_estimate(cfg["d"], f, dr)]
            for (f, dr, _, _), e in zip(tasks, etas)]
    write_results(out / "results.csv", cfg,
                  ["direction", "f", "d", "eta_storage", "eta_retrieval", "eta_total", "eta_estimate"], rows)
    lines = []
    series = []
    for dr in dirs:
        sel = [r for r in rows if r[0] == dr.value]
        best = max(sel, key=lambda r: r[5])
        lines.append(f"{dr.value}: max eta_total={best[5]:.4f} at F={best[1]:.4g}")
        series.append((f"{dr.value} simulated", [r[1] for r in sel], [r[5] for r in sel], False))
        series.append((f"{dr.value} estimate", [r[1] for r in sel], [r[6] for r in sel], True))
    if plot:
        (out / "efficiency.svg").write_text(
            line_chart(series, title=f"ATS memory efficiency, d={cfg['d']:g}", xlabel="ATS factor F = Ω/Γ",
                       ylabel="total efficiency", comment=_embedded(cfg)), encoding="utf-8")
    return "\n".join(lines)


def _eit_task(cfg):
    params = _lambda_params(cfg)
    pulse = PulseSpec.fourier_limited(cfg["bandwidth_mhz"] * 1e6)
    rabi = None if cfg["rabi_mhz"] is None else 2 * math.pi * cfg["rabi_mhz"] * 1e6
    r = run_eit_memory(MediumParams(cfg["d"]), params, pulse, cfg["storage_time"], Direction(cfg["direction"]),
                       rabi=rabi, optimize=cfg["optimize"] and rabi is None, refine=cfg["refine"])
    return [r.rabi / (2 * math.pi * 1e6), r.eta_storage, r.eta_retrieval, r.eta_total]


def _sweep_plot(out, cfg, points, rows, column, title):
    param = cfg.get("sweep_param")
    if param is None or len(points) < 2:
        return
    xs = [p[param] for p in points]
    (out / "efficiency.svg").write_text(
        line_chart([("total efficiency", xs, [r[column] for r in rows], False)], title=title,
                   xlabel=param, ylabel="total efficiency", comment=_embedded(cfg)), encoding="utf-8")


def cmd_simulate_eit(cfg: dict, out: Path, jobs: int, plot: bool) -> str:
    points = _sweep_points(cfg)
    for p in points:
        _check_phys(p)
        _lambda_params(p)
        _require(p["d"] > 0, "d", "must be > 0 for EIT")
        _require(p["bandwidth_mhz"] > 0, "bandwidth_mhz", "must be > 0")
        _require(p["rabi_mhz"] is None or p["rabi_mhz"] > 0, "rabi_mhz", "must be > 0")
    results = parallel_map(_eit_task, points, jobs)
    names = ["d", "bandwidth_mhz", "storage_time"]
    rows = [[p[n] for n in names] + r for p, r in zip(points, results)]
    write_results(out / "results.csv", cfg, names + ["rabi_mhz", "eta_storage", "eta_retrieval", "eta_total"], rows)
    if plot:
        _sweep_plot(out, cfg, points, rows, -1, "EIT memory efficiency")
    return "\n".join(f"d={r[0]:g}: eta_total={r[-1]:.4f} (Omega/2pi={r[3]:.4g} MHz)" for r in rows)


def _cavity_point(p: dict) -> list:
    _require(p["c"] >= 0, "c", "must be >= 0")
    _require(p["t_s"] > 0, "t_s", "must be > 0")
    _require(p["t_r"] >= 0, "t_r", "must be >= 0")
    closed = overall_efficiency(p["c"], 1.0, math.inf, math.inf) if p["asymptotic"] else \
        overall_efficiency(p["c"], 1.0, p["t_s"], p["t_r"])
    if p["asymptotic"]:
        return [p["c"], math.inf, math.inf, math.nan, math.nan, closed, closed]
    _require(p["c"] > 0, "c", "must be > 0 for a simulation")
    _require(p["kappa"] > 0, "kappa", "must be > 0")
    _require(0 < p["pulse_fwhm"] < p["t_s"], "pulse_fwhm", "must lie in (0, t_s)")
    _require(p["samples"] >= 3, "samples", "must be >= 3")
    params = CavityParams.for_cooperativity(p["c"], p["kappa"], 1.0)
    t = np.linspace(0.0, p["t_s"], p["samples"])
    sigma = p["pulse_fwhm"] / (2.0 * math.sqrt(math.log(2.0)))
    e_in = np.exp(-((t - 0.5 * p["t_s"]) ** 2) / (2 * sigma**2))
    mode = CavityMode.FULL_ODE if p["mode"] == "full" else CavityMode.ADIABATIC_CAVITY
    run, eta = simulate_cavity_memory(params, t, e_in, t_r=p["t_r"], mode=mode)
    eta_s = run.eta_storage
    return [p["c"], p["t_s"], p["t_r"], eta_s, eta / eta_s if eta_s else 0.0, eta, closed]


def cmd_simulate_cavity(cfg: dict, out: Path, jobs: int, plot: bool) -> str:
    points = _sweep_points(cfg)
    rows = [_cavity_point(p) for p in points]
    write_results(out / "results.csv", cfg,
                  ["c", "t_s", "t_r", "eta_storage", "eta_retrieval", "eta_total", "eta_closed_form"], rows)
    if plot:
        _sweep_plot(out, cfg, points, rows, 5, "Cavity memory efficiency")
    return "\n".join(f"C={r[0]:g}: eta_total={r[5]:.6g} (closed form {r[6]:.6g})" for r in rows)


def cmd_transduce(cfg: dict, out: Path) -> str:
    _require(0.0 <= cfg["eta_m"] <= 1.0, "eta_m", "must lie in [0, 1]")
    for key in ("c_s", "c_r", "temperature_mk", "t_s", "t_r"):
        _require(cfg[key] >= 0, key, "must be >= 0")
    for key in ("kappa_s_mhz", "gamma_es_khz", "mw_ghz"):
        _require(cfg[key] > 0, key, "must be > 0")
    two_pi = 2 * math.pi
    gamma_es = two_pi * cfg["gamma_es_khz"] * 1e3
    b_sig = cfg["c_s"] * gamma_es / two_pi if cfg["b_sig_khz"] is None else cfg["b_sig_khz"] * 1e3
    try:
        tc = TransducerConfig(
            c_s=cfg["c_s"], c_r=cfg["c_r"], eta_m=cfg["eta_m"], kappa_s=two_pi * cfg["kappa_s_mhz"] * 1e6,
            gamma_es=gamma_es, b_sig=b_sig, temperature=cfg["temperature_mk"] * 1e-3,
            omega_mw=two_pi * cfg["mw_ghz"] * 1e9, t_s=cfg["t_s"], t_r=cfg["t_r"],
            scheme=TransductionScheme(cfg["scheme"]),
        )
    except ValueError as exc:
        raise ConfigError(f"config key 'b_sig_khz' or related: {exc}") from None
    rep = evaluate(tc)
    fields = {
        "efficiency": rep.efficiency,
        "n_th": rep.signal.n_th,
        "n_sig": rep.signal.n_sig,
        "snr": rep.signal.snr,
        "fidelity": rep.signal.fidelity,
        "fidelity_approx": rep.signal.fidelity_approx,
        "dark_count_rate": rep.dark_counts.dark_count_rate,
        "mean_dark_counts": rep.dark_counts.mean_dark_counts,
        "snr_after_transduction": rep.dark_counts.snr,
        "fidelity_after_transduction": rep.dark_counts.fidelity,
    }
    write_results(out / "report.csv", cfg, ["quantity", "value"], [[k, v] for k, v in fields.items()])
    _write_json(out / "report.json", {"config": json.loads(_embedded(cfg)), "report": fields})
    return "\n".join(f"{k}: {v:.6g}" for k, v in fields.items())


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _load(path) -> Spectrum:
    if path is None:
        raise ConfigError("an input spectrum path is required")
    try:
        return Spectrum.from_csv(path)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None


def _fit_payload(cfg, path, model_label, fit_dict, nfev, extra=None) -> dict:
    payload = {
        "config": json.loads(_embedded(cfg)),
        "provenance": {"input": str(path), "sha256": _sha256(Path(path)), "model": model_label, "nfev": nfev},
        "fit": fit_dict,
    }
    if extra:
        payload["derived"] = extra
    return payload


def _split_corpus(manifest: Path, out: Path, cfg: dict) -> str:
    with manifest.open(encoding="utf-8") as fh:
        entries = list(csv.DictReader(fh))
    if not entries or "file" not in entries[0] or "rabi_khz" not in entries[0]:
        raise ConfigError(f"{manifest}: manifest needs columns 'file' and 'rabi_khz'")
    rows, fits = [], []
    for e in entries:
        f = fit_split_peak(_load(manifest.parent / e["file"]))
        fits.append(f)
        rows.append([e["file"], float(e["rabi_khz"]), f.splitting,
                     math.hypot(f.stderr["center_1"], f.stderr["center_2"]), f.nfev])
    rabi = np.array([r[1] for r in rows])
    split = np.array([r[2] for r in rows])
    slope, intercept = np.polyfit(rabi, split, 1)
    write_results(out / "splittings.csv", cfg, ["file", "rabi_khz", "splitting_khz", "stderr_khz", "nfev"], rows)
    derived = {"slope": float(slope), "intercept_khz": float(intercept),
               "monotone": bool(np.all(np.diff(split[np.argsort(rabi)]) > 0))}
    payload = {
        "config": json.loads(_embedded(cfg)),
        "provenance": {"input": str(manifest), "sha256": _sha256(manifest), "model": "split-peak",
                       "nfev": int(sum(f.nfev for f in fits))},
        "fits": [dict(f.to_dict(), file=r[0]) for f, r in zip(fits, rows)],
        "derived": derived,
    }
    _write_json(out / "fit.json", payload)
    return f"{len(rows)} spectra: splitting slope {slope:.4f} vs Rabi frequency, intercept {intercept:.3g} kHz"


def cmd_fit(kind: str, path, cfg: dict, out: Path) -> str:
    if kind == "split":
        path = Path(path) if path else DATA_DIR / "at_doublets" / "manifest.csv"
        first = path.read_text(encoding="utf-8").split("\n", 1)[0] if path.exists() else ""
        if first.startswith("file,"):
            return _split_corpus(path, out, cfg)
        f = fit_split_peak(_load(path))
        _write_json(out / "fit.json", _fit_payload(cfg, path, f.model.label, f.to_dict(), f.nfev,
                                                   {"splitting": f.splitting, "degenerate": f.degenerate}))
        return f"splitting {f.splitting:.6g} {f.axis_unit}"
    s = _load(path)
    if kind == "line":
        f = fit_line(s, LineModel.parse(cfg["model"]))
        _write_json(out / "fit.json", _fit_payload(cfg, path, f.model.label, f.to_dict(), f.nfev))
        return f"center {f.centers[0]:.6g} {f.axis_unit}, fwhm {f.fwhms[0]:.6g} {f.axis_unit}"
    if kind == "cpt":
        _require(cfg["dips"] >= 1, "dips", "must be >= 1")
        f = fit_cpt(s, cfg["dips"])
        derived = {"dip_fwhms": list(f.dip_fwhms), "degenerate": f.degenerate}
        if cfg["dips"] >= 2:
            derived["dip_separation"] = f.dip_separation
        _write_json(out / "fit.json", _fit_payload(cfg, path, f.model.label, f.to_dict(), f.nfev, derived))
        return "dip widths " + ", ".join(f"{w:.4g}" for w in f.dip_fwhms) + f" {f.axis_unit}"
    _require(cfg["length_cm"] > 0, "length_cm", "must be > 0")
    if kind == "concentration":
        _require(0 < cfg["eta_r"] <= 1, "eta_r", "must lie in (0, 1]")
        _require(cfg["degeneracy_ratio"] > 0, "degeneracy_ratio", "must be > 0")
        spectrum = s
        peak = None
        if cfg["true_fwhm_mhz"]:
            _require(cfg["true_fwhm_mhz"] > 0, "true_fwhm_mhz", "must be >= 0")
            peak, spectrum = correct_resolution_limited(s, cfg["true_fwhm_mhz"] * 1e6, baseline=cfg["baseline"])
        alpha = transmission_to_alpha(spectrum.with_values(spectrum.values / cfg["baseline"]), cfg["length_cm"])
        area = integrated_absorption(alpha)
        conc = concentration_from_absorption(
            t_centre_concentration_input(area, cfg["eta_r"], cfg["degeneracy_ratio"]))
        depth = float(cfg["baseline"] - spectrum.values.min())
        d, a = transmission_to_od(depth / cfg["baseline"], cfg["length_cm"])
        derived = {"integrated_alpha_hz_per_cm": area, "concentration_cm3": conc, "peak_absorption": depth,
                   "od": d, "alpha_per_cm": a, "corrected_peak": peak}
        _write_json(out / "fit.json", _fit_payload(cfg, path, "integrated-absorption", {}, 0, derived))
        return f"concentration {conc:.4g} cm^-3 (peak absorption {depth:.4%}, d={d:.4g})"
    depth = float(cfg["baseline"] - s.values.min()) / cfg["baseline"]
    try:
        d, a = transmission_to_od(depth, cfg["length_cm"])
    except ValueError as exc:
        raise ConfigError(f"input spectrum: {exc}") from None
    derived = {"dip_depth": depth, "od": d, "alpha_per_cm": a}
    if cfg["finesse"] is not None:
        _require(cfg["finesse"] >= 1, "finesse", "must be >= 1")
        derived["cavity_enhanced_od"] = cavity_enhanced_od(d, cfg["finesse"])
    _write_json(out / "fit.json", _fit_payload(cfg, path, "peak-depth", {}, 0, derived))
    return f"d={d:.6g}, alpha={a:.6g} /cm"


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    if ns.command == "data-path":
        print(DATA_DIR)
        return 0
    command = ns.command if ns.command == "transduce" else f"{ns.command} {ns.kind}"
    try:
        cfg = resolve_config(command, ns)
        out = Path(ns.output)
        out.mkdir(parents=True, exist_ok=True)
        if ns.command == "simulate":
            handler = {"ats": cmd_simulate_ats, "eit": cmd_simulate_eit, "cavity": cmd_simulate_cavity}[ns.kind]
            jobs = _jobs(ns)
            message = handler(cfg, out, jobs, ns.plot)
        elif ns.command == "transduce":
            message = cmd_transduce(cfg, out)
        else:
            message = cmd_fit(ns.kind, ns.input, cfg, out)
    except (ConfigError, SpectrumFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SolverError, GridError, FloatingPointError) as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except FitError as exc:
        print(f"fit failed: {exc}", file=sys.stderr)
        return EXIT_FIT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    print(message)
    return 0


if __name__ == "__main__":
    sys.exit(main())
