"""Least-squares line fitting with analytic Jacobians.

Fits run in normalised coordinates (axis mapped onto [-1, 1], values scaled
to unit spread) and are reported back in the spectrum's own units.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import least_squares
from scipy.signal import find_peaks, peak_widths

from .lineshapes import LineModel, ModelKind
from .spectrum import Spectrum

MAX_EVALUATIONS = 200
STEP_TOLERANCE = 1e-10
# Minimum amplitude / standard error for the main feature to count as real.
SIGNIFICANCE = 5.0


class FitError(RuntimeError):
    """Fit did not converge or found no significant feature."""

    def __init__(self, message: str, best_residual: float, nfev: int = 0):
        super().__init__(f"{message} (best residual rms {best_residual:.4g}, {nfev} evaluations)")
        self.best_residual = best_residual
        self.nfev = nfev


@dataclass(frozen=True)
class LineFit:
    model: LineModel
    params: dict
    stderr: dict
    residual_rms: float
    nfev: int
    axis_unit: str
    degenerate: bool = False
    _vector: np.ndarray = field(default=None, repr=False, compare=False)

    def _lines(self, prefix: str) -> tuple[float, ...]:
        return tuple(v for k, v in self.params.items() if k.startswith(prefix))

    @property
    def centers(self) -> tuple[float, ...]:
        return self._lines("center") + self._lines("dip_center")

    @property
    def fwhms(self) -> tuple[float, ...]:
        return self._lines("fwhm") + self._lines("dip_fwhm")

    @property
    def amplitudes(self) -> tuple[float, ...]:
        return self._lines("amplitude") + self._lines("dip_depth")

    @property
    def baseline(self) -> tuple[float, float]:
        return self.params["baseline_0"], self.params["baseline_1"]

    @property
    def splitting(self) -> float:
        if self.model.kind is not ModelKind.SPLIT_PEAK:
            raise AttributeError("splitting is defined for split-peak fits only")
        return abs(self.params["center_2"] - self.params["center_1"])

    @property
    def dip_fwhms(self) -> tuple[float, ...]:
        return self._lines("dip_fwhm")

    @property
    def dip_separation(self) -> float:
        dips = self._lines("dip_center")
        if len(dips) < 2:
            raise AttributeError("dip separation needs at least two dips")
        return max(dips) - min(dips)

    def evaluate(self, x) -> np.ndarray:
        return self.model(np.asarray(x, float), self._vector)

    def to_dict(self) -> dict:
        return {
            "model": self.model.label,
            "axis_unit": self.axis_unit,
            "params": dict(self.params),
            "stderr": dict(self.stderr),
            "residual_rms": self.residual_rms,
            "nfev": self.nfev,
            "degenerate": self.degenerate,
        }


@dataclass(frozen=True)
class _Frame:
    """Affine map between physical and normalised coordinates."""

    xm: float
    xs: float
    y0: float
    ys: float

    def transform(self, model: LineModel) -> tuple[np.ndarray, np.ndarray]:
        """(T, offset) with physical = T @ normalised + offset."""
        n = model.n_params
        t = np.zeros((n, n))
        off = np.zeros(n)
        for i, name in enumerate(model.param_names):
            if "center" in name:
                t[i, i], off[i] = self.xs, self.xm
            elif "fwhm" in name:
                t[i, i] = self.xs
            elif "amplitude" in name or "depth" in name:
                t[i, i] = self.ys
            elif name == "eta":
                t[i, i] = 1.0
        # B1 = ys·b1/xs, B0 = y0 + ys·b0 − B1·xm
        t[-1, -1] = self.ys / self.xs
        t[-2, -2] = self.ys
        t[-2, -1] = -self.ys * self.xm / self.xs
        off[-2] = self.y0
        return t, off


def _frame(x: np.ndarray, y: np.ndarray) -> _Frame:
    xm = 0.5 * (x.max() + x.min())
    xs = 0.5 * (x.max() - x.min())
    y0 = float(np.median(y))
    ys = float(np.max(np.abs(y - y0)))
    return _Frame(xm, xs, y0, ys)


def _edge_baseline(u, v):
    n = max(2, len(u) // 10)
    idx = np.r_[0:n, len(u) - n: len(u)]
    b1, b0 = np.polyfit(u[idx], v[idx], 1)
    return b0, b1


def _half_width(u, r, i):
    """FWHM (in u) of the feature at index ``i`` of the signed residual ``r``."""
    level = 0.5 * r[i]
    lo = i
    while lo > 0 and r[lo] * np.sign(level) > abs(level):
        lo -= 1
    hi = i
    while hi < len(r) - 1 and r[hi] * np.sign(level) > abs(level):
        hi += 1
    du = abs(u[1] - u[0])
    return max(abs(u[hi] - u[lo]), 2.0 * du)


def _single_init(u, v):
    b0, b1 = _edge_baseline(u, v)
    r = v - (b0 + b1 * u)
    i = int(np.argmax(np.abs(r)))
    return [u[i], _half_width(u, r, i), r[i]], (b0, b1), r


def _features(u, r, sign, count, du):
    """Up to ``count`` most prominent features of ``sign·r`` as (center, fwhm, height)."""
    win = max(1, len(r) // 400)
    smooth = np.convolve(sign * r, np.ones(win) / win, mode="same")
    peaks, props = find_peaks(smooth, prominence=0.0)
    if len(peaks) == 0:
        return []
    order = np.argsort(props["prominences"])[::-1][:count]
    chosen = np.sort(peaks[order])
    widths = peak_widths(smooth, chosen, rel_height=0.5)[0]
    prom = props["prominences"][np.searchsorted(peaks, chosen)]
    return [(u[p], max(w * du, 2 * du), pr) for p, w, pr in zip(chosen, widths, prom)]


def _auto_init(model: LineModel, u, v) -> np.ndarray:
    du = abs(u[1] - u[0])
    line, (b0, b1), r = _single_init(u, v)
    kind = model.kind
    if kind in (ModelKind.LORENTZIAN, ModelKind.GAUSSIAN):
        return np.array(line + [b0, b1])
    if kind is ModelKind.PSEUDO_VOIGT:
        return np.array(line + [0.5, b0, b1])
    sign = np.sign(line[2]) or 1.0
    if kind is ModelKind.SPLIT_PEAK:
        feats = _features(u, r, sign, 2, du)
        if len(feats) < 2:
            c, w, a = line
            feats = [(c - w / 4, w / 2, a), (c + w / 4, w / 2, a)]
        p = []
        for c, w, h in feats:
            p += [c, w, sign * h]
        return np.array(p + [b0, b1])
    # peak with dips: broad Lorentzian first, then dips from the residual
    broad = LineModel(ModelKind.LORENTZIAN)
    pre = least_squares(
        lambda q: broad.evaluate(u, q)[0] - v, np.array(line + [b0, b1]),
        jac=lambda q: broad.evaluate(u, q)[1], method="lm", max_nfev=MAX_EVALUATIONS,
    ).x
    res = v - broad(u, pre)
    feats = _features(u, res, -sign, model.k, du)
    while len(feats) < model.k:
        feats.append((pre[0] + 0.1 * (len(feats) + 1) * pre[1], 0.05 * pre[1], 0.0))
    p = list(pre[:3])
    for c, w, depth in feats:
        p += [c, w, sign * depth]
    return np.array(p + list(pre[3:]))


def _bounds(model: LineModel, du: float):
    lo = np.full(model.n_params, -np.inf)
    hi = np.full(model.n_params, np.inf)
    for i, name in enumerate(model.param_names):
        if "fwhm" in name:
            lo[i], hi[i] = du / 4.0, 40.0
        elif name == "eta":
            lo[i], hi[i] = 0.0, 1.0
    return lo, hi


def fit_line(s: Spectrum, model: LineModel | str, init_hint: dict | None = None) -> LineFit:
    """Fit ``model`` plus a linear baseline to ``s``.

    ``init_hint`` maps parameter names (physical units) to starting values;
    anything not given is initialised from a peak search.  Raises
    :class:`FitError` on non-convergence or when the fitted feature is not
    statistically significant.
    """
    if isinstance(model, str):
        model = LineModel.parse(model)
    x, y = s.axis, s.values
    fr = _frame(x, y)
    if fr.ys == 0.0:
        raise FitError("flat spectrum: no feature to fit", 0.0)
    u = (x - fr.xm) / fr.xs
    v = (y - fr.y0) / fr.ys
    p0 = _auto_init(model, u, v)
    t, off = fr.transform(model)
    if init_hint:
        unknown = set(init_hint) - set(model.param_names)
        if unknown:
            raise ValueError(f"unknown init_hint keys for {model.label}: {sorted(unknown)}")
        phys = t @ p0 + off
        for i, name in enumerate(model.param_names):
            if name in init_hint:
                phys[i] = init_hint[name]
        p0 = np.linalg.solve(t, phys - off)
    du = float(np.min(np.abs(np.diff(u))))
    lo, hi = _bounds(model, du)
    p0 = np.clip(p0, lo + 1e-12, hi - 1e-12)

    def resid(q):
        return model.evaluate(u, q)[0] - v

    def jac(q):
        return model.evaluate(u, q)[1]

    sol = least_squares(
        resid, p0, jac=jac, bounds=(lo, hi), method="trf", x_scale="jac",
        max_nfev=MAX_EVALUATIONS, xtol=STEP_TOLERANCE, ftol=1e-12, gtol=1e-12,
    )
    dof = max(1, len(u) - model.n_params)
    rms_norm = float(np.sqrt(np.sum(sol.fun**2) / dof))
    rms = rms_norm * fr.ys
    if sol.status <= 0 or not np.all(np.isfinite(sol.x)):
        raise FitError(f"{model.label} fit did not converge: {sol.message}", rms, sol.nfev)
    cov = np.linalg.pinv(sol.jac.T @ sol.jac) * rms_norm**2
    amp_index = model.param_names.index("amplitude" if "amplitude" in model.param_names else "amplitude_1")
    amp_err = float(np.sqrt(max(cov[amp_index, amp_index], 0.0)))
    if rms_norm > 0 and abs(sol.x[amp_index]) < SIGNIFICANCE * amp_err:
        raise FitError(f"{model.label} feature is not significant above the noise", rms, sol.nfev)
    phys = t @ sol.x + off
    phys_err = np.sqrt(np.clip(np.diag(t @ cov @ t.T), 0.0, None))
    names = model.param_names
    params = dict(zip(names, map(float, phys)))
    if model.kind is ModelKind.SPLIT_PEAK and params["center_2"] < params["center_1"]:
        phys = np.concatenate((phys[3:6], phys[:3], phys[6:]))
        phys_err = np.concatenate((phys_err[3:6], phys_err[:3], phys_err[6:]))
        params = dict(zip(names, map(float, phys)))
    stderr = dict(zip(names, map(float, phys_err)))
    return LineFit(model, params, stderr, rms, int(sol.nfev), s.axis_unit, _degenerate(model, params, stderr), phys)


def _degenerate(model: LineModel, p: dict, err: dict) -> bool:
    if model.kind is ModelKind.SPLIT_PEAK:
        return bool(abs(p["center_2"] - p["center_1"]) < 0.25 * 0.5 * (p["fwhm_1"] + p["fwhm_2"]))
    if model.kind is ModelKind.PEAK_WITH_DIPS and model.k >= 2:
        centers = sorted(p[f"dip_center_{j}"] for j in range(1, model.k + 1))
        widths = [p[f"dip_fwhm_{j}"] for j in range(1, model.k + 1)]
        # merged dips: the fit collapses them into one and zeroes the other
        weak = any(abs(p[f"dip_depth_{j}"]) < SIGNIFICANCE * err[f"dip_depth_{j}"] for j in range(1, model.k + 1))
        return bool(weak or min(np.diff(centers)) < 0.25 * float(np.mean(widths)))
    return False


def fit_cpt(s: Spectrum, k: int = 2, init_hint: dict | None = None) -> LineFit:
    """Broad resonance with ``k`` narrow coherent-population-trapping dips."""
    return fit_line(s, LineModel(ModelKind.PEAK_WITH_DIPS, k), init_hint)


def fit_split_peak(s: Spectrum, init_hint: dict | None = None) -> LineFit:
    return fit_line(s, LineModel(ModelKind.SPLIT_PEAK), init_hint)
