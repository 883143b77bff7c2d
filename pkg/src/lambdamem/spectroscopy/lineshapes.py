"""Peak-normalised lineshapes and composite fit models with analytic Jacobians."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

_GAUSS_K = 4.0 * math.log(2.0)


def lorentzian(x, center, fwhm):
    """Unit-height Lorentzian."""
    h = 0.5 * fwhm
    return h * h / ((x - center) ** 2 + h * h)


def gaussian(x, center, fwhm):
    """Unit-height Gaussian."""
    return np.exp(-_GAUSS_K * (x - center) ** 2 / fwhm**2)


def _lorentzian_grad(x, c, w):
    h = 0.5 * w
    dx = x - c
    den = dx * dx + h * h
    f = h * h / den
    return f, 2.0 * h * h * dx / den**2, h * dx * dx / den**2


def _gaussian_grad(x, c, w):
    dx = x - c
    f = np.exp(-_GAUSS_K * dx * dx / w**2)
    return f, f * 2.0 * _GAUSS_K * dx / w**2, f * 2.0 * _GAUSS_K * dx * dx / w**3


def lineshape_area(kind: "ModelKind", fwhm: float, eta: float = 1.0) -> float:
    """Integral over the whole line of a unit-height shape."""
    lor = 0.5 * math.pi * fwhm
    gau = fwhm * math.sqrt(math.pi / _GAUSS_K)
    if kind is ModelKind.LORENTZIAN:
        return lor
    if kind is ModelKind.GAUSSIAN:
        return gau
    if kind is ModelKind.PSEUDO_VOIGT:
        return eta * lor + (1.0 - eta) * gau
    raise ValueError(f"no single-line area for {kind}")


class ModelKind(enum.Enum):
    LORENTZIAN = "lorentzian"
    GAUSSIAN = "gaussian"
    PSEUDO_VOIGT = "pseudo-voigt"
    SPLIT_PEAK = "split-peak"
    PEAK_WITH_DIPS = "peak-with-dips"


@dataclass(frozen=True)
class LineModel:
    """A lineshape model on a linear baseline ``b0 + b1·x``.

    PEAK_WITH_DIPS is a broad Lorentzian minus ``k`` narrow Lorentzian dips
    (positive depth means a dip).
    """

    kind: ModelKind
    k: int = 0

    def __post_init__(self):
        if self.kind is ModelKind.PEAK_WITH_DIPS and self.k < 1:
            raise ValueError("peak-with-dips needs k >= 1")
        if self.kind is not ModelKind.PEAK_WITH_DIPS and self.k:
            raise ValueError("k only applies to peak-with-dips")

    @classmethod
    def parse(cls, name: str) -> "LineModel":
        name = name.strip().lower()
        if name.startswith("peak-with-dips"):
            k = int(name.split(":")[1]) if ":" in name else 2
            return cls(ModelKind.PEAK_WITH_DIPS, k)
        return cls(ModelKind(name))

    @property
    def label(self) -> str:
        return f"{self.kind.value}:{self.k}" if self.k else self.kind.value

    @property
    def param_names(self) -> tuple[str, ...]:
        if self.kind is ModelKind.SPLIT_PEAK:
            names = ("center_1", "fwhm_1", "amplitude_1", "center_2", "fwhm_2", "amplitude_2")
        elif self.kind is ModelKind.PEAK_WITH_DIPS:
            names = ("center", "fwhm", "amplitude")
            for j in range(1, self.k + 1):
                names += (f"dip_center_{j}", f"dip_fwhm_{j}", f"dip_depth_{j}")
        elif self.kind is ModelKind.PSEUDO_VOIGT:
            names = ("center", "fwhm", "amplitude", "eta")
        else:
            names = ("center", "fwhm", "amplitude")
        return names + ("baseline_0", "baseline_1")

    @property
    def n_params(self) -> int:
        return len(self.param_names)

    def evaluate(self, x: np.ndarray, p: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Model values and Jacobian (len(x) × n_params)."""
        x = np.asarray(x, float)
        jac = np.zeros((len(x), self.n_params))
        f = p[-2] + p[-1] * x
        jac[:, -2] = 1.0
        jac[:, -1] = x
        kind = self.kind
        if kind is ModelKind.PSEUDO_VOIGT:
            c, w, a, eta = p[:4]
            lf, lc, lw = _lorentzian_grad(x, c, w)
            gf, gc, gw = _gaussian_grad(x, c, w)
            shape = eta * lf + (1 - eta) * gf
            f = f + a * shape
            jac[:, 0] = a * (eta * lc + (1 - eta) * gc)
            jac[:, 1] = a * (eta * lw + (1 - eta) * gw)
            jac[:, 2] = shape
            jac[:, 3] = a * (lf - gf)
            return f, jac
        grad = _gaussian_grad if kind is ModelKind.GAUSSIAN else _lorentzian_grad
        n_lines = (self.n_params - 2) // 3
        for j in range(n_lines):
            c, w, a = p[3 * j: 3 * j + 3]
            sign = -1.0 if (kind is ModelKind.PEAK_WITH_DIPS and j > 0) else 1.0
            sf, sc, sw = grad(x, c, w)
            f = f + sign * a * sf
            jac[:, 3 * j] = sign * a * sc
            jac[:, 3 * j + 1] = sign * a * sw
            jac[:, 3 * j + 2] = sign * sf
        return f, jac

    def __call__(self, x, p) -> np.ndarray:
        return self.evaluate(x, np.asarray(p, float))[0]
