"""Numeric Karamata toolkit: regular-variation defects, representations,
integral/sum asymptotics and asymptotic-ratio classification.

Everything here works on finite sample grids; the outputs are estimates and
diagnostics, never proofs of the corresponding limit statements.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.integrate import quad

from .errors import NumericError
from .gauge import GaugeFunction
from .geometry import ScaleGrid

DEFAULT_BAND = 0.02
_TAIL_SPLICE_FACTOR = 1e3


def _evaluator(h):
    """Accept a GaugeFunction or a bare callable."""
    if isinstance(h, GaugeFunction):
        return h.h, h.domain_upper
    return h, None


def rv_defect(h, rho: float, t_grid, y_grid) -> np.ndarray:
    """Per-scale worst defect sup_t |h(ty)/h(y) - t**rho|.

    A trend to 0 along y_grid (decreasing to 0) is numeric evidence that h
    is regularly varying with index rho.
    """
    fn, upper = _evaluator(h)
    ts = np.asarray(t_grid, dtype=float)
    ys = np.asarray(y_grid, dtype=float)
    if ts.size == 0 or ys.size == 0:
        raise ValueError("empty grid")
    out = np.empty(ys.size)
    for i, y in enumerate(ys):
        usable = ts if upper is None else ts[ts * y <= upper]
        if usable.size < ts.size:
            warnings.warn("rv_defect: skipped t values outside the domain")
        if usable.size == 0:
            raise ValueError("all t values leave the domain at y = %g" % y)
        ratio = np.atleast_1d(fn(usable * y)) / fn(y)
        out[i] = float(np.max(np.abs(ratio - usable ** rho)))
    return out


@dataclass(frozen=True)
class RepresentationDecomposition:
    """Karamata representation l(y) = c(y) * exp(int_y^a eps(u)/u du).

    Canonicalized with constant c = l(a) and eps the negated elasticity,
    which reconstructs differentiable inputs exactly up to quadrature error.
    """

    anchor: float
    y_grid: np.ndarray
    c_values: np.ndarray
    eps_values: np.ndarray
    limit_C: float
    reconstruction: np.ndarray
    input_values: np.ndarray

    @property
    def max_relative_residual(self) -> float:
        return float(np.max(np.abs(self.reconstruction / self.input_values - 1.0)))


def extract_representation(l: Callable, a: float, y_grid,
                           dl: Optional[Callable] = None) -> RepresentationDecomposition:
    """Decompose a slowly varying l with eps(u) = -u l'(u)/l(u), c = l(a)."""
    ys = np.sort(np.asarray(y_grid, dtype=float))
    if ys.size == 0:
        raise ValueError("empty y grid")

    def deriv(u):
        if dl is not None:
            return float(dl(u))
        step = u * 1e-6
        return (float(l(u + step)) - float(l(u - step))) / (2 * step)

    def eps(u):
        val = -u * deriv(u) / float(l(u))
        if not math.isfinite(val):
            raise NumericError("non-finite l'/l at u = %g" % u)
        return val

    eps_vals = np.array([eps(u) for u in ys])
    if np.any(~np.isfinite(eps_vals)):
        raise NumericError("non-finite elasticity on the grid")
    c = float(l(a))
    recon = np.empty(ys.size)
    for i, y in enumerate(ys):
        integral, _ = quad(lambda u: eps(u) / u, y, a,
                           epsabs=0.0, epsrel=1e-11, limit=400)
        recon[i] = c * math.exp(integral)
    inputs = np.array([float(l(y)) for y in ys])
    return RepresentationDecomposition(
        anchor=float(a), y_grid=ys, c_values=np.full(ys.size, c),
        eps_values=eps_vals, limit_C=c, reconstruction=recon,
        input_values=inputs)


def karamata_direct(f: Callable, rho: float, sigma: float, x: float, X: float,
                    half: Optional[str] = None) -> float:
    """Karamata ratio x^(sigma+1) f(x) / (weighted integral of f).

    For sigma >= -(rho+1) the integral runs from X to x and the ratio tends
    to sigma+rho+1; otherwise the tail integral from x to infinity is used
    and the ratio tends to -(sigma+rho+1).
    """
    direct = sigma >= -(rho + 1.0)
    if half == "tail" and direct:
        raise ValueError("tail integral diverges for sigma >= -(rho+1)")
    if half == "direct":
        direct = True

    def integrand(u):
        return u ** sigma * float(f(u))

    if direct:
        integral, _ = quad(integrand, X, x, epsabs=0.0, epsrel=1e-10, limit=400)
        return x ** (sigma + 1) * float(f(x)) / integral
    splice = _TAIL_SPLICE_FACTOR * x
    integral, _ = quad(integrand, x, splice, epsabs=0.0, epsrel=1e-10, limit=400)
    # analytic power-law closure beyond the splice point
    integral += -splice ** (sigma + 1) * float(f(splice)) / (sigma + rho + 1.0)
    return x ** (sigma + 1) * float(f(x)) / integral


def tail_sum_rv(g: Callable, rho: float, k: int):
    """(sum_{j >= k} g(j), prediction -k g(k)/(rho+1)); ratio -> 1 as k grows."""
    if rho >= -1.0:
        raise ValueError("tail sums require rho < -1")
    gk = float(g(k))
    g2k = float(g(2 * k))
    if gk <= 0 or g2k <= 0:
        raise ValueError("g must be positive at k and 2k")
    local_index = math.log(g2k / gk) / math.log(2.0)
    if abs(local_index - rho) > 0.75:
        raise ValueError(
            "g does not look regularly varying with index %g (local index %.3f)"
            % (rho, local_index))
    M = max(k, 4096)
    js = np.arange(k, M, dtype=float)
    direct = math.fsum(np.asarray(g(js), dtype=float)) if js.size else 0.0

    def fn(t):
        return float(g(t))

    integral, _ = quad(fn, M, np.inf, epsabs=0.0, epsrel=1e-12, limit=400)
    if not math.isfinite(integral):
        raise NumericError("tail integral did not converge")
    step = M * 1e-4
    d1 = (fn(M + step) - fn(M - step)) / (2 * step)
    total = direct + integral + fn(M) / 2.0 - d1 / 12.0
    predicted = -1.0 / (rho + 1.0) * k * gk
    return total, predicted


@dataclass(frozen=True)
class RatioVerdict:
    """Sampled liminf/limsup of f1/f2 with a coarse classification."""

    liminf_estimate: float
    limsup_estimate: float
    classification: str  # "equivalent" | "similar" | "neither"
    grid: ScaleGrid
    values: np.ndarray = field(repr=False, default=None)

    def to_json(self) -> dict:
        return {
            "liminf": self.liminf_estimate,
            "limsup": self.limsup_estimate,
            "classification": self.classification,
            "grid": self.grid.scales.tolist(),
        }


def classify_ratio(f1: Callable, f2: Callable, grid: ScaleGrid,
                   band: float = DEFAULT_BAND) -> RatioVerdict:
    """Classify f1/f2 on the grid as ~ (equivalent), asymp (similar) or neither.

    liminf/limsup are estimated from the trailing third of the samples.
    """
    scales = grid.scales
    if scales.size < 9:
        raise ValueError("grid too short: need at least 9 scales")
    try:
        num = np.asarray(f1(scales), dtype=float)
        den = np.asarray(f2(scales), dtype=float)
        if num.shape != scales.shape or den.shape != scales.shape:
            raise TypeError
    except (TypeError, ValueError):
        num = np.array([float(f1(s)) for s in scales])
        den = np.array([float(f2(s)) for s in scales])
    if np.any(den <= 0.0):
        raise ValueError("f2 must be positive on the grid")
    values = num / den
    tail = values[-max(3, scales.size // 3):]
    lo = float(np.min(tail))
    hi = float(np.max(tail))
    if not (math.isfinite(lo) and math.isfinite(hi)):
        cls = "neither"
    elif 1.0 - band <= lo and hi <= 1.0 + band:
        cls = "equivalent"
    elif lo > 0.0 and math.isfinite(hi):
        cls = "similar"
    else:
        cls = "neither"
    return RatioVerdict(liminf_estimate=lo, limsup_estimate=hi,
                        classification=cls, grid=grid, values=values)
