"""Gauge functions: smoothly varying scale gauges h(y) and their calculus.

A gauge replaces the power ``y**rho`` in content definitions.  The closed-form
family implemented here is the iterated power-log family

    h(y) = y**rho * prod_i (log_i(1/y))**alpha_i,

where ``log_1(1/y) = ln(1/y)`` and ``log_{i+1} = ln(log_i)``.  Arbitrary
evaluators are supported through the custom form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import ConstructionError, DomainError, EvaluationError

_H_INV_ITERATIONS = 200
_H_INV_RTOL = 1e-12
_MONOTONE_SCAN_POINTS = 64


def _iterated_logs(y, depth: int):
    """Return [L_1, ..., L_depth] with L_1 = ln(1/y), L_{i+1} = ln(L_i)."""
    logs = []
    cur = np.log(1.0 / np.asarray(y, dtype=float))
    for _ in range(depth):
        logs.append(cur)
        cur = np.log(cur)
    return logs


@dataclass(frozen=True)
class GaugeFunction:
    """A positive gauge h on (0, domain_upper], regularly varying of `index`.

    Power-log gauges leave ``h_fn`` as None; custom gauges supply ``h_fn``
    (and optionally ``dh_fn``, otherwise a central-difference fallback with
    one Richardson step is used for the derivative).
    """

    index: float
    domain_upper: float
    log_exponents: tuple = ()
    h_fn: Optional[Callable[[float], float]] = None
    dh_fn: Optional[Callable[[float], float]] = None

    def __post_init__(self):
        if not (self.domain_upper > 0):
            raise ConstructionError("domain_upper must be positive")
        if self.h_fn is None and self.log_exponents:
            # innermost iterated log must be positive on the whole domain
            with np.errstate(divide="ignore", invalid="ignore"):
                logs = _iterated_logs(self.domain_upper, len(self.log_exponents))
            if not np.all(np.isfinite(logs[-1])) or logs[-1] <= 0:
                raise ConstructionError(
                    "domain_upper too large for %d iterated logs" % len(self.log_exponents)
                )

    @property
    def is_powerlog(self) -> bool:
        return self.h_fn is None

    @property
    def is_pure_power(self) -> bool:
        return self.h_fn is None and not self.log_exponents

    # -- evaluation ---------------------------------------------------------

    def _check_domain(self, y):
        arr = np.asarray(y, dtype=float)
        if np.any(arr <= 0.0) or np.any(arr > self.domain_upper * (1 + 1e-15)):
            raise DomainError("y must lie in (0, %g]" % self.domain_upper)

    def h(self, y):
        """Evaluate h(y).  Accepts scalars or numpy arrays."""
        self._check_domain(y)
        arr = np.asarray(y, dtype=float)
        if self.h_fn is not None:
            out = np.asarray(self.h_fn(arr), dtype=float)
        else:
            out = arr ** self.index
            if self.log_exponents:
                for alpha, L in zip(self.log_exponents, _iterated_logs(arr, len(self.log_exponents))):
                    out = out * L ** alpha
        if np.any(~np.isfinite(out)) or np.any(out <= 0.0):
            raise EvaluationError("h evaluated non-positive or non-finite")
        return float(out) if np.isscalar(y) else out

    def dh(self, y):
        """Evaluate h'(y); closed form for power-log gauges."""
        self._check_domain(y)
        arr = np.asarray(y, dtype=float)
        if self.is_powerlog:
            out = self.h(arr) / arr * self._elasticity_powerlog(arr)
        elif self.dh_fn is not None:
            out = np.asarray(self.dh_fn(arr), dtype=float)
        else:
            out = self._dh_fallback(arr)
        if np.any(~np.isfinite(out)):
            raise EvaluationError("h' evaluated non-finite")
        return float(out) if np.isscalar(y) else out

    def _dh_fallback(self, arr):
        # central difference with one Richardson extrapolation step
        step = arr * 1e-5
        hi = np.minimum(arr + step, self.domain_upper)
        lo = arr - step
        d1 = (np.asarray(self.h_fn(hi)) - np.asarray(self.h_fn(lo))) / (hi - lo)
        step2 = step / 2.0
        hi2 = np.minimum(arr + step2, self.domain_upper)
        lo2 = arr - step2
        d2 = (np.asarray(self.h_fn(hi2)) - np.asarray(self.h_fn(lo2))) / (hi2 - lo2)
        out = (4.0 * d2 - d1) / 3.0
        if np.any(~np.isfinite(out)):
            raise EvaluationError("difference-quotient fallback for h' failed")
        return out

    def _elasticity_powerlog(self, arr):
        ela = np.full_like(np.asarray(arr, dtype=float), self.index)
        if self.log_exponents:
            logs = _iterated_logs(arr, len(self.log_exponents))
            prod = np.ones_like(ela)
            for alpha, L in zip(self.log_exponents, logs):
                prod = prod * L
                ela = ela - alpha / prod
        return ela

    def elasticity(self, y):
        """E_h(y) = y h'(y)/h(y); tends to the variation index as y -> 0."""
        self._check_domain(y)
        arr = np.asarray(y, dtype=float)
        if self.is_powerlog:
            out = self._elasticity_powerlog(arr)
        else:
            out = arr * self.dh(arr) / self.h(arr)
        return float(out) if np.isscalar(y) else out


def power_log(rho: float, log_exponents: Sequence[float] = (), domain_upper: Optional[float] = None) -> GaugeFunction:
    """Build an iterated power-log gauge y**rho * prod (log_i(1/y))**alpha_i."""
    if domain_upper is None:
        domain_upper = 1.0 if not log_exponents else 0.1
    return GaugeFunction(index=float(rho), domain_upper=float(domain_upper),
                         log_exponents=tuple(float(a) for a in log_exponents))


def custom_gauge(h: Callable, index: float, domain_upper: float, dh: Optional[Callable] = None) -> GaugeFunction:
    """Wrap user-supplied evaluators as a gauge of the given variation index."""
    return GaugeFunction(index=float(index), domain_upper=float(domain_upper),
                         h_fn=h, dh_fn=dh)


# convenience wrappers matching the functional style used elsewhere

def eval_h(gauge: GaugeFunction, y):
    return gauge.h(y)


def eval_dh(gauge: GaugeFunction, y):
    return gauge.dh(y)


def elasticity(gauge: GaugeFunction, y):
    return gauge.elasticity(y)


# -- derived functions H, H^-1, f, g ---------------------------------------


@dataclass(frozen=True)
class DerivedFunctions:
    """H(y) = y/h(y) with its inverse, and the induced f and g.

    f(x) = x*h(1/x) grows like x**D; g(x) = H^{-1}(1/x) decays like x**(-1/D).
    Both are trusted on [valid_from, inf).
    """

    gauge: GaugeFunction
    D: float
    y1: float          # H strictly increasing on (0, y1]
    valid_from: float

    def H(self, y):
        return np.asarray(y, dtype=float) / self.gauge.h(y) if not np.isscalar(y) else y / self.gauge.h(y)

    def H_at_y1(self) -> float:
        return self.y1 / self.gauge.h(self.y1)

    def H_inv(self, z):
        """Invert H on (0, y1] by geometric bisection (closed form for pure powers)."""
        scalar = np.isscalar(z)
        zz = np.atleast_1d(np.asarray(z, dtype=float))
        z_max = self.H_at_y1()
        if np.any(zz <= 0.0) or np.any(zz > z_max * (1 + 1e-12)):
            raise DomainError("H_inv argument outside admissible range (0, %g]" % z_max)
        if self.gauge.is_pure_power:
            # H(y) = y**D exactly
            out = zz ** (1.0 / self.D)
        elif self.gauge.is_powerlog:
            out = self._newton_powerlog(zz)
        else:
            out = self._bisect(zz)
        return float(out[0]) if scalar else out

    def _newton_powerlog(self, zz: np.ndarray) -> np.ndarray:
        """Newton iteration in log coordinates, ln H = D u - sum a_i ln L_i."""
        g = self.gauge
        D = self.D
        alphas = g.log_exponents
        u_hi = math.log(self.y1)
        u_lo = math.log(1e-300)
        ln_z = np.log(zz)
        u = np.clip(ln_z / D, u_lo, u_hi)
        for _ in range(80):
            logs = _iterated_logs(np.exp(u), len(alphas))
            ln_H = D * u
            slope = np.full_like(u, D)  # d ln H / d u = 1 - E_h
            prod = 1.0
            for alpha, L in zip(alphas, logs):
                ln_H = ln_H - alpha * np.log(L)
                prod = prod * L
                slope = slope + alpha / prod
            step = (ln_H - ln_z) / slope
            u = np.clip(u - step, u_lo, u_hi)
            if np.max(np.abs(step)) < 1e-15:
                break
        if np.max(np.abs(step)) > 1e-9:
            return self._bisect(zz)
        return np.exp(u)

    def _bisect(self, zz: np.ndarray) -> np.ndarray:
        lo = np.full_like(zz, max(1e-280, self.y1 * 1e-260))
        hi = np.full_like(zz, self.y1)
        log_lo = np.log(lo)
        log_hi = np.log(hi)
        for _ in range(_H_INV_ITERATIONS):
            mid = np.exp(0.5 * (log_lo + log_hi))
            hm = mid / self.gauge.h(mid)
            take_hi = hm > zz
            log_hi = np.where(take_hi, np.log(mid), log_hi)
            log_lo = np.where(take_hi, log_lo, np.log(mid))
            if np.max(log_hi - log_lo) < _H_INV_RTOL * 1e-3:
                break
        return np.exp(0.5 * (log_lo + log_hi))

    def f(self, x):
        """f(x) = x * h(1/x), defined for x >= 1/domain_upper."""
        scalar = np.isscalar(x)
        xx = np.atleast_1d(np.asarray(x, dtype=float))
        if np.any(xx < 1.0 / self.gauge.domain_upper * (1 - 1e-15)):
            raise DomainError("f requires x >= %g" % (1.0 / self.gauge.domain_upper))
        out = xx * self.gauge.h(1.0 / xx)
        return float(out[0]) if scalar else out

    def g(self, x):
        """g(x) = H_inv(1/x), defined for x >= 1/H(y1)."""
        scalar = np.isscalar(x)
        xx = np.atleast_1d(np.asarray(x, dtype=float))
        out = self.H_inv(1.0 / xx)
        return float(out[0]) if scalar else out


def make_derived(gauge: GaugeFunction, D: float) -> DerivedFunctions:
    """Construct H, H^-1, f, g for a gauge of index 1-D, D in (0,1)."""
    if not (0.0 < D < 1.0):
        raise ConstructionError("D must lie in (0,1); got %r" % D)
    if abs(gauge.index - (1.0 - D)) > 1e-12:
        raise ConstructionError(
            "gauge index %g does not match 1-D = %g" % (gauge.index, 1.0 - D))
    # detect a subdomain (0, y1] where H = y/h(y) is strictly increasing:
    # elasticity of H is 1 - E_h(y), require it positive on a geometric scan
    y0 = gauge.domain_upper
    y1 = y0
    for _ in range(8):
        ys = np.geomspace(y1 * 1e-16, y1, _MONOTONE_SCAN_POINTS)
        e_h = gauge.elasticity(ys)
        ok = 1.0 - e_h > 0.0
        if np.all(ok):
            break
        bad = np.nonzero(~ok)[0]
        if bad[-1] == len(ys) - 1:
            y1 = y1 / 4.0
        else:
            y1 = ys[bad[-1]]  # largest failing point; keep scales below it
            y1 = y1 * 0.999
    else:
        raise ConstructionError("could not detect a monotone subdomain for H")
    h_at_y1 = y1 / gauge.h(y1)
    valid_from = max(1.0 / gauge.domain_upper, 1.0 / h_at_y1)
    return DerivedFunctions(gauge=gauge, D=float(D), y1=float(y1),
                            valid_from=float(valid_from))


# -- condition checkers (diagnostics, not proofs) --------------------------


@dataclass(frozen=True)
class ConditionReport:
    condition: str
    satisfied: bool
    worst_defect: float
    detail: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "condition": self.condition,
            "satisfied": bool(self.satisfied),
            "worst_defect": float(self.worst_defect),
            "detail": {k: (v.tolist() if isinstance(v, np.ndarray) else v)
                       for k, v in self.detail.items()},
        }


def _default_y_grid(gauge: GaugeFunction) -> np.ndarray:
    return np.geomspace(gauge.domain_upper * 1e-14, gauge.domain_upper, 40)


def check_H1(gauge: GaugeFunction, y_grid: Optional[np.ndarray] = None) -> ConditionReport:
    """Monotonicity of h and the limit trends h(y) -> 0, h(y)/y -> inf."""
    ys = np.sort(np.asarray(y_grid, dtype=float)) if y_grid is not None else _default_y_grid(gauge)
    if ys.size == 0:
        raise ValueError("empty y grid")
    hv = np.atleast_1d(gauge.h(ys))
    diffs = np.diff(hv)
    mono_defect = float(max(0.0, -diffs.min() / hv.max())) if diffs.size else 0.0
    to_zero = hv[0] < hv[-1] and hv[0] < 0.5 * hv[-1]
    ratio = hv / ys
    to_inf = ratio[0] > ratio[-1] and ratio[0] > 2.0 * ratio[-1]
    ok = mono_defect == 0.0 and to_zero and to_inf
    return ConditionReport("H1", ok, mono_defect, {
        "h_trend_to_zero": bool(to_zero),
        "h_over_y_trend_to_inf": bool(to_inf),
        "y_grid": ys, "h_values": hv,
    })


def check_H2(gauge: GaugeFunction, t_grid: np.ndarray, y_grid: np.ndarray) -> ConditionReport:
    """Worst homogeneity defect sup_t |h(ty)/h(y) - t**rho| per scale."""
    ts = np.asarray(t_grid, dtype=float)
    ys = np.asarray(y_grid, dtype=float)
    if ts.size == 0 or ys.size == 0:
        raise ValueError("empty grid")
    ys = np.sort(ys)[::-1]  # decreasing toward 0
    defects = np.empty(ys.size)
    for i, y in enumerate(ys):
        usable = ts[ts * y <= gauge.domain_upper]
        if usable.size == 0:
            raise ValueError("no usable t values at y = %g" % y)
        ratio = np.atleast_1d(gauge.h(usable * y)) / gauge.h(y)
        defects[i] = np.max(np.abs(ratio - usable ** gauge.index))
    ok = defects[-1] <= defects[0] + 1e-12
    return ConditionReport("H2", ok, float(defects.max()), {
        "defect_per_scale": defects, "y_grid": ys,
        "defect_at_smallest_scale": float(defects[-1]),
    })


def check_H3(gauge: GaugeFunction, tau: float, m: float,
             t_grid: np.ndarray, y_grid: np.ndarray) -> ConditionReport:
    """Check h(ty)/h(y) >= m * t**tau on the sampled (t, y) rectangle."""
    ts = np.asarray(t_grid, dtype=float)
    ys = np.asarray(y_grid, dtype=float)
    if ts.size == 0 or ys.size == 0:
        raise ValueError("empty grid")
    ts = ts[(ts > 0) & (ts <= 1.0)]
    if ts.size == 0:
        raise ValueError("H3 requires t values in (0, 1]")
    worst = np.inf
    for y in ys:
        ratio = np.atleast_1d(gauge.h(ts * y)) / gauge.h(y)
        margin = ratio / (m * ts ** tau)
        worst = min(worst, float(margin.min()))
    return ConditionReport("H3", worst >= 1.0, worst, {
        "tau": float(tau), "m": float(m), "min_margin": worst,
    })


# -- JSON wire format ------------------------------------------------------


def gauge_to_json(gauge: GaugeFunction) -> dict:
    if not gauge.is_powerlog:
        raise ValueError("custom gauges are not serializable")
    return {
        "form": "powerlog",
        "rho": gauge.index,
        "log_exponents": list(gauge.log_exponents),
        "domain_upper": gauge.domain_upper,
    }


def gauge_from_json(spec: dict) -> GaugeFunction:
    if spec.get("form") != "powerlog":
        raise ValueError("unknown gauge form: %r" % spec.get("form"))
    return power_log(spec["rho"], spec.get("log_exponents", ()),
                     spec.get("domain_upper"))
