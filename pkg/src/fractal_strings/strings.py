"""Fractal strings: non-increasing summable length sequences.

Three backends are provided.  Explicit stores the lengths outright,
RunLength stores (length, multiplicity) blocks (the natural encoding for
self-similar strings), and Analytic wraps a closed-form monotone profile
j -> l_j with exact or Euler-Maclaurin tail sums.
"""

from __future__ import annotations

import math
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from .errors import ConstructionError, NumericError
from .gauge import DerivedFunctions, gauge_from_json, gauge_to_json, make_derived


def _compensated_suffix_sums(values: np.ndarray) -> np.ndarray:
    """suffix[i] = sum(values[i:]) accumulated with Neumaier compensation."""
    n = values.size
    out = np.empty(n + 1)
    out[n] = 0.0
    s = 0.0
    c = 0.0
    for i in range(n - 1, -1, -1):
        v = values[i]
        t = s + v
        if abs(s) >= abs(v):
            c += (s - t) + v
        else:
            c += (v - t) + s
        s = t
        out[i] = s + c
    return out


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(32)
_PANEL_FACTOR = 8.0
_MAX_PANELS = 250


def _panel_integral_to_inf(fn: Callable, a: float) -> float:
    """int_a^inf fn via 32-point Gauss-Legendre on geometric panels.

    fn must accept float arrays and decay at least like a power t^-p, p > 1.
    Panels [a q^k, a q^(k+1)] are accumulated until their contribution is
    negligible relative to the running total.
    """
    total = 0.0
    lo = a
    for _ in range(_MAX_PANELS):
        hi = lo * _PANEL_FACTOR
        mid = 0.5 * (lo + hi)
        half = 0.5 * (hi - lo)
        pts = mid + half * _GL_NODES
        panel = half * float(np.dot(_GL_WEIGHTS, np.asarray(fn(pts), dtype=float)))
        total += panel
        if abs(panel) <= 1e-15 * abs(total) or hi > 1e300:
            return total
        lo = hi
    raise NumericError("tail integral did not converge within the panel budget")


def _em_tail_sum(fn: Callable[[float], float], m: int) -> float:
    """sum_{j > m} fn(j) for a smooth, eventually power-decaying fn.

    Direct summation up to a cutoff, then Euler-Maclaurin closure: integral
    plus the f/2 and f'/12 and f'''/720 correction terms.
    """
    M = max(m + 1, 512)
    direct = 0.0
    if M > m + 1:
        js = np.arange(m + 1, M, dtype=float)
        direct = math.fsum(np.asarray(fn(js), dtype=float))
    integral = _panel_integral_to_inf(fn, float(M))
    step = max(M * 1e-4, 1e-4)
    d1 = (float(fn(M + step)) - float(fn(M - step))) / (2 * step)
    d3 = (float(fn(M + 2 * step)) - 2 * float(fn(M + step)) + 2 * float(fn(M - step))
          - float(fn(M - 2 * step))) / (2 * step ** 3)
    fM = float(fn(float(M)))
    return direct + integral + fM / 2.0 - d1 / 12.0 + d3 / 720.0


class FractalString:
    """Base interface: a non-increasing positive sequence l_1 >= l_2 >= ... ."""

    def length(self, j: int) -> float:
        raise NotImplementedError

    def J(self, eps: float) -> int:
        """Number of lengths strictly larger than eps."""
        raise NotImplementedError

    def runs_above(self, eps: float) -> Tuple[np.ndarray, np.ndarray]:
        """(values, multiplicities) of the lengths strictly larger than eps."""
        raise NotImplementedError

    def tail_sum_beyond(self, eps: float) -> float:
        """sum_{j > J(eps)} l_j."""
        raise NotImplementedError

    def total_length(self) -> float:
        raise NotImplementedError

    def head_sum(self, n: int) -> float:
        """sum_{j <= n} l_j."""
        raise NotImplementedError

    def multiplicity_at(self, eps: float) -> int:
        """Number of lengths exactly equal to eps (tie detection)."""
        count = 0
        j = self.J(eps) + 1
        try:
            while self.length(j) == eps:
                count += 1
                j += 1
        except IndexError:
            pass
        return count

    def count(self) -> Optional[int]:
        """Number of lengths, or None for infinite strings."""
        return None

    def truncate(self, n: int) -> "ExplicitString":
        if n < 1:
            raise ValueError("n must be >= 1")
        vals = np.array([self.length(j) for j in range(1, n + 1)])
        return ExplicitString(vals)


class ExplicitString(FractalString):
    def __init__(self, lengths: Sequence[float]):
        vals = np.sort(np.asarray(lengths, dtype=float))[::-1].copy()
        if vals.size == 0 or vals[-1] <= 0.0:
            raise ConstructionError("lengths must be positive and non-empty")
        self._vals = vals
        self._suffix = _compensated_suffix_sums(vals)

    def length(self, j: int) -> float:
        if not 1 <= j <= self._vals.size:
            raise IndexError("index %d beyond string of %d lengths" % (j, self._vals.size))
        return float(self._vals[j - 1])

    def J(self, eps: float) -> int:
        return int(np.searchsorted(-self._vals, -eps, side="left"))

    def runs_above(self, eps: float):
        j = self.J(eps)
        return self._vals[:j], np.ones(j)

    def tail_sum_beyond(self, eps: float) -> float:
        return float(self._suffix[self.J(eps)])

    def total_length(self) -> float:
        return float(self._suffix[0])

    def head_sum(self, n: int) -> float:
        n = min(n, self._vals.size)
        return float(self._suffix[0] - self._suffix[n])

    def multiplicity_at(self, eps: float) -> int:
        lo = np.searchsorted(-self._vals, -eps, side="left")
        hi = np.searchsorted(-self._vals, -eps, side="right")
        return int(hi - lo)

    def count(self):
        return int(self._vals.size)

    def truncate(self, n: int) -> "ExplicitString":
        if n < 1:
            raise ValueError("n must be >= 1")
        return ExplicitString(self._vals[:min(n, self._vals.size)])


class RunLengthString(FractalString):
    def __init__(self, blocks: Sequence[Tuple[float, int]]):
        if not blocks:
            raise ConstructionError("blocks must be non-empty")
        vals = np.array([b[0] for b in blocks], dtype=float)
        # float64 so huge multiplicities (e.g. 2^95) are representable;
        # realistic query depths stay far below the 2^53 exactness limit
        mult = np.array([b[1] for b in blocks], dtype=float)
        if np.any(np.diff(vals) >= 0.0):
            raise ConstructionError("block lengths must be strictly decreasing")
        if vals[-1] <= 0.0 or np.any(mult < 1):
            raise ConstructionError("lengths positive, multiplicities >= 1 required")
        self._vals = vals
        self._mult = mult
        self._cum = np.concatenate([[0], np.cumsum(mult)])
        self._suffix = _compensated_suffix_sums(vals * mult)
        self._exact_count = sum(int(b[1]) for b in blocks)

    def length(self, j: int) -> float:
        if not 1 <= j <= self._cum[-1]:
            raise IndexError("index %d beyond string of %d lengths" % (j, self._cum[-1]))
        b = int(np.searchsorted(self._cum, j, side="left")) - 1
        return float(self._vals[b])

    def J(self, eps: float) -> int:
        b = int(np.searchsorted(-self._vals, -eps, side="left"))
        return int(self._cum[b])

    def runs_above(self, eps: float):
        b = int(np.searchsorted(-self._vals, -eps, side="left"))
        return self._vals[:b], self._mult[:b]

    def tail_sum_beyond(self, eps: float) -> float:
        b = int(np.searchsorted(-self._vals, -eps, side="left"))
        return float(self._suffix[b])

    def total_length(self) -> float:
        return float(self._suffix[0])

    def head_sum(self, n: int) -> float:
        n = min(n, int(self._cum[-1]))
        b = int(np.searchsorted(self._cum, n, side="left"))
        partial = float(self._suffix[0] - self._suffix[b])
        # subtract the part of block b-1 that lies beyond n
        over = int(self._cum[b]) - n
        return partial - over * float(self._vals[b - 1]) if over else partial

    def multiplicity_at(self, eps: float) -> int:
        idx = np.nonzero(self._vals == eps)[0]
        return int(self._mult[idx[0]]) if idx.size else 0

    def count(self):
        return self._exact_count

    def truncate(self, n: int) -> ExplicitString:
        if n < 1:
            raise ValueError("n must be >= 1")
        n = int(min(n, self._cum[-1]))
        reps = np.minimum(self._mult, float(n)).astype(np.int64)
        return ExplicitString(np.repeat(self._vals, reps)[:n])


class AnalyticString(FractalString):
    """String defined by a monotone profile j -> l_j on the whole real ray.

    ``length_fn`` must accept float arrays, ``inv_hint`` returns a real
    approximation of the j solving l_j = eps, ``tail_fn`` (optional) returns
    the exact value of sum_{j > m} l_j.
    """

    def __init__(self, length_fn: Callable, inv_hint: Callable[[float], float],
                 tail_fn: Optional[Callable[[int], float]] = None,
                 total: Optional[float] = None):
        self._fn = length_fn
        self._inv = inv_hint
        self._tail = tail_fn
        if total is None:
            total = self.head_sum(1024) + self.tail_sum_beyond_index(1024)
        self._total = float(total)

    def length(self, j: int) -> float:
        if j < 1:
            raise IndexError("index must be >= 1")
        return float(self._fn(np.array([float(j)]))[0])

    def _scalar(self, j: float) -> float:
        return float(self._fn(np.array([float(j)]))[0])

    def J(self, eps: float) -> int:
        if self._scalar(1.0) <= eps:
            return 0
        guess = max(1, int(self._inv(eps)))
        lo = max(1, guess // 2)
        while lo > 1 and self._scalar(lo) <= eps:
            lo = max(1, lo // 2)
        hi = max(guess, lo) + 1
        while self._scalar(hi) > eps:
            hi *= 2
        # largest j with l_j > eps lies in [lo, hi)
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if self._scalar(mid) > eps:
                lo = mid
            else:
                hi = mid
        return lo

    def runs_above(self, eps: float):
        j = self.J(eps)
        js = np.arange(1, j + 1, dtype=float)
        return np.asarray(self._fn(js), dtype=float), np.ones(j)

    def tail_sum_beyond_index(self, m: int) -> float:
        if self._tail is not None:
            return float(self._tail(m))

        def fn(t):
            arr = np.atleast_1d(np.asarray(t, dtype=float))
            out = np.asarray(self._fn(arr), dtype=float)
            return out if np.ndim(t) else float(out[0])

        return _em_tail_sum(fn, m)

    def tail_sum_beyond(self, eps: float) -> float:
        return self.tail_sum_beyond_index(self.J(eps))

    def total_length(self) -> float:
        return self._total

    def head_sum(self, n: int) -> float:
        js = np.arange(1, n + 1, dtype=float)
        return math.fsum(np.asarray(self._fn(js), dtype=float))

    def multiplicity_at(self, eps: float) -> int:
        count = 0
        j = self.J(eps) + 1
        while count < 8 and self._scalar(j) == eps:
            count += 1
            j += 1
        return count


# -- canonical families -----------------------------------------------------


def make_interval(l: float = 1.0) -> ExplicitString:
    """A single interval of length l."""
    return ExplicitString([l])


def make_cantor(depth: int = 96) -> RunLengthString:
    """Middle-third Cantor string: lengths 3^-n with multiplicity 2^(n-1)."""
    blocks = [(3.0 ** -n, 2 ** (n - 1)) for n in range(1, depth + 1)]
    return RunLengthString(blocks)


def make_a_string(a: float) -> AnalyticString:
    """l_j = j^-a - (j+1)^-a; summable with telescoping tails, total 1."""
    if a <= 0:
        raise ValueError("a must be positive")

    def length_fn(js):
        js = np.asarray(js, dtype=float)
        # j^-a - (j+1)^-a without cancellation
        return js ** -a * (-np.expm1(-a * np.log1p(1.0 / js)))

    def inv_hint(eps):
        return (a / eps) ** (1.0 / (a + 1.0))

    def tail_fn(m):
        return float(m + 1) ** -a

    return AnalyticString(length_fn, inv_hint, tail_fn=tail_fn, total=1.0)


def make_profile(L: float, derived: DerivedFunctions,
                 j_max: Optional[int] = None) -> AnalyticString:
    """String with l_j = L*g(j) beyond valid_from, clamped constant before.

    g decays with index -1/D < -1, so the string is summable; the finite
    prefix keeps the sequence non-increasing from j = 1.
    """
    if L <= 0:
        raise ValueError("L must be positive")
    j0 = max(1, int(math.ceil(derived.valid_from)))
    try:
        clamp = L * derived.g(float(j0))
    except Exception as exc:
        raise ConstructionError("profile start index unresolvable: %s" % exc)

    def length_fn(js):
        js = np.asarray(js, dtype=float)
        out = np.full(js.shape, clamp)
        free = js >= j0
        if np.any(free):
            out[free] = L * derived.g(js[free])
        return out

    def inv_hint(eps):
        if eps >= clamp:
            return 1.0
        # l_j > eps  <=>  j < 1/H(eps/L)
        return 1.0 / (eps / L / derived.gauge.h(eps / L))

    return AnalyticString(length_fn, inv_hint)


# -- JSON wire format -------------------------------------------------------


def string_to_json(spec_kind: str, **kw) -> dict:
    return {"kind": spec_kind, **kw}


def string_from_json(spec: dict) -> FractalString:
    kind = spec.get("kind")
    if kind == "cantor":
        return make_cantor(int(spec.get("depth", 96)))
    if kind == "a_string":
        return make_a_string(float(spec["a"]))
    if kind == "interval":
        return make_interval(float(spec.get("length", 1.0)))
    if kind == "explicit":
        return ExplicitString(spec["lengths"])
    if kind == "profile":
        gauge = gauge_from_json(spec["gauge"])
        D = 1.0 - gauge.index
        derived = make_derived(gauge, D)
        s = make_profile(float(spec.get("L", 1.0)), derived)
        if "truncate" in spec:
            return s.truncate(int(spec["truncate"]))
        return s
    raise ValueError("unknown string kind: %r" % kind)
