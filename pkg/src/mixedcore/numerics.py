"""Scalar root finding, 1-D minimization and sigmoid least-squares fitting.

Everything here is deterministic and free of global state.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

DEFAULT_TOL = 1e-12
Z_CLAMP = 1e-12

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


class NumericsError(Exception):
    """Base class for numerical failures."""


class NoSignChange(NumericsError, ValueError):
    pass


class NonFinite(NumericsError, ArithmeticError):
    pass


class DegenerateFit(NumericsError):
    """Raised when the sigmoid location is unidentifiable (all rates equal).

    The unconverged fit is attached as ``fit``.
    """

    def __init__(self, msg: str, fit: "SigmoidFit"):
        super().__init__(msg)
        self.fit = fit


@dataclass(frozen=True)
class Bracket:
    lo: float
    hi: float
    tol_abs: float = DEFAULT_TOL

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError(f"bracket needs lo < hi, got [{self.lo}, {self.hi}]")
        if not self.tol_abs > 0:
            raise ValueError("tol_abs must be positive")

    @classmethod
    def unit(cls, lo: float = 0.0, hi: float = 1.0, tol_abs: float = DEFAULT_TOL) -> "Bracket":
        """Bracket inside (0, 1), clamped away from the log singularities."""
        return cls(max(lo, Z_CLAMP), min(hi, 1.0 - Z_CLAMP), tol_abs)


@dataclass(frozen=True)
class SigmoidFit:
    x: float
    y: float
    ss_res: float
    converged: bool
    iterations: int


def _checked(func: Callable[[float], float], z: float) -> float:
    v = func(z)
    if not math.isfinite(v):
        raise NonFinite(f"function value {v!r} at {z!r}")
    return v


def bisect_root(func: Callable[[float], float], bracket: Bracket) -> float:
    """Root of ``func`` inside ``bracket`` by plain bisection.

    A zero at either endpoint is returned as is. Iteration stops once the
    bracket is no wider than ``bracket.tol_abs`` or cannot be split further
    in floating point; the midpoint of the final bracket is returned.
    """
    lo, hi = bracket.lo, bracket.hi
    flo = _checked(func, lo)
    if flo == 0.0:
        return lo
    fhi = _checked(func, hi)
    if fhi == 0.0:
        return hi
    if (flo > 0) == (fhi > 0):
        raise NoSignChange(f"f({lo})={flo:g} and f({hi})={fhi:g} have the same sign")
    while hi - lo > bracket.tol_abs:
        mid = lo + 0.5 * (hi - lo)
        if mid <= lo or mid >= hi:
            break
        fm = _checked(func, mid)
        if fm == 0.0:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return lo + 0.5 * (hi - lo)


def minimize_1d(func: Callable[[float], float], bracket: Bracket,
                max_iter: int = 500) -> tuple[float, float]:
    """Golden-section search for the minimum of a unimodal function."""
    lo, hi = bracket.lo, bracket.hi
    x1 = hi - _INVPHI * (hi - lo)
    x2 = lo + _INVPHI * (hi - lo)
    f1, f2 = _checked(func, x1), _checked(func, x2)
    for _ in range(max_iter):
        if hi - lo <= bracket.tol_abs:
            break
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _INVPHI * (hi - lo)
            if not lo < x1 < x2:
                break
            f1 = _checked(func, x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _INVPHI * (hi - lo)
            if not x1 < x2 < hi:
                break
            f2 = _checked(func, x2)
    best = min((f1, x1), (f2, x2))
    # endpoints cover minima sitting on the bracket boundary
    for x in (bracket.lo, bracket.hi):
        fx = func(x)
        if math.isfinite(fx) and fx < best[0]:
            best = (fx, x)
    return best[1], best[0]


def sigmoid(c, x: float, y: float):
    """Logistic curve ``1 / (1 + exp(-(c - x) / y))``; works on scalars and arrays."""
    return 0.5 * (1.0 + np.tanh(0.5 * (np.asarray(c, dtype=float) - x) / y))


def _residuals(c: np.ndarray, rate: np.ndarray, x: float, y: float) -> np.ndarray:
    return sigmoid(c, x, y) - rate


def fit_sigmoid(points: Sequence[tuple[float, float]], init_x: float, init_y: float,
                max_iter: int = 200, tol: float = 1e-12) -> SigmoidFit:
    """Least-squares fit of a logistic curve to ``(c, rate)`` points.

    Levenberg-Marquardt with Marquardt diagonal scaling; damping starts at
    1e-3 and is multiplied by 10 on a rejected step and by 0.1 on an
    accepted one. Residuals are unweighted.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[0] < 3 or pts.shape[1] != 2:
        raise ValueError("need at least 3 (c, rate) points")
    c, rate = pts[:, 0], pts[:, 1]
    if np.unique(c).size != c.size:
        raise ValueError("density values must be distinct")
    if not init_y > 0:
        raise ValueError("init_y must be positive")

    if np.all(rate == rate[0]):
        r = _residuals(c, rate, init_x, init_y)
        fit = SigmoidFit(init_x, init_y, float(r @ r), False, 0)
        raise DegenerateFit("all rates are equal; location is unidentifiable", fit)

    p = np.array([init_x, init_y])
    r = _residuals(c, rate, *p)
    cost = float(r @ r)
    mu = 1e-3
    converged = False
    it = 0
    while it < max_iter:
        it += 1
        s = sigmoid(c, *p)
        ds = s * (1.0 - s)
        jac = np.column_stack((-ds / p[1], -ds * (c - p[0]) / p[1] ** 2))
        grad = jac.T @ r
        if np.linalg.norm(grad) < tol:
            converged = True
            break
        jtj = jac.T @ jac
        scale = np.diag(np.maximum(np.diag(jtj), 1e-300))
        accepted = False
        while mu < 1e20:
            try:
                step = np.linalg.solve(jtj + mu * scale, -grad)
            except np.linalg.LinAlgError:
                mu *= 10.0
                continue
            trial = p + step
            if trial[1] > 0:
                r_trial = _residuals(c, rate, *trial)
                cost_trial = float(r_trial @ r_trial)
                if cost_trial <= cost:
                    accepted = True
                    break
            mu *= 10.0
        if not accepted:
            # no descent left at any damping: stationary to working precision
            converged = True
            break
        mu = max(mu * 0.1, 1e-15)
        rel = np.linalg.norm(step) / max(np.linalg.norm(p), 1e-300)
        p, r, cost = trial, r_trial, cost_trial
        if rel < tol:
            converged = True
            break
    return SigmoidFit(float(p[0]), float(p[1]), cost, converged, it)
