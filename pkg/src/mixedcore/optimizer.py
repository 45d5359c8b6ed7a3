"""Optimal edge-size fractions for two-size mixed hypergraphs.

For sizes ``a < b`` we look for the fraction ``alpha`` of size-``a`` edges
that maximises the 2-core threshold ``min_z T(z, a, b, alpha)``. Depending
on the sign of ``min g`` and where ``h(z')`` falls relative to ``1``,
``h(z_2)`` and ``h(z_1)`` the optimum is either the pure ``a``-uniform
hypergraph, the unique saddle point of ``T`` at ``z' = (a/b)^(1/(b-a))``,
or a pair of equally deep minima found by bisection on ``alpha``.
"""
from __future__ import annotations

import enum
import logging
import math
from dataclasses import asdict, dataclass
from typing import Optional

from .numerics import Bracket, bisect_root, minimize_1d
from .threshold import (
    EdgeMix,
    InvalidSizes,
    SpecialPoints,
    aux_f,
    aux_h,
    f_inverse,
    special_points,
    threshold_T,
    threshold_t_general,
    z_prime,
)

log = logging.getLogger(__name__)

DEFAULT_EPS = 1e-11
BOUNDARY_TOL = 1e-9
MAX_HALVINGS = 200
LAMBDA_MAX = 50.0
LAMBDA_CELLS = 1000
POLE_GAP = 1e-12


class CaseLabel(str, enum.Enum):
    DEGENERATE_ALPHA_ONE = "Degenerate_AlphaOne"
    SADDLE_POINT = "SaddlePoint"
    BINARY_SEARCH = "BinarySearch"


@dataclass(frozen=True)
class Optimum:
    a: int
    b: int
    case_label: CaseLabel
    z_star: float
    lambda_star: float
    alpha_star: float
    c_star: float
    avg_edge_size: float
    z_star_second: Optional[float] = None

    @property
    def mix(self) -> EdgeMix:
        if self.a == self.b:
            return EdgeMix.uniform(self.a)
        return EdgeMix.pair(self.a, self.b, self.alpha_star)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["case_label"] = self.case_label.value
        return d


def _make(a: int, b: int, case: CaseLabel, z: float, alpha: float, c: float,
          z_second: Optional[float] = None) -> Optimum:
    return Optimum(
        a=a,
        b=b,
        case_label=case,
        z_star=z,
        lambda_star=-math.log1p(-z),
        alpha_star=alpha,
        c_star=c,
        avg_edge_size=alpha * a + (1.0 - alpha) * b,
        z_star_second=z_second,
    )


def _check_sizes(a: int, b: int) -> None:
    if a < 3 or b < a:
        raise InvalidSizes(f"need 3 <= a <= b, got a={a}, b={b}")


def _uniform_c(z_l: float, k: int) -> float:
    return -math.log1p(-z_l) / (k * z_l ** (k - 1))


def uniform_threshold(k: int) -> Optimum:
    """2-core threshold of the ``k``-uniform hypergraph."""
    if k < 3:
        raise InvalidSizes(f"edge size must be >= 3, got {k}")
    z_l = f_inverse(1.0 / (k - 1))
    return _make(k, k, CaseLabel.DEGENERATE_ALPHA_ONE, z_l, 1.0, _uniform_c(z_l, k))


def _saddle(a: int, b: int) -> Optimum:
    zp = z_prime(a, b)
    alpha = (b - 1) / (b - a) - 1.0 / (aux_f(zp) * (b - a))
    scale = math.exp(((a - 1) * math.log(b) - (b - 1) * math.log(a)) / (b - a))
    return _make(a, b, CaseLabel.SADDLE_POINT, zp, alpha, -math.log1p(-zp) * scale)


def _bisect_alpha(a: int, b: int, sp: SpecialPoints, eps: float) -> Optimum:
    zp = sp.z_prime
    u = zp if zp < sp.z_1 else sp.z_1
    l = zp if zp > sp.z_2 else sp.z_2
    alpha_min = 1.0 / aux_h(u, a, b)
    alpha_max = 1.0 / aux_h(l, a, b)
    left_br = Bracket(sp.z_l + POLE_GAP, u)
    right_br = Bracket(l, sp.z_r - POLE_GAP)

    for _ in range(MAX_HALVINGS):
        alpha = alpha_min + 0.5 * (alpha_max - alpha_min)
        target = 1.0 / alpha
        z_left = bisect_root(lambda z: aux_h(z, a, b) - target, left_br)
        z_right = bisect_root(lambda z: aux_h(z, a, b) - target, right_br)
        t_left = threshold_T(z_left, a, b, alpha)
        t_right = threshold_T(z_right, a, b, alpha)
        diff = t_right - t_left
        if abs(diff) < eps:
            break
        # raising alpha lifts the right local minimum and lowers the left one
        if diff > 0:
            alpha_max = alpha
        else:
            alpha_min = alpha
        if alpha_max - alpha_min <= 0.0:
            break
    else:
        log.warning("alpha bisection for (%d, %d) stopped after %d halvings, |dT|=%.3e",
                    a, b, MAX_HALVINGS, abs(diff))
    return _make(a, b, CaseLabel.BINARY_SEARCH, z_right, alpha,
                 min(t_left, t_right), z_second=z_left)


def _solve(a: int, b: int, sp: SpecialPoints, eps: float) -> Optimum:
    zp = sp.z_prime
    h_zp = aux_h(zp, a, b)
    if h_zp <= 1.0 - BOUNDARY_TOL:
        return _make(a, b, CaseLabel.DEGENERATE_ALPHA_ONE, sp.z_l, 1.0, _uniform_c(sp.z_l, a))
    if not sp.g_has_roots:
        return _saddle(a, b)
    if h_zp <= aux_h(sp.z_2, a, b) + BOUNDARY_TOL or h_zp >= aux_h(sp.z_1, a, b) - BOUNDARY_TOL:
        return _saddle(a, b)
    return _bisect_alpha(a, b, sp, eps)


def optimize_pair(a: int, b: int, eps: float = DEFAULT_EPS) -> Optimum:
    """Fraction of size-``a`` edges maximising the 2-core threshold of an (a, b) mix.

    ``a == b`` is accepted and returns the uniform threshold.
    """
    _check_sizes(a, b)
    if not eps > 0:
        raise ValueError("eps must be positive")
    if a == b:
        return uniform_threshold(a)
    return _solve(a, b, special_points(a, b), eps)


def general_threshold(mix: EdgeMix) -> float:
    """``min_{lambda > 0} t(lambda, mix)`` for any mixture.

    A grid over ``(0, LAMBDA_MAX]`` locates every local minimum (the mixed
    threshold function can have several); each one is refined by
    golden-section search and the smallest value wins.
    """
    if not isinstance(mix, EdgeMix):
        raise InvalidSizes("general_threshold expects an EdgeMix")
    step = LAMBDA_MAX / LAMBDA_CELLS
    grid = [step * i for i in range(1, LAMBDA_CELLS + 1)]
    vals = [threshold_t_general(lam, mix) for lam in grid]
    candidates = [
        i for i in range(LAMBDA_CELLS)
        if (i == 0 or vals[i] <= vals[i - 1]) and (i == LAMBDA_CELLS - 1 or vals[i] <= vals[i + 1])
    ]
    best = math.inf
    for i in candidates:
        lo = grid[i - 1] if i > 0 else step * 1e-6
        hi = grid[i + 1] if i + 1 < LAMBDA_CELLS else grid[i]
        _, v = minimize_1d(lambda lam: threshold_t_general(lam, mix), Bracket(lo, hi))
        best = min(best, v)
    return best


def b_prime(a: int) -> int:
    """Smallest ``b > a`` for which ``min_z g(z, a, b)`` is negative."""
    if not 3 <= a <= 64:
        raise InvalidSizes(f"b_prime supports 3 <= a <= 64, got {a}")
    b = a + 1
    while not special_points(a, b).g_has_roots:
        b += 1
    return b


def table_scan(a: int, b_max: int, eps: float = DEFAULT_EPS) -> list[Optimum]:
    """One optimum per ``b`` in ``[a, b_max]``."""
    _check_sizes(a, b_max)
    return [optimize_pair(a, b, eps) for b in range(a, b_max + 1)]
