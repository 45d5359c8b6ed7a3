"""Threshold functions for the 2-core of mixed random hypergraphs.

``threshold_t_general`` is the Poisson-parametrised threshold function of a
mixture; ``threshold_T`` is the two-size version after substituting
``z = 1 - exp(-lambda)``. The auxiliary functions ``aux_f``, ``aux_g`` and
``aux_h`` characterise the critical points of ``threshold_T`` in ``z``:
for fixed ``alpha`` a point ``z`` is critical iff ``alpha = 1 / aux_h(z)``,
and ``aux_h`` increases exactly where ``aux_g`` is positive.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .numerics import Bracket, bisect_root

# g_min below this counts as negative; exact zero is treated like g_min > 0
G_NEG_TOL = 1e-12
F_INV_TOL = 1e-17
ZG_BRACKET = (1e-9, 1.0 - 1e-9)


class DomainError(ValueError):
    pass


class PoleError(ArithmeticError):
    pass


class InvalidSizes(ValueError):
    pass


@dataclass(frozen=True)
class EdgeMix:
    """Edge sizes and the fraction of edges drawn with each size."""

    sizes: tuple[int, ...]
    fractions: tuple[float, ...]

    def __post_init__(self):
        sizes = tuple(int(k) for k in self.sizes)
        fractions = tuple(float(a) for a in self.fractions)
        object.__setattr__(self, "sizes", sizes)
        object.__setattr__(self, "fractions", fractions)
        if not sizes or len(sizes) != len(fractions):
            raise InvalidSizes("sizes and fractions must be non-empty and of equal length")
        if any(k < 3 for k in sizes):
            raise InvalidSizes(f"edge sizes must be >= 3, got {sizes}")
        if any(b <= a for a, b in zip(sizes, sizes[1:])):
            raise InvalidSizes(f"edge sizes must be strictly increasing, got {sizes}")
        if any(not (a >= 0) for a in fractions) or not fractions[0] > 0:
            raise InvalidSizes(f"fractions must be >= 0 with a positive first entry, got {fractions}")
        if abs(math.fsum(fractions) - 1.0) > 1e-12:
            raise InvalidSizes(f"fractions must sum to 1, got {math.fsum(fractions)!r}")

    @classmethod
    def uniform(cls, k: int) -> "EdgeMix":
        return cls((k,), (1.0,))

    @classmethod
    def pair(cls, a: int, b: int, alpha: float) -> "EdgeMix":
        """Two sizes ``a < b`` with fraction ``alpha`` of size ``a``.

        ``alpha == 1`` collapses to the uniform mix.
        """
        if alpha == 1.0:
            return cls.uniform(a)
        return cls((a, b), (alpha, 1.0 - alpha))

    @property
    def avg_size(self) -> float:
        return math.fsum(a * k for k, a in zip(self.sizes, self.fractions))

    @property
    def max_size(self) -> int:
        return self.sizes[-1]


@dataclass(frozen=True)
class SpecialPoints:
    z_prime: float
    z_l: float
    z_r: float
    z_g: float
    g_min: float
    z_1: Optional[float] = None
    z_2: Optional[float] = None

    @property
    def g_has_roots(self) -> bool:
        return self.z_1 is not None


def _check_z(z: float) -> None:
    if not 0.0 < z < 1.0:
        raise DomainError(f"z must lie in (0, 1), got {z!r}")


def _check_pair(a: int, b: int) -> None:
    if a < 3 or b <= a:
        raise DomainError(f"need 3 <= a < b, got a={a}, b={b}")


def aux_f(z: float) -> float:
    """``-ln(1 - z) (1 - z) / z``; strictly decreasing from 1 to 0 on (0, 1)."""
    _check_z(z)
    if z < 1e-8:
        return 1.0 - 0.5 * z
    return -math.log1p(-z) * (1.0 - z) / z


def aux_g(z: float, a: int, b: int) -> float:
    _check_z(z)
    _check_pair(a, b)
    return aux_f(z) * (b - 1) * (a - 1) + 1.0 / (1.0 - z) + 2 - b - a


def _log_remainder(z: float) -> float:
    # (ln(1 - z) + z) / z**2, series below 1e-4 to dodge cancellation
    if z < 1e-4:
        return -(0.5 + z / 3.0 + z * z / 4.0 + z ** 3 / 5.0)
    return (math.log1p(-z) + z) / (z * z)


def aux_g_deriv(z: float, a: int, b: int) -> float:
    """Derivative of ``aux_g`` in ``z``."""
    _check_z(z)
    _check_pair(a, b)
    return (b - 1) * (a - 1) * _log_remainder(z) + 1.0 / (1.0 - z) ** 2


def aux_h(z: float, a: int, b: int) -> float:
    """Reciprocal of the ``alpha`` for which ``z`` is a critical point of T."""
    _check_z(z)
    _check_pair(a, b)
    fz = aux_f(z)
    p = z ** (a - b)
    den = b * ((b - 1) * fz - 1.0)
    if abs(den) < 1e-300:
        raise PoleError(f"aux_h has a pole at z={z!r}")
    return (a * p - b - fz * (a * (a - 1) * p - b * (b - 1))) / den


def threshold_T(z: float, a: int, b: int, alpha: float) -> float:
    _check_z(z)
    if not 0.0 <= alpha <= 1.0:
        raise DomainError(f"alpha must lie in [0, 1], got {alpha!r}")
    if a < 3 or b < a:
        raise DomainError(f"need 3 <= a <= b, got a={a}, b={b}")
    return -math.log1p(-z) / (alpha * a * z ** (a - 1) + (1.0 - alpha) * b * z ** (b - 1))


def threshold_t_general(lam: float, mix: EdgeMix) -> float:
    if not lam > 0 or not math.isfinite(lam):
        raise DomainError(f"lambda must be positive and finite, got {lam!r}")
    z = -math.expm1(-lam)
    den = math.fsum(a * k * z ** (k - 1) for k, a in zip(mix.sizes, mix.fractions))
    if den <= 0.0:
        raise DomainError(f"threshold function undefined at lambda={lam!r}")
    return lam / den


def f_inverse(value: float, lo: float = 0.0, hi: float = 1.0) -> float:
    """Solve ``aux_f(z) == value`` for ``value`` in (0, 1)."""
    if not 0.0 < value < 1.0:
        raise DomainError(f"aux_f takes values in (0, 1), got {value!r}")
    # h is steep at z_l for large b, so resolve to the last float
    return bisect_root(lambda z: aux_f(z) - value, Bracket.unit(lo, hi, F_INV_TOL))


def z_prime(a: int, b: int) -> float:
    return (a / b) ** (1.0 / (b - a))


def special_points(a: int, b: int) -> SpecialPoints:
    _check_pair(a, b)
    zp = z_prime(a, b)
    z_l = f_inverse(1.0 / (a - 1))
    z_r = f_inverse(1.0 / (b - 1), lo=z_l)
    z_g = bisect_root(lambda z: aux_g_deriv(z, a, b), Bracket(*ZG_BRACKET))
    g_min = aux_g(z_g, a, b)
    if g_min < -G_NEG_TOL:
        z_1 = bisect_root(lambda z: aux_g(z, a, b), Bracket(z_l, z_g))
        z_2 = bisect_root(lambda z: aux_g(z, a, b), Bracket(z_g, z_r))
        return SpecialPoints(zp, z_l, z_r, z_g, g_min, z_1, z_2)
    return SpecialPoints(zp, z_l, z_r, z_g, g_min)
