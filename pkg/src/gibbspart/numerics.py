"""Scalar plumbing: exact rationals, signed log-domain reals, factorial
products, one-sided stable and Mittag-Leffler densities, and quadrature.

Exact scalars are plain :class:`fractions.Fraction` (or ``int``) values.
Log-domain scalars are :class:`LogScalar` instances.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Callable, Optional

import numpy as np
from scipy import integrate as _integrate

NEG_INF = float("-inf")

# cancellation beyond this many decimal digits marks a LogScalar as lossy
_CANCELLATION_DIGITS = 12


def to_exact(x) -> Fraction:
    """Convert ``x`` to a Fraction.

    Strings may be ``"p/q"`` or decimals; floats go through their shortest
    decimal repr, so ``0.1`` becomes ``1/10`` rather than the binary value.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, Rational):
        return Fraction(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError(f"cannot represent {x!r} exactly")
        return Fraction(repr(x))
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot convert {type(x).__name__} to an exact scalar")


def is_exact(x) -> bool:
    return isinstance(x, Rational)


def format_exact(x) -> str:
    """Serialize an exact scalar as ``"p/q"`` (or ``"p"`` for integers)."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def rising_factorial(x, m: int, beta=1):
    """``(x)_{m, beta} = x (x + beta) ... (x + (m-1) beta)``; 1 when ``m == 0``.

    Exact inputs give an exact result.
    """
    if m < 0:
        raise ValueError("m must be nonnegative")
    out = 1
    for j in range(m):
        out = out * (x + j * beta)
    return out


def falling_factorial(x, k: int):
    """``x (x-1) ... (x-k+1)``; 1 when ``k == 0``."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    out = 1
    for j in range(k):
        out = out * (x - j)
    return out


def log_rising_factorial(x: float, m: int, beta: float = 1.0) -> float:
    """Natural log of ``(x)_{m, beta}`` for ``x > 0``, ``beta >= 0``."""
    if m == 0:
        return 0.0
    if x <= 0 or beta < 0:
        raise ValueError("log_rising_factorial needs x > 0 and beta >= 0")
    if beta == 0:
        return m * math.log(x)
    r = x / beta
    return m * math.log(beta) + math.lgamma(r + m) - math.lgamma(r)


def log1mexp(d: float) -> float:
    """``log(1 - exp(-d))`` for ``d >= 0``, accurate across the range."""
    if d <= 0:
        return NEG_INF if d == 0 else math.nan
    if d < math.log(2):
        return math.log(-math.expm1(-d))
    return math.log1p(-math.exp(-d))


@dataclass(frozen=True)
class LogScalar:
    """Signed real stored as ``sign * exp(log)``.

    ``lossy`` is set when a subtraction cancelled more than 12 decimal
    digits; the stored value is then only as good as the operands' rounding
    allows.
    """

    sign: int
    log: float
    lossy: bool = False

    def __post_init__(self):
        if self.sign not in (-1, 0, 1):
            raise ValueError("sign must be -1, 0 or 1")
        if self.sign == 0:
            object.__setattr__(self, "log", NEG_INF)

    @classmethod
    def zero(cls) -> "LogScalar":
        return cls(0, NEG_INF)

    @classmethod
    def from_log(cls, log: float, sign: int = 1) -> "LogScalar":
        if log == NEG_INF:
            return cls.zero()
        return cls(sign, log)

    @classmethod
    def from_value(cls, x) -> "LogScalar":
        if isinstance(x, LogScalar):
            return x
        if x == 0:
            return cls.zero()
        sign = 1 if x > 0 else -1
        ax = abs(x)
        if isinstance(ax, Fraction) or isinstance(ax, int):
            # exact big numbers overflow float(); take logs of the parts
            ax = Fraction(ax)
            log = _log_int(ax.numerator) - _log_int(ax.denominator)
        else:
            log = math.log(ax)
        return cls(sign, log)

    def __float__(self) -> float:
        if self.sign == 0:
            return 0.0
        return self.sign * math.exp(self.log)

    @property
    def log10(self) -> float:
        return self.log / math.log(10)

    def __neg__(self) -> "LogScalar":
        return LogScalar(-self.sign, self.log, self.lossy)

    def __mul__(self, other) -> "LogScalar":
        other = LogScalar.from_value(other)
        if self.sign == 0 or other.sign == 0:
            return LogScalar.zero()
        return LogScalar(self.sign * other.sign, self.log + other.log,
                         self.lossy or other.lossy)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "LogScalar":
        other = LogScalar.from_value(other)
        if other.sign == 0:
            raise ZeroDivisionError("LogScalar division by zero")
        if self.sign == 0:
            return LogScalar.zero()
        return LogScalar(self.sign * other.sign, self.log - other.log,
                         self.lossy or other.lossy)

    def __add__(self, other) -> "LogScalar":
        other = LogScalar.from_value(other)
        if other.sign == 0:
            return self
        if self.sign == 0:
            return other
        lossy = self.lossy or other.lossy
        hi, lo = (self, other) if self.log >= other.log else (other, self)
        if hi.sign == lo.sign:
            return LogScalar(hi.sign, np.logaddexp(hi.log, lo.log).item(), lossy)
        d = hi.log - lo.log
        if d == 0:
            return LogScalar(0, NEG_INF, lossy)
        mag = hi.log + log1mexp(d)
        if hi.log - mag > _CANCELLATION_DIGITS * math.log(10):
            lossy = True
        return LogScalar(hi.sign, mag, lossy)

    __radd__ = __add__

    def __sub__(self, other) -> "LogScalar":
        return self + (-LogScalar.from_value(other))

    def __rsub__(self, other) -> "LogScalar":
        return LogScalar.from_value(other) - self

    def to_json(self) -> dict:
        return {"sign": self.sign, "log10": None if self.sign == 0 else self.log10}


def _log_int(n: int) -> float:
    # math.log accepts arbitrarily large ints
    return math.log(n)


# ---------------------------------------------------------------------------
# quadrature


@dataclass(frozen=True)
class QuadratureSpec:
    abs_tol: float = 1e-13
    rel_tol: float = 1e-11
    max_subdivisions: int = 400

    def __post_init__(self):
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error: float
    subdivisions: int


class NumericalFailure(RuntimeError):
    """A floating-point computation could not meet its stated accuracy."""


class QuadratureError(NumericalFailure):
    """Adaptive quadrature did not meet its tolerance."""

    def __init__(self, message: str, result: QuadratureResult):
        super().__init__(message)
        self.result = result


def integrate(f: Callable[[float], float], a: float, b: float,
              spec: Optional[QuadratureSpec] = None,
              singular: Optional[str] = None) -> QuadratureResult:
    """Adaptive Gauss-Kronrod quadrature of ``f`` over ``(a, b)``.

    ``singular`` declares an integrable endpoint singularity on a finite
    interval: ``"left"`` substitutes ``x = a + (b-a) u**2`` and ``"right"``
    ``x = b - (b-a) u**2``, which removes ``|x - end|**(-1/2)`` behaviour.
    Raises :class:`QuadratureError` when the error estimate exceeds
    ``max(abs_tol, rel_tol * |I|)``.
    """
    spec = spec or QuadratureSpec()
    g, lo, hi = f, a, b
    if singular is not None:
        if not (math.isfinite(a) and math.isfinite(b)):
            raise ValueError("endpoint substitution needs a finite interval")
        w = b - a
        if singular == "left":
            g = lambda u: 2.0 * w * u * f(a + w * u * u)  # noqa: E731
        elif singular == "right":
            g = lambda u: 2.0 * w * u * f(b - w * u * u)  # noqa: E731
        else:
            raise ValueError(f"unknown singularity hint {singular!r}")
        lo, hi = 0.0, 1.0
    out = _integrate.quad(g, lo, hi, epsabs=spec.abs_tol, epsrel=spec.rel_tol,
                          limit=spec.max_subdivisions, full_output=1)
    value, err, info = out[0], out[1], out[2]
    res = QuadratureResult(float(value), float(err), int(info.get("last", 0)))
    if len(out) > 3 or err > max(spec.abs_tol, spec.rel_tol * abs(value)):
        msg = out[3] if len(out) > 3 else "tolerance not met"
        raise QuadratureError(f"quadrature failed on ({a}, {b}): {msg}", res)
    return res


# ---------------------------------------------------------------------------
# one-sided stable and Mittag-Leffler densities

_SQRT_PI = math.sqrt(math.pi)


def _check_alpha(alpha: float) -> None:
    if not 0 < alpha < 1:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")


def stable_density_series(alpha: float, t: float, tol: float = 1e-17,
                          max_terms: int = 2000) -> float:
    """Convergent power series in ``t**-alpha`` for the stable density.

    Well conditioned only when ``t**alpha`` is not small; used for the
    large-``t`` regime and as an independent oracle.
    """
    _check_alpha(alpha)
    if t <= 0:
        raise ValueError("t must be positive")
    logt = math.log(t)
    total = 0.0
    for k in range(1, max_terms + 1):
        s = math.sin(math.pi * k * alpha)
        logmag = math.lgamma(k * alpha + 1) - math.lgamma(k + 1) - (k * alpha + 1) * logt
        term = math.exp(logmag) * s * (1 if k % 2 else -1)
        total += term
        if k > 2 and math.exp(logmag) < tol * max(abs(total), 1e-300):
            break
    return total / math.pi


def _kanter_A(u: float, alpha: float) -> float:
    su = math.sin(u)
    return ((math.sin(alpha * u) ** alpha * math.sin((1 - alpha) * u) ** (1 - alpha)) / su) \
        ** (1 / (1 - alpha))


def _log_kanter_integral(alpha: float, c: float) -> float:
    """``log int_0^pi A(u) exp(-c A(u)) du``; the factor ``exp(-c A(0+))``
    is pulled out so large ``c`` does not underflow."""
    a0 = (alpha ** alpha * (1 - alpha) ** (1 - alpha)) ** (1 / (1 - alpha))
    if c > 1e13:
        # Laplace's method: A(u) = a0 (1 + alpha u**2 / 2 + O(u**4))
        return math.log(a0) + 0.5 * math.log(math.pi / (2 * a0 * alpha * c)) - a0 * c

    def integrand(u):
        A = _kanter_A(u, alpha) if u > 0 else a0
        x = (A - a0) * c
        return 0.0 if x > 745 else A * math.exp(-x)

    # the mass sits within O(c**-1/2) of u = 0 when c is large
    brk = [min(math.pi / 2, 8.0 / math.sqrt(c))] if c > 1 else None
    with warnings.catch_warnings():
        # roundoff notices at 1e-13 are expected; callers cross-check
        warnings.simplefilter("ignore", _integrate.IntegrationWarning)
        val = _integrate.quad(integrand, 0.0, math.pi, epsabs=0.0, epsrel=1e-13, limit=200,
                              points=brk)[0]
    return math.log(val) - a0 * c


def log_stable_density_kanter(alpha: float, t: float) -> float:
    _check_alpha(alpha)
    if t <= 0:
        raise ValueError("t must be positive")
    logc = -alpha / (1 - alpha) * math.log(t)
    if logc > 700:
        return NEG_INF
    return (math.log(alpha / (1 - alpha) / math.pi) - math.log(t) / (1 - alpha)
            + _log_kanter_integral(alpha, math.exp(logc)))


def stable_density_kanter(alpha: float, t: float) -> float:
    """Stable density through Kanter's integral over ``(0, pi)``."""
    return math.exp(log_stable_density_kanter(alpha, t))


# series is used once t**alpha exceeds this; its terms then shrink fast
_SERIES_SWITCH = 3.0


def stable_density(alpha: float, t: float) -> float:
    """Density of the positive stable law with Laplace transform
    ``exp(-lambda**alpha)``.

    ``alpha == 0.5`` uses the closed Levy form. Otherwise the power series
    covers large ``t`` and Kanter's integral the rest.
    """
    _check_alpha(alpha)
    if t <= 0:
        raise ValueError("t must be positive")
    if alpha == 0.5:
        return t ** -1.5 * math.exp(-0.25 / t) / (2 * _SQRT_PI)
    if t ** alpha >= _SERIES_SWITCH:
        return stable_density_series(alpha, t)
    return stable_density_kanter(alpha, t)


def mittag_leffler_density(alpha: float, x: float) -> float:
    """Mittag-Leffler density ``g_alpha(x)``, ``x >= 0``.

    Moments are ``Gamma(b+1) / Gamma(b*alpha + 1)``. Related to the stable
    density by ``g(x) = x**(-1-1/alpha) f(x**(-1/alpha)) / alpha``; at
    ``x = 0`` the continuous extension ``1 / Gamma(1 - alpha)`` is returned.
    """
    _check_alpha(alpha)
    if x < 0:
        raise ValueError("x must be nonnegative")
    if alpha == 0.5:
        return math.exp(-x * x / 4) / _SQRT_PI
    if x == 0:
        return 1.0 / math.gamma(1 - alpha)
    t = x ** (-1 / alpha)
    if t == math.inf:
        return 1.0 / math.gamma(1 - alpha)
    if t == 0.0:
        return 0.0
    return t ** (1 + alpha) * stable_density(alpha, t) / alpha


def log_stable_density(alpha: float, t: float) -> float:
    """``log f_alpha(t)``, finite even where the density underflows."""
    _check_alpha(alpha)
    if t <= 0:
        raise ValueError("t must be positive")
    if alpha == 0.5:
        return -1.5 * math.log(t) - 0.25 / t - math.log(2 * _SQRT_PI)
    if t ** alpha >= _SERIES_SWITCH:
        return math.log(stable_density_series(alpha, t))
    return log_stable_density_kanter(alpha, t)


def log_mittag_leffler_density(alpha: float, x: float) -> float:
    """``log g_alpha(x)``; ``-inf`` only where ``x`` overflows the stable
    argument."""
    _check_alpha(alpha)
    if x < 0:
        raise ValueError("x must be nonnegative")
    if alpha == 0.5:
        return -x * x / 4 - math.log(_SQRT_PI)
    if x == 0:
        return -math.lgamma(1 - alpha)
    logt = -math.log(x) / alpha
    if logt > 700:
        return -math.lgamma(1 - alpha)
    if logt < -700:
        return NEG_INF
    return (1 + alpha) * logt + log_stable_density(alpha, math.exp(logt)) - math.log(alpha)
