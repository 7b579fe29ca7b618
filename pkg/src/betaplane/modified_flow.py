"""Modified shear flows with a tunable principal eigenvalue.

The profile is Couette plus two compactly supported corrections,

    U(y) = y + (beta/2) y^2 I_g(y) + a g^2 erf((y - 5g)/g) I_g(y - 5g),

with g = gamma and I_g(y) = I(y/g) a smooth bump-integral cutoff (1 on
[-1, 1], 0 outside [-2, 2]).  The quadratic term makes U'' - beta vanish
identically on [-gamma, gamma], so the Rayleigh-Kuo potential
(U'' - beta)/U is removable across the critical layer at y = 0; the
translated error-function term (supported on [3 gamma, 7 gamma]) drags the
principal eigenvalue down as its amplitude a grows, at the asymptotic rate
3 + (3/2) b0 a with b0 < 0 a universal constant.

The cutoff integral is precomputed once on a dense table and interpolated
monotone-cubically; its derivatives are analytic.  erf is evaluated by a
split Taylor series / continued fraction with 1e-12 relative accuracy, so
the module carries no special-function dependency.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.integrate import quad
from scipy.interpolate import PchipInterpolator

from .errors import NoBracketError, ValidationError
from .eigen import EigenPair
from .rayleigh_kuo import ShearProfile, lambda_n_general

__all__ = [
    "erf",
    "cutoff_I",
    "cutoff_I_prime",
    "cutoff_I_second",
    "CutoffConstants",
    "cutoff_constants",
    "ModifiedFlowParams",
    "profile",
    "b0",
    "lambda_n_modified",
    "level_set_a",
    "default_a_max",
    "suggested_resolution",
]

_TWO_OVER_SQRT_PI = 2.0 / np.sqrt(np.pi)
_ERF_TAYLOR_CUT = 2.5
_ERF_SATURATE = 6.0
_ERF_TAYLOR_TERMS = 48


def _erf_taylor(x):
    x2 = x * x
    term = x.copy()
    acc = x.copy()
    for n in range(1, _ERF_TAYLOR_TERMS):
        term = term * (-x2) / n
        acc = acc + term / (2 * n + 1)
    return _TWO_OVER_SQRT_PI * acc


def _erfc_cf(x: float) -> float:
    # Lentz evaluation of erfc(x) = exp(-x^2)/sqrt(pi) * 1/(x + 1/2/(x + 1/(x + 3/2/(x + ...))))
    tiny = 1e-300
    b = x
    c = 1e308
    d = 1.0 / b
    f = d
    for n in range(1, 200):
        a_n = n / 2.0
        d = 1.0 / (x + a_n * d)
        c = x + a_n / c
        if c == 0.0:
            c = tiny
        delta = c * d
        f *= delta
        if abs(delta - 1.0) < 1e-16:
            break
    return np.exp(-x * x) / np.sqrt(np.pi) * f


def erf(x):
    """Gauss error function, (2/sqrt(pi)) * integral of exp(-s^2) from 0 to x.

    Odd; relative accuracy 1e-12 for |x| <= 6, saturating to +-1 beyond.
    Accepts scalars or arrays.
    """
    arr = np.asarray(x, dtype=float)
    scalar = arr.ndim == 0
    a = np.abs(np.atleast_1d(arr))
    out = np.ones_like(a)
    taylor = a <= _ERF_TAYLOR_CUT
    if np.any(taylor):
        out[taylor] = _erf_taylor(a[taylor])
    mid = (~taylor) & (a <= _ERF_SATURATE)
    for idx in np.nonzero(mid)[0]:
        out[idx] = 1.0 - _erfc_cf(float(a[idx]))
    out = np.where(np.atleast_1d(arr) < 0, -out, out)
    out[np.atleast_1d(arr) == 0.0] = 0.0
    return float(out[0]) if scalar else out.reshape(arr.shape)


def erf_prime(x):
    return _TWO_OVER_SQRT_PI * np.exp(-np.asarray(x, dtype=float) ** 2)


def erf_second(x):
    x = np.asarray(x, dtype=float)
    return -2.0 * x * _TWO_OVER_SQRT_PI * np.exp(-(x**2))


def _bump(x):
    """eta(x) = exp(-1/(x-1)) exp(-1/(2-x)) on (1, 2), zero elsewhere."""
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    inside = (x > 1.0) & (x < 2.0)
    xi = x[inside]
    out[inside] = np.exp(-1.0 / (xi - 1.0) - 1.0 / (2.0 - xi))
    return out


def _bump_prime(x):
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    inside = (x > 1.0) & (x < 2.0)
    xi = x[inside]
    out[inside] = _bump(xi) * (1.0 / (xi - 1.0) ** 2 - 1.0 / (2.0 - xi) ** 2)
    return out


_TABLE_POINTS = 8193
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(16)


@lru_cache(maxsize=1)
def _cutoff_table():
    """PCHIP interpolant of G(u) = integral of eta over [u, 2], and G(1)."""
    us = np.linspace(1.0, 2.0, _TABLE_POINTS)
    half = 0.5 * (us[1] - us[0])
    mids = 0.5 * (us[:-1] + us[1:])
    # 16-point Gauss-Legendre per subinterval, accumulated from the right.
    samples = _bump(mids[:, None] + half * _GL_NODES[None, :])
    pieces = half * samples @ _GL_WEIGHTS
    g = np.concatenate((np.cumsum(pieces[::-1])[::-1], [0.0]))
    return PchipInterpolator(us, g), float(g[0])


def cutoff_I(x):
    """Smooth cutoff: exactly 1 for |x| <= 1, exactly 0 for |x| >= 2."""
    arr = np.asarray(x, dtype=float)
    scalar = arr.ndim == 0
    a = np.abs(np.atleast_1d(arr))
    interp, norm = _cutoff_table()
    out = np.zeros_like(a)
    out[a <= 1.0] = 1.0
    mid = (a > 1.0) & (a < 2.0)
    if np.any(mid):
        out[mid] = interp(a[mid]) / norm
    return float(out[0]) if scalar else out.reshape(arr.shape)


def cutoff_I_prime(x):
    arr = np.asarray(x, dtype=float)
    _, norm = _cutoff_table()
    out = -np.sign(arr) * _bump(np.abs(arr)) / norm
    return float(out) if arr.ndim == 0 else out


def cutoff_I_second(x):
    arr = np.asarray(x, dtype=float)
    _, norm = _cutoff_table()
    out = -_bump_prime(np.abs(arr)) / norm
    return float(out) if arr.ndim == 0 else out


@dataclass(frozen=True)
class CutoffConstants:
    """Sup norms of the cutoff combinations entering the monotonicity guard."""

    M: float
    M0: float
    M1: float
    M2: float
    normalizer: float


@lru_cache(maxsize=1)
def cutoff_constants() -> CutoffConstants:
    xs = np.linspace(0.0, 2.0, 200001)
    i0, i1, i2 = cutoff_I(xs), cutoff_I_prime(xs), cutoff_I_second(xs)
    m = float(np.max(np.abs(2.0 * xs * i0 + xs**2 * i1)))
    m0 = float(np.max(np.abs(erf_prime(xs) * i0 + erf(xs) * i1)))
    _, norm = _cutoff_table()
    return CutoffConstants(
        M=m,
        M0=m0,
        M1=float(np.max(np.abs(i1))),
        M2=float(np.max(np.abs(i2))),
        normalizer=norm,
    )


@dataclass(frozen=True)
class ModifiedFlowParams:
    """Coriolis parameter, cutoff scale, and error-function amplitude.

    gamma must satisfy both the smallness condition
    gamma < min(1/2, 1/(10 |beta|)) and the monotonicity guard
    gamma < 1/((|beta|/2) M + a M0), which keeps U' > 0 on [-1, 1].
    """

    beta: float
    gamma: float
    a: float

    def __post_init__(self):
        if self.beta == 0.0:
            raise ValidationError("invariant-violation: beta != 0 is required")
        if self.a < 0.0:
            raise ValidationError(f"invariant-violation: a >= 0 is required, got a={self.a}")
        lim = min(0.5, 1.0 / (10.0 * abs(self.beta)))
        if not 0.0 < self.gamma < lim:
            raise ValidationError(
                "invariant-violation: gamma < min(1/2, 1/(10|beta|)) = "
                f"{lim} is required, got gamma={self.gamma}"
            )
        consts = cutoff_constants()
        guard = 1.0 / (0.5 * abs(self.beta) * consts.M + self.a * consts.M0)
        if self.gamma >= guard:
            raise ValidationError(
                "invariant-violation: gamma < 1/((|beta|/2) M + a M0) = "
                f"{guard} is required, got gamma={self.gamma}"
            )


def profile(params: ModifiedFlowParams) -> ShearProfile:
    """The modified shear profile with analytic derivatives.

    The quadratic correction is supported on [-2 gamma, 2 gamma], the
    translated error-function term on [3 gamma, 7 gamma]; U'' == beta holds
    identically on [-gamma, gamma], which is recorded as the profile's flat
    zone for the removable critical layer at y = 0.
    """
    beta, g, a = params.beta, params.gamma, params.a

    def u(y):
        y = np.asarray(y, dtype=float)
        x1 = y / g
        x2 = (y - 5.0 * g) / g
        return y + 0.5 * beta * g**2 * x1**2 * cutoff_I(x1) + a * g**2 * erf(x2) * cutoff_I(x2)

    def du(y):
        y = np.asarray(y, dtype=float)
        x1 = y / g
        x2 = (y - 5.0 * g) / g
        quad_term = 2.0 * x1 * cutoff_I(x1) + x1**2 * cutoff_I_prime(x1)
        erf_term = erf_prime(x2) * cutoff_I(x2) + erf(x2) * cutoff_I_prime(x2)
        return 1.0 + 0.5 * beta * g * quad_term + a * g * erf_term

    def d2u(y):
        y = np.asarray(y, dtype=float)
        x1 = y / g
        x2 = (y - 5.0 * g) / g
        quad_term = (
            2.0 * cutoff_I(x1) + 4.0 * x1 * cutoff_I_prime(x1) + x1**2 * cutoff_I_second(x1)
        )
        erf_term = (
            erf_second(x2) * cutoff_I(x2)
            + 2.0 * erf_prime(x2) * cutoff_I_prime(x2)
            + erf(x2) * cutoff_I_second(x2)
        )
        return 0.5 * beta * quad_term + a * erf_term

    lo = float(u(np.array(-1.0)))
    hi = float(u(np.array(1.0)))
    return ShearProfile(
        u=u,
        du=du,
        d2u=d2u,
        range_lo=lo,
        range_hi=hi,
        label=f"modified-flow(beta={beta:g}, gamma={g:g}, a={a:g})",
        flat_zone=(-g, g),
        flat_d2u=beta,
    )


@lru_cache(maxsize=1)
def b0() -> float:
    """The negative constant 2 * int_0^2 ((x+5)^-3 - (5-x)^-3) erf(x) I(x) dx.

    Controls the small-gamma asymptote 3 + (3/2) b0 a of the principal
    eigenvalue; evaluated by adaptive quadrature to 1e-12 absolute.
    """

    def integrand(x):
        return ((x + 5.0) ** -3 - (5.0 - x) ** -3) * erf(x) * cutoff_I(x)

    val, _ = quad(integrand, 0.0, 2.0, epsabs=1e-13, epsrel=1e-13, limit=200)
    return 2.0 * val


def suggested_resolution(gamma: float, floor: int = 256) -> int:
    """Base grid size that resolves the gamma-scale potential features."""
    need = 8.0 / gamma
    res = floor
    while res < need:
        res *= 2
    return res


def lambda_n_modified(params: ModifiedFlowParams, n: int, resolution: int | None = None) -> EigenPair:
    """n-th Rayleigh-Kuo eigenvalue of the modified flow at speed c = 0."""
    if resolution is None:
        resolution = suggested_resolution(params.gamma)
    return lambda_n_general(profile(params), params.beta, 0.0, n, resolution)


def default_a_max(d: float) -> float:
    """Amplitude bound (4 d - 6) / (3 b0) + 1 guaranteeing lambda_1 < d below it."""
    return (4.0 * d - 6.0) / (3.0 * b0()) + 1.0


def level_set_a(
    beta: float,
    gamma: float,
    d: float,
    a_max: float | None = None,
    tol: float = 1e-4,
    resolution: int | None = None,
    scan_steps: int = 64,
):
    """Smallest amplitude a with lambda_1(gamma, a) = d, to |lambda_1 - d| <= tol.

    Requires lambda_1(gamma, 0) > d and lambda_1(gamma, a_max) < d; a scan
    in steps of a_max/scan_steps locates the first sign-change bracket and
    bisection refines it.
    """
    if a_max is None:
        a_max = default_a_max(d)
    if a_max <= 0:
        raise ValidationError(f"a_max must be positive, got {a_max}")
    if resolution is None:
        resolution = suggested_resolution(gamma)

    def lam(a):
        return lambda_n_modified(ModifiedFlowParams(beta, gamma, a), 1, resolution).value

    lam_lo = lam(0.0)
    lam_hi = lam(a_max)
    if not (lam_lo > d and lam_hi < d):
        raise NoBracketError(
            "no-bracket: need lambda_1(gamma,0) > d > lambda_1(gamma,a_max), got "
            f"{lam_lo} and {lam_hi} around d={d} (gamma may not be small enough)"
        )
    step = a_max / scan_steps
    a_lo, f_lo = 0.0, lam_lo - d
    a_hi = None
    for k in range(1, scan_steps + 1):
        a_k = k * step
        f_k = lam(a_k) - d
        if abs(f_k) <= tol:
            return a_k
        if f_k < 0:
            a_hi = a_k
            break
        a_lo, f_lo = a_k, f_k
    if a_hi is None:
        raise NoBracketError("no-bracket: scan found no sign change despite endpoint checks")
    for _ in range(200):
        mid = 0.5 * (a_lo + a_hi)
        f_m = lam(mid) - d
        if abs(f_m) <= tol:
            return mid
        if f_m > 0:
            a_lo = mid
        else:
            a_hi = mid
    raise NoBracketError("no-bracket: bisection failed to reach the level-set tolerance")
