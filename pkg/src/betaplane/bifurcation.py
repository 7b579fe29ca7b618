"""First-order traveling/steady wave approximations from a negative eigenvalue.

When the Rayleigh-Kuo operator of a monotone shear flow has principal
eigenvalue -alpha0^2 < 0 with ground eigenfunction phi0, a branch of
non-parallel waves bifurcates from the flow with x-period near
2 pi / alpha0.  Only the first-order term of that branch is constructed:

    u(x, y) = u(y) + kappa phi0'(y) cos(alpha0 x)
    v(x, y) =        alpha0 kappa phi0(y) sin(alpha0 x)

The steady-vorticity residual of these fields vanishes at order kappa
precisely because phi0 satisfies the eigenvalue relation, so the measured
residual must scale like kappa^2; fitting that slope (and checking that a
non-eigenfunction produces slope 1) is the verification signal, in place of
solving the full nonlinear branch.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import PositiveEigenvalueError, ValidationError
from .grid import Grid1D
from .rayleigh_kuo import ShearProfile, lambda_1_singular, lambda_n_general

__all__ = ["WaveApproximation", "construct", "residual_norm", "divergence_max", "period_estimate"]


@dataclass
class WaveApproximation:
    """Base flow plus the first-order bifurcation term."""

    profile: ShearProfile
    beta: float
    c: float
    alpha0: float
    kappa: float
    phi0: np.ndarray
    grid: Grid1D
    lambda1: float

    @property
    def period(self) -> float:
        return 2.0 * np.pi / self.alpha0


def construct(
    profile: ShearProfile,
    beta: float,
    c: float,
    kappa: float,
    resolution: int = 128,
    phi_override: np.ndarray | None = None,
) -> WaveApproximation:
    """Build the first-order wave at amplitude kappa.

    ``phi_override`` replaces the computed eigenfunction (same grid layout)
    and exists for negative-control experiments; with it the order-kappa
    cancellation is destroyed on purpose.
    """
    if abs(kappa) > 0.1:
        raise ValidationError(f"|kappa| <= 0.1 required, got {kappa}")
    pair = lambda_n_general(profile, beta, c, 1, resolution)
    if pair.value >= 0:
        raise PositiveEigenvalueError(
            f"positive-eigenvalue: lambda_1 = {pair.value} >= 0, no bifurcation point"
        )
    phi0 = pair.vector if phi_override is None else np.asarray(phi_override, dtype=float)
    if phi0.shape != pair.vector.shape:
        raise ValidationError("phi_override must match the eigenvector grid")
    return WaveApproximation(
        profile=profile,
        beta=beta,
        c=c,
        alpha0=float(np.sqrt(-pair.value)),
        kappa=float(kappa),
        phi0=phi0,
        grid=pair.grid,
        lambda1=pair.value,
    )


def _deriv4(v: np.ndarray, h: float) -> np.ndarray:
    """Fourth-order first derivative on a uniform grid (one-sided at edges)."""
    d = np.empty_like(v)
    d[2:-2] = (v[:-4] - 8 * v[1:-3] + 8 * v[3:-1] - v[4:]) / (12 * h)
    d[0] = (-25 * v[0] + 48 * v[1] - 36 * v[2] + 16 * v[3] - 3 * v[4]) / (12 * h)
    d[1] = (-3 * v[0] - 10 * v[1] + 18 * v[2] - 6 * v[3] + v[4]) / (12 * h)
    d[-2] = (3 * v[-1] + 10 * v[-2] - 18 * v[-3] + 6 * v[-4] - v[-5]) / (12 * h)
    d[-1] = (25 * v[-1] - 48 * v[-2] + 36 * v[-3] - 16 * v[-4] + 3 * v[-5]) / (12 * h)
    return d


def _spectral_dx(f: np.ndarray, period: float) -> np.ndarray:
    """d/dx along axis 0 of a periodic field by Fourier differentiation."""
    nx = f.shape[0]
    wav = 2.0 * np.pi / period * np.fft.rfftfreq(nx, d=1.0 / nx)
    return np.fft.irfft(1j * wav[:, None] * np.fft.rfft(f, axis=0), n=nx, axis=0)


def _fields(wave: WaveApproximation, nx: int):
    grid = wave.grid
    h = grid.h
    y = np.concatenate(([-1.0], grid.nodes, [1.0]))
    phi = np.concatenate(([0.0], wave.phi0, [0.0]))
    dphi = _deriv4(phi, h)
    x = wave.period * np.arange(nx) / nx
    cos = np.cos(wave.alpha0 * x)[:, None]
    sin = np.sin(wave.alpha0 * x)[:, None]
    u2d = wave.profile.u(y)[None, :] + wave.kappa * dphi[None, :] * cos
    v2d = wave.alpha0 * wave.kappa * phi[None, :] * sin
    return y, h, u2d, v2d


def residual_norm(wave: WaveApproximation, beta: float, nx: int = 128) -> float:
    """Discrete L2 norm of the steady-vorticity residual over one period.

    R = (u - c) dx(omega) + v (dy(omega) + beta) with omega = dx(v) - dy(u);
    x-derivatives are spectral, y-derivatives fourth-order finite
    differences on the eigenvector grid (so the kappa^2 signal stays above
    the discretization floor).
    """
    _, h, u2d, v2d = _fields(wave, nx)
    omega = _spectral_dx(v2d, wave.period) - np.apply_along_axis(_deriv4, 1, u2d, h)
    resid = (u2d - wave.c) * _spectral_dx(omega, wave.period) + v2d * (
        np.apply_along_axis(_deriv4, 1, omega, h) + beta
    )
    sq = resid**2
    trapz_y = h * (np.sum(sq, axis=1) - 0.5 * (sq[:, 0] + sq[:, -1]))
    return float(np.sqrt(np.sum(trapz_y) * wave.period / nx))


def divergence_max(wave: WaveApproximation, nx: int = 128) -> float:
    """max |dx(u) + dy(v)| of the constructed field with matched-order derivatives."""
    _, h, u2d, v2d = _fields(wave, nx)
    div = _spectral_dx(u2d, wave.period) + np.apply_along_axis(_deriv4, 1, v2d, h)
    return float(np.max(np.abs(div)))


def boundary_velocity_max(wave: WaveApproximation, nx: int = 128) -> float:
    """max over x of |v| on the channel walls (exactly zero by construction)."""
    _, _, _, v2d = _fields(wave, nx)
    return float(max(np.max(np.abs(v2d[:, 0])), np.max(np.abs(v2d[:, -1]))))


def period_estimate(profile: ShearProfile, beta: float, c: float, resolution: int = 256,
                    eps_schedule=None) -> float:
    """Limiting x-period 2 pi / sqrt(-lambda_1) of the bifurcating branch."""
    if c in (profile.range_lo, profile.range_hi):
        if not (abs(profile.range_lo + 1.0) < 1e-12 and abs(profile.range_hi - 1.0) < 1e-12):
            raise ValidationError("endpoint speeds are supported for the unit Couette range only")
        side = "left" if c == profile.range_lo else "right"
        kwargs = {"resolution": resolution}
        if eps_schedule is not None:
            kwargs["eps_schedule"] = eps_schedule
        lam = lambda_1_singular(beta, side, **kwargs).value
    else:
        lam = lambda_n_general(profile, beta, c, 1, resolution).value
    if lam >= 0:
        raise PositiveEigenvalueError(f"positive-eigenvalue: lambda_1 = {lam} >= 0")
    return float(2.0 * np.pi / np.sqrt(-lam))


def residual_slope(residuals_by_kappa) -> float:
    """Least-squares slope of log(residual) against log(kappa)."""
    pts = [(k, r) for k, r in residuals_by_kappa if r > 0]
    if len(pts) < 2:
        raise ValidationError("need at least two positive residuals to fit a slope")
    lk = np.log([k for k, _ in pts])
    lr = np.log([r for _, r in pts])
    slope, _ = np.polyfit(lk, lr, 1)
    return float(slope)
