"""Eigenvalues of symmetric tridiagonal matrices by Sturm-sequence bisection.

The negative-inertia count of A - x I is computed from the signs of the
LDL^T pivots, which is the number of eigenvalues strictly below x.  The n-th
eigenvalue is located by multisection of the Gershgorin interval (a batch of
Sturm counts per pass, so the Python-level cost stays at one pass over the
matrix per refinement round).  Eigenvectors come from inverse iteration with
a deterministic start vector, and grid sequences are Richardson-extrapolated
to the continuum limit assuming second-order convergence.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_banded

from .errors import NoConvergenceError, ValidationError
from .grid import Grid1D, TridiagOperator

__all__ = [
    "EigenPair",
    "sturm_count",
    "gershgorin_interval",
    "nth_eigenvalue",
    "eigenvector",
    "extrapolate",
]

_MULTISECTION_POINTS = 64


@dataclass
class EigenPair:
    """One eigenvalue of the discretized problem with its certificate data.

    ``vector`` is normalized to unit discrete L2 norm with a nonnegative
    first extremum; ``residual`` is ||(A - lambda I) v|| / ||A||;
    ``error_estimate`` combines extrapolation residuals when
    ``extrapolated`` is set.
    """

    index: int
    value: float
    vector: np.ndarray
    residual: float
    extrapolated: bool
    error_estimate: float
    grid: Grid1D | None = None


def sturm_count(diag: np.ndarray, off: np.ndarray, x) -> np.ndarray:
    """Number of eigenvalues of tridiag(diag, off) strictly below each shift.

    Vectorized over an array of shifts; the recurrence over matrix rows is
    sequential, so the cost is one pass over the matrix regardless of how
    many shifts are evaluated.
    """
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    off2 = np.asarray(off, dtype=float) ** 2
    pivmin = np.finfo(float).tiny / np.finfo(float).eps
    if off2.size:
        pivmin = max(pivmin, off2.max() * np.finfo(float).eps ** 2)
    q = diag[0] - xs
    count = (q < 0).astype(np.int64)
    for i in range(1, diag.size):
        q = np.where(np.abs(q) < pivmin, -pivmin, q)
        q = diag[i] - xs - off2[i - 1] / q
        count += q < 0
    return count if np.ndim(x) else count[0]


def gershgorin_interval(op: TridiagOperator) -> tuple[float, float]:
    r = np.zeros(op.dim)
    r[:-1] += np.abs(op.off)
    r[1:] += np.abs(op.off)
    lo = float(np.min(op.diag - r))
    hi = float(np.max(op.diag + r))
    pad = max(1.0, abs(lo), abs(hi)) * 1e-12
    return lo - pad, hi + pad


def nth_eigenvalue(op: TridiagOperator, n: int, tol: float = 1e-12) -> float:
    """n-th smallest eigenvalue (1-based) to absolute tolerance ``tol``.

    Multisection keeps the bracket [lo, hi] with count(lo) < n <= count(hi),
    starting from the Gershgorin bounds, so the result lambda satisfies
    count(lambda - tol) < n <= count(lambda + tol).
    """
    if not 1 <= n <= op.dim:
        raise ValidationError(f"index-out-of-range: n={n} for dimension {op.dim}")
    if tol <= 0:
        raise ValidationError(f"tol must be positive, got {tol}")
    lo, hi = gershgorin_interval(op)
    eps = np.finfo(float).eps
    # representable-width floor follows the current bracket, not the
    # Gershgorin scale, so small eigenvalues of large matrices stay sharp
    while hi - lo > max(tol, 4.0 * eps * max(abs(lo), abs(hi), 1e-30)):
        xs = np.linspace(lo, hi, _MULTISECTION_POINTS + 2)[1:-1]
        counts = sturm_count(op.diag, op.off, xs)
        j = int(np.searchsorted(counts, n, side="left"))
        if j >= xs.size:
            lo = xs[-1]
        elif j == 0:
            hi = xs[0]
        else:
            lo, hi = xs[j - 1], xs[j]
    return 0.5 * (lo + hi)


def _apply_sign_convention(v: np.ndarray) -> np.ndarray:
    dv = np.diff(v)
    ext = np.nonzero(dv[:-1] * dv[1:] <= 0)[0]
    pivot = ext[0] + 1 if ext.size else int(np.argmax(np.abs(v)))
    if v[pivot] < 0:
        v = -v
    return v


def eigenvector(
    op: TridiagOperator,
    lam: float,
    orthogonalize_against: tuple[np.ndarray, ...] = (),
    tol: float = 1e-10,
    max_iter: int = 50,
) -> np.ndarray:
    """Inverse iteration for the eigenvector at an approximate eigenvalue.

    Deterministic all-ones start (orthogonalized against any supplied
    lower-index vectors, which disambiguates clustered eigenvalues), one
    Rayleigh-quotient refinement after convergence, unit norm, and the sign
    fixed so the first extremum is nonnegative.
    """
    m = op.dim
    glo, ghi = gershgorin_interval(op)
    if not glo <= lam <= ghi:
        raise ValidationError(f"lambda={lam} outside the Gershgorin range [{glo}, {ghi}]")
    norm_a = max(np.max(np.abs(op.diag)) + 2 * (np.max(np.abs(op.off)) if m > 1 else 0.0), 1e-300)

    ab = np.zeros((3, m))
    ab[0, 1:] = op.off
    ab[2, :-1] = op.off

    def solve_shifted(mu, rhs):
        shift = mu
        for attempt in range(4):
            ab[1] = op.diag - shift
            try:
                with np.errstate(all="ignore"):
                    w = solve_banded((1, 1), ab, rhs)
                if np.all(np.isfinite(w)) and np.any(w):
                    return w
            except np.linalg.LinAlgError:
                pass
            shift = mu + norm_a * 1e-13 * 10.0**attempt
        raise NoConvergenceError("no-convergence: shifted solve failed near lambda")

    def orth(w):
        for u in orthogonalize_against:
            w = w - (u @ w) * u
        return w

    v = orth(np.ones(m) / np.sqrt(m))
    nv = np.linalg.norm(v)
    if nv == 0.0:
        v = np.zeros(m)
        v[0] = 1.0
        v = orth(v)
        nv = np.linalg.norm(v)
    v /= nv

    mu = lam
    for it in range(max_iter):
        v = orth(solve_shifted(mu, v))
        v /= np.linalg.norm(v)
        resid = np.linalg.norm(op.matvec(v) - (v @ op.matvec(v)) * v) / norm_a
        if resid <= tol:
            # one Rayleigh-quotient refinement step
            mu = float(v @ op.matvec(v))
            w = orth(solve_shifted(mu, v))
            w /= np.linalg.norm(w)
            if np.linalg.norm(op.matvec(w) - (w @ op.matvec(w)) * w) / norm_a <= resid:
                v = w
            return _apply_sign_convention(v)
    raise NoConvergenceError(
        f"no-convergence: inverse iteration stalled after {max_iter} iterations "
        f"(lambda={lam} likely not near the spectrum)"
    )


def eigen_residual(op: TridiagOperator, lam: float, v: np.ndarray) -> float:
    norm_a = max(np.max(np.abs(op.diag)) + 2 * (np.max(np.abs(op.off)) if op.dim > 1 else 0.0), 1e-300)
    return float(np.linalg.norm(op.matvec(v) - lam * v) / norm_a)


def extrapolate(values) -> tuple[float, float]:
    """Richardson-extrapolate a grid sequence (h_i, lambda(h_i)) to h -> 0.

    Assumes lambda(h) = lambda + c h^2 + O(h^4) on a (near-)halving sequence
    of spacings.  Implemented as polynomial extrapolation in h^2 with the
    exact spacings, so doubling the node count (h ratio slightly under 2) is
    handled without bias.  Returns (extrapolated value, |last correction|).
    """
    values = list(values)
    if len(values) < 3:
        raise ValidationError(f"insufficient-sequence: need >= 3 entries, got {len(values)}")
    hs = np.array([float(h) for h, _ in values])
    if not np.all(hs[:-1] > hs[1:]):
        raise ValidationError("insufficient-sequence: spacings must decrease")
    ratios = hs[:-1] / hs[1:]
    if np.any(np.abs(ratios - 2.0) > 0.25):
        raise ValidationError("insufficient-sequence: spacings must (nearly) halve between entries")
    xs = hs**2
    p = np.array([float(lam) for _, lam in values])
    m = p.size
    tail = [p[-1]]
    for level in range(1, m):
        for i in range(m - level):
            p[i] = (xs[i + level] * p[i] - xs[i] * p[i + 1]) / (xs[i + level] - xs[i])
        tail.append(p[m - level - 1])
    return float(tail[-1]), abs(float(tail[-1] - tail[-2]))
