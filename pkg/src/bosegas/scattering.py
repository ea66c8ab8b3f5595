"""Zero-energy two-body scattering in momentum space.

A repulsive radial pair potential V enters through its Fourier transform

    V_p = 4 pi int_0^inf r^2 V(r) sinc(p r) dr ,      sinc(x) = sin(x)/x .

The zero-energy scattering solution 1 - w of  -Delta u + V u = 0  turns into
a fixed-point problem for w in momentum space,

    p^2 w_p = V_p - (2 pi)^-3 int V_{p-r} w_r d^3 r ,

which Born iteration solves from w = 0 for weak enough potentials.  Radial
symmetry collapses the 3-d convolution to a 1-d kernel,

    (2 pi)^-3 int V_{|p-r|} w_r d^3 r
        = (1 / 4 pi^2 p) int_0^inf dr r w_r [ int_{|p-r|}^{p+r} dq q V_q ] ,

so one cumulative integral Q(x) = int_0^x q V_q dq drives the whole solve.

The converged solution carries the scattering length a = (V_0 - ||Vw||_1)/4pi,
the coupling g0 = 4 pi a, and the norms ||Vw||_1, ||Vw^2||_1, ||grad w||_2^2
consumed by the energy ledger.  Two exact identities tie them together:

    ||grad w||_2^2 - ||Vw||_1 + ||Vw^2||_1 = 0
    V_0 - ||Vw||_1 = g0

and `check_scattering_identities` reports how well the numerics honor them,
using the independent small-p limit of g_p = p^2 w_p on the second one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.integrate import cumulative_trapezoid, solve_ivp
from scipy.interpolate import CubicSpline, PchipInterpolator
from scipy.special import roots_legendre, sici

from .errors import GridTooCoarse, InvalidPotential, NotConverged, QuadratureError

__all__ = [
    "Potential",
    "ScatteringSolution",
    "IdentityReport",
    "fourier_at",
    "solve_scattering",
    "check_scattering_identities",
    "shooting_scattering_length",
]

_DEFAULT_GRID_POINTS = 2048
_DEFAULT_TOL = 1e-11


@dataclass(frozen=True)
class Potential:
    """Repulsive radial pair potential, Gaussian or tabulated.

    kind         "gaussian" or "tabulated"
    amplitude    Gaussian height V(0) (energy units)
    width        Gaussian width sigma
    r_samples    radii of tabulated samples (ascending, from 0)
    v_samples    nonnegative values at r_samples
    range_cutoff radius beyond which V is treated as exactly zero
    """

    kind: str
    amplitude: float = 0.0
    width: float = 1.0
    r_samples: tuple[float, ...] | None = None
    v_samples: tuple[float, ...] | None = None
    range_cutoff: float = 0.0

    def __post_init__(self):
        if self.kind == "gaussian":
            if self.amplitude < 0:
                raise InvalidPotential("gaussian amplitude must be nonnegative")
            if self.width <= 0:
                raise InvalidPotential("gaussian width must be positive")
            if self.range_cutoff <= 0:
                object.__setattr__(self, "range_cutoff", 10.0 * self.width)
        elif self.kind == "tabulated":
            if self.r_samples is None or self.v_samples is None:
                raise InvalidPotential("tabulated potential needs r and V samples")
            r = np.asarray(self.r_samples, dtype=float)
            v = np.asarray(self.v_samples, dtype=float)
            if r.ndim != 1 or r.size < 4 or v.shape != r.shape:
                raise InvalidPotential("need >= 4 matching (r, V) samples")
            if r[0] < 0 or np.any(np.diff(r) <= 0):
                raise InvalidPotential("radii must be ascending and nonnegative")
            if np.any(v < 0):
                raise InvalidPotential("potential must be nonnegative (repulsive)")
            if self.range_cutoff <= 0:
                object.__setattr__(self, "range_cutoff", float(r[-1]))
        else:
            raise InvalidPotential(f"unknown potential kind {self.kind!r}")

    @classmethod
    def gaussian(cls, amplitude: float, width: float, range_cutoff: float = 0.0) -> "Potential":
        return cls(kind="gaussian", amplitude=amplitude, width=width, range_cutoff=range_cutoff)

    @classmethod
    def tabulated(cls, r, v, range_cutoff: float = 0.0) -> "Potential":
        return cls(
            kind="tabulated",
            r_samples=tuple(float(x) for x in r),
            v_samples=tuple(float(x) for x in v),
            range_cutoff=range_cutoff,
        )

    def length_scale(self) -> float:
        if self.kind == "gaussian":
            return self.width
        return self.range_cutoff / 4.0

    @cached_property
    def _interp(self):
        # shape-preserving: keeps V >= 0 between nonnegative samples
        return PchipInterpolator(np.asarray(self.r_samples), np.asarray(self.v_samples), extrapolate=False)

    def v_at(self, r) -> np.ndarray:
        """Pointwise V(r), zero beyond range_cutoff."""
        r = np.asarray(r, dtype=float)
        if self.kind == "gaussian":
            out = self.amplitude * np.exp(-0.5 * (r / self.width) ** 2)
            return np.where(r <= self.range_cutoff, out, 0.0)
        out = self._interp(np.clip(r, self.r_samples[0], self.r_samples[-1]))
        out = np.nan_to_num(out, nan=0.0)
        return np.where(r <= self.range_cutoff, out, 0.0)

    @cached_property
    def _fourier_nodes(self):
        # Gauss-Legendre on [0, cutoff]; pair (n, 2n) backs the convergence check
        out = []
        for n in (400, 800):
            x, wt = roots_legendre(n)
            r = 0.5 * self.range_cutoff * (x + 1.0)
            w = 0.5 * self.range_cutoff * wt
            out.append((r, w * r * r * self.v_at(r)))
        return out

    def fourier(self, p) -> np.ndarray:
        return fourier_at(self, p)

    def cumulative_kernel(self, x) -> np.ndarray:
        """Q(x) = int_0^x q V_q dq, the pair kernel primitive."""
        x = np.asarray(x, dtype=float)
        if self.kind == "gaussian":
            amp = self.amplitude * (2.0 * math.pi * self.width**2) ** 1.5
            s2 = self.width**2
            return amp * (-np.expm1(-0.5 * x * x * s2)) / s2
        return self._qcum_spline(np.clip(x, 0.0, self._qcum_xmax))

    @cached_property
    def _qcum_spline(self):
        # tabulated route: spline the cumulative of q V_q on a dense uniform grid
        qmax = 40.0 / self.length_scale()
        q = np.linspace(0.0, qmax, 8001)
        vq = fourier_at(self, q)
        cum = cumulative_trapezoid(q * vq, q, initial=0.0)
        object.__setattr__(self, "_qcum_xmax", qmax)
        return CubicSpline(q, cum)


def fourier_at(potential: Potential, p) -> np.ndarray:
    """Radial Fourier transform V_p = 4 pi int r^2 V(r) sinc(p r) dr.

    Gaussian potentials use the closed form
    V_p = amplitude (2 pi sigma^2)^{3/2} exp(-p^2 sigma^2 / 2); tabulated ones
    fall back to Gauss-Legendre quadrature with an internal refinement check.
    """
    p = np.asarray(p, dtype=float)
    scalar = p.ndim == 0
    p = np.atleast_1d(p)
    if np.any(p < 0):
        raise ValueError("momentum magnitude must be nonnegative")
    if potential.kind == "gaussian":
        amp = potential.amplitude * (2.0 * math.pi * potential.width**2) ** 1.5
        out = amp * np.exp(-0.5 * (p * potential.width) ** 2)
    else:
        (r1, f1), (r2, f2) = potential._fourier_nodes
        arg1 = np.sinc(np.outer(p, r1) / math.pi)
        arg2 = np.sinc(np.outer(p, r2) / math.pi)
        coarse = 4.0 * math.pi * arg1 @ f1
        out = 4.0 * math.pi * arg2 @ f2
        scale = max(abs(out[0]), 1e-300)
        if np.max(np.abs(out - coarse)) > 1e-8 * scale:
            raise QuadratureError("tabulated potential too rough for its Fourier quadrature")
    return float(out[0]) if scalar else out


@dataclass(frozen=True)
class ScatteringSolution:
    """Converged (or deliberately truncated) Born-series solution.

    w_grid holds w_p on p_grid; g_grid = V_p - conv_p is the smooth product
    g = V (1 - w) in momentum space, with g_grid = p^2 w_grid at the fixed
    point.  `a` comes from the position-space integral (V_0 - ||Vw||_1)/4pi,
    while g0_limit extrapolates g_p to p = 0 as an independent cross-check.
    """

    potential: Potential
    p_grid: np.ndarray
    w_grid: np.ndarray
    g_grid: np.ndarray
    a: float
    g0: float
    g0_limit: float
    v0: float
    vw1: float
    vw2: float
    grad_w2: float
    converged: bool
    iterations: int
    tol: float
    residual: float

    @cached_property
    def _g_spline(self):
        return CubicSpline(np.log(self.p_grid), self.g_grid)

    def g(self, p) -> np.ndarray:
        """g_p = p^2 w_p, extended by its p -> 0 limit and fast decay."""
        p = np.asarray(p, dtype=float)
        scalar = p.ndim == 0
        p = np.atleast_1d(p).astype(float)
        out = np.empty_like(p)
        lo = p < self.p_grid[0]
        hi = p > self.p_grid[-1]
        mid = ~(lo | hi)
        out[lo] = self.g0_limit
        out[hi] = 0.0
        if np.any(mid):
            out[mid] = self._g_spline(np.log(p[mid]))
        return float(out[0]) if scalar else out

    def w(self, p) -> np.ndarray:
        """w_p = g_p / p^2 (diverges like g0/p^2 toward the origin)."""
        p = np.asarray(p, dtype=float)
        scalar = p.ndim == 0
        p = np.atleast_1d(p).astype(float)
        if np.any(p <= 0):
            raise ValueError("w_p is only defined for p > 0")
        out = self.g(p) / p**2
        return float(out[0]) if scalar else np.asarray(out)

    def norms(self) -> dict[str, float]:
        return {"V0": self.v0, "VW1": self.vw1, "VW2": self.vw2, "GradW2": self.grad_w2}

    def report(self) -> dict:
        rep = check_scattering_identities(self)
        return {
            "a": self.a,
            "g0": self.g0,
            "g0_limit": self.g0_limit,
            "norms": self.norms(),
            "converged": self.converged,
            "iterations": self.iterations,
            "residual": self.residual,
            "identity_residuals": {
                "gradient": rep.residual_gradient,
                "length": rep.residual_length,
            },
        }


@dataclass(frozen=True)
class IdentityReport:
    """Residuals of the two exact scattering identities."""

    residual_gradient: float  # | ||grad w||^2 - ||Vw||_1 + ||Vw^2||_1 |
    residual_length: float    # | V0 - ||Vw||_1 - g0_limit |
    tol: float = 1e-6

    @property
    def ok(self) -> bool:
        return self.residual_gradient <= self.tol and self.residual_length <= self.tol


def _log_simpson_weights(n: int, t_step: float) -> np.ndarray:
    # composite Simpson in t = log p; caller multiplies by p for dp = p dt
    w = np.full(n, 2.0)
    w[1::2] = 4.0
    w[0] = w[-1] = 1.0
    return w * (t_step / 3.0)


def _small_p_limit(p: np.ndarray, f: np.ndarray, k: int) -> float:
    # Richardson in p^2 against a moderately separated node (f analytic in p^2)
    return float(f[0] - (f[k] - f[0]) * p[0] ** 2 / (p[k] ** 2 - p[0] ** 2))


def _solve_on_grid(potential, n_grid, p_min, p_max, tol, max_iter):
    n_grid |= 1  # Simpson needs an odd point count
    p = np.geomspace(p_min, p_max, n_grid)
    vp = fourier_at(potential, p)
    # kernel K[i, j] = Q(p_i + r_j) - Q(|p_i - r_j|) over the same radial grid
    kern = potential.cumulative_kernel(np.add.outer(p, p)) - potential.cumulative_kernel(
        np.abs(np.subtract.outer(p, p))
    )
    # bundled weights: Simpson dp-measure (wt * p) times the integrand factor r
    quad_w = _log_simpson_weights(n_grid, math.log(p[1] / p[0])) * p * p
    pref = 1.0 / (4.0 * math.pi**2 * p)
    # r < p_min completion of the convolution, using w_r ~ w2lim / r^2 there:
    # int_0^{p_min} (1/r) [Q(p+r) - Q(p-r)] dr ~ 2 p_min Q'(p) = 2 p_min p V_p
    tail = p_min * vp / (2.0 * math.pi**2)

    w = np.zeros_like(p)
    delta = 0.0
    converged = False
    iterations = 0
    for iterations in range(1, max_iter + 1):
        w2lim = p[0] ** 2 * w[0]
        conv = pref * (kern @ (quad_w * w)) + w2lim * tail
        w_new = (vp - conv) / p**2
        delta = float(np.max(p**2 * np.abs(w_new - w)))  # energy-scale stopping
        w = w_new
        if delta < tol:
            converged = True
            break
    w2lim = p[0] ** 2 * w[0]
    conv = pref * (kern @ (quad_w * w)) + w2lim * tail
    g = vp - conv
    residual = float(np.max(np.abs(p**2 * w - g)))
    return p, vp, w, g, quad_w, delta, converged, iterations, residual


def _observables(potential, p, w, g, quad_w):
    k = max(1, int(np.searchsorted(p, 2.0 * p[0])))
    # p -> 0 limit of g by Richardson in p^2 (g is analytic in p^2)
    g0_limit = _small_p_limit(p, g, k)
    # same limit for p^2 w_p; identical at a fixed point, 0 for truncated solves
    w2_limit = _small_p_limit(p, p**2 * w, k)

    # ||grad w||_2^2 = (1/2 pi^2) int p^4 w_p^2 dp, small-p tail added analytically
    grad_w2 = float(np.sum(quad_w * p**3 * w**2) / (2.0 * math.pi**2))
    grad_w2 += w2_limit**2 * p[0] / (2.0 * math.pi**2)

    # position-space w on Gauss-Legendre nodes covering the potential support
    x_gl, wt_gl = roots_legendre(256)
    r = 0.5 * potential.range_cutoff * (x_gl + 1.0)
    r_w = 0.5 * potential.range_cutoff * wt_gl
    osc = np.sin(np.outer(r, p))
    w_r = (osc @ (quad_w * w)) / (2.0 * math.pi**2 * r)
    # analytic completion of int_0^{p_min}: w_p ~ w2_limit / p^2 there
    si, _ = sici(p[0] * r)
    w_r += w2_limit * si / (2.0 * math.pi**2 * r)

    v_r = potential.v_at(r)
    vw1 = float(4.0 * math.pi * np.sum(r_w * r**2 * v_r * w_r))
    vw2 = float(4.0 * math.pi * np.sum(r_w * r**2 * v_r * w_r**2))
    v0 = float(fourier_at(potential, 0.0))
    return g0_limit, grad_w2, vw1, vw2, v0


def solve_scattering(
    potential: Potential,
    *,
    n_grid: int = _DEFAULT_GRID_POINTS,
    p_min: float | None = None,
    p_max: float | None = None,
    tol: float = _DEFAULT_TOL,
    max_iter: int = 400,
    strict: bool = True,
    grid_check: bool = False,
    grid_check_tol: float = 1e-6,
) -> ScatteringSolution:
    """Born-iterate the momentum-space scattering equation from w = 0.

    Raises NotConverged when `strict` and the sup-norm update of g = p^2 w is
    still above `tol` after max_iter sweeps.  With grid_check=True the solve
    repeats on a doubled grid and raises GridTooCoarse if the scattering
    length moves by more than grid_check_tol (relative).
    """
    scale = potential.length_scale()
    p_min = p_min if p_min is not None else 1e-3 / scale
    p_max = p_max if p_max is not None else 1e3 / scale
    if not (0 < p_min < p_max):
        raise ValueError("need 0 < p_min < p_max")

    p, vp, w, g, quad_w, delta, converged, iterations, residual = _solve_on_grid(
        potential, n_grid, p_min, p_max, tol, max_iter
    )
    if strict and not converged and max_iter > 0:
        raise NotConverged(
            f"Born iteration: update {delta:.3e} > tol {tol:.3e} after {iterations} sweeps",
            last_delta=delta,
        )

    g0_limit, grad_w2, vw1, vw2, v0 = _observables(potential, p, w, g, quad_w)
    a = (v0 - vw1) / (4.0 * math.pi)

    if grid_check:
        p2, vp2, w2, g2, qw2, *_ = _solve_on_grid(potential, 2 * n_grid, p_min, p_max, tol, max_iter)
        _, _, vw1_f, _, _ = _observables(potential, p2, w2, g2, qw2)
        a_fine = (v0 - vw1_f) / (4.0 * math.pi)
        if abs(a_fine - a) > grid_check_tol * max(abs(a_fine), 1e-12):
            raise GridTooCoarse(
                f"a moved {abs(a_fine - a):.3e} under grid doubling (n_grid={n_grid})"
            )

    return ScatteringSolution(
        potential=potential,
        p_grid=p,
        w_grid=w,
        g_grid=g,
        a=a,
        g0=4.0 * math.pi * a,
        g0_limit=g0_limit,
        v0=v0,
        vw1=vw1,
        vw2=vw2,
        grad_w2=grad_w2,
        converged=converged,
        iterations=iterations,
        tol=tol,
        residual=residual,
    )


def check_scattering_identities(solution: ScatteringSolution, tol: float = 1e-6) -> IdentityReport:
    """Residuals of the gradient and scattering-length identities.

    The length identity V0 - ||Vw||_1 = g0 is scored against the momentum-side
    extrapolation g0_limit, so it cross-checks the position-space quadratures
    against the small-p limit of the solved fixed point.
    """
    res_grad = abs(solution.grad_w2 - solution.vw1 + solution.vw2)
    res_len = abs(solution.v0 - solution.vw1 - solution.g0_limit)
    return IdentityReport(residual_gradient=res_grad, residual_length=res_len, tol=tol)


def shooting_scattering_length(potential: Potential, *, r_max: float | None = None, rtol: float = 1e-12) -> float:
    """Scattering length from the radial ODE -u'' + V u = 0, u(0) = 0.

    Beyond the potential range u(r) = c (r - a), so a = r - u/u' there.  This
    is a position-space route entirely independent of the momentum solver.
    """
    r_max = r_max if r_max is not None else 1.25 * potential.range_cutoff

    def rhs(r, y):
        return [y[1], potential.v_at(r) * y[0]]

    sol = solve_ivp(rhs, (1e-9, r_max), [1e-9, 1.0], rtol=rtol, atol=1e-14, method="RK45")
    if not sol.success:
        raise NotConverged("radial shooting integration failed")
    u, du = sol.y[0, -1], sol.y[1, -1]
    return float(r_max - u / du)
