"""Periodic-to-Dirichlet window: cosine ramp, isometry check, kinetic penalty.

The window q rises from 0 at -ell to 1 at +ell through a quarter cosine,
holds 1 across [ell, L-ell], and falls back to 0 at L+ell:

    q(x) = cos((x - ell) pi / (4 ell))        |x| <= ell
           1                                  ell < x < L - ell
           cos((x - (L - ell)) pi / (4 ell))  |x - L| <= ell
           0                                  otherwise

The two ramps sit a quarter period apart, so q(x)^2 + q(x+L)^2 = 1 on the
overlap [-ell, ell].  Folding the extended interval [-ell, L+ell] onto one
period therefore preserves the L2 mass of any L-periodic function: the map
phi -> q phi takes periodic boundary conditions on [0, L] to Dirichlet
conditions on [-ell, L+ell] isometrically.  In 3-D the window is the
coordinate product h(x) = q(x1) q(x2) q(x3) and everything factorizes.

The price is kinetic.  For smooth periodic phi,

    int |(q phi)'|^2 <= int_0^L |phi'|^2 + C ell^-2 int chi |phi|^2

with chi the indicator of the ell-collar of the period box (torus distance
to the seam at most ell, total measure 2 ell).  Two consequences of the
same folding identity pin the constant: the cross term integrates to zero
(integrate (q^2)' d|phi|^2/dx by parts; q vanishes at both ends and the
folded second derivative integrates to zero over a period), and
q'(x)^2 + q'(x+L)^2 is the constant (pi/4ell)^2 on the fold.  So equality
holds with C = pi^2/16 exactly, for every smooth periodic phi.  The bound
is stated here with C unspecified; kinetic_penalty reports the measured
ratio rather than asserting the sharp value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Window",
    "window_q",
    "window_q_prime",
    "window_h",
    "collar_indicator",
    "IsometryReport",
    "check_isometry",
    "isometry_3d_separable",
    "PenaltyReport",
    "kinetic_penalty",
    "shifted_collar_average",
    "trig_polynomial",
]


@dataclass(frozen=True)
class Window:
    """Cosine window of margin ell on a box of side period."""

    ell: float
    period: float

    def __post_init__(self):
        if not (self.ell > 0):
            raise ValueError("need ell > 0")
        if not (self.ell <= self.period / 2.0):
            raise ValueError("need ell <= period/2 (plateau must not be negative)")

    @classmethod
    def from_density(cls, rho: float) -> "Window":
        """Physical margin and period, ell = rho^(-25/48), L = rho^(-25/24)."""
        if not 0.0 < rho < 1.0:
            raise ValueError("need 0 < rho < 1")
        return cls(ell=rho ** (-25.0 / 48.0), period=rho ** (-25.0 / 24.0))

    @property
    def slope_bound(self) -> float:
        """Uniform bound on |q'|: the ramp slope pi/(4 ell)."""
        return math.pi / (4.0 * self.ell)

    @property
    def collar_fraction(self) -> float:
        """Measure fraction of the ell-collar on the torus, 2 ell / L."""
        return 2.0 * self.ell / self.period

    @property
    def breakpoints(self) -> tuple[float, float, float, float]:
        """Kinks of q: panel edges for piecewise quadrature."""
        return (-self.ell, self.ell, self.period - self.ell, self.period + self.ell)


def _branches(w: Window, xs):
    """Boolean masks for rise/plateau/fall against the shared breakpoints.

    Comparing against the same floats the quadrature panels use keeps the
    branch choice consistent at the kinks (x = L +- ell need not round to
    |x - L| == ell exactly).
    """
    b0, b1, b2, b3 = w.breakpoints
    return (
        (xs >= b0) & (xs <= b1),
        (xs > b1) & (xs < b2),
        (xs >= b2) & (xs <= b3),
    )


def window_q(w: Window, x):
    """The window value; scalar in, scalar out (arrays broadcast)."""
    xs = np.asarray(x, dtype=float)
    ell, big_l = w.ell, w.period
    rise = np.cos((xs - ell) * np.pi / (4.0 * ell))
    fall = np.cos((xs - (big_l - ell)) * np.pi / (4.0 * ell))
    on_rise, on_plateau, on_fall = _branches(w, xs)
    out = np.select([on_rise, on_plateau, on_fall], [rise, np.ones_like(xs), fall], default=0.0)
    # the cosine argument at the outer support edges can round a half-ulp
    # past its zero crossing; the window itself never leaves [0, 1]
    out = np.clip(out, 0.0, 1.0)
    return float(out) if out.ndim == 0 else out


def window_q_prime(w: Window, x):
    """One-sided derivative of q (jumps at the outer edges +-ell, L+-ell)."""
    xs = np.asarray(x, dtype=float)
    ell, big_l = w.ell, w.period
    s = np.pi / (4.0 * ell)
    rise = -s * np.sin((xs - ell) * np.pi / (4.0 * ell))
    fall = -s * np.sin((xs - (big_l - ell)) * np.pi / (4.0 * ell))
    on_rise, on_plateau, on_fall = _branches(w, xs)
    out = np.select([on_rise, on_plateau, on_fall], [rise, np.zeros_like(xs), fall], default=0.0)
    return float(out) if out.ndim == 0 else out


def window_h(w: Window, point) -> float:
    """3-D product window q(x1) q(x2) q(x3)."""
    x1, x2, x3 = point
    return window_q(w, x1) * window_q(w, x2) * window_q(w, x3)


def collar_indicator(w: Window, x):
    """chi: torus distance from x to the seam at 0 is at most ell."""
    xs = np.asarray(x, dtype=float)
    y = np.mod(xs, w.period)
    dist = np.minimum(y, w.period - y)
    out = (dist <= w.ell).astype(float)
    return float(out) if out.ndim == 0 else out


def _simpson_panel(f, a: float, b: float, n: int) -> float:
    """Composite Simpson with n subintervals (forced even) on one smooth panel."""
    if b <= a:
        return 0.0
    n = max(2, n + (n % 2))
    xs = np.linspace(a, b, n + 1)
    ys = np.asarray(f(xs), dtype=float)
    h = (b - a) / n
    return float(h / 3.0 * (ys[0] + ys[-1] + 4.0 * ys[1:-1:2].sum() + 2.0 * ys[2:-1:2].sum()))


def _extended_integral(w: Window, f, resolution: int) -> float:
    """Integrate f over [-ell, L+ell], split at the window kinks."""
    b0, b1, b2, b3 = w.breakpoints
    total = 0.0
    for a, b in ((b0, b1), (b1, b2), (b2, b3)):
        total += _simpson_panel(f, a, b, resolution)
    return total


@dataclass(frozen=True)
class IsometryReport:
    extended: float
    periodic: float
    resolution: int

    @property
    def residual(self) -> float:
        return abs(self.extended - self.periodic)

    @property
    def rel_residual(self) -> float:
        scale = max(abs(self.periodic), 1.0)
        return self.residual / scale


def check_isometry(w: Window, phi, *, resolution: int = 1 << 14) -> IsometryReport:
    """Compare int q^2 |phi|^2 over [-ell, L+ell] with int |phi|^2 over [0, L].

    phi must have period L; it is evaluated directly on the extended
    interval.  resolution counts Simpson subintervals per smooth panel.
    """

    def weighted(xs):
        return window_q(w, xs) ** 2 * np.abs(phi(xs)) ** 2

    extended = _extended_integral(w, weighted, resolution)
    periodic = _simpson_panel(lambda xs: np.abs(phi(xs)) ** 2, 0.0, w.period, resolution)
    return IsometryReport(extended=extended, periodic=periodic, resolution=resolution)


def isometry_3d_separable(w: Window, factors, *, resolution: int = 1 << 12) -> dict:
    """Isometry for a separable 3-D state Phi = phi1 phi2 phi3 under h.

    Both 3-D integrals factor into the 1-D ones, so the check multiplies
    per-axis reports and never touches a 3-D grid.
    """
    if len(factors) != 3:
        raise ValueError("need exactly three 1-D factors")
    reports = [check_isometry(w, phi, resolution=resolution) for phi in factors]
    extended = math.prod(r.extended for r in reports)
    periodic = math.prod(r.periodic for r in reports)
    return {
        "extended": extended,
        "periodic": periodic,
        "residual": abs(extended - periodic),
        "per_axis": [(r.extended, r.periodic) for r in reports],
    }


@dataclass(frozen=True)
class PenaltyReport:
    lhs: float
    periodic_kinetic: float
    collar_mass: float
    ell: float
    resolution: int

    @property
    def excess(self) -> float:
        """Kinetic cost of windowing: lhs minus the periodic kinetic term."""
        return self.lhs - self.periodic_kinetic

    @property
    def implied_constant(self) -> float:
        """C such that lhs = periodic kinetic + C ell^-2 collar mass.

        nan when phi carries no mass on the collar.
        """
        if self.collar_mass <= 0.0:
            return math.nan
        return self.excess * self.ell**2 / self.collar_mass

    def holds_with(self, constant: float, *, slack: float = 1e-9) -> bool:
        rhs = self.periodic_kinetic + constant / self.ell**2 * self.collar_mass
        scale = max(abs(self.lhs), abs(rhs), 1.0)
        return self.lhs <= rhs + slack * scale


def kinetic_penalty(w: Window, phi, dphi, *, resolution: int = 1 << 14) -> PenaltyReport:
    """Evaluate both sides of the windowed kinetic-energy bound.

    lhs  = int_{-ell}^{L+ell} |(q phi)'|^2
    rhs  = int_0^L |phi'|^2  +  C ell^-2 int chi |phi|^2

    with the collar mass int chi |phi|^2 taken over one period.  phi and
    its derivative dphi must be periodic with period L.
    """

    def lhs_integrand(xs):
        qp = window_q_prime(w, xs)
        qv = window_q(w, xs)
        return np.abs(qp * phi(xs) + qv * dphi(xs)) ** 2

    lhs = _extended_integral(w, lhs_integrand, resolution)
    kin = _simpson_panel(lambda xs: np.abs(dphi(xs)) ** 2, 0.0, w.period, resolution)

    def density(xs):
        return np.abs(phi(xs)) ** 2

    # chi is supported on [0, ell] and [L-ell, L]; integrate each arc whole
    collar = _simpson_panel(density, 0.0, w.ell, resolution) + _simpson_panel(
        density, w.period - w.ell, w.period, resolution
    )
    return PenaltyReport(
        lhs=lhs, periodic_kinetic=kin, collar_mass=collar, ell=w.ell, resolution=resolution
    )


def shifted_collar_average(w: Window, probes, *, n_shifts: int = 1 << 12) -> dict:
    """Average chi(x + u) over shifts u in [0, L): the collar fraction, any x.

    Midpoint sampling of an arc of measure 2 ell; the count is off by at
    most the two boundary samples, so |average - 2 ell/L| <= 2/n_shifts.
    """
    us = (np.arange(n_shifts) + 0.5) * (w.period / n_shifts)
    averages = [float(np.mean(collar_indicator(w, x + us))) for x in np.atleast_1d(probes)]
    exact = w.collar_fraction
    return {
        "averages": averages,
        "exact": exact,
        "max_gap": max(abs(v - exact) for v in averages),
        "n_shifts": n_shifts,
    }


def trig_polynomial(period: float, cos_coeffs, sin_coeffs):
    """Real trig polynomial on [0, period] and its derivative, as callables.

    cos_coeffs[k], sin_coeffs[k] weight cos/sin(2 pi (k+1) x / L); the
    constant term is fixed at 1 so the polynomial has collar mass.
    """
    ck = np.asarray(cos_coeffs, dtype=float)
    sk = np.asarray(sin_coeffs, dtype=float)
    if ck.shape != sk.shape:
        raise ValueError("coefficient arrays must have equal length")
    freqs = 2.0 * np.pi * np.arange(1, ck.size + 1) / period

    def phi(xs):
        xs = np.asarray(xs, dtype=float)
        angles = np.multiply.outer(xs, freqs)
        return 1.0 + np.cos(angles) @ ck + np.sin(angles) @ sk

    def dphi(xs):
        xs = np.asarray(xs, dtype=float)
        angles = np.multiply.outer(xs, freqs)
        return -np.sin(angles) @ (freqs * ck) + np.cos(angles) @ (freqs * sk)

    return phi, dphi
