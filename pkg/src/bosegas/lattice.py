"""Momentum lattice schedules, region labels, dispersion, and shell sums.

Working on the torus of side L, allowed momenta live on (2 pi / L) Z^3.  A
density rho fixes the scale schedule

    L = rho^(-25/24),      eps_L = eta_L = eps_H = rho^eta   (eta = 1/200),
    m_c = floor(rho^-eta)  (never below 2),     N = rho L^3 (rounded).

Nonzero momenta split into concentric regions by magnitude:

    gap       0 < |p| < eps_L rho^(1/2)
    P_L       eps_L rho^(1/2) <= |p| <= eta_L^(-1) rho^(1/2)   (closed)
    P_I       eta_L^(-1) rho^(1/2) < |p| <= eps_H              (half open)
    P_H       eps_H < |p|                                      (open below)

and modes beyond a configured truncation k_c are tagged separately.  Each
region carries its own quadratic-form coefficient lambda:

    P_L:          rho lambda_p = (1 - h) / (1 + h),  h = sqrt(1 + 4 rho g0 / p^2)
    P_I, P_H:     lambda_p = -w_p   (scattering solution)

with |lambda_p| <= g0 / p^2 and |rho lambda_p| < 1 everywhere they are defined.

Sums (1/|Lambda|) sum_{p in region} F(|p|) are evaluated exactly by counting
integer lattice points shell by shell (r_3(m) = #{n in Z^3 : |n|^2 = m},
computed by convolving one-dimensional square counts), and compared against
the continuum integral (2 pi)^-3 int F d^3k over the same annulus; the
relative gap shrinks like O(|Lambda|^-1/3).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import quad
from scipy.signal import fftconvolve

from .errors import BudgetExceeded, DivergentIntegrand, RegionUndefined

__all__ = [
    "Region",
    "Schedule",
    "Dispersion",
    "Mode",
    "ModeSet",
    "LatticeSumResult",
    "ShellSumResult",
    "classify",
    "lambda_at",
    "lattice_sum",
    "shell_counts",
    "radial_shell_sum",
    "pl_number_density_comparison",
    "load_toy_modes",
]

DEFAULT_ETA = 1.0 / 200.0


class Region(str, Enum):
    """Label of a momentum magnitude under a schedule."""

    P0 = "P0"
    PL = "PL"
    PI = "PI"
    PH = "PH"
    GAP = "Gap"
    TRUNCATED = "Truncated"


@dataclass(frozen=True)
class Schedule:
    """Density-driven scale schedule for the momentum lattice."""

    rho: float
    eta: float = DEFAULT_ETA
    k_c: float | None = None

    def __post_init__(self):
        if not (0.0 < self.rho < 1.0):
            raise ValueError("schedule needs 0 < rho < 1")
        if not (0.0 < self.eta < 0.25):
            raise ValueError("region ordering needs 0 < eta < 1/4")
        if self.k_c is not None and self.k_c <= self.eps_h:
            raise ValueError("truncation k_c must exceed eps_H")

    @property
    def box_length(self) -> float:
        return self.rho ** (-25.0 / 24.0)

    @property
    def volume(self) -> float:
        return self.box_length**3

    @property
    def spacing(self) -> float:
        return 2.0 * math.pi / self.box_length

    @property
    def eps_l(self) -> float:
        return self.rho**self.eta

    @property
    def eta_l(self) -> float:
        return self.rho**self.eta

    @property
    def eps_h(self) -> float:
        return self.rho**self.eta

    @property
    def m_c(self) -> int:
        return max(2, math.floor(self.rho**-self.eta))

    @property
    def p_gap_top(self) -> float:
        # also the closed lower edge of P_L
        return self.eps_l * math.sqrt(self.rho)

    @property
    def p_low_top(self) -> float:
        # closed upper edge of P_L, open lower edge of P_I
        return math.sqrt(self.rho) / self.eta_l

    @property
    def n_particles(self) -> int:
        return max(1, round(self.rho * self.volume))

    @property
    def n_rounding(self) -> float:
        """Shift absorbed when rounding rho L^3 to an integer particle count."""
        return self.n_particles - self.rho * self.volume

    def ordering_ok(self) -> bool:
        top = self.k_c if self.k_c is not None else math.inf
        return self.p_gap_top < self.p_low_top < self.eps_h < top

    def as_dict(self) -> dict:
        return {
            "rho": self.rho,
            "eta": self.eta,
            "k_c": self.k_c,
            "box_length": self.box_length,
            "eps_L": self.eps_l,
            "eta_L": self.eta_l,
            "eps_H": self.eps_h,
            "m_c": self.m_c,
            "n_particles": self.n_particles,
            "n_rounding": self.n_rounding,
        }


def _magnitude(p) -> float:
    arr = np.asarray(p, dtype=float)
    if arr.ndim == 0:
        return float(arr)
    return float(np.linalg.norm(arr))


def classify(schedule: Schedule, p) -> Region:
    """Region label of a momentum (vector or magnitude) under the schedule.

    Boundary placement: P_L is closed at both ends, P_I is half open (its
    upper bound eps_H included), P_H is open below.
    """
    mag = _magnitude(p)
    if mag == 0.0:
        return Region.P0
    if mag < schedule.p_gap_top:
        return Region.GAP
    if mag <= schedule.p_low_top:
        return Region.PL
    if mag <= schedule.eps_h:
        return Region.PI
    return Region.PH


@dataclass(frozen=True)
class Dispersion:
    """Region-dependent quadratic-form coefficient lambda.

    w_of supplies w_p for the outer regions; with use_g_variant the P_L
    branch replaces the limiting coupling g0 by the running g_p = p^2 w_p
    (requires g_of).
    """

    g0: float
    w_of: Callable[[float], float]
    g_of: Callable[[float], float] | None = None
    use_g_variant: bool = False

    def coupling_at(self, mag: float) -> float:
        if self.use_g_variant:
            if self.g_of is None:
                raise ValueError("use_g_variant requires g_of")
            return float(self.g_of(mag))
        return self.g0


def lambda_at(dispersion: Dispersion, schedule_rho: float, p, region: Region) -> float:
    """lambda for one mode; raises RegionUndefined on P0 or the gap."""
    mag = _magnitude(p)
    if region in (Region.P0, Region.GAP):
        raise RegionUndefined(f"lambda undefined on {region.value}")
    if region is Region.PL:
        h = math.sqrt(1.0 + 4.0 * schedule_rho * dispersion.coupling_at(mag) / mag**2)
        return (1.0 - h) / ((1.0 + h) * schedule_rho)
    # P_I, P_H, and truncated tail all use the scattering profile
    return -float(dispersion.w_of(mag))


@dataclass
class Mode:
    """One lattice momentum with its label and (optional) lambda value."""

    index: int
    p: np.ndarray
    region: Region
    lam: float | None = None

    @property
    def magnitude(self) -> float:
        return float(np.linalg.norm(self.p))


def _key(p) -> tuple:
    return tuple(np.round(np.asarray(p, dtype=float), 9) + 0.0)


class ModeSet:
    """Explicit collection of modes, toy (manual labels) or schedule-driven.

    Toy sets must list the zero mode and may attach manual lambda values;
    schedule sets materialize every lattice vector up to a magnitude budget.
    """

    def __init__(self, modes: Sequence[Mode], volume: float | None = None, schedule: Schedule | None = None, source: str = "toy"):
        self.modes = list(modes)
        self.volume = volume if volume is not None else (schedule.volume if schedule else None)
        self.schedule = schedule
        self.source = source
        self._by_key = {}
        for m in self.modes:
            k = _key(m.p)
            if k in self._by_key:
                raise ValueError(f"duplicate mode momentum {m.p}")
            self._by_key[k] = m.index
        zero = self.index_of((0.0, 0.0, 0.0))
        if zero is None:
            raise ValueError("mode set must contain the zero mode")
        if self.modes[zero].region is not Region.P0:
            raise ValueError("zero mode must carry the P0 label")
        self.zero_index = zero
        self._neg = [self.index_of(-np.asarray(m.p)) for m in self.modes]

    @classmethod
    def toy(
        cls,
        momenta: Sequence,
        labels: Sequence[Region | str],
        volume: float | None = None,
        lams: Sequence[float | None] | None = None,
    ) -> "ModeSet":
        modes = []
        for i, (p, lab) in enumerate(zip(momenta, labels)):
            region = Region(lab)
            lam = None if lams is None else lams[i]
            modes.append(Mode(index=i, p=np.asarray(p, dtype=float), region=region, lam=lam))
        return cls(modes, volume=volume, source="toy")

    @classmethod
    def from_schedule(cls, schedule: Schedule, p_budget: float, max_modes: int = 200_000) -> "ModeSet":
        """Materialize all lattice modes with |p| <= p_budget (toy scale only)."""
        step = schedule.spacing
        nmax = int(math.floor(p_budget / step))
        est = (2 * nmax + 1) ** 3
        if est > 8 * max_modes:
            raise BudgetExceeded(f"{est} candidate vectors exceed the materialization budget")
        modes = []
        idx = 0
        rng = range(-nmax, nmax + 1)
        kc = schedule.k_c
        for nx in rng:
            for ny in rng:
                for nz in rng:
                    p = np.array([nx, ny, nz], dtype=float) * step
                    mag = float(np.linalg.norm(p))
                    if mag > p_budget:
                        continue
                    region = classify(schedule, mag)
                    if kc is not None and region is Region.PH and mag > kc:
                        region = Region.TRUNCATED
                    modes.append(Mode(index=idx, p=p, region=region))
                    idx += 1
                    if idx > max_modes:
                        raise BudgetExceeded("materialized mode count exceeded max_modes")
        return cls(modes, volume=schedule.volume, schedule=schedule, source="schedule")

    def __len__(self) -> int:
        return len(self.modes)

    def __iter__(self):
        return iter(self.modes)

    def index_of(self, p) -> int | None:
        return self._by_key.get(_key(p))

    def neg_index(self, i: int) -> int | None:
        return self._neg[i]

    def nonzero_indices(self) -> list[int]:
        return [m.index for m in self.modes if m.index != self.zero_index]

    def indices_in(self, *regions: Region) -> list[int]:
        return [m.index for m in self.modes if m.region in regions]

    def attach_dispersion(self, dispersion: Dispersion, rho: float) -> None:
        """Fill lambda on every mode outside P0 and the gap."""
        for m in self.modes:
            if m.region in (Region.P0, Region.GAP):
                m.lam = None
            elif m.region is Region.PL:
                m.lam = lambda_at(dispersion, rho, m.p, Region.PL)
            else:
                m.lam = lambda_at(dispersion, rho, m.p, Region.PH)

    def momentum_matrix(self) -> np.ndarray:
        return np.stack([m.p for m in self.modes])


def load_toy_modes(path, volume: float | None = None) -> ModeSet:
    """Read a toy mode set: one `px py pz label [lambda]` per line.

    Blank lines and `#` comments are skipped.  A `# volume = V` comment sets
    the box volume unless one is passed explicitly.
    """
    momenta, labels, lams = [], [], []
    file_volume = None
    with open(path, "r", encoding="utf-8") as fh:
        for raw in fh:
            line = raw.strip()
            if line.startswith("#"):
                stripped = line[1:].replace(" ", "")
                if stripped.lower().startswith("volume="):
                    file_volume = float(stripped.split("=", 1)[1])
                continue
            if not line:
                continue
            parts = line.split()
            if len(parts) not in (4, 5):
                raise ValueError(f"malformed mode line: {raw!r}")
            momenta.append([float(parts[0]), float(parts[1]), float(parts[2])])
            labels.append(Region(parts[3]))
            lams.append(float(parts[4]) if len(parts) == 5 else None)
    vol = volume if volume is not None else file_volume
    return ModeSet.toy(momenta, labels, volume=vol, lams=lams)


@dataclass(frozen=True)
class LatticeSumResult:
    """Exact sum over an explicit mode set, with optional continuum estimate."""

    total: float
    per_volume: float | None
    continuum: float | None
    rel_gap: float | None
    n_modes: int


def lattice_sum(
    mode_set: ModeSet,
    integrand: Callable[[Mode], float],
    *,
    regions: Sequence[Region] | None = None,
    radial: Callable[[float], float] | None = None,
    radial_bounds: tuple[float, float] | None = None,
) -> LatticeSumResult:
    """Exact sum of `integrand` over the listed modes (optionally filtered).

    When a radial profile and bounds are supplied the continuum estimate
    (2 pi)^-3 int_{lo<=|k|<=hi} radial(|k|) d^3 k is attached for comparison;
    this is the |Lambda| -> inf limit of (1/|Lambda|) sum.
    """
    selected = [m for m in mode_set if regions is None or m.region in regions]
    total = 0.0
    for m in selected:
        val = float(integrand(m))
        if not math.isfinite(val):
            raise DivergentIntegrand(
                f"integrand not finite at mode {m.index} (|p|={m.magnitude:.3e}); exclude P0 and the gap"
            )
        total += val
    per_volume = total / mode_set.volume if mode_set.volume else None
    continuum = None
    rel_gap = None
    if radial is not None and radial_bounds is not None:
        continuum = _radial_continuum(radial, *radial_bounds)
        if per_volume is not None and continuum != 0.0:
            rel_gap = abs(per_volume - continuum) / abs(continuum)
    return LatticeSumResult(
        total=total,
        per_volume=per_volume,
        continuum=continuum,
        rel_gap=rel_gap,
        n_modes=len(selected),
    )


def _radial_continuum(radial: Callable[[float], float], k_lo: float, k_hi: float) -> float:
    """(2 pi)^-3 int_{k_lo<=|k|<=k_hi} radial(|k|) d^3k, on a log abscissa.

    Substituting k = e^t keeps quad happy when the bounds span many decades.
    """
    if not (0.0 < k_lo < k_hi):
        raise ValueError("annulus needs 0 < k_lo < k_hi")
    val, _ = quad(
        lambda t: math.exp(3.0 * t) * radial(math.exp(t)),
        math.log(k_lo),
        math.log(k_hi),
        limit=400,
        epsabs=0.0,
        epsrel=1e-12,
    )
    return val / (2.0 * math.pi**2)


_SHELL_BUDGET = 30_000_000


def shell_counts(m_max: int) -> np.ndarray:
    """r_3(m) = #{n in Z^3 : |n|^2 = m} for m = 0 .. m_max.

    Built by convolving the one-dimensional counts r_1 twice (FFT); the
    float convolution is rounded back to exact integers, which is safe
    because every count is far below 2^53.
    """
    if m_max > _SHELL_BUDGET:
        raise BudgetExceeded(f"shell budget: m_max={m_max} > {_SHELL_BUDGET}")
    r1 = np.zeros(m_max + 1)
    ks = np.arange(1, int(math.isqrt(m_max)) + 1)
    r1[0] = 1.0
    r1[ks * ks] = 2.0
    r2 = fftconvolve(r1, r1)[: m_max + 1]
    r3 = fftconvolve(r2, r1)[: m_max + 1]
    return np.rint(r3).astype(np.int64)


@dataclass(frozen=True)
class ShellSumResult:
    """Exact lattice sum vs continuum integral over one momentum annulus."""

    lattice_per_volume: float
    continuum_per_volume: float
    rel_gap: float
    n_modes: int
    m_range: tuple[int, int]
    spacing: float


def radial_shell_sum(
    schedule: Schedule,
    radial: Callable[[np.ndarray], np.ndarray],
    p_lo: float,
    p_hi: float,
    *,
    include_lo: bool = True,
    include_hi: bool = True,
) -> ShellSumResult:
    """(1/|Lambda|) sum over lattice modes with p_lo <= |p| <= p_hi, exactly.

    `radial` must accept a vector of magnitudes.  The continuum companion is
    the same-annulus integral (2 pi)^-3 int radial(|k|) d^3 k, so the gap
    isolates the pure discretization error O(|Lambda|^-1/3).
    """
    step = schedule.spacing
    lo2 = (p_lo / step) ** 2
    hi2 = (p_hi / step) ** 2
    m_lo = math.ceil(lo2 - 1e-9) if include_lo else math.floor(lo2 + 1e-9) + 1
    m_hi = math.floor(hi2 + 1e-9) if include_hi else math.ceil(hi2 - 1e-9) - 1
    m_lo = max(m_lo, 1)
    if m_hi < m_lo:
        raise ValueError("annulus contains no lattice shells")
    counts = shell_counts(m_hi)[m_lo:]
    ms = np.arange(m_lo, m_hi + 1)
    occupied = counts > 0
    mags = np.sqrt(ms[occupied].astype(float)) * step
    vals = radial(mags)
    if not np.all(np.isfinite(vals)):
        raise DivergentIntegrand("radial summand not finite inside the annulus")
    lattice = float(np.sum(counts[occupied] * vals)) / schedule.volume
    continuum = _radial_continuum(lambda k: float(radial(np.array([k]))[0]), p_lo, p_hi)
    gap = abs(lattice - continuum) / abs(continuum) if continuum != 0.0 else math.inf
    return ShellSumResult(
        lattice_per_volume=lattice,
        continuum_per_volume=continuum,
        rel_gap=gap,
        n_modes=int(np.sum(counts)),
        m_range=(m_lo, m_hi),
        spacing=step,
    )


def number_density_summand(rho: float, g0: float) -> Callable[[np.ndarray], np.ndarray]:
    """(rho lambda_u)^2 / (1 - (rho lambda_u)^2) on P_L, as a radial profile.

    With h = sqrt(1 + 4 rho g0 / u^2) this equals (h-1)^2 / 4h.
    """

    def f(mags: np.ndarray) -> np.ndarray:
        h = np.sqrt(1.0 + 4.0 * rho * g0 / mags**2)
        return (h - 1.0) ** 2 / (4.0 * h)

    return f


def scaled_number_density_annulus(g0: float, k_lo: float, k_hi: float) -> float:
    """(2 pi)^-3 int_{k_lo<=|k|<=k_hi} (h-1)^2/(4h) d^3k at unit density scale.

    h = sqrt(1 + 4 g0 / k^2); the k_lo -> 0, k_hi -> inf limit is
    g0^(3/2)/(3 pi^2).  Written with h - 1 = 4 g0/(k^2 (h+1)) so no digits
    cancel anywhere on the annulus.
    """

    def f(k: float) -> float:
        h = math.sqrt(1.0 + 4.0 * g0 / k**2)
        return 4.0 * g0**2 / (k**4 * h * (h + 1.0) ** 2)

    return _radial_continuum(f, k_lo, k_hi)


def pl_number_density_comparison(schedule: Schedule, g0: float) -> dict:
    """Exact P_L number-density sum vs its continuum companions.

    Returns the per-volume lattice sum, the same-annulus continuum value,
    their relative gap, and the full-space reference rho^(3/2) g0^(3/2)/(3 pi^2)
    with the (slowly vanishing) annulus-truncation gap against it.
    """
    rho = schedule.rho
    res = radial_shell_sum(
        schedule,
        number_density_summand(rho, g0),
        schedule.p_gap_top,
        schedule.p_low_top,
    )
    full_space = rho**1.5 * g0**1.5 / (3.0 * math.pi**2)
    return {
        "rho": rho,
        "lattice_per_volume": res.lattice_per_volume,
        "continuum_annulus": res.continuum_per_volume,
        "rel_gap_annulus": res.rel_gap,
        "full_space_reference": full_space,
        "rel_gap_full_space": abs(res.lattice_per_volume - full_space) / full_space,
        "n_modes": res.n_modes,
        "spacing": res.spacing,
    }
