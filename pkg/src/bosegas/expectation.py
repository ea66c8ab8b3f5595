"""Exact particle-number statistics and energy expectations on trial states.

Everything here is an exact finite sum over the closure set, evaluated two
independent ways:

  * component path — the interaction splits into five pieces by the shape of
    the conserving quadruple (v1, v2, v3, v4), v1+v2 = v3+v4:

      same multiset {v1,v2} = {v3,v4}          -> HS1  (diagonal)
      {v1,v2} or {v3,v4} = {0,0}               -> HS2  (condensate <-> pair)
      both sides are +-pairs, different        -> HS3  (pair <-> pair)
      exactly one zero leg                     -> HA1
      anything else                            -> HA2

    Each non-diagonal term is summed once per source state: the target
    occupancy is forced, so the double sum over states collapses.

  * brute-force path — the raw sum (1/|L|) sum_{p,q,u} V_u a+_p a+_q
    a_{p-u} a_{q+u}, enumerated directly and evaluated vectorized over all
    member states with delta-shift amplitude bookkeeping and an integer
    radix encoding for target lookup.

Their agreement (decomposition residual) is the module's own oracle.

Q_Psi statistics follow the three query forms (plain product moments,
occupancy probabilities, conditional moments), and P(u,v) gives the
pair-to-pair correlator in closed form over creation preimages.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import BudgetExceeded, ZeroConditionProbability
from .fock import OccupationState, WeightedTrialState, strict_pair_create
from .lattice import ModeSet, Region
from .scattering import Potential, fourier_at

__all__ = [
    "InteractionContext",
    "matrix_element",
    "q_psi",
    "q_psi_occupation",
    "q_psi_conditional",
    "EnergyReport",
    "expect_component",
    "brute_force_energy",
    "energy_report",
    "p_uv",
    "pair_correlator_check",
    "asymmetry_count_F",
    "occupation_ratio_report",
    "pl_occupation_monotonicity",
    "statistics_report",
    "COMPONENTS",
]

COMPONENTS = ("kinetic", "HS1", "HS2", "HS3", "HA1", "HA2")


class InteractionContext:
    """Fourier-space pair potential sampled on a mode set, with caching."""

    def __init__(self, v_of: Callable[[float], float], mode_set: ModeSet):
        self.mode_set = mode_set
        self._v_of = v_of
        self._cache: dict[float, float] = {}
        self._p = mode_set.momentum_matrix()

    @classmethod
    def from_potential(cls, potential: Potential, mode_set: ModeSet) -> "InteractionContext":
        return cls(lambda mag: fourier_at(potential, mag), mode_set)

    def v_mag(self, mag: float) -> float:
        key = round(float(mag), 12)
        if key not in self._cache:
            self._cache[key] = float(self._v_of(key))
        return self._cache[key]

    def v_between(self, i: int, j: int) -> float:
        """V at the momentum transfer p_i - p_j."""
        return self.v_mag(float(np.linalg.norm(self._p[i] - self._p[j])))

    @property
    def v0(self) -> float:
        return self.v_mag(0.0)


def matrix_element(
    mode_set: ModeSet,
    beta: OccupationState,
    quad: Sequence[int],
    alpha: OccupationState,
) -> float:
    """<beta| a+_{u1} a+_{u2} a_{u3} a_{u4} |alpha> with explicit sqrt(n) steps.

    quad holds the four mode indices (u1, u2, u3, u4).  The amplitude is
    accumulated operator by operator on a working copy of the occupancy, so
    coinciding legs need no special cases.
    """
    u1, u2, u3, u4 = quad
    c = list(alpha.counts)
    amp2 = c[u4]
    if amp2 == 0:
        return 0.0
    c[u4] -= 1
    amp2 *= c[u3]
    if amp2 == 0:
        return 0.0
    c[u3] -= 1
    c[u2] += 1
    amp2 *= c[u2]
    c[u1] += 1
    amp2 *= c[u1]
    if tuple(c) != beta.counts:
        return 0.0
    return math.sqrt(amp2)


def _weights_and_probs(state: WeightedTrialState):
    w = state.weights
    return w, np.abs(w) ** 2


def q_psi(state: WeightedTrialState, momenta: Sequence[int]) -> float:
    """Expectation of the product of occupation numbers at the given modes."""
    _, probs = _weights_and_probs(state)
    total = 0.0
    for i, alpha in enumerate(state.closure):
        prod = 1.0
        for u in momenta:
            prod *= alpha.counts[u]
            if prod == 0.0:
                break
        total += prod * probs[i]
    return total


def _condition_mask(state: WeightedTrialState, pairs) -> np.ndarray:
    mask = np.ones(len(state.closure), dtype=bool)
    counts = state.closure.counts_matrix()
    for u, m in pairs:
        mask &= counts[:, u] == m
    return mask


def q_psi_occupation(state: WeightedTrialState, pairs: Sequence[tuple]) -> float:
    """Probability that mode u_i holds exactly m_i particles for every pair."""
    _, probs = _weights_and_probs(state)
    return float(np.sum(probs[_condition_mask(state, pairs)]))


def q_psi_conditional(
    state: WeightedTrialState, momenta: Sequence[int], pairs: Sequence[tuple]
) -> float:
    """Conditional product moment given exact occupancies elsewhere."""
    _, probs = _weights_and_probs(state)
    mask = _condition_mask(state, pairs)
    denom = float(np.sum(probs[mask]))
    if denom == 0.0:
        raise ZeroConditionProbability(f"no member state satisfies {pairs}")
    counts = state.closure.counts_matrix()
    num = probs[mask].copy()
    for u in momenta:
        num *= counts[mask, u]
    return float(np.sum(num)) / denom


@dataclass(frozen=True)
class EnergyReport:
    """Per-component energies plus the independent whole-sum cross-check."""

    kinetic: float
    hs1: float
    hs2: float
    hs3: float
    ha1: float
    ha2: float
    total: float
    brute_force_total: float
    decomposition_residual: float
    imag_residue: float

    def as_dict(self) -> dict:
        return {
            "kinetic": self.kinetic,
            "HS1": self.hs1,
            "HS2": self.hs2,
            "HS3": self.hs3,
            "HA1": self.ha1,
            "HA2": self.ha2,
            "total": self.total,
            "brute_force_total": self.brute_force_total,
            "decomposition_residual": self.decomposition_residual,
            "imag_residue": self.imag_residue,
        }


def _kinetic(state: WeightedTrialState) -> float:
    ms = state.mode_set
    total = 0.0
    for m in ms:
        mag2 = float(m.p @ m.p)
        if mag2 > 0.0:
            total += mag2 * q_psi(state, [m.index])
    return total


def _diagonal_interaction(state: WeightedTrialState, ctx: InteractionContext) -> float:
    """Same-multiset part: V0 sum n(n-1) + sum_{u != v} (V_{u-v} + V0) n_u n_v."""
    ms = state.mode_set
    vol = ms.volume
    n_modes = len(ms)
    v0 = ctx.v0
    vmat = np.empty((n_modes, n_modes))
    for i in range(n_modes):
        for j in range(i, n_modes):
            vmat[i, j] = vmat[j, i] = ctx.v_between(i, j)
    counts = state.closure.counts_matrix().astype(float)
    probs = np.abs(state.weights) ** 2
    same = np.sum(counts * (counts - 1.0), axis=1)
    cross = np.einsum("si,ij,sj->s", counts, vmat, counts) - np.einsum(
        "si,si->s", counts, counts
    ) * v0
    ntot = np.sum(counts, axis=1)
    cross += v0 * (ntot**2 - np.einsum("si,si->s", counts, counts))
    return float(np.dot(probs, v0 * same + cross)) / vol


def _sum_quadruples(state: WeightedTrialState, terms) -> complex:
    """sum_alpha f(T(alpha))^* f(alpha) <T(alpha)|op|alpha> over given terms.

    terms is an iterable of (quad, coefficient); the target occupancy per
    source state is unique, so membership lookup replaces the inner sum.
    """
    closure = state.closure
    ms = state.mode_set
    w = state.weights
    total = 0.0 + 0.0j
    for quad, coeff in terms:
        u1, u2, u3, u4 = quad
        for a_i, alpha in enumerate(closure):
            c = alpha.counts
            if c[u4] == 0:
                continue
            nc = list(c)
            nc[u4] -= 1
            if nc[u3] == 0:
                continue
            nc[u3] -= 1
            nc[u2] += 1
            nc[u1] += 1
            beta = OccupationState(tuple(nc))
            b_i = closure.index_of(beta)
            if b_i is None:
                continue
            me = matrix_element(ms, beta, quad, alpha)
            total += coeff * np.conj(w[b_i]) * w[a_i] * me
    return total


def _component_terms(state: WeightedTrialState, ctx: InteractionContext, component: str):
    """Ordered quadruple terms (indices, V coefficient / |L|) for one piece."""
    ms = state.mode_set
    vol = ms.volume
    z = ms.zero_index
    nz = ms.nonzero_indices()
    terms = []
    if component == "HS2":
        for u in nz:
            j = ms.neg_index(u)
            if j is None:
                continue
            vu = ctx.v_between(u, z) / vol
            terms.append(((u, j, z, z), vu))
            terms.append(((z, z, u, j), vu))
    elif component == "HS3":
        for u in nz:
            nu = ms.neg_index(u)
            if nu is None:
                continue
            for v in nz:
                if v == u or v == nu:
                    continue
                nv = ms.neg_index(v)
                if nv is None:
                    continue
                terms.append(((u, nu, v, nv), ctx.v_between(u, v) / vol))
    elif component == "HA1":
        for v2 in nz:
            for v3 in nz:
                v1 = ms.index_of(ms.modes[v2].p + ms.modes[v3].p)
                if v1 is None or v1 == z:
                    continue
                coeff = 2.0 * ctx.v_between(v2, z) / vol
                terms.append(((z, v1, v2, v3), coeff))
                terms.append(((v3, v2, v1, z), coeff))
    elif component == "HA2":
        for v1 in nz:
            p1 = ms.modes[v1].p
            for v2 in nz:
                p12 = p1 + ms.modes[v2].p
                if np.all(p12 == 0.0):
                    continue
                for v3 in nz:
                    v4 = ms.index_of(p12 - ms.modes[v3].p)
                    if v4 is None or v4 == z:
                        continue
                    if sorted((v1, v2)) == sorted((v3, v4)):
                        continue
                    terms.append(((v1, v2, v3, v4), ctx.v_between(v1, v3) / vol))
    else:
        raise ValueError(f"unknown component {component!r}")
    return terms


def expect_component(
    state: WeightedTrialState, component: str, ctx: InteractionContext
) -> float:
    """Exact expectation of one Hamiltonian piece; imaginary part must wash out."""
    if component == "kinetic":
        return _kinetic(state)
    if component == "HS1":
        return _diagonal_interaction(state, ctx)
    val = _sum_quadruples(state, _component_terms(state, ctx, component))
    return float(val.real)


def _radix_encode(counts: np.ndarray):
    """Per-column mixed-radix packing of occupancy rows into int64 keys."""
    caps = counts.max(axis=0).astype(np.int64) + 1
    weights = np.ones(len(caps), dtype=np.int64)
    acc = 1
    for j, cap in enumerate(caps):
        weights[j] = acc
        nxt = acc * int(cap)
        if nxt > 2**62:
            raise BudgetExceeded("occupancy radix exceeds 62-bit capacity")
        acc = nxt
    return counts @ weights, weights


def brute_force_energy(state: WeightedTrialState, ctx: InteractionContext) -> float:
    """<H> from the raw (p, q, u) interaction sum plus the kinetic term.

    Deliberately organized unlike the component path: enumerate ordered
    (p, q, p-u) mode triples, resolve q+u by conservation, and evaluate the
    amplitude on every member state at once via occupancy shifts.
    """
    ms = state.mode_set
    closure = state.closure
    vol = ms.volume
    counts = closure.counts_matrix()
    keys, radix = _radix_encode(counts)
    order = np.argsort(keys)
    sorted_keys = keys[order]
    w = state.weights
    probs_c = np.conj(w)

    total = 0.0 + 0.0j
    n_modes = len(ms)
    pmat = ms.momentum_matrix()
    for j1 in range(n_modes):
        for j2 in range(n_modes):
            p12 = pmat[j1] + pmat[j2]
            for j3 in range(n_modes):
                j4 = ms.index_of(p12 - pmat[j3])
                if j4 is None:
                    continue
                vu = ctx.v_mag(float(np.linalg.norm(pmat[j1] - pmat[j3])))
                n4 = counts[:, j4]
                t3 = counts[:, j3] - (1 if j3 == j4 else 0)
                t2 = counts[:, j2] + 1 - (1 if j2 == j4 else 0) - (1 if j2 == j3 else 0)
                t1 = (
                    counts[:, j1]
                    + 1
                    + (1 if j1 == j2 else 0)
                    - (1 if j1 == j4 else 0)
                    - (1 if j1 == j3 else 0)
                )
                prod = n4 * t3 * t2 * t1
                live = prod > 0
                if not np.any(live):
                    continue
                amp = np.sqrt(prod[live].astype(float))
                shift = radix[j1] + radix[j2] - radix[j3] - radix[j4]
                tgt = keys[live] + shift
                pos = np.searchsorted(sorted_keys, tgt)
                pos_ok = pos < len(sorted_keys)
                pos = np.clip(pos, 0, len(sorted_keys) - 1)
                found = pos_ok & (sorted_keys[pos] == tgt)
                if not np.any(found):
                    continue
                src = np.nonzero(live)[0][found]
                dst = order[pos[found]]
                total += (vu / vol) * np.sum(probs_c[dst] * w[src] * amp[found])

    kin = 0.0
    probs = np.abs(w) ** 2
    for m in ms:
        mag2 = float(m.p @ m.p)
        if mag2 > 0.0:
            kin += mag2 * float(np.dot(probs, counts[:, m.index]))
    return kin + float(total.real)


def energy_report(state: WeightedTrialState, ctx: InteractionContext) -> EnergyReport:
    """Run both evaluation paths and report the decomposition residual."""
    parts = {}
    imag = 0.0
    for comp in COMPONENTS:
        if comp in ("kinetic", "HS1"):
            parts[comp] = expect_component(state, comp, ctx)
        else:
            raw = _sum_quadruples(state, _component_terms(state, ctx, comp))
            parts[comp] = float(raw.real)
            imag = max(imag, abs(float(raw.imag)))
    total = sum(parts.values())
    brute = brute_force_energy(state, ctx)
    scale = max(abs(total), abs(brute), 1e-300)
    return EnergyReport(
        kinetic=parts["kinetic"],
        hs1=parts["HS1"],
        hs2=parts["HS2"],
        hs3=parts["HS3"],
        ha1=parts["HA1"],
        ha2=parts["HA2"],
        total=total,
        brute_force_total=brute,
        decomposition_residual=abs(total - brute) / scale,
        imag_residue=imag,
    )


def p_uv(state: WeightedTrialState, u_idx: int, v_idx: int) -> complex:
    """Pair correlator via creation preimages:

    P(u, v) = sum_g f(A^u g) f(A^v g)
              sqrt((g(u)+1)(g(-u)+1)(g(v)+1)(g(-v)+1)),

    with f vanishing outside the closure.  No conjugation appears; for the
    trial states here f is real, and the pair_correlator_check compares
    against the raw <a+_u a+_{-u} a_v a_{-v}> evaluation.
    """
    ms = state.mode_set
    z = ms.zero_index
    if u_idx == z or v_idx == z or u_idx == v_idx:
        raise ValueError("need distinct nonzero momenta")
    nu = ms.neg_index(u_idx)
    nv = ms.neg_index(v_idx)
    total = 0.0 + 0.0j
    for g_i, gamma in enumerate(state.closure):
        fu = fv = None
        bu = strict_pair_create(ms, gamma, u_idx)
        if bu is not None:
            fu = state.weight_of(bu)
        if fu is None or fu == 0.0:
            continue
        bv = strict_pair_create(ms, gamma, v_idx)
        if bv is not None:
            fv = state.weight_of(bv)
        if fv is None or fv == 0.0:
            continue
        c = gamma.counts
        root = math.sqrt(
            (c[u_idx] + 1) * (c[nu] + 1) * (c[v_idx] + 1) * (c[nv] + 1)
        )
        total += fu * fv * root
    return total


def pair_correlator_check(state: WeightedTrialState, u_idx: int, v_idx: int) -> dict:
    """P(u,v) next to the direct <a+_u a+_{-u} a_v a_{-v}> sum.

    The two agree exactly when either momentum sits at or below the
    intermediate region; for two high momenta only the measured gap is
    reported.
    """
    ms = state.mode_set
    nu = ms.neg_index(u_idx)
    nv = ms.neg_index(v_idx)
    direct = _sum_quadruples(state, [((u_idx, nu, v_idx, nv), 1.0)])
    closed = p_uv(state, u_idx, v_idx)
    regions = (ms.modes[u_idx].region, ms.modes[v_idx].region)
    exact_case = any(r in (Region.PL, Region.PI) for r in regions)
    return {
        "p_uv": closed,
        "direct": direct,
        "abs_gap": abs(direct - closed),
        "exact_case": exact_case,
    }


def asymmetry_count_F(
    mode_set: ModeSet, state: OccupationState, momenta: Sequence[int]
) -> int:
    """Sum over the given modes in the low region of |n(v) - n(-v)|."""
    total = 0
    for v in momenta:
        if mode_set.modes[v].region is not Region.PL:
            continue
        j = mode_set.neg_index(v)
        other = state.counts[j] if j is not None else 0
        total += abs(state.counts[v] - other)
    return total


def occupation_ratio_report(
    state: WeightedTrialState, u_idx: int, rho: float, lam_u: float
) -> dict:
    """Geometric occupancy decay at an intermediate mode.

    Checks Q({u,m}) <= (lam_u rho)^(2i) Q({u,m-i}) for all m >= i >= 1; the
    underlying argument needs only that no state holds more than N condensate
    particles, so it is exact at any scale.
    """
    n = state.closure.n
    probs = [q_psi_occupation(state, [(u_idx, m)]) for m in range(n + 1)]
    ratio2 = (lam_u * rho) ** 2
    worst = -math.inf
    ok = True
    for m in range(1, n + 1):
        for i in range(1, m + 1):
            lhs = probs[m]
            rhs = ratio2**i * probs[m - i]
            if lhs > rhs + 1e-15 * max(1.0, abs(rhs)):
                ok = False
            if rhs > 0:
                worst = max(worst, lhs / rhs)
    return {"holds": ok, "worst_ratio": worst, "occupancy_probs": probs}


def pl_occupation_monotonicity(
    state: WeightedTrialState,
    u_idx: int,
    *,
    rho: float,
    m_c: int,
    eps_h: float,
    c: float = 1.0,
) -> dict:
    """Occupancy-probability monotonicity at a low mode, under its hypothesis.

    The decrease of Q({u,m}) in m is only guaranteed when
    rho^2 lam_u^2 (1 + c m_c rho / eps_h) < 1; the hypothesis value is
    evaluated with the supplied constant and returned so callers can skip
    rather than fail when it does not apply.
    """
    lam_u = state.mode_set.modes[u_idx].lam
    hyp = rho**2 * lam_u**2 * (1.0 + c * m_c * rho / eps_h)
    n = state.closure.n
    probs = [q_psi_occupation(state, [(u_idx, m)]) for m in range(n + 1)]
    monotone = all(
        probs[m + 1] <= probs[m] + 1e-15 for m in range(n)
    )
    return {
        "hypothesis_value": hyp,
        "hypothesis_holds": hyp < 1.0,
        "monotone": monotone,
        "occupancy_probs": probs,
    }


def statistics_report(state: WeightedTrialState, rho: float, g0: float) -> dict:
    """Report-only comparison of finite-instance totals with their rho -> 0 targets.

    The scaled occupancy totals per region converge only asymptotically, so
    the measured values and the limiting targets are recorded side by side
    without assertion.
    """
    ms = state.mode_set
    vol = ms.volume
    by_region = {}
    for reg in (Region.PL, Region.PI, Region.PH):
        idxs = ms.indices_in(reg)
        tot = sum(q_psi(state, [i]) for i in idxs)
        by_region[reg.value] = tot
    scaled_low = by_region["PL"] / (rho**1.5 * vol)
    scaled_outer = (by_region["PI"] + by_region["PH"]) / (rho**1.5 * vol)
    condensate = q_psi(state, [ms.zero_index])
    return {
        "condensate_mean": condensate,
        "condensate_fraction": condensate / state.closure.n if state.closure.n else 1.0,
        "occupancy_by_region": by_region,
        "scaled_low_total": scaled_low,
        "scaled_low_target": g0**1.5 / (3.0 * math.pi**2),
        "scaled_outer_total": scaled_outer,
        "scaled_outer_target": 0.0,
    }
