"""Occupation states, pair creations, closure generation, and trial weights."""

import math

import numpy as np
import pytest

from bosegas.errors import BudgetExceeded, RegionUndefined
from bosegas.fock import (
    OccupationState,
    export_closure,
    free_state,
    generate_M,
    soft_pair_create,
    strict_pair_create,
    weight_f,
    weight_recursion_report,
)
from bosegas.lattice import ModeSet
from bosegas.toys import build_trial, toy_by_name

_RECURSION_NAMES = (
    "strict_outer",
    "strict_low_symmetric",
    "strict_low_asymmetric",
    "soft_symmetric",
    "soft_asymmetric",
)


def _pair_set(label, lam=-0.4, volume=20.0):
    return ModeSet.toy(
        [(0.0, 0.0, 0.0), (0.75, 0.0, 0.0), (-0.75, 0.0, 0.0)],
        ["P0", label, label],
        volume=volume,
        lams=[None, lam, lam],
    )


# ---------------------------------------------------------------- creations


def test_strict_pair_create_moves_condensate_pair():
    ms = _pair_set("PI")
    alpha = free_state(ms, 4)
    beta = strict_pair_create(ms, alpha, 1)
    assert beta.counts == (2, 1, 1)
    assert beta.n == 4
    assert np.allclose(beta.total_momentum(ms), 0.0)
    # again on the child
    gamma = strict_pair_create(ms, beta, 1)
    assert gamma.counts == (0, 2, 2)
    # condensate exhausted
    assert strict_pair_create(ms, gamma, 1) is None


def test_strict_pair_create_rejects_zero_mode():
    ms = _pair_set("PI")
    with pytest.raises(ValueError):
        strict_pair_create(ms, free_state(ms, 4), ms.zero_index)


def test_soft_pair_create_bookkeeping():
    # 0, +-u (PL), and the two soft products u/2 +- k (PH)
    ms = ModeSet.toy(
        [
            (0.0, 0.0, 0.0),
            (0.25, 0.0, 0.0),
            (-0.25, 0.0, 0.0),
            (1.125, 0.5, 0.0),
            (-0.875, -0.5, 0.0),
        ],
        ["P0", "PL", "PL", "PH", "PH"],
        volume=32.0,
        lams=[None, -0.6, -0.6, -0.3, -0.3],
    )
    alpha = strict_pair_create(ms, free_state(ms, 5), 1)  # (3,1,1,0,0)
    k = np.array([1.0, 0.5, 0.0])  # u/2 + k = (1.125, .5, 0)
    beta = soft_pair_create(ms, alpha, 1, k)
    assert beta.counts == (2, 0, 1, 1, 1)
    # momentum additivity: products carry exactly u
    assert np.allclose(beta.total_momentum(ms), alpha.total_momentum(ms))
    # u empty now, so the same creation fails
    assert soft_pair_create(ms, beta, 1, k) is None
    # off-lattice product
    assert soft_pair_create(ms, alpha, 1, np.array([0.3, 0.0, 0.0])) is None
    with pytest.raises(ValueError):
        soft_pair_create(ms, alpha, 3, k)  # u must be low-region


# ---------------------------------------------------------------- closures


def test_closure_single_outer_pair():
    # {0, +-q in P_I}, N = 4: free, one pair, two pairs
    ms = _pair_set("PI")
    clo = generate_M(ms, 4, 2)
    assert len(clo) == 3
    counts = sorted(alpha.counts for alpha in clo)
    assert counts == [(0, 2, 2), (2, 1, 1), (4, 0, 0)]


def test_closure_low_pair_occupation_cap():
    # {0, +-u in P_L}, m_c = 2 caps the tower despite N = 6
    ms = _pair_set("PL", lam=-0.6)
    clo = generate_M(ms, 6, 2)
    assert len(clo) == 3
    assert max(alpha.counts[1] for alpha in clo) == 2


def test_closure_condensate_only():
    ms = ModeSet.toy([(0.0, 0.0, 0.0)], ["P0"], volume=10.0)
    clo = generate_M(ms, 5, 2)
    assert len(clo) == 1
    assert clo.states[0].counts == (5,)


def test_closure_coincidence_toy_size():
    case = toy_by_name("soft-coincidence")
    clo = generate_M(case.mode_set, case.n, case.m_c)
    assert len(clo) == 27


def test_closure_particle_and_momentum_conservation(toy_trials):
    for _, trial in toy_trials.values():
        ms = trial.mode_set
        n = trial.closure.n
        for alpha in trial.closure:
            assert alpha.n == n
            assert np.allclose(alpha.total_momentum(ms), 0.0, atol=1e-12)


def test_closure_low_occupancy_never_exceeds_cap(toy_trials):
    from bosegas.lattice import Region

    for _, trial in toy_trials.values():
        ms = trial.mode_set
        low = ms.indices_in(Region.PL)
        for alpha in trial.closure:
            for u in low:
                assert max(alpha.counts[u], alpha.counts[ms.neg_index(u)]) <= trial.closure.m_c


def test_closure_metadata_replays_every_state(toy_trials):
    """Soundness: re-applying each recorded creation to its parent reproduces
    the member state, and every parent chain terminates at the free state."""
    for _, trial in toy_trials.values():
        clo = trial.closure
        ms = clo.mode_set
        assert clo.parents[clo.free_index] is None
        for i, alpha in enumerate(clo.states):
            if i == clo.free_index:
                assert alpha == free_state(ms, clo.n)
                continue
            parent = clo.states[clo.parents[i]]
            op = clo.ops[i]
            if op[0] == "strict":
                redone = strict_pair_create(ms, parent, op[1])
            else:
                _, u, ip, jm = op
                redone = OccupationState(
                    tuple(
                        c - (k == ms.zero_index) - (k == u) + (k == ip) + (k == jm)
                        for k, c in enumerate(parent.counts)
                    )
                )
            assert redone == alpha
            # chain depth is bounded by the particle count
            seen, j = 0, i
            while clo.parents[j] is not None:
                j = clo.parents[j]
                seen += 1
                assert seen <= clo.n
            assert j == clo.free_index


def test_closure_minimality_no_orphans(toy_trials):
    # generation is breadth-first from the free state, so every state is
    # reachable and no two states share a counts vector
    for _, trial in toy_trials.values():
        keys = [alpha.counts for alpha in trial.closure]
        assert len(set(keys)) == len(keys)


def test_closure_budget_guard():
    case = toy_by_name("soft-coincidence")
    with pytest.raises(BudgetExceeded):
        generate_M(case.mode_set, case.n, case.m_c, budget=5)


# ---------------------------------------------------------------- weights


def test_free_weight_closed_form(toy_trials):
    # f(free)/C_N = sqrt(|Lambda|^N / N!)
    for _, trial in toy_trials.values():
        vol = trial.mode_set.volume
        n = trial.closure.n
        expect = 0.5 * (n * math.log(vol) - math.lgamma(n + 1))
        w_free = trial.weights[trial.closure.free_index]
        got = math.log(abs(complex(w_free))) - trial.log_c_n
        assert math.isclose(got, expect, rel_tol=1e-12)


def test_weights_are_normalized_and_real(toy_trials):
    for _, trial in toy_trials.values():
        assert math.isclose(float(np.sum(np.abs(trial.weights) ** 2)), 1.0, rel_tol=1e-12)
        # negative-lambda phases land on the real axis pairwise
        assert float(np.max(np.abs(trial.weights.imag))) == 0.0


def test_weight_requires_lambda_on_occupied_modes():
    ms = ModeSet.toy(
        [(0.0, 0.0, 0.0), (0.75, 0.0, 0.0), (-0.75, 0.0, 0.0)],
        ["P0", "PI", "PI"],
        volume=20.0,
        lams=[None, None, None],
    )
    clo = generate_M(ms, 4, 2)
    with pytest.raises(RegionUndefined):
        weight_f(clo, [None, None, None], ms.volume)


def test_recursion_identities_all_toys(toy_trials):
    """The five defining ratios of f hold to 1e-12 on every builtin toy."""
    for name, (case, trial) in toy_trials.items():
        lams = [m.lam for m in trial.mode_set]
        rep = weight_recursion_report(trial, lams)
        for kind, err in rep["max_rel_error"].items():
            assert err <= 1e-12, (name, kind, err)


def test_recursion_pair_coverage():
    # the coincidence toy exercises every recursion branch; pin the counts
    case = toy_by_name("soft-coincidence")
    trial = build_trial(case)
    rep = weight_recursion_report(trial, [m.lam for m in trial.mode_set])
    assert set(rep["pairs"]) == set(_RECURSION_NAMES)
    assert rep["pairs"] == {
        "strict_outer": 24,
        "strict_low_symmetric": 9,
        "strict_low_asymmetric": 2,
        "soft_symmetric": 8,
        "soft_asymmetric": 8,
    }


def test_export_closure_round_trip():
    case = toy_by_name("pi-pair")
    trial = build_trial(case)
    text = export_closure(trial)
    lines = [ln for ln in text.strip().split("\n") if ln]
    assert len(lines) == len(trial.closure)
    probs = [float(ln.split("|f|2=")[1].split()[0]) for ln in lines]
    assert math.isclose(sum(probs), 1.0, rel_tol=1e-10)
    # stable ordering: exporting twice gives identical bytes
    assert text == export_closure(trial)
