import numpy as np
import pytest

from infogame.evaluation import assess_opinion
from infogame.game import (
    CELLS,
    PayoffMatrix,
    ReceiverAction,
    SenderAction,
    build_payoff_matrix,
    combine_payoffs,
    enumerate_pure_equilibria,
    solve_equilibrium,
)
from infogame.model import EXPERT, TROLL, ActorState, GlobalParams, Personality, normalize

DEFAULTS = GlobalParams(0.8, 0.1, 0.5, 2000)


def brute_force(sender, receiver):
    """Weak pure equilibria of an arbitrary 2x2 bimatrix by checking every deviation."""
    out = []
    for i in range(2):
        for j in range(2):
            if sender[i][j] >= sender[1 - i][j] and receiver[i][j] >= receiver[i][1 - j]:
                out.append((f"S{i}", f"R{j}"))
    return out


def matrix(us_ff, us_fn, ur_ff, ur_fn, hs, hr):
    return PayoffMatrix(us_ff, ur_ff, us_fn, ur_fn, hs, hr)


TROLL_RUNNING = combine_payoffs(-0.025, -0.24, 0.815, 0.45, 0.56, TROLL, TROLL, 0.1)
CYCLE = matrix(-0.2, 0.05, 0.5, 0.03, -0.01, -0.01)
ZERO = matrix(0, 0, 0, 0, 0, 0)


class TestPayoffs:
    def test_troll_running_example(self):
        m = TROLL_RUNNING
        assert m.u_s_forward_feedback == pytest.approx(0.6255, abs=1e-12)
        assert m.u_r_forward_feedback == pytest.approx(0.901, abs=1e-12)
        assert m.u_s_forward_nofeedback == pytest.approx(0.652, abs=1e-12)
        assert m.u_r_forward_nofeedback == pytest.approx(-0.035, abs=1e-12)
        assert m.u_s_hold == pytest.approx(-0.08, abs=1e-15)
        assert m.u_r_hold == pytest.approx(-0.08, abs=1e-15)

    def test_all_zero(self):
        # the feedback popularity reward pi_R is not a delta, so it needs pi = 0
        no_pop = Personality(0.5, 0.5, 0.0)
        m = combine_payoffs(0, 0, 0, 0, 0, no_pop, no_pop, 0.0)
        assert m.bimatrix() == ([[0, 0], [0, 0]], [[0, 0], [0, 0]])

    def test_zero_deltas_keep_feedback_reward(self):
        m = combine_payoffs(0, 0, 0, 0, 0, TROLL, EXPERT, 0.0)
        assert m.u_r_forward_feedback == EXPERT.pi
        assert (m.u_s_forward_feedback, m.u_s_forward_nofeedback, m.u_r_forward_nofeedback) == (0, 0, 0)

    def test_hold_cells_per_player(self):
        m = combine_payoffs(0.3, 0.2, 0.1, 0.4, 0.5, Personality(0.1, 0.1, 0.8), Personality(0.8, 0.1, 0.1), 0.1)
        assert m.u_s_hold == pytest.approx(-0.08, abs=1e-15)
        assert m.u_r_hold == pytest.approx(-0.01, abs=1e-15)
        s, r = m.bimatrix()
        assert s[1][0] == s[1][1] and r[1][0] == r[1][1]

    def test_built_from_states_matches_hand_assembly(self):
        sender = ActorState(1000, 600, 200, 200, reputation=1000, popularity=300)
        receiver = ActorState(1000, 400, 200, 400, reputation=1000, popularity=700)
        m = build_payoff_matrix(sender, TROLL, receiver, EXPERT, DEFAULTS)
        # independent assembly straight from the closed-form expressions
        k_r = (400 + 200 + 0.5 * 400) / 2000
        c_s = c_r = 0.5
        f_r, fs, fr = 0.5, (0.6, 0.2, 0.2), (0.4, 0.2, 0.4)
        gp = k_r * 0.8 + (1 - k_r) * c_s * fs[0]
        gm = k_r * 0.2 + (1 - k_r) * c_s * fs[1]
        go = (1 - k_r) * (c_s * fs[2] + 1 - c_s)
        dk_s = c_r * 0.5 * (gp + gm - 0.8)
        dc_s = c_r * ((1 - 2 * gp - 2 * gm) * (1 - 2 * 0.8) - 2 * (0.6 * gp + 0.2 * gm))
        dp_s = 1 - f_r * (gp * fr[0] + gm * fr[1] + go * fr[2])
        dk_r = 0.5 * (1 - f_r) + 0.5 * (gp + gm - f_r * 0.6)
        dc_r = k_r + (1 - k_r) * c_s * 0.6 * 0.4
        assert m.u_s_forward_feedback == pytest.approx(0.1 * dk_s + 0.1 * dc_s + 0.8 * dp_s, abs=1e-12)
        assert m.u_s_forward_nofeedback == pytest.approx(0.8 * dp_s, abs=1e-12)
        assert m.u_r_forward_feedback == pytest.approx(0.2 * dk_r + 0.7 * dc_r + 0.1, abs=1e-12)
        assert m.u_r_forward_nofeedback == pytest.approx(0.2 * dk_r - 0.01, abs=1e-12)
        assert (m.u_s_hold, m.u_r_hold) == pytest.approx((-0.08, -0.01), abs=1e-15)

    def test_empty_sender_rejected(self):
        with pytest.raises(ValueError):
            build_payoff_matrix(ActorState(), TROLL, ActorState(10, 10, 0, 0), TROLL, DEFAULTS)


class TestEquilibria:
    def test_troll_running_example(self):
        assert enumerate_pure_equilibria(TROLL_RUNNING) == [("S0", "R0")]
        prof = solve_equilibrium(TROLL_RUNNING)
        assert (prof.sender_action, prof.receiver_action) == (SenderAction.FORWARD, ReceiverAction.FEEDBACK)
        assert not prof.selected_by_tiebreak

    def test_best_response_cycle(self):
        assert enumerate_pure_equilibria(CYCLE) == [("S1", "R0")]
        prof = solve_equilibrium(CYCLE)
        assert (prof.sender_action, prof.receiver_action) == (SenderAction.HOLD, ReceiverAction.NO_FEEDBACK)

    def test_universal_indifference(self):
        assert enumerate_pure_equilibria(ZERO) == list(CELLS)
        prof = solve_equilibrium(ZERO)
        assert (prof.sender_action, prof.receiver_action) == (SenderAction.FORWARD, ReceiverAction.FEEDBACK)
        assert prof.selected_by_tiebreak

    def test_preference_order_is_configurable(self):
        prof = solve_equilibrium(ZERO, preference=(("S0", "R1"), ("S0", "R0"), ("S1", "R0"), ("S1", "R1")))
        assert (prof.sender_action, prof.receiver_action) == (SenderAction.FORWARD, ReceiverAction.NO_FEEDBACK)

    def test_hold_reported_without_feedback(self):
        m = matrix(-1, -1, 0.5, 0.2, 0, 0)
        assert solve_equilibrium(m).receiver_action is ReceiverAction.NO_FEEDBACK


def random_matrices(rng, n, ties=False):
    vals = rng.uniform(-1, 1, size=(n, 6))
    if ties:
        # snap values to a coarse grid so exact ties are common
        vals = np.round(vals * 2) / 2
        which = rng.integers(0, 3, n)
        vals[which == 0, 0] = vals[which == 0, 4]  # forward+feedback ties hold for the sender
        vals[which == 1, 2] = vals[which == 1, 3]  # receiver indifferent to feedback
        vals[which == 2, 1] = vals[which == 2, 4]
    return vals


def test_enumerator_agrees_with_brute_force():
    rng = np.random.default_rng(5)
    for ties in (False, True):
        for row in random_matrices(rng, 20_000, ties):
            m = matrix(*row)
            s, r = m.bimatrix()
            eq = enumerate_pure_equilibria(m)
            assert eq == brute_force(s, r)
            assert eq
            assert solve_equilibrium(m).equilibrium_set == eq


def test_shift_invariance():
    rng = np.random.default_rng(6)
    for row in random_matrices(rng, 5000, ties=True):
        m = matrix(*row)
        base = solve_equilibrium(m)
        # integer shifts of half-integer payoffs are exact, so ties survive
        ks, kr = (float(x) for x in rng.integers(-3, 4, 2))
        shifted = matrix(row[0] + ks, row[1] + ks, row[2] + kr, row[3] + kr, row[4] + ks, row[5] + kr)
        assert enumerate_pure_equilibria(shifted) == enumerate_pure_equilibria(m)
        got = solve_equilibrium(shifted)
        assert (got.sender_action, got.receiver_action) == (base.sender_action, base.receiver_action)
    for row in random_matrices(rng, 5000):
        m = matrix(*row)
        ks, kr = rng.uniform(-3, 3, 2)
        shifted = matrix(row[0] + ks, row[1] + ks, row[2] + kr, row[3] + kr, row[4] + ks, row[5] + kr)
        assert solve_equilibrium(shifted).code == solve_equilibrium(m).code


def test_forward_feedback_when_both_prefer_it():
    rng = np.random.default_rng(8)
    n = 20_000
    pi_s = rng.random(n)
    delta = rng.random(n)
    for i in range(n):
        hold = -pi_s[i] * delta[i]
        ur_fn = rng.uniform(-1, 1)
        m = matrix(
            hold + rng.uniform(0, 1) * (i % 2),  # exact tie with hold on odd rows
            rng.uniform(-1, 1),
            ur_fn + rng.uniform(1e-9, 1),
            ur_fn,
            hold,
            rng.uniform(-1, 0),
        )
        prof = solve_equilibrium(m)
        assert (prof.sender_action, prof.receiver_action) == (SenderAction.FORWARD, ReceiverAction.FEEDBACK)


def test_opinion_used_once():
    # the matrix must be built from a single opinion assessment
    sender = ActorState(1500, 900, 300, 300, 800, 100)
    receiver = ActorState(500, 200, 100, 200, 1200, 100)
    sv, rv = normalize(sender, DEFAULTS), normalize(receiver, DEFAULTS)
    g = assess_opinion(rv.k, sv.c, (sv.f_plus, sv.f_minus, sv.f_rumor), DEFAULTS.phi)
    m = build_payoff_matrix(sender, TROLL, receiver, TROLL, DEFAULTS)
    agree = g.g_plus * rv.f_plus + g.g_minus * rv.f_minus + g.g_rumor * rv.f_rumor
    assert m.dp_s == 1 - rv.f * agree
