"""Compiled inner loop of the population engine.

Mirrors ``engine.step`` operation for operation so both paths produce
bit-identical states; ``tests/test_engine.py`` holds them to that.
"""

import numpy as np
from numba import njit

from . import _formulas as fm

# Row layout of the world state array.
F, FP, FM, FR, C, P = range(6)

_opinion = njit(cache=True)(fm.opinion)
_agreement = njit(cache=True)(fm.agreement)
_dk_r = njit(cache=True)(fm.receiver_knowledge_delta)
_dk_s = njit(cache=True)(fm.sender_knowledge_delta)
_premium = njit(cache=True)(fm.popularity_premium)
_dc_r = njit(cache=True)(fm.receiver_reputation_delta)
_dc_s = njit(cache=True)(fm.sender_reputation_delta)
_mask = njit(cache=True)(fm.equilibrium_mask)
_select = njit(cache=True)(fm.select_cell)
_r_counts = njit(cache=True)(fm.receiver_counts)
_s_counts = njit(cache=True)(fm.sender_counts)


@njit(cache=True)
def _view(state, i, lam, n):
    fc = state[F, i]
    k = (state[FP, i] + state[FM, i] + lam * state[FR, i]) / n
    if fc > 0:
        lp = state[FP, i] / fc
        lm = state[FM, i] / fc
        lr = state[FR, i] / fc
    else:
        lp = 0.0
        lm = 0.0
        lr = 0.0
    return k, state[C, i] / n, fc / n, lp, lm, lr


@njit(cache=True)
def _clip(value, hi):
    return min(max(value, 0.0), hi)


@njit(cache=True)
def clamp_actor(state, i, n, counts):
    touched = False
    for row in range(4):
        v = state[row, i]
        new = _clip(v, n)
        if new != v:
            touched = True
            counts[row] += 1
            state[row, i] = new
    fc = state[F, i]
    total = 0.0 + state[FP, i] + state[FM, i] + state[FR, i]
    if touched or abs(total - fc) > 1e-10:
        if total > 0:
            scale = fc / total
            state[FP, i] = state[FP, i] * scale
            state[FM, i] = state[FM, i] * scale
            state[FR, i] = state[FR, i] * scale
        else:
            state[FP, i] = 0.0
            state[FM, i] = 0.0
            state[FR, i] = fc
    for row in (C, P):
        v = state[row, i]
        new = _clip(v, n)
        if new != v:
            counts[row] += 1
            state[row, i] = new


@njit(cache=True)
def play(state, kappa, sigma, pi, s, r, phi, delta, lam, n, counts):
    """Play one game between sender s and receiver r in place; return the outcome code."""
    if state[F, s] <= 0:
        code = 2
    else:
        k_s, c_s, f_s, sp, sm, sr = _view(state, s, lam, n)
        k_r, c_r, f_r, rp, rm, rr = _view(state, r, lam, n)
        gp, gm, gr = _opinion(k_r, c_s, sp, sm, phi)

        dk_s = _dk_s(c_r, sp, sm, gp, gm, lam)
        dc_s = _dc_s(c_r, sp, sm, gp, gm)
        dp_s = _premium(f_r, _agreement(rp, rm, rr, gp, gm, gr))
        dk_r = _dk_r(f_r, rp, rm, gp, gm, lam)
        dc_r = _dc_r(k_r, c_s, sp, sm, phi)

        us_ff = kappa[s] * dk_s + sigma[s] * dc_s + pi[s] * dp_s
        ur_ff = kappa[r] * dk_r + sigma[r] * dc_r + pi[r] * 1.0
        us_fn = pi[s] * dp_s
        ur_fn = kappa[r] * dk_r - pi[r] * delta
        us_h = -pi[s] * delta
        ur_h = -pi[r] * delta

        cell = _select(_mask(us_ff, us_fn, ur_ff, ur_fn, us_h, ur_h))
        if cell < 0:
            raise RuntimeError("empty equilibrium set")
        code = cell if cell < 2 else 2

        if code == 0:
            d = _s_counts(c_r, sp, sm, sr, gp, gm, gr)
            state[FP, s] = state[FP, s] + d[1]
            state[FM, s] = state[FM, s] + d[2]
            state[FR, s] = state[FR, s] + d[3]
            state[C, s] = state[C, s] + dc_s
            state[P, s] = state[P, s] + dp_s
        elif code == 1:
            state[P, s] = state[P, s] + dp_s
        if code < 2:
            d = _r_counts(f_r, rp, rm, rr, gp, gm, gr)
            state[F, r] = state[F, r] + d[0]
            state[FP, r] = state[FP, r] + d[1]
            state[FM, r] = state[FM, r] + d[2]
            state[FR, r] = state[FR, r] + d[3]
            if code == 0:
                state[C, r] = state[C, r] + dc_r
                state[P, r] = state[P, r] + 1.0
            else:
                state[P, r] = state[P, r] - delta
    if code == 2:
        state[P, s] = state[P, s] - delta
        state[P, r] = state[P, r] - delta
    clamp_actor(state, s, n, counts)
    clamp_actor(state, r, n, counts)
    return code


@njit(cache=True)
def play_many(state, kappa, sigma, pi, senders, receivers, phi, delta, lam, n, counts, outcomes):
    for t in range(senders.shape[0]):
        outcomes[t] = play(
            state, kappa, sigma, pi, senders[t], receivers[t], phi, delta, lam, n, counts
        )


def empty_counts():
    return np.zeros(6, dtype=np.int64)
