"""Scalar per-event formulas.

Plain float-in/float-out functions with no calls between them, so the same
source serves the dataclass API and is compiled with ``numba.njit`` by the
engine kernel.
"""


def opinion(k_r, c_s, fs_plus, fs_minus, phi):
    g_plus = k_r * phi + (1.0 - k_r) * c_s * fs_plus
    g_minus = k_r * (1.0 - phi) + (1.0 - k_r) * c_s * fs_minus
    # Equals (1-k)(c*f_rumor + 1 - c) when the sender labels sum to one.
    g_rumor = 1.0 - g_plus - g_minus
    if g_rumor < 0.0:
        g_rumor = 0.0
    return g_plus, g_minus, g_rumor


def agreement(fr_plus, fr_minus, fr_rumor, g_plus, g_minus, g_rumor):
    """Probability that a known assertion keeps its existing label."""
    return g_plus * fr_plus + g_minus * fr_minus + g_rumor * fr_rumor


def receiver_knowledge_delta(f_r, fr_plus, fr_minus, g_plus, g_minus, lam):
    return lam * (1.0 - f_r) + (1.0 - lam) * (g_minus + g_plus - f_r * (fr_plus + fr_minus))


def receiver_knowledge_delta_known(f_r, fr_plus, fr_minus, g_plus, g_minus, lam):
    return (1.0 - lam) * (g_minus + g_plus - f_r * (fr_plus + fr_minus))


def sender_knowledge_delta(c_r, fs_plus, fs_minus, g_plus, g_minus, lam):
    return c_r * (1.0 - lam) * (g_minus + g_plus - (fs_plus + fs_minus))


def popularity_premium(f_r, agree):
    return 1.0 - f_r * agree


def receiver_reputation_delta(k_r, c_s, fs_plus, fs_minus, phi):
    return k_r + (1.0 - k_r) * (c_s * (2.0 * phi - 1.0) * (fs_plus - fs_minus))


def sender_reputation_delta(c_r, fs_plus, fs_minus, g_plus, g_minus):
    return c_r * (
        (1.0 - 2.0 * g_plus - 2.0 * g_minus) * (1.0 - 2.0 * fs_plus - 2.0 * fs_minus)
        - 2.0 * (fs_plus * g_plus + fs_minus * g_minus)
    )


def equilibrium_mask(us_ff, us_fn, ur_ff, ur_fn, us_hold, ur_hold):
    """Weak pure equilibria of the 2x2 game as a 4-bit mask.

    Bit order follows the cell order (S0,R0), (S0,R1), (S1,R0), (S1,R1).
    """
    mask = 0
    if us_ff >= us_hold and ur_ff >= ur_fn:
        mask |= 1
    if us_fn >= us_hold and ur_fn >= ur_ff:
        mask |= 2
    # Under S1 the receiver is indifferent, so only the sender can deviate.
    if us_hold >= us_ff:
        mask |= 4
    if us_hold >= us_fn:
        mask |= 8
    return mask


def select_cell(mask):
    """Index of the first equilibrium cell in preference order, -1 if none."""
    for i in range(4):
        if mask & (1 << i):
            return i
    return -1


def receiver_counts(f_r, fr_plus, fr_minus, fr_rumor, g_plus, g_minus, g_rumor):
    # Expected post-event label mix is g; the prior label mass leaves at rate f_r.
    return (
        1.0 - f_r,
        g_plus - f_r * fr_plus,
        g_minus - f_r * fr_minus,
        g_rumor - f_r * fr_rumor,
    )


def sender_counts(c_r, fs_plus, fs_minus, fs_rumor, g_plus, g_minus, g_rumor):
    return (
        0.0,
        c_r * (g_plus - fs_plus),
        c_r * (g_minus - fs_minus),
        c_r * (g_rumor - fs_rumor),
    )
