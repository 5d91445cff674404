"""The sender/receiver 2x2 game: payoff construction and equilibrium selection.

Rows are the sender's actions (forward, hold) and columns the receiver's
(feedback, no feedback). Holding yields -pi*delta for both players in either
column; the (hold, feedback) cell cannot happen behaviorally but is kept in
the matrix because its payoffs are what guarantee a pure equilibrium.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from . import _formulas
from .dynamics import (
    receiver_knowledge_delta,
    receiver_reputation_delta,
    sender_knowledge_delta,
    sender_popularity_premium,
    sender_reputation_delta,
)
from .evaluation import OpinionAssessment, assess_opinion
from .model import ActorState, GlobalParams, NormalizedView, Personality, normalize


class SenderAction(str, Enum):
    FORWARD = "Forward"
    HOLD = "Hold"


class ReceiverAction(str, Enum):
    FEEDBACK = "Feedback"
    NO_FEEDBACK = "NoFeedback"


# Cell coordinates, listed in tie-break preference order.
CELLS = (("S0", "R0"), ("S0", "R1"), ("S1", "R0"), ("S1", "R1"))


@dataclass(frozen=True)
class PayoffMatrix:
    u_s_forward_feedback: float
    u_r_forward_feedback: float
    u_s_forward_nofeedback: float
    u_r_forward_nofeedback: float
    u_s_hold: float
    u_r_hold: float
    # raw deltas, for event logs
    dk_s: float = 0.0
    dc_s: float = 0.0
    dp_s: float = 0.0
    dk_r: float = 0.0
    dc_r: float = 0.0

    def bimatrix(self) -> tuple[list[list[float]], list[list[float]]]:
        """(sender, receiver) payoffs indexed [sender_action][receiver_action]."""
        sender = [
            [self.u_s_forward_feedback, self.u_s_forward_nofeedback],
            [self.u_s_hold, self.u_s_hold],
        ]
        receiver = [
            [self.u_r_forward_feedback, self.u_r_forward_nofeedback],
            [self.u_r_hold, self.u_r_hold],
        ]
        return sender, receiver


@dataclass(frozen=True)
class EquilibriumProfile:
    sender_action: SenderAction
    receiver_action: ReceiverAction
    equilibrium_set: list[tuple[str, str]] = field(default_factory=list)
    selected_by_tiebreak: bool = False

    @property
    def code(self) -> int:
        """0 forward+feedback, 1 forward only, 2 hold."""
        if self.sender_action is SenderAction.HOLD:
            return 2
        return 0 if self.receiver_action is ReceiverAction.FEEDBACK else 1


@dataclass(frozen=True)
class GameContext:
    """Everything derived from the two states before the game is played."""

    sender_view: NormalizedView
    receiver_view: NormalizedView
    opinion: OpinionAssessment
    matrix: PayoffMatrix


def combine_payoffs(
    dk_s: float,
    dc_s: float,
    dp_s: float,
    dk_r: float,
    dc_r: float,
    sender_persona: Personality,
    receiver_persona: Personality,
    delta: float,
) -> PayoffMatrix:
    """Weight the per-event deltas by each player's personality.

    Without feedback the sender still earns the popularity premium of the
    transmission, while the receiver learns but neither gains reputation
    nor escapes popularity decay.
    """
    ks, ss, ps = sender_persona.kappa, sender_persona.sigma, sender_persona.pi
    kr, sr, pr = receiver_persona.kappa, receiver_persona.sigma, receiver_persona.pi
    return PayoffMatrix(
        u_s_forward_feedback=ks * dk_s + ss * dc_s + ps * dp_s,
        u_r_forward_feedback=kr * dk_r + sr * dc_r + pr * 1.0,
        u_s_forward_nofeedback=ps * dp_s,
        u_r_forward_nofeedback=kr * dk_r - pr * delta,
        u_s_hold=-ps * delta,
        u_r_hold=-pr * delta,
        dk_s=dk_s,
        dc_s=dc_s,
        dp_s=dp_s,
        dk_r=dk_r,
        dc_r=dc_r,
    )


def build_game(
    sender: ActorState,
    sender_persona: Personality,
    receiver: ActorState,
    receiver_persona: Personality,
    params: GlobalParams,
) -> GameContext:
    if sender.f_count <= 0:
        raise ValueError("sender knows no assertions (f_count = 0)")
    sv = normalize(sender, params)
    rv = normalize(receiver, params)
    labels = (sv.f_plus, sv.f_minus, sv.f_rumor)
    g = assess_opinion(rv.k, sv.c, labels, params.phi)
    lam = params.lambda_

    dk_s = sender_knowledge_delta(rv.c, labels, g, lam)
    dc_s = sender_reputation_delta(rv.c, labels, g)
    dp_s = sender_popularity_premium(rv, g)
    dk_r = receiver_knowledge_delta(rv, g, lam)
    dc_r = receiver_reputation_delta(rv.k, sv.c, labels, params.phi)

    matrix = combine_payoffs(dk_s, dc_s, dp_s, dk_r, dc_r, sender_persona, receiver_persona, params.delta)
    return GameContext(sv, rv, g, matrix)


def build_payoff_matrix(
    sender: ActorState,
    sender_persona: Personality,
    receiver: ActorState,
    receiver_persona: Personality,
    params: GlobalParams,
) -> PayoffMatrix:
    return build_game(sender, sender_persona, receiver, receiver_persona, params).matrix


def _mask(m: PayoffMatrix) -> int:
    return _formulas.equilibrium_mask(
        m.u_s_forward_feedback,
        m.u_s_forward_nofeedback,
        m.u_r_forward_feedback,
        m.u_r_forward_nofeedback,
        m.u_s_hold,
        m.u_r_hold,
    )


def enumerate_pure_equilibria(m: PayoffMatrix) -> list[tuple[str, str]]:
    """All cells where neither player gains strictly by deviating alone."""
    mask = _mask(m)
    return [cell for i, cell in enumerate(CELLS) if mask & (1 << i)]


def solve_equilibrium(m: PayoffMatrix, preference: tuple = CELLS) -> EquilibriumProfile:
    """Pick one weak equilibrium; ties go to forwarding and to giving feedback.

    A selected hold cell is reported as (Hold, NoFeedback) since feedback on
    an unsent message cannot happen.
    """
    eq = enumerate_pure_equilibria(m)
    if not eq:
        raise RuntimeError(f"no pure equilibrium found for {m!r}")
    sender_cell, receiver_cell = next(cell for cell in preference if cell in eq)
    if sender_cell == "S1":
        actions = (SenderAction.HOLD, ReceiverAction.NO_FEEDBACK)
    elif receiver_cell == "R0":
        actions = (SenderAction.FORWARD, ReceiverAction.FEEDBACK)
    else:
        actions = (SenderAction.FORWARD, ReceiverAction.NO_FEEDBACK)
    return EquilibriumProfile(*actions, equilibrium_set=eq, selected_by_tiebreak=len(eq) > 1)
