"""Per-event changes of knowledge, reputation and popularity.

All quantities are expectations over the three things that can happen to a
transmitted assertion (already known and kept, known and relabeled, new).
The count deltas are on the assertion-count scale and reproduce the
knowledge deltas exactly once weighted with the rumor discount.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from . import _formulas
from .evaluation import OpinionAssessment
from .model import NormalizedView

Labels = tuple[float, float, float]


@dataclass(frozen=True)
class CountDeltas:
    d_f: float
    d_plus: float
    d_minus: float
    d_rumor: float

    def weighted(self, lambda_: float) -> float:
        return self.d_plus + self.d_minus + lambda_ * self.d_rumor


@dataclass(frozen=True)
class StateDelta:
    dk: float = 0.0
    dc: float = 0.0
    dp: float = 0.0
    counts: Optional[CountDeltas] = None


def receiver_knowledge_delta(receiver: NormalizedView, g: OpinionAssessment, lambda_: float) -> float:
    return _formulas.receiver_knowledge_delta(
        receiver.f, receiver.f_plus, receiver.f_minus, g.g_plus, g.g_minus, lambda_
    )


def receiver_knowledge_delta_known(receiver: NormalizedView, g: OpinionAssessment, lambda_: float) -> float:
    """Knowledge change when the receiver is known to hold the assertion already.

    Not used by the engine; kept for analysis of relabel-only transmissions.
    """
    return _formulas.receiver_knowledge_delta_known(
        receiver.f, receiver.f_plus, receiver.f_minus, g.g_plus, g.g_minus, lambda_
    )


def sender_knowledge_delta(c_r: float, sender_labels: Labels, g: OpinionAssessment, lambda_: float) -> float:
    return _formulas.sender_knowledge_delta(
        c_r, sender_labels[0], sender_labels[1], g.g_plus, g.g_minus, lambda_
    )


def sender_popularity_premium(receiver: NormalizedView, g: OpinionAssessment) -> float:
    agree = _formulas.agreement(receiver.f_plus, receiver.f_minus, receiver.f_rumor, *g.as_tuple())
    return _formulas.popularity_premium(receiver.f, agree)


def receiver_reputation_delta(k_r: float, c_s: float, sender_labels: Labels, phi: float) -> float:
    """Expected oracle verdict on the receiver's classification."""
    return _formulas.receiver_reputation_delta(k_r, c_s, sender_labels[0], sender_labels[1], phi)


def sender_reputation_delta(c_r: float, sender_labels: Labels, g: OpinionAssessment) -> float:
    # c_r is the normalized reputation; the count-scale C_R would outweigh
    # every other term by a factor of N.
    return _formulas.sender_reputation_delta(c_r, sender_labels[0], sender_labels[1], g.g_plus, g.g_minus)


def receiver_count_deltas(receiver: NormalizedView, g: OpinionAssessment) -> CountDeltas:
    return CountDeltas(
        *_formulas.receiver_counts(receiver.f, receiver.f_plus, receiver.f_minus, receiver.f_rumor, *g.as_tuple())
    )


def sender_count_deltas(c_r: float, sender_labels: Labels, g: OpinionAssessment) -> CountDeltas:
    return CountDeltas(*_formulas.sender_counts(c_r, *sender_labels, *g.as_tuple()))
