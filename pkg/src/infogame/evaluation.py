"""How a receiver classifies an incoming assertion."""

from __future__ import annotations

from dataclasses import dataclass

from . import _formulas
from .model import NormalizedView


@dataclass(frozen=True)
class OpinionAssessment:
    """Probabilities that the receiver labels the assertion true, false or rumor."""

    g_plus: float
    g_minus: float
    g_rumor: float

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.g_plus, self.g_minus, self.g_rumor)


@dataclass(frozen=True)
class ScenarioProbabilities:
    p_discard: float
    p_relabel: float
    p_new: float


def assess_opinion(
    k_r: float,
    c_s: float,
    sender_labels: tuple[float, float, float],
    phi: float,
) -> OpinionAssessment:
    """Blend the receiver's own judgement with the sender's opinion.

    The receiver's knowledge fraction weights the intrinsic truth rate phi
    against the sender's label distribution discounted by the sender's
    reputation. ``k_r = 1`` gives (phi, 1 - phi, 0); ``k_r = 0`` trusts the
    sender alone.
    """
    if not any(sender_labels):
        raise ValueError("sender knows no assertions and cannot transmit")
    fs_plus, fs_minus, _ = sender_labels
    return OpinionAssessment(*_formulas.opinion(k_r, c_s, fs_plus, fs_minus, phi))


def scenario_probabilities(receiver: NormalizedView, g: OpinionAssessment) -> ScenarioProbabilities:
    agree = _formulas.agreement(receiver.f_plus, receiver.f_minus, receiver.f_rumor, *g.as_tuple())
    p_discard = receiver.f * agree
    return ScenarioProbabilities(
        p_discard=p_discard,
        p_relabel=receiver.f - p_discard,
        p_new=1.0 - receiver.f,
    )
