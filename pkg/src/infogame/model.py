"""Domain types, validation, normalization and the state-clamping policy."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Sequence

SIMPLEX_TOL = 1e-9


@dataclass(frozen=True)
class GlobalParams:
    """System-wide constants shared by every actor.

    phi is the probability that an assertion is intrinsically true, delta the
    popularity decay per unit time, lambda_ the rumor discount and big_n the
    number of assertions in circulation.
    """

    phi: float = 0.8
    delta: float = 0.1
    lambda_: float = 0.5
    big_n: int = 2000

    def to_dict(self) -> dict:
        return {"phi": self.phi, "delta": self.delta, "lambda": self.lambda_, "big_n": self.big_n}

    @classmethod
    def from_dict(cls, data: dict) -> "GlobalParams":
        return cls(
            phi=float(data["phi"]),
            delta=float(data["delta"]),
            lambda_=float(data["lambda"]),
            big_n=int(data["big_n"]),
        )


@dataclass(frozen=True)
class Personality:
    """Convex weights of knowledge, reputation and popularity in the utility."""

    kappa: float
    sigma: float
    pi: float


TROLL = Personality(0.1, 0.1, 0.8)
EXPERT = Personality(0.2, 0.7, 0.1)


@dataclass(frozen=True)
class ActorState:
    f_count: float = 0.0
    f_plus_count: float = 0.0
    f_minus_count: float = 0.0
    f_rumor_count: float = 0.0
    reputation: float = 0.0
    popularity: float = 0.0


def knowledge_count(state: ActorState, lambda_: float) -> float:
    """Self-perceived knowledge K on the count scale; rumors count at weight lambda."""
    return state.f_plus_count + state.f_minus_count + lambda_ * state.f_rumor_count


@dataclass(frozen=True)
class NormalizedView:
    k: float
    c: float
    p: float
    f: float
    f_plus: float
    f_minus: float
    f_rumor: float


@dataclass
class ClampReport:
    clamped_fields: list[str] = field(default_factory=list)
    count: int = 0

    def merge(self, other: "ClampReport") -> None:
        for name in other.clamped_fields:
            if name not in self.clamped_fields:
                self.clamped_fields.append(name)
        self.count += other.count


class ConfigError(ValueError):
    """Raised with the full list of violated invariants."""

    def __init__(self, errors: Sequence[str]):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


def _check_range(errors, name, value, lo=None, hi=None):
    if not isinstance(value, (int, float)) or math.isnan(value):
        errors.append(f"{name} must be a number, got {value!r}")
        return
    if lo is not None and value < lo:
        errors.append(f"{name} below {lo:g}: {value!r}")
    if hi is not None and value > hi:
        errors.append(f"{name} above {hi:g}: {value!r}")


def validate(params: GlobalParams, personas: Sequence[Personality] = ()) -> list[str]:
    """Return every violated invariant; an empty list means the inputs are valid."""
    errors: list[str] = []
    _check_range(errors, "phi", params.phi, 0.0, 1.0)
    _check_range(errors, "lambda", params.lambda_, 0.0, 1.0)
    _check_range(errors, "delta", params.delta, 0.0)
    if isinstance(params.big_n, bool) or not isinstance(params.big_n, int):
        errors.append(f"big_n must be an integer, got {params.big_n!r}")
    elif params.big_n < 2:
        errors.append(f"big_n below 2: {params.big_n!r}")
    for i, persona in enumerate(personas):
        for name in ("kappa", "sigma", "pi"):
            _check_range(errors, f"personas[{i}].{name}", getattr(persona, name), 0.0, 1.0)
        total = persona.kappa + persona.sigma + persona.pi
        if abs(total - 1.0) > SIMPLEX_TOL:
            errors.append(f"personas[{i}] weights sum to {total:g} ≠ 1")
    return errors


def normalize(state: ActorState, params: GlobalParams) -> NormalizedView:
    n = params.big_n
    big_k = knowledge_count(state, params.lambda_)
    fc = state.f_count
    if fc > 0:
        labels = (state.f_plus_count / fc, state.f_minus_count / fc, state.f_rumor_count / fc)
    else:
        labels = (0.0, 0.0, 0.0)
    return NormalizedView(
        k=big_k / n,
        c=state.reputation / n,
        p=state.popularity / n,
        f=fc / n,
        f_plus=labels[0],
        f_minus=labels[1],
        f_rumor=labels[2],
    )


def _clip(value: float, hi: float) -> float:
    return min(max(value, 0.0), hi)


def clamp(state: ActorState, params: GlobalParams) -> tuple[ActorState, ClampReport]:
    """Force a state back inside [0, N] and report which fields had to move.

    Label counts are rescaled to sum to the (clipped) assertion count. Pure
    rounding drift in the label sum is repaired silently and not reported.
    """
    n = float(params.big_n)
    touched: list[str] = []

    def clip(name: str, value: float) -> float:
        new = _clip(value, n)
        if new != value:
            touched.append(name)
        return new

    fc = clip("f_count", state.f_count)
    labels = [
        clip("f_plus_count", state.f_plus_count),
        clip("f_minus_count", state.f_minus_count),
        clip("f_rumor_count", state.f_rumor_count),
    ]
    total = sum(labels)
    if touched or abs(total - fc) > 1e-10:
        if total > 0:
            scale = fc / total
            labels = [x * scale for x in labels]
        else:
            # Nothing to rescale from; treat the known set as rumors.
            labels = [0.0, 0.0, fc]
    fixed = replace(
        state,
        f_count=fc,
        f_plus_count=labels[0],
        f_minus_count=labels[1],
        f_rumor_count=labels[2],
        reputation=clip("reputation", state.reputation),
        popularity=clip("popularity", state.popularity),
    )
    return fixed, ClampReport(clamped_fields=touched, count=len(touched))
