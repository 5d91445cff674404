"""Named experiment configurations: troll, expert and mixed communities."""

from __future__ import annotations

from dataclasses import replace

from .engine import KnowledgeGroup, Persona, SimulationConfig
from .model import EXPERT, TROLL, GlobalParams

BASE_PARAMS = GlobalParams(phi=0.8, delta=0.1, lambda_=0.5, big_n=2000)
THIRDS = (KnowledgeGroup(1 / 3, 0.1), KnowledgeGroup(1 / 3, 0.5), KnowledgeGroup(1 / 3, 0.9))

_BASE = SimulationConfig(
    actor_count=1000,
    params=BASE_PARAMS,
    initial_k_groups=THIRDS,
    steps_per_actor=10000.0,
    sample_interval=1.0,
)

PRESETS: dict[str, SimulationConfig] = {
    "troll": replace(_BASE, personas=(Persona("troll", 1.0, TROLL),)),
    "expert": replace(_BASE, personas=(Persona("expert", 1.0, EXPERT),), snapshot_times=(800.0,)),
    "mixed": replace(_BASE, personas=(Persona("expert", 0.5, EXPERT), Persona("troll", 0.5, TROLL))),
}


def preset(name: str, **overrides) -> SimulationConfig:
    try:
        base = PRESETS[name]
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}") from None
    return replace(base, **overrides)
