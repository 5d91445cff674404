"""Game-theoretic information dissemination in social networks."""

from .engine import SimulationConfig, World, init_population, run, step
from .game import build_payoff_matrix, enumerate_pure_equilibria, solve_equilibrium
from .model import ActorState, GlobalParams, Personality, clamp, normalize, validate
from .presets import PRESETS, preset

__version__ = "0.1.0"
