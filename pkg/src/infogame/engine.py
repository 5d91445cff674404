"""Discrete-time population engine.

One directed sender/receiver game is played per step; simulation time is the
number of steps divided by the number of actors. Randomness enters through
population initialization and pair selection only, each on its own PCG64
stream spawned from the configured seed.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable, Iterable, Optional, Sequence, Union

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from . import _kernel
from .game import EquilibriumProfile, PayoffMatrix, ReceiverAction, SenderAction, build_game, solve_equilibrium
from .dynamics import receiver_count_deltas, sender_count_deltas
from .model import (
    SIMPLEX_TOL,
    ActorState,
    ClampReport,
    ConfigError,
    GlobalParams,
    Personality,
    clamp,
    validate,
)

log = logging.getLogger(__name__)

STATE_FIELDS = ("f_count", "f_plus_count", "f_minus_count", "f_rumor_count", "reputation", "popularity")
MAX_INIT_ATTEMPTS = 1000
PAIR_BLOCK = 1 << 16

HOLD_PROFILE = EquilibriumProfile(SenderAction.HOLD, ReceiverAction.NO_FEEDBACK)


@dataclass(frozen=True)
class Persona:
    name: str
    fraction: float
    personality: Personality

    def to_dict(self) -> dict:
        p = self.personality
        return {"name": self.name, "fraction": self.fraction, "kappa": p.kappa, "sigma": p.sigma, "pi": p.pi}

    @classmethod
    def from_dict(cls, data: dict) -> "Persona":
        return cls(
            name=str(data["name"]),
            fraction=float(data["fraction"]),
            personality=Personality(float(data["kappa"]), float(data["sigma"]), float(data["pi"])),
        )


@dataclass(frozen=True)
class KnowledgeGroup:
    fraction: float
    k: float

    def to_dict(self) -> dict:
        return {"fraction": self.fraction, "k": self.k}

    @classmethod
    def from_dict(cls, data: dict) -> "KnowledgeGroup":
        return cls(fraction=float(data["fraction"]), k=float(data["k"]))


Topology = Union[str, dict]


@dataclass(frozen=True)
class SimulationConfig:
    actor_count: int = 1000
    params: GlobalParams = field(default_factory=GlobalParams)
    personas: tuple[Persona, ...] = ()
    initial_k_groups: tuple[KnowledgeGroup, ...] = (
        KnowledgeGroup(1 / 3, 0.1),
        KnowledgeGroup(1 / 3, 0.5),
        KnowledgeGroup(1 / 3, 0.9),
    )
    steps_per_actor: float = 10000.0
    sample_interval: float = 1.0
    snapshot_times: tuple[float, ...] = ()
    seed: int = 0
    # "complete" or {"edge_list": path}
    topology: Topology = "complete"
    bins: int = 50

    @property
    def total_steps(self) -> int:
        return int(round(self.steps_per_actor * self.actor_count))

    def to_dict(self) -> dict:
        return {
            "actor_count": self.actor_count,
            "params": self.params.to_dict(),
            "personas": [p.to_dict() for p in self.personas],
            "initial_k_groups": [g.to_dict() for g in self.initial_k_groups],
            "steps_per_actor": self.steps_per_actor,
            "sample_interval": self.sample_interval,
            "snapshot_times": list(self.snapshot_times),
            "seed": self.seed,
            "topology": self.topology,
            "bins": self.bins,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SimulationConfig":
        known = set(cls.__dataclass_fields__)
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError([f"unknown config field {name!r}" for name in unknown])
        kwargs = dict(data)
        try:
            if "params" in kwargs:
                kwargs["params"] = GlobalParams.from_dict(kwargs["params"])
            if "personas" in kwargs:
                kwargs["personas"] = tuple(Persona.from_dict(p) for p in kwargs["personas"])
            if "initial_k_groups" in kwargs:
                kwargs["initial_k_groups"] = tuple(KnowledgeGroup.from_dict(g) for g in kwargs["initial_k_groups"])
            if "snapshot_times" in kwargs:
                kwargs["snapshot_times"] = tuple(float(t) for t in kwargs["snapshot_times"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError([f"malformed config: {exc!r}"]) from exc
        return cls(**kwargs)


def validate_config(config: SimulationConfig) -> list[str]:
    errors = validate(config.params, [p.personality for p in config.personas])
    if isinstance(config.actor_count, bool) or not isinstance(config.actor_count, int):
        errors.append(f"actor_count must be an integer, got {config.actor_count!r}")
    elif config.actor_count < 2:
        errors.append("actor_count must be ≥ 2")
    if not config.personas:
        errors.append("personas must not be empty")
    total = sum(p.fraction for p in config.personas)
    if config.personas and abs(total - 1.0) > SIMPLEX_TOL:
        errors.append(f"persona fractions sum to {total:g}")
    for i, p in enumerate(config.personas):
        if p.fraction < 0:
            errors.append(f"personas[{i}].fraction below 0: {p.fraction!r}")
    if not config.initial_k_groups:
        errors.append("initial_k_groups must not be empty")
    total = sum(g.fraction for g in config.initial_k_groups)
    if config.initial_k_groups and abs(total - 1.0) > SIMPLEX_TOL:
        errors.append(f"initial_k_groups fractions sum to {total:g}")
    for i, g in enumerate(config.initial_k_groups):
        if g.fraction < 0:
            errors.append(f"initial_k_groups[{i}].fraction below 0: {g.fraction!r}")
        if not 0.0 <= g.k <= 1.0:
            errors.append(f"initial_k_groups[{i}].k outside [0, 1]: {g.k!r}")
    if not config.steps_per_actor >= 0:
        errors.append(f"steps_per_actor below 0: {config.steps_per_actor!r}")
    if not config.sample_interval > 0:
        errors.append(f"sample_interval must be > 0, got {config.sample_interval!r}")
    for t in config.snapshot_times:
        if not t >= 0:
            errors.append(f"snapshot_times entry below 0: {t!r}")
    if isinstance(config.seed, bool) or not isinstance(config.seed, int) or not 0 <= config.seed < 2**64:
        errors.append(f"seed must be an unsigned 64-bit integer, got {config.seed!r}")
    if isinstance(config.bins, bool) or not isinstance(config.bins, int) or config.bins < 1:
        errors.append(f"bins must be a positive integer, got {config.bins!r}")
    topo = config.topology
    if topo != "complete" and not (isinstance(topo, dict) and set(topo) == {"edge_list"}):
        errors.append(f"topology must be 'complete' or {{'edge_list': path}}, got {topo!r}")
    return errors


def check_config(config: SimulationConfig) -> None:
    errors = validate_config(config)
    if errors:
        raise ConfigError(errors)


def read_edge_list(path: Union[str, Path], actor_count: int) -> np.ndarray:
    """Parse an "i j" per line undirected edge list; '#' lines are comments."""
    edges = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ConfigError([f"{path}:{lineno}: expected 'i j', got {line!r}"])
            try:
                i, j = int(parts[0]), int(parts[1])
            except ValueError:
                raise ConfigError([f"{path}:{lineno}: non-integer node index in {line!r}"]) from None
            if not (0 <= i < actor_count and 0 <= j < actor_count):
                raise ConfigError([f"{path}:{lineno}: node index out of range [0, {actor_count})"])
            if i == j:
                raise ConfigError([f"{path}:{lineno}: self-loop on node {i}"])
            edges.append((i, j))
    if not edges:
        raise ConfigError([f"{path}: no edges"])
    arr = np.asarray(edges, dtype=np.int64)
    adj = coo_matrix((np.ones(len(arr)), (arr[:, 0], arr[:, 1])), shape=(actor_count, actor_count))
    n_comp, _ = connected_components(adj, directed=False)
    if n_comp != 1:
        raise ConfigError([f"{path}: network is not connected ({n_comp} components)"])
    return arr


class PairSource:
    """Stream of ordered (sender, receiver) pairs drawn in fixed-size blocks.

    Blocks do not depend on how many pairs are requested at a time, so the
    trajectory is independent of the sampling schedule.
    """

    def __init__(self, rng: np.random.Generator, actor_count: int, edges: Optional[np.ndarray] = None):
        self.rng = rng
        self.n = actor_count
        self.edges = edges
        self._senders = np.empty(0, dtype=np.int64)
        self._receivers = np.empty(0, dtype=np.int64)
        self._pos = 0

    def _refill(self) -> None:
        if self.edges is None:
            s = self.rng.integers(0, self.n, PAIR_BLOCK)
            r = self.rng.integers(0, self.n - 1, PAIR_BLOCK)
            r += r >= s
        else:
            idx = self.rng.integers(0, len(self.edges), PAIR_BLOCK)
            flip = self.rng.integers(0, 2, PAIR_BLOCK)
            s = self.edges[idx, flip]
            r = self.edges[idx, 1 - flip]
        self._senders = np.concatenate([self._senders[self._pos :], s])
        self._receivers = np.concatenate([self._receivers[self._pos :], r])
        self._pos = 0

    def take(self, m: int) -> tuple[np.ndarray, np.ndarray]:
        while len(self._senders) - self._pos < m:
            self._refill()
        s = self._senders[self._pos : self._pos + m]
        r = self._receivers[self._pos : self._pos + m]
        self._pos += m
        return s, r


@dataclass
class World:
    params: GlobalParams
    personas: tuple[Persona, ...]
    persona_index: np.ndarray
    # rows follow STATE_FIELDS, one column per actor
    state: np.ndarray
    initial_k: np.ndarray
    pairs: PairSource
    step_count: int = 0
    clamp_counts: np.ndarray = field(default_factory=_kernel.empty_counts)
    init_fallbacks: int = 0

    def __post_init__(self):
        pers = [self.personas[i].personality for i in self.persona_index]
        self.kappa = np.array([p.kappa for p in pers], dtype=float)
        self.sigma = np.array([p.sigma for p in pers], dtype=float)
        self.pi = np.array([p.pi for p in pers], dtype=float)

    @property
    def actor_count(self) -> int:
        return self.state.shape[1]

    @property
    def sim_time(self) -> float:
        return self.step_count / self.actor_count

    @property
    def clamp_count(self) -> int:
        return int(self.clamp_counts.sum())

    def clamp_report(self) -> ClampReport:
        names = [name for name, c in zip(STATE_FIELDS, self.clamp_counts) if c]
        return ClampReport(clamped_fields=names, count=self.clamp_count)

    def actor(self, i: int) -> ActorState:
        return ActorState(*(float(x) for x in self.state[:, i]))

    def set_actor(self, i: int, st: ActorState) -> None:
        self.state[:, i] = [getattr(st, name) for name in STATE_FIELDS]

    def personality(self, i: int) -> Personality:
        return self.personas[self.persona_index[i]].personality

    def persona_name(self, i: int) -> str:
        return self.personas[self.persona_index[i]].name

    def views(self) -> dict[str, np.ndarray]:
        """Normalized fractions for every actor as arrays."""
        fc, fp, fm, fr, c, p = self.state
        n = self.params.big_n
        safe = np.where(fc > 0, fc, 1.0)
        has = fc > 0
        return {
            "k": (fp + fm + self.params.lambda_ * fr) / n,
            "c": c / n,
            "p": p / n,
            "f": fc / n,
            "f_plus": np.where(has, fp / safe, 0.0),
            "f_minus": np.where(has, fm / safe, 0.0),
            "f_rumor": np.where(has, fr / safe, 0.0),
        }


@dataclass(frozen=True)
class TransmissionRecord:
    step: int
    sim_time: float
    sender_id: int
    receiver_id: int
    profile: EquilibriumProfile
    matrix: Optional[PayoffMatrix] = None


def _exact_assignment(fractions: Sequence[float], n: int, rng: np.random.Generator) -> np.ndarray:
    """Group labels in exact proportions (largest remainder), randomly shuffled."""
    raw = np.asarray(fractions, dtype=float) * n
    counts = np.floor(raw).astype(int)
    short = n - counts.sum()
    order = sorted(range(len(raw)), key=lambda i: (-(raw[i] - counts[i]), i))
    for i in order[:short]:
        counts[i] += 1
    labels = np.repeat(np.arange(len(counts)), counts)
    return rng.permutation(labels)


def initial_counts(k: float, f_plus: float, f_minus: float, params: GlobalParams) -> Optional[tuple[float, float, float, float]]:
    """(F, F+, F-, F°) reaching normalized knowledge k with the given label mix.

    Returns None when the draw cannot reach k without exceeding N assertions.
    """
    lam = params.lambda_
    known = f_plus + f_minus
    if known > 1.0:
        return None
    denom = known + lam * (1.0 - known)
    if k > denom:
        return None
    if k == 0:
        return (0.0, 0.0, 0.0, 0.0)
    fc = k * params.big_n / denom
    fp = f_plus * fc
    fm = f_minus * fc
    return (fc, fp, fm, max(fc - fp - fm, 0.0))


def spawn_streams(seed: int) -> tuple[np.random.Generator, np.random.Generator]:
    """(init, pairs) generators; the spawn order is part of the reproducibility contract."""
    init_seq, pair_seq = np.random.SeedSequence(seed).spawn(2)
    return np.random.Generator(np.random.PCG64(init_seq)), np.random.Generator(np.random.PCG64(pair_seq))


def load_topology(config: SimulationConfig) -> Optional[np.ndarray]:
    if config.topology == "complete":
        return None
    return read_edge_list(config.topology["edge_list"], config.actor_count)


def init_population(config: SimulationConfig, rng: Optional[np.random.Generator] = None) -> World:
    check_config(config)
    init_rng, pair_rng = spawn_streams(config.seed)
    if rng is not None:
        init_rng = rng
    n_act = config.actor_count
    params = config.params
    persona_index = _exact_assignment([p.fraction for p in config.personas], n_act, init_rng)
    group_index = _exact_assignment([g.fraction for g in config.initial_k_groups], n_act, init_rng)
    initial_k = np.array([config.initial_k_groups[g].k for g in group_index], dtype=float)

    state = np.zeros((6, n_act))
    fallbacks = 0
    big_n = float(params.big_n)
    for i in range(n_act):
        k = initial_k[i]
        r, p = init_rng.random(2)
        for _ in range(MAX_INIT_ATTEMPTS):
            fp = init_rng.random()
            fm = 0.5 * init_rng.random()
            counts = initial_counts(k, fp, fm, params)
            if counts is not None:
                break
        else:
            fallbacks += 1
            rest = max(1.0 - fp - fm, 0.0)
            total = fp + fm + rest
            counts = (big_n, big_n * fp / total, big_n * fm / total, big_n * rest / total)
        state[:4, i] = counts
        state[4, i] = r * big_n
        state[5, i] = p * big_n
    if fallbacks:
        log.warning("%d actors could not reach their initial k; set to F = N", fallbacks)

    world = World(
        params=params,
        personas=tuple(config.personas),
        persona_index=persona_index,
        state=state,
        initial_k=initial_k,
        pairs=PairSource(pair_rng, n_act, load_topology(config)),
        init_fallbacks=fallbacks,
    )
    for i in range(n_act):
        fixed, _ = clamp(world.actor(i), params)
        world.set_actor(i, fixed)
    return world


def apply_outcome(
    sender: ActorState,
    receiver: ActorState,
    profile: EquilibriumProfile,
    ctx,
    params: GlobalParams,
) -> tuple[ActorState, ActorState]:
    """Apply the state changes implied by an equilibrium outcome (unclamped)."""
    delta = params.delta
    if profile.sender_action is SenderAction.HOLD:
        return (
            replace(sender, popularity=sender.popularity - delta),
            replace(receiver, popularity=receiver.popularity - delta),
        )
    m = ctx.matrix
    sv, rv, g = ctx.sender_view, ctx.receiver_view, ctx.opinion
    if profile.receiver_action is ReceiverAction.FEEDBACK:
        d = sender_count_deltas(rv.c, (sv.f_plus, sv.f_minus, sv.f_rumor), g)
        sender = replace(
            sender,
            f_plus_count=sender.f_plus_count + d.d_plus,
            f_minus_count=sender.f_minus_count + d.d_minus,
            f_rumor_count=sender.f_rumor_count + d.d_rumor,
            reputation=sender.reputation + m.dc_s,
            popularity=sender.popularity + m.dp_s,
        )
    else:
        sender = replace(sender, popularity=sender.popularity + m.dp_s)
    d = receiver_count_deltas(rv, g)
    receiver = replace(
        receiver,
        f_count=receiver.f_count + d.d_f,
        f_plus_count=receiver.f_plus_count + d.d_plus,
        f_minus_count=receiver.f_minus_count + d.d_minus,
        f_rumor_count=receiver.f_rumor_count + d.d_rumor,
    )
    if profile.receiver_action is ReceiverAction.FEEDBACK:
        receiver = replace(receiver, reputation=receiver.reputation + m.dc_r, popularity=receiver.popularity + 1.0)
    else:
        receiver = replace(receiver, popularity=receiver.popularity - delta)
    return sender, receiver


def _record_clamps(world: World, report: ClampReport) -> None:
    for name in report.clamped_fields:
        world.clamp_counts[STATE_FIELDS.index(name)] += 1


def step(world: World) -> TransmissionRecord:
    """Play one game with the next pair, using the readable (uncompiled) path."""
    (s,), (r,) = world.pairs.take(1)
    s, r = int(s), int(r)
    params = world.params
    sender, receiver = world.actor(s), world.actor(r)
    if sender.f_count <= 0:
        profile, matrix, ctx = HOLD_PROFILE, None, None
    else:
        ctx = build_game(sender, world.personality(s), receiver, world.personality(r), params)
        matrix = ctx.matrix
        profile = solve_equilibrium(matrix)
    sender, receiver = apply_outcome(sender, receiver, profile, ctx, params)
    sender, rep_s = clamp(sender, params)
    receiver, rep_r = clamp(receiver, params)
    _record_clamps(world, rep_s)
    _record_clamps(world, rep_r)
    world.set_actor(s, sender)
    world.set_actor(r, receiver)
    world.step_count += 1
    return TransmissionRecord(world.step_count, world.sim_time, s, r, profile, matrix)


def advance(world: World, steps: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Play ``steps`` games with the compiled kernel.

    Returns (senders, receivers, outcome codes) where codes are 0 for
    forward with feedback, 1 for forward without feedback and 2 for hold.
    """
    senders, receivers = world.pairs.take(steps)
    outcomes = np.empty(steps, dtype=np.int8)
    p = world.params
    _kernel.play_many(
        world.state,
        world.kappa,
        world.sigma,
        world.pi,
        senders,
        receivers,
        float(p.phi),
        float(p.delta),
        float(p.lambda_),
        float(p.big_n),
        world.clamp_counts,
        outcomes,
    )
    world.step_count += steps
    return senders, receivers, outcomes


@dataclass
class EventLog:
    step: np.ndarray
    sender: np.ndarray
    receiver: np.ndarray
    outcome: np.ndarray


@dataclass
class SimulationSummary:
    config: SimulationConfig
    world: World
    quality: list = field(default_factory=list)
    histograms: list = field(default_factory=list)
    snapshots: dict = field(default_factory=dict)
    events: Optional[EventLog] = None

    @property
    def clamp_count(self) -> int:
        return self.world.clamp_count


Observer = Callable[[World], None]


def _schedule(config: SimulationConfig) -> tuple[list[int], set[int], dict[int, float]]:
    n = config.actor_count
    total = config.total_steps
    n_samples = int(math.floor(config.steps_per_actor / config.sample_interval + 1e-9))
    sample_steps = {min(int(round(i * config.sample_interval * n)), total) for i in range(n_samples + 1)}
    sample_steps.add(total)
    snapshot_steps = {}
    for t in config.snapshot_times:
        st = int(round(t * n))
        if st > total:
            log.warning("snapshot time %g is beyond the horizon %g; skipped", t, config.steps_per_actor)
            continue
        snapshot_steps[st] = t
    points = sorted(sample_steps | set(snapshot_steps))
    return points, sample_steps, snapshot_steps


def run(
    config: SimulationConfig,
    observers: Iterable[Observer] = (),
    *,
    log_events: bool = False,
) -> SimulationSummary:
    """Run a full simulation and collect metrics at every sample and snapshot time."""
    from . import metrics

    world = init_population(config)
    summary = SimulationSummary(config=config, world=world)
    observers = list(observers)
    points, sample_steps, snapshot_steps = _schedule(config)
    chunks = []
    for point in points:
        todo = point - world.step_count
        if todo > 0:
            start = world.step_count
            s, r, o = advance(world, todo)
            if log_events:
                chunks.append((np.arange(start + 1, start + todo + 1), s.copy(), r.copy(), o))
        if point in sample_steps:
            summary.quality.append(metrics.quality_summary(world))
            summary.histograms.extend(metrics.knowledge_histogram(world, config.bins))
            for obs in observers:
                obs(world)
        if point in snapshot_steps:
            summary.snapshots[snapshot_steps[point]] = metrics.snapshot(world)
    if log_events:
        if chunks:
            summary.events = EventLog(*(np.concatenate(parts) for parts in zip(*chunks)))
        else:
            empty = np.empty(0, dtype=np.int64)
            summary.events = EventLog(empty, empty, empty, np.empty(0, dtype=np.int8))
    return summary
