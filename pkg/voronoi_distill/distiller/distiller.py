"""
Online distillation of a teacher policy into a Voronoi partition of linear
subpolicies.

Every epoch one teacher episode is recorded, its transitions are routed to the
buffer of the cell that contains them and each subpolicy takes a few Adam steps.
On their periods (and only while the partition is editable) the split walk adds
codewords where a subpolicy imitates badly and the merge pass removes codewords
whose subpolicy is redundant with a neighbour's.
"""
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterator, Optional

import numpy as np

from voronoi_distill.core.base import Environment, Policy
from voronoi_distill.distiller.config import DistillConfig
from voronoi_distill.envs.base import EnvSpec
from voronoi_distill.partition import VoronoiPartition
from voronoi_distill.policies.linear import (
    ExperienceBuffer,
    LinearPolicy,
    OptimizerState,
    mse,
    param_distance,
    train_epoch,
)
from voronoi_distill.utils.exceptions import DimensionError, DistillationAborted
from voronoi_distill.utils.utils import as_vector, setup_logger, to_list

logger = setup_logger(logger_name="voronoi_distill.distiller")


@dataclass
class EpisodeTrace:
    """States visited by the teacher and the actions it chose there."""

    states: list = field(default_factory=list)
    actions: list = field(default_factory=list)
    rewards: list = field(default_factory=list)
    terminated: bool = False
    truncated: bool = False

    def __len__(self) -> int:
        return len(self.states)

    def __iter__(self) -> Iterator[tuple[np.ndarray, np.ndarray]]:
        return iter(zip(self.states, self.actions))

    def add(self, state, action, reward: float):
        self.states.append(np.array(state, dtype=float))
        self.actions.append(np.array(action, dtype=float))
        self.rewards.append(float(reward))

    def clear(self):
        self.states.clear()
        self.actions.clear()
        self.rewards.clear()
        self.terminated = self.truncated = False

    @property
    def episode_return(self) -> float:
        return float(sum(self.rewards))


class DistilledPolicy(Policy):
    """
    A partition and one linear subpolicy per cell, kept index-aligned.

    Actions are the cell subpolicy's output clamped to the action bounds.
    """

    def __init__(
        self,
        partition: VoronoiPartition,
        subpolicies: list[LinearPolicy],
        action_low,
        action_high,
    ):
        self.partition = partition
        self.subpolicies = list(subpolicies)
        self.action_low = np.asarray(action_low, dtype=float)
        self.action_high = np.asarray(action_high, dtype=float)
        self.check_aligned()

    @classmethod
    def initial(cls, first_state, policy: LinearPolicy, spec: EnvSpec) -> "DistilledPolicy":
        partition = VoronoiPartition(spec.state_dim, [first_state])
        return cls(partition, [policy], spec.action_low, spec.action_high)

    def __len__(self) -> int:
        return len(self.partition)

    @property
    def state_dim(self) -> int:
        return self.partition.dim

    @property
    def action_dim(self) -> int:
        return self.action_low.shape[0]

    def check_aligned(self):
        if len(self.subpolicies) != len(self.partition):
            raise DimensionError(
                f"{len(self.partition)} codewords but {len(self.subpolicies)} subpolicies"
            )
        for k, policy in enumerate(self.subpolicies):
            if policy.state_dim != self.state_dim or policy.action_dim != self.action_dim:
                raise DimensionError(
                    f"subpolicy {k} maps {policy.state_dim} -> {policy.action_dim}, "
                    f"expected {self.state_dim} -> {self.action_dim}"
                )

    def cell_of(self, state) -> int:
        return self.partition.nearest(state)

    def predict(self, state) -> np.ndarray:
        """Subpolicy output without clamping."""
        return self.subpolicies[self.cell_of(state)].predict(state)

    def act(self, state) -> np.ndarray:
        return np.clip(self.predict(state), self.action_low, self.action_high)

    def add_cell(self, point, policy: LinearPolicy) -> int:
        k = self.partition.insert_codeword(point)
        self.subpolicies.append(policy)
        return k

    def remove_cell(self, k: int):
        self.partition.remove_codeword(k)
        del self.subpolicies[k]

    def copy(self) -> "DistilledPolicy":
        return DistilledPolicy(
            self.partition.copy(),
            [policy.copy() for policy in self.subpolicies],
            self.action_low.copy(),
            self.action_high.copy(),
        )


def act(policy: DistilledPolicy, state) -> np.ndarray:
    return policy.act(state)


@dataclass
class TrainingSlot:
    """Per-cell training state: the experience buffer and the Adam moments."""

    buffer: ExperienceBuffer
    optimizer: OptimizerState

    @classmethod
    def for_policy(cls, policy: LinearPolicy) -> "TrainingSlot":
        return cls(ExperienceBuffer(), OptimizerState.for_policy(policy))


@dataclass
class SplitEvent:
    epoch: int
    step: int
    cell: int
    new_cell: int
    point: list
    mean_loss: float
    distance: float
    reset_cells: list

    def to_dict(self) -> dict:
        return {"event": "split", **asdict(self)}


@dataclass
class MergeEvent:
    """``removed`` is the index before removal, ``kept`` the index after it."""

    epoch: int
    kept: int
    removed: int
    removed_point: list
    distance: float
    reset_cells: list

    def to_dict(self) -> dict:
        return {"event": "merge", **asdict(self)}


@dataclass
class EpochRecord:
    epoch: int
    n_cells: int
    editable: bool
    episode_length: int
    teacher_return: float
    losses: list
    buffer_sizes: list
    splits: list = field(default_factory=list)
    merges: list = field(default_factory=list)
    buffers_reset: bool = False

    def to_dict(self) -> dict:
        return {
            "event": "epoch",
            "epoch": self.epoch,
            "n_cells": self.n_cells,
            "editable": self.editable,
            "episode_length": self.episode_length,
            "teacher_return": self.teacher_return,
            "losses": self.losses,
            "buffer_sizes": self.buffer_sizes,
            "n_splits": len(self.splits),
            "n_merges": len(self.merges),
            "buffers_reset": self.buffers_reset,
        }

    def events(self) -> list[dict]:
        """Epoch summary followed by its split and merge events, in order."""
        return [self.to_dict()] + [e.to_dict() for e in self.splits] + [e.to_dict() for e in self.merges]


@dataclass
class DistillResult:
    policy: DistilledPolicy
    config: DistillConfig
    records: list[EpochRecord]

    @property
    def n_splits(self) -> int:
        return sum(len(r.splits) for r in self.records)

    @property
    def n_merges(self) -> int:
        return sum(len(r.merges) for r in self.records)

    @property
    def final_losses(self) -> list:
        return self.records[-1].losses if self.records else []

    def events(self) -> list[dict]:
        return [event for record in self.records for event in record.events()]

    def summary(self) -> dict:
        return {
            "epochs": len(self.records),
            "cells": len(self.policy),
            "splits": self.n_splits,
            "merges": self.n_merges,
            "config_hash": self.config.config_hash(),
        }


def collect_episode(env: Environment, teacher: Policy, rng: np.random.Generator) -> EpisodeTrace:
    """
    Rolls out ``teacher`` for one episode and records every (state, action).

    An episode ending on its first step yields a one-step trace.
    """
    spec = env.spec
    trace = EpisodeTrace()
    state = env.reset(rng)
    for _ in range(spec.t_max):
        action = as_vector(teacher.act(state), spec.action_dim, name="teacher action")
        result = env.step(action)
        trace.add(state, action, result.reward)
        if result.terminated or result.truncated:
            trace.terminated, trace.truncated = result.terminated, result.truncated
            break
        state = result.next_state
    return trace


def assign_experiences(policy: DistilledPolicy, trace: EpisodeTrace, slots: list[TrainingSlot]):
    if not len(trace):
        return
    cells = policy.partition.nearest_many(np.asarray(trace.states))
    for k, (state, action) in zip(cells, trace):
        slots[k].buffer.add(state, action)


def train_subpolicies(
    policy: DistilledPolicy, slots: list[TrainingSlot], config: DistillConfig, rng: np.random.Generator
) -> list[Optional[float]]:
    """One training round per cell; an empty buffer leaves its subpolicy untouched."""
    settings = config.adam
    return [
        train_epoch(
            sub,
            slot.optimizer,
            slot.buffer,
            config.lr,
            config.batch_size,
            config.max_steps,
            rng,
            settings,
            min_steps=config.min_steps,
        )
        for sub, slot in zip(policy.subpolicies, slots)
    ]


def split_regions(
    policy: DistilledPolicy,
    slots: list[TrainingSlot],
    trace: EpisodeTrace,
    teacher: Policy,
    config: DistillConfig,
    rng: np.random.Generator,
    events: list = None,
    epoch: int = 0,
) -> int:
    """
    Walks the trace and inserts a codeword at each state where the running mean
    imitation loss of the current region exceeds ``max_pol_loss`` and the state
    lies farther than ``min_pol_distance`` (L1) from the region's codeword.

    The running losses restart whenever the walk enters another region; a split
    moves the walk into the new cell. Buffers of the split cell, of its
    neighbours before and after the insertion and of the new cell are emptied.

    Returns:
        Number of codewords inserted.

    Raises:
        DistillationAborted: the partition would exceed ``max_codewords``.
    """
    events = [] if events is None else events
    splits = 0
    region = None
    losses = []
    for t, state in enumerate(trace.states):
        i = policy.cell_of(state)
        if i != region:
            region, losses = i, []
        losses.append(mse(policy.subpolicies[i].predict(state), teacher.act(state)))
        mean_loss = float(np.mean(losses))
        if mean_loss <= config.max_pol_loss:
            continue
        distance = policy.partition.distance(state, i)
        if distance <= config.min_pol_distance:
            continue

        if len(policy) + 1 > config.max_codewords:
            raise DistillationAborted(
                f"splitting at step {t} would exceed max_codewords={config.max_codewords}"
            )
        before = policy.partition.neighbours(i)
        j = policy.add_cell(state, LinearPolicy.init_random(policy.state_dim, policy.action_dim, rng))
        slots.append(TrainingSlot.for_policy(policy.subpolicies[j]))
        reset = before | policy.partition.neighbours(i) | {j}
        if config.split_reset_self:
            reset.add(i)
        for k in reset:
            slots[k].buffer.reset()

        events.append(SplitEvent(epoch, t, i, j, to_list(state), mean_loss, distance, sorted(reset)))
        logger.debug(f"Split cell {i} at step {t}: loss {mean_loss:.3g}, distance {distance:.3g} -> cell {j}")
        splits += 1
        region, losses = j, []
        if config.one_split:
            break
    return splits


def merge_regions(
    policy: DistilledPolicy,
    slots: list[TrainingSlot],
    config: DistillConfig,
    events: list = None,
    epoch: int = 0,
) -> int:
    """
    Removes the codeword of every neighbour whose subpolicy is within
    ``min_param_distance`` (L-infinity over parameters) of a kept cell's.

    Cells are visited in index order; after a removal the kept cell is
    checked again against its recomputed neighbours. A single cell is never
    removed.

    Returns:
        Number of codewords removed.
    """
    events = [] if events is None else events
    merges = 0
    i = 0
    while i < len(policy):
        merged = False
        for j in sorted(policy.partition.neighbours(i)):
            distance = param_distance(policy.subpolicies[i], policy.subpolicies[j])
            if distance >= config.min_param_distance:
                continue
            removed_point = to_list(policy.partition.codeword(j))
            policy.remove_cell(j)
            del slots[j]
            if j < i:
                i -= 1
            reset = {i} | policy.partition.neighbours(i)
            for k in reset:
                slots[k].buffer.reset()
            events.append(MergeEvent(epoch, i, j, removed_point, distance, sorted(reset)))
            logger.debug(f"Merged cell {j} into {i}: parameter distance {distance:.3g}")
            merges += 1
            merged = True
            break
        if not merged:
            i += 1
    return merges


def reset_buffers(slots: list[TrainingSlot]):
    for slot in slots:
        slot.buffer.reset()


def run_distillation(
    config: DistillConfig,
    env: Environment,
    teacher: Policy,
    on_epoch: Callable[[EpochRecord], None] = None,
) -> DistillResult:
    """
    Runs ``config.n_epochs`` epochs and returns the distilled policy.

    The first codeword is the start state of the first episode. All randomness
    comes from one generator seeded with ``config.seed``.

    Raises:
        DimensionError: teacher and environment disagree on dimensions.
        DistillationAborted: the codeword cap was hit.
    """
    config.validate()
    spec = env.spec
    rng = np.random.default_rng(config.seed)
    policy = None
    slots: list[TrainingSlot] = []
    records = []

    for epoch in range(config.n_epochs):
        trace = collect_episode(env, teacher, rng)
        if policy is None:
            first = LinearPolicy.init_random(spec.state_dim, spec.action_dim, rng)
            policy = DistilledPolicy.initial(trace.states[0], first, spec)
            slots = [TrainingSlot.for_policy(first)]

        assign_experiences(policy, trace, slots)
        losses = train_subpolicies(policy, slots, config, rng)

        editable = config.editable(epoch)
        splits, merges, buffers_reset = [], [], False
        if editable:
            if config.split_enabled and (epoch + 1) % config.n_split == 0:
                split_regions(policy, slots, trace, teacher, config, rng, splits, epoch)
            if config.merge_enabled and (epoch + 1) % config.n_merge == 0:
                merge_regions(policy, slots, config, merges, epoch)
            if config.reset_enabled and (epoch + 1) % config.n_reset == 0:
                reset_buffers(slots)
                buffers_reset = True

        record = EpochRecord(
            epoch=epoch,
            n_cells=len(policy),
            editable=editable,
            episode_length=len(trace),
            teacher_return=trace.episode_return,
            losses=losses,
            buffer_sizes=[len(slot.buffer) for slot in slots],
            splits=splits,
            merges=merges,
            buffers_reset=buffers_reset,
        )
        records.append(record)
        if on_epoch is not None:
            on_epoch(record)
        trace.clear()

    logger.info(f"Distillation finished: {len(policy)} cells after {config.n_epochs} epochs")
    return DistillResult(policy, config, records)
