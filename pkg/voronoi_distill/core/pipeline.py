from typing import Optional, Sequence

from voronoi_distill.core.base import Destination, Policy
from voronoi_distill.distiller.config import DistillConfig
from voronoi_distill.distiller.distiller import DistillResult, EpochRecord, run_distillation
from voronoi_distill.envs.base import EpisodicEnvironment
from voronoi_distill.evaluation import SpreadStats, evaluate_many, policy_means, spread_stats
from voronoi_distill.sources.bundle_source import PolicyBundle


class _ObservedPipeline:
    def __init__(self):
        self.observers = []

    def add_observer(self, observer):
        self.observers.append(observer)

    def notify_observers(self, message: str, step_type: str = "info", record=None):
        for observer in self.observers:
            observer.update(message, step_type, record)


class DistillationPipeline(_ObservedPipeline):
    """Teacher + environment -> distilled policy bundle (+ event log)."""

    def __init__(
        self,
        config: DistillConfig,
        env: EpisodicEnvironment,
        teacher: Policy,
        destination: Destination,
        event_destination: Optional[Destination] = None,
        teacher_source: str = "",
    ):
        super().__init__()
        self.config = config
        self.env = env
        self.teacher = teacher
        self.destination = destination
        self.event_destination = event_destination
        self.teacher_source = teacher_source

    def _on_epoch(self, record: EpochRecord):
        self.notify_observers(
            f"epoch {record.epoch}: {record.n_cells} cells, episode length {record.episode_length}",
            "epoch",
            record,
        )

    def execute(self) -> DistillResult:
        try:
            self.notify_observers(
                f"Starting distillation on {self.env.spec.name} for {self.config.n_epochs} epochs", "start"
            )
            result = run_distillation(self.config, self.env, self.teacher, on_epoch=self._on_epoch)

            bundle = PolicyBundle.from_policy(
                result.policy,
                self.env.spec,
                seed=self.config.seed,
                config_hash=self.config.config_hash(),
                teacher=self.teacher_source,
            )
            self.destination.load(bundle)
            if self.event_destination is not None:
                self.event_destination.load(result.events())
            self.notify_observers(
                f"Distillation completed: {len(result.policy)} cells, "
                f"{result.n_splits} splits, {result.n_merges} merges",
                "complete",
            )
            return result
        except Exception as e:
            self.notify_observers(f"Distillation failed: {str(e)}", "error")
            raise


class EvaluationPipeline(_ObservedPipeline):
    """Policies -> pooled returns -> spread statistics report."""

    def __init__(
        self,
        policies: Sequence[Policy],
        env: EpisodicEnvironment,
        n_episodes: int,
        seed: int,
        destination: Optional[Destination] = None,
        n_workers: int = 1,
    ):
        super().__init__()
        self.policies = list(policies)
        self.env = env
        self.n_episodes = n_episodes
        self.seed = seed
        self.destination = destination
        self.n_workers = n_workers
        self.returns = []

    @property
    def policy_means(self) -> list[float]:
        """Mean return of each policy, in the order they were given."""
        return policy_means(self.returns, self.n_episodes) if self.returns else []

    def execute(self) -> SpreadStats:
        try:
            self.notify_observers(
                f"Starting evaluation of {len(self.policies)} policies x {self.n_episodes} episodes", "start"
            )
            self.returns = returns = evaluate_many(self.policies, self.env, self.n_episodes, self.seed, self.n_workers)
            stats = spread_stats(returns)
            if self.destination is not None:
                self.destination.load(stats)
            self.notify_observers(
                f"Evaluation completed: mean {stats.mean:.3f}, coverage {stats.coverage:.4f}", "complete"
            )
            return stats
        except Exception as e:
            self.notify_observers(f"Evaluation failed: {str(e)}", "error")
            raise
