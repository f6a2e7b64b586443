import copy
from functools import partial
from typing import Callable, Sequence

import numpy as np
from joblib import Parallel, delayed

from voronoi_distill.core.base import Policy
from voronoi_distill.envs.base import EpisodicEnvironment
from voronoi_distill.utils.utils import episode_rng, setup_logger

logger = setup_logger(logger_name="voronoi_distill.evaluation")

EnvFactory = Callable[[], EpisodicEnvironment]


def episode_return(policy: Policy, env: EpisodicEnvironment, rng: np.random.Generator) -> float:
    """Undiscounted sum of rewards of one episode."""
    state = env.reset(rng)
    total = 0.0
    for _ in range(env.spec.t_max):
        result = env.step(policy.act(state))
        total += result.reward
        if result.terminated or result.truncated:
            break
        state = result.next_state
    return total


def _run_chunk(policy, make_env: EnvFactory, seed: int, episodes: Sequence[int]) -> list[float]:
    env = make_env()
    return [episode_return(policy, env, episode_rng(seed, i)) for i in episodes]


def evaluate(
    policy: Policy,
    env: EpisodicEnvironment,
    n_episodes: int,
    seed: int,
    n_workers: int = 1,
) -> list[float]:
    """Returns of ``n_episodes`` episodes, episode ``i`` drawing from the stream ``(seed, i)``.

    Args:
        policy: Any state -> action policy.
        env: Environment instance; each chunk of episodes runs on a deep copy of it.
        n_episodes: Number of episodes, at least 1.
        seed: Base seed of the per-episode streams.
        n_workers: joblib threads. The result does not depend on it.

    Returns:
        list[float]: Returns in episode order.
    """
    if n_episodes < 1:
        raise ValueError("n_episodes must be at least 1")
    make_env = partial(copy.deepcopy, env)
    if n_workers <= 1:
        returns = _run_chunk(policy, make_env, seed, range(n_episodes))
    else:
        chunks = np.array_split(np.arange(n_episodes), n_workers)
        parts = Parallel(n_jobs=n_workers, backend="threading")(
            delayed(_run_chunk)(policy, make_env, seed, chunk.tolist()) for chunk in chunks if len(chunk)
        )
        returns = [value for part in parts for value in part]
    logger.info(f"Evaluated {n_episodes} episodes (seed {seed}): mean return {np.mean(returns):.3f}")
    return returns


def evaluate_many(
    policies: Sequence[Policy],
    env: EpisodicEnvironment,
    n_episodes: int,
    seed: int,
    n_workers: int = 1,
) -> list[float]:
    """Pools the returns of several policies, each run on the same episode starts."""
    pooled = []
    for policy in policies:
        pooled.extend(evaluate(policy, env, n_episodes, seed, n_workers))
    return pooled
