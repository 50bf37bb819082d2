from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np


@dataclass
class EpisodeStreams:
    """Random streams of one episode, all split from a single master seed.

    Each arm owns a reward stream and a posterior-sampling stream, so relabeling
    arms together with their streams relabels the whole episode. The policy
    stream only breaks ties and drives randomized baselines.
    """

    rewards: list[np.random.Generator]
    posterior: list[np.random.Generator]
    policy: np.random.Generator

    @classmethod
    def from_seed(cls, seed: int, n_arms: int) -> EpisodeStreams:
        root = np.random.SeedSequence(seed)
        *arm_seqs, policy_seq = root.spawn(n_arms + 1)
        pairs = [seq.spawn(2) for seq in arm_seqs]
        return cls(
            rewards=[np.random.default_rng(r) for r, _ in pairs],
            posterior=[np.random.default_rng(p) for _, p in pairs],
            policy=np.random.default_rng(policy_seq),
        )

    def permuted(self, order: Sequence[int]) -> EpisodeStreams:
        """Streams for an instance whose arm ``i`` is this instance's ``order[i]``."""
        return EpisodeStreams(
            rewards=[self.rewards[i] for i in order],
            posterior=[self.posterior[i] for i in order],
            policy=self.policy,
        )
