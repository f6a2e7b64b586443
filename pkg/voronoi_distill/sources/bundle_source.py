import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from voronoi_distill.core.base import Source
from voronoi_distill.distiller.distiller import DistilledPolicy
from voronoi_distill.envs import ENVIRONMENTS
from voronoi_distill.envs.base import EnvSpec
from voronoi_distill.partition import VoronoiPartition
from voronoi_distill.policies.linear import LinearPolicy
from voronoi_distill.utils.constants import BUNDLE_FORMAT_VERSION, EnvName
from voronoi_distill.utils.exceptions import BundleError, DistillError
from voronoi_distill.utils.utils import setup_logger, to_list

logger = setup_logger(logger_name="voronoi_distill.sources.bundle")


@dataclass
class PolicyBundle:
    """
    Serialized distilled policy: codewords, per-cell linear coefficients,
    bounds and provenance. Arrays are aligned by cell index.
    """

    env: str
    codewords: list
    subpolicies: list
    state_low: list
    state_high: list
    action_low: list
    action_high: list
    provenance: dict = field(default_factory=dict)
    format_version: str = BUNDLE_FORMAT_VERSION

    @classmethod
    def from_policy(cls, policy: DistilledPolicy, spec: EnvSpec, **provenance) -> "PolicyBundle":
        return cls(
            env=spec.name,
            codewords=[to_list(c) for c in policy.partition.coords],
            subpolicies=[{"cell": k, **sub.to_dict()} for k, sub in enumerate(policy.subpolicies)],
            state_low=to_list(spec.state_low),
            state_high=to_list(spec.state_high),
            action_low=to_list(policy.action_low),
            action_high=to_list(policy.action_high),
            provenance=dict(provenance),
        )

    @classmethod
    def from_dict(cls, data: dict) -> "PolicyBundle":
        if not isinstance(data, dict):
            raise BundleError("bundle must be a JSON object")
        version = str(data.get("format_version", ""))
        if version.split(".")[0] != BUNDLE_FORMAT_VERSION.split(".")[0]:
            raise BundleError(f"unsupported bundle format version {version!r}")
        try:
            bundle = cls(
                env=str(data["env"]),
                codewords=data["codewords"],
                subpolicies=data["subpolicies"],
                state_low=data["state_low"],
                state_high=data["state_high"],
                action_low=data["action_low"],
                action_high=data["action_high"],
                provenance=data.get("provenance", {}),
                format_version=version,
            )
        except KeyError as e:
            raise BundleError(f"bundle is missing field {e.args[0]!r}")
        bundle.validate()
        return bundle

    def to_dict(self) -> dict:
        return {
            "format_version": self.format_version,
            "env": self.env,
            "codewords": self.codewords,
            "subpolicies": self.subpolicies,
            "state_low": self.state_low,
            "state_high": self.state_high,
            "action_low": self.action_low,
            "action_high": self.action_high,
            "provenance": self.provenance,
        }

    def validate(self):
        if not self.codewords:
            raise BundleError("bundle holds no codewords")
        if len(self.codewords) != len(self.subpolicies):
            raise BundleError(
                f"{len(self.codewords)} codewords but {len(self.subpolicies)} subpolicies"
            )
        for k, sub in enumerate(self.subpolicies):
            if not isinstance(sub, dict) or sub.get("cell") != k:
                raise BundleError(f"subpolicy entry {k} is not paired with cell {k}")
        try:
            self.spec()
            self.to_policy()
        except BundleError:
            raise
        except (DistillError, ValueError, TypeError, KeyError) as e:
            raise BundleError(f"invalid bundle: {e}")

    def spec(self) -> EnvSpec:
        """The known environment's spec, or a generic one built from the stored bounds."""
        try:
            known = ENVIRONMENTS[EnvName(self.env)]().spec
        except ValueError:
            return EnvSpec(self.env, self.state_low, self.state_high, self.action_low, self.action_high, t_max=1)
        if known.state_dim != len(self.state_low) or known.action_dim != len(self.action_low):
            raise BundleError(
                f"bundle dimensions {len(self.state_low)} -> {len(self.action_low)} "
                f"do not match {self.env}"
            )
        return known

    def to_policy(self) -> DistilledPolicy:
        state_dim = len(self.state_low)
        partition = VoronoiPartition(state_dim, np.array(self.codewords, dtype=float).reshape(-1, state_dim))
        subpolicies = [LinearPolicy.from_dict(sub) for sub in self.subpolicies]
        return DistilledPolicy(partition, subpolicies, self.action_low, self.action_high)


class BundleSource(Source):
    def __init__(self, path: str):
        self.path = Path(path)

    def extract(self) -> PolicyBundle:
        logger.info(f"Loading policy bundle from: {self.path}")
        text = self.path.read_text(encoding="utf-8")
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise BundleError(f"{self.path}: not valid JSON (line {e.lineno}): {e.msg}")
        return PolicyBundle.from_dict(data)


def load_bundle(path: str) -> PolicyBundle:
    return BundleSource(path).extract()
