import json
import xml.etree.ElementTree as ET

import numpy as np
import pandas as pd
import pytest
from conftest import ConstantPolicy

from voronoi_distill.core.observer import DistillObserver
from voronoi_distill.core.pipeline import DistillationPipeline, EvaluationPipeline
from voronoi_distill.destinations import (
    BundleDestination,
    CSVDestination,
    EventLogDestination,
    JsonDestination,
    PartitionDiagram,
    SvgDestination,
)
from voronoi_distill.distiller import DistillConfig, DistilledPolicy
from voronoi_distill.envs import EnvSpec, SimpleGoalEnv, mountaincar, simplegoal
from voronoi_distill.evaluation import evaluate, heatmap_data, quiver_data
from voronoi_distill.partition import VoronoiPartition
from voronoi_distill.policies import LinearPolicy
from voronoi_distill.sources import BundleSource, PolicyBundle, ReturnsSource, load_bundle
from voronoi_distill.teachers import MountainCarEnergy, SimpleGoalPotentialField
from voronoi_distill.utils.exceptions import BundleError, ConfigError
from voronoi_distill.utils.reference import reference_policy


@pytest.fixture
def reference_bundle():
    return PolicyBundle.from_policy(reference_policy("simplegoal-v0"), simplegoal.SPEC, source="reference")


def bundle_dict(bundle, **changes):
    data = bundle.to_dict()
    data.update(changes)
    return data


class TestPolicyBundle:
    def test_save_load_save_is_identical(self, tmp_path, reference_bundle):
        first, second = tmp_path / "a.json", tmp_path / "b.json"
        BundleDestination(str(first)).load(reference_bundle)
        BundleDestination(str(second)).load(load_bundle(str(first)))
        assert first.read_bytes() == second.read_bytes()

    def test_reloaded_policy_acts_identically(self, tmp_path, reference_bundle):
        path = tmp_path / "bundle.json"
        BundleDestination(str(path)).load(reference_bundle)
        original, reloaded = reference_bundle.to_policy(), load_bundle(str(path)).to_policy()
        for state in np.random.default_rng(0).uniform(size=(200, 2)):
            np.testing.assert_array_equal(original.act(state), reloaded.act(state))

    def test_reference_cell(self, reference_bundle):
        policy = reference_bundle.to_policy()
        assert policy.cell_of([0.40, 0.20]) == 2
        assert policy.act([0.40, 0.20])[0] == pytest.approx(-0.365)
        assert policy.predict([0.40, 0.20])[1] == pytest.approx(-1.5354)
        assert policy.act([0.40, 0.20])[1] == -1.0

    def test_reference_sizes(self):
        assert len(reference_policy("simplegoal-v0")) == 13
        assert len(reference_policy("MountainCarContinuous-v0")) == 32

    @pytest.mark.parametrize("version", ["2", "", "0.9"])
    def test_rejects_other_major_versions(self, reference_bundle, version):
        with pytest.raises(BundleError, match="version"):
            PolicyBundle.from_dict(bundle_dict(reference_bundle, format_version=version))

    def test_accepts_minor_revision(self, reference_bundle):
        bundle = PolicyBundle.from_dict(bundle_dict(reference_bundle, format_version="1.3"))
        assert len(bundle.codewords) == 13

    def test_missing_field(self, reference_bundle):
        data = reference_bundle.to_dict()
        del data["codewords"]
        with pytest.raises(BundleError, match="codewords"):
            PolicyBundle.from_dict(data)

    def test_misaligned_subpolicies(self, reference_bundle):
        data = reference_bundle.to_dict()
        data["subpolicies"] = data["subpolicies"][:-1]
        with pytest.raises(BundleError, match="13 codewords but 12"):
            PolicyBundle.from_dict(data)

    def test_cell_pairing(self, reference_bundle):
        data = reference_bundle.to_dict()
        data["subpolicies"][0]["cell"] = 5
        with pytest.raises(BundleError, match="cell 0"):
            PolicyBundle.from_dict(data)

    def test_malformed_weights(self, reference_bundle):
        data = reference_bundle.to_dict()
        data["subpolicies"][3]["weights"] = [[1.0, 2.0, 3.0]]
        with pytest.raises(BundleError):
            PolicyBundle.from_dict(data)

    def test_dimensions_must_match_known_env(self, reference_bundle):
        with pytest.raises(BundleError, match="do not match"):
            PolicyBundle.from_dict(bundle_dict(reference_bundle, action_low=[-1.0], action_high=[1.0]))

    def test_unknown_env_gets_generic_spec(self):
        partition = VoronoiPartition(3, [[0.0, 0.0, 0.0]])
        policy = DistilledPolicy(partition, [LinearPolicy.zeros(3, 1)], [-2.0], [2.0])
        spec = EnvSpec("custom-v0", [0, 0, 0], [1, 1, 1], [-2.0], [2.0], t_max=10)
        bundle = PolicyBundle.from_dict(PolicyBundle.from_policy(policy, spec).to_dict())
        assert bundle.spec().state_dim == 3
        assert bundle.spec().name == "custom-v0"

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "bundle.json"
        path.write_text("{not json")
        with pytest.raises(BundleError, match="line 1"):
            BundleSource(str(path)).extract()

    def test_provenance_is_kept(self, reference_bundle):
        assert PolicyBundle.from_dict(reference_bundle.to_dict()).provenance == {"source": "reference"}


@pytest.mark.slow
def test_reference_policy_replay():
    returns = evaluate(reference_policy("simplegoal-v0"), SimpleGoalEnv(), 1000, seed=0)
    assert np.mean(returns) >= 8.0


class TestReturnsSource:
    def test_json_array(self, tmp_path):
        path = tmp_path / "returns.json"
        path.write_text("[1.5, -2, 3e1]")
        assert ReturnsSource(str(path)).extract() == [1.5, -2.0, 30.0]

    def test_lines(self, tmp_path):
        path = tmp_path / "returns.txt"
        path.write_text("1.0\n\n2.5\n-3\n")
        assert ReturnsSource(str(path)).extract() == [1.0, 2.5, -3.0]

    @pytest.mark.parametrize("text", ["", "1.0\nabc\n", '["x"]'])
    def test_rejects_bad_input(self, tmp_path, text):
        path = tmp_path / "returns.txt"
        path.write_text(text)
        with pytest.raises(ConfigError) as info:
            ReturnsSource(str(path)).extract()
        assert info.value.key == "returns"


class TestDestinations:
    def test_event_log(self, tmp_path):
        path = tmp_path / "out" / "events.jsonl"
        EventLogDestination(str(path)).load([{"b": 1, "a": [0.5]}, {"event": "merge"}])
        lines = path.read_text().splitlines()
        assert lines == ['{"a": [0.5], "b": 1}', '{"event": "merge"}']

    def test_empty_event_log(self, tmp_path):
        path = tmp_path / "events.jsonl"
        EventLogDestination(str(path)).load([])
        assert path.read_text() == ""

    def test_json_report(self, tmp_path):
        path = tmp_path / "report.json"
        JsonDestination(str(path)).load({"mean": 1.5})
        assert json.loads(path.read_text()) == {"mean": 1.5}
        assert path.read_text().endswith("\n")

    def test_csv_grid(self, tmp_path):
        path = tmp_path / "viz" / "quiver.csv"
        grid = quiver_data(reference_policy("simplegoal-v0"), simplegoal.SPEC, resolution=10)
        CSVDestination(str(path)).load(grid)
        frame = pd.read_csv(path)
        assert len(frame) == 100
        assert list(frame.columns) == ["x", "y", "dx", "dy", "cell"]

    def test_svg_partition(self, tmp_path):
        path = tmp_path / "partition.svg"
        policy = reference_policy("simplegoal-v0")
        grid = quiver_data(policy, simplegoal.SPEC, resolution=12)
        SvgDestination(str(path)).load(PartitionDiagram(grid, simplegoal.SPEC, policy.partition.coords, "simplegoal"))
        root = ET.parse(path).getroot()
        ns = "{http://www.w3.org/2000/svg}"
        assert root.tag == f"{ns}svg"
        assert len(root.find(f"{ns}g[@id='squares']")) == 144
        assert len(root.find(f"{ns}g[@id='codewords']")) == 13
        assert root.find(f"{ns}g[@id='borders']") is not None
        assert root.find(f"{ns}g[@id='arrows']") is not None

    def test_svg_heatmap(self, tmp_path):
        path = tmp_path / "heat.svg"
        grid = heatmap_data(MountainCarEnergy(), mountaincar.SPEC, resolution=8)
        SvgDestination(str(path)).load(PartitionDiagram(grid, mountaincar.SPEC))
        root = ET.parse(path).getroot()
        fills = {rect.get("fill") for rect in root.iter("{http://www.w3.org/2000/svg}rect")}
        assert fills == {"#ff0000", "#0000ff"}


class RecordingDestination:
    def __init__(self):
        self.loaded = []

    def load(self, data):
        self.loaded.append(data)


class FailingDestination:
    def load(self, data):
        raise OSError("disk full")


class TestPipelines:
    def config(self):
        return DistillConfig.from_mapping({"n_epochs": 12, "n_split": 4, "n_merge": 6, "n_freeze": 3, "seed": 2})

    def test_distillation_pipeline(self):
        bundles, events = RecordingDestination(), RecordingDestination()
        observer = DistillObserver()
        pipeline = DistillationPipeline(
            self.config(), SimpleGoalEnv(), SimpleGoalPotentialField(), bundles, events, "oracle:simplegoal_potential_field"
        )
        pipeline.add_observer(observer)
        result = pipeline.execute()

        bundle = bundles.loaded[0]
        assert bundle.provenance["seed"] == 2
        assert bundle.provenance["config_hash"] == self.config().config_hash()
        assert bundle.provenance["teacher"] == "oracle:simplegoal_potential_field"
        assert len(bundle.codewords) == len(result.policy)
        assert events.loaded[0] == result.events()

        metrics = observer.get_metrics()
        assert metrics["epochs"] == 12
        assert metrics["cells"] == len(result.policy)
        assert metrics["splits"] == result.n_splits
        assert "duration" in metrics
        assert metrics["merges"] == result.n_merges

    def test_failure_is_reported_and_raised(self):
        observer = DistillObserver()
        pipeline = DistillationPipeline(self.config(), SimpleGoalEnv(), SimpleGoalPotentialField(), FailingDestination())
        pipeline.add_observer(observer)
        with pytest.raises(OSError):
            pipeline.execute()
        assert observer.get_metrics()["errors"] == ["Distillation failed: disk full"]

    def test_evaluation_pipeline(self):
        reports = RecordingDestination()
        pipeline = EvaluationPipeline([ConstantPolicy([0.0, 0.0])] * 2, SimpleGoalEnv(), 5, seed=0, destination=reports)
        stats = pipeline.execute()
        assert stats.sample_count == 10
        assert pipeline.returns == [0.0] * 10
        assert pipeline.policy_means == [0.0, 0.0]
        assert reports.loaded == [stats]
