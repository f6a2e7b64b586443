import functools
from pathlib import Path

import click
from dotenv import load_dotenv
from rich.console import Console
from rich.markup import escape
from rich.panel import Panel
from rich.progress import Progress, SpinnerColumn, TextColumn
from rich.table import Table

from voronoi_distill.core import DistillObserver
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
from voronoi_distill.envs import make_env
from voronoi_distill.evaluation import heatmap_data, quiver_data, spread_stats, success_rate
from voronoi_distill.policies.formula import format_formula
from voronoi_distill.sources import PolicyBundle, ReturnsSource, load_bundle
from voronoi_distill.teachers import make_teacher
from voronoi_distill.utils import RunConfig, setup_logger
from voronoi_distill.utils.constants import FormulaStyle, FreezeMode
from voronoi_distill.utils.exceptions import (
    BundleError,
    ConfigError,
    DimensionError,
    DistillationAborted,
    TeacherFormatError,
)
from voronoi_distill.utils.reference import reference_policy

console = Console()
logger = setup_logger(logger_name="voronoi_distill.cli")

BUNDLE_FILE = "bundle.json"
EVENTS_FILE = "events.jsonl"
REPORT_FILE = "report.json"
QUIVER_FILE = "quiver.csv"
HEATMAP_FILE = "heatmap.csv"
DIAGRAM_FILE = "partition.svg"

USAGE_ERRORS = (ConfigError, BundleError, TeacherFormatError, DimensionError, FileNotFoundError)


def process_with_progress(func, *args, **kwargs):
    """Runs ``func`` under a spinner and returns its result.

    Args:
        func (callable): The function to run
        *args: Positional arguments for ``func``
        **kwargs: Keyword arguments for ``func``
    """
    with Progress(
        SpinnerColumn(),
        TextColumn("[progress.description]{task.description}"),
        console=console,
    ) as progress:
        progress.add_task(description=f"Running {func.__name__}...", total=None)
        return func(*args, **kwargs)


def exit_codes(command):
    """Maps configuration and input errors to exit 2, aborted runs to exit 3."""

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except USAGE_ERRORS as e:
            key = getattr(e, "key", None)
            where = f" [{key}]" if key else ""
            console.print(f"[bold red]Error{escape(where)}: {escape(str(e))}", highlight=False)
            logger.error(f"{type(e).__name__}{where}: {e}")
            raise SystemExit(2)
        except DistillationAborted as e:
            console.print(f"[bold red]Distillation aborted: {escape(str(e))}", highlight=False)
            logger.error(f"Distillation aborted: {e}")
            raise SystemExit(3)

    return wrapper


def load_run_config(config_path, **flags) -> RunConfig:
    """File values over defaults, flags over file values."""
    run = RunConfig.from_file(config_path) if config_path else RunConfig()
    return run.override(**flags)


def distill_config(run: RunConfig) -> DistillConfig:
    return DistillConfig.for_environment(run.env, **{**run.distill, "seed": run.seed})


def shared_options(func):
    options = [
        click.option("--config", "config_path", type=click.Path(), help="JSON config file"),
        click.option("--seed", type=int, help="Random seed"),
        click.option("--out", type=click.Path(), help="Output directory"),
        click.option("--env", "env_name", help="simplegoal-v0 or mountaincarcontinuous-v0"),
        click.option("--teacher", help="oracle:<tag> or file:<path>"),
        click.option(
            "--freeze-mode",
            type=click.Choice([m.value for m in FreezeMode]),
            help="Which epochs keep the partition fixed",
        ),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def run_distillation_pipeline(run: RunConfig, config: DistillConfig):
    """Builds environment and teacher, distils, writes bundle and event log."""
    env = make_env(run.env)
    source = run.teacher_source()
    teacher = make_teacher(source, env.spec)
    out = Path(run.out)
    pipeline = DistillationPipeline(
        config,
        env,
        teacher,
        BundleDestination(out / BUNDLE_FILE),
        EventLogDestination(out / EVENTS_FILE),
        teacher_source=source,
    )
    pipeline.add_observer(DistillObserver())
    return pipeline.execute()


def run_evaluation_pipeline(policies, env, run: RunConfig):
    pipeline = EvaluationPipeline(policies, env, run.episodes, run.seed, n_workers=run.n_workers)
    pipeline.add_observer(DistillObserver())
    stats = pipeline.execute()
    return stats, pipeline.returns, pipeline.policy_means


def load_policy(run: RunConfig, bundle_path: str = None):
    """(policy, spec) from a bundle, else from the configured teacher."""
    if bundle_path:
        bundle = load_bundle(bundle_path)
        return bundle.to_policy(), bundle.spec()
    spec = make_env(run.env).spec
    return make_teacher(run.teacher_source(), spec), spec


def _print_stats(report: dict):
    table = Table(title="Spread of returns")
    table.add_column("statistic")
    table.add_column("value", justify="right")
    keys = (
        "sample_count", "min", "max", "mean", "std", "q1", "median", "q3", "iqr",
        "outlier_count", "lower_outlier_count", "upper_outlier_count", "coverage",
    )
    for key in keys:
        value = report[key]
        table.add_row(key, f"{value:.4f}" if isinstance(value, float) else str(value))
    console.print(table)


@click.group()
def cli():
    """Distils black-box control policies into Voronoi cells of linear subpolicies.

    Usage:
        # Distil the built-in SimpleGoal oracle
        python -m voronoi_distill distill --env simplegoal-v0 --out runs/sg

        # Evaluate the result over 1000 seeded episodes
        python -m voronoi_distill eval --bundle runs/sg/bundle.json --out runs/sg

        # Print codewords and formulas, render the partition
        python -m voronoi_distill inspect runs/sg/bundle.json
        python -m voronoi_distill viz --bundle runs/sg/bundle.json --out runs/sg
    """
    load_dotenv()
    console.print(Panel.fit("Voronoi policy distillation", border_style="blue"))


@cli.command()
@shared_options
@exit_codes
def distill(config_path, seed, out, env_name, teacher, freeze_mode):
    """Distils the teacher and writes the policy bundle and the event log."""
    run = load_run_config(config_path, env=env_name, teacher=teacher, seed=seed, out=out, freeze_mode=freeze_mode)
    config = distill_config(run)
    result = process_with_progress(run_distillation_pipeline, run, config)

    summary = result.summary()
    console.print(
        Panel.fit(
            f"cells: {summary['cells']}\nsplits: {summary['splits']}\nmerges: {summary['merges']}\n"
            f"epochs: {summary['epochs']}\nbundle: {Path(run.out) / BUNDLE_FILE}",
            title="Distillation summary",
            border_style="green",
        )
    )
    console.print("[bold green]Distillation completed!")


@cli.command(name="eval")
@shared_options
@click.option("--bundle", "bundles", multiple=True, type=click.Path(), help="Policy bundle; repeat to pool")
@click.option("--returns", "returns_path", type=click.Path(), help="Precomputed returns, JSON array or one per line")
@click.option("--episodes", type=int, help="Episodes per policy")
@click.option("--workers", "n_workers", type=int, help="Evaluation threads")
@exit_codes
def evaluate_command(config_path, seed, out, env_name, teacher, freeze_mode, bundles, returns_path, episodes, n_workers):
    """Evaluates bundles (pooled) or a teacher and writes the spread statistics report."""
    run = load_run_config(
        config_path, env=env_name, teacher=teacher, seed=seed, out=out, episodes=episodes, n_workers=n_workers
    )
    if run.episodes < 1:
        raise ConfigError("episodes must be at least 1", key="episodes")

    if returns_path:
        returns = ReturnsSource(returns_path).extract()
        report = {"source": str(returns_path), **spread_stats(returns).to_dict()}
    else:
        if bundles:
            loaded = [load_bundle(path) for path in bundles]
            env = make_env(env_name or loaded[0].env)
            policies = [bundle.to_policy() for bundle in loaded]
        else:
            env = make_env(run.env)
            policies = [make_teacher(run.teacher_source(), env.spec)]
        stats, returns, means = process_with_progress(run_evaluation_pipeline, policies, env, run)
        report = {
            "env": env.spec.name,
            "episodes": run.episodes,
            "policies": len(policies),
            "seed": run.seed,
            **stats.to_dict(),
            "policy_means": means,
        }
    report["success_rate"] = success_rate(returns)

    JsonDestination(Path(run.out) / REPORT_FILE).load(report)
    _print_stats(report)
    console.print(f"[bold green]Report written to {Path(run.out) / REPORT_FILE}")


@cli.command(name="inspect")
@click.argument("bundle_path", type=click.Path())
@click.option("--style", type=click.Choice([s.value for s in FormulaStyle]), default=FormulaStyle.COMPACT.value)
@click.option("--plain", is_flag=True, help="Tab-separated output instead of a table")
@exit_codes
def inspect_command(bundle_path, style, plain):
    """Prints every codeword with the formula of each action component."""
    bundle = load_bundle(bundle_path)
    spec = bundle.spec()
    policy = bundle.to_policy()
    style = FormulaStyle(style)

    rows = []
    for k, sub in enumerate(policy.subpolicies):
        codeword = "[" + ", ".join(f"{v:.4f}" for v in policy.partition.codeword(k)) + "]"
        formulas = [format_formula(sub.weights[a], sub.bias[a], spec.state_labels, style) for a in range(sub.action_dim)]
        rows.append([str(k), codeword, *formulas])

    if plain:
        for row in rows:
            click.echo("\t".join(row))
        return
    table = Table(title=f"{len(rows)} cells of {bundle.env}")
    for column in ["cell", "codeword", *spec.action_labels]:
        table.add_column(column, no_wrap=True)
    for row in rows:
        table.add_row(*row)
    console.print(table)


@cli.command()
@shared_options
@click.option("--bundle", "bundle_path", type=click.Path(), help="Policy bundle; the teacher is used otherwise")
@click.option("--resolution", type=int, default=20, show_default=True, help="Grid points per axis")
@exit_codes
def viz(config_path, seed, out, env_name, teacher, freeze_mode, bundle_path, resolution):
    """Writes quiver/heatmap grids as CSV and the partition diagram as SVG."""
    run = load_run_config(config_path, env=env_name, teacher=teacher, seed=seed, out=out)
    policy, spec = load_policy(run, bundle_path)
    out_dir = Path(run.out)

    quiver = quiver_data(policy, spec, resolution)
    CSVDestination(out_dir / QUIVER_FILE).load(quiver)
    drawn = quiver
    if spec.action_dim == 1:
        drawn = heatmap_data(policy, spec, resolution)
        CSVDestination(out_dir / HEATMAP_FILE).load(drawn)

    codewords = policy.partition.coords if isinstance(policy, DistilledPolicy) else None
    SvgDestination(out_dir / DIAGRAM_FILE).load(PartitionDiagram(drawn, spec, codewords, title=spec.name))
    console.print(f"[bold green]Grids and diagram written to {out_dir}")


@cli.command()
@click.option("--env", "env_name", required=True, help="simplegoal-v0 or mountaincarcontinuous-v0")
@click.option("--out", required=True, type=click.Path(), help="Bundle file to write")
@exit_codes
def reference(env_name, out):
    """Writes the reference policy of an environment as a bundle."""
    spec = make_env(env_name).spec
    bundle = PolicyBundle.from_policy(reference_policy(env_name), spec, source="reference")
    BundleDestination(out).load(bundle)
    console.print(f"[bold green]{len(bundle.codewords)} cells written to {out}")
