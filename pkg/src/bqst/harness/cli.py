"""Command-line interface.

Subcommands: prior-sample, simulate, reconstruct, fig2, purity-pdf, and
estimate (batch linear-inversion point estimates for external consumers).
Global flags --seed, --workers, and --out apply to every subcommand.
Failures exit nonzero with a machine-readable {"error", "message"} JSON
object on stderr.
"""

from __future__ import annotations

import functools
import json
import sys
import time
from pathlib import Path

import click

from .. import interchange
from ..estimators import baseline_estimate, load_rho_ml
from ..measurement import MeasurementDataset, aggregated, simulate_counts_36, simulate_shots
from ..rng import make_rng
from . import experiments
from .experiments import (
    BASELINE_SOURCE,
    ChainSpec,
    Fig2Config,
    PuritySource,
    parse_prior_spec,
)


def _fail_json(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except click.ClickException:
            raise
        except Exception as exc:
            sys.stderr.write(
                json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n"
            )
            sys.exit(1)

    return wrapper


@click.group()
@click.option("--seed", type=int, default=0, show_default=True, help="Master RNG seed.")
@click.option("--workers", type=int, default=1, show_default=True, help="Worker pool width.")
@click.option(
    "--out",
    type=click.Path(file_okay=False),
    default=".",
    show_default=True,
    help="Output directory.",
)
@click.pass_context
def main(ctx, seed, workers, out):
    """Bayesian quantum state estimation toolkit."""
    ctx.ensure_object(dict)
    ctx.obj.update(seed=seed, workers=workers, out=Path(out))
    ctx.obj["out"].mkdir(parents=True, exist_ok=True)


@main.command("prior-sample")
@click.option("--prior", "prior_text", required=True, help="Prior spec, e.g. 'ma:K=5,alpha=0.4'.")
@click.option("--qubits", type=int, required=True)
@click.option("-n", "--n", "count", type=int, default=100, show_default=True)
@click.option("--shots", type=int, default=16000, show_default=True)
@click.option("--no-shots", is_flag=True, help="Skip the simulated shot datasets.")
@click.option("--raw-shots", is_flag=True, help="Keep one record per shot instead of aggregating.")
@click.pass_context
@_fail_json
def prior_sample(ctx, prior_text, qubits, count, shots, no_shots, raw_shots):
    """Sample states from a prior and export state/tau/shot files."""
    manifest = experiments.run_prior_sample(
        parse_prior_spec(prior_text),
        qubits,
        count,
        ctx.obj["out"],
        shots=shots,
        seed=ctx.obj["seed"],
        include_shots=not no_shots,
        aggregate=not raw_shots,
    )
    click.echo(f"wrote {len(manifest['files'])} states to {ctx.obj['out']}")


@main.command("simulate")
@click.option("--state", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--shots", type=int, default=16000, show_default=True)
@click.option("--counted", is_flag=True, help="36-projection counted mode (two qubits).")
@click.option("--shots-per-setting", type=int, default=10000, show_default=True)
@click.option("--aggregate", is_flag=True, help="Aggregate single-shot records per projector.")
@click.option("--out-name", default=None, help="Output file name inside --out.")
@click.pass_context
@_fail_json
def simulate(ctx, state, shots, counted, shots_per_setting, aggregate, out_name):
    """Simulate measurement data from a ground-truth state file."""
    rho = load_rho_ml(state)
    rng = make_rng(ctx.obj["seed"])
    stem = Path(state).stem
    if counted:
        data = simulate_counts_36(rho, shots_per_setting, rng)
        name = out_name or f"{stem}.counts36.json"
    else:
        data = simulate_shots(rho, shots, rng)
        if aggregate:
            data = aggregated(data)
        name = out_name or f"{stem}.shots.json"
    path = ctx.obj["out"] / name
    data.save(path)
    click.echo(f"wrote {path} ({data.total_shots} shots)")


@main.command("reconstruct")
@click.option("--data", "data_paths", multiple=True, required=True, type=click.Path(exists=True))
@click.option("--prior", "prior_texts", multiple=True, required=True)
@click.option("--length", type=int, default=2**15, show_default=True)
@click.option("--beta", type=float, default=0.1, show_default=True)
@click.option("--burn-in", type=float, default=0.25, show_default=True)
@click.option("--target-accept", type=float, default=0.25, show_default=True)
@click.option("--no-adapt", is_flag=True, help="Disable step-size adaptation.")
@click.option("--checkpoint", "checkpoints", multiple=True, type=int)
@click.option("--rho-ml", default=BASELINE_SOURCE, show_default=True,
              help="Point-estimate source for biased priors: 'baseline' or a file path.")
@click.pass_context
@_fail_json
def reconstruct(ctx, data_paths, prior_texts, length, beta, burn_in, target_accept,
                no_adapt, checkpoints, rho_ml):
    """Bayesian reconstruction of measured datasets with one or more priors."""
    chain = ChainSpec(
        length=length,
        beta=beta,
        burn_in=burn_in,
        target_accept=None if no_adapt else target_accept,
        checkpoints=tuple(checkpoints) or None,
    )
    priors = [parse_prior_spec(t) for t in prior_texts]
    emitted = experiments.run_reconstruct(
        data_paths, priors, chain, ctx.obj["out"], seed=ctx.obj["seed"], rho_ml_source=rho_ml
    )
    for path in emitted:
        click.echo(f"wrote {path}")


@main.command("fig2")
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False),
              help="JSON experiment config; flags override its fields.")
@click.option("--qubits", type=int, default=None)
@click.option("--trials", type=int, default=None)
@click.option("--shots", type=int, default=None)
@click.option("--length", type=int, default=None)
@click.option("--beta", type=float, default=None)
@click.option("--burn-in", type=float, default=None)
@click.option("--prior", "prior_texts", multiple=True,
              help="Prior specs (default: ml_biased mu=25 alpha0=11.6, and bures).")
@click.option("--rho-ml-source", default=None,
              help="'baseline' or a directory of state_NNNNN.rho_ml.json files.")
@click.option("--export-trials", type=click.Path(file_okay=False), default=None,
              help="Export per-trial truth and dataset files to this directory.")
@click.option("--no-plot", is_flag=True)
@click.pass_context
@_fail_json
def fig2(ctx, config_path, qubits, trials, shots, length, beta, burn_in, prior_texts,
         rho_ml_source, export_trials, no_plot):
    """Fidelity-versus-wall-time study over random ground truths."""
    obj = {}
    if config_path:
        obj = json.loads(Path(config_path).read_text())
    cfg = Fig2Config.from_obj(obj) if obj else Fig2Config()
    chain = cfg.chain
    chain_fields = chain.to_obj()
    if length is not None:
        chain_fields["length"] = length
    if beta is not None:
        chain_fields["beta"] = beta
    if burn_in is not None:
        chain_fields["burn_in"] = burn_in
    overrides = dict(
        qubits=qubits,
        trials=trials,
        shots=shots,
        rho_ml_source=rho_ml_source,
        export_trials=export_trials,
    )
    fields = cfg.to_obj()
    fields["chain"] = chain_fields
    for key, val in overrides.items():
        if val is not None:
            fields[key] = val
    if prior_texts:
        fields["priors"] = [parse_prior_spec(t).to_obj() for t in prior_texts]
    fields["seed"] = ctx.obj["seed"]
    fields["workers"] = ctx.obj["workers"]
    cfg = Fig2Config.from_obj(fields)

    table = experiments.run_fig2(cfg)
    csv_path = ctx.obj["out"] / "fig2.csv"
    table.to_csv(csv_path)
    click.echo(f"wrote {csv_path}")
    if not no_plot:
        from .plots import plot_fig2

        png_path = ctx.obj["out"] / "fig2.png"
        plot_fig2(table, png_path)
        click.echo(f"wrote {png_path}")


@main.command("purity-pdf")
@click.option("--qubits", type=int, default=2, show_default=True)
@click.option("--prior", "prior_texts", multiple=True, help="Prior spec source(s).")
@click.option("--dir", "dir_paths", multiple=True, type=click.Path(exists=True, file_okay=False),
              help="Director(ies) of reconstructed state files.")
@click.option("--samples", type=int, default=10000, show_default=True)
@click.option("--bins", type=int, default=100, show_default=True)
@click.option("--no-plot", is_flag=True)
@click.pass_context
@_fail_json
def purity_pdf(ctx, qubits, prior_texts, dir_paths, samples, bins, no_plot):
    """Purity probability-density histograms for priors and result sets."""
    sources = []
    for text in prior_texts:
        spec = parse_prior_spec(text)
        sources.append(
            PuritySource("prior", spec.resolved_label(), prior=spec, qubits=qubits, samples=samples)
        )
    for path in dir_paths:
        sources.append(PuritySource("dir", Path(path).name, path=path))
    table = experiments.run_purity_pdf(sources, bins=bins, seed=ctx.obj["seed"])
    csv_path = ctx.obj["out"] / "purity_pdf.csv"
    table.to_csv(csv_path)
    click.echo(f"wrote {csv_path}")
    if not no_plot:
        from .plots import plot_purity_pdf

        png_path = ctx.obj["out"] / "purity_pdf.png"
        plot_purity_pdf(table, png_path)
        click.echo(f"wrote {png_path}")


def _estimate_one(data_path: Path, out_dir: Path) -> Path:
    data = MeasurementDataset.load(data_path)
    t0 = time.perf_counter()
    rho = baseline_estimate(data)
    seconds = time.perf_counter() - t0
    name = data_path.name
    for suffix in (".shots.json", ".counts36.json", ".json"):
        if name.endswith(suffix):
            stem = name[: -len(suffix)]
            break
    rho_path = out_dir / f"{stem}.rho_ml.json"
    interchange.save_density_matrix(rho_path, rho)
    (out_dir / f"{stem}.rho_ml.time.json").write_text(
        json.dumps({"state_id": stem, "inference_s": seconds})
    )
    return rho_path


@main.command("estimate")
@click.option("--data", "data_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--data-dir", type=click.Path(exists=True, file_okay=False))
@click.option("--pattern", default="*.shots.json", show_default=True)
@click.pass_context
@_fail_json
def estimate(ctx, data_path, data_dir, pattern):
    """Linear-inversion point estimates for dataset file(s), with timing
    sidecars, named for direct use as a fig2 --rho-ml-source."""
    out_dir = ctx.obj["out"]
    if (data_path is None) == (data_dir is None):
        raise click.UsageError("provide exactly one of --data or --data-dir")
    if data_path:
        paths = [Path(data_path)]
    else:
        paths = sorted(Path(data_dir).glob(pattern))
        if not paths:
            raise FileNotFoundError(f"no files matching {pattern} in {data_dir}")
    for path in paths:
        rho_path = _estimate_one(path, out_dir)
        click.echo(f"wrote {rho_path}")


if __name__ == "__main__":
    main()
