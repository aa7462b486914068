"""Experiment drivers: fidelity-versus-wall-time tables with competing
priors, reconstruction of counted datasets, purity density histograms, and
prior-ensemble exports for external estimator training.

All drivers are deterministic given a seed: per-trial work is keyed by
(seed, trial-derived stream), results merge by trial index rather than
completion order, and only wall-times vary between repeated runs.
"""

from __future__ import annotations

import csv
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .. import interchange
from ..ensembles import (
    BiasedDirichletSpec,
    sample_bures,
    sample_ma,
    sample_ml_biased,
)
from ..estimators import baseline_estimate, load_rho_ml, rho_to_tau
from ..linalg import fidelity, purity_stack
from ..measurement import MeasurementDataset, aggregated, simulate_shots
from ..mcmc import ChainConfig, run_chain
from ..priors import PriorModel
from ..rng import make_rng

# stream layout per trial: 0 truth, 1 shots, 8+ chains (one per prior)
_TRIAL_STRIDE = 64
_CHAIN_BASE = 8

BASELINE_SOURCE = "baseline"


# --------------------------------------------------------------------------
# specs


@dataclass(frozen=True)
class PriorSpec:
    """CLI/config-level prior description; resolved to a PriorModel once a
    dimension (and, for biased priors, a point estimate) is known."""

    name: str
    mu: float | None = None
    alpha0: float | None = None
    K: int | None = None
    alpha: float | None = None
    rho_ml: str | None = None  # path, or None to use the experiment source
    label: str | None = None

    def resolved_label(self) -> str:
        if self.label:
            return self.label
        if self.name == "bures":
            return "bures"
        if self.name == "ml_biased":
            return f"ml_biased_mu{self.mu:g}_a{self.alpha0:g}"
        return f"ma_K{self.K}_a{self.alpha:g}"

    def to_obj(self) -> dict:
        obj = {"name": self.name}
        for key in ("mu", "alpha0", "K", "alpha", "rho_ml", "label"):
            val = getattr(self, key)
            if val is not None:
                obj[key] = val
        return obj

    @classmethod
    def from_obj(cls, obj: dict) -> "PriorSpec":
        return cls(**obj)


def parse_prior_spec(text: str) -> PriorSpec:
    """Parse 'bures', 'ml_biased:mu=25,alpha0=11.6[,K=5][,rho_ml=PATH]',
    or 'ma:K=5,alpha=0.4'."""
    name, _, rest = text.partition(":")
    name = name.strip()
    fields: dict = {"name": name}
    if rest:
        for item in rest.split(","):
            key, _, val = item.partition("=")
            key = key.strip()
            if key in ("mu", "alpha0", "alpha"):
                fields[key] = float(val)
            elif key == "K":
                fields[key] = int(val)
            elif key in ("rho_ml", "label"):
                fields[key] = val.strip()
            else:
                raise ValueError(f"unknown prior spec field {key!r} in {text!r}")
    spec = PriorSpec(**fields)
    if spec.name not in ("bures", "ml_biased", "ma"):
        raise ValueError(f"unknown prior {spec.name!r}")
    if spec.name == "ml_biased" and (spec.mu is None or spec.alpha0 is None):
        raise ValueError("ml_biased prior needs mu and alpha0")
    if spec.name == "ma" and (spec.K is None or spec.alpha is None):
        raise ValueError("ma prior needs K and alpha")
    return spec


def build_prior_model(spec: PriorSpec, dim: int, rho_ml: np.ndarray | None = None) -> PriorModel:
    if spec.name == "bures":
        return PriorModel.bures(dim)
    if spec.name == "ma":
        return PriorModel.ma(dim, spec.K, spec.alpha)
    if rho_ml is None:
        if spec.rho_ml is None:
            raise ValueError(
                f"prior {spec.resolved_label()!r} needs a point-estimate source"
            )
        rho_ml = load_rho_ml(spec.rho_ml)
    return PriorModel.ml_biased(dim, rho_ml, mu=spec.mu, alpha0=spec.alpha0, K=spec.K)


@dataclass(frozen=True)
class TruthSpec:
    """Ground-truth ensemble for simulated studies."""

    name: str = "bures"
    K: int | None = None
    alpha: float | None = None

    def sample(self, dim: int, rng) -> np.ndarray:
        if self.name == "bures":
            return sample_bures(dim, rng)
        if self.name == "ma":
            return sample_ma(dim, self.K, self.alpha, rng)
        raise ValueError(f"unknown ground-truth ensemble {self.name!r}")

    def to_obj(self) -> dict:
        obj = {"name": self.name}
        if self.K is not None:
            obj["K"] = self.K
        if self.alpha is not None:
            obj["alpha"] = self.alpha
        return obj

    @classmethod
    def from_obj(cls, obj: dict) -> "TruthSpec":
        return cls(**obj)


@dataclass(frozen=True)
class ChainSpec:
    """Chain settings shared by all chains of an experiment; seed and
    stream are assigned per chain by the driver."""

    length: int = 2**14
    beta: float = 0.1
    target_accept: float | None = 0.25
    adapt_window: int = 64
    burn_in: float = 0.0
    checkpoints: tuple | None = None
    thin: int = 0

    def to_config(self, seed: int, stream: int) -> ChainConfig:
        return ChainConfig(
            length=self.length,
            beta=self.beta,
            target_accept=self.target_accept,
            adapt_window=self.adapt_window,
            burn_in=self.burn_in,
            checkpoints=self.checkpoints,
            seed=seed,
            stream=stream,
            thin=self.thin,
        )

    def to_obj(self) -> dict:
        obj = {
            "length": self.length,
            "beta": self.beta,
            "target_accept": self.target_accept,
            "adapt_window": self.adapt_window,
            "burn_in": self.burn_in,
            "thin": self.thin,
        }
        if self.checkpoints is not None:
            obj["checkpoints"] = list(self.checkpoints)
        return obj

    @classmethod
    def from_obj(cls, obj: dict) -> "ChainSpec":
        obj = dict(obj)
        if "checkpoints" in obj and obj["checkpoints"] is not None:
            obj["checkpoints"] = tuple(obj["checkpoints"])
        return cls(**obj)


@dataclass(frozen=True)
class Fig2Config:
    """Fidelity-versus-wall-time study over randomly drawn ground truths."""

    qubits: int = 1
    trials: int = 20
    shots: int = 16000
    truth: TruthSpec = field(default_factory=TruthSpec)
    priors: tuple = (
        PriorSpec("ml_biased", mu=25.0, alpha0=11.6),
        PriorSpec("bures"),
    )
    chain: ChainSpec = field(default_factory=ChainSpec)
    rho_ml_source: str = BASELINE_SOURCE  # "baseline" or a directory path
    export_trials: str | None = None
    seed: int = 0
    workers: int = 1

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trial count must be >= 1")
        object.__setattr__(self, "priors", tuple(self.priors))

    def to_obj(self) -> dict:
        return {
            "qubits": self.qubits,
            "trials": self.trials,
            "shots": self.shots,
            "truth": self.truth.to_obj(),
            "priors": [p.to_obj() for p in self.priors],
            "chain": self.chain.to_obj(),
            "rho_ml_source": self.rho_ml_source,
            "export_trials": self.export_trials,
            "seed": self.seed,
            "workers": self.workers,
        }

    @classmethod
    def from_obj(cls, obj: dict) -> "Fig2Config":
        obj = dict(obj)
        if "truth" in obj:
            obj["truth"] = TruthSpec.from_obj(obj["truth"])
        if "priors" in obj:
            obj["priors"] = tuple(PriorSpec.from_obj(p) for p in obj["priors"])
        if "chain" in obj:
            obj["chain"] = ChainSpec.from_obj(obj["chain"])
        return cls(**obj)


# --------------------------------------------------------------------------
# result tables


@dataclass(frozen=True)
class Fig2Row:
    prior: str
    length: int
    mean_fidelity: float
    std_fidelity: float
    mean_wall_s: float


@dataclass
class ResultTable:
    rows: list

    FIELDS = ("prior", "length", "mean_fidelity", "std_fidelity", "mean_wall_s")

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(self.FIELDS)
            for row in self.rows:
                writer.writerow(
                    [
                        row.prior,
                        row.length,
                        repr(row.mean_fidelity),
                        repr(row.std_fidelity),
                        repr(row.mean_wall_s),
                    ]
                )

    @classmethod
    def from_csv(cls, path) -> "ResultTable":
        rows = []
        with open(path, newline="") as fh:
            for rec in csv.DictReader(fh):
                rows.append(
                    Fig2Row(
                        rec["prior"],
                        int(rec["length"]),
                        float(rec["mean_fidelity"]),
                        float(rec["std_fidelity"]),
                        float(rec["mean_wall_s"]),
                    )
                )
        return cls(rows)

    def fidelity_records(self) -> list:
        """(prior, length, mean, std) tuples -- the seed-reproducible part."""
        return [(r.prior, r.length, r.mean_fidelity, r.std_fidelity) for r in self.rows]


def _mean_std(values) -> tuple:
    arr = np.asarray(values, dtype=float)
    mean = float(arr.mean())
    std = float(arr.std(ddof=1)) if arr.size > 1 else 0.0
    return mean, std


# --------------------------------------------------------------------------
# fig2 driver


def _trial_rho_ml(cfg: Fig2Config, trial: int, data: MeasurementDataset):
    """(rho_ml, inference_seconds) from the configured source."""
    if cfg.rho_ml_source == BASELINE_SOURCE:
        t0 = time.perf_counter()
        rho_ml = baseline_estimate(data)
        return rho_ml, time.perf_counter() - t0
    src = Path(cfg.rho_ml_source)
    rho_path = src / f"state_{trial:05d}.rho_ml.json"
    if not rho_path.exists():
        raise FileNotFoundError(f"missing point estimate {rho_path}")
    rho_ml = load_rho_ml(rho_path)
    time_path = src / f"state_{trial:05d}.rho_ml.time.json"
    seconds = 0.0
    if time_path.exists():
        seconds = float(json.loads(time_path.read_text())["inference_s"])
    return rho_ml, seconds


def _fig2_trial(cfg_obj: dict, trial: int) -> dict:
    cfg = Fig2Config.from_obj(cfg_obj)
    dim = 2**cfg.qubits
    base = trial * _TRIAL_STRIDE
    truth = cfg.truth.sample(dim, make_rng(cfg.seed, base))
    data = simulate_shots(truth, cfg.shots, make_rng(cfg.seed, base + 1))

    if cfg.export_trials:
        out = Path(cfg.export_trials)
        out.mkdir(parents=True, exist_ok=True)
        interchange.save_density_matrix(out / f"state_{trial:05d}.truth.json", truth)
        aggregated(data).save(out / f"state_{trial:05d}.shots.json")

    needs_ml = any(p.name == "ml_biased" for p in cfg.priors)
    rho_ml, ml_seconds, ml_fid = None, 0.0, None
    if needs_ml:
        rho_ml, ml_seconds = _trial_rho_ml(cfg, trial, data)
        ml_fid = fidelity(rho_ml, truth)

    per_prior = {}
    for idx, spec in enumerate(cfg.priors):
        model = build_prior_model(spec, dim, rho_ml=rho_ml if spec.name == "ml_biased" else None)
        chain_cfg = cfg.chain.to_config(cfg.seed, base + _CHAIN_BASE + idx)
        extra = ml_seconds if spec.name == "ml_biased" else 0.0
        result = run_chain(model, data, chain_cfg, rho_ml_seconds=extra)
        per_prior[spec.resolved_label()] = {
            "lengths": result.checkpoint_lengths,
            "walls": result.wall_times,
            "fids": [fidelity(rho, truth) for rho in result.rho_means],
            "acceptance": result.acceptance_rate,
        }
    return {"trial": trial, "per_prior": per_prior, "ml_fid": ml_fid, "ml_seconds": ml_seconds}


def run_fig2(cfg: Fig2Config) -> ResultTable:
    """Reconstruction fidelity versus wall-time, averaged over trial
    states, one row per (prior, checkpoint).

    When a biased prior is present an extra row with prior name "rho_ml"
    and length 0 reports the point estimate's own fidelity statistics.
    """
    cfg_obj = cfg.to_obj()
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            futures = [pool.submit(_fig2_trial, cfg_obj, t) for t in range(cfg.trials)]
            trials = [f.result() for f in futures]
    else:
        trials = [_fig2_trial(cfg_obj, t) for t in range(cfg.trials)]
    trials.sort(key=lambda r: r["trial"])

    rows = []
    if any(r["ml_fid"] is not None for r in trials):
        mean, std = _mean_std([r["ml_fid"] for r in trials])
        wall = float(np.mean([r["ml_seconds"] for r in trials]))
        rows.append(Fig2Row("rho_ml", 0, mean, std, wall))
    for spec in cfg.priors:
        label = spec.resolved_label()
        lengths = trials[0]["per_prior"][label]["lengths"]
        for i, length in enumerate(lengths):
            fids = [r["per_prior"][label]["fids"][i] for r in trials]
            walls = [r["per_prior"][label]["walls"][i] for r in trials]
            mean, std = _mean_std(fids)
            rows.append(Fig2Row(label, int(length), mean, std, float(np.mean(walls))))
    return ResultTable(rows)


# --------------------------------------------------------------------------
# reconstruction of measured datasets


def run_reconstruct(
    data_paths,
    priors,
    chain: ChainSpec,
    out_dir,
    seed: int = 0,
    rho_ml_source: str = BASELINE_SOURCE,
) -> list:
    """One chain per (dataset, prior); emits a chain-result JSON and the
    final Bayesian mean in interchange format.  Returns emitted paths."""
    priors = list(priors)
    if not priors:
        raise ValueError("at least one prior is required")
    data_paths = [Path(p) for p in data_paths]
    if not data_paths:
        raise ValueError("at least one dataset is required")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    emitted = []
    for i, path in enumerate(data_paths):
        data = MeasurementDataset.load(path)
        dim = data.dim
        rho_ml = None
        ml_seconds = 0.0
        if any(p.name == "ml_biased" and p.rho_ml is None for p in priors):
            if rho_ml_source == BASELINE_SOURCE:
                t0 = time.perf_counter()
                rho_ml = baseline_estimate(data)
                ml_seconds = time.perf_counter() - t0
            else:
                rho_ml = load_rho_ml(rho_ml_source)
        for j, spec in enumerate(priors):
            model = build_prior_model(
                spec, dim, rho_ml=rho_ml if spec.name == "ml_biased" and spec.rho_ml is None else None
            )
            cfg = chain.to_config(seed, i * _TRIAL_STRIDE + _CHAIN_BASE + j)
            extra = ml_seconds if spec.name == "ml_biased" else 0.0
            result = run_chain(model, data, cfg, rho_ml_seconds=extra)
            stem = f"{path.stem}__{spec.resolved_label()}"
            chain_path = out_dir / f"{stem}.chain.json"
            rho_path = out_dir / f"{stem}.rho_b.json"
            result.save(chain_path)
            interchange.save_density_matrix(rho_path, result.rho_b)
            emitted.extend([chain_path, rho_path])
    return emitted


# --------------------------------------------------------------------------
# purity histograms


@dataclass(frozen=True)
class PuritySource:
    """Either a prior sampled n times or a directory of state files."""

    kind: str  # "prior" | "dir"
    label: str
    prior: PriorSpec | None = None
    qubits: int = 1
    samples: int = 10000
    path: str | None = None


@dataclass
class PurityTable:
    rows: list  # (label, bin_left, bin_right, density)

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["source", "bin_left", "bin_right", "density"])
            for label, left, right, density in self.rows:
                writer.writerow([label, repr(left), repr(right), repr(density)])


def _source_purities(source: PuritySource, seed: int, stream: int) -> tuple:
    """(purity values, Hilbert-space dimension) for one source."""
    if source.kind == "dir":
        files = sorted(Path(source.path).glob("*.json"))
        files = [f for f in files if not f.name.endswith(".time.json")]
        if not files:
            raise ValueError(f"no state files in {source.path}")
        rhos = np.stack([load_rho_ml(f) for f in files])
        return purity_stack(rhos), rhos.shape[-1]
    if source.samples < 1:
        raise ValueError("empty purity source")
    dim = 2**source.qubits
    rng = make_rng(seed, stream)
    spec = source.prior
    if spec.name == "bures":
        rhos = sample_bures(dim, rng, size=source.samples)
    elif spec.name == "ma":
        rhos = sample_ma(dim, spec.K, spec.alpha, rng, size=source.samples)
    else:
        if spec.rho_ml is None:
            raise ValueError("ml_biased purity source needs rho_ml=PATH")
        rho_ml = load_rho_ml(spec.rho_ml)
        K = spec.K if spec.K is not None else dim + 1
        bspec = BiasedDirichletSpec(K=K, mu=spec.mu, alpha0=spec.alpha0)
        rhos = sample_ml_biased(rho_ml, bspec, rng, size=source.samples)
    return purity_stack(rhos), dim


def run_purity_pdf(sources, bins: int = 100, seed: int = 0) -> PurityTable:
    """Normalized purity histograms over [1/D, 1] with a shared bin count;
    each source contributes one histogram (density integrates to 1)."""
    sources = list(sources)
    if not sources:
        raise ValueError("at least one purity source is required")
    rows = []
    for s_idx, source in enumerate(sources):
        values, dim = _source_purities(source, seed, s_idx * _TRIAL_STRIDE)
        lo, hi = 1.0 / dim, 1.0
        values = np.clip(values, lo, hi)
        density, edges = np.histogram(values, bins=bins, range=(lo, hi), density=True)
        for k in range(bins):
            rows.append((source.label, float(edges[k]), float(edges[k + 1]), float(density[k])))
    return PurityTable(rows)


# --------------------------------------------------------------------------
# prior-ensemble export


def run_prior_sample(
    prior: PriorSpec,
    qubits: int,
    n: int,
    out_dir,
    shots: int = 16000,
    seed: int = 0,
    include_shots: bool = True,
    aggregate: bool = True,
) -> dict:
    """Write n sampled states (interchange + tau files, plus optional
    simulated shot datasets) for external estimator training; returns the
    manifest, which is also written to out_dir/manifest.json."""
    if n < 1:
        raise ValueError("sample count must be >= 1")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    dim = 2**qubits

    rho_ml = None
    if prior.name == "ml_biased":
        if prior.rho_ml is None:
            raise ValueError("ml_biased prior sampling needs rho_ml=PATH")
        rho_ml = load_rho_ml(prior.rho_ml)

    entries = []
    for i in range(n):
        rng = make_rng(seed, i * _TRIAL_STRIDE)
        if prior.name == "bures":
            rho = sample_bures(dim, rng)
        elif prior.name == "ma":
            rho = sample_ma(dim, prior.K, prior.alpha, rng)
        else:
            K = prior.K if prior.K is not None else dim + 1
            spec = BiasedDirichletSpec(K=K, mu=prior.mu, alpha0=prior.alpha0)
            rho = sample_ml_biased(rho_ml, spec, rng)
        stem = f"state_{i:05d}"
        interchange.save_density_matrix(out_dir / f"{stem}.json", rho)
        interchange.save_tau(out_dir / f"{stem}.tau.json", rho_to_tau(rho))
        entry = {"state": f"{stem}.json", "tau": f"{stem}.tau.json"}
        if include_shots:
            data = simulate_shots(rho, shots, make_rng(seed, i * _TRIAL_STRIDE + 1))
            if aggregate:
                data = aggregated(data)
            data.save(out_dir / f"{stem}.shots.json")
            entry["shots"] = f"{stem}.shots.json"
        entries.append(entry)

    manifest = {
        "prior": prior.to_obj(),
        "qubits": qubits,
        "n": n,
        "shots": shots if include_shots else 0,
        "aggregate": aggregate,
        "seed": seed,
        "files": entries,
    }
    (out_dir / "manifest.json").write_text(json.dumps(manifest, indent=1))
    return manifest
