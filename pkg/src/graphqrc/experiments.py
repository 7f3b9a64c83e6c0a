"""Seeded experiment sweeps: grid execution, aggregation, and CSV/JSON output.

Every realization is a pure function of (master_seed, grid index,
realization index), so sweeps reproduce bit-exactly for any worker count;
aggregation always runs in (grid index, realization index) order.
"""

from __future__ import annotations

import csv
import itertools
import json
import time
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import asdict, dataclass, field, replace
from hashlib import sha256
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

try:
    from threadpoolctl import threadpool_limits
except ImportError:  # pragma: no cover
    from contextlib import nullcontext

    def threadpool_limits(limits=None):
        return nullcontext()

from . import __version__
from .diagnostics import probe_trajectories
from .graph import sample_rrg
from .hamiltonian import (
    HamiltonianSpec,
    build_hamiltonian,
    level_spacing_ratios,
    sample_disorder,
)
from .qstate import evolution_operator, herm_eig, herm_eigvalsh, maximally_mixed
from .readout import (
    Standardizer,
    TrainTestSplit,
    accuracy_rescaled,
    model_summary,
    mse,
    pearson_capacity,
    ridge_fit,
    ridge_predict,
    svm_fit,
    svm_predict,
)
from .reservoir import (
    ReservoirConfig,
    encode_bits,
    encode_werner,
    feature_matrix,
    initial_state,
    run_sequence,
)
from .tasks import (
    MemoryTaskSpec,
    MultitaskSpec,
    CriticalDisorder,
    gen_memory_inputs,
    gen_multitask,
    memory_targets,
    threshold_crossing,
)

TASKS = ("memory", "multitask", "spectra", "diagnostics")
FAILURE_BUDGET = 0.05


class ConfigError(ValueError):
    """The experiment configuration is inconsistent or infeasible."""


class SweepAbortedError(RuntimeError):
    """Too many realizations failed at some grid point."""


@dataclass(frozen=True)
class ExperimentConfig:
    """Full description of one sweep; grids are cartesian products."""

    task: str
    n_total: int = 8
    degrees: tuple[int, ...] = (3,)
    dts: tuple[float, ...] = (3.0,)
    delta_xs: tuple[float, ...] = (10.0,)
    jxs: tuple[float, ...] = (0.0,)
    realizations: int = 100
    split: TrainTestSplit = field(default_factory=TrainTestSplit)
    master_seed: int = 0
    n_aux: int = 2
    aux_sites: tuple[int, ...] = (0, 1)
    jz: float = 1.0
    hx: float = 1.0
    hz: float = 0.0
    delta_z: float = 0.2
    tau_max: int = 6
    encoding_noise: float = 0.02
    ridge_lambda: float = 1e-3
    # Kernel width for the standardized feature space. At unit width the
    # RBF kernel memorizes (every training point becomes a support vector
    # and held-out accuracy collapses on a quarter of realizations); width 3
    # generalizes cleanly. svm_fit itself keeps the conventional default 1.
    svm_length_scale: float = 3.0
    svm_penalty: float = 1.0
    xor_threshold: float = 0.7
    times: tuple[float, ...] = ()
    out_dir: str = ""
    workers: int = 1


@dataclass(frozen=True)
class GridPoint:
    k: int
    dt: float
    delta_x: float
    jx: float


@dataclass(frozen=True)
class SweepResult:
    """Aggregated metrics at one grid point: metric -> (mean, stderr)."""

    point: GridPoint
    metrics: dict[str, tuple[float, float]]
    n_realizations: int
    fingerprint: str


@dataclass(frozen=True)
class TrajectoryResult:
    """Time-resolved ensemble means for the physics probes at one grid point."""

    point: GridPoint
    times: np.ndarray
    correlation_mean: np.ndarray
    correlation_stderr: np.ndarray
    negativity_mean: np.ndarray
    negativity_stderr: np.ndarray
    n_realizations: int
    fingerprint: str


def validate_config(cfg: ExperimentConfig) -> None:
    if cfg.task not in TASKS:
        raise ConfigError(f"unknown task {cfg.task!r}, expected one of {TASKS}")
    if cfg.realizations < 1:
        raise ConfigError("realizations must be at least 1")
    if cfg.workers < 1:
        raise ConfigError("workers must be at least 1")
    for grid_name in ("degrees", "dts", "delta_xs", "jxs"):
        if len(getattr(cfg, grid_name)) == 0:
            raise ConfigError(f"{grid_name} grid is empty")
    if any(dt <= 0 for dt in cfg.dts):
        raise ConfigError("all dt values must be positive")
    if any(dx < 0 for dx in cfg.delta_xs):
        raise ConfigError("disorder amplitudes must be non-negative")
    for k in cfg.degrees:
        if k < 1 or k >= cfg.n_total:
            raise ConfigError(f"degree {k} infeasible for {cfg.n_total} vertices")
        if (k * cfg.n_total) % 2 != 0:
            raise ConfigError(
                f"no {k}-regular graph on {cfg.n_total} vertices (odd stub count)"
            )
    if cfg.task in ("memory", "multitask", "diagnostics") and cfg.n_aux != 2:
        raise ConfigError(f"task {cfg.task!r} uses a two-qubit input register")
    if len(cfg.aux_sites) != cfg.n_aux or len(set(cfg.aux_sites)) != cfg.n_aux:
        raise ConfigError(f"aux_sites {cfg.aux_sites} must be {cfg.n_aux} distinct vertices")
    if any(s < 0 or s >= cfg.n_total for s in cfg.aux_sites):
        raise ConfigError(f"aux_sites {cfg.aux_sites} out of range")
    if cfg.task == "diagnostics" and tuple(cfg.aux_sites) != tuple(range(cfg.n_aux)):
        raise ConfigError("diagnostics requires the input register on the leading sites")
    if cfg.tau_max < 1:
        raise ConfigError("tau_max must be at least 1")
    if not 0.0 <= cfg.encoding_noise < 1.0:
        raise ConfigError("encoding_noise must lie in [0, 1)")
    if cfg.ridge_lambda <= 0 or cfg.svm_length_scale <= 0 or cfg.svm_penalty <= 0:
        raise ConfigError("readout hyperparameters must be positive")
    if not 0.0 < cfg.xor_threshold < 1.0:
        raise ConfigError("xor_threshold must lie in (0, 1)")
    if any(t < 0 for t in cfg.times):
        raise ConfigError("probe times must be non-negative")
    if cfg.task == "memory" and cfg.split.n_transient <= cfg.tau_max:
        raise ConfigError("transient must exceed tau_max so all targets are defined")


def config_from_dict(data: dict) -> ExperimentConfig:
    """Build a validated config from parsed JSON."""
    known = set(ExperimentConfig.__dataclass_fields__)
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    kwargs = dict(data)
    if "split" in kwargs and not isinstance(kwargs["split"], TrainTestSplit):
        split_data = kwargs["split"]
        extra = set(split_data) - set(TrainTestSplit.__dataclass_fields__)
        if extra:
            raise ConfigError(f"unknown split keys: {sorted(extra)}")
        try:
            kwargs["split"] = TrainTestSplit(**split_data)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
    for name in ("degrees", "dts", "delta_xs", "jxs", "aux_sites", "times"):
        if name in kwargs:
            value = kwargs[name]
            if np.isscalar(value):
                value = (value,)
            kwargs[name] = tuple(value)
    try:
        cfg = ExperimentConfig(**kwargs)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    validate_config(cfg)
    return cfg


def config_fingerprint(cfg: ExperimentConfig) -> str:
    """Hash of the scientific configuration.

    Execution details (output path, worker count) are excluded: they cannot
    change the numbers, so the same experiment keeps the same fingerprint.
    """
    payload = asdict(cfg)
    payload.pop("out_dir")
    payload.pop("workers")
    text = json.dumps(payload, sort_keys=True, default=list)
    return sha256(text.encode()).hexdigest()[:12]


def grid_points(cfg: ExperimentConfig) -> list[GridPoint]:
    return [
        GridPoint(k=k, dt=dt, delta_x=dx, jx=jx)
        for k, dt, dx, jx in itertools.product(cfg.degrees, cfg.dts, cfg.delta_xs, cfg.jxs)
    ]


def realization_seed(
    master_seed: int, grid_index: int, realization_index: int
) -> np.random.SeedSequence:
    """Splittable per-job seed: a pure function of the three coordinates."""
    return np.random.SeedSequence(
        entropy=master_seed, spawn_key=(grid_index, realization_index)
    )


def resolve_times(cfg: ExperimentConfig) -> np.ndarray:
    if cfg.times:
        return np.asarray(cfg.times, dtype=float)
    return np.geomspace(0.1, 100.0, 60)


# ----------------------------------------------------------------------
# per-realization pipelines
# ----------------------------------------------------------------------


def _build_propagator(point: GridPoint, cfg: ExperimentConfig, rng: np.random.Generator):
    g = sample_rrg(cfg.n_total, point.k, rng)
    spec = HamiltonianSpec(
        jz=cfg.jz, jx=point.jx, hx=cfg.hx, hz=cfg.hz,
        delta_x=point.delta_x, delta_z=cfg.delta_z,
    )
    dis = sample_disorder(spec, cfg.n_total, rng)
    h = build_hamiltonian(g, spec, dis)
    return h, g


def _memory_realization(
    point: GridPoint, cfg: ExperimentConfig, seed: np.random.SeedSequence
) -> dict:
    rng = np.random.default_rng(seed)
    h, _ = _build_propagator(point, cfg, rng)
    u = evolution_operator(herm_eig(h), point.dt)
    rcfg = ReservoirConfig(cfg.n_total, cfg.n_aux, point.dt, cfg.aux_sites)
    task_seed = int(rng.integers(0, 2**63))
    task = MemoryTaskSpec(
        sequence_length=cfg.split.total,
        tau_max=cfg.tau_max,
        encoding_noise=cfg.encoding_noise,
        seed=task_seed,
    )
    clean, encoded = gen_memory_inputs(task)
    inputs = [encode_werner(float(v)) for v in encoded]
    records = run_sequence(inputs, u, rcfg, initial_state(rcfg))
    feats = feature_matrix(records)
    scaler = Standardizer.fit(feats[cfg.split.train_slice])
    x_train = scaler.transform(feats[cfg.split.train_slice])
    x_test = scaler.transform(feats[cfg.split.test_slice])

    capacities = np.empty(cfg.tau_max)
    errors = np.empty(cfg.tau_max)
    weight_norm = 0.0
    for tau in range(1, cfg.tau_max + 1):
        targets = memory_targets(clean, tau)
        model = ridge_fit(x_train, targets[cfg.split.train_slice], cfg.ridge_lambda)
        predicted = ridge_predict(model, x_test)
        y_test = targets[cfg.split.test_slice]
        capacities[tau - 1] = pearson_capacity(y_test, predicted)
        errors[tau - 1] = mse(y_test, predicted)
        if tau == 1:
            weight_norm = model_summary(model)["weight_norm"]
    return {
        "capacity": capacities,
        "mse": errors,
        "total_capacity": float(capacities.mean()),
        "weight_norm": weight_norm,
    }


def _multitask_realization(
    point: GridPoint, cfg: ExperimentConfig, seed: np.random.SeedSequence
) -> dict:
    rng = np.random.default_rng(seed)
    h, _ = _build_propagator(point, cfg, rng)
    u = evolution_operator(herm_eig(h), point.dt)
    rcfg = ReservoirConfig(cfg.n_total, cfg.n_aux, point.dt, cfg.aux_sites)
    task_seed = int(rng.integers(0, 2**63))
    data = gen_multitask(MultitaskSpec(sequence_length=cfg.split.total, seed=task_seed))
    inputs = [encode_bits(int(a), int(b)) for a, b in zip(data.bits_a, data.bits_b)]
    records = run_sequence(inputs, u, rcfg, initial_state(rcfg))
    feats = feature_matrix(records)
    scaler = Standardizer.fit(feats[cfg.split.train_slice])
    x_train = scaler.transform(feats[cfg.split.train_slice])
    x_test = scaler.transform(feats[cfg.split.test_slice])

    out: dict = {}
    for name, targets in (
        ("and", data.targets_and),
        ("or", data.targets_or),
        ("xor", data.targets_xor),
    ):
        y_train = 2.0 * targets[cfg.split.train_slice] - 1.0
        model = svm_fit(
            x_train, y_train,
            length_scale=cfg.svm_length_scale, penalty=cfg.svm_penalty,
        )
        predicted_bits = (svm_predict(model, x_test) + 1.0) / 2.0
        out[f"accuracy_{name}"] = accuracy_rescaled(
            predicted_bits.astype(int), targets[cfg.split.test_slice]
        )
        out[f"sv_count_{name}"] = float(model_summary(model)["n_support_vectors"])
    return out


def _spectra_realization(
    point: GridPoint, cfg: ExperimentConfig, seed: np.random.SeedSequence
) -> dict:
    rng = np.random.default_rng(seed)
    h, _ = _build_propagator(point, cfg, rng)
    energies = herm_eigvalsh(h)
    return {"r_mean": level_spacing_ratios(energies)}


def _diagnostics_realization(
    point: GridPoint, cfg: ExperimentConfig, seed: np.random.SeedSequence
) -> dict:
    rng = np.random.default_rng(seed)
    h, _ = _build_propagator(point, cfg, rng)
    rho_s = encode_werner(float(rng.uniform(0.0, 1.0)))
    rho_r = maximally_mixed(cfg.n_total - cfg.n_aux)
    corr, neg = probe_trajectories(h, rho_s, rho_r, resolve_times(cfg))
    return {"correlation_norm": corr, "negativity": neg}


_REALIZATIONS: dict[str, Callable] = {
    "memory": _memory_realization,
    "multitask": _multitask_realization,
    "spectra": _spectra_realization,
    "diagnostics": _diagnostics_realization,
}


# ----------------------------------------------------------------------
# sweep driver
# ----------------------------------------------------------------------


def _run_job(cfg: ExperimentConfig, grid_index: int, realization_index: int):
    point = grid_points(cfg)[grid_index]
    try:
        # Pin BLAS to one thread inside every job: results then match
        # bit-for-bit between serial and multi-worker runs.
        with threadpool_limits(limits=1):
            seed = realization_seed(cfg.master_seed, grid_index, realization_index)
            payload = _REALIZATIONS[cfg.task](point, cfg, seed)
        return grid_index, realization_index, payload, None
    except Exception as exc:
        return grid_index, realization_index, None, f"{type(exc).__name__}: {exc}"


def _execute(cfg: ExperimentConfig) -> tuple[list[list[dict]], list[dict]]:
    """Run all (grid point, realization) jobs; enforce the failure budget.

    Returns per-point result lists (failures dropped, order by realization
    index) and the failure log.
    """
    points = grid_points(cfg)
    slots: list[list] = [[None] * cfg.realizations for _ in points]
    jobs = [(gi, ri) for gi in range(len(points)) for ri in range(cfg.realizations)]
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            futures = [pool.submit(_run_job, cfg, gi, ri) for gi, ri in jobs]
            for future in as_completed(futures):
                gi, ri, payload, error = future.result()
                slots[gi][ri] = (payload, error)
    else:
        for gi, ri in jobs:
            gi, ri, payload, error = _run_job(cfg, gi, ri)
            slots[gi][ri] = (payload, error)

    failures = []
    results: list[list[dict]] = []
    for gi, point_slots in enumerate(slots):
        kept = []
        n_failed = 0
        for ri, (payload, error) in enumerate(point_slots):
            if error is not None:
                n_failed += 1
                failures.append(
                    {"grid_index": gi, "realization": ri, "reason": error}
                )
            else:
                kept.append(payload)
        if n_failed / cfg.realizations > FAILURE_BUDGET:
            raise SweepAbortedError(
                f"{n_failed}/{cfg.realizations} realizations failed at grid point "
                f"{points[gi]}: {failures[-1]['reason']}"
            )
        results.append(kept)
    return results, failures


def _mean_stderr(values: np.ndarray, axis: int = 0) -> tuple[np.ndarray, np.ndarray]:
    values = np.asarray(values, dtype=float)
    n = values.shape[axis]
    mean = values.mean(axis=axis)
    if n > 1:
        stderr = values.std(axis=axis, ddof=1) / np.sqrt(n)
    else:
        stderr = np.zeros_like(mean)
    return mean, stderr


def _write_csv(path: Path, header: Sequence[str], rows: Sequence[Sequence]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def _write_manifest(
    cfg: ExperimentConfig,
    out: Path,
    files: list[str],
    failures: list[dict],
    runtime: float,
    extra: dict | None = None,
) -> None:
    manifest = {
        "task": cfg.task,
        "fingerprint": config_fingerprint(cfg),
        "config": asdict(cfg),
        "grid": [asdict(p) for p in grid_points(cfg)],
        "seed_scheme": "SeedSequence(master_seed, spawn_key=(grid_index, realization_index))",
        "failures": failures,
        "runtime_seconds": runtime,
        "files": files,
        "package_version": __version__,
        "numpy_version": np.__version__,
    }
    if extra:
        manifest.update(extra)
    with open(out / "manifest.json", "w") as fh:
        json.dump(manifest, fh, indent=2, default=list)


def _out_dir(cfg: ExperimentConfig) -> Path | None:
    if not cfg.out_dir:
        return None
    path = Path(cfg.out_dir)
    path.mkdir(parents=True, exist_ok=True)
    return path


def run_memory_experiment(cfg: ExperimentConfig) -> list[SweepResult]:
    """Delayed-reconstruction sweep: per-delay capacity and error, plus totals."""
    validate_config(cfg)
    if cfg.task != "memory":
        raise ConfigError(f"config task is {cfg.task!r}, expected 'memory'")
    started = time.time()
    per_point, failures = _execute(cfg)
    fp = config_fingerprint(cfg)
    points = grid_points(cfg)

    results = []
    for point, realizations in zip(points, per_point):
        caps = np.array([r["capacity"] for r in realizations])
        errs = np.array([r["mse"] for r in realizations])
        totals = np.array([r["total_capacity"] for r in realizations])
        wnorms = np.array([r["weight_norm"] for r in realizations])
        cap_mean, cap_err = _mean_stderr(caps)
        mse_mean, mse_err = _mean_stderr(errs)
        tot_mean, tot_err = _mean_stderr(totals)
        wn_mean, wn_err = _mean_stderr(wnorms)
        metrics = {"total_capacity": (float(tot_mean), float(tot_err)),
                   "weight_norm": (float(wn_mean), float(wn_err))}
        for tau in range(1, cfg.tau_max + 1):
            metrics[f"capacity_tau_{tau}"] = (float(cap_mean[tau - 1]), float(cap_err[tau - 1]))
            metrics[f"mse_tau_{tau}"] = (float(mse_mean[tau - 1]), float(mse_err[tau - 1]))
        results.append(
            SweepResult(point, metrics, len(realizations), fp)
        )

    out = _out_dir(cfg)
    if out is not None:
        rows = []
        total_rows = []
        for res in results:
            p = res.point
            for tau in range(1, cfg.tau_max + 1):
                cm, ce = res.metrics[f"capacity_tau_{tau}"]
                mm, me = res.metrics[f"mse_tau_{tau}"]
                rows.append(
                    [p.delta_x, p.jx, p.k, p.dt, tau, cm, ce, mm, me,
                     res.n_realizations, fp]
                )
            tm, te = res.metrics["total_capacity"]
            total_rows.append(
                [p.delta_x, p.jx, p.k, p.dt, tm, te, res.n_realizations, fp]
            )
        _write_csv(
            out / "memory.csv",
            ["delta_x", "j_x", "k", "dt", "tau", "capacity_mean", "capacity_stderr",
             "mse_mean", "mse_stderr", "n_realizations", "fingerprint"],
            rows,
        )
        _write_csv(
            out / "memory_total.csv",
            ["delta_x", "j_x", "k", "dt", "total_capacity_mean",
             "total_capacity_stderr", "n_realizations", "fingerprint"],
            total_rows,
        )
        summaries = {
            str(asdict(res.point)): {"weight_norm_mean": res.metrics["weight_norm"][0]}
            for res in results
        }
        _write_manifest(cfg, out, ["memory.csv", "memory_total.csv"], failures,
                        time.time() - started, {"model_summaries": summaries})
    return results


def run_multitask_experiment(
    cfg: ExperimentConfig,
) -> tuple[list[SweepResult], list[dict]]:
    """Logic-task sweep; includes a critical-disorder scan when the disorder
    grid has at least two points."""
    validate_config(cfg)
    if cfg.task != "multitask":
        raise ConfigError(f"config task is {cfg.task!r}, expected 'multitask'")
    started = time.time()
    per_point, failures = _execute(cfg)
    fp = config_fingerprint(cfg)
    points = grid_points(cfg)

    results = []
    for point, realizations in zip(points, per_point):
        metrics = {}
        for name in ("and", "or", "xor"):
            values = np.array([r[f"accuracy_{name}"] for r in realizations])
            mean, err = _mean_stderr(values)
            metrics[f"accuracy_{name}"] = (float(mean), float(err))
            svs = np.array([r[f"sv_count_{name}"] for r in realizations])
            metrics[f"sv_count_{name}"] = tuple(map(float, _mean_stderr(svs)))
        results.append(SweepResult(point, metrics, len(realizations), fp))

    critical_rows: list[dict] = []
    if len(cfg.delta_xs) >= 2:
        by_curve: dict[tuple, list[SweepResult]] = {}
        for res in results:
            key = (res.point.k, res.point.dt, res.point.jx)
            by_curve.setdefault(key, []).append(res)
        for (k, dt, jx), group in sorted(by_curve.items()):
            group = sorted(group, key=lambda r: r.point.delta_x)
            grid = np.array([r.point.delta_x for r in group])
            curve = np.array([r.metrics["accuracy_xor"][0] for r in group])
            crossing = threshold_crossing(grid, curve, cfg.xor_threshold)
            critical_rows.append(
                {"k": k, "dt": dt, "j_x": jx, "threshold": cfg.xor_threshold,
                 "delta_x_c": crossing.delta_x, "censored": crossing.censored}
            )

    out = _out_dir(cfg)
    if out is not None:
        rows = []
        for res in results:
            p = res.point
            row = [p.delta_x, p.jx, p.k, p.dt]
            for name in ("and", "or", "xor"):
                mean, err = res.metrics[f"accuracy_{name}"]
                row.extend([mean, err])
            rows.append(row + [res.n_realizations, fp])
        _write_csv(
            out / "multitask.csv",
            ["delta_x", "j_x", "k", "dt", "and_mean", "and_stderr", "or_mean",
             "or_stderr", "xor_mean", "xor_stderr", "n_realizations", "fingerprint"],
            rows,
        )
        files = ["multitask.csv"]
        if critical_rows:
            _write_csv(
                out / "critical_disorder.csv",
                ["k", "dt", "j_x", "threshold", "delta_x_c", "censored", "fingerprint"],
                [[r["k"], r["dt"], r["j_x"], r["threshold"], r["delta_x_c"],
                  r["censored"], fp] for r in critical_rows],
            )
            files.append("critical_disorder.csv")
        summaries = {
            str(asdict(res.point)): {
                f"sv_count_{name}_mean": res.metrics[f"sv_count_{name}"][0]
                for name in ("and", "or", "xor")
            }
            for res in results
        }
        _write_manifest(cfg, out, files, failures, time.time() - started,
                        {"model_summaries": summaries})
    return results, critical_rows


def run_spectra_experiment(cfg: ExperimentConfig) -> list[SweepResult]:
    """Level-spacing-ratio sweep over the parameter grid."""
    validate_config(cfg)
    if cfg.task != "spectra":
        raise ConfigError(f"config task is {cfg.task!r}, expected 'spectra'")
    started = time.time()
    per_point, failures = _execute(cfg)
    fp = config_fingerprint(cfg)

    results = []
    for point, realizations in zip(grid_points(cfg), per_point):
        values = np.array([r["r_mean"] for r in realizations])
        mean, err = _mean_stderr(values)
        results.append(
            SweepResult(point, {"r_mean": (float(mean), float(err))},
                        len(realizations), fp)
        )

    out = _out_dir(cfg)
    if out is not None:
        rows = [
            [res.point.delta_x, res.point.jx, res.point.k, res.point.dt,
             res.metrics["r_mean"][0], res.metrics["r_mean"][1],
             res.n_realizations, fp]
            for res in results
        ]
        _write_csv(
            out / "spectra.csv",
            ["delta_x", "j_x", "k", "dt", "r_mean", "r_stderr",
             "n_realizations", "fingerprint"],
            rows,
        )
        _write_manifest(cfg, out, ["spectra.csv"], failures, time.time() - started)
    return results


def run_diagnostics_experiment(cfg: ExperimentConfig) -> list[TrajectoryResult]:
    """Ensemble-averaged correlation-norm and negativity trajectories."""
    validate_config(cfg)
    if cfg.task != "diagnostics":
        raise ConfigError(f"config task is {cfg.task!r}, expected 'diagnostics'")
    started = time.time()
    per_point, failures = _execute(cfg)
    fp = config_fingerprint(cfg)
    times = resolve_times(cfg)

    results = []
    for point, realizations in zip(grid_points(cfg), per_point):
        corr = np.array([r["correlation_norm"] for r in realizations])
        neg = np.array([r["negativity"] for r in realizations])
        corr_mean, corr_err = _mean_stderr(corr)
        neg_mean, neg_err = _mean_stderr(neg)
        results.append(
            TrajectoryResult(point, times, corr_mean, corr_err, neg_mean,
                             neg_err, len(realizations), fp)
        )

    out = _out_dir(cfg)
    if out is not None:
        corr_rows = []
        neg_rows = []
        for res in results:
            p = res.point
            for i, t in enumerate(res.times):
                coords = [p.delta_x, p.jx, p.k, p.dt, t]
                corr_rows.append(
                    coords + [res.correlation_mean[i], res.correlation_stderr[i],
                              res.n_realizations, fp]
                )
                neg_rows.append(
                    coords + [res.negativity_mean[i], res.negativity_stderr[i],
                              res.n_realizations, fp]
                )
        header = ["delta_x", "j_x", "k", "dt", "t", "mean", "stderr",
                  "n_realizations", "fingerprint"]
        _write_csv(out / "correlation_norm.csv", header, corr_rows)
        _write_csv(out / "negativity.csv", header, neg_rows)
        _write_manifest(cfg, out, ["correlation_norm.csv", "negativity.csv"],
                        failures, time.time() - started)
    return results


RUNNERS: dict[str, Callable] = {
    "memory": run_memory_experiment,
    "multitask": run_multitask_experiment,
    "spectra": run_spectra_experiment,
    "diagnostics": run_diagnostics_experiment,
}


def with_overrides(cfg: ExperimentConfig, **overrides) -> ExperimentConfig:
    """Copy a config with selected fields replaced, then re-validate."""
    new = replace(cfg, **overrides)
    validate_config(new)
    return new
