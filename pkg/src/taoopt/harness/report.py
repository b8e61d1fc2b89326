"""CSV and SVG emitters for experiment results.

Numbers in traces are written with ``repr`` (shortest round-trip form) so
repeated runs produce byte-identical files; stats tables use 7 decimals.
"""

from __future__ import annotations

import io
import os
import tempfile
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from ..core import RunRecord, StatsSummary
from ..problems import FisheryModel, simulate_biomass


def atomic_write_text(path: Path, text: str) -> None:
    """Write ``text`` through a temporary sibling file and an atomic rename."""
    path = Path(path)
    tmp = None
    try:
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except OSError as exc:
        if tmp is not None and os.path.exists(tmp):
            os.unlink(tmp)
        raise OSError(f"cannot write {path}: {exc}") from exc


def _num(x) -> str:
    return repr(float(x))


def mean_path(path: Path) -> Path:
    path = Path(path)
    return path.with_name(f"{path.stem}_mean{path.suffix}")


def trace_matrix(records: Sequence[RunRecord]) -> np.ndarray:
    if not records:
        raise ValueError("no run records to emit")
    lengths = {len(r.best_fitness_trace) for r in records}
    if len(lengths) != 1:
        raise ValueError(f"run traces differ in length: {sorted(lengths)}")
    return np.array([r.best_fitness_trace for r in records], dtype=float).reshape(len(records), -1)


def emit_convergence_csv(records: Sequence[RunRecord], path: Path) -> tuple[Path, Path]:
    """Per-trial best-so-far traces plus a companion ``*_mean`` file."""
    traces = trace_matrix(records)
    buf = io.StringIO()
    buf.write("iteration,trial,best_fitness\n")
    for k in range(traces.shape[1]):
        for trial in range(traces.shape[0]):
            buf.write(f"{k + 1},{trial},{_num(traces[trial, k])}\n")
    atomic_write_text(path, buf.getvalue())

    buf = io.StringIO()
    buf.write("iteration,mean_best,std_best\n")
    for k in range(traces.shape[1]):
        column = np.sort(traces[:, k])
        buf.write(f"{k + 1},{_num(np.mean(column))},{_num(np.std(column))}\n")
    companion = mean_path(path)
    atomic_write_text(companion, buf.getvalue())
    return Path(path), companion


def emit_stats_table(summaries: Mapping[str, Mapping[str, StatsSummary]], path: Path) -> Path:
    if not summaries:
        raise ValueError("no summaries to emit")
    lines = ["function,algorithm,best,mean,std"]
    for problem, by_algo in summaries.items():
        for algo, s in by_algo.items():
            lines.append(f"{problem},{algo},{s.best:.7f},{s.mean:.7f},{s.std:.7f}")
    atomic_write_text(path, "\n".join(lines) + "\n")
    return Path(path)


def emit_runs_csv(records: Sequence[RunRecord], path: Path) -> Path:
    """Final result of every trial: seed, fitness and best position."""
    if not records:
        raise ValueError("no run records to emit")
    n = len(records[0].final_best_position)
    buf = io.StringIO()
    buf.write("trial,seed,final_best_fitness," + ",".join(f"x{i + 1}" for i in range(n)) + "\n")
    for trial, r in enumerate(records):
        xs = ",".join(_num(v) for v in r.final_best_position)
        buf.write(f"{trial},{r.trial_seed},{_num(r.final_best_fitness)},{xs}\n")
    atomic_write_text(path, buf.getvalue())
    return Path(path)


def emit_fishery_report(best_E, model: FisheryModel, directory: Path) -> tuple[Path, Path]:
    """``effort.csv`` and ``biomass.csv`` for one effort plan, or trial means for several.

    With several plans (one row each) the biomass column is the mean of the
    per-plan trajectories, not the trajectory of the mean plan.
    """
    E = np.atleast_2d(np.asarray(best_E, dtype=float))
    if E.shape[1] != model.T:
        raise ValueError(f"effort plans have {E.shape[1]} years, model horizon is {model.T}")
    B = simulate_biomass(E, model)
    effort = np.mean(E, axis=0)
    biomass = np.mean(B, axis=0)
    directory = Path(directory)
    effort_path, biomass_path = directory / "effort.csv", directory / "biomass.csv"
    atomic_write_text(effort_path, "year,effort\n" + "".join(
        f"{t},{_num(e)}\n" for t, e in enumerate(effort)))
    atomic_write_text(biomass_path, "year,biomass\n" + "".join(
        f"{t},{_num(b)}\n" for t, b in enumerate(biomass)))
    return effort_path, biomass_path


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    matplotlib.rcParams["svg.hashsalt"] = "taoopt"
    import matplotlib.pyplot as plt

    return plt


def _save_svg(fig, path: Path) -> None:
    buf = io.StringIO()
    fig.savefig(buf, format="svg", metadata={"Date": None})
    atomic_write_text(path, buf.getvalue())


def plot_convergence(records: Sequence[RunRecord], path: Path, title: str = "") -> Path:
    plt = _pyplot()
    traces = trace_matrix(records)
    mean = traces.mean(axis=0)
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(np.arange(1, traces.shape[1] + 1), mean, lw=1.5)
    if np.all(mean > 0):
        ax.set_yscale("log")
    ax.set_xlabel("iteration")
    ax.set_ylabel("mean best-so-far" if len(records) > 1 else "best-so-far")
    ax.set_title(title)
    fig.tight_layout()
    _save_svg(fig, path)
    plt.close(fig)
    return Path(path)


def plot_fishery(directory: Path, model: FisheryModel) -> tuple[Path, Path]:
    """SVG plots of the ``effort.csv`` / ``biomass.csv`` already in ``directory``."""
    plt = _pyplot()
    directory = Path(directory)
    out = []
    for name, ylabel, ref in (("biomass", "biomass [t]", model.B_u),
                              ("effort", "fishing effort [boats-year]", None)):
        data = np.loadtxt(directory / f"{name}.csv", delimiter=",", skiprows=1, ndmin=2)
        fig, ax = plt.subplots(figsize=(6, 4))
        ax.plot(data[:, 0], data[:, 1], marker="o", ms=3)
        if ref is not None:
            ax.axhline(ref, ls="--", color="grey", lw=1)
        ax.set_xlabel("year")
        ax.set_ylabel(ylabel)
        fig.tight_layout()
        path = directory / f"{name}.svg"
        _save_svg(fig, path)
        plt.close(fig)
        out.append(path)
    return tuple(out)
