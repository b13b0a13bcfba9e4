"""Render experiment CSVs as figures: learning curves, sweeps, comparisons.

Consumes only the documented CSV schemas.  Learning-curve files carry
``run_id,seed,episode,total_reward,mean_reward,epsilon,mean_loss``; sweep
summaries carry ``run_id,seed,param_name,param_value,final_mean_reward``.
Rendering is deterministic: the Agg backend, fixed figure geometry, and
pinned PNG metadata make repeated runs byte-identical.
"""

from __future__ import annotations

import argparse
import csv
import sys
from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)
import numpy as np  # noqa: E402

__all__ = ["PlotJob", "SchemaError", "render", "main"]

KINDS = ("learning_curve", "sweep", "comparison")

CURVE_COLUMNS = (
    "run_id",
    "seed",
    "episode",
    "total_reward",
    "mean_reward",
    "epsilon",
    "mean_loss",
)
SUMMARY_COLUMNS = ("run_id", "seed", "param_name", "param_value", "final_mean_reward")

FIGSIZE = (8.0, 5.0)
DPI = 120
PNG_METADATA = {"Software": "crnplot"}


class SchemaError(ValueError):
    """Input CSV does not match the expected schema."""


@dataclass(frozen=True)
class PlotJob:
    """One figure: input CSVs, figure kind, output path, smoothing window."""

    inputs: tuple
    kind: str
    output: Path
    window: int = 100

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if self.window < 1:
            raise ValueError(f"window must be >= 1, got {self.window}")
        paths = tuple(Path(p) for p in self.inputs)
        if not paths:
            raise ValueError("at least one input CSV is required")
        missing = [str(p) for p in paths if not p.exists()]
        if missing:
            raise ValueError(f"input files not found: {', '.join(missing)}")
        object.__setattr__(self, "inputs", paths)
        object.__setattr__(self, "output", Path(self.output))


def load_rows(path: Path, required) -> list:
    """Rows of one CSV; raises SchemaError naming any missing columns."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        missing = [c for c in required if c not in header]
        if missing:
            raise SchemaError(
                f"{path}: missing columns {', '.join(missing)}"
            )
        rows = list(reader)
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    return rows


def moving_average(values: np.ndarray, window: int) -> np.ndarray:
    window = min(window, values.size)
    kernel = np.ones(window) / window
    return np.convolve(values, kernel, mode="valid")


def _load_traces(paths, window):
    """{run_id: (per-seed smoothed traces, seed-mean smoothed trace)}."""
    by_run = defaultdict(list)
    for path in paths:
        for row in load_rows(path, CURVE_COLUMNS):
            by_run[(row["run_id"], int(row["seed"]))].append(
                float(row["mean_reward"])
            )
    grouped = defaultdict(dict)
    for (run_id, seed), values in by_run.items():
        grouped[run_id][seed] = np.asarray(values)
    out = {}
    for run_id, seeds in sorted(grouped.items()):
        traces = [moving_average(seeds[s], window) for s in sorted(seeds)]
        shortest = min(t.size for t in traces)
        stack = np.array([t[:shortest] for t in traces])
        out[run_id] = (stack, stack.mean(axis=0))
    return out


def _render_learning_curve(job: PlotJob, ax) -> None:
    for run_id, (stack, mean) in _load_traces(job.inputs, job.window).items():
        for trace in stack:
            ax.plot(trace, linewidth=0.6, alpha=0.35, color="grey")
        ax.plot(mean, linewidth=1.8, label=run_id)
    ax.set_xlabel("episode")
    ax.set_ylabel(f"mean reward (window {job.window})")


def _render_comparison(job: PlotJob, ax) -> None:
    for run_id, (_, mean) in _load_traces(job.inputs, job.window).items():
        ax.plot(mean, linewidth=1.8, label=run_id)
    ax.set_xlabel("episode")
    ax.set_ylabel(f"mean reward (window {job.window})")


def _render_sweep(job: PlotJob, ax) -> None:
    # Seed-average final_mean_reward per run_id, one line per curve group.
    # The group is the run_id with its trailing parameter token removed.
    points = defaultdict(list)
    param_name = None
    for path in job.inputs:
        for row in load_rows(path, SUMMARY_COLUMNS):
            param_name = row["param_name"]
            points[row["run_id"]].append(
                (float(row["param_value"]), float(row["final_mean_reward"]))
            )
    groups = defaultdict(list)
    for run_id, entries in points.items():
        value = entries[0][0]
        mean = float(np.mean([e[1] for e in entries]))
        group = run_id.rsplit("_", 1)[0]
        groups[group].append((value, mean))
    spans_decades = False
    for group, entries in sorted(groups.items()):
        entries.sort()
        xs = np.array([e[0] for e in entries])
        ys = np.array([e[1] for e in entries])
        ax.plot(xs, ys, marker="o", label=group)
        if xs.min() > 0 and xs.max() / xs.min() >= 1e3:
            spans_decades = True
    if spans_decades:
        ax.set_xscale("log")
    ax.set_xlabel(param_name or "parameter")
    ax.set_ylabel("final mean reward")


_RENDERERS = {
    "learning_curve": _render_learning_curve,
    "sweep": _render_sweep,
    "comparison": _render_comparison,
}


def render(job: PlotJob) -> Path:
    """Write one image for the job; returns the output path."""
    fig, ax = plt.subplots(figsize=FIGSIZE, dpi=DPI)
    try:
        _RENDERERS[job.kind](job, ax)
        ax.legend(fontsize=8)
        ax.grid(True, alpha=0.3)
        fig.tight_layout()
        job.output.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(job.output, format="png", metadata=PNG_METADATA)
    finally:
        plt.close(fig)
    return job.output


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="crnplot", description="Render experiment CSVs as figures"
    )
    parser.add_argument("--kind", required=True, choices=KINDS)
    parser.add_argument("--in", dest="inputs", required=True, nargs="+")
    parser.add_argument("--out", required=True)
    parser.add_argument("--window", type=int, default=100)
    args = parser.parse_args(argv)
    try:
        job = PlotJob(
            inputs=tuple(args.inputs),
            kind=args.kind,
            output=Path(args.out),
            window=args.window,
        )
        path = render(job)
    except (SchemaError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
