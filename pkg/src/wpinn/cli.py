"""Command-line entry point binding the eight situations to training runs.

`wpinn run` trains one method on one situation and writes paper-comparable
artifacts into the output directory:

    loss.csv       iteration,eq_term,boundary_term,penalty_term,total
    errors.json    test errors (total / equation / boundary) plus run identity
    metadata.json  full run configuration; re-running from it reproduces
                   loss.csv byte for byte
    u.net, f.net, weights/<role>.net   parameter checkpoints

`wpinn compare A B` prints the side-by-side error table for two completed runs
of the same situation.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import List, Optional

import numpy as np

from . import nets
from .geometry import batch_to_csv, sample_batch, situation_data
from .losses import make_problem
from .metrics import test_error
from .training import NonFiniteGradient, STANDARD, WEIGHTED, TrainConfig, TrainingReport, train

LOSS_HEADER = "iteration,eq_term,boundary_term,penalty_term,total"


@dataclass
class RunManifest:
    situation: int
    method: str = WEIGHTED
    dim: int = 10
    iterations: int = 10000
    n1: int = 1000
    seed: int = 0
    lr_min: float = 1e-3
    lr_max: float = 1e-3
    log_every: int = 10
    per_direction: bool = False
    h: float = 1e-3
    n3: int = 10000
    n4: int = 1000
    solution_width: Optional[int] = None
    weight_width: Optional[int] = None
    update_scheme: str = "simultaneous"

    def __post_init__(self):
        if self.situation not in range(1, 9):
            raise ValueError(f"situation must be in 1..8, got {self.situation}")
        if self.method not in (STANDARD, WEIGHTED):
            raise ValueError(f"unknown method {self.method!r}")
        if self.dim < 1:
            raise ValueError("dimension must be >= 1")

    def train_config(self) -> TrainConfig:
        situation = situation_data(self.situation, self.dim)
        problem = make_problem(situation, h=self.h)
        sw = [self.dim + 1] + [self.solution_width] * 3 + [1] if self.solution_width else None
        ww = [self.dim + 1] + [self.weight_width] * 3 + [1] if self.weight_width else None
        return TrainConfig(
            problem=problem,
            method=self.method,
            iterations=self.iterations,
            n1=self.n1,
            seed=self.seed,
            solution_widths=sw,
            weight_widths=ww,
            lr_min=self.lr_min,
            lr_max=self.lr_max,
            log_every=self.log_every,
            per_direction=self.per_direction,
            update_scheme=self.update_scheme,
        )


def manifest_from_metadata(path) -> RunManifest:
    with open(path) as fh:
        meta = json.load(fh)
    fields = {k: meta[k] for k in RunManifest.__dataclass_fields__ if k in meta}
    return RunManifest(**fields)


def write_loss_csv(path, rows) -> None:
    with open(path, "w") as fh:
        fh.write(LOSS_HEADER + "\n")
        for it, breakdown in rows:
            fh.write(breakdown.csv_row(it) + "\n")


def _write_checkpoints(out: Path, report: TrainingReport) -> None:
    nets.save(report.nets.u, out / "u.net")
    nets.save(report.nets.f, out / "f.net")
    if report.nets.weights is not None:
        wdir = out / "weights"
        wdir.mkdir(exist_ok=True)
        for role, net in report.nets.weights.nets.items():
            nets.save(net, wdir / f"{role}.net")


def test_rng_for_seed(seed: int) -> np.random.Generator:
    """Test-point stream: third child of the run seed (training uses the first
    two for initialization and batch sampling)."""
    return np.random.default_rng(np.random.SeedSequence(seed).spawn(3)[2])


def run_experiment(manifest: RunManifest, out_dir, gnuplot: bool = False, dump_batch: bool = False) -> int:
    """Train, evaluate, and write all artifacts; returns the process exit code."""
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        config = manifest.train_config()
    except (ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2

    try:
        report = train(config)
    except NonFiniteGradient as err:
        report = err.report  # type: ignore[attr-defined]
        write_loss_csv(out / "loss.csv", report.rows)
        meta = asdict(manifest)
        meta["aborted"] = str(err)
        with open(out / "metadata.json", "w") as fh:
            json.dump(meta, fh, indent=2)
        print(f"aborted: {err}", file=sys.stderr)
        return 1

    try:
        errors = test_error(config.problem, report.nets.u, report.nets.f,
                            test_rng_for_seed(manifest.seed), manifest.n3, manifest.n4)
        write_loss_csv(out / "loss.csv", report.rows)
        payload = errors.to_dict()
        payload.update({"situation": manifest.situation, "method": manifest.method, "seed": manifest.seed})
        with open(out / "errors.json", "w") as fh:
            json.dump(payload, fh, indent=2)
        meta = asdict(manifest)
        meta["wall_seconds"] = report.wall_seconds
        with open(out / "metadata.json", "w") as fh:
            json.dump(meta, fh, indent=2)
        _write_checkpoints(out, report)
        if gnuplot:
            with open(out / "loss.dat", "w") as fh:
                for it, breakdown in report.rows:
                    fh.write(f"{it} {breakdown.total!r}\n")
        if dump_batch:
            rng = np.random.default_rng(np.random.SeedSequence(manifest.seed).spawn(4)[3])
            batch = sample_batch(config.problem.domain, config.problem.T, manifest.n1, rng)
            batch_to_csv(batch, out / "batch.csv")
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    return 0


def comparison_table(errors_a: dict, errors_b: dict) -> str:
    """Side-by-side Total/Eqn./Bnd. table plus a per-column ratio row."""
    if errors_a["situation"] != errors_b["situation"]:
        raise ValueError(
            f"runs compare different situations: {errors_a['situation']} vs {errors_b['situation']}"
        )
    if {errors_a["method"], errors_b["method"]} == {STANDARD, WEIGHTED}:
        if errors_a["method"] != STANDARD:
            errors_a, errors_b = errors_b, errors_a
        ratio_label = "weighted/standard"
    else:
        ratio_label = f"{errors_b['method']}/{errors_a['method']}"
    cols = ("total", "equation_error", "boundary_error")
    lines = [f"Situation {errors_a['situation']}"]
    lines.append(f"{'':<20}{'Total':>12}{'Eqn.':>12}{'Bnd.':>12}")
    for e in (errors_a, errors_b):
        lines.append(f"{e['method']:<20}" + "".join(f"{e[c]:>12.3e}" for c in cols))
    lines.append(f"{ratio_label:<20}" + "".join(f"{errors_b[c] / errors_a[c]:>12.3e}" for c in cols))
    return "\n".join(lines)


def compare(dir_a, dir_b) -> str:
    reports = []
    for d in (dir_a, dir_b):
        with open(Path(d) / "errors.json") as fh:
            reports.append(json.load(fh))
    return comparison_table(reports[0], reports[1])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wpinn", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="train one method on one situation")
    run.add_argument("--situation", type=int, choices=range(1, 9), help="experiment id (1..8)")
    run.add_argument("--method", choices=(STANDARD, WEIGHTED), default=WEIGHTED)
    run.add_argument("--dim", type=int, default=10)
    run.add_argument("--iterations", type=int, default=10000)
    run.add_argument("--n1", type=int, default=1000)
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--lr", type=float, default=1e-3, help="learning rate for both players")
    run.add_argument("--lr-max", type=float, default=None, help="override the ascent learning rate")
    run.add_argument("--out", default="run_out", help="output directory")
    run.add_argument("--log-every", type=int, default=10)
    run.add_argument("--per-direction-weights", action="store_true",
                     help="one diffusion weight per coordinate direction")
    run.add_argument("--h", type=float, default=1e-3, help="finite-difference step")
    run.add_argument("--n3", type=int, default=10000, help="interior/boundary test points")
    run.add_argument("--n4", type=int, default=1000, help="slice test points")
    run.add_argument("--solution-width", type=int, default=None)
    run.add_argument("--weight-width", type=int, default=None)
    run.add_argument("--gnuplot", action="store_true", help="also write a two-column loss.dat")
    run.add_argument("--dump-batch", action="store_true", help="dump one sampled batch as CSV")
    run.add_argument("--from-metadata", default=None,
                     help="re-run the configuration recorded in a metadata.json")

    cmp_ = sub.add_parser("compare", help="tabulate two completed runs side by side")
    cmp_.add_argument("dir_a")
    cmp_.add_argument("dir_b")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    if argv and argv[0].startswith("--"):
        argv = ["run"] + argv  # bare flags mean `run`
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "compare":
        try:
            print(compare(args.dir_a, args.dir_b))
        except (OSError, ValueError, KeyError) as err:
            print(f"error: {err}", file=sys.stderr)
            return 2
        return 0

    if args.from_metadata:
        try:
            manifest = manifest_from_metadata(args.from_metadata)
        except (OSError, ValueError, KeyError) as err:
            print(f"error: {err}", file=sys.stderr)
            return 2
    else:
        if args.situation is None:
            parser.error("--situation is required (or use --from-metadata)")
        manifest = RunManifest(
            situation=args.situation,
            method=args.method,
            dim=args.dim,
            iterations=args.iterations,
            n1=args.n1,
            seed=args.seed,
            lr_min=args.lr,
            lr_max=args.lr if args.lr_max is None else args.lr_max,
            log_every=args.log_every,
            per_direction=args.per_direction_weights,
            h=args.h,
            n3=args.n3,
            n4=args.n4,
            solution_width=args.solution_width,
            weight_width=args.weight_width,
        )
    return run_experiment(manifest, args.out, gnuplot=args.gnuplot, dump_batch=args.dump_batch)


if __name__ == "__main__":
    sys.exit(main())
