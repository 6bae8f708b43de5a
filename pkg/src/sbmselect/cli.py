"""Command-line front end.

Three subcommands: ``estimate`` scores candidate community counts on a
graph file and reports the argmax, ``simulate`` sweeps model-recovery
scenarios over replicated synthetic graphs, and ``bench`` times the
detection and criterion phases over a grid of graph sizes.  Output is CSV
(schema versioned by a leading comment line) or JSON mirroring the same
fields; all randomness flows from ``--seed``, and a generated seed is
printed to stderr when the flag is absent so any run can be replayed.
"""

from __future__ import annotations

import argparse
import csv
import json
import secrets
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .criteria import METHODS, PenaltyConfig
from .graph import Graph, load_adjacency_csv, load_edge_list
from .sampler import SBMParams, derive_seed, planted_partition, sample_sbm
from .selector import select_k
from .spectral import DetectorConfig

__all__ = ["main", "build_parser", "run_simulation", "expand_settings"]

_SCHEMA = {
    "estimate": "# sbmselect estimate v1",
    "detail": "# sbmselect simulate detail v1",
    "summary": "# sbmselect simulate summary v1",
    "bench": "# sbmselect bench v1",
}

# Fixed offset separating detector seeds from sampler seeds derived off the
# same replication seed, so clustering restarts never replay sampling draws.
_DETECTOR_SEED_OFFSET = 0x5EEDD15C


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on bad flags; the contract here is exit 1."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {text}")
    return value


def _positive_float(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return value


def _int_grid(text: str) -> list[int]:
    return [int(tok) for tok in text.split(",") if tok.strip()]


def _float_grid(text: str) -> list[float]:
    return [float(tok) for tok in text.split(",") if tok.strip()]


def _methods_list(text: str) -> list[str]:
    methods = [tok.strip().lower() for tok in text.split(",") if tok.strip()]
    for m in methods:
        if m not in METHODS:
            raise argparse.ArgumentTypeError(
                f"unknown method {m!r}; choose from {','.join(METHODS)}")
    if not methods:
        raise argparse.ArgumentTypeError("at least one method is required")
    return methods


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sbmselect",
                     description="Estimate the number of communities in a "
                                 "network with penalized likelihood criteria.")
    sub = parser.add_subparsers(dest="command", required=True)

    est = sub.add_parser("estimate", help="score candidate k on a graph file")
    est.add_argument("--input", required=True, help="path to the graph file")
    est.add_argument("--format", choices=("edgelist", "adjcsv"),
                     default="edgelist")
    est.add_argument("--indexing", type=int, choices=(0, 1), default=1,
                     help="node-id base of edge-list files (default 1)")
    est.add_argument("--kmax", type=_positive_int, default=None,
                     help="largest candidate k (default min(n, 10))")
    est.add_argument("--method", choices=METHODS, default="dnml")
    est.add_argument("--epsilon", type=_positive_float, default=0.5)
    est.add_argument("--cbic-lambda", type=_positive_float, default=1.0)
    est.add_argument("--seed", type=int, default=None)
    est.add_argument("--output", default=None,
                     help="write the per-k table here instead of stdout")
    est.add_argument("--json", action="store_true",
                     help="emit JSON instead of CSV")

    sim = sub.add_parser("simulate", help="replicated recovery experiments")
    sim.add_argument("--scenario", required=True,
                     choices=("vary-n", "vary-b", "sparsity", "custom"))
    sim.add_argument("--n", type=_positive_int, default=None,
                     help="node count for single-n scenarios")
    sim.add_argument("--n-grid", type=_int_grid, default=None,
                     help="comma-separated node counts (vary-n)")
    sim.add_argument("--k0", type=_positive_int, default=5,
                     help="true community count of the generating model")
    sim.add_argument("--a", type=float, default=None,
                     help="within-community edge probability")
    sim.add_argument("--b", type=float, default=None,
                     help="between-community edge probability")
    sim.add_argument("--b-grid", type=_float_grid, default=None,
                     help="comma-separated between probabilities (vary-b)")
    sim.add_argument("--rho-grid", type=_float_grid, default=None,
                     help="comma-separated sparsity scales (sparsity)")
    sim.add_argument("--s-within", type=float, default=5.0,
                     help="within entry of the base matrix S (sparsity)")
    sim.add_argument("--s-between", type=float, default=1.0,
                     help="between entry of the base matrix S (sparsity)")
    sim.add_argument("--pi", default="balanced",
                     help="'balanced' or comma-separated community weights")
    sim.add_argument("--replications", type=_positive_int, default=20)
    sim.add_argument("--methods", type=_methods_list, default=["dnml"])
    sim.add_argument("--kmax", type=_positive_int, default=10)
    sim.add_argument("--epsilon", type=_positive_float, default=0.5)
    sim.add_argument("--cbic-lambda", type=_positive_float, default=1.0)
    sim.add_argument("--seed", type=int, default=None)
    sim.add_argument("--jobs", type=_positive_int, default=1,
                     help="concurrent replications")
    sim.add_argument("--output", required=True, help="detail CSV path")
    sim.add_argument("--summary", default=None,
                     help="summary CSV path (default: OUTPUT with a "
                          ".summary.csv suffix)")

    ben = sub.add_parser("bench", help="time detection vs criterion phases")
    ben.add_argument("--n-grid", type=_int_grid, required=True)
    ben.add_argument("--kmax", type=_positive_int, default=10)
    ben.add_argument("--k0", type=_positive_int, default=5)
    ben.add_argument("--a", type=float, default=0.8)
    ben.add_argument("--b", type=float, default=0.3)
    ben.add_argument("--method", choices=METHODS, default="dnml")
    ben.add_argument("--repeats", type=_positive_int, default=1,
                     help="repeat each size and keep the fastest times")
    ben.add_argument("--seed", type=int, default=None)
    ben.add_argument("--output", default=None,
                     help="timing CSV path (default stdout)")
    return parser


def _resolve_seed(seed: int | None) -> int:
    if seed is not None:
        return seed
    generated = secrets.randbits(63)
    print(f"generated seed: {generated}", file=sys.stderr)
    return generated


def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.12g}"
    return "" if value is None else str(value)


def _write_csv(path: str | None, schema: str, header: list[str],
               rows: list[list], extra_comments: list[str] = ()) -> None:
    def emit(fh) -> None:
        fh.write(schema + "\n")
        for comment in extra_comments:
            fh.write(comment + "\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])

    if path is None:
        emit(sys.stdout)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            emit(fh)


# --- estimate -----------------------------------------------------------


def _load_graph(args) -> Graph:
    if args.format == "edgelist":
        return load_edge_list(args.input, indexing=args.indexing)
    return load_adjacency_csv(args.input)


def cmd_estimate(args) -> int:
    try:
        g = _load_graph(args)
    except (OSError, ValueError) as exc:
        print(f"sbmselect estimate: cannot read input: {exc}", file=sys.stderr)
        return 2
    seed = _resolve_seed(args.seed)
    penalty = PenaltyConfig(epsilon=args.epsilon, cbic_lambda=args.cbic_lambda)
    detector = DetectorConfig(seed=seed)
    try:
        result = select_k(g, k_max=args.kmax, method=args.method,
                          penalty=penalty, detector=detector)
    except (ValueError, RuntimeError) as exc:
        print(f"sbmselect estimate: {exc}", file=sys.stderr)
        return 1
    if args.json:
        payload = {
            "schema": "sbmselect-estimate-v1",
            "input": args.input,
            "method": result.method,
            "k_max": result.k_max,
            "seed": seed,
            "k_hat": result.k_hat,
            "records": [
                {"k": r.k, "log_score": r.log_score, "penalty": r.penalty,
                 "penalized": r.penalized, "error": r.error}
                for r in result.records
            ],
        }
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
        if args.output is None:
            sys.stdout.write(text)
        else:
            with open(args.output, "w", encoding="utf-8") as fh:
                fh.write(text)
    else:
        rows = [[r.k, r.log_score, r.penalty, r.penalized, r.error or ""]
                for r in result.records]
        _write_csv(args.output, _SCHEMA["estimate"],
                   ["k", "log_score", "penalty", "penalized", "error"], rows,
                   extra_comments=[f"# method = {result.method}",
                                   f"# seed = {seed}",
                                   f"# k_hat = {result.k_hat}"])
    if args.output is not None:
        print(f"k_hat = {result.k_hat}")
    return 0


# --- simulate -----------------------------------------------------------


@dataclass(frozen=True)
class Setting:
    """One generating model in a scenario sweep."""

    scenario: str
    index: int
    n: int
    k0: int
    a: float | None
    b: float | None
    rho: float | None
    pi_label: str
    params: SBMParams


def _parse_pi(text: str, k0: int) -> tuple[str, np.ndarray | None]:
    if text.strip().lower() == "balanced":
        return "balanced", None
    weights = np.asarray(_float_grid(text), dtype=np.float64)
    if weights.size != k0:
        raise ValueError(f"pi has {weights.size} entries but k0={k0}")
    return text.strip(), weights


def expand_settings(args) -> list[Setting]:
    """Expand CLI scenario flags into concrete generating models.

    Raises ValueError on an inconsistent grid (empty, wrong pi length, or
    probabilities outside [0, 1]).
    """
    pi_label, pi = _parse_pi(args.pi, args.k0)
    settings: list[Setting] = []

    def add(n: int, a: float | None, b: float | None, rho: float | None,
            params: SBMParams) -> None:
        settings.append(Setting(scenario=args.scenario, index=len(settings),
                                n=n, k0=args.k0, a=a, b=b, rho=rho,
                                pi_label=pi_label, params=params))

    if args.scenario == "vary-n":
        grid = args.n_grid if args.n_grid is not None else \
            [100, 150, 200, 250, 300, 350]
        a = args.a if args.a is not None else 0.8
        b = args.b if args.b is not None else 0.3
        if not grid:
            raise ValueError("empty n-grid")
        for n in grid:
            add(n, a, b, None, planted_partition(args.k0, a, b, pi))
    elif args.scenario == "vary-b":
        n = args.n if args.n is not None else 200
        a = args.a if args.a is not None else 0.9
        grid = args.b_grid if args.b_grid is not None else [0.3, 0.4, 0.5]
        if not grid:
            raise ValueError("empty b-grid")
        for b in grid:
            add(n, a, b, None, planted_partition(args.k0, a, b, pi))
    elif args.scenario == "sparsity":
        n = args.n if args.n is not None else 300
        s = np.full((args.k0, args.k0), args.s_between)
        np.fill_diagonal(s, args.s_within)
        grid = args.rho_grid if args.rho_grid is not None else \
            [0.05, 0.10, 0.15, 0.20]
        if not grid:
            raise ValueError("empty rho-grid")
        if pi is None:
            pi_vec = np.full(args.k0, 1.0 / args.k0)
        else:
            pi_vec = pi
        for rho in grid:
            add(n, None, None, rho, SBMParams.from_sparsity(pi_vec, s, rho))
    elif args.scenario == "custom":
        if args.n is None or args.a is None or args.b is None:
            raise ValueError("custom scenario requires --n, --a, and --b")
        add(args.n, args.a, args.b, None,
            planted_partition(args.k0, args.a, args.b, pi))
    else:  # unreachable behind argparse choices
        raise ValueError(f"unknown scenario {args.scenario!r}")
    return settings


def _run_one(setting: Setting, replication: int, rep_seed: int,
             methods: list[str], k_max: int,
             penalty: PenaltyConfig) -> list[dict]:
    g, _ = sample_sbm(setting.params, setting.n, rep_seed)
    detector = DetectorConfig(seed=derive_seed(rep_seed, _DETECTOR_SEED_OFFSET))
    rows = []
    for method in methods:
        result = select_k(g, k_max=min(k_max, setting.n), method=method,
                          penalty=penalty, detector=detector)
        rows.append({
            "setting": setting, "replication": replication, "method": method,
            "k_hat": result.k_hat, "detection_ns": result.detection_ns,
            "criterion_ns": result.criterion_ns,
        })
    return rows


def run_simulation(settings: list[Setting], replications: int,
                   methods: list[str], seed: int, k_max: int,
                   penalty: PenaltyConfig, jobs: int = 1) -> list[dict]:
    """All (setting, replication, method) results, deterministically ordered.

    Replication r of setting s draws from seed XOR (s << 32) XOR r, so rows
    are reproducible independent of the worker count.
    """
    tasks = []
    for setting in settings:
        setting_seed = derive_seed(seed, setting.index << 32)
        for r in range(replications):
            tasks.append((setting, r, derive_seed(setting_seed, r)))

    def work(task):
        setting, r, rep_seed = task
        return _run_one(setting, r, rep_seed, methods, k_max, penalty)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(work, tasks))
    else:
        chunks = [work(t) for t in tasks]
    rows = [row for chunk in chunks for row in chunk]
    rows.sort(key=lambda r: (r["setting"].index, r["replication"],
                             methods.index(r["method"])))
    return rows


_DETAIL_HEADER = ["scenario", "setting", "n", "k0", "a", "b", "rho", "pi",
                  "replication", "method", "k_hat", "detection_ns",
                  "criterion_ns"]
_SUMMARY_HEADER = ["scenario", "setting", "n", "k0", "a", "b", "rho", "pi",
                   "method", "replications", "mean_k_hat", "share_k0"]


def _detail_row(row: dict) -> list:
    s = row["setting"]
    return [s.scenario, s.index, s.n, s.k0, s.a, s.b, s.rho, s.pi_label,
            row["replication"], row["method"], row["k_hat"],
            row["detection_ns"], row["criterion_ns"]]


def summarize(rows: list[dict], methods: list[str]) -> list[list]:
    """Per (setting, method): mean estimated k and share hitting k0."""
    grouped: dict[tuple[int, str], list[dict]] = {}
    order: list[tuple[int, str]] = []
    for row in rows:
        key = (row["setting"].index, row["method"])
        if key not in grouped:
            grouped[key] = []
            order.append(key)
        grouped[key].append(row)
    order.sort(key=lambda key: (key[0], methods.index(key[1])))
    out = []
    for key in order:
        group = grouped[key]
        s = group[0]["setting"]
        k_hats = [r["k_hat"] for r in group]
        mean = sum(k_hats) / len(k_hats)
        share = sum(1 for k in k_hats if k == s.k0) / len(k_hats)
        out.append([s.scenario, s.index, s.n, s.k0, s.a, s.b, s.rho,
                    s.pi_label, key[1], len(k_hats), mean, share])
    return out


def cmd_simulate(args) -> int:
    try:
        settings = expand_settings(args)
    except ValueError as exc:
        print(f"sbmselect simulate: {exc}", file=sys.stderr)
        return 1
    seed = _resolve_seed(args.seed)
    penalty = PenaltyConfig(epsilon=args.epsilon, cbic_lambda=args.cbic_lambda)
    rows = run_simulation(settings, args.replications, args.methods, seed,
                          args.kmax, penalty, jobs=args.jobs)
    summary_path = args.summary if args.summary is not None else \
        args.output + ".summary.csv"
    seed_comment = f"# seed = {seed}"
    _write_csv(args.output, _SCHEMA["detail"], _DETAIL_HEADER,
               [_detail_row(r) for r in rows], extra_comments=[seed_comment])
    _write_csv(summary_path, _SCHEMA["summary"], _SUMMARY_HEADER,
               summarize(rows, args.methods), extra_comments=[seed_comment])
    print(f"wrote {len(rows)} rows to {args.output}; "
          f"summary in {summary_path}")
    return 0


# --- bench --------------------------------------------------------------


def cmd_bench(args) -> int:
    if not args.n_grid:
        print("sbmselect bench: empty n-grid", file=sys.stderr)
        return 1
    seed = _resolve_seed(args.seed)
    rows = []
    for i, n in enumerate(args.n_grid):
        if n < 1:
            print(f"sbmselect bench: invalid n={n}", file=sys.stderr)
            return 1
        params = planted_partition(args.k0, args.a, args.b)
        g, _ = sample_sbm(params, n, derive_seed(seed, i))
        detector = DetectorConfig(seed=derive_seed(seed, i ^ _DETECTOR_SEED_OFFSET))
        best_detect = best_criterion = None
        k_hat = None
        for _ in range(args.repeats):
            result = select_k(g, k_max=min(args.kmax, n), method=args.method,
                              penalty=PenaltyConfig(), detector=detector)
            k_hat = result.k_hat
            if best_detect is None or result.detection_ns < best_detect:
                best_detect = result.detection_ns
            if best_criterion is None or result.criterion_ns < best_criterion:
                best_criterion = result.criterion_ns
        rows.append([n, min(args.kmax, n), args.method, k_hat,
                     best_detect, best_criterion])
    _write_csv(args.output, _SCHEMA["bench"],
               ["n", "k_max", "method", "k_hat", "detection_ns",
                "criterion_ns"], rows,
               extra_comments=[f"# seed = {seed}",
                               f"# repeats = {args.repeats}"])
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "estimate":
        return cmd_estimate(args)
    if args.command == "simulate":
        return cmd_simulate(args)
    return cmd_bench(args)


if __name__ == "__main__":
    raise SystemExit(main())
