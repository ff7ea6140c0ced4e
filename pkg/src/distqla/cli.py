"""Command-line runner: build instances, run protocols, sweep grids and verify.

Subcommands ``instance``, ``run``, ``sweep`` and ``verify``. Values resolve
as flags > ``--config`` JSON file > built-in defaults. Exit status is 0 iff
nothing failed; usage errors exit with 2.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np

from . import instances as I
from .acceptance import FAULTS, parse_suite, run_suite
from .baselines import classical_naive_regression, sq_rank2_demo, tv_distance
from .comm import CSV_COLUMNS, MessageLedger, Topology, csv_row
from .errors import ContractError, DistQLAError, TopologyViolationError
from .protocols import (
    coordinator_regression,
    coordinator_sum_regression,
    hamiltonian_sim_coordinator,
    hamiltonian_sim_two_party,
    regression_case1_b_to_a,
    regression_case2_a_to_b,
    regression_case3_two_way,
)
from .vtaa import vtaa_solve

DEFAULTS = {
    "n": 8,
    "r": 2,
    "kappa_target": 4.0,
    "eps": 1e-3,
    "delta": None,
    "seed": 0,
    "protocol": None,
    "kind": None,
    "out": None,
    "params": {},
    "options": {},
}
GRID_FLAGS = ("n", "r", "kappa_target", "eps", "delta", "seed")


class UsageError(Exception):
    pass


# --------------------------------------------------------------------------
# Instance kinds


def _rng(seed: int, salt: int = 0) -> np.random.Generator:
    return np.random.default_rng([int(seed), salt])


def _random_subset(rng: np.random.Generator, size: int, proper: bool = True) -> list[int]:
    hi = size - 1 if proper else size
    k = int(rng.integers(1, max(1, hi) + 1))
    return sorted(int(i) for i in rng.choice(size, k, replace=False))


def _bits(rng: np.random.Generator, n: int) -> list[int]:
    x = rng.integers(0, 2, n)
    x[rng.integers(n)] = 1
    return [int(v) for v in x]


def _pm1(rng: np.random.Generator, d: int) -> list[float]:
    return [float(v) for v in rng.choice([-1.0, 1.0], 2**d)]


def _identity(p, seed):
    n = int(p["n"])
    b = _rng(seed).standard_normal(n)
    return I.Instance("identity", [np.eye(n)], [b], "single", {"A": I.ALICE, "b": I.BOB}, {"n": n, "seed": seed}, I.analyze(np.eye(n), b))


def _disjointness(p, seed):
    rng = _rng(seed)
    l = int(p.get("l", p["n"]))
    S = p.get("S") or _random_subset(rng, l)
    T = p.get("T") or _random_subset(rng, l)
    return I.disjointness_regression(S, T, l, p.get("ambient"), p.get("eps_instance"))


def _gamma(p, seed):
    rng = _rng(seed)
    n = int(p["n"])
    if "S" in p and "T" in p:
        return I.gamma_regression(p["S"], p["T"], n)
    S = set(_random_subset(rng, n))
    rest = [i for i in range(n) if i not in S]
    T = set(int(i) for i in rng.choice(rest, int(rng.integers(1, len(rest) + 1)), replace=False)) if rest else set()
    if rng.random() < 0.5 or not T:
        T.add(min(S))
    return I.gamma_regression(S, T, n)


def _scaled(p, seed):
    rng = _rng(seed)
    n = int(p["n"])
    return I.scaled_disjointness_regression(p.get("S") or _random_subset(rng, n), p.get("T") or _random_subset(rng, n), n)


def _permutation(p, seed):
    rng = _rng(seed)
    n = int(p["n"])
    perm = p.get("perm") or [int(v) for v in rng.permutation(n)]
    return I.permutation_index_instance(perm, int(p.get("j", rng.integers(len(perm)))))


def _index_pauli(p, seed):
    rng = _rng(seed)
    x = p.get("x") or [int(v) for v in rng.integers(0, 2, int(p["n"]))]
    return I.index_pauli_instance(x, int(p.get("j", rng.integers(len(x)))))


def _appendixA(p, seed):
    rng = _rng(seed)
    m = int(p.get("m", p["n"]))
    n = int(p["n"])
    bits = p.get("bits") or rng.integers(0, 2, (m, n)).tolist()
    return I.appendixA_index_regression(bits, int(p.get("i", rng.integers(m))), int(p.get("j", rng.integers(n))))


def _fourier(p, seed):
    rng = _rng(seed)
    d = int(p.get("d", max(1, round(math.log2(int(p["n"]))))))
    return I.fourier_sampling_instance(p.get("f") or _pm1(rng, d), p.get("g") or _pm1(rng, d))


def _hadamard(p, seed):
    rng = _rng(seed)
    d = int(p.get("d", max(1, round(math.log2(int(p["n"]))))))
    return I.hadamard_hamiltonian_instance(p.get("f") or _pm1(rng, d), p.get("g") or _pm1(rng, d))


def _multiparty(p, seed):
    rng = _rng(seed)
    n, r = int(p["n"]), int(p["r"])
    sets = p.get("sets") or [_random_subset(rng, n) for _ in range(r)]
    return I.multiparty_regression(sets, n)


def _sq(p, seed):
    rng = _rng(seed)
    n = int(p["n"])
    return I.sq_counterexample(p.get("a") or _bits(rng, n), p.get("b") or _bits(rng, n), int(p.get("variant", 1)))


def _random(p, seed):
    return I.random_two_party(int(p.get("m", p["n"])), int(p["n"]), float(p["kappa_target"]), seed)


def _random_split(p, seed):
    return I.random_split_regression(int(p["n"]), int(p["r"]), float(p["kappa_target"]), seed)


def _random_sum(p, seed):
    return I.random_sum_regression(int(p["n"]), int(p["r"]), float(p["kappa_target"]), seed)


def _random_hamiltonian(p, seed):
    return I.random_hamiltonian(int(p["n"]), int(p["r"]), float(p.get("t", 1.0)), seed, float(p.get("total_norm", 2.0)))


KINDS: dict[str, Callable[[dict, int], I.Instance]] = {
    "identity": _identity,
    "random": _random,
    "random-split": _random_split,
    "random-sum": _random_sum,
    "random-hamiltonian": _random_hamiltonian,
    "disjointness": _disjointness,
    "gamma": _gamma,
    "scaled-disjointness": _scaled,
    "permutation": _permutation,
    "index-pauli": _index_pauli,
    "appendixA": _appendixA,
    "fourier": _fourier,
    "hadamard-hamiltonian": _hadamard,
    "multiparty": _multiparty,
    "sq": _sq,
}


def build_instance(kind: str, params: dict, seed: int) -> I.Instance:
    if kind not in KINDS:
        raise UsageError(f"unknown instance kind {kind!r}; choose from {', '.join(KINDS)}")
    try:
        return KINDS[kind](params, int(seed))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, DistQLAError):
            raise
        raise UsageError(f"bad parameters for {kind}: {exc}") from exc


def instance_topology(inst: I.Instance) -> str:
    if inst.hamiltonian:
        return "two_party" if inst.r == 1 else "coordinator"
    return {"single": "two_party", "stack": "coordinator_stack", "sum": "coordinator_sum"}[inst.combine]


# --------------------------------------------------------------------------
# Protocols


@dataclass
class Requirement:
    topologies: tuple[str, ...]
    hamiltonian: bool = False


PROTOCOLS: dict[str, Requirement] = {
    "case1": Requirement(("two_party",)),
    "case2": Requirement(("two_party",)),
    "case3": Requirement(("two_party",)),
    "coord": Requirement(("coordinator_stack",)),
    "coord-sum": Requirement(("coordinator_sum",)),
    "hsim2": Requirement(("two_party",), hamiltonian=True),
    "hsim-coord": Requirement(("two_party", "coordinator"), hamiltonian=True),
    "vtaa": Requirement(("two_party", "coordinator_stack")),
    "classical-naive": Requirement(("two_party",)),
    "sq-demo": Requirement(("two_party",)),
}


def check_compatible(protocol: str, inst: I.Instance) -> None:
    if protocol not in PROTOCOLS:
        raise UsageError(f"unknown protocol {protocol!r}; choose from {', '.join(PROTOCOLS)}")
    req = PROTOCOLS[protocol]
    have = instance_topology(inst) + (" hamiltonian" if inst.hamiltonian else " regression")
    want = "/".join(req.topologies) + (" hamiltonian" if req.hamiltonian else " regression")
    if inst.hamiltonian != req.hamiltonian or instance_topology(inst) not in req.topologies:
        raise TopologyViolationError(f"protocol {protocol} needs a {want} instance, but {inst.kind} is a {have} instance")


def _row_for(protocol: str, inst: I.Instance, eps: float, delta, seed: int, options: dict) -> dict:
    meta = inst.metadata
    kappa = float(meta.get("kappa", float("nan")))
    gamma = float(meta.get("gamma", float("nan")))
    n = inst.matrices[0].shape[1]
    key = dict(n=n, r=inst.r, kappa=kappa, gamma=gamma, seed=seed)
    t = float(options.get("t", inst.params.get("t", 1.0)))
    if protocol == "case1":
        o = regression_case1_b_to_a(inst.A, inst.b, mode=options.get("mode", "repeat"))
    elif protocol == "case2":
        o = regression_case2_a_to_b(inst.A, inst.b, mode=options.get("mode", "repeat"))
    elif protocol == "case3":
        o = regression_case3_two_way(inst.A, inst.b, schedule=options.get("schedule", "exact"), seed=seed)
    elif protocol == "coord":
        o = coordinator_regression(inst.matrices, inst.vectors, delta=delta, eps=eps)
    elif protocol == "coord-sum":
        o = coordinator_sum_regression(inst.matrices, inst.vectors, delta=delta, eps=eps)
    elif protocol == "hsim2":
        o = hamiltonian_sim_two_party(inst.A, inst.vectors[0], t, direction=options.get("direction", "BtoA"))
    elif protocol == "hsim-coord":
        o = hamiltonian_sim_coordinator(inst.matrices, inst.vectors[0], t, eps=eps)
    elif protocol == "vtaa":
        A = inst.matrices if inst.r > 1 else inst.A
        o = vtaa_solve(A, inst.b, eps=eps, simulate=options.get("simulate", "eigen"))
    elif protocol == "classical-naive":
        c = classical_naive_regression(inst.A, inst.b, direction=options.get("direction", "BtoA"), seed=seed)
        return csv_row(
            protocol, c.ledger, success_prob=1.0, fidelity=1.0, tv_distance=c.tv_distance, **key
        )
    elif protocol == "sq-demo":
        if inst.kind != "sq_counterexample":
            raise ContractError(f"sq-demo needs an sq instance, got {inst.kind}")
        rep = sq_rank2_demo(inst, draws=options.get("draws"), seed=seed)
        empirical = np.bincount(rep.samples, minlength=rep.distribution.size) / rep.draws
        ledger = MessageLedger(Topology("two_party_one_way_BtoA"))
        return csv_row(
            protocol,
            ledger,
            success_prob=float(rep.correct),
            fidelity=float("nan"),
            tv_distance=tv_distance(empirical, rep.distribution),
            **key,
        )
    else:  # pragma: no cover - guarded by check_compatible
        raise UsageError(protocol)
    return o.csv_row(**key)


def run_protocol(protocol: str, inst: I.Instance, eps: float, delta=None, seed: int = 0, options: dict | None = None) -> dict:
    check_compatible(protocol, inst)
    return _row_for(protocol, inst, eps, delta, seed, dict(options or {}))


# --------------------------------------------------------------------------
# CSV and plots


def _format(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def write_rows(path: str | None, rows: list[dict], append: bool = True) -> None:
    """Single writer; header written only when the file is new or empty."""
    if path is None or path == "-":
        out = io.StringIO()
        w = csv.DictWriter(out, fieldnames=CSV_COLUMNS, lineterminator="\n")
        w.writeheader()
        for row in rows:
            w.writerow({k: _format(row[k]) for k in CSV_COLUMNS})
        sys.stdout.write(out.getvalue())
        return
    p = Path(path)
    fresh = not append or not p.exists() or p.stat().st_size == 0
    with p.open("w" if not append else "a", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=CSV_COLUMNS, lineterminator="\n")
        if fresh:
            w.writeheader()
        for row in rows:
            w.writerow({k: _format(row[k]) for k in CSV_COLUMNS})


def plot_rows(rows: list[dict], x_key: str, path: str, title: str) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    xs = [float(r[x_key]) for r in rows]
    fig, ax = plt.subplots(figsize=(5, 3.5))
    for col, marker in (("qubits_sent", "o"), ("bits_sent", "s")):
        ys = [float(r[col]) for r in rows]
        if any(y > 0 for y in ys):
            ax.plot(xs, ys, marker=marker, label=col)
    if all(x > 0 for x in xs):
        ax.set_xscale("log", base=2)
    ax.set_yscale("log")
    ax.set_xlabel(x_key)
    ax.set_ylabel("ledger total")
    ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


# --------------------------------------------------------------------------
# Argument handling


def _literal(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def _grid_values(text) -> list:
    """'2,4,8' -> [2, 4, 8]; '[0,1],[2]' -> [[0, 1], [2]]."""
    if not isinstance(text, str):
        return list(text) if isinstance(text, list) else [text]
    if text.strip() == "":
        return []
    try:
        vals = json.loads(f"[{text}]")
    except json.JSONDecodeError:
        vals = [v.strip() for v in text.split(",")]
    return vals


def _key_values(items: list[str] | None, flag: str) -> dict:
    out = {}
    for item in items or []:
        key, sep, value = item.partition("=")
        if not sep or not key:
            raise UsageError(f"{flag} expects key=value, got {item!r}")
        out[key.strip().replace("-", "_")] = value
    return out


def resolve(args: argparse.Namespace) -> dict:
    """Merge flags over the config file over defaults."""
    cfg: dict = {}
    if getattr(args, "config", None):
        try:
            cfg = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(cfg, dict):
            raise UsageError("config file must hold a JSON object")
        cfg = {k.replace("-", "_"): v for k, v in cfg.items()}
    merged = dict(DEFAULTS)
    merged.update({k: v for k, v in cfg.items() if k not in ("params", "options")})
    merged["params"] = dict(cfg.get("params", {}))
    merged["options"] = dict(cfg.get("options", {}))
    for key in GRID_FLAGS + ("protocol", "kind", "out"):
        v = getattr(args, key, None)
        if v is not None:
            merged[key] = v
    merged["params"].update(_key_values(getattr(args, "param", None), "--param"))
    merged["options"].update(_key_values(getattr(args, "option", None), "--option"))
    return merged


def _scalar(cfg: dict, key: str, cast):
    v = cfg[key]
    if v is None:
        return None
    vals = _grid_values(v) if isinstance(v, str) else [v]
    if len(vals) != 1:
        raise UsageError(f"--{key.replace('_', '-')} takes a single value here, got {v!r}")
    try:
        return cast(vals[0])
    except (TypeError, ValueError) as exc:
        raise UsageError(f"bad value for --{key.replace('_', '-')}: {v!r}") from exc


def _instance_params(cfg: dict) -> dict:
    params = {"n": _scalar(cfg, "n", int), "r": _scalar(cfg, "r", int), "kappa_target": _scalar(cfg, "kappa_target", float)}
    params.update({k: _literal(v) if isinstance(v, str) else v for k, v in cfg["params"].items()})
    return params


def _options(cfg: dict) -> dict:
    return {k: _literal(v) if isinstance(v, str) else v for k, v in cfg["options"].items()}


def cmd_instance(cfg: dict) -> int:
    if not cfg["kind"]:
        raise UsageError("instance needs --kind")
    inst = build_instance(cfg["kind"], _instance_params(cfg), _scalar(cfg, "seed", int))
    text = inst.to_json()
    if cfg["out"] in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(cfg["out"]).write_text(text)
    return 0


def _load_instance(cfg: dict) -> I.Instance:
    path = cfg.get("instance")
    if path:
        try:
            return I.Instance.from_json(Path(path).read_text())
        except OSError as exc:
            raise UsageError(f"cannot read instance {path}: {exc}") from exc
    if not cfg["kind"]:
        raise UsageError("run needs an instance file or --kind")
    return build_instance(cfg["kind"], _instance_params(cfg), _scalar(cfg, "seed", int))


def cmd_run(cfg: dict) -> int:
    if not cfg["protocol"]:
        raise UsageError("run needs --protocol")
    inst = _load_instance(cfg)
    row = run_protocol(
        cfg["protocol"], inst, _scalar(cfg, "eps", float), _scalar(cfg, "delta", float), _scalar(cfg, "seed", int), _options(cfg)
    )
    write_rows(cfg["out"], [row])
    return 0


def _sweep_point(job: tuple) -> dict:
    protocol, kind, params, eps, delta, seed, options = job
    inst = build_instance(kind, params, seed)
    return run_protocol(protocol, inst, eps, delta, seed, options)


def sweep_jobs(cfg: dict) -> tuple[list[tuple], list[str]]:
    """Cross product over every multi-valued flag or --param."""
    axes: dict[str, list] = {}
    for key in GRID_FLAGS:
        v = cfg[key]
        axes[key] = _grid_values(v) if isinstance(v, str) else [v]
    for key, v in cfg["params"].items():
        axes["param:" + key] = _grid_values(v) if isinstance(v, str) else [v]
    empty = [k for k, vals in axes.items() if not vals]
    if empty:
        raise UsageError(f"empty grid for {', '.join(k.removeprefix('param:') for k in empty)}")
    varying = [k for k, vals in axes.items() if len(vals) > 1]
    jobs = []
    for combo in itertools.product(*axes.values()):
        point = dict(zip(axes, combo))
        params = {k: point[k] for k in ("n", "r", "kappa_target")}
        params.update({k.removeprefix("param:"): v for k, v in point.items() if k.startswith("param:")})
        eps = float(point["eps"])
        delta = None if point["delta"] is None else float(point["delta"])
        jobs.append((cfg["protocol"], cfg["kind"], params, eps, delta, int(point["seed"]), _options(cfg)))
    return jobs, varying


def cmd_sweep(cfg: dict, plot: str | None, jobs_n: int) -> int:
    if not cfg["protocol"] or not cfg["kind"]:
        raise UsageError("sweep needs --protocol and --kind")
    if cfg["protocol"] not in PROTOCOLS:
        raise UsageError(f"unknown protocol {cfg['protocol']!r}")
    if cfg["kind"] not in KINDS:
        raise UsageError(f"unknown instance kind {cfg['kind']!r}")
    jobs, varying = sweep_jobs(cfg)
    if jobs_n > 1:
        with ProcessPoolExecutor(jobs_n) as pool:
            rows = list(pool.map(_sweep_point, jobs))
    else:
        rows = [_sweep_point(j) for j in jobs]
    write_rows(cfg["out"], rows, append=False)
    if plot:
        x_key = varying[0].removeprefix("param:") if varying else "n"
        column = {"kappa_target": "kappa"}.get(x_key, x_key)
        if column not in CSV_COLUMNS:
            column = "n"
        plot_rows(rows, column, plot, f"{cfg['protocol']} on {cfg['kind']}")
    return 0


def cmd_verify(suite: str, seed: int, faults: list[str], json_out: str | None) -> int:
    try:
        parse_suite(suite)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    results = run_suite(suite, seed=seed, faults=faults)
    for res in results:
        print(res.line(), flush=True)
    summary = {
        "passed": sum(r.passed for r in results),
        "failed": sum(not r.passed for r in results),
        "criteria": [
            {"number": r.number, "name": r.name, "passed": r.passed, "detail": r.detail, "seconds": round(r.seconds, 3)}
            for r in results
        ],
    }
    text = json.dumps(summary, sort_keys=True)
    print(text)
    if json_out:
        Path(json_out).write_text(text + "\n")
    return 0 if summary["failed"] == 0 else 1


def _common(p: argparse.ArgumentParser, grid: bool = False) -> None:
    kind = str if grid else None
    p.add_argument("--n", type=kind, help="dimension" + (" (comma list)" if grid else ""))
    p.add_argument("--r", type=kind, help="number of parties")
    p.add_argument("--kappa-target", type=kind, help="target condition number")
    p.add_argument("--eps", type=kind, help="target precision")
    p.add_argument("--delta", type=kind, help="singular-value threshold (default: smallest nonzero)")
    p.add_argument("--seed", type=kind, help="random seed")
    p.add_argument("--out", help="output path ('-' for stdout)")
    p.add_argument("--config", help="JSON file whose keys mirror the flag names")
    p.add_argument("--param", action="append", metavar="KEY=VALUE", help="instance parameter (JSON value)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="distqla", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("instance", help="write an instance file")
    p.add_argument("--kind", help=", ".join(KINDS))
    _common(p)

    p = sub.add_parser("run", help="run one protocol and append a CSV row")
    p.add_argument("instance", nargs="?", help="instance JSON file (or use --kind)")
    p.add_argument("--protocol", help=", ".join(PROTOCOLS))
    p.add_argument("--kind", help="build the instance in memory instead of loading a file")
    p.add_argument("--option", action="append", metavar="KEY=VALUE", help="protocol option such as mode=postselect")
    _common(p)

    p = sub.add_parser("sweep", help="run a protocol over a parameter grid")
    p.add_argument("--protocol", help=", ".join(PROTOCOLS))
    p.add_argument("--kind", help=", ".join(KINDS))
    p.add_argument("--option", action="append", metavar="KEY=VALUE")
    p.add_argument("--plot", help="write a ledger plot to this image file")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    _common(p, grid=True)

    p = sub.add_parser("verify", help="run the acceptance criteria")
    p.add_argument("suite", nargs="?", default="all", help="'all' or criterion numbers such as 1,3-5")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--fault", action="append", default=[], choices=FAULTS, help="inject a known fault")
    p.add_argument("--json", dest="json_out", help="also write the summary to this file")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "verify":
            return cmd_verify(args.suite, args.seed, args.fault, args.json_out)
        cfg = resolve(args)
        if args.command == "instance":
            return cmd_instance(cfg)
        if args.command == "run":
            cfg["instance"] = args.instance
            return cmd_run(cfg)
        return cmd_sweep(cfg, args.plot, args.jobs)
    except UsageError as exc:
        parser.error(str(exc))
    except DistQLAError as exc:
        print(f"distqla: error: {exc}", file=sys.stderr)
        return 1
    return 0  # pragma: no cover


if __name__ == "__main__":
    sys.exit(main())
