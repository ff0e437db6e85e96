"""Command-line interface: compute, heuristic, eval, generate and bench."""

from __future__ import annotations

import argparse
import json
import logging
import os
import random
import sys
import time
from collections.abc import Callable, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path

from . import exact, heuristics
from .deadline import SolverTimeout, deadline_after
from .graph import Digraph, GraphError, require_valid
from .io import ParseError, parse_edge_list, parse_enewick, read_graph, serialize_edge_list
from .layouts import (
    NotAnExtension,
    NotATreeExtension,
    TreeExtension,
    canonical_tree_extension,
    cutwidth_of_extension,
    scanwidth_of_extension,
    scanwidth_of_tree_extension,
    tree_from_pairs,
    treewidth_of_tree_layout,
)
from .netgen import GenConfig, GenerationExhausted, generate
from .reduce import solve_with_reduction

log = logging.getLogger("scanwidth")

EXIT_OK, EXIT_ERROR, EXIT_TIMEOUT = 0, 1, 2
EXACT = ("brute", "recursive", "dp", "fpt-level")
HEURISTIC = ("cutsplit", "greedy", "cutsplit+sa", "greedy+sa")


@dataclass
class ResultRecord:
    input: str
    algorithm: str
    status: str
    value: int | None = None
    lower_bound: int | None = None
    extension: list[str] | None = None
    tree_extension: list[list[str | None]] | None = None
    reduced_sizes: list[list[int]] | None = None
    wall_time: float = 0.0
    message: str | None = None

    def to_json(self) -> str:
        return json.dumps(asdict(self), ensure_ascii=False)

    def to_tsv(self) -> str:
        d = asdict(self)
        cells = [v if isinstance(v, str) else json.dumps(v) for v in d.values()]
        return "\t".join(d) + "\n" + "\t".join(cells)


Solver = Callable[[Digraph], tuple[int, Sequence[int]]]


def exact_solver(name: str, deadline: float | None) -> Solver:
    if name == "brute":
        return lambda h: exact.brute_force(h, deadline=deadline)
    if name == "recursive":
        return lambda h: exact.recursive_solve(h, deadline=deadline)
    if name in ("dp", "fpt-level"):
        return lambda h: exact.dp_solve(h, deadline=deadline)
    raise ValueError(f"unknown exact algorithm {name}")


def heuristic_solver(
    method: str, sa: bool, cfg: heuristics.SaConfig, deadline: float | None
) -> Solver:
    def run(h: Digraph) -> tuple[int, list[int]]:
        if method == "cutsplit":
            order = heuristics.cut_split_heuristic(h, deadline)
        elif method == "greedy":
            order = heuristics.greedy_heuristic(h)
        else:
            raise ValueError(f"unknown heuristic {method}")
        if sa:
            order = heuristics.simulated_annealing(h, order, cfg, deadline)
        return scanwidth_of_extension(h, order).value, order

    return run


def solve(
    g: Digraph,
    name: str,
    reduce: bool,
    timeout: float | None,
    seed: int = 0,
    sa_cfg: heuristics.SaConfig | None = None,
) -> ResultRecord:
    """Run one named algorithm and package the outcome (input id left blank)."""
    deadline = deadline_after(timeout)
    if name in EXACT:
        solver = exact_solver(name, deadline)
        if name == "fpt-level":
            exact.check_network(g)
            reduce = True
    else:
        method, _, extra = name.partition("+")
        cfg = sa_cfg or heuristics.SaConfig(seed=seed)
        solver = heuristic_solver(method, extra == "sa", cfg, deadline)
    require_valid(g)
    t0 = time.perf_counter()
    try:
        if reduce:
            value, order, plan = solve_with_reduction(g, solver)
            reduced = [plan.blocks[i].reduced.graph for i in plan.general()]
            sizes = [[h.n, h.m] for h in reduced]
            log.info("%s: %d general blocks, reduced sizes %s", name, len(sizes), sizes)
        else:
            value, order = solver(g)
            order, sizes = list(order), None
    except SolverTimeout as exc:
        return ResultRecord("", name, "timeout", lower_bound=exc.lower_bound,
                            wall_time=time.perf_counter() - t0)
    elapsed = time.perf_counter() - t0
    check = scanwidth_of_extension(g, order).value
    if check != value:
        raise AssertionError(f"{name}: reported {value} but extension evaluates to {check}")
    return ResultRecord(
        "", name, "ok", value=value, extension=[g.labels[v] for v in order],
        reduced_sizes=sizes, wall_time=elapsed,
    )


def tree_pairs(g: Digraph, t: TreeExtension) -> list[list[str | None]]:
    return [[g.labels[v], None if p is None else g.labels[p]] for v, p in enumerate(t.parent)]


def emit(rec: ResultRecord, fmt: str) -> None:
    print(rec.to_tsv() if fmt == "tsv" else rec.to_json())


def _load(args: argparse.Namespace) -> Digraph:
    return read_graph(args.input, args.format)


def cmd_compute(args: argparse.Namespace) -> int:
    g = _load(args)
    rec = solve(g, args.algo, not args.no_reduce, args.timeout, args.seed)
    rec.input = args.input
    if rec.status == "ok" and args.emit_tree_extension:
        order = g.ids(rec.extension)
        rec.tree_extension = tree_pairs(g, canonical_tree_extension(g, order))
    emit(rec, args.output)
    return EXIT_OK if rec.status == "ok" else EXIT_TIMEOUT


def cmd_heuristic(args: argparse.Namespace) -> int:
    g = _load(args)
    name = args.method + ("+sa" if args.sa == "on" else "")
    cfg = heuristics.SaConfig(
        initial_temperature=args.sa_initial_temperature,
        cooling_factor=args.sa_cooling,
        steps_per_temperature=args.sa_steps,
        floor_temperature=args.sa_floor,
        seed=args.seed,
    )
    rec = solve(g, name, not args.no_reduce, args.timeout, args.seed, cfg)
    rec.input = args.input
    if rec.status == "ok" and args.emit_tree_extension:
        rec.tree_extension = tree_pairs(g, canonical_tree_extension(g, g.ids(rec.extension)))
    emit(rec, args.output)
    return EXIT_OK if rec.status == "ok" else EXIT_TIMEOUT


def read_extension_file(path: str) -> list[str]:
    text = sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
    return [line.strip() for line in text.splitlines() if line.strip() and not line.startswith("#")]


def read_tree_file(path: str) -> list[tuple[str, str | None]]:
    text = sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
    pairs = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.rstrip("\n").split("\t")
        if len(parts) != 2:
            raise ParseError("expected 'child<TAB>parent'", lineno)
        pairs.append((parts[0], None if parts[1] == "-" else parts[1]))
    return pairs


def cmd_eval(args: argparse.Namespace) -> int:
    g = _load(args)
    order = tree = None
    if args.record:
        text = sys.stdin.read() if args.record == "-" else Path(args.record).read_text(encoding="utf-8")
        data = json.loads(text.splitlines()[0])
        if args.layout == "tree":
            if not data.get("tree_extension"):
                raise ValueError("record has no tree extension")
            tree = [(c, p) for c, p in data["tree_extension"]]
        else:
            order = data["extension"]
    elif args.extension:
        order = read_extension_file(args.extension)
    elif args.tree_extension:
        tree = read_tree_file(args.tree_extension)
    else:
        raise ValueError("one of --extension, --tree-extension or --record is required")

    rec = ResultRecord(args.input, f"eval:{args.measure}", "ok")
    if order is not None:
        unknown = [x for x in order if x not in set(g.labels)]
        if unknown:
            raise NotAnExtension(f"unknown vertices {unknown}")
        ids = g.ids(order)
        if args.measure == "sw":
            rec.value = scanwidth_of_extension(g, ids).value
        elif args.measure == "cw":
            rec.value = cutwidth_of_extension(g, ids).value
        else:
            rec.value = treewidth_of_tree_layout(g, canonical_tree_extension(g, ids)).value
        rec.extension = list(order)
        if args.canonicalize:
            rec.tree_extension = tree_pairs(g, canonical_tree_extension(g, ids))
    else:
        t = tree_from_pairs(g, tree)
        if args.measure == "sw":
            rec.value = scanwidth_of_tree_extension(g, t).value
        elif args.measure == "tw-layout":
            rec.value = treewidth_of_tree_layout(g, t).value
        else:
            raise ValueError("cutwidth needs a linear extension, not a tree")
        rec.tree_extension = tree_pairs(g, t)
    emit(rec, args.output)
    return EXIT_OK


def cmd_generate(args: argparse.Namespace) -> int:
    net = generate(GenConfig(
        args.leaves, args.reticulations,
        hybridization_rate="sample" if args.nu is None else args.nu,
        seed=args.seed, max_attempts=args.max_attempts,
    ))
    text = serialize_edge_list(net.graph, net.meta)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


# benchmark harness


def parse_grid(spec: str) -> list[tuple[int, int]]:
    """'r1,r2:l1,l2' -> all (reticulations, leaves) pairs; '' -> []."""
    spec = spec.strip()
    if not spec:
        return []
    try:
        rs, ls = spec.split(":")
        return [(int(r), int(lf)) for r in rs.split(",") if r for lf in ls.split(",") if lf]
    except ValueError:
        raise ValueError(f"grid must look like 'r1,r2:l1,l2', got {spec!r}") from None


def _bench_task(task: tuple[str, str, str, str, float | None, int, bool]) -> dict:
    inst, text, fmt, algo, timeout, seed, reduce = task
    g = parse_enewick(text) if fmt == "enewick" else parse_edge_list(text)
    try:
        rec = solve(g, algo, reduce, timeout, seed)
    except Exception as exc:  # recorded, never aborts the sweep
        rec = ResultRecord("", algo, "error", message=f"{type(exc).__name__}: {exc}")
    rec.input = inst
    return asdict(rec)


def _instances(args: argparse.Namespace, out: Path) -> list[tuple[str, str, str, str]]:
    """(instance id, group, text, format) for generated and user networks."""
    items = []
    netdir = out / "networks"
    netdir.mkdir(parents=True, exist_ok=True)
    for r, lv in parse_grid(args.grid):
        for i in range(args.count):
            seed = random.Random(f"{args.seed}:{r}:{lv}:{i}").getrandbits(63)
            net = generate(GenConfig(lv, r, seed=seed))
            text = serialize_edge_list(net.graph, net.meta)
            inst = f"r{r}_l{lv}_{i}"
            (netdir / f"{inst}.el").write_text(text, encoding="utf-8")
            items.append((inst, f"r={r},l={lv}", text, "edgelist"))
    if args.real:
        for path in sorted(Path(args.real).iterdir()):
            fmt = "enewick" if path.suffix in (".nwk", ".enewick", ".newick") else "edgelist"
            items.append((f"real/{path.name}", "real", path.read_text(encoding="utf-8"), fmt))
    return items


def aggregate(records: list[dict], groups: dict[str, str]) -> list[dict]:
    reference: dict[str, int] = {}
    for rec in records:
        if rec["algorithm"] in EXACT and rec["status"] == "ok":
            reference.setdefault(rec["input"], rec["value"])
    rows = {}
    for rec in records:
        key = (groups[rec["input"]], rec["algorithm"])
        row = rows.setdefault(key, {"group": key[0], "algorithm": key[1], "instances": 0,
                                    "completed": 0, "times": [], "ratios": []})
        row["instances"] += 1
        if rec["status"] == "ok":
            row["completed"] += 1
            row["times"].append(rec["wall_time"])
            ref = reference.get(rec["input"])
            if ref:
                row["ratios"].append(rec["value"] / ref)
    table = []
    for row in rows.values():
        times, ratios = row.pop("times"), row.pop("ratios")
        row["completion_rate"] = row["completed"] / row["instances"]
        row["mean_time"] = sum(times) / len(times) if times else None
        row["mean_ratio"] = sum(ratios) / len(ratios) if ratios else None
        row["min_ratio"] = min(ratios) if ratios else None
        table.append(row)
    return table


def cmd_bench(args: argparse.Namespace) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    algos = [a for a in args.algos.split(",") if a]
    for a in algos:
        if a not in EXACT + HEURISTIC:
            raise ValueError(f"unknown algorithm {a}")
    items = _instances(args, out)
    groups = {inst: grp for inst, grp, _, _ in items}
    tasks = [(inst, text, fmt, a, args.timeout, args.seed, not args.no_reduce)
             for inst, _, text, fmt in items for a in algos]
    jobs = args.jobs or os.cpu_count() or 1
    if jobs == 1 or len(tasks) <= 1:
        records = [_bench_task(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(_bench_task, tasks))
    with open(out / "results.jsonl", "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec) + "\n")
    table = aggregate(records, groups)
    cols = ["group", "algorithm", "instances", "completed", "completion_rate",
            "mean_time", "mean_ratio", "min_ratio"]
    lines = ["\t".join(cols)]
    for row in table:
        lines.append("\t".join(_fmt(row[c]) for c in cols))
    summary = "\n".join(lines) + "\n"
    (out / "summary.tsv").write_text(summary, encoding="utf-8")
    sys.stdout.write(summary)
    return EXIT_OK


def _fmt(x: object) -> str:
    if x is None:
        return "-"
    if isinstance(x, float):
        return f"{x:.4f}"
    return str(x)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="scanwidth", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def graph_args(sp: argparse.ArgumentParser) -> None:
        sp.add_argument("--input", required=True, help="graph file")
        sp.add_argument("--format", choices=["edgelist", "enewick"], default="edgelist")
        sp.add_argument("--output", choices=["json", "tsv"], default="json")

    c = sub.add_parser("compute", help="exact scanwidth")
    graph_args(c)
    c.add_argument("--algo", choices=EXACT, default="dp")
    c.add_argument("--no-reduce", action="store_true", help="skip the s-block decomposition")
    c.add_argument("--timeout", type=float, default=None, help="seconds")
    c.add_argument("--emit-tree-extension", action="store_true")
    c.add_argument("--seed", type=int, default=0)
    c.set_defaults(func=cmd_compute)

    h = sub.add_parser("heuristic", help="heuristic scanwidth")
    graph_args(h)
    h.add_argument("--method", choices=["cutsplit", "greedy"], default="cutsplit")
    h.add_argument("--sa", choices=["on", "off"], default="on")
    h.add_argument("--sa-initial-temperature", type=float, default=None)
    h.add_argument("--sa-cooling", type=float, default=0.99)
    h.add_argument("--sa-steps", type=int, default=None, help="steps per temperature")
    h.add_argument("--sa-floor", type=float, default=1e-3)
    h.add_argument("--no-reduce", action="store_true")
    h.add_argument("--timeout", type=float, default=None)
    h.add_argument("--emit-tree-extension", action="store_true")
    h.add_argument("--seed", type=int, default=0)
    h.set_defaults(func=cmd_heuristic)

    e = sub.add_parser("eval", help="evaluate a given layout")
    graph_args(e)
    e.add_argument("--extension", help="file with one label per line ('-' for stdin)")
    e.add_argument("--tree-extension", help="file of 'child<TAB>parent' lines, root parent '-'")
    e.add_argument("--record", help="JSON result record to take the layout from ('-' for stdin)")
    e.add_argument("--layout", choices=["extension", "tree"], default="extension",
                   help="which layout of --record to use")
    e.add_argument("--measure", choices=["sw", "cw", "tw-layout"], default="sw")
    e.add_argument("--canonicalize", action="store_true")
    e.set_defaults(func=cmd_eval)

    gen = sub.add_parser("generate", help="sample a binary network")
    gen.add_argument("--leaves", type=int, required=True)
    gen.add_argument("--reticulations", type=int, required=True)
    gen.add_argument("--nu", type=float, default=None, help="fixed hybridization rate")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--max-attempts", type=int, default=100_000)
    gen.add_argument("--out", default=None)
    gen.set_defaults(func=cmd_generate)

    b = sub.add_parser("bench", help="benchmark sweep over generated networks")
    b.add_argument("--grid", default="", help="'r1,r2:l1,l2'")
    b.add_argument("--count", type=int, default=10)
    b.add_argument("--algos", default="dp,cutsplit+sa")
    b.add_argument("--timeout", type=float, default=60.0)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--out", required=True)
    b.add_argument("--jobs", type=int, default=0, help="worker processes (0 = all cores)")
    b.add_argument("--real", default=None, help="directory of user-supplied networks")
    b.add_argument("--no-reduce", action="store_true")
    b.set_defaults(func=cmd_bench)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    level = os.environ.get("SCANWIDTH_LOG", "error").upper()
    logging.basicConfig(level=getattr(logging, level, logging.ERROR), format="%(levelname)s %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, GraphError, NotAnExtension, NotATreeExtension, GenerationExhausted,
            exact.TooLarge, ValueError, KeyError, OSError) as exc:
        print(f"scanwidth: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
