"""Birth-hybridization generator for binary rooted phylogenetic networks.

Lineages split at rate ``speciation_rate`` each and pairs of lineages merge
into a reticulation at rate ``hybridization_rate`` per pair. Since only the
sequence of events matters (not their times), the simulation walks the
embedded jump chain. A run stops when the lineage count first reaches the
leaf target and is rejected unless it produced exactly the requested number
of reticulations.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .graph import Digraph
from .reduce import network_level

RNG_NAME = "python-random-mt19937"
SCHEME = "birth-hybridization jump chain, stop at leaf target, reject on reticulation mismatch"
NU_RANGE = (0.0001, 0.4)


class GenerationExhausted(RuntimeError):
    pass


@dataclass
class GenConfig:
    target_leaves: int
    target_reticulations: int
    speciation_rate: float = 1.0
    hybridization_rate: float | str = "sample"
    seed: int = 0
    max_attempts: int = 100_000

    def __post_init__(self) -> None:
        if self.speciation_rate <= 0:
            raise ValueError("speciation rate must be positive")
        if self.hybridization_rate != "sample" and float(self.hybridization_rate) < 0:
            raise ValueError("hybridization rate must be non-negative")
        if self.target_leaves < 2 or self.target_reticulations < 0:
            raise ValueError("need at least two leaves and a non-negative reticulation count")


@dataclass
class Network:
    graph: Digraph
    meta: dict


def _attempt(cfg: GenConfig, rng: random.Random) -> tuple[list[tuple[int, int]], int, float] | None:
    if cfg.hybridization_rate == "sample":
        nu = rng.uniform(*NU_RANGE)
    else:
        nu = float(cfg.hybridization_rate)
    lam = cfg.speciation_rate
    lineages = [0, 0]  # parent vertex of each open lineage; vertex 0 is the root
    arcs: list[tuple[int, int]] = []
    count = 1
    hybrids = 0
    while len(lineages) < cfg.target_leaves:
        k = len(lineages)
        mult: dict[int, int] = {}
        for p in lineages:
            mult[p] = mult.get(p, 0) + 1
        # pairs hanging off the same vertex would create parallel arcs
        pairs = k * (k - 1) // 2 - sum(c * (c - 1) // 2 for c in mult.values())
        split_rate, merge_rate = lam * k, nu * pairs
        if rng.random() * (split_rate + merge_rate) < split_rate:
            i = rng.randrange(k)
            arcs.append((lineages[i], count))
            lineages[i] = count
            lineages.append(count)
        else:
            while True:
                i, j = sorted(rng.sample(range(k), 2))
                if lineages[i] != lineages[j]:
                    break
            arcs += [(lineages[i], count), (lineages[j], count)]
            del lineages[j], lineages[i]
            lineages.append(count)
            hybrids += 1
            if hybrids > cfg.target_reticulations:
                return None
        count += 1
    if hybrids != cfg.target_reticulations:
        return None
    for p in lineages:
        arcs.append((p, count))
        count += 1
    return arcs, count, nu


def _label(n: int, arcs: list[tuple[int, int]]) -> list[str]:
    indeg, outdeg = [0] * n, [0] * n
    for u, v in arcs:
        outdeg[u] += 1
        indeg[v] += 1
    labels = []
    tallies = {"t": 0, "h": 0, "l": 0}
    for v in range(n):
        if indeg[v] == 0:
            labels.append("root")
            continue
        kind = "l" if outdeg[v] == 0 else "h" if indeg[v] > 1 else "t"
        tallies[kind] += 1
        labels.append(f"{kind}{tallies[kind]}")
    return labels


def generate(cfg: GenConfig) -> Network:
    rng = random.Random(cfg.seed)
    for attempt in range(1, cfg.max_attempts + 1):
        got = _attempt(cfg, rng)
        if got is None:
            continue
        arcs, n, nu = got
        g = Digraph(n, arcs, _label(n, arcs))
        meta = {
            "leaves": cfg.target_leaves,
            "reticulations": cfg.target_reticulations,
            "level": network_level(g),
            "seed": cfg.seed,
            "nu": nu,
            "lambda": cfg.speciation_rate,
            "attempts": attempt,
            "rng": RNG_NAME,
            "generator": SCHEME,
        }
        return Network(g, meta)
    raise GenerationExhausted(
        f"no network with {cfg.target_leaves} leaves and "
        f"{cfg.target_reticulations} reticulations after {cfg.max_attempts} attempts"
    )
