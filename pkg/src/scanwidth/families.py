"""Small named graph families and a random DAG sampler for experiments."""

from __future__ import annotations

import random

from .graph import Digraph, weakly_connected_components


def path(n: int) -> Digraph:
    return Digraph(n, [(i, i + 1) for i in range(n - 1)], [f"p{i}" for i in range(n)])


def rooted_cycle(left: int, right: int) -> Digraph:
    """Two internally disjoint paths from a root to a sink, of the given
    numbers of inner vertices (at most one of them may be 0)."""
    labels = ["r", "t"] + [f"a{i}" for i in range(left)] + [f"b{i}" for i in range(right)]
    arcs = []
    for prefix, count in (("a", left), ("b", right)):
        chain = ["r"] + [f"{prefix}{i}" for i in range(count)] + ["t"]
        arcs.extend(zip(chain, chain[1:]))
    idx = {x: i for i, x in enumerate(labels)}
    return Digraph(len(labels), [(idx[u], idx[v]) for u, v in arcs], labels)


def ladder(n: int) -> Digraph:
    """a_i -> a_{i+1}, b_i -> b_{i+1} and rungs a_i -> b_i."""
    arcs = []
    for i in range(1, n):
        arcs += [(f"a{i}", f"a{i + 1}"), (f"b{i}", f"b{i + 1}")]
    arcs += [(f"a{i}", f"b{i}") for i in range(1, n + 1)]
    return Digraph.from_labeled_arcs(arcs)


def extended_ladder(n: int) -> Digraph:
    """The ladder plus the two shortcuts a_1 -> a_n and a_2 -> a_n (n >= 4)."""
    if n < 4:
        raise ValueError("the extended ladder needs n >= 4")
    base = ladder(n)
    arcs = [(base.labels[u], base.labels[v]) for u, v, _ in base.arcs()]
    arcs += [("a1", f"a{n}"), ("a2", f"a{n}")]
    return Digraph.from_labeled_arcs(arcs)


def random_dag(n: int, rng: random.Random, density: float = 0.3) -> Digraph:
    """Weakly connected DAG on n vertices with arcs following a hidden order.

    Arcs u -> v are drawn independently for u before v in a random
    permutation, then components are joined by one extra arc each.
    """
    perm = list(range(n))
    rng.shuffle(perm)
    arcs = {(perm[i], perm[j]) for i in range(n) for j in range(i + 1, n) if rng.random() < density}
    g = Digraph(n, sorted(arcs))
    comps = weakly_connected_components(g, g.all)
    rank = {v: i for i, v in enumerate(perm)}
    for a, b in zip(comps, comps[1:]):
        u = rng.choice([v for v in range(n) if (a >> v) & 1])
        w = rng.choice([v for v in range(n) if (b >> v) & 1])
        arcs.add((u, w) if rank[u] < rank[w] else (w, u))
    return Digraph(n, sorted(arcs), [f"v{i}" for i in range(n)])
