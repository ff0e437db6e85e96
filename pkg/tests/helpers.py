"""Independent oracles and fixtures shared by the test modules.

The oracles here deliberately avoid the package's incremental machinery:
they recompute everything from the definitions with plain sets.
"""

from __future__ import annotations

import itertools
import random
from pathlib import Path

from hypothesis import strategies as st

from scanwidth.families import extended_ladder, ladder, path, random_dag, rooted_cycle
from scanwidth.graph import Digraph
from scanwidth.io import parse_edge_list
from scanwidth.layouts import TreeExtension

DATA = Path(__file__).parent / "data"


def load(name: str) -> Digraph:
    return parse_edge_list((DATA / f"{name}.el").read_text())


def tree(g: Digraph, child_to_parent: dict[str, str]) -> TreeExtension:
    parent = [None] * g.n
    for c, p in child_to_parent.items():
        parent[g.id_of(c)] = g.id_of(p)
    return TreeExtension(tuple(parent))


FIG3B = {"w": "rho", "q": "w", "v": "q", "z": "v", "c": "z",
         "b": "y", "a": "x", "x": "u", "u": "v", "y": "u"}
FIG3C = {"w": "rho", "q": "w", "v": "q", "z": "v", "c": "z",
         "u": "z", "x": "u", "a": "x", "b": "y", "y": "u"}
FIG2B = ["a", "x", "b", "y", "u", "c", "z", "v", "q", "w", "rho"]
FIG2C = ["c", "z", "a", "x", "b", "y", "u", "v", "q", "w", "rho"]


# plain-set helpers


def arc_list(g: Digraph) -> list[tuple[int, int, int]]:
    return list(g.arcs())


def undirected_components(vertices: set[int], arcs) -> list[set[int]]:
    adj = {v: set() for v in vertices}
    for u, v, _ in arcs:
        if u in vertices and v in vertices:
            adj[u].add(v)
            adj[v].add(u)
    comps, seen = [], set()
    for s in sorted(vertices):
        if s in seen:
            continue
        comp, todo = {s}, [s]
        while todo:
            x = todo.pop()
            for y in adj[x] - comp:
                comp.add(y)
                todo.append(y)
        seen |= comp
        comps.append(comp)
    return comps


def sw_sets_by_definition(g: Digraph, order: list[int]) -> list[set[tuple[int, int]]]:
    arcs = arc_list(g)
    out = []
    for i in range(len(order)):
        placed = set(order[: i + 1])
        comp = next(c for c in undirected_components(placed, arcs) if order[i] in c)
        out.append({(u, v) for u, v, _ in arcs if v in comp and u not in placed})
    return out


def sw_by_definition(g: Digraph, order: list[int]) -> int:
    w = {(u, v): x for u, v, x in g.arcs()}
    return max((sum(w[a] for a in s) for s in sw_sets_by_definition(g, order)), default=0)


def cw_by_definition(g: Digraph, order: list[int]) -> int:
    pos = {v: i for i, v in enumerate(order)}
    return max(
        (sum(x for u, v, x in g.arcs() if pos[v] <= i < pos[u]) for i in range(len(order))),
        default=0,
    )


def reachability(g: Digraph) -> list[list[bool]]:
    """Boolean transitive closure by Floyd-Warshall."""
    n = g.n
    r = [[False] * n for _ in range(n)]
    for u, v, _ in g.arcs():
        r[u][v] = True
    for k in range(n):
        for i in range(n):
            if r[i][k]:
                for j in range(n):
                    if r[k][j]:
                        r[i][j] = True
    return r


def all_extensions(g: Digraph):
    """Every permutation that is an extension (n small)."""
    for perm in itertools.permutations(range(g.n)):
        pos = {v: i for i, v in enumerate(perm)}
        if all(pos[v] < pos[u] for u, v, _ in g.arcs()):
            yield list(perm)


def random_extension(g: Digraph, rng: random.Random) -> list[int]:
    placed, order = set(), []
    while len(order) < g.n:
        avail = [v for v in range(g.n) if v not in placed and set(g.out_adj[v]) <= placed]
        v = rng.choice(avail)
        placed.add(v)
        order.append(v)
    return order


def brute_min_st_cut(g: Digraph, s: int, t: int) -> int:
    others = [v for v in range(g.n) if v not in (s, t)]
    best = None
    for k in range(len(others) + 1):
        for extra in itertools.combinations(others, k):
            S = {s, *extra}
            w = sum(x for u, v, x in g.arcs() if u in S and v not in S)
            best = w if best is None else min(best, w)
    return best


def all_dag_cuts(g: Digraph):
    """Every (S, T, weight) with T a nonempty proper sinkset and G[T] connected."""
    arcs = arc_list(g)
    verts = list(range(g.n))
    for k in range(1, g.n):
        for T in itertools.combinations(verts, k):
            T = set(T)
            if any(u in T and v not in T for u, v, _ in arcs):
                continue
            if len(undirected_components(T, arcs)) != 1:
                continue
            S = set(verts) - T
            yield S, T, sum(x for u, v, x in arcs if u in S and v in T)


# instance families


def random_dags(count: int, seed: int, n_min: int = 2, n_max: int = 9):
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        n = rng.randint(n_min, n_max)
        out.append(random_dag(n, rng, density=rng.choice([0.2, 0.3, 0.45])))
    return out


def suite1_graphs() -> list[tuple[str, Digraph]]:
    fams = [(f"path{n}", path(n)) for n in range(2, 8)]
    fams += [(f"cycle{a}_{b}", rooted_cycle(a, b)) for a, b in [(1, 0), (1, 1), (2, 1), (3, 2), (3, 3)]]
    fams += [(f"ladder{n}", ladder(n)) for n in (3, 4)]
    fams += [(f"xladder{n}", extended_ladder(n)) for n in (4, 5)]
    fams += [(f"rand{i}", g) for i, g in enumerate(random_dags(300, seed=2024, n_min=3))]
    return fams


@st.composite
def dags(draw, n_max: int = 8, weighted: bool = False):
    """Hypothesis strategy for weakly connected DAGs."""
    n = draw(st.integers(1, n_max))
    perm = draw(st.permutations(range(n)))
    pairs = [(perm[i], perm[j]) for i in range(n) for j in range(i + 1, n)]
    chosen = [p for p in pairs if draw(st.booleans())]
    # hook each vertex to an earlier one so the graph is connected
    for j in range(1, n):
        i = draw(st.integers(0, j - 1))
        if (perm[i], perm[j]) not in chosen:
            chosen.append((perm[i], perm[j]))
    arcs = []
    for u, v in chosen:
        w = draw(st.integers(1, 3)) if weighted else 1
        arcs.append((u, v, w))
    return Digraph(n, arcs)
