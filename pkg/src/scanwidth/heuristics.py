"""Polynomial-time scanwidth heuristics."""

from __future__ import annotations

import math
import random
import statistics
from collections import deque
from collections.abc import Sequence
from dataclasses import dataclass

from .deadline import check
from .graph import Digraph, bits, component_of, indegree_of_set, leaves, roots
from .layouts import check_extension, sw_profile


@dataclass
class DagCut:
    S: int
    T: int
    cut_arcs: list[tuple[int, int]]
    weight: int

    @property
    def trivial(self) -> bool:
        return self.S.bit_count() == 1 or self.T.bit_count() == 1


class _FlowNetwork:
    """Dinic max-flow on an adjacency list of paired residual edges."""

    def __init__(self, n: int) -> None:
        self.n = n
        self.head: list[list[int]] = [[] for _ in range(n)]
        self.to: list[int] = []
        self.cap: list[int] = []

    def add(self, u: int, v: int, c: int) -> None:
        self.head[u].append(len(self.to))
        self.to.append(v)
        self.cap.append(c)
        self.head[v].append(len(self.to))
        self.to.append(u)
        self.cap.append(0)

    def max_flow(self, s: int, t: int, limit: int) -> int:
        """Push flow from s to t, stopping once ``limit`` is reached."""
        cap = self.cap
        flow = 0
        while flow < limit:
            level = [-1] * self.n
            level[s] = 0
            q = deque([s])
            while q:
                v = q.popleft()
                for e in self.head[v]:
                    if cap[e] > 0 and level[self.to[e]] < 0:
                        level[self.to[e]] = level[v] + 1
                        q.append(self.to[e])
            if level[t] < 0:
                break
            it = [0] * self.n
            while flow < limit:
                pushed = self._augment(s, t, limit - flow, level, it)
                if not pushed:
                    break
                flow += pushed
        return flow

    def _augment(self, s: int, t: int, amount: int, level: list[int], it: list[int]) -> int:
        # iterative DFS along the level graph
        path: list[int] = []
        v = s
        while True:
            if v == t:
                f = min([amount] + [self.cap[e] for e in path])
                for e in path:
                    self.cap[e] -= f
                    self.cap[e ^ 1] += f
                return f
            edges = self.head[v]
            advanced = False
            while it[v] < len(edges):
                e = edges[it[v]]
                w = self.to[e]
                if self.cap[e] > 0 and level[w] == level[v] + 1:
                    path.append(e)
                    v = w
                    advanced = True
                    break
                it[v] += 1
            if advanced:
                continue
            if not path:
                return 0
            level[v] = -1
            e = path.pop()
            v = self.to[e ^ 1]
            it[v] += 1

    def source_side(self, s: int) -> int:
        seen = 1 << s
        q = deque([s])
        while q:
            v = q.popleft()
            for e in self.head[v]:
                w = self.to[e]
                if self.cap[e] > 0 and not (seen >> w) & 1:
                    seen |= 1 << w
                    q.append(w)
        return seen


def _network(g: Digraph, reverse_sentinel: int | None) -> _FlowNetwork:
    net = _FlowNetwork(g.n)
    for u, v, w in g.arcs():
        net.add(u, v, w)
        if reverse_sentinel is not None:
            net.add(v, u, reverse_sentinel)
    return net


def sentinel(g: Digraph) -> int:
    return g.total_weight() + 1


def min_st_cut(
    g: Digraph, s: int, t: int, reverse_sentinel: bool = False, limit: int | None = None
) -> tuple[int, int]:
    """Minimum-weight directed s-t cut as (weight, source-side bitset).

    With ``reverse_sentinel`` every arc also gets a reverse copy of
    sentinel weight, so finite cuts have a sinkset on the t side. If
    ``limit`` is given the search stops once the flow reaches it; the
    returned weight is then only a lower bound.
    """
    if s == t:
        raise ValueError("s and t must differ")
    inf = sentinel(g)
    net = _network(g, inf if reverse_sentinel else None)
    cap = limit if limit is not None else inf * (2 * g.m + 1)
    flow = net.max_flow(s, t, cap)
    return flow, net.source_side(s)


def _cut_of(g: Digraph, S: int, T: int) -> DagCut:
    arcs = [(u, v) for u in bits(S) for v in g.out_adj[u] if (T >> v) & 1]
    return DagCut(S, T, arcs, sum(g.out_adj[u][v] for u, v in arcs))


def min_nontrivial_dag_cut(g: Digraph, deadline: float | None = None) -> DagCut | None:
    """Lightest DAG-cut with at least two vertices on each side, or None."""
    inf = sentinel(g)
    rts, lvs = roots(g, g.all), leaves(g, g.all)
    sources = 0
    for r in bits(rts):
        sources |= g.out_mask[r]
    targets = 0
    for x in bits(lvs):
        targets |= g.in_mask[x]
    reach = g.descendants()
    best: DagCut | None = None
    best_w = inf
    for s in bits(sources):
        for t in bits(targets):
            if t == s or (reach[t] >> s) & 1:
                continue
            check(deadline)
            w, side = min_st_cut(g, s, t, reverse_sentinel=True, limit=best_w)
            if w >= best_w:
                continue
            T = component_of(g, g.all & ~side, t)
            best, best_w = _cut_of(g, g.all & ~T, T), w
    return best


def _reverse_bfs_extension(g: Digraph) -> list[int]:
    """Peel leaves level by level (Kahn's algorithm from the bottom)."""
    remaining = [len(d) for d in g.out_adj]
    q = deque(v for v in range(g.n) if remaining[v] == 0)
    order = []
    while q:
        v = q.popleft()
        order.append(v)
        for p in sorted(g.in_adj[v]):
            remaining[p] -= 1
            if remaining[p] == 0:
                q.append(p)
    return order


def contract_side(g: Digraph, keep: int, above: bool) -> tuple[Digraph, list[int]]:
    """G[keep] plus one supervertex standing for the other side.

    With ``above`` the supervertex sits above ``keep`` and receives the cut
    arcs as out-arcs (y -> v); otherwise it sits below (u -> x). Parallel cut
    arcs accumulate weight. Returns the graph and its local -> global ids;
    the supervertex is the last id and maps to -1.
    """
    verts = list(bits(keep))
    local = {v: i for i, v in enumerate(verts)}
    x = len(verts)
    arcs: dict[tuple[int, int], int] = {}
    for u in verts:
        for v, w in g.out_adj[u].items():
            if v in local:
                arcs[(local[u], local[v])] = w
            elif not above:
                arcs[(local[u], x)] = arcs.get((local[u], x), 0) + w
    if above:
        for v in verts:
            for u, w in g.in_adj[v].items():
                if u not in local:
                    arcs[(x, local[v])] = arcs.get((x, local[v]), 0) + w
    labels = [g.labels[v] for v in verts] + ["<super>"]
    h = Digraph(x + 1, [(a, b, w) for (a, b), w in sorted(arcs.items())], labels)
    return h, verts + [-1]


def cut_split_heuristic(g: Digraph, deadline: float | None = None) -> list[int]:
    """Split at minimum non-trivial DAG-cuts until none remain."""
    # each task: (graph, local -> global map); results are stitched in order
    def solve(h: Digraph, ids: list[int]) -> list[int]:
        cut = min_nontrivial_dag_cut(h, deadline)
        if cut is None:
            return [ids[v] for v in _reverse_bfs_extension(h) if ids[v] >= 0]
        h1, m1 = contract_side(h, cut.S, above=False)
        h2, m2 = contract_side(h, cut.T, above=True)
        low = solve(h2, [ids[v] if v >= 0 else -1 for v in m2])
        high = solve(h1, [ids[v] if v >= 0 else -1 for v in m1])
        return low + high

    if g.n == 1:
        return [0]
    return solve(g, list(range(g.n)))


def greedy_heuristic(g: Digraph) -> list[int]:
    """Append the available leaf whose placement scans the fewest arcs."""
    parent = list(range(g.n))
    open_w = [0] * g.n
    pending = [len(d) for d in g.out_adj]

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def cost(v: int) -> tuple[int, list[int]]:
        reps = {find(c) for c in g.out_adj[v]}
        return g.in_weight[v] - g.out_weight[v] + sum(open_w[r] for r in reps), list(reps)

    avail = {v for v in range(g.n) if pending[v] == 0}
    order = []
    while avail:
        best = min(avail, key=lambda v: (cost(v)[0], v))
        val, reps = cost(best)
        for r in reps:
            parent[r] = best
        open_w[best] = val
        avail.discard(best)
        order.append(best)
        for p in g.in_adj[best]:
            pending[p] -= 1
            if pending[p] == 0:
                avail.add(p)
    return order


@dataclass
class SaConfig:
    """Annealing schedule. ``None`` fields get data-driven defaults."""

    initial_temperature: float | None = None
    cooling_factor: float = 0.99
    steps_per_temperature: int | None = None
    floor_temperature: float = 1e-3
    seed: int = 0
    max_steps: int | None = None


class _SwState:
    """Extension with cached per-position widths; swaps update two entries."""

    def __init__(self, g: Digraph, order: Sequence[int]) -> None:
        self.g = g
        self.order = list(order)
        self.prof = sw_profile(g, order)
        self.prefix = []
        m = 0
        for v in self.order:
            m |= 1 << v
            self.prefix.append(m)
        self.scale = g.n * g.total_weight() + 1

    def energy(self) -> float:
        return max(self.prof) + sum(self.prof) / self.scale

    def swappable(self, i: int) -> bool:
        a, b = self.order[i], self.order[i + 1]
        return not (self.g.nbr_mask[a] >> b) & 1

    def swap_values(self, i: int) -> tuple[int, int]:
        g = self.g
        a, b = self.order[i], self.order[i + 1]
        before = self.prefix[i - 1] if i else 0
        first = before | (1 << b)
        second = self.prefix[i + 1]
        return (
            indegree_of_set(g, component_of(g, first, b)),
            indegree_of_set(g, component_of(g, second, a)),
        )

    def delta(self, i: int) -> tuple[float, tuple[int, int]]:
        old = self.energy()
        vals = self.swap_values(i)
        saved = self.prof[i], self.prof[i + 1]
        self.prof[i], self.prof[i + 1] = vals
        new = self.energy()
        self.prof[i], self.prof[i + 1] = saved
        return new - old, vals

    def apply(self, i: int, vals: tuple[int, int]) -> None:
        o = self.order
        o[i], o[i + 1] = o[i + 1], o[i]
        self.prefix[i] = (self.prefix[i - 1] if i else 0) | (1 << o[i])
        self.prof[i], self.prof[i + 1] = vals


def _random_move(state: _SwState, rng: random.Random) -> int | None:
    n = len(state.order)
    for _ in range(4 * n):
        i = rng.randrange(n - 1)
        if state.swappable(i):
            return i
    candidates = [i for i in range(n - 1) if state.swappable(i)]
    return rng.choice(candidates) if candidates else None


def simulated_annealing(
    g: Digraph,
    start: Sequence[int],
    cfg: SaConfig | None = None,
    deadline: float | None = None,
) -> list[int]:
    """Anneal over adjacent swaps of unconnected vertices; return the best seen.

    The energy is the scanwidth plus a fractional tie-breaker (sum of
    per-position widths scaled below 1), so lower scanwidth always wins.
    """
    cfg = cfg or SaConfig()
    check_extension(g, start)
    if g.n < 2:
        return list(start)
    rng = random.Random(cfg.seed)
    state = _SwState(g, start)
    best_order, best_e = list(state.order), state.energy()

    temp = cfg.initial_temperature
    if temp is None:
        deltas = []
        for _ in range(100):
            i = _random_move(state, rng)
            if i is None:
                break
            deltas.append(state.delta(i)[0])
        spread = statistics.stdev(deltas) if len(deltas) > 1 else 0.0
        # most swaps only move the tie-breaker; keep at least one width unit
        temp = max(spread, 1.0)
    steps = cfg.steps_per_temperature or 20 * g.n
    budget = cfg.max_steps
    done = 0
    while temp > cfg.floor_temperature:
        for _ in range(steps):
            if budget is not None and done >= budget:
                return best_order
            done += 1
            i = _random_move(state, rng)
            if i is None:
                return best_order
            d, vals = state.delta(i)
            if d <= 0 or rng.random() < math.exp(-d / temp):
                state.apply(i, vals)
                e = state.energy()
                if e < best_e:
                    best_e, best_order = e, list(state.order)
        check(deadline)
        temp *= cfg.cooling_factor
    return best_order

