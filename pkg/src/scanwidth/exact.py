"""Exact scanwidth solvers.

Three methods, all returning an optimal extension alongside the value:

* ``brute_force`` enumerates every extension (small graphs only).
* ``recursive_solve`` splits the vertex window in half over all lower
  halves, using polynomial space.
* ``dp_solve`` runs the sinkset dynamic program for k = k0, k0 + 1, ...
  until it becomes feasible, sharing the memo table between rounds.
"""

from __future__ import annotations

import time
from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field

from .deadline import SolverTimeout, check
from .graph import (
    Digraph,
    GraphError,
    bits,
    component_of,
    indegree_of_set,
    is_sinkset,
    leaves,
    require_valid,
    roots,
    weakly_connected_components,
)
from .reduce import DecompositionPlan, solve_with_reduction


class TooLarge(ValueError):
    pass


class InvalidPartition(ValueError):
    pass


class NotANetwork(GraphError):
    pass


def brute_force(
    g: Digraph, cap: int = 10, deadline: float | None = None
) -> tuple[int, list[int]]:
    """Exhaustive search over all extensions with a simple incumbent cut-off."""
    require_valid(g)
    if g.n > cap:
        raise TooLarge(f"{g.n} vertices exceeds brute-force cap {cap}")
    best_val = g.total_weight() + 1
    best_ext: list[int] = []
    order: list[int] = []
    calls = 0

    def rec(placed: int, cur: int) -> None:
        nonlocal best_val, best_ext, calls
        calls += 1
        if calls & 1023 == 0:
            check(deadline)
        if cur >= best_val:
            return
        if len(order) == g.n:
            best_val, best_ext = cur, order.copy()
            return
        free = g.all & ~placed
        for v in bits(free):
            if g.out_mask[v] & free:
                continue
            now = placed | (1 << v)
            width = indegree_of_set(g, component_of(g, now, v))
            order.append(v)
            rec(now, max(cur, width))
            order.pop()

    rec(0, 0)
    return best_val, best_ext


def _check_partition(g: Digraph, left: int, window: int, right: int) -> None:
    if left & window or left & right or window & right or (left | window | right) != g.all:
        raise InvalidPartition("parts must be disjoint and cover the vertex set")
    if not window:
        raise InvalidPartition("window must be nonempty")
    if not is_sinkset(g, left) or not is_sinkset(g, left | window):
        raise InvalidPartition("an arc points from a lower part to a higher part")


def partial_scanwidth(
    g: Digraph, left: int, window: int, right: int, order: Sequence[int]
) -> int:
    """Max over window positions of arcs entering the current vertex's component
    in G[placed window prefix + left]."""
    _check_partition(g, left, window, right)
    placed = left
    if sorted(order) != list(bits(window)):
        raise InvalidPartition("order must be a permutation of the window")
    best = 0
    for v in order:
        if g.out_mask[v] & ~(placed | (1 << v)):
            raise InvalidPartition(f"order is not an extension of the window at {g.labels[v]}")
        placed |= 1 << v
        best = max(best, indegree_of_set(g, component_of(g, placed, v)))
    return best


def _lower_halves(g: Digraph, window: int, size: int, topo_rev: list[int]) -> Iterator[int]:
    """Downward-closed subsets of G[window] with exactly ``size`` members."""
    verts = [v for v in topo_rev if (window >> v) & 1]
    total = len(verts)

    def grow(i: int, cur: int, k: int) -> Iterator[int]:
        if k == size:
            yield cur
            return
        if total - i < size - k:
            return
        v = verts[i]
        if not g.out_mask[v] & window & ~cur:
            yield from grow(i + 1, cur | (1 << v), k + 1)
        yield from grow(i + 1, cur, k)

    yield from grow(0, 0, 0)


def recursive_solve(g: Digraph, deadline: float | None = None) -> tuple[int, list[int]]:
    """Halving recursion over ordered 3-partitions; no memoization."""
    require_valid(g)
    topo_rev = g.topological_order()[::-1]
    inf = g.total_weight() + 1
    calls = 0

    def psw(left: int, window: int, right: int) -> tuple[int, list[int]]:
        nonlocal calls
        calls += 1
        if calls & 255 == 0:
            check(deadline)
        if window & (window - 1) == 0:
            w = window.bit_length() - 1
            return indegree_of_set(g, component_of(g, left | window, w)), [w]
        best, ext = inf, []
        for low in _lower_halves(g, window, window.bit_count() // 2, topo_rev):
            high = window & ~low
            a, e1 = psw(left, low, right | high)
            if a >= best:
                continue
            b, e2 = psw(left | low, high, right)
            if max(a, b) < best:
                best, ext = max(a, b), e1 + e2
        return best, ext

    return psw(0, g.all, 0)


@dataclass
class DpEntry:
    value: int
    extension: tuple[int, ...]
    k: int


@dataclass
class DpRun:
    value: int
    extension: list[int]
    memo: dict[int, DpEntry]
    n: int
    root_count: int
    rounds: list[tuple[int, float, int]] = field(default_factory=list)

    @property
    def memo_bound(self) -> int:
        e = self.value + self.root_count - 1
        return e * self.n**e + 1


def dp_k_scanwidth(
    g: Digraph,
    k: int,
    memo: dict[int, DpEntry] | None = None,
    deadline: float | None = None,
) -> tuple[int | None, list[int] | None]:
    """Decide whether sw(g) <= k; if so return the optimum and an extension.

    Returns (None, None) when the scanwidth exceeds k. ``memo`` may be shared
    between calls with increasing k.
    """
    if memo is None:
        memo = {}
    inf = g.total_weight() + 1

    def known(w: int) -> int | None:
        e = memo.get(w)
        if e is None:
            return None
        if e.value <= e.k:
            return e.value if e.value <= k else inf
        return inf if k <= e.k else None

    stack = [g.all]
    steps = 0
    while stack:
        w = stack[-1]
        if known(w) is not None:
            stack.pop()
            continue
        steps += 1
        if steps & 255 == 0:
            check(deadline, k)
        comps = weakly_connected_components(g, w)
        parts = []
        feasible = True
        for u in comps:
            d = indegree_of_set(g, u)
            if d > k:
                feasible = False
                break
            parts.append((u, d))
        if not feasible:
            memo[w] = DpEntry(inf, (), k)
            stack.pop()
            continue
        missing = [
            u ^ (1 << r)
            for u, _ in parts
            if u & (u - 1)
            for r in bits(roots(g, u))
            if known(u ^ (1 << r)) is None
        ]
        if missing:
            stack.extend(missing)
            continue
        value, ext = 0, ()
        for u, d in parts:
            if not u & (u - 1):
                value = max(value, d)
                ext += (u.bit_length() - 1,)
                continue
            best, best_ext = inf, ()
            for r in bits(roots(g, u)):
                sub = u ^ (1 << r)
                c = max(known(sub), d)
                if c < best:
                    best, best_ext = c, memo[sub].extension + (r,)
            if best > k:
                value = inf
                break
            value = max(value, best)
            ext += best_ext
        memo[w] = DpEntry(value, ext if value <= k else (), k)
        stack.pop()
    top = known(g.all)
    if top is None or top > k:
        return None, None
    return top, list(memo[g.all].extension)


def dp_run(g: Digraph, deadline: float | None = None) -> DpRun:
    """Iterative deepening over k with a shared memo table."""
    require_valid(g)
    memo: dict[int, DpEntry] = {}
    k = max([1] + [g.in_weight[v] for v in bits(leaves(g, g.all))])
    rounds = []
    while True:
        t0 = time.perf_counter()
        try:
            value, ext = dp_k_scanwidth(g, k, memo, deadline)
        except SolverTimeout as exc:
            exc.lower_bound = k
            raise
        rounds.append((k, time.perf_counter() - t0, len(memo)))
        if value is not None:
            return DpRun(value, ext, memo, g.n, roots(g, g.all).bit_count(), rounds)
        k += 1


def dp_solve(g: Digraph, deadline: float | None = None) -> tuple[int, list[int]]:
    run = dp_run(g, deadline)
    return run.value, run.extension


def count_memo_entries(run: DpRun) -> int:
    return len(run.memo)


def memo_diagnostics(g: Digraph, run: DpRun) -> list[str]:
    """Check memo keys are sinksets with antichain roots and the size bound.

    Returns a list of violations (empty when everything holds).
    """
    problems = []
    reach = g.descendants()
    for w in run.memo:
        if not is_sinkset(g, w):
            problems.append(f"memo key {g.names(w)} is not a sinkset")
            continue
        rts = roots(g, w)
        if any(reach[r] & rts for r in bits(rts)):
            problems.append(f"roots of {g.names(w)} are not an antichain")
    if len(run.memo) > run.memo_bound:
        problems.append(f"memo size {len(run.memo)} exceeds bound {run.memo_bound}")
    return problems


def check_network(g: Digraph) -> None:
    """Raise NotANetwork unless g is a rooted phylogenetic network."""
    require_valid(g)
    rts = list(bits(roots(g, g.all)))
    if len(rts) != 1:
        raise NotANetwork(f"expected a unique root, found {len(rts)}")
    for v in range(g.n):
        if v == rts[0]:
            continue
        i, o = len(g.in_adj[v]), len(g.out_adj[v])
        if not ((i == 1 and o != 1) or (i >= 2 and o == 1)):
            raise NotANetwork(
                f"vertex {g.labels[v]} has indegree {i} and outdegree {o}"
            )


def fpt_level_solve(
    g: Digraph, deadline: float | None = None
) -> tuple[int, list[int]]:
    value, ext, _ = fpt_level_plan(g, deadline)
    return value, ext


def fpt_level_plan(
    g: Digraph, deadline: float | None = None
) -> tuple[int, list[int], DecompositionPlan]:
    """Decompose a network, run the DP per reduced block, and reassemble."""
    check_network(g)
    return solve_with_reduction(g, lambda h: dp_solve(h, deadline))
