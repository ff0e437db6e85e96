"""Safe preprocessing: s-block decomposition, vertex suppression, reassembly.

The scanwidth of a DAG is the maximum over its s-blocks, which are the
blocks of the underlying undirected graph once all roots are joined into a
clique. Single arcs contribute 1 and cycles with one root contribute 2; every
other block is shrunk by suppressing in-1/out-1 vertices and handed to a
solver. Block extensions are stitched back together bottom-up.
"""

from __future__ import annotations

import heapq
from collections.abc import Callable, Mapping, Sequence
from dataclasses import dataclass, field

from .deadline import SolverTimeout
from .graph import Digraph, bits, mask_of, roots

SINGLE_ARC = "single-arc"
ROOTED_CYCLE = "rooted-cycle"
GENERAL = "general"


class MissingBlockSolution(KeyError):
    pass


@dataclass
class Suppressed:
    """A general block after suppression.

    ``graph`` uses its own ids; ``to_local[i]`` maps them back to the block's
    induced-subgraph ids. Log entries (v, u, w) are in block-local ids.
    """

    graph: Digraph
    to_local: list[int]
    log: list[tuple[int, int, int]]


@dataclass
class SBlock:
    vertices: int
    kind: str
    attach: int | None
    graph: Digraph
    to_global: list[int]
    reduced: Suppressed | None = None

    @property
    def size(self) -> tuple[int, int]:
        return self.graph.n, self.graph.m


@dataclass
class DecompositionPlan:
    g: Digraph
    blocks: list[SBlock]
    top: list[int] = field(default_factory=list)
    children: dict[int, list[int]] = field(default_factory=dict)
    apex: int | None = None

    @property
    def trivial_bound(self) -> int:
        vals = [1 if b.kind == SINGLE_ARC else 2 for b in self.blocks if b.kind != GENERAL]
        return max(vals, default=0)

    def general(self) -> list[int]:
        return [i for i, b in enumerate(self.blocks) if b.kind == GENERAL]


def _aux_neighbours(g: Digraph) -> list[list[int]]:
    rts = roots(g, g.all)
    adj = []
    for v in range(g.n):
        m = g.nbr_mask[v]
        if (rts >> v) & 1:
            m |= rts & ~(1 << v)
        adj.append(list(bits(m)))
    return adj


def sblocks(g: Digraph) -> list[int]:
    """Blocks of the root-augmented undirected graph, as vertex bitsets."""
    adj = _aux_neighbours(g)
    disc = [-1] * g.n
    low = [0] * g.n
    clock = 0
    blocks: list[int] = []
    for s in range(g.n):
        if disc[s] != -1:
            continue
        disc[s] = low[s] = clock
        clock += 1
        edges: list[tuple[int, int]] = []
        stack = [(s, -1, iter(adj[s]))]
        while stack:
            v, par, it = stack[-1]
            w = next(it, None)
            if w is not None:
                if disc[w] == -1:
                    disc[w] = low[w] = clock
                    clock += 1
                    edges.append((v, w))
                    stack.append((w, v, iter(adj[w])))
                elif w != par and disc[w] < disc[v]:
                    edges.append((v, w))
                    low[v] = min(low[v], disc[w])
                continue
            stack.pop()
            if par == -1:
                continue
            low[par] = min(low[par], low[v])
            if low[v] >= disc[par]:
                block = 0
                while True:
                    a, b = edges.pop()
                    block |= (1 << a) | (1 << b)
                    if (a, b) == (par, v):
                        break
                blocks.append(block)
    return blocks


def _kind(sub: Digraph) -> str:
    if sub.n == 2:
        return SINGLE_ARC
    if sub.m == sub.n and all(m.bit_count() == 2 for m in sub.nbr_mask):
        if roots(sub, sub.all).bit_count() == 1:
            return ROOTED_CYCLE
    return GENERAL


def suppress(g: Digraph, merge_parallel: bool = False) -> Suppressed:
    """Exhaustively suppress vertices with one parent u and one child w.

    The pair is replaced by the arc uw. By default a vertex is only removed
    when uw is absent; with ``merge_parallel`` the weight is added to an
    existing uw instead. Vertices whose two arcs carry different weights are
    left alone.
    """
    out = [dict(d) for d in g.out_adj]
    inn = [dict(d) for d in g.in_adj]
    alive = [True] * g.n
    log = []
    heap = list(range(g.n))
    queued = [True] * g.n
    while heap:
        v = heapq.heappop(heap)
        queued[v] = False
        if not alive[v] or len(inn[v]) != 1 or len(out[v]) != 1:
            continue
        (u, wu), = inn[v].items()
        (w, ww), = out[v].items()
        if wu != ww or (w in out[u] and not merge_parallel):
            continue
        alive[v] = False
        del out[u][v], inn[w][v]
        out[v].clear()
        inn[v].clear()
        out[u][w] = out[u].get(w, 0) + wu
        inn[w][u] = inn[w].get(u, 0) + wu
        log.append((v, u, w))
        for x in (u, w):
            if not queued[x]:
                queued[x] = True
                heapq.heappush(heap, x)
    keep = [v for v in range(g.n) if alive[v]]
    new = {v: i for i, v in enumerate(keep)}
    arcs = [(new[u], new[w], x) for u in keep for w, x in sorted(out[u].items())]
    return Suppressed(Digraph(len(keep), arcs, [g.labels[v] for v in keep]), keep, log)


def unsuppress(red: Suppressed, order: Sequence[int]) -> list[int]:
    """Map an extension of the reduced graph back to the unreduced block."""
    out = [red.to_local[i] for i in order]
    for v, _, w in reversed(red.log):
        out.insert(out.index(w) + 1, v)
    return out


def decompose(g: Digraph, merge_parallel: bool = False) -> DecompositionPlan:
    blocks = []
    for mask in sblocks(g):
        sub, verts = g.induced(mask)
        blocks.append(SBlock(mask, _kind(sub), None, sub, verts))
    blocks.sort(key=lambda b: (b.vertices & -b.vertices).bit_length())
    plan = DecompositionPlan(g, blocks)

    # Root the block tree: at the single root, or at the block holding all roots.
    rts = list(bits(roots(g, g.all)))
    by_vertex: dict[int, list[int]] = {}
    for i, b in enumerate(blocks):
        for v in bits(b.vertices):
            by_vertex.setdefault(v, []).append(i)
    done: set[int] = set()
    frontier: list[tuple[int, int | None]] = []
    if len(rts) == 1:
        plan.apex = rts[0]
        for i in by_vertex.get(rts[0], []):
            blocks[i].attach = rts[0]
            plan.top.append(i)
            frontier.append((i, rts[0]))
    elif blocks:
        want = mask_of(rts)
        i = next(j for j, b in enumerate(blocks) if b.vertices & want == want)
        plan.top.append(i)
        frontier.append((i, None))
    done.update(i for i, _ in frontier)
    while frontier:
        i, att = frontier.pop()
        kids = plan.children.setdefault(i, [])
        for v in bits(blocks[i].vertices):
            if v == att:
                continue
            for j in by_vertex[v]:
                if j not in done:
                    done.add(j)
                    blocks[j].attach = v
                    kids.append(j)
                    frontier.append((j, v))
        kids.sort()

    for b in blocks:
        if b.kind == GENERAL:
            b.reduced = suppress(b.graph, merge_parallel)
    return plan


def _trivial_extension(b: SBlock) -> list[int]:
    # any extension of a single arc or rooted cycle attains the block's value
    return b.graph.topological_order()[::-1]


def reassemble(plan: DecompositionPlan, solutions: Mapping[int, Sequence[int]]) -> list[int]:
    """Stitch block extensions into one extension of the whole graph.

    ``solutions`` maps a general block's index to an extension of its
    reduced graph. Each block is emitted after all blocks hanging below it,
    minus its attachment vertex, which the parent block places.
    """
    if plan.g.n == 1:
        return [0]
    order: list[int] = []

    def local_extension(i: int) -> list[int]:
        b = plan.blocks[i]
        if b.kind != GENERAL:
            return _trivial_extension(b)
        if i not in solutions:
            raise MissingBlockSolution(i)
        return unsuppress(b.reduced, solutions[i])

    stack: list[tuple[int, bool]] = [(i, False) for i in reversed(plan.top)]
    while stack:
        i, expanded = stack.pop()
        if not expanded:
            stack.append((i, True))
            stack.extend((j, False) for j in reversed(plan.children.get(i, [])))
            continue
        b = plan.blocks[i]
        order.extend(b.to_global[v] for v in local_extension(i) if b.to_global[v] != b.attach)
    if plan.apex is not None:
        order.append(plan.apex)
    return order


def solve_with_reduction(
    g: Digraph,
    block_solver: Callable[[Digraph], tuple[int, Sequence[int]]],
    merge_parallel: bool = False,
) -> tuple[int, list[int], DecompositionPlan]:
    """Decompose, solve each general block, and reassemble.

    A SolverTimeout raised by the block solver is re-raised with its lower
    bound raised to the best value established so far.
    """
    plan = decompose(g, merge_parallel)
    value = plan.trivial_bound
    sols = {}
    for i in plan.general():
        try:
            val, ext = block_solver(plan.blocks[i].reduced.graph)
        except SolverTimeout as exc:
            exc.lower_bound = max(value, exc.lower_bound or 0)
            raise
        sols[i] = ext
        value = max(value, val)
    return value, reassemble(plan, sols), plan


def check_level_size_bound(g: Digraph, level: int, reduced: Digraph) -> bool:
    """Size bound for a suppressed block of a level-k network."""
    if g.n <= 2:
        return True
    return reduced.n <= 4 * level - 1 and reduced.m <= 5 * level - 2


def network_level(g: Digraph) -> int:
    """Maximum over blocks of the summed excess in-degree of reticulations."""
    best = 0
    for mask in sblocks(g):
        excess = sum(max((g.in_mask[v] & mask).bit_count() - 1, 0) for v in bits(mask))
        best = max(best, excess)
    return best
