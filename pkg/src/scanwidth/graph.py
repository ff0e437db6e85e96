"""Weighted DAG representation and the structural queries the solvers share.

Vertex subsets are plain Python ints used as bitsets (bit ``v`` set means
vertex ``v`` is a member). Python ints have no width limit, so the same
encoding serves small and large graphs alike.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass, field

Arc = tuple[int, int, int]


class GraphError(ValueError):
    """Base class for structural problems with an input graph."""


class InvalidGraph(GraphError):
    pass


def bits(mask: int) -> Iterator[int]:
    """Yield the members of a bitset in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def popcount(mask: int) -> int:
    return mask.bit_count()


@dataclass
class ValidationReport:
    acyclic: bool
    weakly_connected: bool
    self_loops: list[tuple[int, int]] = field(default_factory=list)
    parallel_arcs: list[tuple[int, int]] = field(default_factory=list)
    roots: list[int] = field(default_factory=list)
    leaves: list[int] = field(default_factory=list)
    cycle: list[int] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (
            self.acyclic
            and self.weakly_connected
            and not self.self_loops
            and not self.parallel_arcs
        )

    def problems(self) -> list[str]:
        out = []
        if self.self_loops:
            out.append(f"self-loops at {self.self_loops}")
        if self.parallel_arcs:
            out.append(f"parallel arcs {self.parallel_arcs}")
        if not self.acyclic:
            out.append(f"cyclic (cycle through {self.cycle})")
        if not self.weakly_connected:
            out.append("not weakly connected")
        return out


class Digraph:
    """Immutable weighted digraph with dense integer ids and string labels.

    ``arcs`` keeps the raw input list so that ``validate`` can report
    self-loops and repeated arcs; the adjacency maps merge repeats.
    """

    def __init__(
        self,
        n: int,
        arcs: Iterable[tuple[int, int] | Arc],
        labels: Sequence[str] | None = None,
    ) -> None:
        self.n = n
        self.labels: tuple[str, ...] = (
            tuple(labels) if labels is not None else tuple(str(i) for i in range(n))
        )
        if len(self.labels) != n:
            raise ValueError("label count does not match vertex count")
        raw: list[Arc] = []
        for a in arcs:
            u, v = a[0], a[1]
            w = a[2] if len(a) > 2 else 1
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"arc ({u}, {v}) out of range")
            if w <= 0:
                raise ValueError(f"arc ({u}, {v}) has non-positive weight {w}")
            raw.append((u, v, w))
        self.raw_arcs: tuple[Arc, ...] = tuple(raw)
        self.out_adj: list[dict[int, int]] = [{} for _ in range(n)]
        self.in_adj: list[dict[int, int]] = [{} for _ in range(n)]
        for u, v, w in raw:
            self.out_adj[u][v] = self.out_adj[u].get(v, 0) + w
            self.in_adj[v][u] = self.in_adj[v].get(u, 0) + w
        self.out_mask = [mask_of(d) for d in self.out_adj]
        self.in_mask = [mask_of(d) for d in self.in_adj]
        self.nbr_mask = [self.out_mask[v] | self.in_mask[v] for v in range(n)]
        self.in_weight = [sum(d.values()) for d in self.in_adj]
        self.out_weight = [sum(d.values()) for d in self.out_adj]
        self.unit = all(w == 1 for d in self.out_adj for w in d.values())
        self._index = {lab: i for i, lab in enumerate(self.labels)}
        self._topo: list[int] | None = None
        self._reach: list[int] | None = None

    @classmethod
    def from_labeled_arcs(
        cls, arcs: Iterable[tuple[str, str] | tuple[str, str, int]]
    ) -> Digraph:
        """Build a graph from label pairs, numbering labels by first appearance."""
        index: dict[str, int] = {}
        out: list[Arc] = []
        for a in arcs:
            ids = []
            for lab in a[:2]:
                if lab not in index:
                    index[lab] = len(index)
                ids.append(index[lab])
            out.append((ids[0], ids[1], a[2] if len(a) > 2 else 1))
        return cls(len(index), out, list(index))

    # basic accessors

    @property
    def all(self) -> int:
        return (1 << self.n) - 1

    def arcs(self) -> Iterator[Arc]:
        """Merged arcs (u, v, weight) ordered by tail then head."""
        for u in range(self.n):
            for v in sorted(self.out_adj[u]):
                yield u, v, self.out_adj[u][v]

    @property
    def m(self) -> int:
        return sum(len(d) for d in self.out_adj)

    def total_weight(self) -> int:
        return sum(self.out_weight)

    def weight(self, u: int, v: int) -> int:
        return self.out_adj[u].get(v, 0)

    def has_arc(self, u: int, v: int) -> bool:
        return v in self.out_adj[u]

    def id_of(self, label: str) -> int:
        return self._index[label]

    def ids(self, labels: Iterable[str]) -> list[int]:
        return [self._index[x] for x in labels]

    def mask(self, labels: Iterable[str]) -> int:
        return mask_of(self._index[x] for x in labels)

    def names(self, vertices: Iterable[int] | int) -> list[str]:
        if isinstance(vertices, int):
            vertices = bits(vertices)
        return [self.labels[v] for v in vertices]

    def __repr__(self) -> str:
        return f"Digraph(n={self.n}, m={self.m})"

    # order structure

    def topological_order(self) -> list[int]:
        """Parents before children. Raises InvalidGraph on a cycle."""
        if self._topo is None:
            indeg = [len(d) for d in self.in_adj]
            stack = [v for v in range(self.n - 1, -1, -1) if indeg[v] == 0]
            order = []
            while stack:
                v = stack.pop()
                order.append(v)
                for c in sorted(self.out_adj[v], reverse=True):
                    indeg[c] -= 1
                    if indeg[c] == 0:
                        stack.append(c)
            if len(order) != self.n:
                raise InvalidGraph("graph contains a directed cycle")
            self._topo = order
        return list(self._topo)

    def descendants(self) -> list[int]:
        """reach[v] = bitset of vertices reachable from v by a nonempty path."""
        if self._reach is None:
            reach = [0] * self.n
            for v in reversed(self.topological_order()):
                r = 0
                for c in self.out_adj[v]:
                    r |= reach[c] | (1 << c)
                reach[v] = r
            self._reach = reach
        return self._reach

    def find_cycle(self) -> list[int]:
        """Return one directed cycle as a vertex list, or [] if acyclic."""
        color = [0] * self.n
        parent = [-1] * self.n
        for s in range(self.n):
            if color[s]:
                continue
            stack = [(s, iter(sorted(self.out_adj[s])))]
            color[s] = 1
            while stack:
                v, it = stack[-1]
                nxt = next(it, None)
                if nxt is None:
                    color[v] = 2
                    stack.pop()
                elif color[nxt] == 0:
                    color[nxt] = 1
                    parent[nxt] = v
                    stack.append((nxt, iter(sorted(self.out_adj[nxt]))))
                elif color[nxt] == 1:
                    cyc = [v]
                    while cyc[-1] != nxt:
                        cyc.append(parent[cyc[-1]])
                    return cyc[::-1]
        return []

    def induced(self, subset: int) -> tuple[Digraph, list[int]]:
        """Induced subgraph with fresh ids; also returns local -> global ids."""
        verts = list(bits(subset))
        local = {v: i for i, v in enumerate(verts)}
        arcs = [
            (local[u], local[v], w)
            for u in verts
            for v, w in sorted(self.out_adj[u].items())
            if v in local
        ]
        return Digraph(len(verts), arcs, [self.labels[v] for v in verts]), verts


def validate(g: Digraph) -> ValidationReport:
    seen: set[tuple[int, int]] = set()
    loops, parallel = [], []
    for u, v, _ in g.raw_arcs:
        if u == v:
            loops.append((u, v))
        elif (u, v) in seen:
            parallel.append((u, v))
        seen.add((u, v))
    cycle = g.find_cycle() if not loops else [loops[0][0]]
    return ValidationReport(
        acyclic=not cycle,
        weakly_connected=g.n > 0 and len(weakly_connected_components(g, g.all)) == 1,
        self_loops=loops,
        parallel_arcs=parallel,
        roots=list(bits(roots(g, g.all))),
        leaves=list(bits(leaves(g, g.all))),
        cycle=cycle,
    )


def require_valid(g: Digraph) -> None:
    """Raise InvalidGraph unless g is a weakly connected simple DAG."""
    report = validate(g)
    if not report.ok:
        raise InvalidGraph("; ".join(report.problems()))


def weakly_connected_components(g: Digraph, restrict: int) -> list[int]:
    """Components of G[restrict], ordered by their lowest vertex id."""
    comps = []
    rest = restrict
    nbr = g.nbr_mask
    while rest:
        comp = rest & -rest
        frontier = comp
        while frontier:
            low = frontier & -frontier
            frontier ^= low
            new = nbr[low.bit_length() - 1] & rest & ~comp
            comp |= new
            frontier |= new
        comps.append(comp)
        rest &= ~comp
    return comps


def component_of(g: Digraph, restrict: int, v: int) -> int:
    """The component of G[restrict] that contains v."""
    comp = 1 << v
    frontier = comp
    nbr = g.nbr_mask
    while frontier:
        low = frontier & -frontier
        frontier ^= low
        new = nbr[low.bit_length() - 1] & restrict & ~comp
        comp |= new
        frontier |= new
    return comp


def roots(g: Digraph, restrict: int) -> int:
    return mask_of(v for v in bits(restrict) if not g.in_mask[v] & restrict)


def leaves(g: Digraph, restrict: int) -> int:
    return mask_of(v for v in bits(restrict) if not g.out_mask[v] & restrict)


def is_sinkset(g: Digraph, w: int) -> bool:
    return all(not g.out_mask[v] & ~w for v in bits(w))


def indegree_of_set(g: Digraph, w: int) -> int:
    """Total weight of arcs entering w from outside."""
    outside = ~w
    total = 0
    if g.unit:
        for v in bits(w):
            total += (g.in_mask[v] & outside).bit_count()
        return total
    for v in bits(w):
        if g.in_mask[v] & outside:
            total += sum(x for u, x in g.in_adj[v].items() if not (w >> u) & 1)
    return total


def transitive_reduction(g: Digraph) -> Digraph:
    """Drop every arc uv that is implied by a longer u-v path."""
    reach = g.descendants()
    keep = []
    for u in range(g.n):
        via_other = 0
        for c in g.out_adj[u]:
            via_other |= reach[c]
        for v, w in sorted(g.out_adj[u].items()):
            if not (via_other >> v) & 1:
                keep.append((u, v, w))
    return Digraph(g.n, keep, g.labels)
