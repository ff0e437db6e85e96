"""Layout evaluators: extensions, tree extensions and their widths.

An extension is a sequence of vertex ids in which every arc points to an
earlier position (leaves first, roots last). A tree extension is a rooted
tree on the same vertices in which every arc runs from an ancestor down to
a descendant.
"""

from __future__ import annotations

from collections import deque
from collections.abc import Sequence
from dataclasses import dataclass

from .graph import Digraph, bits, component_of, indegree_of_set, weakly_connected_components


class NotAnExtension(ValueError):
    pass


class NotATreeExtension(ValueError):
    pass


@dataclass
class WidthReport:
    """Width of a layout.

    ``where`` is the 0-based position (for linear layouts) or the vertex id
    (for tree layouts) attaining ``value``. ``profile`` lists the per-position
    or per-vertex sizes; ``sets`` is filled only when requested.
    """

    value: int
    where: int
    profile: list[int]
    sets: list[list[tuple[int, int]]] | None = None


@dataclass(frozen=True)
class TreeExtension:
    """Rooted tree given by a parent map; the root's parent is None."""

    parent: tuple[int | None, ...]

    @property
    def root(self) -> int:
        return self.parent.index(None)

    @property
    def n(self) -> int:
        return len(self.parent)

    def children(self) -> list[list[int]]:
        kids: list[list[int]] = [[] for _ in self.parent]
        for v, p in enumerate(self.parent):
            if p is not None:
                kids[p].append(v)
        return kids

    def subtree_masks(self) -> list[int]:
        """sub[v] = bitset of the subtree rooted at v (v included)."""
        kids = self.children()
        order = []
        stack = [self.root]
        while stack:
            v = stack.pop()
            order.append(v)
            stack.extend(kids[v])
        sub = [0] * self.n
        for v in reversed(order):
            m = 1 << v
            for c in kids[v]:
                m |= sub[c]
            sub[v] = m
        return sub


# linear extensions


def check_extension(g: Digraph, order: Sequence[int]) -> list[int]:
    """Return the position map, or raise NotAnExtension naming the problem."""
    if len(order) != g.n or sorted(order) != list(range(g.n)):
        raise NotAnExtension("not a permutation of the vertex set")
    pos = [0] * g.n
    for i, v in enumerate(order):
        pos[v] = i
    for u, v, _ in g.arcs():
        if pos[v] > pos[u]:
            raise NotAnExtension(
                f"arc {g.labels[u]}->{g.labels[v]}: head placed after tail"
            )
    return pos


def is_extension(g: Digraph, order: Sequence[int]) -> bool:
    try:
        check_extension(g, order)
    except NotAnExtension:
        return False
    return True


def sw_profile(g: Digraph, order: Sequence[int]) -> list[int]:
    """|SW_i| for every position, via union-find with open in-weights.

    The component that a newly placed vertex joins consists of the vertex and
    the components of its (already placed) children. Its open weight is the
    sum of the merged components' open weights, minus the arcs from the new
    vertex into them, plus the new vertex's own in-weight.
    """
    parent = list(range(g.n))
    open_w = [0] * g.n

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    prof = []
    for v in order:
        total = g.in_weight[v] - g.out_weight[v]
        seen = set()
        for c in g.out_adj[v]:
            r = find(c)
            if r not in seen:
                seen.add(r)
                total += open_w[r]
                parent[r] = v
        open_w[v] = total
        prof.append(total)
    return prof


def _sw_sets(g: Digraph, order: Sequence[int]) -> list[list[tuple[int, int]]]:
    sets = []
    placed = 0
    for v in order:
        placed |= 1 << v
        comp = component_of(g, placed, v)
        sets.append(
            [(u, y) for y in bits(comp) for u in sorted(g.in_adj[y]) if not (placed >> u) & 1]
        )
    return sets


def _report(profile: list[int], sets=None) -> WidthReport:
    if not profile:
        return WidthReport(0, 0, [], sets)
    best = max(profile)
    return WidthReport(best, profile.index(best), profile, sets)


def scanwidth_of_extension(
    g: Digraph, order: Sequence[int], with_sets: bool = False
) -> WidthReport:
    check_extension(g, order)
    return _report(sw_profile(g, order), _sw_sets(g, order) if with_sets else None)


def cutwidth_of_extension(
    g: Digraph, order: Sequence[int], with_sets: bool = False
) -> WidthReport:
    pos = check_extension(g, order)
    prof = []
    cur = 0
    for v in order:
        cur += g.in_weight[v] - g.out_weight[v]
        prof.append(cur)
    sets = None
    if with_sets:
        sets = [
            [(u, v) for u, v, _ in g.arcs() if pos[v] <= i < pos[u]] for i in range(g.n)
        ]
    return _report(prof, sets)


# tree extensions


def _check_tree(t: TreeExtension, n: int) -> list[int]:
    if t.n != n:
        raise NotATreeExtension("tree does not cover the vertex set")
    if t.parent.count(None) != 1:
        raise NotATreeExtension("tree must have exactly one root")
    for v, p in enumerate(t.parent):
        if p is not None and not 0 <= p < n:
            raise NotATreeExtension(f"parent of {v} out of range")
    sub = t.subtree_masks()
    if sub[t.root] != (1 << n) - 1:
        raise NotATreeExtension("parent map contains a cycle")
    return sub


def check_tree_extension(g: Digraph, t: TreeExtension) -> list[int]:
    """Return subtree bitsets, or raise naming the violated constraint."""
    sub = _check_tree(t, g.n)
    for u, v, _ in g.arcs():
        if u == v or not (sub[u] >> v) & 1:
            raise NotATreeExtension(
                f"arc {g.labels[u]}->{g.labels[v]}: tail is not an ancestor of head"
            )
    return sub


def check_tree_layout(g: Digraph, t: TreeExtension) -> list[int]:
    """Undirected variant: arc endpoints need only be comparable."""
    sub = _check_tree(t, g.n)
    for u, v, _ in g.arcs():
        if not ((sub[u] >> v) & 1 or (sub[v] >> u) & 1):
            raise NotATreeExtension(
                f"edge {g.labels[u]}-{g.labels[v]}: endpoints are not comparable"
            )
    return sub


def scanwidth_of_tree_extension(
    g: Digraph, t: TreeExtension, with_sets: bool = False
) -> WidthReport:
    # GW_v is exactly the set of arcs entering the subtree of v
    sub = check_tree_extension(g, t)
    prof = [indegree_of_set(g, sub[v]) for v in range(g.n)]
    sets = None
    if with_sets:
        sets = [
            [(u, y) for y in bits(sub[v]) for u in sorted(g.in_adj[y]) if not (sub[v] >> u) & 1]
            for v in range(g.n)
        ]
    return _report(prof, sets)


def treewidth_of_tree_layout(g: Digraph, t: TreeExtension) -> WidthReport:
    """Per-layout treewidth: ancestors of v adjacent to the subtree of v."""
    sub = check_tree_layout(g, t)
    prof = []
    for v in range(g.n):
        touched = 0
        for w in bits(sub[v]):
            touched |= g.nbr_mask[w]
        prof.append((touched & ~sub[v]).bit_count())
    return _report(prof)


def canonical_tree_extension(g: Digraph, order: Sequence[int]) -> TreeExtension:
    """Bottom-up build: each vertex becomes parent of the current tops of the
    placed components it touches."""
    check_extension(g, order)
    parent: list[int | None] = [None] * g.n
    comp = list(range(g.n))
    top = list(range(g.n))

    def find(x: int) -> int:
        while comp[x] != x:
            comp[x] = comp[comp[x]]
            x = comp[x]
        return x

    for v in order:
        for c in sorted(g.out_adj[v]):
            r = find(c)
            if r != v:
                parent[top[r]] = v
                comp[r] = v
    return TreeExtension(tuple(parent))


def verify_canonical(g: Digraph, t: TreeExtension) -> bool:
    sub = check_tree_extension(g, t)
    return all(len(weakly_connected_components(g, s)) == 1 for s in sub)


def extension_of_tree_extension(g: Digraph, t: TreeExtension) -> list[int]:
    """Reverse of a breadth-first traversal from the root."""
    check_tree_extension(g, t)
    kids = t.children()
    seen = []
    queue = deque([t.root])
    while queue:
        v = queue.popleft()
        seen.append(v)
        queue.extend(sorted(kids[v]))
    return seen[::-1]


def tree_from_pairs(g: Digraph, pairs: Sequence[tuple[str, str | None]]) -> TreeExtension:
    """Build a tree extension from (child label, parent label or None) pairs."""
    parent: list[int | None] = [None] * g.n
    seen = set()
    for child, par in pairs:
        c = g.id_of(child)
        if c in seen:
            raise NotATreeExtension(f"vertex {child} listed twice")
        seen.add(c)
        parent[c] = None if par is None else g.id_of(par)
    if len(seen) != g.n:
        missing = [g.labels[v] for v in range(g.n) if v not in seen]
        raise NotATreeExtension(f"vertices missing from tree: {missing}")
    return TreeExtension(tuple(parent))
