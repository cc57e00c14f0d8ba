"""Explicit truncations of the tree a germ unfolds to.

Nodes are numbered breadth first, tier by tier, children in edge declaration
order, so equal germs always unfold to identical node tables.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .errors import DomainError, SizeCeilingError
from .germ import GermEdge, GermGraph, require_valid

DEFAULT_CEILING = 10**6


@dataclass(frozen=True)
class TreeNode:
    id: int
    tier: int
    parent: int | None
    germ_vertex: str
    label: int | None  # label of the incoming edge; None at the root
    positive: bool  # no 0 label anywhere on the root path


class TruncatedTree:
    """A depth-``d`` truncation.  Node ids are stable under filtering."""

    def __init__(self, depth: int, nodes: tuple[TreeNode, ...]) -> None:
        self.depth = depth
        self.nodes = nodes
        self._by_id = {n.id: n for n in nodes}
        self._children: dict[int, list[int]] = {n.id: [] for n in nodes}
        for n in nodes:
            if n.parent is not None:
                self._children[n.parent].append(n.id)

    def node(self, node_id: int) -> TreeNode:
        return self._by_id[node_id]

    def has_node(self, node_id: int) -> bool:
        return node_id in self._by_id

    def children(self, node_id: int) -> tuple[int, ...]:
        return tuple(self._children[node_id])

    @property
    def root(self) -> TreeNode:
        return self.nodes[0]

    def tier_nodes(self, tier: int) -> list[TreeNode]:
        return [n for n in self.nodes if n.tier == tier]

    def structure_key(self, node_id: int | None = None):
        """Recursive (name, label, positive, children) shape, for comparisons."""
        n = self.root if node_id is None else self.node(node_id)
        kids = tuple(self.structure_key(c) for c in self.children(n.id))
        return (n.germ_vertex, n.label, n.positive, kids)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, TruncatedTree)
            and self.depth == other.depth
            and self.nodes == other.nodes
        )

    def __repr__(self) -> str:
        return f"TruncatedTree(depth={self.depth}, nodes={len(self.nodes)})"


def truncate(g: GermGraph, depth: int, ceiling: int = DEFAULT_CEILING) -> TruncatedTree:
    """Unfold ``g`` to tiers 0..depth.

    Raises SizeCeilingError naming the first offending tier if the node count
    would pass ``ceiling``.
    """
    require_valid(g)
    if depth < 0:
        raise DomainError("depth must be nonnegative")
    out_edges = {v: g.out_edges(v) for v in g.vertices}
    nodes = [TreeNode(0, 0, None, g.root, None, True)]
    tier_start = 0
    for tier in range(1, depth + 1):
        next_nodes: list[TreeNode] = []
        for parent in nodes[tier_start:]:
            for _, e in out_edges[parent.germ_vertex]:
                positive = parent.positive and e.label > 0
                next_nodes.append(
                    TreeNode(len(nodes) + len(next_nodes), tier, parent.id, e.dst, e.label, positive)
                )
        if len(nodes) + len(next_nodes) > ceiling:
            raise SizeCeilingError(f"truncation at tier {tier}", len(nodes) + len(next_nodes), ceiling)
        tier_start = len(nodes)
        nodes.extend(next_nodes)
    return TruncatedTree(depth, tuple(nodes))


def positive_part(t: TruncatedTree) -> TruncatedTree:
    """Restriction to nodes whose root path has no 0 label.  Ids survive."""
    return TruncatedTree(t.depth, tuple(n for n in t.nodes if n.positive))


@dataclass(frozen=True)
class NullComponent:
    root_id: int  # a non-positive node whose parent is positive
    nodes: tuple[TreeNode, ...]  # the whole non-positive subtree, in id order

    @property
    def node_ids(self) -> tuple[int, ...]:
        return tuple(n.id for n in self.nodes)


@dataclass(frozen=True)
class NullForest:
    components: tuple[NullComponent, ...]


def null_forest(t: TruncatedTree) -> NullForest:
    """Connected components of the non-positive part of ``t``."""
    components = []
    for n in t.nodes:
        if n.positive:
            continue
        parent_positive = n.parent is not None and t.node(n.parent).positive
        if not parent_positive:
            continue
        ids = []
        stack = [n.id]
        while stack:
            cur = stack.pop()
            ids.append(cur)
            stack.extend(reversed(t.children(cur)))
        component_nodes = tuple(t.node(i) for i in sorted(ids))
        components.append(NullComponent(n.id, component_nodes))
    return NullForest(tuple(components))


class Cardinality(Enum):
    EMPTY = "Empty"
    COUNTABLY_INFINITE = "CountablyInfinite"
    UNCOUNTABLE = "Uncountable"
    FINITE = "Finite"


@dataclass(frozen=True)
class CardinalityClass:
    kind: Cardinality
    count: int | None = None  # only for FINITE

    @staticmethod
    def empty() -> "CardinalityClass":
        return CardinalityClass(Cardinality.EMPTY)

    @staticmethod
    def countable() -> "CardinalityClass":
        return CardinalityClass(Cardinality.COUNTABLY_INFINITE)

    @staticmethod
    def uncountable() -> "CardinalityClass":
        return CardinalityClass(Cardinality.UNCOUNTABLE)

    @staticmethod
    def finite(count: int) -> "CardinalityClass":
        return CardinalityClass(Cardinality.FINITE, count)

    def __str__(self) -> str:
        if self.kind is Cardinality.FINITE:
            return f"Finite({self.count})"
        return self.kind.value


def gamma_plus_is_finite(g: GermGraph) -> tuple[bool, int | None]:
    """Whether the positive part of the unfolding is finite.

    Returns (True, bound) with bound the longest positive path length from the
    root, or (False, None) when a positive cycle is reachable positively.
    """
    require_valid(g)
    adj: dict[str, list[str]] = {}
    for e in g.edges:
        if e.label > 0:
            adj.setdefault(e.src, []).append(e.dst)
    reach = {g.root}
    stack = [g.root]
    while stack:
        v = stack.pop()
        for w in adj.get(v, ()):
            if w not in reach:
                reach.add(w)
                stack.append(w)
    # Cycle detection inside the positively reachable subgraph.
    WHITE, GRAY, BLACK = 0, 1, 2
    color = {v: WHITE for v in reach}
    order: list[str] = []

    def visit(start: str) -> bool:
        stack = [(start, iter(adj.get(start, ())))]
        color[start] = GRAY
        while stack:
            v, it = stack[-1]
            advanced = False
            for w in it:
                if w not in reach:
                    continue
                if color[w] == GRAY:
                    return True
                if color[w] == WHITE:
                    color[w] = GRAY
                    stack.append((w, iter(adj.get(w, ()))))
                    advanced = True
                    break
            if not advanced:
                color[v] = BLACK
                order.append(v)
                stack.pop()
        return False

    for v in sorted(reach):
        if color[v] == WHITE and visit(v):
            return (False, None)

    # Acyclic: longest positive path from the root via reverse postorder DP.
    longest = {v: None for v in reach}
    longest[g.root] = 0
    for v in reversed(order):
        if longest[v] is None:
            continue
        for w in adj.get(v, ()):
            if w in reach and (longest[w] is None or longest[w] < longest[v] + 1):
                longest[w] = longest[v] + 1
    bound = max(x for x in longest.values() if x is not None)
    return (True, bound)


def _null_context(g: GermGraph) -> tuple[set[str], list[tuple[str, str]], set[str]]:
    """Vertices reachable through a 0-labeled edge, the 0-edges among them,
    and the entry vertices (targets of reachable 0-labeled edges)."""
    reachable = set()
    stack = [g.root]
    reachable.add(g.root)
    adj: dict[str, list[GermEdge]] = {}
    for e in g.edges:
        adj.setdefault(e.src, []).append(e)
    while stack:
        v = stack.pop()
        for e in adj.get(v, ()):
            if e.dst not in reachable:
                reachable.add(e.dst)
                stack.append(e.dst)
    entries = {e.dst for e in g.edges if e.label == 0 and e.src in reachable}
    zone = set(entries)
    stack = list(entries)
    while stack:
        v = stack.pop()
        for e in adj.get(v, ()):
            if e.label == 0 and e.dst not in zone:
                zone.add(e.dst)
                stack.append(e.dst)
    null_edges = [(e.src, e.dst) for e in g.edges if e.label == 0 and e.src in zone]
    return zone, null_edges, entries


def null_end_class(g: GermGraph) -> CardinalityClass:
    """How many ends the null subtrees of the unfolding contribute.

    Empty when no 0-labeled edge is reachable.  Uncountable when some strongly
    connected piece of the null subgraph carries two distinct cycles through a
    shared vertex (more internal edges than vertices); countably infinite
    otherwise.
    """
    require_valid(g)
    reachable_zero = [e for e in g.edges if e.label == 0 and e.src in _reachable(g)]
    if not reachable_zero:
        return CardinalityClass.empty()
    zone, null_edges, _ = _null_context(g)
    for comp in _strongly_connected(zone, null_edges):
        comp_set = set(comp)
        internal = sum(1 for s, d in null_edges if s in comp_set and d in comp_set)
        if internal > len(comp):
            return CardinalityClass.uncountable()
    return CardinalityClass.countable()


def _reachable(g: GermGraph) -> set[str]:
    seen = {g.root}
    stack = [g.root]
    adj: dict[str, list[str]] = {}
    for e in g.edges:
        adj.setdefault(e.src, []).append(e.dst)
    while stack:
        v = stack.pop()
        for w in adj.get(v, ()):
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen


def _strongly_connected(vertices: set[str], edges: list[tuple[str, str]]) -> list[list[str]]:
    """Tarjan, iterative.  Parallel edges collapse for the DFS itself."""
    adj: dict[str, list[str]] = {v: [] for v in vertices}
    for s, d in edges:
        adj[s].append(d)
    index: dict[str, int] = {}
    low: dict[str, int] = {}
    on_stack: set[str] = set()
    stack: list[str] = []
    sccs: list[list[str]] = []
    counter = [0]

    for start in sorted(vertices):
        if start in index:
            continue
        work = [(start, iter(adj[start]))]
        index[start] = low[start] = counter[0]
        counter[0] += 1
        stack.append(start)
        on_stack.add(start)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter[0]
                    counter[0] += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(adj[w])))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                pv = work[-1][0]
                low[pv] = min(low[pv], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                sccs.append(comp)
    return sccs


class GrowthClass(Enum):
    POLYNOMIAL = "polynomial"
    EXPONENTIAL = "exponential"
    UNKNOWN = "unknown"


def null_path_counts(g: GermGraph, n_max: int) -> list[int]:
    """Count, for n = 1..n_max, the directed length-n paths inside the null
    subgraph that start at an entry vertex.  The growth class of this count
    separates countably many null ends from uncountably many."""
    require_valid(g)
    zone, null_edges, entries = _null_context(g)
    out: dict[str, list[str]] = {v: [] for v in zone}
    for s, d in null_edges:
        out[s].append(d)
    counts = []
    # paths_from[v] = number of length-n paths starting at v, by DP on n.
    paths_from = {v: 1 for v in zone}
    for _ in range(n_max):
        paths_from = {v: sum(paths_from[w] for w in out[v]) for v in zone}
        counts.append(sum(paths_from[v] for v in entries))
    return counts


def growth_class(counts: list[int], max_degree: int = 8) -> GrowthClass:
    """Classify a count sequence on a finite window.

    Polynomial when some finite-difference order vanishes on the tail;
    exponential when the tail ratios stay at or above 5/4.  Desk-scale oracle:
    germs whose growth has not separated by the window end come back UNKNOWN.
    """
    tail = counts[len(counts) // 3 :]
    diffs = list(tail)
    for _ in range(max_degree + 1):
        if all(x == 0 for x in diffs):
            return GrowthClass.POLYNOMIAL
        if len(diffs) < 2:
            break
        diffs = [b - a for a, b in zip(diffs, diffs[1:])]
    if all(c > 0 for c in tail) and all(4 * b >= 5 * a for a, b in zip(tail, tail[1:])):
        if tail[-1] > tail[0]:
            return GrowthClass.EXPONENTIAL
    return GrowthClass.UNKNOWN
