"""Finite germ descriptions of labeled rooted trees.

A germ is a rooted, edge-labeled directed multigraph.  Unfolding all paths
from the root yields a locally finite rooted tree whose edges inherit the
labels; every tree handled by this package arises this way.  Edge declaration
order is significant because it fixes child order in the unfolding.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, NamedTuple

from .errors import ParseError, ValidationFailed

NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")

# Labels in input files are machine-width; products computed elsewhere are not.
MAX_LABEL = 2**63 - 1


class GermEdge(NamedTuple):
    src: str
    dst: str
    label: int


@dataclass(frozen=True)
class GermGraph:
    """Immutable germ value.

    ``vertices`` preserves declaration order; ``edges`` preserves declaration
    order and carries nonnegative integer labels.
    """

    vertices: tuple[str, ...]
    root: str
    edges: tuple[GermEdge, ...]

    @property
    def is_trivial(self) -> bool:
        return not self.edges

    def out_edges(self, v: str) -> list[tuple[int, GermEdge]]:
        """Outgoing edges of ``v`` with their declaration indices."""
        return [(i, e) for i, e in enumerate(self.edges) if e.src == v]


@dataclass(frozen=True)
class Violation:
    rule: str
    subject: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violations: tuple[Violation, ...]


def parse_germ(text: str) -> GermGraph:
    """Parse germ file text.

    Grammar, one directive per line ('#' starts a comment):
      root <name>
      vertex <name>
      edge <src> <dst> <label>

    Exactly one root line (position free).  A name used in an edge line must
    be declared first, either by the root line (anywhere in the file) or by a
    vertex line textually before the edge.
    """
    root_name: str | None = None
    root_line = 0
    declared_at: dict[str, int] = {}
    order: list[tuple[int, str]] = []  # (line, name) in declaration order
    edge_rows: list[tuple[int, str, str, int]] = []

    lines = text.splitlines()
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        kind = tokens[0]
        if kind == "root":
            if len(tokens) != 2:
                raise ParseError(lineno, "root takes exactly one name")
            name = tokens[1]
            _check_name(lineno, name)
            if root_name is not None:
                raise ParseError(lineno, "duplicate root line")
            if name in declared_at:
                raise ParseError(lineno, f"name {name!r} already declared")
            root_name = name
            root_line = lineno
            declared_at[name] = lineno
            order.append((lineno, name))
        elif kind == "vertex":
            if len(tokens) != 2:
                raise ParseError(lineno, "vertex takes exactly one name")
            name = tokens[1]
            _check_name(lineno, name)
            if name in declared_at:
                raise ParseError(lineno, f"name {name!r} already declared")
            declared_at[name] = lineno
            order.append((lineno, name))
        elif kind == "edge":
            if len(tokens) != 4:
                raise ParseError(lineno, "edge takes source, target and label")
            _check_name(lineno, tokens[1])
            _check_name(lineno, tokens[2])
            if not re.fullmatch(r"\d+", tokens[3]):
                raise ParseError(lineno, f"label {tokens[3]!r} is not a nonnegative integer")
            label = int(tokens[3])
            if label > MAX_LABEL:
                raise ParseError(lineno, f"label {label} exceeds {MAX_LABEL}")
            edge_rows.append((lineno, tokens[1], tokens[2], label))
        else:
            raise ParseError(lineno, f"unknown directive {kind!r}")

    if root_name is None:
        raise ParseError(len(lines) + 1, "missing root line")

    edges = []
    for lineno, src, dst, label in edge_rows:
        for name in (src, dst):
            if name == root_name:
                continue  # the root line declares its name position-free
            at = declared_at.get(name)
            if at is None or at > lineno:
                raise ParseError(lineno, f"name {name!r} used before declaration")
        edges.append(GermEdge(src, dst, label))

    vertices = tuple(name for _, name in order)
    return GermGraph(vertices=vertices, root=root_name, edges=tuple(edges))


def _check_name(lineno: int, name: str) -> None:
    if not NAME_RE.fullmatch(name):
        raise ParseError(lineno, f"bad name {name!r}")


def render_germ(g: GermGraph) -> str:
    """Canonical text for ``g``; parse_germ(render_germ(g)) == g."""
    out = []
    for name in g.vertices:
        out.append(f"root {name}" if name == g.root else f"vertex {name}")
    for e in g.edges:
        out.append(f"edge {e.src} {e.dst} {e.label}")
    return "\n".join(out) + "\n"


def validate_germ(g: GermGraph) -> ValidationReport:
    """Check the structural rules a germ must satisfy.

    Rules: every referenced name declared and unique; every vertex reachable
    from the root; every reachable vertex has an outgoing edge (leafless),
    except the single-vertex zero-edge germ; every vertex that is the target
    of a reachable 0-labeled edge has only 0-labeled outgoing edges.
    """
    violations: list[Violation] = []
    seen: set[str] = set()
    for name in g.vertices:
        if name in seen:
            violations.append(Violation("structure", name, f"vertex {name!r} declared twice"))
        seen.add(name)
    if g.root not in seen:
        violations.append(Violation("structure", g.root, f"root {g.root!r} is not declared"))
    for e in g.edges:
        for name in (e.src, e.dst):
            if name not in seen:
                violations.append(Violation("structure", name, f"edge endpoint {name!r} is not declared"))
        if e.label < 0:
            violations.append(Violation("structure", f"{e.src}->{e.dst}", "negative label"))
    if violations:
        return ValidationReport(ok=False, violations=tuple(violations))

    reachable = _reachable_from_root(g)

    out_by_vertex: dict[str, list[GermEdge]] = {v: [] for v in g.vertices}
    for e in g.edges:
        out_by_vertex[e.src].append(e)

    trivial = g.is_trivial and len(g.vertices) == 1
    for v in g.vertices:
        if v in reachable and not out_by_vertex[v] and not trivial:
            violations.append(Violation("leafless", v, f"vertex {v!r} has no outgoing edge"))

    null_targets = {e.dst for e in g.edges if e.label == 0 and e.src in reachable}
    for v in g.vertices:
        if v in null_targets:
            bad = [e for e in out_by_vertex[v] if e.label > 0]
            if bad:
                e = bad[0]
                violations.append(
                    Violation(
                        "null-closure",
                        v,
                        f"vertex {v!r} follows a 0-labeled edge but has edge {e.src}->{e.dst} labeled {e.label}",
                    )
                )

    for v in g.vertices:
        if v not in reachable:
            violations.append(Violation("unreachable", v, f"vertex {v!r} is not reachable from the root"))

    return ValidationReport(ok=not violations, violations=tuple(violations))


def _reachable_from_root(g: GermGraph) -> set[str]:
    reached = {g.root}
    frontier = [g.root]
    adj: dict[str, list[str]] = {}
    for e in g.edges:
        adj.setdefault(e.src, []).append(e.dst)
    while frontier:
        v = frontier.pop()
        for w in adj.get(v, ()):
            if w not in reached:
                reached.add(w)
                frontier.append(w)
    return reached


def require_valid(g: GermGraph) -> None:
    report = validate_germ(g)
    if not report.ok:
        raise ValidationFailed(report)


def germ_from_edges(root: str, edges: Iterable[tuple[str, str, int]]) -> GermGraph:
    """Convenience constructor; vertex order = first appearance."""
    edge_tuple = tuple(GermEdge(s, d, k) for s, d, k in edges)
    names: list[str] = [root]
    for e in edge_tuple:
        for name in (e.src, e.dst):
            if name not in names:
                names.append(name)
    return GermGraph(vertices=tuple(names), root=root, edges=edge_tuple)
