"""End-structure classification with a cross-checking oracle battery.

The closed-form answers (end counts, rank towers, sequence flags) are all
recomputed here against the cell-complex machinery, so every claim in a
report is backed by at least one independent route.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from enum import Enum

from . import cw
from .coset import frontier_count, lambda_plus
from .errors import DomainError, SizeCeilingError, ValidationFailed
from .germ import GermGraph, require_valid
from .proseq import (
    InverseLimitClass,
    MultSequence,
    SequenceClass,
    classify_mult,
    format_sequence,
    inverse_limit_mult,
    ladder_search,
)
from .reduce import germ_power, germ_power_detailed
from .unfold import (
    DEFAULT_CEILING,
    Cardinality,
    CardinalityClass,
    GrowthClass,
    TruncatedTree,
    gamma_plus_is_finite,
    growth_class,
    null_forest,
    null_end_class,
    null_path_counts,
    positive_part,
    truncate,
)


class EndClass(Enum):
    TWO_ENDED = "TwoEnded"
    ONE_ENDED = "OneEnded"
    INFINITE_COUNTABLE = "InfiniteCountable"
    INFINITE_UNCOUNTABLE = "InfiniteUncountable"


@dataclass(frozen=True)
class EndReport:
    end_class: EndClass
    fixed_end_count: int
    gamma_plus_finite: bool
    null_ends: CardinalityClass
    rationale: tuple  # (claim, rule name) pairs


def classify_ends(g: GermGraph) -> EndReport:
    require_valid(g)
    if g.is_trivial:
        return EndReport(
            end_class=EndClass.TWO_ENDED,
            fixed_end_count=2,
            gamma_plus_finite=True,
            null_ends=CardinalityClass.empty(),
            rationale=(
                (
                    "a single vertex with no edges unfolds to a point, "
                    "so the space is a line with two ends",
                    "trivial-germ",
                ),
            ),
        )
    nulls = null_end_class(g)
    finite_plus, _ = gamma_plus_is_finite(g)
    if nulls.kind is Cardinality.EMPTY:
        assert not finite_plus, "leafless and null-free forces a positive cycle"
        return EndReport(
            end_class=EndClass.ONE_ENDED,
            fixed_end_count=1,
            gamma_plus_finite=False,
            null_ends=nulls,
            rationale=(
                (
                    "no zero-labeled edge is reachable, so no null rays exist",
                    "no-null-rays",
                ),
                (
                    "the positive part is infinite and the telescope pins one end",
                    "infinite-telescope",
                ),
            ),
        )
    rationale = [
        (
            "reachable zero-labeled edges hang a null ray off every clone",
            "null-rays-exist",
        )
    ]
    if nulls.kind is Cardinality.UNCOUNTABLE:
        end_class = EndClass.INFINITE_UNCOUNTABLE
        rationale.append(
            (
                "some null cluster carries two distinct cycles, "
                "so the null rays branch without bound",
                "null-cycle-pair",
            )
        )
    else:
        end_class = EndClass.INFINITE_COUNTABLE
        rationale.append(
            (
                "null rays never branch, so the null ends stay countable",
                "null-linear-growth",
            )
        )
    if finite_plus:
        fixed = 2
        rationale.append(
            (
                "the positive part is finite: a compact core crossed with "
                "a line keeps two fixed ends",
                "compact-core",
            )
        )
    else:
        fixed = 1
        rationale.append(
            (
                "the positive part is infinite and the telescope pins one end",
                "infinite-telescope",
            )
        )
    return EndReport(
        end_class=end_class,
        fixed_end_count=fixed,
        gamma_plus_finite=finite_plus,
        null_ends=nulls,
        rationale=tuple(rationale),
    )


@dataclass(frozen=True)
class RaySpec:
    """Eventually periodic root path, as germ edge indices."""

    prefix: tuple
    cycle: tuple


def check_ray(g: GermGraph, ray: RaySpec) -> None:
    if not ray.cycle:
        raise DomainError("a ray needs a nonempty cycle part")
    at = g.root
    for e in ray.prefix + ray.cycle:
        if not (0 <= e < len(g.edges)):
            raise DomainError(f"ray references edge {e}, germ has {len(g.edges)}")
    for e in ray.prefix:
        edge = g.edges[e]
        if edge.src != at:
            raise DomainError(f"ray prefix breaks at edge {e}: not at {edge.src}")
        at = edge.dst
    start = at
    for e in ray.cycle:
        edge = g.edges[e]
        if edge.src != at:
            raise DomainError(f"ray cycle breaks at edge {e}: not at {edge.src}")
        at = edge.dst
    if at != start:
        raise DomainError("ray cycle part does not close up")


def default_ray(g: GermGraph, ceiling: int = DEFAULT_CEILING) -> RaySpec | None:
    """Shortest, then lexicographically first, root path through positive
    edges that revisits one of its own vertices; closed at that revisit.
    When no positive cycle is reachable, fall back to the greedy walk along
    first-declared edges, null ones included."""
    require_valid(g)
    if g.is_trivial:
        return None
    queue = deque([((), g.root, (g.root,))])
    explored = 0
    while queue:
        trail, at, seen = queue.popleft()
        for idx, edge in g.out_edges(at):
            if edge.label <= 0:
                continue
            if edge.dst in seen:
                k = seen.index(edge.dst)
                return RaySpec(trail[:k], trail[k:] + (idx,))
            explored += 1
            if explored > ceiling:
                raise SizeCeilingError("ray search paths", explored, ceiling)
            queue.append((trail + (idx,), edge.dst, seen + (edge.dst,)))
    trail_list: list = []
    at = g.root
    seen_list = [g.root]
    while True:
        idx, edge = g.out_edges(at)[0]
        if edge.dst in seen_list:
            k = seen_list.index(edge.dst)
            return RaySpec(tuple(trail_list[:k]), tuple(trail_list[k:]) + (idx,))
        trail_list.append(idx)
        seen_list.append(edge.dst)
        at = edge.dst


def pro_pi1_ray(g: GermGraph, ray: RaySpec) -> MultSequence:
    """Multiplication tower read off along the ray's edge labels."""
    check_ray(g, ray)
    return MultSequence(
        tuple(g.edges[e].label for e in ray.prefix),
        tuple(g.edges[e].label for e in ray.cycle),
    )


@dataclass(frozen=True)
class RankSequence:
    ranks: tuple

    def __str__(self) -> str:
        return ",".join(str(r) for r in self.ranks)


def pro_h1_fixed_end(g: GermGraph, depth: int) -> RankSequence:
    """Rank tower of the neighborhoods of the fixed end: one less than the
    clone count over each tier.  Only defined with exactly one fixed end."""
    if depth < 0:
        raise DomainError("depth must be nonnegative")
    report = classify_ends(g)
    if report.fixed_end_count != 1:
        raise DomainError("rank tower needs exactly one fixed end")
    return RankSequence(tuple(frontier_count(g, i) - 1 for i in range(depth + 1)))


def power_ray(g: GermGraph, ray: RaySpec, m: int) -> RaySpec:
    """Image of a ray under edge-path blocking: the ray of ``germ_power(g, m)``
    whose length-m blocks retrace the original edges."""
    check_ray(g, ray)
    if m < 1:
        raise DomainError("power must be at least 1")
    powered, paths = germ_power_detailed(g, m)
    lookup = {
        (edge.src, paths[j]): j for j, edge in enumerate(powered.edges)
    }
    p_len, c_len = len(ray.prefix), len(ray.cycle)
    pre_blocks = -(-p_len // m)
    cyc_blocks = c_len // math.gcd(c_len, m)

    def step(t: int) -> int:
        return ray.prefix[t] if t < p_len else ray.cycle[(t - p_len) % c_len]

    at = g.root
    blocks = []
    for b in range(pre_blocks + cyc_blocks):
        src = at
        trail = []
        for t in range(b * m, (b + 1) * m):
            e = step(t)
            trail.append(e)
            at = g.edges[e].dst
        blocks.append(lookup[(src, tuple(trail))])
    out = RaySpec(tuple(blocks[:pre_blocks]), tuple(blocks[pre_blocks:]))
    check_ray(powered, out)
    return out


@dataclass(frozen=True)
class CheckResult:
    name: str
    status: str  # pass, fail, or skip
    detail: str


def _tree_child_along(g: GermGraph, t: TruncatedTree, node_id: int, edge_idx: int) -> int:
    """Child of a tree node reached by one germ edge, matched by position."""
    node = t.node(node_id)
    kids = t.children(node_id)
    for pos, (gi, _) in enumerate(g.out_edges(node.germ_vertex)):
        if gi == edge_idx:
            return kids[pos]
    raise DomainError(f"edge {edge_idx} does not leave vertex {node.germ_vertex}")


def cross_checks(
    g: GermGraph,
    depth: int = 4,
    height: int = 4,
    ceiling: int = DEFAULT_CEILING,
) -> list:
    """Dual-route battery: every closed-form answer is recomputed from cell
    complexes or brute-force counting.  Checks that do not apply to the
    germ's class are reported as skips, never silently dropped."""
    require_valid(g)
    if depth < 1 or height < 1:
        raise DomainError("depth and height must be at least 1")
    report = classify_ends(g)
    ray = default_ray(g, ceiling)
    results: list = []

    def add(name: str, ok: bool, detail: str) -> None:
        results.append(CheckResult(name, "pass" if ok else "fail", detail))

    def skip(name: str, detail: str) -> None:
        results.append(CheckResult(name, "skip", detail))

    fr_max = min(3, depth)
    coset = lambda_plus(positive_part(truncate(g, fr_max + 1, ceiling)), ceiling)

    if report.fixed_end_count == 1:
        ranks = pro_h1_fixed_end(g, fr_max)
        betti = [cw.frontier_complex_cover(coset, i)[1] for i in range(fr_max + 1)]
        add(
            "frontier-rank",
            list(ranks.ranks) == betti,
            f"closed form {list(ranks.ranks)} vs frontier graphs {betti}",
        )
    else:
        skip("frontier-rank", "rank tower needs exactly one fixed end")

    base_depth = min(depth, 3)
    ok = True
    details = []
    for d in (base_depth, base_depth + 1):
        t = truncate(g, d, ceiling)
        base = cw.build_base(t, ceiling)
        for i in range(1, min(3, d) + 1):
            sel = cw.infinity_neighborhood_base(base, i)
            sub, _, _ = cw.subcomplex(base.complex, sel)
            got = len(sub.components())
            want = len(t.tier_nodes(i))
            if got != want:
                ok = False
            details.append(f"d={d} i={i}: {got} vs {want}")
    add("branch-components", ok, "; ".join(details))

    if report.fixed_end_count == 1 and ray is not None:
        t3 = truncate(g, base_depth, ceiling)
        base3 = cw.build_base(t3, ceiling)
        ok = True
        details = []
        node_id = t3.root.id
        prod = 1
        for i in range(1, min(2, base_depth) + 1):
            e_idx = ray.prefix[i - 1] if i - 1 < len(ray.prefix) else ray.cycle[
                (i - 1 - len(ray.prefix)) % len(ray.cycle)
            ]
            prod *= g.edges[e_idx].label
            node_id = _tree_child_along(g, t3, node_id, e_idx)
            mat = cw.induced_h1(base3.complex, cw.branch_selection(base3, node_id))
            entries = [abs(x) for row in mat for x in row if x != 0]
            mult = math.gcd(*entries) if entries else 0
            if len(mat) != 1 or mult != prod:
                ok = False
            details.append(f"i={i}: multiplier {mult} vs label product {prod}")
        add("ray-multiplier", ok, "; ".join(details))
    else:
        skip("ray-multiplier", "needs one fixed end and a ray")

    cov_depth = min(depth, 3)
    tc = truncate(g, cov_depth, ceiling)
    nf = null_forest(tc)
    cov_coset = lambda_plus(positive_part(tc), ceiling)
    hc = min(height, 3)
    ok = True
    details = []
    for h in (hc, hc + 1):
        cover = cw.build_cover(cov_coset, nf, h, ceiling)
        n = len(cover.complex.components())
        if n != 1:
            ok = False
        details.append(f"height {h}: {n} component(s)")
    add("cover-connected", ok, "; ".join(details))

    if g.is_trivial:
        ok = True
        details = []
        for h in (hc, hc + 1):
            cover = cw.build_cover(cov_coset, nf, h, ceiling)
            mid = cover.middle_vertex
            verts = tuple(
                v for v in range(cover.complex.num_vertices) if v != mid
            )
            vset = set(verts)
            edges = tuple(
                i
                for i, (a, b) in enumerate(cover.complex.edges)
                if a in vset and b in vset
            )
            sub, _, _ = cw.subcomplex(
                cover.complex, cw.CellSelection(verts, edges, ())
            )
            n = len(sub.components())
            if n != 2:
                ok = False
            details.append(f"height {h}: middle vertex splits into {n}")
        add("two-ended-split", ok, "; ".join(details))
    else:
        skip("two-ended-split", "only meaningful for the one-vertex germ")

    counts = null_path_counts(g, 12)
    gc = growth_class(counts)
    kind = report.null_ends.kind
    if kind is Cardinality.EMPTY:
        ok = all(c == 0 for c in counts)
        want = "all-zero counts"
    elif kind is Cardinality.UNCOUNTABLE:
        ok = gc is GrowthClass.EXPONENTIAL
        want = "exponential"
    else:
        ok = gc is GrowthClass.POLYNOMIAL
        want = "polynomial"
    add("null-growth", ok, f"counts {counts[:6]}, class {gc.value}, expected {want}")

    for m in (2, 3):
        name = f"power-invariance-{m}"
        try:
            powered = germ_power(g, m, ceiling)
        except (ValidationFailed, SizeCeilingError) as exc:
            skip(name, f"power germ unavailable: {exc}")
            continue
        rep_m = classify_ends(powered)
        same = (
            rep_m.end_class is report.end_class
            and rep_m.fixed_end_count == report.fixed_end_count
            and rep_m.null_ends == report.null_ends
            and rep_m.gamma_plus_finite == report.gamma_plus_finite
        )
        tele = all(
            frontier_count(powered, i) == frontier_count(g, m * i)
            for i in range(depth // m + 1)
        )
        add(name, same and tele, f"class match {same}, frontier telescoping {tele}")

    if report.fixed_end_count == 1:
        ok = True
        details = []
        for i in range(min(2, fr_max) + 1):
            onto = cw.collapse_h1_matrix(coset, i).surjective()
            if not onto:
                ok = False
            details.append(f"i={i}: {'onto' if onto else 'not onto'}")
        add("collapse-surjective", ok, "; ".join(details))
    else:
        skip("collapse-surjective", "needs exactly one fixed end")

    if ray is not None:
        seq = pro_pi1_ray(g, ray)
        if all(k == 1 for k in seq.cycle):
            cert = ladder_search(seq, MultSequence((), (1,)), depth=4, bound=8)
            add(
                "ray-stable-label1",
                cert is not None,
                "ladder to the constant tower "
                + ("found" if cert is not None else "missing"),
            )
        else:
            skip("ray-stable-label1", "ray cycle labels are not all 1")
    else:
        skip("ray-stable-label1", "no ray")

    return results


@dataclass
class Report:
    germ: GermGraph
    ends: EndReport
    ranks: RankSequence | None
    ray: RaySpec | None
    ray_sequence: MultSequence | None
    flags: SequenceClass | None
    limit: InverseLimitClass | None
    checks: tuple


def full_report(
    g: GermGraph,
    depth: int = 4,
    height: int = 4,
    ceiling: int = DEFAULT_CEILING,
    run_checks: bool = True,
) -> Report:
    ends = classify_ends(g)
    ranks = pro_h1_fixed_end(g, depth) if ends.fixed_end_count == 1 else None
    ray = default_ray(g, ceiling)
    seq = pro_pi1_ray(g, ray) if ray is not None else None
    return Report(
        germ=g,
        ends=ends,
        ranks=ranks,
        ray=ray,
        ray_sequence=seq,
        flags=classify_mult(seq) if seq is not None else None,
        limit=inverse_limit_mult(seq) if seq is not None else None,
        checks=tuple(cross_checks(g, depth, height, ceiling)) if run_checks else (),
    )


def to_json_dict(report: Report) -> dict:
    flags = None
    if report.flags is not None:
        flags = report.flags.as_dict()
        flags["inverse_limit"] = report.limit.value
    return {
        "schema": 1,
        "end_class": report.ends.end_class.value,
        "fixed_ends": report.ends.fixed_end_count,
        "gamma_plus_finite": report.ends.gamma_plus_finite,
        "null_ends": str(report.ends.null_ends),
        "ranks": list(report.ranks.ranks) if report.ranks is not None else None,
        "ray_sequence": (
            format_sequence(report.ray_sequence)
            if report.ray_sequence is not None
            else None
        ),
        "flags": flags,
        "oracle_checks": [
            {"name": c.name, "status": c.status, "detail": c.detail}
            for c in report.checks
        ],
    }


def render_text(report: Report) -> str:
    lines = [
        f"end_class: {report.ends.end_class.value}",
        f"fixed_ends: {report.ends.fixed_end_count}",
        f"gamma_plus_finite: {str(report.ends.gamma_plus_finite).lower()}",
        f"null_ends: {report.ends.null_ends}",
    ]
    for claim, rule in report.ends.rationale:
        lines.append(f"because [{rule}] {claim}")
    if report.ranks is not None:
        lines.append(f"ranks: {report.ranks}")
    if report.ray_sequence is not None:
        lines.append(f"ray_sequence: {format_sequence(report.ray_sequence)}")
        f = report.flags
        lines.append(
            "flags: "
            + " ".join(
                [
                    f"pro_trivial={str(f.pro_trivial).lower()}",
                    f"semistable={str(f.semistable).lower()}",
                    f"pro_mono={str(f.pro_mono).lower()}",
                    f"stable={str(f.stable).lower()}",
                    f"inverse_limit={report.limit.value}",
                ]
            )
        )
    for c in report.checks:
        lines.append(f"check {c.name}: {c.status} ({c.detail})")
    return "\n".join(lines) + "\n"
