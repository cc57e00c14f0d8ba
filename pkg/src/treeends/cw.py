"""Finite CW 2-complexes for label telescopes and their covers.

This module is the brute-force side of every dual check: it materializes
actual cell complexes, runs exact integer homology on them, and lets the
closed-form answers elsewhere be compared against cell counting.

Complexes are immutable after construction.  Faces are attaching words:
sequences of (edge index, +1/-1) steps that must chain into a closed loop.
"""

from __future__ import annotations

from dataclasses import dataclass

from .coset import CosetTree
from .errors import DomainError, SizeCeilingError
from .intmat import (
    Matrix,
    has_trivial_cokernel,
    mat_vec,
    smith_normal_form,
    zeros,
)
from .unfold import DEFAULT_CEILING, NullForest, TruncatedTree


class CW2Complex:
    def __init__(
        self,
        num_vertices: int,
        edges: list,
        faces: list,
        vertex_labels: list | None = None,
        edge_labels: list | None = None,
    ):
        self.num_vertices = num_vertices
        self.edges = tuple((int(t), int(h)) for t, h in edges)
        self.faces = tuple(tuple((int(e), int(s)) for e, s in word) for word in faces)
        self.vertex_labels = tuple(vertex_labels) if vertex_labels else None
        self.edge_labels = tuple(edge_labels) if edge_labels else None
        for t, h in self.edges:
            if not (0 <= t < num_vertices and 0 <= h < num_vertices):
                raise DomainError(f"edge endpoint out of range: ({t}, {h})")
        for fi, word in enumerate(self.faces):
            if not word:
                raise DomainError(f"face {fi} has an empty attaching word")
            at = None
            start = None
            for e, s in word:
                if not (0 <= e < len(self.edges)) or s not in (1, -1):
                    raise DomainError(f"face {fi} has a bad step ({e}, {s})")
                tail, head = self.edges[e]
                src, dst = (tail, head) if s == 1 else (head, tail)
                if at is None:
                    start = src
                elif at != src:
                    raise DomainError(f"face {fi} attaching word is not a path")
                at = dst
            if at != start:
                raise DomainError(f"face {fi} attaching word does not close up")
        # The composite boundary must vanish; anything else is a builder bug.
        for word in self.faces:
            acc: dict = {}
            for e, s in word:
                tail, head = self.edges[e]
                acc[head] = acc.get(head, 0) + s
                acc[tail] = acc.get(tail, 0) - s
            assert all(v == 0 for v in acc.values()), "face boundary does not vanish"

    def boundary1(self) -> Matrix:
        """Vertices x edges; column of edge e is head - tail."""
        d1 = zeros(self.num_vertices, len(self.edges))
        for j, (t, h) in enumerate(self.edges):
            d1[h][j] += 1
            d1[t][j] -= 1
        return d1

    def boundary2(self) -> Matrix:
        """Edges x faces; entries are signed occurrence counts."""
        d2 = zeros(len(self.edges), len(self.faces))
        for j, word in enumerate(self.faces):
            for e, s in word:
                d2[e][j] += s
        return d2

    def components(self) -> list:
        """Connected components of the 1-skeleton, each a sorted vertex tuple."""
        parent = list(range(self.num_vertices))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for t, h in self.edges:
            rt, rh = find(t), find(h)
            if rt != rh:
                parent[max(rt, rh)] = min(rt, rh)
        groups: dict = {}
        for v in range(self.num_vertices):
            groups.setdefault(find(v), []).append(v)
        return [tuple(groups[r]) for r in sorted(groups)]


def components(k: CW2Complex) -> list:
    return k.components()


@dataclass(frozen=True)
class H1Summary:
    betti: int
    torsion: tuple

    def __post_init__(self):
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a != 0:
                raise DomainError("torsion factors must divide in order")


class H1Calculator:
    """Exact H1 = ker d1 / im d2 with coordinates.

    Keeps enough of both Smith decompositions to express any edge cycle in
    the chosen basis of the nontrivial summands, so inclusion-induced maps
    come out as honest integer matrices.
    """

    def __init__(self, k: CW2Complex):
        self.complex = k
        n_edges = len(k.edges)
        s1 = smith_normal_form(k.boundary1())
        self._rank1 = s1.rank
        self._v1 = s1.v
        self._v1_inv = s1.v_inv
        self.cycle_count = n_edges - s1.rank
        # Relation matrix: boundaries of faces in cycle coordinates.
        d2 = k.boundary2()
        relations = [
            [0] * len(k.faces) for _ in range(self.cycle_count)
        ]
        for j in range(len(k.faces)):
            col = [d2[e][j] for e in range(n_edges)]
            coords = self.cycle_coords(col)
            for r in range(self.cycle_count):
                relations[r][j] = coords[r]
        if self.cycle_count:
            s2 = smith_normal_form(relations)
            diag = s2.d
            self._u2 = s2.u
            self._u2_inv = s2.u_inv
        else:
            diag = []
            self._u2 = []
            self._u2_inv = []
        self.factors = [
            diag[i] if i < len(diag) else 0 for i in range(self.cycle_count)
        ]
        self.generator_slots = [i for i, f in enumerate(self.factors) if f != 1]

    def summary(self) -> H1Summary:
        return H1Summary(
            betti=sum(1 for f in self.factors if f == 0),
            torsion=tuple(f for f in self.factors if f > 1),
        )

    def cycle_coords(self, edge_vector: list) -> list:
        """Coordinates of an edge cycle in the kernel basis of d1."""
        full = mat_vec(self._v1_inv, edge_vector)
        if any(x != 0 for x in full[: self._rank1]):
            raise DomainError("edge vector is not a cycle")
        return full[self._rank1 :]

    def h1_coords(self, edge_vector: list) -> list:
        """Class of a cycle on the nontrivial summands, torsion reduced."""
        y = self.cycle_coords(edge_vector)
        u = mat_vec(self._u2, y) if self.cycle_count else []
        out = []
        for slot in self.generator_slots:
            f = self.factors[slot]
            out.append(u[slot] % f if f > 1 else u[slot])
        return out

    def generator_edge_vector(self, which: int) -> list:
        """Edge chain of the ``which``-th H1 generator."""
        slot = self.generator_slots[which]
        coords = [self._u2_inv[r][slot] for r in range(self.cycle_count)]
        n_edges = len(self.complex.edges)
        vec = [0] * n_edges
        for r, c in enumerate(coords):
            if c:
                kernel_col = self._rank1 + r
                for e in range(n_edges):
                    vec[e] += c * self._v1[e][kernel_col]
        return vec


def h1(k: CW2Complex) -> H1Summary:
    return H1Calculator(k).summary()


@dataclass(frozen=True)
class CellSelection:
    vertices: tuple
    edges: tuple
    faces: tuple


def subcomplex(k: CW2Complex, sel: CellSelection):
    """Restrict to a selection, checking closure.

    Returns (complex, vertex_map, edge_map) where the maps send old indices
    to new ones.
    """
    vset, eset = set(sel.vertices), set(sel.edges)
    for e in sel.edges:
        t, h = k.edges[e]
        if t not in vset or h not in vset:
            raise DomainError(f"selection drops an endpoint of edge {e}")
    for f in sel.faces:
        for e, _ in k.faces[f]:
            if e not in eset:
                raise DomainError(f"selection drops an edge of face {f}")
    vmap = {v: i for i, v in enumerate(sorted(vset))}
    emap = {e: i for i, e in enumerate(sorted(eset))}
    edges = [(vmap[k.edges[e][0]], vmap[k.edges[e][1]]) for e in sorted(eset)]
    faces = [
        [(emap[e], s) for e, s in k.faces[f]] for f in sorted(sel.faces)
    ]
    return CW2Complex(len(vmap), edges, faces), vmap, emap


def full_selection(k: CW2Complex) -> CellSelection:
    return CellSelection(
        vertices=tuple(range(k.num_vertices)),
        edges=tuple(range(len(k.edges))),
        faces=tuple(range(len(k.faces))),
    )


def induced_h1(k: CW2Complex, sel: CellSelection) -> Matrix:
    """Matrix of H1(selection) -> H1(k) on Smith-basis generators.

    Rows index the nontrivial summands of H1(k), columns the generators of
    the selected subcomplex; torsion rows are reduced modulo their factor.
    """
    sub, _, emap = subcomplex(k, sel)
    sub_calc = H1Calculator(sub)
    big_calc = H1Calculator(k)
    emap_back = {new: old for old, new in emap.items()}
    cols = []
    for which in range(len(sub_calc.generator_slots)):
        sub_vec = sub_calc.generator_edge_vector(which)
        big_vec = [0] * len(k.edges)
        for new_idx, coef in enumerate(sub_vec):
            if coef:
                big_vec[emap_back[new_idx]] = coef
        cols.append(big_calc.h1_coords(big_vec))
    rows = len(big_calc.generator_slots)
    return [[col[r] for col in cols] for r in range(rows)]


@dataclass
class BaseComplex:
    """Telescope complex of a truncated tree, with cell registries.

    One vertex per node; a tree edge child -> parent for every non-root
    node; a loop at every positive node; and for every positive non-root
    node with label k a face whose word walks its own loop once, the tree
    edge up, the parent loop -k times, and the tree edge back.  Null tree
    edges stay naked: no loop, no face.
    """

    complex: CW2Complex
    tree: TruncatedTree
    vertex_of_node: dict
    tree_edge_of_node: dict
    loop_of_node: dict
    face_of_node: dict


def build_base(t: TruncatedTree, ceiling: int = DEFAULT_CEILING) -> BaseComplex:
    vertex_of = {node.id: i for i, node in enumerate(t.nodes)}
    edges: list = []
    edge_labels: list = []
    tree_edge_of: dict = {}
    loop_of: dict = {}
    for node in t.nodes:
        if node.parent is not None:
            tree_edge_of[node.id] = len(edges)
            edges.append((vertex_of[node.id], vertex_of[node.parent]))
            edge_labels.append(f"climb_{node.id}")
    for node in t.nodes:
        if node.positive:
            loop_of[node.id] = len(edges)
            edges.append((vertex_of[node.id], vertex_of[node.id]))
            edge_labels.append(f"loop_{node.id}")
    faces: list = []
    face_of: dict = {}
    for node in t.nodes:
        if node.positive and node.parent is not None:
            word = [(loop_of[node.id], 1), (tree_edge_of[node.id], 1)]
            word.extend([(loop_of[node.parent], -1)] * node.label)
            word.append((tree_edge_of[node.id], -1))
            face_of[node.id] = len(faces)
            faces.append(word)
    total = len(t.nodes) + len(edges) + len(faces)
    if total > ceiling:
        raise SizeCeilingError("telescope cells", total, ceiling)
    k = CW2Complex(len(t.nodes), edges, faces, edge_labels=edge_labels)
    return BaseComplex(
        complex=k,
        tree=t,
        vertex_of_node=vertex_of,
        tree_edge_of_node=tree_edge_of,
        loop_of_node=loop_of,
        face_of_node=face_of,
    )


def infinity_neighborhood_base(b: BaseComplex, i: int) -> CellSelection:
    """Cells at tiers >= i plus the connecting structure: the closure of the
    complement of the inner tiers, circle cells at tier i included."""
    t = b.tree
    if not (0 <= i <= t.depth):
        raise DomainError(f"tier {i} outside 0..{t.depth}")
    verts = [b.vertex_of_node[n.id] for n in t.nodes if n.tier >= i]
    edges = []
    faces = []
    for n in t.nodes:
        if n.tier >= i + 1 and n.parent is not None:
            edges.append(b.tree_edge_of_node[n.id])
            if n.positive:
                faces.append(b.face_of_node[n.id])
        if n.tier >= i and n.positive:
            edges.append(b.loop_of_node[n.id])
    return CellSelection(tuple(sorted(verts)), tuple(sorted(edges)), tuple(sorted(faces)))


def branch_selection(b: BaseComplex, branch_root: int) -> CellSelection:
    """Cells of the subtree hanging at ``branch_root`` (its own loop included)."""
    t = b.tree
    ids = []
    stack = [branch_root]
    while stack:
        cur = stack.pop()
        ids.append(cur)
        stack.extend(t.children(cur))
    id_set = set(ids)
    verts = [b.vertex_of_node[x] for x in ids]
    edges = []
    faces = []
    for x in ids:
        node = t.node(x)
        if node.positive:
            edges.append(b.loop_of_node[x])
        if x != branch_root and node.parent in id_set:
            edges.append(b.tree_edge_of_node[x])
            if node.positive:
                faces.append(b.face_of_node[x])
    return CellSelection(tuple(sorted(verts)), tuple(sorted(edges)), tuple(sorted(faces)))


@dataclass
class CoverComplex:
    """Product structure on (clone tree) x [-N, N] plus dangling null copies."""

    complex: CW2Complex
    coset: CosetTree
    height: int
    product_vertex: dict  # (coset vert index, h) -> vertex
    horizontal_edge: dict  # (coset vert index, h) -> edge to parent copy
    vertical_edge: dict  # (coset vert index, h) -> edge (v,h)-(v,h+1)
    null_vertex: dict  # (component index, h, node id) -> vertex

    @property
    def middle_vertex(self) -> int:
        return self.product_vertex[(self.coset.root_index, 0)]


def build_cover(
    c: CosetTree,
    nf: NullForest,
    height: int,
    ceiling: int = DEFAULT_CEILING,
) -> CoverComplex:
    """Cell the strip over the clone tree with square faces, then hang a
    copy of every truncated null subtree at each integer height, shifted by
    the residue odometer."""
    if height < 1:
        raise DomainError("height bound must be at least 1")
    n_heights = 2 * height + 1
    null_nodes = sum(len(comp.nodes) for comp in nf.components)
    est_vertices = len(c.verts) * n_heights + null_nodes * n_heights
    est_edges = (
        (len(c.verts) - 1) * n_heights
        + len(c.verts) * (n_heights - 1)
        + null_nodes * n_heights
    )
    est_faces = (len(c.verts) - 1) * (n_heights - 1)
    if est_vertices + est_edges + est_faces > ceiling:
        raise SizeCeilingError(
            "cover cells", est_vertices + est_edges + est_faces, ceiling
        )

    product_vertex: dict = {}
    for vi in range(len(c.verts)):
        for h in range(-height, height + 1):
            product_vertex[(vi, h)] = len(product_vertex)
    vertex_count = len(product_vertex)
    null_vertex: dict = {}
    for ci, comp in enumerate(nf.components):
        for h in range(-height, height + 1):
            for tnode in comp.nodes:
                null_vertex[(ci, h, tnode.id)] = vertex_count
                vertex_count += 1

    edges: list = []
    horizontal_edge: dict = {}
    vertical_edge: dict = {}
    for vi in range(len(c.verts)):
        parent = c.parent_idx[vi]
        if parent is None:
            continue
        for h in range(-height, height + 1):
            horizontal_edge[(vi, h)] = len(edges)
            edges.append((product_vertex[(vi, h)], product_vertex[(parent, h)]))
    for vi in range(len(c.verts)):
        for h in range(-height, height):
            vertical_edge[(vi, h)] = len(edges)
            edges.append((product_vertex[(vi, h)], product_vertex[(vi, h + 1)]))
    for ci, comp in enumerate(nf.components):
        attach_base = comp.nodes[0].parent
        order = c.order_of[attach_base]
        for h in range(-height, height + 1):
            shifted = c.index[(attach_base, h % order)]
            for tnode in comp.nodes:
                if tnode.id == comp.root_id:
                    target = product_vertex[(shifted, h)]
                else:
                    target = null_vertex[(ci, h, tnode.parent)]
                edges.append((null_vertex[(ci, h, tnode.id)], target))

    faces: list = []
    for vi in range(len(c.verts)):
        if c.parent_idx[vi] is None:
            continue
        parent = c.parent_idx[vi]
        for h in range(-height, height):
            word = [
                (horizontal_edge[(vi, h)], 1),
                (vertical_edge[(parent, h)], 1),
                (horizontal_edge[(vi, h + 1)], -1),
                (vertical_edge[(vi, h)], -1),
            ]
            faces.append(word)

    k = CW2Complex(vertex_count, edges, faces)
    return CoverComplex(
        complex=k,
        coset=c,
        height=height,
        product_vertex=product_vertex,
        horizontal_edge=horizontal_edge,
        vertical_edge=vertical_edge,
        null_vertex=null_vertex,
    )


@dataclass
class FrontierGraph:
    """Two sheets of the radius-``i`` clone ball at heights +-i, joined by a
    length-2i vertical column over every distance-exactly-i vertex."""

    complex: CW2Complex
    coset: CosetTree
    radius: int
    vertex_index: dict  # (coset vert, h) -> vertex
    edge_index: dict  # ('tree', child vert, h) or ('col', vert, h) -> edge
    betti: int


def build_frontier_graph(c: CosetTree, i: int) -> FrontierGraph:
    if i < 0 or i > c.depth:
        raise DomainError(f"radius {i} outside 0..{c.depth}")
    ball = [vi for vi in range(len(c.verts)) if c.tier(vi) <= i]
    frontier = [vi for vi in ball if c.tier(vi) == i]
    vertex_index: dict = {}
    if i == 0:
        vertex_index[(c.root_index, 0)] = 0
        k = CW2Complex(1, [], [])
        return FrontierGraph(k, c, 0, vertex_index, {}, 0)
    for vi in ball:
        vertex_index[(vi, i)] = len(vertex_index)
    for vi in ball:
        vertex_index[(vi, -i)] = len(vertex_index)
    for vi in frontier:
        for h in range(-i + 1, i):
            vertex_index[(vi, h)] = len(vertex_index)
    edges: list = []
    edge_index: dict = {}
    for h in (i, -i):
        for vi in ball:
            parent = c.parent_idx[vi]
            if parent is None:
                continue
            edge_index[("tree", vi, h)] = len(edges)
            edges.append((vertex_index[(vi, h)], vertex_index[(parent, h)]))
    for vi in frontier:
        for h in range(-i, i):
            edge_index[("col", vi, h)] = len(edges)
            edges.append((vertex_index[(vi, h)], vertex_index[(vi, h + 1)]))
    k = CW2Complex(len(vertex_index), edges, [])
    betti = len(edges) - len(vertex_index) + len(k.components())
    return FrontierGraph(k, c, i, vertex_index, edge_index, betti)


def frontier_complex_cover(c: CosetTree, i: int):
    """The frontier graph of the height-``i`` cover neighborhood and its
    first Betti number (edge count - vertex count + component count)."""
    fg = build_frontier_graph(c, i)
    return fg.complex, fg.betti


def _spanning_forest(k: CW2Complex):
    """BFS forest: parent[v] = (up vertex, edge, sign) with sign +1 when the
    edge is oriented up->v.  Returns (parent, depth, tree edge set)."""
    adj: list = [[] for _ in range(k.num_vertices)]
    for idx, (t, h) in enumerate(k.edges):
        adj[t].append((h, idx, 1))
        adj[h].append((t, idx, -1))
    parent: list = [None] * k.num_vertices
    depth: list = [None] * k.num_vertices
    tree_edges: set = set()
    for start in range(k.num_vertices):
        if depth[start] is not None:
            continue
        depth[start] = 0
        queue = [start]
        head = 0
        while head < len(queue):
            v = queue[head]
            head += 1
            for w, idx, sign in adj[v]:
                if depth[w] is None:
                    depth[w] = depth[v] + 1
                    parent[w] = (v, idx, sign)
                    tree_edges.add(idx)
                    queue.append(w)
    return parent, depth, tree_edges


def _tree_path_chain(parent, depth, frm: int, to: int) -> dict:
    """Edge chain of the forest path from ``frm`` to ``to`` as {edge: coeff}."""
    chain: dict = {}
    a, b = frm, to
    # climb the deeper endpoint; walking v -> parent(v) uses the edge with
    # opposite sign to parent[v]'s orientation.
    while a != b:
        if depth[a] >= depth[b]:
            up, idx, sign = parent[a]
            chain[idx] = chain.get(idx, 0) - sign
            a = up
        else:
            up, idx, sign = parent[b]
            chain[idx] = chain.get(idx, 0) + sign
            b = up
    return chain


def fundamental_cycles(k: CW2Complex):
    """(non-tree edge indices, cycle chains): a basis of the cycle space."""
    parent, depth, tree_edges = _spanning_forest(k)
    non_tree = [idx for idx in range(len(k.edges)) if idx not in tree_edges]
    cycles = []
    for idx in non_tree:
        t, h = k.edges[idx]
        chain = _tree_path_chain(parent, depth, h, t)
        chain[idx] = chain.get(idx, 0) + 1
        cycles.append(chain)
    return non_tree, cycles


@dataclass(frozen=True)
class CollapseBond:
    """H1 matrix of the collapse from the radius-(i+1) frontier graph onto
    the radius-i one, in fundamental-cycle coordinates."""

    matrix: tuple
    rows: int
    cols: int

    def surjective(self) -> bool:
        if self.rows == 0:
            return True
        return has_trivial_cokernel([list(r) for r in self.matrix])


def collapse_h1_matrix(c: CosetTree, i: int) -> CollapseBond:
    """Collapse sheets by ancestor, clamp column heights, and push the deep
    frontier graph's cycle basis into the shallow one's coordinates."""
    if i + 1 > c.depth:
        raise DomainError(f"need coset depth {i + 1}, have {c.depth}")
    deep = build_frontier_graph(c, i + 1)
    shallow = build_frontier_graph(c, i)

    def vert_anc(vi: int) -> int:
        return vi if c.tier(vi) <= i else c.parent_idx[vi]

    def edge_image(key):
        kind = key[0]
        if kind == "tree":
            _, child, h = key
            if c.tier(child) > i:
                return None  # contracts into the ancestor vertex
            return ("tree", child, i if h > 0 else -i)
        _, vi, h = key
        lo, hi = max(h, -i), min(h + 1, i)
        if lo >= hi:
            return None  # clamped flat
        return ("col", vert_anc(vi), lo)

    non_tree_deep, cycles_deep = fundamental_cycles(deep.complex)
    non_tree_shallow, _ = fundamental_cycles(shallow.complex)
    deep_key_of = {idx: key for key, idx in deep.edge_index.items()}
    shallow_pos = {idx: r for r, idx in enumerate(non_tree_shallow)}

    matrix = [[0] * len(non_tree_deep) for _ in range(len(non_tree_shallow))]
    for col, chain in enumerate(cycles_deep):
        for e_idx, coef in chain.items():
            image_key = edge_image(deep_key_of[e_idx])
            if image_key is None:
                continue
            image_idx = shallow.edge_index[image_key]
            row = shallow_pos.get(image_idx)
            if row is not None:
                matrix[row][col] += coef
    return CollapseBond(
        matrix=tuple(tuple(r) for r in matrix),
        rows=len(non_tree_shallow),
        cols=len(non_tree_deep),
    )


def format_complex(k: CW2Complex) -> str:
    """Plain cell-list text: one line per cell, faces as signed edge refs."""
    lines = [f"vertices {k.num_vertices}"]
    for t, h in k.edges:
        lines.append(f"edge {t} {h}")
    for word in k.faces:
        steps = " ".join(f"{e}{'+' if s > 0 else '-'}" for e, s in word)
        lines.append(f"face {steps}")
    return "\n".join(lines) + "\n"
