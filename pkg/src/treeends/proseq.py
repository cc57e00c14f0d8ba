"""Inverse sequences of multiplication maps and their pro-classification.

A MultSequence is the eventually periodic tower Z <- Z <- Z <- ... where the
map from stage t to stage t-1 is multiplication by the t-th label (labels are
1-based).  Stage indices are 0-based; the bond from stage q back to stage
p < q multiplies by the labels at positions p+1..q.

Equivalence of two towers is witnessed by a finite commuting ladder: index
selections i_0 < ... < i_T on one side and j_0 < ... < j_{T-1} on the other,
up maps u_t: b[j_t] -> a[i_t] and down maps d_t: a[i_t] -> b[j_{t-1}], with
every triangle matching the tower bonds exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from math import lcm

from .errors import DomainError, ParseError
from .intmat import dims, hermite_column_basis, identity, mat_mul


@dataclass(frozen=True)
class MultSequence:
    prefix: tuple
    cycle: tuple

    def __post_init__(self):
        if not isinstance(self.prefix, tuple):
            object.__setattr__(self, "prefix", tuple(self.prefix))
        if not isinstance(self.cycle, tuple):
            object.__setattr__(self, "cycle", tuple(self.cycle))
        if not self.cycle:
            raise DomainError("cycle part must be nonempty")
        for x in self.prefix + self.cycle:
            if not isinstance(x, int) or x < 0:
                raise DomainError(f"labels must be nonnegative integers, got {x!r}")

    def term(self, i: int) -> int:
        """Label at 1-based position ``i`` of the infinite stream."""
        if i < 1:
            raise DomainError("label positions are 1-based")
        if i <= len(self.prefix):
            return self.prefix[i - 1]
        return self.cycle[(i - len(self.prefix) - 1) % len(self.cycle)]

    def __str__(self) -> str:
        return format_sequence(self)


class TrivialSequence:
    """The tower of zero groups.  Every map into or out of it is zero, and
    triangles through it are satisfied automatically."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "TRIVIAL"


TRIVIAL = TrivialSequence()


def bond_compose(s: MultSequence, i: int, j: int) -> int:
    """Product of the labels at positions i..j inclusive (1-based)."""
    if i > j:
        raise DomainError(f"bond_compose needs i <= j, got {i} > {j}")
    if i < 1:
        raise DomainError("label positions are 1-based")
    prod = 1
    for t in range(i, j + 1):
        prod *= s.term(t)
        if prod == 0:
            break
    return prod


def stage_bond(s: MultSequence, p: int, q: int) -> int:
    """Bond from stage q back to stage p (0-based stages, p <= q)."""
    if p > q:
        raise DomainError("stage bond needs p <= q")
    if p == q:
        return 1
    return bond_compose(s, p + 1, q)


@dataclass(frozen=True)
class SequenceClass:
    pro_trivial: bool
    semistable: bool
    pro_mono: bool
    stable: bool

    def __post_init__(self):
        if self.stable != (self.semistable and self.pro_mono):
            raise DomainError("stable must equal semistable and pro_mono")
        if self.pro_trivial and not self.stable:
            raise DomainError("a pro-trivial sequence is stable")

    def as_dict(self) -> dict:
        return {
            "pro_trivial": self.pro_trivial,
            "semistable": self.semistable,
            "pro_mono": self.pro_mono,
            "stable": self.stable,
        }


def classify_mult(s: MultSequence) -> SequenceClass:
    """Closed-form flags for an eventually periodic multiplication tower.

    The stream has infinitely many zeros exactly when the cycle contains 0;
    images stabilize exactly when that holds or the stream is eventually all
    1s; bonds are eventually injective exactly when zeros stop occurring.
    """
    zeros_forever = 0 in s.cycle
    eventually_ones = all(k == 1 for k in s.cycle)
    pro_trivial = zeros_forever
    semistable = zeros_forever or eventually_ones
    pro_mono = pro_trivial or not zeros_forever
    return SequenceClass(
        pro_trivial=pro_trivial,
        semistable=semistable,
        pro_mono=pro_mono,
        stable=semistable and pro_mono,
    )


class InverseLimitClass(Enum):
    ZERO = "Zero"
    Z = "Z"


def inverse_limit_mult(s) -> InverseLimitClass:
    """Inverse limit of the tower: Z when the maps are eventually all
    identities, the zero group otherwise (a compatible thread through
    infinitely many multiplications by k >= 2 or by 0 must vanish)."""
    if isinstance(s, TrivialSequence):
        return InverseLimitClass.ZERO
    if all(k == 1 for k in s.cycle):
        return InverseLimitClass.Z
    return InverseLimitClass.ZERO


@dataclass(frozen=True)
class LadderCertificate:
    """Finite commuting ladder between towers ``a`` (top) and ``b`` (bottom).

    With T rungs: top_indices = (i_0..i_T), bottom_indices = (j_0..j_{T-1}),
    up_maps[t] = u_t: b[j_t] -> a[i_t] for t = 0..T-1, and down_maps[t-1] =
    d_t: a[i_t] -> b[j_{t-1}] for t = 1..T.  Upper triangles require
    u_t * d_{t+1} = bond of a over (i_t, i_{t+1}]; lower triangles require
    d_t * u_t = bond of b over (j_{t-1}, j_t].
    """

    top_indices: tuple
    bottom_indices: tuple
    up_maps: tuple
    down_maps: tuple

    @property
    def rungs(self) -> int:
        return len(self.top_indices) - 1


def verify_ladder(a, b, cert: LadderCertificate) -> bool:
    """Recheck every triangle of ``cert`` by direct integer arithmetic."""
    t_count = cert.rungs
    if t_count < 2:
        raise DomainError("a ladder needs at least two rungs")
    if len(cert.bottom_indices) != t_count:
        raise DomainError("bottom index count must be one less than top")
    if len(cert.up_maps) != t_count or len(cert.down_maps) != t_count:
        raise DomainError("map counts must match the rung count")
    if any(x >= y for x, y in zip(cert.top_indices, cert.top_indices[1:])):
        raise DomainError("top indices must increase strictly")
    if any(x >= y for x, y in zip(cert.bottom_indices, cert.bottom_indices[1:])):
        raise DomainError("bottom indices must increase strictly")
    a_triv = isinstance(a, TrivialSequence)
    b_triv = isinstance(b, TrivialSequence)
    if (a_triv or b_triv) and any(m != 0 for m in cert.up_maps + cert.down_maps):
        return False
    tops, bots = cert.top_indices, cert.bottom_indices
    for t in range(t_count):
        # upper triangle at t: through b[j_t], compare with the a-bond
        if not a_triv:
            lhs = cert.up_maps[t] * cert.down_maps[t]  # u_t * d_{t+1}
            if lhs != stage_bond(a, tops[t], tops[t + 1]):
                return False
    for t in range(1, t_count):
        # lower triangle at t: through a[i_t], compare with the b-bond
        if not b_triv:
            lhs = cert.down_maps[t - 1] * cert.up_maps[t]  # d_t * u_t
            if lhs != stage_bond(b, bots[t - 1], bots[t]):
                return False
    return True


def _side_params(s, depth: int) -> tuple:
    """(start cap, gap cap, window) for one side of the ladder search."""
    if isinstance(s, TrivialSequence):
        # Stages of the trivial tower are interchangeable; pin them.
        return 0, 1, depth + 1
    period = max(1, len(s.cycle))
    reach = len(s.prefix) + 2 * period
    window = len(s.prefix) + (depth + 2) * period + depth
    return reach, max(1, reach), window


def ladder_search(a, b, depth: int = 4, bound: int = 8):
    """First commuting ladder with ``depth`` rungs, coefficients in
    [-bound, bound], or None.

    The search is a depth-first sweep in ascending lexicographic order over
    (i_0, j_0, u_0, i_1, d_1, j_1, u_1, ..., i_T, d_T); all but the first up
    map and the index choices are forced by divisibility, so pruning is
    immediate.  Gaps between chosen indices are capped at one prefix plus two
    cycle lengths; an eventually periodic tower that admits a ladder at all
    admits one within that reach.
    """
    if depth < 2:
        raise DomainError("ladder depth must be at least 2")
    t_count = depth
    a_triv = isinstance(a, TrivialSequence)
    b_triv = isinstance(b, TrivialSequence)
    start_a, gap_a, win_a = _side_params(a, depth)
    start_b, gap_b, win_b = _side_params(b, depth)
    coeffs = tuple(range(-bound, bound + 1))

    def down_candidates(u_prev: int, a_bond) -> tuple:
        # d_t as a map a[i_t] -> b[j_{t-1}], constrained by the upper triangle.
        if a_triv:
            return (0,)
        if b_triv:
            return (0,) if a_bond == 0 else ()
        if u_prev != 0:
            if a_bond % u_prev == 0 and abs(a_bond // u_prev) <= bound:
                return (a_bond // u_prev,)
            return ()
        return coeffs if a_bond == 0 else ()

    def up_candidates(d_cur: int, b_bond) -> tuple:
        # u_t as a map b[j_t] -> a[i_t], constrained by the lower triangle.
        if b_triv:
            return (0,)
        if a_triv:
            return (0,) if b_bond == 0 else ()
        if d_cur != 0:
            if b_bond % d_cur == 0 and abs(b_bond // d_cur) <= bound:
                return (b_bond // d_cur,)
            return ()
        return coeffs if b_bond == 0 else ()

    def search_top(t, tops, bots, ups, downs):
        # choose i_t, then d_t; t runs 1..t_count
        hi = min(tops[-1] + gap_a, win_a - (t_count - t))
        for i_t in range(tops[-1] + 1, hi + 1):
            a_bond = None if a_triv else stage_bond(a, tops[-1], i_t)
            for d in down_candidates(ups[-1], a_bond):
                if t == t_count:
                    return LadderCertificate(
                        tuple(tops) + (i_t,), tuple(bots), tuple(ups), tuple(downs) + (d,)
                    )
                found = search_bottom(t, tops + [i_t], bots, ups, downs + [d])
                if found is not None:
                    return found
        return None

    def search_bottom(t, tops, bots, ups, downs):
        # choose j_t, then u_t; t runs 1..t_count-1
        hi = min(bots[-1] + gap_b, win_b - (t_count - 1 - t))
        for j_t in range(bots[-1] + 1, hi + 1):
            b_bond = None if b_triv else stage_bond(b, bots[-1], j_t)
            for u in up_candidates(downs[-1], b_bond):
                found = search_top(t + 1, tops, bots + [j_t], ups + [u], downs)
                if found is not None:
                    return found
        return None

    first_ups = (0,) if (a_triv or b_triv) else coeffs
    for i_0 in range(0, min(start_a, win_a - t_count) + 1):
        for j_0 in range(0, min(start_b, win_b - (t_count - 1)) + 1):
            for u_0 in first_ups:
                found = search_top(1, [i_0], [j_0], [u_0], [])
                if found is not None:
                    return found
    return None


def epi_normal_form(s: MultSequence):
    """Stabilized-image form of the tower: the trivial tower when images
    shrink to zero, the identity tower when they freeze at full rank, and
    None when they strictly shrink forever (no epimorphic representative)."""
    if 0 in s.cycle:
        return TRIVIAL
    if all(k == 1 for k in s.cycle):
        return MultSequence((), (1,))
    return None


def block_compress(s: MultSequence, m: int) -> MultSequence:
    """Compose the tower in blocks of ``m``: term t of the result is the
    product of terms (t-1)m+1 .. tm of ``s``."""
    if m < 1:
        raise DomainError("block size must be at least 1")
    if m == 1:
        return s
    prefix_blocks = -(-len(s.prefix) // m)
    cycle_blocks = lcm(m, len(s.cycle)) // m
    new_prefix = tuple(
        bond_compose(s, (t - 1) * m + 1, t * m) for t in range(1, prefix_blocks + 1)
    )
    new_cycle = tuple(
        bond_compose(s, (t - 1) * m + 1, t * m)
        for t in range(prefix_blocks + 1, prefix_blocks + cycle_blocks + 1)
    )
    return MultSequence(new_prefix, new_cycle)


def _freeze(mat) -> tuple:
    return tuple(tuple(row) for row in mat)


def _thaw(mat) -> list:
    return [list(row) for row in mat]


@dataclass(frozen=True)
class AbelianSequence:
    """Tower of free abelian groups with integer bond matrices.

    ``ranks`` = (n_0..n_m); ``bonds[t-1]`` is the n_{t-1} x n_t matrix of the
    map from stage t to stage t-1.  ``tail``, when present, is a block of
    matrices repeated forever past stage m; its dimensions must chain and
    close up periodically.
    """

    ranks: tuple
    bonds: tuple
    tail: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "ranks", tuple(self.ranks))
        object.__setattr__(self, "bonds", tuple(_freeze(b) for b in self.bonds))
        if self.tail is not None:
            object.__setattr__(self, "tail", tuple(_freeze(b) for b in self.tail))
        if not self.ranks:
            raise DomainError("at least one stage is required")
        if any(n < 0 for n in self.ranks):
            raise DomainError("ranks must be nonnegative")
        if len(self.bonds) != len(self.ranks) - 1:
            raise DomainError("need exactly one bond per adjacent stage pair")
        for t, bond in enumerate(self.bonds, start=1):
            if dims(list(bond)) != (self.ranks[t - 1], self.ranks[t]):
                raise DomainError(
                    f"bond {t} must be {self.ranks[t - 1]}x{self.ranks[t]}"
                )
        if self.tail is not None:
            if not self.tail:
                raise DomainError("tail block must be nonempty when present")
            if len(self.tail[0]) != self.ranks[-1]:
                raise DomainError("tail must start at the last explicit rank")
            for left, right in zip(self.tail, self.tail[1:]):
                if dims(list(left))[1] != len(right):
                    raise DomainError("tail matrix dimensions must chain")
            if dims(list(self.tail[-1]))[1] != len(self.tail[0]):
                raise DomainError("tail block must close up periodically")

    @property
    def last_stage(self) -> int:
        return len(self.ranks) - 1

    def bond_at(self, j: int) -> list:
        """Matrix of the map from stage j to stage j-1 (j >= 1)."""
        if j < 1:
            raise DomainError("bonds start at stage 1")
        if j <= self.last_stage:
            return _thaw(self.bonds[j - 1])
        if self.tail is None:
            raise DomainError(f"stage {j} is beyond the explicit bonds")
        return _thaw(self.tail[(j - self.last_stage - 1) % len(self.tail)])

    def rank_at(self, j: int) -> int:
        if j < 0:
            raise DomainError("stages are numbered from 0")
        if j <= self.last_stage:
            return self.ranks[j]
        return dims(self.bond_at(j))[1]


@dataclass(frozen=True)
class StabilizationResult:
    stabilized: bool
    at: int | None = None

    def __str__(self) -> str:
        if self.stabilized:
            return f"Stabilized(at {self.at})"
        return "NotWithinHorizon"


def images_stabilize(a: AbelianSequence, i: int, horizon: int) -> StabilizationResult:
    """Track the image lattices of the composed bonds into stage ``i``.

    Computes Im(B_{i+1} ... B_j) in Z^{n_i} via canonical column bases and
    reports the first j where the image matches the previous one; with a
    periodic tail the match must also survive one more full period.
    """
    if i < 0 or i > a.last_stage:
        raise DomainError(f"stage {i} is outside the sequence")
    if horizon < i + 1:
        raise DomainError("horizon must be at least i+1")
    composite = identity(a.rank_at(i))
    prev_basis = hermite_column_basis(composite)
    for j in range(i + 1, horizon + 1):
        composite = mat_mul(composite, a.bond_at(j))
        basis = hermite_column_basis(composite)
        if basis == prev_basis:
            if a.tail is None:
                return StabilizationResult(True, j)
            # Period coherence: one more full period must leave the
            # lattice unchanged before we call it stable.
            ahead = composite
            for k in range(j + 1, j + len(a.tail) + 1):
                ahead = mat_mul(ahead, a.bond_at(k))
            if hermite_column_basis(ahead) == basis:
                return StabilizationResult(True, j)
        prev_basis = basis
    return StabilizationResult(False)


def parse_sequence(text: str) -> MultSequence:
    """Parse a sequence literal like "prefix:3,0;cycle:2,1" (prefix optional)."""
    prefix: tuple = ()
    cycle = None
    for part in text.strip().split(";"):
        part = part.strip()
        if not part:
            continue
        name, sep, rest = part.partition(":")
        name = name.strip()
        if not sep:
            raise ParseError(1, f"expected 'name:labels', got {part!r}")
        try:
            labels = tuple(int(x) for x in rest.split(",") if x.strip())
        except ValueError:
            raise ParseError(1, f"labels must be integers: {rest!r}") from None
        if name == "prefix":
            prefix = labels
        elif name == "cycle":
            cycle = labels
        else:
            raise ParseError(1, f"unknown section {name!r}")
    if not cycle:
        raise ParseError(1, "a nonempty cycle section is required")
    return MultSequence(prefix, cycle)


def format_sequence(s: MultSequence) -> str:
    cycle = "cycle:" + ",".join(str(x) for x in s.cycle)
    if not s.prefix:
        return cycle
    return "prefix:" + ",".join(str(x) for x in s.prefix) + ";" + cycle


def parse_matrix(text: str) -> list:
    """Row-major bracketed integer matrix, e.g. "[[1,0],[2,4]]"."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(1, f"bad matrix literal: {exc}") from None
    if not isinstance(data, list) or not all(isinstance(r, list) for r in data):
        raise ParseError(1, "matrix literal must be a list of rows")
    width = None
    for row in data:
        if width is None:
            width = len(row)
        if len(row) != width:
            raise ParseError(1, "matrix rows must have equal length")
        for x in row:
            if not isinstance(x, int) or isinstance(x, bool):
                raise ParseError(1, f"matrix entries must be integers, got {x!r}")
    return [list(row) for row in data]


def format_matrix(mat) -> str:
    return json.dumps([list(row) for row in mat], separators=(",", ":"))
