"""Finite permutation groups by exhaustive element enumeration.

Groups are small (order capped at 10**6 by default), so every invariant is
computed from the full element list: conjugacy classes are orbits of the
conjugation action of the generators, k-conjugacy classes merge those under
power maps ``g -> g**a`` for ``a`` in a unit group mod the exponent, and block
systems come from Atkinson's union-find closure.

Points are 1-based in every textual interface and 0-based in storage.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, reduce

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

DEFAULT_ORDER_CAP = 10**6


class PermParseError(ValueError):
    pass


class GroupTooLarge(RuntimeError):
    pass


@dataclass(frozen=True)
class Permutation:
    """A bijection of ``{0, ..., n-1}``; ``p * q`` applies ``p`` first."""

    images: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.images) != list(range(len(self.images))):
            raise ValueError(f"not a permutation: {self.images}")

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(n)))

    @classmethod
    def from_cycles(cls, cycles, n: int) -> "Permutation":
        """Build from 1-based cycles, e.g. ``[(1, 2, 3), (4, 5)]``."""
        images = list(range(n))
        for cyc in cycles:
            for k, pt in enumerate(cyc):
                images[pt - 1] = cyc[(k + 1) % len(cyc)] - 1
        return cls(tuple(images))

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, point: int) -> int:
        return self.images[point]

    def __mul__(self, other: "Permutation") -> "Permutation":
        return Permutation(tuple(other.images[i] for i in self.images))

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.images)
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation(tuple(inv))

    def __pow__(self, k: int) -> "Permutation":
        if k < 0:
            return self.inverse() ** (-k)
        # per-cycle rotation, cheaper than repeated squaring
        images = list(range(len(self.images)))
        for cyc in self.cycles(include_fixed=False, one_based=False):
            L = len(cyc)
            for i, pt in enumerate(cyc):
                images[pt] = cyc[(i + k) % L]
        return Permutation(tuple(images))

    def cycles(self, include_fixed: bool = True, one_based: bool = True) -> list[tuple[int, ...]]:
        seen = [False] * len(self.images)
        out = []
        for start in range(len(self.images)):
            if seen[start]:
                continue
            cyc = []
            pt = start
            while not seen[pt]:
                seen[pt] = True
                cyc.append(pt)
                pt = self.images[pt]
            if include_fixed or len(cyc) > 1:
                out.append(tuple(p + 1 for p in cyc) if one_based else tuple(cyc))
        return out

    def cycle_type(self) -> tuple[int, ...]:
        return tuple(sorted((len(c) for c in self.cycles()), reverse=True))

    def order(self) -> int:
        return reduce(math.lcm, self.cycle_type(), 1)

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def support(self) -> tuple[int, ...]:
        return tuple(i for i, j in enumerate(self.images) if i != j)

    def __str__(self) -> str:
        cyc = self.cycles(include_fixed=False)
        if not cyc:
            return "()"
        return "".join("(" + ",".join(map(str, c)) + ")" for c in cyc)


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def perm_parse(text: str, degree: int) -> Permutation:
    """Parse a product of disjoint cycles such as ``"(1,2)(3,4)"``."""
    s = text.replace(" ", "")
    if s == "":
        raise PermParseError("empty permutation text")
    pos = 0
    cycles = []
    seen: set[int] = set()
    for m in _CYCLE_RE.finditer(s):
        if m.start() != pos:
            raise PermParseError(f"malformed cycle syntax near {s[pos:m.start() + 1]!r}")
        pos = m.end()
        body = m.group(1)
        if body == "":
            continue
        pts = []
        for tok in body.split(","):
            if not tok.isdigit():
                raise PermParseError(f"bad point token {tok!r}")
            pt = int(tok)
            if pt < 1 or pt > degree:
                raise PermParseError(f"point {tok!r} outside 1..{degree}")
            if pt in seen:
                raise PermParseError(f"repeated point {tok!r}")
            seen.add(pt)
            pts.append(pt)
        cycles.append(tuple(pts))
    if pos != len(s):
        raise PermParseError(f"malformed cycle syntax near {s[pos:]!r}")
    return Permutation.from_cycles(cycles, degree)


def parse_generators(text: str, degree: int) -> list[Permutation]:
    """Parse semicolon-separated cycle strings, e.g. ``"(1,2);(1,2,3,4)"``."""
    return [perm_parse(tok, degree) for tok in text.split(";") if tok.strip()]


class PermGroup:
    """Finitely generated permutation group with its full element list.

    The element table is a ``(order, degree)`` integer array whose row 0 is
    the identity; ``index_of`` maps a permutation to its row.
    """

    def __init__(self, degree: int, generators, order_cap: int = DEFAULT_ORDER_CAP):
        gens = [g if isinstance(g, Permutation) else Permutation(tuple(g)) for g in generators]
        for g in gens:
            if g.degree != degree:
                raise ValueError(f"generator {g} has degree {g.degree}, expected {degree}")
        self.degree = degree
        self.generators = tuple(g for g in gens if not g.is_identity())
        self.order_cap = order_cap
        self._dtype = np.uint8 if degree <= 255 else np.uint16
        self._enumerate()

    def _enumerate(self):
        n, cap = self.degree, self.order_cap
        ident = np.arange(n, dtype=self._dtype)
        rows = [ident]
        index = {ident.tobytes(): 0}
        gens = [np.array(g.images, dtype=self._dtype) for g in self.generators]
        frontier = ident[None, :]
        while len(frontier):
            fresh = []
            for s in gens:
                for row in s[frontier]:
                    key = row.tobytes()
                    if key not in index:
                        index[key] = len(rows)
                        rows.append(row)
                        fresh.append(row)
                        if len(rows) > cap:
                            raise GroupTooLarge(f"group order exceeds cap {cap}")
            frontier = np.array(fresh, dtype=self._dtype) if fresh else np.zeros((0, n), self._dtype)
        self._table = np.array(rows, dtype=self._dtype)
        self._table.setflags(write=False)
        self._index = index

    @property
    def order(self) -> int:
        return len(self._table)

    @property
    def table(self) -> np.ndarray:
        return self._table

    def element(self, i: int) -> Permutation:
        return Permutation(tuple(int(v) for v in self._table[i]))

    def elements(self) -> list[Permutation]:
        return [self.element(i) for i in range(self.order)]

    def index_of(self, g: Permutation) -> int:
        return self._index[np.array(g.images, dtype=self._dtype).tobytes()]

    def __contains__(self, g: Permutation) -> bool:
        return np.array(g.images, dtype=self._dtype).tobytes() in self._index

    def __len__(self) -> int:
        return self.order

    def orbit(self, point: int) -> set[int]:
        return set(int(v) for v in np.unique(self._table[:, point]))

    @cached_property
    def is_transitive(self) -> bool:
        return self.degree == 1 or len(self.orbit(0)) == self.degree

    @cached_property
    def _cycle_lengths(self) -> np.ndarray:
        # length of the cycle through each point, for every element
        T = self._table.astype(np.int64)
        n = self.degree
        lengths = np.zeros(T.shape, dtype=np.int64)
        cur = T.copy()
        pts = np.arange(n)
        for k in range(1, n + 1):
            hit = (cur == pts) & (lengths == 0)
            lengths[hit] = k
            if k < n:
                cur = np.take_along_axis(T, cur, axis=1)
        return lengths

    @cached_property
    def element_inds(self) -> np.ndarray:
        """``ind(g) = n - #orbits(<g>)`` for every element, row-aligned."""
        cycles = np.rint((1.0 / self._cycle_lengths).sum(axis=1)).astype(np.int64)
        return self.degree - cycles

    @cached_property
    def element_orders(self) -> np.ndarray:
        return np.lcm.reduce(self._cycle_lengths, axis=1)

    @cached_property
    def exponent(self) -> int:
        return reduce(math.lcm, (int(v) for v in np.unique(self.element_orders)), 1)

    def bytes_set(self) -> frozenset[bytes]:
        return frozenset(self._index)

    def __repr__(self):
        return f"PermGroup(degree={self.degree}, order={self.order})"


def group_generate(gens, order_cap: int = DEFAULT_ORDER_CAP, degree: int | None = None) -> PermGroup:
    gens = list(gens)
    if degree is None:
        if not gens:
            raise ValueError("degree required for an empty generator list")
        degree = gens[0].degree
    return PermGroup(degree, gens, order_cap=order_cap)


def symmetric_group(n: int) -> PermGroup:
    if n == 1:
        return PermGroup(1, [])
    gens = [Permutation.from_cycles([(1, 2)], n)]
    if n > 2:
        gens.append(Permutation.from_cycles([tuple(range(1, n + 1))], n))
    return PermGroup(n, gens)


def ind_element(g: Permutation) -> int:
    return g.degree - len(g.cycles())


def ind_group(G: PermGroup) -> int:
    if G.order == 1:
        raise ValueError("ind undefined for the trivial group")
    return int(G.element_inds[1:].min())


def a_invariant(G: PermGroup) -> Fraction:
    return Fraction(1, ind_group(G))


@dataclass(frozen=True)
class ClassInfo:
    representative: Permutation
    size: int
    order: int
    ind: int


@dataclass(frozen=True)
class ClassTable:
    classes: tuple[ClassInfo, ...]
    labels: np.ndarray = field(repr=False, compare=False)
    merge_map: tuple[tuple[int, ...], ...] | None = None

    def __len__(self):
        return len(self.classes)

    def groups(self) -> tuple[tuple[int, ...], ...]:
        """The k-classes as tuples of class indices (singletons if unmerged)."""
        if self.merge_map is None:
            return tuple((i,) for i in range(len(self.classes)))
        return self.merge_map


def conjugacy_classes(G: PermGroup) -> ClassTable:
    N = G.order
    rows, cols = [np.arange(N)], [np.arange(N)]
    for s in G.generators:
        sa = np.array(s.images, dtype=np.int64)
        sinv = np.argsort(sa)
        conj = sa[G.table[:, sinv]].astype(G.table.dtype)
        idx = np.fromiter((G._index[r.tobytes()] for r in conj), dtype=np.int64, count=N)
        rows.append(np.arange(N))
        cols.append(idx)
    r = np.concatenate(rows)
    c = np.concatenate(cols)
    graph = coo_matrix((np.ones(len(r), dtype=np.int8), (r, c)), shape=(N, N))
    _, raw = connected_components(graph, directed=True, connection="weak")
    # relabel so classes are numbered by first occurrence (identity first)
    _, first = np.unique(raw, return_index=True)
    order = np.argsort(first)
    relabel = np.empty_like(order)
    relabel[order] = np.arange(len(order))
    labels = relabel[raw]
    sizes = np.bincount(labels)
    firsts = first[order]
    classes = tuple(
        ClassInfo(
            representative=G.element(int(i)),
            size=int(sizes[k]),
            order=int(G.element_orders[i]),
            ind=int(G.element_inds[i]),
        )
        for k, i in enumerate(firsts)
    )
    labels.setflags(write=False)
    return ClassTable(classes=classes, labels=labels)


@dataclass(frozen=True)
class CyclotomicAction:
    """Power-map action of a unit subgroup ``U`` of ``(Z/NZ)*`` on classes.

    ``U = (Z/NZ)*`` models the base field Q; ``U = {1}`` models any field
    containing the N-th roots of unity.
    """

    modulus: int
    units: frozenset[int]

    def __post_init__(self):
        N = self.modulus
        if N < 1:
            raise ValueError("modulus must be positive")
        if 1 % N not in self.units:
            raise ValueError("unit subgroup must contain 1")
        for a in self.units:
            if math.gcd(a, N) != 1:
                raise ValueError(f"{a} is not a unit mod {N}")
            for b in self.units:
                if (a * b) % N not in self.units:
                    raise ValueError("unit subgroup not closed under multiplication")

    @classmethod
    def rational(cls, N: int) -> "CyclotomicAction":
        return cls(N, frozenset(a for a in range(N) if math.gcd(a, N) == 1) or frozenset({0}))

    @classmethod
    def cyclotomic(cls, N: int) -> "CyclotomicAction":
        return cls(N, frozenset({1 % N}))

    @classmethod
    def for_cyclotomic_field(cls, M: int, N: int) -> "CyclotomicAction":
        """Action of Gal(Q(zeta_N)/Q(zeta_M) cap Q(zeta_N)), i.e. base field Q(zeta_M)."""
        g = math.gcd(M, N)
        return cls(N, frozenset(a for a in range(N) if math.gcd(a, N) == 1 and (a - 1) % g == 0) or frozenset({0}))

    def lift(self, N2: int) -> "CyclotomicAction":
        """The same base field, acting modulo a multiple ``N2`` of the modulus."""
        if N2 % self.modulus:
            raise ValueError(f"{N2} is not a multiple of {self.modulus}")
        units = frozenset(
            a for a in range(N2) if math.gcd(a, N2) == 1 and (a % self.modulus) in self.units
        )
        return CyclotomicAction(N2, units or frozenset({0}))


def k_classes(table: ClassTable, act: CyclotomicAction, G: PermGroup | None = None) -> ClassTable:
    """Merge conjugacy classes identified by the power maps in ``act``."""
    exps = reduce(math.lcm, (c.order for c in table.classes), 1)
    if act.modulus % exps:
        raise ValueError(f"modulus {act.modulus} is not a multiple of the exponent {exps}")
    parent = list(range(len(table.classes)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for k, info in enumerate(table.classes):
        g = info.representative
        for a in act.units:
            h = g ** (a % info.order) if info.order > 1 else g
            target = _class_of(table, h, G)
            ra, rb = find(k), find(target)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    merged: dict[int, list[int]] = {}
    for k in range(len(table.classes)):
        merged.setdefault(find(k), []).append(k)
    merge_map = tuple(sorted(tuple(v) for v in merged.values()))
    return ClassTable(classes=table.classes, labels=table.labels, merge_map=merge_map)


def _class_of(table: ClassTable, h: Permutation, G: PermGroup | None) -> int:
    if G is not None:
        return int(table.labels[G.index_of(h)])
    # without the group, match by conjugacy through representatives is not
    # possible in general; callers in this module always pass G
    raise ValueError("group required to locate power images")


def b_invariant(G: PermGroup, act: CyclotomicAction | None = None, table: ClassTable | None = None) -> int:
    """Number of k-classes of minimal index; ``act`` defaults to k = Q."""
    if act is None:
        act = CyclotomicAction.rational(G.exponent)
    table = table if table is not None else conjugacy_classes(G)
    merged = k_classes(table, act, G)
    m = ind_group(G)
    return sum(1 for grp in merged.groups() if table.classes[grp[0]].ind == m)


@dataclass(frozen=True)
class BlockSystem:
    blocks: tuple[tuple[int, ...], ...]  # 1-based, each sorted, sorted by first point

    @property
    def block_size(self) -> int:
        return len(self.blocks[0])


def _finest_blocks(gens: list[tuple[int, ...]], n: int, a: int, b: int) -> list[int]:
    """Atkinson: finest G-invariant partition with ``a ~ b`` (0-based labels)."""
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    queue = [(a, b)]
    while queue:
        x, y = queue.pop()
        rx, ry = find(x), find(y)
        if rx == ry:
            continue
        parent[max(rx, ry)] = min(rx, ry)
        for g in gens:
            queue.append((g[x], g[y]))
    return [find(x) for x in range(n)]


def _partition_from_labels(labels: list[int]) -> tuple[tuple[int, ...], ...]:
    cells: dict[int, list[int]] = {}
    for pt, lab in enumerate(labels):
        cells.setdefault(lab, []).append(pt + 1)
    return tuple(sorted(tuple(c) for c in cells.values()))


def block_systems(G: PermGroup) -> list[BlockSystem]:
    """All minimal nontrivial block systems; empty iff ``G`` is primitive."""
    if not G.is_transitive:
        raise ValueError("block systems requested for an intransitive group")
    n = G.degree
    gens = [g.images for g in G.generators]
    found: dict[tuple[int, ...], tuple[tuple[int, ...], ...]] = {}
    for w in range(1, n):
        part = _partition_from_labels(_finest_blocks(gens, n, 0, w))
        if len(part) > 1:
            found[part[0]] = part
    minimal = [
        part
        for b0, part in found.items()
        if not any(set(c) < set(b0) for c in found if c != b0)
    ]
    minimal.sort(key=lambda p: (len(p[0]), p))
    return [BlockSystem(p) for p in minimal]


def is_primitive(G: PermGroup) -> bool:
    return not block_systems(G)


def wreath_product(H1: PermGroup, H2: PermGroup, order_cap: int = DEFAULT_ORDER_CAP) -> PermGroup:
    """``H1 wr H2`` acting on ``d`` blocks of size ``e``; point ``(j, i) -> j*e + i``."""
    e, d = H1.degree, H2.degree
    predicted = H1.order**d * H2.order
    if predicted > order_cap:
        raise GroupTooLarge(f"|H1|^d*|H2| = {predicted} exceeds cap {order_cap}")
    n = e * d
    gens = []
    for h in H1.generators:
        img = list(range(n))
        img[:e] = h.images
        gens.append(Permutation(tuple(img)))
    for s in H2.generators:
        img = [s.images[j] * e + i for j in range(d) for i in range(e)]
        gens.append(Permutation(tuple(img)))
    return PermGroup(n, gens, order_cap=order_cap)


@dataclass(frozen=True)
class WreathDecomposition:
    e: int
    H: PermGroup = field(compare=False)
    blocks: tuple[tuple[int, ...], ...]
    verified: bool


def wreath_decompose(G: PermGroup) -> WreathDecomposition | None:
    """Write a transitive group with a transposition as ``S_e wr H``."""
    if not G.is_transitive:
        raise ValueError("wreath decomposition requires a transitive group")
    if G.order == 1:
        return None
    hits = np.flatnonzero(G.element_inds == 1)
    if len(hits) == 0:
        return None
    n = G.degree
    tau = G.element(int(hits[0]))
    i, j = tau.support()
    gens = [g.images for g in G.generators]
    blocks = _partition_from_labels(_finest_blocks(gens, n, i, j))
    e, d = len(blocks[0]), len(blocks)
    if d == 1:
        # primitive with a transposition: the full symmetric group
        return WreathDecomposition(e=n, H=PermGroup(1, []), blocks=blocks, verified=G.order == math.factorial(n))
    block_of = {pt - 1: k for k, blk in enumerate(blocks) for pt in blk}
    hgens = [
        Permutation(tuple(block_of[g.images[blk[0] - 1]] for blk in blocks)) for g in G.generators
    ]
    H = PermGroup(d, hgens)
    W = wreath_product(symmetric_group(e), H, order_cap=max(G.order_cap, G.order))
    # canonical point k*e + r sits at original point blocks[k][r]
    pi = np.array([pt - 1 for blk in blocks for pt in blk], dtype=np.int64)
    relabeled = np.empty_like(W.table)
    relabeled[:, pi] = pi[W.table.astype(np.int64)]
    same = W.order == G.order and all(r.tobytes() in G._index for r in relabeled)
    return WreathDecomposition(e=e, H=H, blocks=blocks, verified=bool(same))


def invariants_record(G: PermGroup) -> dict:
    """JSON-ready summary of the Malle invariants of ``G`` over Q."""
    a = a_invariant(G)
    systems = block_systems(G) if G.is_transitive else []
    return {
        "degree": G.degree,
        "order": G.order,
        "ind": ind_group(G),
        "a_num": a.numerator,
        "a_den": a.denominator,
        "a": f"{a.numerator}/{a.denominator}",
        "b_q": b_invariant(G),
        "primitive": not systems,
        "block_sizes": sorted({s.block_size for s in systems}),
    }
