"""The partial-injection calculus behind countable equivalence relations.

Finite lane: relations and maps live on points 0..n-1, maps are dicts.
Integer lane: maps are piecewise translations and sets are IntSets, so
every step of the construction stays exact.

The pipeline: split an enumeration into partial injections, greedily
extend a seed injection to a maximal one, stratify the points by how
their orbit under the injection escapes its domain or range, then
reassemble two total bijections covering the seed.  Level dynamics on
the integer carrier are accelerated once they become periodic; the
detected period is certified by a translation-compatibility check, not
extrapolated blindly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .carriers import IntSet, PiecewiseTranslation
from .errors import (
    NoAcceleration,
    NotAnEnumeration,
    NotCovered,
    NotInjective,
    NotMaximal,
    NotWithinRelation,
)
from .quotient import Partition
from .relations import (
    EnumeratedEquivalence,
    IntBlockRelation,
    generate_equivalence,
    verify_enumeration,
)

# ---------------------------------------------------------------------------
# dict-map helpers (finite lane)


def identity_map(n: int) -> dict[int, int]:
    return {x: x for x in range(n)}


def invert_map(f: dict[int, int]) -> dict[int, int]:
    inv = {}
    for x, y in f.items():
        if y in inv:
            raise NotInjective(
                f"{inv[y]} and {x} both map to {y}", witness=(inv[y], x, y)
            )
        inv[y] = x
    return inv


def injectivity_witness(f: dict[int, int]):
    seen = {}
    for x in sorted(f):
        y = f[x]
        if y in seen:
            return (seen[y], x, y)
        seen[y] = x
    return None


def graph_within_partition(f: dict[int, int], rel: Partition):
    """None when every pair of f joins related points, else a witness pair."""
    for x in sorted(f):
        if not rel.same(x, f[x]):
            return (x, f[x])
    return None


# ---------------------------------------------------------------------------
# Lusin-Novikov section decomposition


@dataclass
class SectionDecomposition:
    """A finite-section relation split into graphs of partial maps.

    graphs[i] sends x to the i-th smallest element of the section at x;
    the first graph is the least-element uniformization.
    """

    relation: frozenset[tuple[int, int]]
    graphs: list[dict[int, int]]

    @property
    def uniformization(self) -> dict[int, int]:
        return self.graphs[0] if self.graphs else {}

    @property
    def width(self) -> int:
        return len(self.graphs)


def lusin_novikov_decompose(pairs) -> SectionDecomposition:
    """Split a finite relation into countably many function graphs."""
    rel = frozenset((int(a), int(b)) for a, b in pairs)
    sections: dict[int, list[int]] = {}
    for a, b in rel:
        sections.setdefault(a, []).append(b)
    for a in sections:
        sections[a].sort()
    width = max((len(s) for s in sections.values()), default=0)
    graphs = []
    for i in range(width):
        graphs.append({a: s[i] for a, s in sections.items() if len(s) > i})
    return SectionDecomposition(rel, graphs)


# ---------------------------------------------------------------------------
# classical construction on a finite carrier


@dataclass
class ClassicalResult:
    """Involutions realizing an equivalence relation on a finite carrier."""

    relation: Partition
    enumeration: list[dict[int, int]]
    bit_count: int
    involutions: dict[tuple[int, int, int], dict[int, int]]
    generators: list[dict[int, int]]

    def involution_for_pair(self, x: int, y: int) -> tuple[int, int, int] | None:
        for key, f in sorted(self.involutions.items()):
            if f.get(x) == y:
                return key
        return None


def classical_construction(rel: Partition) -> ClassicalResult:
    """Build the three-case involutions for a relation on points 0..n-1.

    The enumeration lists the i-th smallest member of each class; the
    separating sets are the bit predicates of the point index.  Each
    triple (m, n, p) yields the involution that swaps x with its m-th
    class member when the p-th bits disagree the right way and the n-th
    map undoes the move, and fixes everything else.
    """
    n = rel.n
    enumeration = lusin_novikov_decompose(rel.pairs()).graphs
    bit_count = (n - 1).bit_length() if n >= 2 else 0

    def bit(x: int, p: int) -> bool:
        return (x >> p) & 1 == 1

    involutions = {}
    k = len(enumeration)
    for m in range(k):
        fm = enumeration[m]
        for nn in range(k):
            fn = enumeration[nn]
            for p in range(bit_count):
                table = {}
                for x in range(n):
                    y = fm.get(x)
                    if bit(x, p) and y is not None and not bit(y, p) and fn.get(y) == x:
                        table[x] = y
                        continue
                    z = fn.get(x)
                    if not bit(x, p) and z is not None and bit(z, p) and fm.get(z) == x:
                        table[x] = z
                        continue
                    table[x] = x
                involutions[(m, nn, p)] = table
    seen = set()
    generators = []
    ident = identity_map(n)
    for key in sorted(involutions):
        f = involutions[key]
        sig = tuple(sorted(f.items()))
        if f != ident and sig not in seen:
            seen.add(sig)
            generators.append(f)
    return ClassicalResult(rel, enumeration, bit_count, involutions, generators)


# ---------------------------------------------------------------------------
# splitting an enumeration into partial injections


def psi_split(phis: list[dict[int, int]], n: int) -> list[dict[int, int]]:
    """Partial injections phi_a meet phi_b^-1, indexed row-major by (a, b).

    The family must pass the closure checks; its injections then cover
    the whole relation.
    """
    report = verify_enumeration(phis, n)
    if not report.ok:
        raise NotAnEnumeration("graphs fail the closure checks", witness=report)
    k = len(phis)
    psis = []
    for a in range(k):
        fa = phis[a]
        for b in range(k):
            fb = phis[b]
            psis.append({x: y for x, y in fa.items() if fb.get(y) == x})
    return psis


def psi_split_int(phis: list[PiecewiseTranslation]) -> list[PiecewiseTranslation]:
    """Integer-lane splitting: graph of phi_a intersected with phi_b^-1."""
    psis = []
    for fa in phis:
        for fb in phis:
            pieces = []
            for d1, c1 in fa.pieces:
                for d2, c2 in fb.pieces:
                    if c2 == -c1:
                        pieces.append((d1.intersect(d2.translate(-c1)), c1))
            psis.append(PiecewiseTranslation(pieces))
    return psis


# ---------------------------------------------------------------------------
# greedy extension


def greedy_extend(
    g0: dict[int, int],
    psis: list[dict[int, int]],
    n: int,
    rel: Partition | None = None,
    prepend_identity: bool = True,
) -> dict[int, int]:
    """Extend a partial injection by all non-clashing pairs of each psi.

    Processes the identity first (so untouched points pair with
    themselves), then each psi in order, keeping every pair whose source
    is not yet used as a source and whose target not yet as a target.
    """
    w = injectivity_witness(g0)
    if w is not None:
        raise NotInjective(f"seed maps {w[0]} and {w[1]} to {w[2]}", witness=w)
    if rel is not None:
        w = graph_within_partition(g0, rel)
        if w is not None:
            raise NotWithinRelation(f"seed pair {w} leaves the relation", witness=w)
    queue = list(psis)
    if prepend_identity:
        queue = [identity_map(n)] + queue
    g = dict(g0)
    rng = set(g.values())
    for psi in queue:
        if rel is not None:
            w = graph_within_partition(psi, rel)
            if w is not None:
                raise NotWithinRelation(
                    f"psi pair {w} leaves the relation", witness=w
                )
        for x in sorted(psi):
            y = psi[x]
            if x not in g and y not in rng:
                g[x] = y
                rng.add(y)
    return g


def maximality_witness(g: dict[int, int], rel: Partition):
    """None when every related pair has its source used or target hit."""
    rng = set(g.values())
    for block in rel.blocks:
        for y in block:
            if y in g:
                continue
            for z in block:
                if z not in rng:
                    return (y, z)
    return None


def greedy_extend_int(
    g0: PiecewiseTranslation,
    psis: list[PiecewiseTranslation],
    ambient: IntSet,
    rel: IntBlockRelation | None = None,
    prepend_identity: bool = True,
) -> PiecewiseTranslation:
    """Integer-lane greedy extension with exact IntSet bookkeeping."""
    w = g0.injectivity_witness()
    if w is not None:
        raise NotInjective(f"seed maps {w[0]} and {w[1]} to {w[2]}", witness=w)
    if rel is not None:
        w = rel.graph_within_witness(g0)
        if w is not None:
            raise NotWithinRelation(f"seed pair {w} leaves the relation", witness=w)
    queue = list(psis)
    if prepend_identity:
        queue = [PiecewiseTranslation.identity(ambient)] + queue
    g = g0
    for psi in queue:
        if rel is not None:
            w = rel.graph_within_witness(psi)
            if w is not None:
                raise NotWithinRelation(
                    f"psi pair {w} leaves the relation", witness=w
                )
        fresh = psi.restrict(ambient.difference(g.domain()))
        fresh = fresh.corestrict(ambient.difference(g.range_set()))
        # a single psi piece may still clash with itself after filtering
        # (its unused sources mapping onto each other's unused targets is
        # impossible: psi is injective and filtering only removes pairs)
        g = g.union(fresh)
    return g


def maximality_witness_int(g: PiecewiseTranslation, rel: IntBlockRelation):
    """Witness pair (y, z) related with y outside dom(g), z outside rng(g)."""
    no_dom = rel.ambient.difference(g.domain())
    no_rng = rel.ambient.difference(g.range_set())
    diag = no_dom.intersect(no_rng)
    if not diag.is_empty():
        x = diag.closest_to_zero()
        return (x, x)
    for b in rel.blocks:
        ys = b.intersect(no_dom)
        zs = b.intersect(no_rng)
        if not ys.is_empty() and not zs.is_empty():
            return (ys.closest_to_zero(), zs.closest_to_zero())
    return None


# ---------------------------------------------------------------------------
# level stratification


@dataclass
class FiniteLevels:
    """Levels of a maximal partial injection on a finite point set."""

    n: int
    g: dict[int, int]
    positive: list[frozenset[int]]  # X_1, X_2, ...
    negative: list[frozenset[int]]  # X_-1, X_-2, ...
    zero: frozenset[int]

    def level_of(self, x: int) -> int:
        for i, s in enumerate(self.positive):
            if x in s:
                return i + 1
        for i, s in enumerate(self.negative):
            if x in s:
                return -(i + 1)
        return 0


def levels_finite(g: dict[int, int], n: int, rel: Partition) -> FiniteLevels:
    """Stratify points by escape behaviour; demands a maximal injection."""
    w = injectivity_witness(g)
    if w is not None:
        raise NotInjective(f"{w[0]} and {w[1]} both map to {w[2]}", witness=w)
    w = maximality_witness(g, rel)
    if w is not None:
        raise NotMaximal(f"pair {w} is unused but extendable", witness=w)
    dom = set(g)
    rng = set(g.values())
    inv = invert_map(g)
    pos = []
    cur = frozenset(dom - rng)
    guard = 0
    while cur:
        pos.append(cur)
        cur = frozenset(g[x] for x in cur if x in g)
        guard += 1
        assert guard <= n + 1, "positive levels failed to terminate"
    neg = []
    cur = frozenset(rng - dom)
    guard = 0
    while cur:
        neg.append(cur)
        cur = frozenset(inv[x] for x in cur if x in inv)
        guard += 1
        assert guard <= n + 1, "negative levels failed to terminate"
    used = set().union(*pos, *neg) if (pos or neg) else set()
    zero = frozenset(range(n)) - used
    return FiniteLevels(n, dict(g), pos, neg, frozenset(zero))


@dataclass
class SideLevels:
    """One side of the integer-lane stratification.

    explicit[i] is the level at depth i+1.  When accel is set as
    (base, period, offset), levels from depth base onward repeat with
    that period, translated by the offset; union is the exact union of
    the whole side.
    """

    explicit: list[IntSet]
    accel: tuple[int, int, int] | None
    union: IntSet

    def level(self, depth: int) -> IntSet:
        if depth < 1:
            raise ValueError("side levels start at depth 1")
        if self.accel is None:
            if depth <= len(self.explicit):
                return self.explicit[depth - 1]
            return IntSet.empty()
        base, period, offset = self.accel
        if depth < base:
            return self.explicit[depth - 1]
        k, i = divmod(depth - base, period)
        return self.explicit[base + i - 1].translate(k * offset)

    def parity_union(self, parity: int) -> IntSet:
        """Union of levels of the given parity (0 even, 1 odd)."""
        out = IntSet.empty()
        if self.accel is None:
            for i, s in enumerate(self.explicit):
                if (i + 1) % 2 == parity:
                    out = out.union(s)
            return out
        base, period, offset = self.accel
        for depth in range(1, base):
            if depth % 2 == parity:
                out = out.union(self.explicit[depth - 1])
        # normalize to an even period so depth parity is constant per chain
        pp = period if period % 2 == 0 else 2 * period
        cc = offset * (pp // period)
        for depth in range(base, base + pp):
            if depth % 2 == parity:
                out = out.union(self.level(depth).translates_union(cc))
        return out


@dataclass
class IntLevels:
    """Integer-lane stratification with certified acceleration."""

    ambient: IntSet
    g: PiecewiseTranslation
    positive: SideLevels
    negative: SideLevels
    zero: IntSet

    def level(self, depth: int) -> IntSet:
        if depth == 0:
            return self.zero
        if depth > 0:
            return self.positive.level(depth)
        return self.negative.level(-depth)


def _compatible_region(h: PiecewiseTranslation, c: int) -> IntSet:
    """Points x where h(x + c) = h(x) + c, both sides defined."""
    out = IntSet.empty()
    for d1, c1 in h.pieces:
        for d2, c2 in h.pieces:
            if c1 == c2:
                out = out.union(d1.intersect(d2.translate(-c)))
    return out


def _side_levels(
    h: PiecewiseTranslation, first: IntSet, bound: int, max_period: int
) -> SideLevels:
    """Iterate depth levels of h from a first level, then certify a period.

    A period (p, c) is accepted only when the whole claimed tail lies in
    the region where h commutes with translation by c, which makes the
    extrapolation exact rather than empirical.
    """
    levels = [first]
    while len(levels) < bound and not levels[-1].is_empty():
        levels.append(h.image(levels[-1]))
    if levels[-1].is_empty():
        explicit = [s for s in levels if not s.is_empty()]
        union = IntSet.empty()
        for s in explicit:
            union = union.union(s)
        return SideLevels(explicit, None, union)
    for period in range(1, max_period + 1):
        for base in range(1, len(levels) - period + 1):
            a = levels[base - 1]
            b = levels[base + period - 1]
            if a.is_empty() or b.is_empty():
                continue
            if a.min() is not None and b.min() is not None:
                c = b.min() - a.min()
            elif a.max() is not None and b.max() is not None:
                c = b.max() - a.max()
            else:
                continue
            if b != a.translate(c):
                continue
            tail = IntSet.empty()
            for i in range(period):
                tail = tail.union(levels[base + i - 1].translates_union(c))
            if not tail.is_subset(_compatible_region(h, c)):
                continue
            union = tail
            for depth in range(1, base):
                union = union.union(levels[depth - 1])
            return SideLevels(levels[: base + period - 1], (base, period, c), union)
    raise NoAcceleration(
        f"no period up to {max_period} within {bound} levels", witness=len(levels)
    )


def levels_int(
    g: PiecewiseTranslation,
    rel: IntBlockRelation,
    bound: int = 32,
    max_period: int = 8,
) -> IntLevels:
    """Integer-lane stratification of a maximal partial injection."""
    w = g.injectivity_witness()
    if w is not None:
        raise NotInjective(f"{w[0]} and {w[1]} both map to {w[2]}", witness=w)
    w = maximality_witness_int(g, rel)
    if w is not None:
        raise NotMaximal(f"pair {w} is unused but extendable", witness=w)
    ambient = rel.ambient
    ginv = g.inverse()
    pos_first = g.domain().difference(g.range_set())
    neg_first = g.range_set().difference(g.domain())
    pos = _side_levels(g, pos_first, bound, max_period)
    neg = _side_levels(ginv, neg_first, bound, max_period)
    zero = ambient.difference(pos.union).difference(neg.union)
    return IntLevels(ambient, g, pos, neg, zero)


# ---------------------------------------------------------------------------
# the two-bijection cover


@dataclass
class CoverPair:
    """Two total bijections whose union of graphs covers the seed."""

    first: object  # dict or PiecewiseTranslation
    second: object


def cover_finite(levels: FiniteLevels) -> CoverPair:
    """Assemble the two bijections from a finite stratification."""
    g = levels.g
    inv = invert_map(g)
    gp = {}
    gpp = {}
    for x in range(levels.n):
        l = levels.level_of(x)
        if l == 0:
            gp[x] = g[x]
            gpp[x] = inv[x]
        elif l >= 1 and l % 2 == 1:
            gp[x] = g[x]
            gpp[x] = x if l == 1 else inv[x]
        elif l >= 2:
            gp[x] = inv[x]
            gpp[x] = g[x]
        elif l <= -1 and (-l) % 2 == 1:
            gp[x] = inv[x]
            gpp[x] = x if l == -1 else g[x]
        else:  # l <= -2 even
            gp[x] = g[x]
            gpp[x] = inv[x]
    return CoverPair(gp, gpp)


def cover_int(levels: IntLevels) -> CoverPair:
    """Assemble the two bijections from an integer stratification."""
    g = levels.g
    ginv = g.inverse()
    pos_odd = levels.positive.parity_union(1)
    pos_even = levels.positive.parity_union(0)
    neg_odd = levels.negative.parity_union(1)
    neg_even = levels.negative.parity_union(0)
    x1 = levels.positive.level(1)
    xm1 = levels.negative.level(1)
    gp = (
        g.restrict(levels.zero)
        .union(g.restrict(pos_odd))
        .union(ginv.restrict(pos_even))
        .union(ginv.restrict(neg_odd))
        .union(g.restrict(neg_even))
    )
    gpp = (
        ginv.restrict(levels.zero)
        .union(PiecewiseTranslation.identity(x1.union(xm1)))
        .union(g.restrict(pos_even))
        .union(ginv.restrict(pos_odd.difference(x1)))
        .union(ginv.restrict(neg_even))
        .union(g.restrict(neg_odd.difference(xm1)))
    )
    return CoverPair(gp, gpp)


# ---------------------------------------------------------------------------
# end-to-end pipelines


@dataclass
class QuotientConstruction:
    """Per-injection cover data and the generators it produced."""

    relation: Partition
    psis: list[dict[int, int]]
    extended: list[dict[int, int]]
    covers: list[CoverPair]
    generators: list[dict[int, int]]
    orbit: Partition


def quotient_construction(enum: EnumeratedEquivalence) -> QuotientConstruction:
    """Run the full pipeline for a verified finite enumeration."""
    report = enum.verify()
    if not report.ok:
        raise NotAnEnumeration("graphs fail the closure checks", witness=report)
    n = enum.n
    rel = enum.partition()
    phis = enum.graph_dicts()
    psis = psi_split(phis, n)
    extended = []
    covers = []
    seen = set()
    generators = []
    for psi in psis:
        g = greedy_extend(psi, psis, n, rel)
        extended.append(g)
        cov = cover_finite(levels_finite(g, n, rel))
        covers.append(cov)
        for f in (cov.first, cov.second):
            sig = tuple(sorted(f.items()))
            if sig not in seen:
                seen.add(sig)
                generators.append(f)
    orbit, _ = generate_equivalence(n, generators)
    return QuotientConstruction(rel, psis, extended, covers, generators, orbit)


@dataclass
class IntQuotientConstruction:
    relation: IntBlockRelation
    psis: list[PiecewiseTranslation]
    extended: list[PiecewiseTranslation]
    covers: list[CoverPair]
    generators: list[PiecewiseTranslation]


def quotient_construction_int(
    rel: IntBlockRelation,
    phis: list[PiecewiseTranslation],
    bound: int = 32,
    max_period: int = 8,
) -> IntQuotientConstruction:
    """Integer-lane pipeline for a generating family of translations.

    The family need not enumerate the relation exactly (infinite classes
    have no finite exact enumeration); each graph must stay inside it,
    and orbit coverage is certified separately on a probe window.
    """
    for i, f in enumerate(phis):
        w = rel.graph_within_witness(f)
        if w is not None:
            raise NotWithinRelation(
                f"graph {i} leaves the relation at {w}", witness=w
            )
    psis = psi_split_int(phis)
    extended = []
    covers = []
    generators = []
    for psi in psis:
        g = greedy_extend_int(psi, psis, rel.ambient, rel)
        extended.append(g)
        cov = cover_int(levels_int(g, rel, bound, max_period))
        covers.append(cov)
        for f in (cov.first, cov.second):
            if f not in generators:
                generators.append(f)
    return IntQuotientConstruction(rel, psis, extended, covers, generators)


def orbit_window_witness(
    rel: IntBlockRelation,
    generators: list[PiecewiseTranslation],
    window: int = 64,
    slack: int = 16,
):
    """None when generators connect every related window pair, else a pair.

    Breadth-first search over generator moves (both directions), allowed
    to roam slack beyond the window.
    """
    lo, hi = -window - slack, window + slack
    moves = list(generators) + [
        f.inverse() for f in generators if f.is_injective()
    ]
    for b in rel.blocks:
        points = b.window(-window, window)
        if len(points) < 2:
            continue
        start = points[0]
        seen = {start}
        frontier = [start]
        while frontier:
            nxt = []
            for x in frontier:
                for f in moves:
                    y = f.get(x)
                    if y is not None and lo <= y <= hi and y not in seen and y in b:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        for x in points:
            if x not in seen:
                return (start, x)
    return None


# ---------------------------------------------------------------------------
# weak uniformization


@dataclass
class Uniformization:
    """Least-index selection from a covered relation."""

    phi: dict[int, int]
    index_of: dict[int, int]  # point -> chosen graph index


def weak_uniformize(rel_pairs, fns: list[dict[int, int]]) -> Uniformization:
    """Select, for each source, the first graph whose pair lies in R."""
    rel = frozenset((int(a), int(b)) for a, b in rel_pairs)
    for a, b in sorted(rel):
        if not any(f.get(a) == b for f in fns):
            raise NotCovered(f"pair ({a}, {b}) not on any graph", witness=(a, b))
    phi = {}
    index_of = {}
    for a in {a for a, _ in rel}:
        for i, f in enumerate(fns):
            y = f.get(a)
            if y is not None and (a, y) in rel:
                phi[a] = y
                index_of[a] = i
                break
    return Uniformization(phi, index_of)


@dataclass
class UniformizationInt:
    phi: PiecewiseTranslation
    levels: list[IntSet]  # levels[i] = points selecting graph i


def weak_uniformize_int(
    rel_graphs: list[PiecewiseTranslation], fns: list[PiecewiseTranslation]
) -> UniformizationInt:
    """Integer-lane least-index selection, exact via per-offset sets."""
    rel_offsets: dict[int, IntSet] = {}
    for r in rel_graphs:
        for d, c in r.pieces:
            rel_offsets[c] = rel_offsets[c].union(d) if c in rel_offsets else d
    fn_offsets: dict[int, IntSet] = {}
    for f in fns:
        for d, c in f.pieces:
            fn_offsets[c] = fn_offsets[c].union(d) if c in fn_offsets else d
    for c, d in sorted(rel_offsets.items()):
        left = d.difference(fn_offsets.get(c, IntSet.empty()))
        if not left.is_empty():
            x = left.closest_to_zero()
            raise NotCovered(f"pair ({x}, {x + c}) not on any graph", witness=(x, x + c))
    taken = IntSet.empty()
    levels = []
    pieces = []
    for f in fns:
        hit = IntSet.empty()
        for d, c in f.pieces:
            good = d.intersect(rel_offsets.get(c, IntSet.empty()))
            hit = hit.union(good)
        fresh = hit.difference(taken)
        levels.append(fresh)
        pieces.extend((d.intersect(fresh), c) for d, c in f.pieces)
        taken = taken.union(fresh)
    return UniformizationInt(PiecewiseTranslation(pieces), levels)
