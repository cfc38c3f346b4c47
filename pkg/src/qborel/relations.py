"""Countable equivalence relations presented by graphs of point maps.

Finite quotients use explicit partial maps (dicts on quotient points).
The closure generated by a family of maps is computed together with its
layer filtration: layer r holds the pairs joined by a chain of length at
most r, where each chain step applies some generator forwards or
backwards (or stays put).  Chain witnesses are minimal-length and
deterministically tie-broken.

On the integer carrier a relation is presented by piecewise-translation
graphs; the closure checks reduce to per-offset IntSet coverage.  A
relation with finitely many non-singleton classes is described by
IntBlockRelation: a list of disjoint blocks, all other points singleton.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import inf

from .carriers import IntSet, PiecewiseTranslation
from .errors import (
    IndexTooLarge,
    InvalidPartition,
    NotASelector,
    NotATransversal,
)
from .quotient import Partition


def _neighbours(n: int, fns) -> list[set[int]]:
    nbrs = [set((x,)) for x in range(n)]
    for f in fns:
        for x, y in f.items():
            nbrs[x].add(y)
            nbrs[y].add(x)
    return nbrs


@dataclass
class ClosureLayers:
    """Layer filtration of a generated closure, with its generators."""

    n: int
    generators: list[dict[int, int]]
    layers: list[frozenset[tuple[int, int]]]
    partition: Partition

    @property
    def stabilization_index(self) -> int:
        return len(self.layers) - 1


def generate_equivalence(n: int, fns) -> tuple[Partition, ClosureLayers]:
    """Closure of the graphs of the given partial maps on n points.

    Returns the partition into connected components and the chain-length
    layers up to stabilization.
    """
    fns = [dict(f) for f in fns]
    for f in fns:
        for x, y in f.items():
            if not (0 <= x < n and 0 <= y < n):
                raise ValueError(f"graph pair ({x}, {y}) outside 0..{n - 1}")
    nbrs = _neighbours(n, fns)
    layers = [frozenset((x, x) for x in range(n))]
    current = set(layers[0])
    frontier = {(x, x) for x in range(n)}
    while True:
        nxt = set(current)
        for x, y in current:
            for z in nbrs[y]:
                nxt.add((x, z))
        if nxt == current:
            break
        layers.append(frozenset(nxt))
        current = nxt
    partition = Partition.from_pairs(n, current)
    return partition, ClosureLayers(n, fns, layers, partition)


@dataclass(frozen=True)
class ChainStep:
    """One step of a witness chain: which generator, which direction."""

    point: int
    via: int | None  # generator index, None for the starting point
    reverse: bool = False

    def describe(self) -> str:
        if self.via is None:
            return f"start {self.point}"
        arrow = "reverse" if self.reverse else "forward"
        return f"{arrow} f{self.via} -> {self.point}"


def chain_witness(layers: ClosureLayers, x: int, y: int) -> list[ChainStep] | None:
    """Minimal-length chain joining x to y, or None when unrelated.

    Ties are broken by generator index, forward application before
    reverse, and least intermediate point.
    """
    n = layers.n
    nbrs = _neighbours(n, layers.generators)
    dist = {y: 0}
    frontier = [y]
    while frontier:
        nxt = []
        for v in frontier:
            for w in nbrs[v]:
                if w not in dist:
                    dist[w] = dist[v] + 1
                    nxt.append(w)
        frontier = nxt
    if x not in dist:
        return None
    chain = [ChainStep(x, None)]
    cur = x
    while cur != y:
        d = dist[cur]
        found = None
        for j, f in enumerate(layers.generators):
            z = f.get(cur)
            if z is not None and dist.get(z, -1) == d - 1:
                found = ChainStep(z, j, reverse=False)
                break
            for z in sorted(w for w, v in f.items() if v == cur):
                if dist.get(z, -1) == d - 1:
                    found = ChainStep(z, j, reverse=True)
                    break
            if found:
                break
        assert found is not None, "BFS distances are inconsistent"
        chain.append(found)
        cur = found.point
    return chain


def tail_equivalence(f: dict[int, int] | list[int], n: int) -> tuple[Partition, ClosureLayers]:
    """Classes of the relation 'some forward iterates of x and y meet'."""
    table = dict(enumerate(f)) if not isinstance(f, dict) else dict(f)
    return generate_equivalence(n, [table])


def index_over(rel) -> int | float:
    """Largest class size; math.inf when some class is infinite."""
    if isinstance(rel, Partition):
        return rel.index()
    if isinstance(rel, IntBlockRelation):
        sizes = [b.size() for b in rel.blocks]
        if any(s == inf for s in sizes):
            return inf
        return max(sizes, default=1) if sizes else 1
    if hasattr(rel, "classes"):  # IntClassQuotient-style descriptor list
        sizes = [d.size() for d in rel.classes]
        if any(s == inf for s in sizes):
            return inf
        return max(sizes, default=0)
    raise TypeError(f"no index for {rel!r}")


# ---------------------------------------------------------------------------
# transversals and selectors


def transversal_to_selector(t, rel: Partition) -> dict[int, int]:
    """Map each point to the unique member of its class in t."""
    tset = set(t)
    phi = {}
    for block in rel.blocks:
        hits = [x for x in block if x in tset]
        if len(hits) != 1:
            raise NotATransversal(
                f"class {block} meets the set {len(hits)} times",
                witness=(block, tuple(hits)),
            )
        for x in block:
            phi[x] = hits[0]
    return phi


def selector_to_transversal(phi, rel: Partition) -> frozenset[int]:
    """Fixed points of a selector; checks the selector laws first."""
    for x in range(rel.n):
        if x not in phi:
            raise NotASelector(f"selector undefined at {x}", witness=x)
        if not rel.same(x, phi[x]):
            raise NotASelector(
                f"phi({x}) = {phi[x]} leaves the class", witness=(x, phi[x])
            )
    for block in rel.blocks:
        vals = {phi[x] for x in block}
        if len(vals) > 1:
            xs = sorted(block, key=lambda x: phi[x])
            raise NotASelector(
                f"selector not constant on class {block}",
                witness=(xs[0], xs[-1]),
            )
    return frozenset(x for x in range(rel.n) if phi[x] == x)


def min_selector(rel: Partition) -> dict[int, int]:
    """Selector choosing the least point of each class."""
    return {x: rel.block_of(x)[0] for x in range(rel.n)}


def index2_involution(rel: Partition) -> dict[int, int]:
    """The involution swapping each two-element class, fixing singletons.

    Demands every class have at most two elements.
    """
    big = [b for b in rel.blocks if len(b) > 2]
    if big:
        raise IndexTooLarge(
            f"class {big[0]} has {len(big[0])} elements", witness=big[0]
        )
    f = {}
    for b in rel.blocks:
        if len(b) == 1:
            f[b[0]] = b[0]
        else:
            f[b[0]], f[b[1]] = b[1], b[0]
    return f


def _class_involutions(block: tuple[int, ...]):
    """All involutive permutations of one block, as dicts."""
    if len(block) == 0:
        yield {}
        return
    x = block[0]
    rest = block[1:]
    for sub in _class_involutions(rest):
        yield {x: x, **sub}
    for i, y in enumerate(rest):
        others = rest[:i] + rest[i + 1:]
        for sub in _class_involutions(others):
            yield {x: y, y: x, **sub}


@dataclass
class InvolutionSearch:
    """Outcome of a bounded search for involutive generating sets."""

    found: tuple[dict[int, int], ...] | None
    budget: int
    candidates: int
    subsets_tried: int

    @property
    def exhausted(self) -> bool:
        return self.found is None


def involution_generation_search(rel: Partition, max_count: int) -> InvolutionSearch:
    """Search for at most max_count involutions generating the relation.

    Exhaustive over subsets of the full involution semigroup of the
    classes, smallest subsets first; honest exhaustion report otherwise.
    """
    per_class = [list(_class_involutions(b)) for b in rel.blocks]
    total = 1
    for opts in per_class:
        total *= len(opts)
    if total > 100000:
        raise IndexTooLarge(
            f"{total} candidate involutions exceed the search budget",
            witness=total,
        )
    candidates = []
    for combo in itertools.product(*per_class):
        f = {}
        for part in combo:
            f.update(part)
        candidates.append(f)
    tried = 0
    for size in range(0, max_count + 1):
        for subset in itertools.combinations(candidates, size):
            tried += 1
            part, _ = generate_equivalence(rel.n, list(subset))
            if part == rel:
                return InvolutionSearch(tuple(subset), max_count, len(candidates), tried)
    return InvolutionSearch(None, max_count, len(candidates), tried)


# ---------------------------------------------------------------------------
# enumerations


@dataclass
class CheckOutcome:
    ok: bool
    witness: object = None

    def __bool__(self):
        return self.ok


@dataclass
class EnumReport:
    """Closure report for a family of graphs."""

    reflexive: CheckOutcome
    symmetric: CheckOutcome
    transitive: CheckOutcome

    @property
    def ok(self) -> bool:
        return bool(self.reflexive and self.symmetric and self.transitive)


def verify_enumeration(graphs, n: int) -> EnumReport:
    """Check that the union of the graphs is an equivalence relation."""
    union = set()
    for f in graphs:
        union.update(f.items())
    refl = CheckOutcome(True)
    for x in range(n):
        if (x, x) not in union:
            refl = CheckOutcome(False, x)
            break
    sym = CheckOutcome(True)
    for x, y in sorted(union):
        if (y, x) not in union:
            sym = CheckOutcome(False, (y, x))
            break
    trans = CheckOutcome(True)
    for x, y in sorted(union):
        for y2, z in sorted(union):
            if y2 == y and (x, z) not in union:
                trans = CheckOutcome(False, (x, z, y))
                break
        if not trans.ok:
            break
    return EnumReport(refl, sym, trans)


def union_pairs(graphs) -> frozenset[tuple[int, int]]:
    out = set()
    for f in graphs:
        out.update(f.items())
    return frozenset(out)


@dataclass(frozen=True)
class EnumeratedEquivalence:
    """A finite-quotient relation presented as a union of map graphs."""

    n: int
    graphs: tuple[tuple[tuple[int, int], ...], ...]

    @classmethod
    def make(cls, n: int, graphs) -> "EnumeratedEquivalence":
        return cls(n, tuple(tuple(sorted(dict(g).items())) for g in graphs))

    def graph_dicts(self) -> list[dict[int, int]]:
        return [dict(g) for g in self.graphs]

    def verify(self) -> EnumReport:
        return verify_enumeration(self.graph_dicts(), self.n)

    def pairs(self) -> frozenset[tuple[int, int]]:
        return union_pairs(self.graph_dicts())

    def partition(self) -> Partition:
        return Partition.from_pairs(self.n, self.pairs())


def _merge_offsets(graphs: list[PiecewiseTranslation]) -> dict[int, IntSet]:
    merged: dict[int, IntSet] = {}
    for g in graphs:
        for d, c in g.pieces:
            merged[c] = merged[c].union(d) if c in merged else d
    return {c: d for c, d in merged.items() if not d.is_empty()}


@dataclass
class EnumReportInt:
    reflexive: CheckOutcome
    symmetric: CheckOutcome
    transitive: CheckOutcome

    @property
    def ok(self) -> bool:
        return bool(self.reflexive and self.symmetric and self.transitive)


def verify_enumeration_int(
    graphs: list[PiecewiseTranslation], ambient: IntSet
) -> EnumReportInt:
    """Closure checks for piecewise-translation graphs, per offset.

    The witness of a failed check is a pair (and for transitivity the
    uncovered offset), produced from the least-magnitude point available.
    """
    offs = _merge_offsets(graphs)
    refl = CheckOutcome(True)
    missing = ambient.difference(offs.get(0, IntSet.empty()))
    if not missing.is_empty():
        x = missing.closest_to_zero()
        refl = CheckOutcome(False, x)
    sym = CheckOutcome(True)
    for c, d in sorted(offs.items()):
        inv_dom = d.translate(c)
        left = inv_dom.difference(offs.get(-c, IntSet.empty()))
        if not left.is_empty():
            y = left.closest_to_zero()
            sym = CheckOutcome(False, (y, y - c))
            break
    trans = CheckOutcome(True)
    done = False
    for c1, d1 in sorted(offs.items()):
        for c2, d2 in sorted(offs.items()):
            through = d1.intersect(d2.translate(-c1))
            left = through.difference(offs.get(c1 + c2, IntSet.empty()))
            if not left.is_empty():
                x = left.closest_to_zero()
                trans = CheckOutcome(False, {
                    "pair": (x, x + c1 + c2),
                    "middle": x + c1,
                    "offset": c1 + c2,
                })
                done = True
                break
        if done:
            break
    return EnumReportInt(refl, sym, trans)


@dataclass(frozen=True)
class IntBlockRelation:
    """Equivalence on the integers: disjoint blocks, all else singleton."""

    blocks: tuple[IntSet, ...]
    ambient: IntSet = IntSet.all_integers()

    @classmethod
    def make(cls, blocks, ambient: IntSet | None = None) -> "IntBlockRelation":
        amb = ambient if ambient is not None else IntSet.all_integers()
        bs = [b for b in blocks if not b.is_empty()]
        for i in range(len(bs)):
            if not bs[i].is_subset(amb):
                raise InvalidPartition(f"block {i} leaves the ambient set")
            for j in range(i + 1, len(bs)):
                both = bs[i].intersect(bs[j])
                if not both.is_empty():
                    raise InvalidPartition(
                        f"blocks {i} and {j} overlap",
                        witness=both.closest_to_zero(),
                    )
        bs.sort(key=lambda b: (abs(b.closest_to_zero()), b.closest_to_zero() < 0))
        return cls(tuple(bs), amb)

    @classmethod
    def equality(cls, ambient: IntSet | None = None) -> "IntBlockRelation":
        return cls.make([], ambient)

    def related(self, x: int, y: int) -> bool:
        if x == y:
            return x in self.ambient
        return any(x in b and y in b for b in self.blocks)

    def class_of(self, x: int) -> IntSet:
        for b in self.blocks:
            if x in b:
                return b
        return IntSet.of(x)

    def graph_within_witness(self, f: PiecewiseTranslation):
        """None if graph(f) stays inside the relation, else an escaping pair.

        A pair (x, x+c) with c != 0 lies inside exactly when x and x+c
        share a block, so the offset-c domain must sit in the union of
        the sets B meet (B - c).
        """
        for d, c in f.pieces:
            if c == 0:
                stray = d.difference(self.ambient)
                if not stray.is_empty():
                    x = stray.closest_to_zero()
                    return (x, x)
                continue
            allowed = IntSet.empty()
            for b in self.blocks:
                allowed = allowed.union(b.intersect(b.translate(-c)))
            stray = d.difference(allowed)
            if not stray.is_empty():
                x = stray.closest_to_zero()
                return (x, x + c)
        return None

    def saturate(self, s: IntSet) -> IntSet:
        out = s
        for b in self.blocks:
            if not b.intersect(s).is_empty():
                out = out.union(b)
        return out
