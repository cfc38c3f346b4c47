"""Symbolic sequence space on eventually periodic words.

A point is an infinite sequence over a digit alphabet, stored as a
preperiod plus a repeating block. On this subspace eventual equality,
shift-tail equality, the shift map, and letterwise permutation actions
are all exactly decidable. Finite truncated models bridge the same
constructions onto indexed carriers for the pipeline in feldman_moore.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import lcm

from .actions import (
    FiniteGroup,
    GroupAction,
    cocycle_from_free_action,
    excess_domain,
    freeness_witness,
    involution_fiber_report,
    normalizer,
    orbit_equivalence,
    verify_cocycle,
)
from .carriers import FiniteCarrier, IntSet, PiecewiseTranslation
from .errors import AlphabetMismatch, BadParameters, UnknownExample
from .feldman_moore import (
    cover_int,
    greedy_extend_int,
    levels_int,
    maximality_witness_int,
    psi_split_int,
)
from .quotient import FiniteQuotient, Partition
from .relations import (
    IntBlockRelation,
    generate_equivalence,
    index2_involution,
    index_over,
    selector_to_transversal,
)


def _check_letters(s: str, k: int):
    for ch in s:
        if not ch.isdigit() or int(ch) >= k:
            raise ValueError(f"letter {ch!r} outside alphabet of size {k}")


def _primitive_root(w: str) -> str:
    n = len(w)
    for d in range(1, n + 1):
        if n % d == 0 and w[:d] * (n // d) == w:
            return w[:d]
    raise AssertionError("every word is a power of itself")


@dataclass(frozen=True)
class EventuallyPeriodicWord:
    """A sequence u . w w w ... in canonical form.

    The repeating block is primitive and the preperiod is as short as
    possible, so two values are equal exactly when they denote the same
    sequence. Build through canonicalize(), not the raw constructor.
    """

    k: int
    u: str
    w: str

    def letter_at(self, i: int) -> int:
        if i < len(self.u):
            return int(self.u[i])
        return int(self.w[(i - len(self.u)) % len(self.w)])

    def prefix(self, n: int) -> str:
        return "".join(str(self.letter_at(i)) for i in range(n))

    def __str__(self) -> str:
        return f"{self.u}|{self.w}"


def canonicalize(u: str, w: str, k: int) -> EventuallyPeriodicWord:
    """Shrink (u, w) to the unique shortest presentation."""
    if not w:
        raise ValueError("repeating block must be nonempty")
    if not 2 <= k <= 10:
        raise ValueError("alphabet size must be between 2 and 10")
    _check_letters(u, k)
    _check_letters(w, k)
    w = _primitive_root(w)
    while u and u[-1] == w[-1]:
        w = w[-1] + w[:-1]
        u = u[:-1]
    return EventuallyPeriodicWord(k, u, w)


def parse_word(text: str, k: int) -> EventuallyPeriodicWord:
    """Read the u|w form, e.g. "1|0" for 1 followed by zeros."""
    if text.count("|") != 1:
        raise ValueError(f"word {text!r} needs exactly one '|'")
    u, w = text.split("|")
    return canonicalize(u, w, k)


def e0_equivalent(x: EventuallyPeriodicWord, y: EventuallyPeriodicWord) -> bool:
    """Do the sequences agree from some position on?

    Both tails repeat with period lcm(|w_x|, |w_y|) past the longer
    preperiod, so checking one full window there decides it.
    """
    if x.k != y.k:
        raise AlphabetMismatch(f"alphabet sizes {x.k} and {y.k} differ")
    start = max(len(x.u), len(y.u))
    span = lcm(len(x.w), len(y.w))
    return all(x.letter_at(i) == y.letter_at(i) for i in range(start, start + span))


def et_equivalent(x: EventuallyPeriodicWord, y: EventuallyPeriodicWord) -> bool:
    """Are some shifts of the two sequences equal?

    Shifting far enough leaves a purely periodic word whose block runs
    through every rotation, and the preperiods disappear entirely; so
    the question reduces to whether the primitive blocks are rotations
    of one another.
    """
    if x.k != y.k:
        raise AlphabetMismatch(f"alphabet sizes {x.k} and {y.k} differ")
    return len(x.w) == len(y.w) and x.w in y.w + y.w


def shift(x: EventuallyPeriodicWord) -> EventuallyPeriodicWord:
    """Drop the first letter."""
    if x.u:
        return canonicalize(x.u[1:], x.w, x.k)
    return canonicalize("", x.w[1:] + x.w[0], x.k)


def letter_act(sigma, x: EventuallyPeriodicWord) -> EventuallyPeriodicWord:
    """Apply a letter permutation at every position."""
    sigma = tuple(sigma)
    if sorted(sigma) != list(range(x.k)):
        raise ValueError(f"{sigma} is not a permutation of 0..{x.k - 1}")
    sub = lambda s: "".join(str(sigma[int(c)]) for c in s)
    return canonicalize(sub(x.u), sub(x.w), x.k)


def is_aperiodic(x: EventuallyPeriodicWord) -> bool:
    """Do all shifts of x differ pairwise?

    Two shifts coincide exactly when the procedure below finds a repeat
    among the first |u| + 2|w| shifts. Every eventually periodic word
    has a purely periodic tail, so the answer here is always False; the
    honest check is kept because the question only turns positive on
    sequences outside this subspace.
    """
    seen = set()
    cur = x
    for _ in range(len(x.u) + 2 * len(x.w) + 1):
        if cur in seen:
            return False
        seen.add(cur)
        cur = shift(cur)
    return True


def e0_class_enumerate(
    x: EventuallyPeriodicWord, support_bound: int, position_bound: int
) -> list[EventuallyPeriodicWord]:
    """Words differing from x in at most support_bound of the first
    position_bound letters, deduplicated by canonical form."""
    if support_bound < 0 or position_bound < 0:
        raise ValueError("bounds must be nonnegative")
    p = position_bound
    base = [x.letter_at(i) for i in range(p)]
    if p >= len(x.u):
        tail_u, tail_w = "", x.w[(p - len(x.u)) % len(x.w):] + x.w[: (p - len(x.u)) % len(x.w)]
    else:
        tail_u, tail_w = x.u[p:], x.w
    out = {x}
    for size in range(1, min(support_bound, p) + 1):
        for positions in itertools.combinations(range(p), size):
            pools = [
                [c for c in range(x.k) if c != base[i]] for i in positions
            ]
            for choice in itertools.product(*pools):
                letters = list(base)
                for i, c in zip(positions, choice):
                    letters[i] = c
                prefix = "".join(map(str, letters))
                out.add(canonicalize(prefix + tail_u, tail_w, x.k))
    return sorted(out, key=lambda v: (len(v.u), v.u, v.w))


# ---------------------------------------------------------------------------
# finite truncated models


@dataclass(frozen=True)
class TruncatedModel:
    """Length-n words over k letters modulo agreement on positions >= t.

    Classes are suffix fibers: k^(n-t) of them, k^t points each, unless
    the carrier was restricted first. The threshold is a modeling dial:
    t = 0 collapses to equality and t = n to a single class.
    """

    k: int
    n: int
    t: int
    words: tuple[str, ...]
    quotient: FiniteQuotient
    restricted: bool = False

    def word_index(self, word: str) -> int:
        return self.words.index(word)

    def suffix_of(self, word: str) -> str:
        return word[self.t:]

    def class_suffix(self, q: int) -> str:
        return self.suffix_of(self.words[self.quotient.rep(q)])

    def class_of_word(self, word: str) -> int:
        return self.quotient.project(self.word_index(word))


def _all_words(k: int, n: int) -> list[str]:
    return ["".join(map(str, tup)) for tup in itertools.product(range(k), repeat=n)]


def _suffix_partition(words, t: int) -> Partition:
    by_suffix: dict[str, list[int]] = {}
    for i, word in enumerate(words):
        by_suffix.setdefault(word[t:], []).append(i)
    return Partition.from_blocks(len(words), list(by_suffix.values()))


def _check_model_params(k: int, n: int, t: int):
    if not 2 <= k <= 10:
        raise BadParameters(f"alphabet size {k} outside 2..10")
    if n < 1:
        raise BadParameters(f"word length {n} must be positive")
    if not 0 <= t < n:
        raise BadParameters(f"threshold {t} outside 0..{n - 1}")


def make_truncated_model(k: int, n: int, t: int) -> TruncatedModel:
    _check_model_params(k, n, t)
    words = tuple(_all_words(k, n))
    carrier = FiniteCarrier(len(words), labels=words)
    quotient = FiniteQuotient(carrier, _suffix_partition(words, t))
    return TruncatedModel(k, n, t, words, quotient)


def _fixed_by_some_nonidentity(word: str, k: int) -> bool:
    for sigma in itertools.permutations(range(k)):
        if sigma == tuple(range(k)):
            continue
        if all(sigma[int(c)] == int(c) for c in word):
            return True
    return False


def make_restricted_model(k: int, n: int, t: int) -> TruncatedModel:
    """Truncated model keeping only words whose suffix no nonidentity
    letter permutation fixes; whole suffix fibers survive or drop, and
    the S_k action stays within the remaining carrier."""
    _check_model_params(k, n, t)
    words = tuple(
        w for w in _all_words(k, n) if not _fixed_by_some_nonidentity(w[t:], k)
    )
    if not words:
        raise BadParameters(
            f"no suffix over {k} letters escapes every nonidentity permutation"
        )
    carrier = FiniteCarrier(len(words), labels=words)
    quotient = FiniteQuotient(carrier, _suffix_partition(words, t))
    return TruncatedModel(k, n, t, words, quotient, restricted=True)


def _word_image(perm, word: str) -> str:
    return "".join(str(perm[int(c)]) for c in word)


def letter_action(model: TruncatedModel) -> GroupAction:
    """The full symmetric group acting letterwise on quotient classes."""
    group = FiniteGroup.symmetric(model.k)
    maps = []
    for a in group.elements():
        perm = group.permutation_of(a)
        row = []
        for q in model.quotient.points():
            image = _word_image(perm, model.words[model.quotient.rep(q)])
            row.append(model.class_of_word(image))
        maps.append(tuple(row))
    return GroupAction(group, model.quotient.size, tuple(maps))


def carrier_letter_action(model: TruncatedModel) -> GroupAction:
    """The same action before projecting, on carrier points."""
    group = FiniteGroup.symmetric(model.k)
    maps = []
    for a in group.elements():
        perm = group.permutation_of(a)
        maps.append(
            tuple(model.word_index(_word_image(perm, w)) for w in model.words)
        )
    return GroupAction(group, len(model.words), tuple(maps))


# ---------------------------------------------------------------------------
# packaged instances


@dataclass
class GalleryInstance:
    """A built example: parameters, headline values, and pass/fail checks."""

    name: str
    params: dict
    summary: dict
    checks: dict[str, bool]
    data: dict

    @property
    def ok(self) -> bool:
        return all(self.checks.values())


def _sym_indices(k: int, predicate) -> list[int]:
    perms = sorted(itertools.permutations(range(k)))
    return [i for i, p in enumerate(perms) if predicate(p)]


def _gallery_ex34(k: int, n: int, t: int) -> GalleryInstance:
    model = make_truncated_model(k, n, t)
    if k != 2:
        raise BadParameters("two letters required for the flip instance")
    act = letter_action(model)
    free = freeness_witness(act) is None
    orbit = orbit_equivalence(act)
    f = index2_involution(orbit)
    squares = all(f[f[x]] == x for x in range(orbit.n))
    regen = generate_equivalence(orbit.n, [f])[0] == orbit
    return GalleryInstance(
        name="ex34",
        params={"k": k, "n": n, "t": t},
        summary={
            "classes": model.quotient.size,
            "orbit_classes": orbit.num_classes,
            "index": index_over(orbit),
        },
        checks={
            "action_free": free,
            "index_is_2": index_over(orbit) == 2,
            "involution_squares_to_identity": squares,
            "involution_generates_orbit": regen,
        },
        data={"model": model, "action": act, "orbit": orbit, "involution": f},
    )


def _gallery_ex35(k: int, n: int, t: int) -> GalleryInstance:
    base = make_truncated_model(k, n, t)
    if k != 2:
        raise BadParameters("two letters required for the flip instance")
    flip = (1, 0)
    m = len(base.words)
    # two sides: carrier index = side * m + word index, side 0 first
    labels = tuple(
        f"{w}:{side}" for side in (0, 1) for w in base.words
    )
    carrier = FiniteCarrier(2 * m, labels=labels)

    def suffix(i):
        return base.suffix_of(base.words[i % m])

    def flip_suffix(s):
        return _word_image(flip, s)

    # side 0 joins each suffix fiber with its flipped mate; side 1 keeps
    # plain suffix fibers
    eq_pairs = []
    for i in range(m):
        for j in range(m):
            if suffix(i) == suffix(j):
                eq_pairs.append((i, j))
                eq_pairs.append((m + i, m + j))
            if suffix(i) == flip_suffix(suffix(j)):
                eq_pairs.append((i, j))
    fine = Partition.from_pairs(2 * m, eq_pairs)
    space = FiniteQuotient(carrier, fine)

    # the coarse relation ignores the side entirely
    coarse_pairs = [
        (i, j)
        for i in range(2 * m)
        for j in range(2 * m)
        if suffix(i) == suffix(j) or suffix(i) == flip_suffix(suffix(j))
    ]
    coarse = Partition.from_pairs(2 * m, coarse_pairs)
    over = Partition.from_pairs(
        space.size,
        [
            (space.project(i), space.project(j))
            for i in range(2 * m)
            for j in range(2 * m)
            if coarse.same(i, j)
        ],
    )

    # dropping to side 0 is constant on each coarse class
    phi = {
        q: space.project(space.rep(q) % m) for q in space.points()
    }
    try:
        transversal = selector_to_transversal(phi, over)
        selector_ok = True
    except Exception:
        transversal, selector_ok = frozenset(), False
    idx = index_over(over)
    return GalleryInstance(
        name="ex35",
        params={"k": k, "n": n, "t": t},
        summary={
            "carrier_points": 2 * m,
            "classes": space.size,
            "index": idx,
            "transversal": tuple(sorted(transversal)),
        },
        checks={"index_is_3": idx == 3, "selector_valid": selector_ok},
        data={"space": space, "over": over, "selector": phi, "base": base},
    )


def _gallery_ex36(k: int, n: int, t: int) -> GalleryInstance:
    if k != 3:
        raise BadParameters("three letters required for this instance")
    model = make_restricted_model(k, n, t)
    act = letter_action(model)
    free = freeness_witness(act) is None
    big = orbit_equivalence(act)

    swap01 = _sym_indices(k, lambda p: p == (1, 0, 2))[0]
    delta = (0, swap01)
    sub = act.subaction(delta)
    small = orbit_equivalence(sub)

    # count of small classes inside each big class
    over = Partition.from_pairs(
        small.num_classes,
        [
            (small.class_of[x], small.class_of[y])
            for x in range(act.n)
            for y in range(act.n)
            if big.same(x, y)
        ],
    )
    norm = normalizer(act.group, delta)
    nsub = act.subaction(norm)
    en = orbit_equivalence(nsub)
    excess = excess_domain(big, en)
    return GalleryInstance(
        name="ex36",
        params={"k": k, "n": n, "t": t},
        summary={
            "classes": model.quotient.size,
            "index": index_over(over),
            "normalizer": tuple(act.group.labels[a] for a in norm),
            "excess_size": len(excess),
        },
        checks={
            "action_free": free,
            "index_is_3": index_over(over) == 3,
            "normalizer_is_delta": norm == delta,
            "excess_nonempty": len(excess) > 0,
        },
        data={
            "model": model,
            "action": act,
            "orbit": big,
            "suborbit": small,
            "sub": delta,
            "normalizer": norm,
            "excess": excess,
        },
    )


def _gallery_ex37(k: int, n: int, t: int) -> GalleryInstance:
    if k != 3:
        raise BadParameters("three letters required for this instance")
    model = make_truncated_model(k, n, t)
    act = letter_action(model)
    rotations = _sym_indices(k, lambda p: p in ((0, 1, 2), (1, 2, 0), (2, 0, 1)))
    sub = act.subaction(rotations)
    free = freeness_witness(sub) is None
    coc = cocycle_from_free_action(sub)
    report = verify_cocycle(coc)
    orbit = orbit_equivalence(sub)

    # one transposition per orbit: swap a point with its image under the
    # first rotation, fix the third point
    f = {}
    for block in orbit.blocks:
        x = block[0]
        y = sub.act(1, x)
        f[x], f[y] = y, x
        for z in block:
            if z not in f:
                f[z] = z
    fibers = involution_fiber_report(coc, f)
    inv_ok = all(
        b == sub.group.inv(a) for a, b in fibers["mapping"].items()
    )
    return GalleryInstance(
        name="ex37",
        params={"k": k, "n": n, "t": t},
        summary={
            "classes": model.quotient.size,
            "fiber_sizes": fibers["fibers"],
            "fiber_mapping": fibers["mapping"],
        },
        checks={
            "action_free": free,
            "cocycle_valid": report.ok,
            "fibers_swap_by_inverse": inv_ok,
        },
        data={
            "model": model,
            "action": sub,
            "cocycle": coc,
            "involution": f,
            "fibers": fibers,
        },
    )


def rotation_fiber_report(instance: GalleryInstance, f: dict[int, int]) -> dict:
    """Fiber bookkeeping for a caller-supplied involution on ex37."""
    return involution_fiber_report(instance.data["cocycle"], f)


def _gallery_et_shift() -> GalleryInstance:
    ambient = IntSet.all_integers()
    rel = IntBlockRelation.make([ambient], ambient=ambient)
    phis = [
        PiecewiseTranslation.identity(ambient),
        PiecewiseTranslation.translation(ambient, 1),
        PiecewiseTranslation.translation(ambient, -1),
    ]
    g0 = PiecewiseTranslation([(IntSet.ray_up(0), 1)])
    psis = psi_split_int(phis)
    g = greedy_extend_int(g0, psis, ambient, rel=rel)
    maximal = maximality_witness_int(g, rel) is None
    levels = levels_int(g, rel)
    pair = cover_int(levels)
    gp, gpp = pair.first, pair.second
    cover_ok = (
        g0.graph_subset_witness(gp, gpp) is None
        and g0.inverse().graph_subset_witness(gp, gpp) is None
        and g.graph_subset_witness(gp, gpp) is None
        and g.inverse().graph_subset_witness(gp, gpp) is None
    )
    bij_ok = all(
        h.domain() == ambient and h.range_set() == ambient and h.is_injective()
        for h in (gp, gpp)
    )
    within_ok = (
        rel.graph_within_witness(gp) is None
        and rel.graph_within_witness(gpp) is None
    )
    return GalleryInstance(
        name="et_shift",
        params={},
        summary={
            "g": str(g),
            "first_level": str(levels.positive.level(1)),
            "acceleration": levels.positive.accel,
            "zero_part": str(levels.zero),
            "cover_first": str(gp),
            "cover_second": str(gpp),
        },
        checks={
            "greedy_maximal": maximal,
            "cover_contains_seed": cover_ok,
            "cover_bijections": bij_ok,
            "cover_within_relation": within_ok,
        },
        data={
            "relation": rel,
            "seed": g0,
            "maps": phis,
            "extension": g,
            "levels": levels,
            "cover": pair,
        },
    )


_GALLERY_DEFAULTS = {
    "ex34": (2, 3, 1),
    "ex35": (2, 3, 1),
    "ex36": (3, 3, 1),
    "ex37": (3, 3, 1),
}


def example_gallery(
    name: str, k: int | None = None, n: int | None = None, t: int | None = None
) -> GalleryInstance:
    """Build a packaged instance by name; parameters override defaults."""
    if name == "et_shift":
        return _gallery_et_shift()
    if name not in _GALLERY_DEFAULTS:
        known = ", ".join(sorted(_GALLERY_DEFAULTS) + ["et_shift"])
        raise UnknownExample(f"no example {name!r}; known: {known}")
    dk, dn, dt = _GALLERY_DEFAULTS[name]
    k, n, t = k or dk, n or dn, t if t is not None else dt
    builder = {
        "ex34": _gallery_ex34,
        "ex35": _gallery_ex35,
        "ex36": _gallery_ex36,
        "ex37": _gallery_ex37,
    }[name]
    return builder(k, n, t)
