"""Effective carriers: finite index sets and semilinear subsets of the integers.

An IntSet is a finite union of arithmetic-progression pieces: finite
segments, upward rays and downward rays.  Construction always normalizes
to a canonical form, so two IntSets are equal as point sets exactly when
their piece tuples compare equal.

The normal form is computed from the point set alone.  Membership of a
semilinear set is eventually periodic in both directions; we find the
minimal eventual periods, the tightest thresholds where the periodic
zones start, and an explicit middle.  Globally periodic sets (including
the empty set and all of Z) collapse to a residue-set description.

A PiecewiseTranslation is a partial map on Z given by finitely many
disjoint IntSet domains, each translated by a fixed offset.  These are
closed under restriction, composition, disjoint union and (for injective
maps) inversion, which is what the partial-injection calculus needs.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from math import gcd, inf, lcm
from typing import Iterable, Iterator

from .errors import NotInjective

# default probe window for pointwise cross-checks
WINDOW = 64


@dataclass(frozen=True)
class Piece:
    """One arithmetic progression: a segment or a ray.

    length is None for rays; down selects the ray direction.  Finite
    pieces are always stored ascending.
    """

    start: int
    stride: int
    length: int | None
    down: bool = False

    def __post_init__(self):
        if self.stride < 1:
            raise ValueError(f"stride must be positive, got {self.stride}")
        if self.length is not None:
            if self.length < 1:
                raise ValueError(f"length must be positive, got {self.length}")
            if self.down:
                raise ValueError("finite pieces are stored ascending")

    def __contains__(self, x: int) -> bool:
        d = x - self.start
        if self.down:
            return d <= 0 and d % self.stride == 0
        if self.length is None:
            return d >= 0 and d % self.stride == 0
        return 0 <= d <= (self.length - 1) * self.stride and d % self.stride == 0

    def translate(self, c: int) -> "Piece":
        return Piece(self.start + c, self.stride, self.length, self.down)

    @property
    def min(self) -> int | None:
        if self.down:
            return None
        return self.start

    @property
    def max(self) -> int | None:
        if self.down:
            return self.start
        if self.length is None:
            return None
        return self.start + (self.length - 1) * self.stride


def _piece_key(p: Piece):
    kind = 0 if p.down else (2 if p.length is None else 1)
    return (kind, p.start, p.stride, p.length if p.length is not None else -1)


# ---------------------------------------------------------------------------
# interval lists: sorted disjoint (lo, hi) with None as -/+ infinity,
# used per residue class during set algebra and normalization


def _iv_norm(ivs):
    def lo_key(iv):
        lo = iv[0]
        return (0, 0) if lo is None else (1, lo)

    out = []
    for lo, hi in sorted(ivs, key=lo_key):
        if out:
            plo, phi = out[-1]
            # adjacent lattice intervals merge: phi + 1 >= lo
            if phi is None or (lo is not None and lo <= phi + 1):
                if phi is not None and (hi is None or hi > phi):
                    out[-1] = (plo, hi)
                continue
        out.append((lo, hi))
    return out


def _iv_complement(ivs):
    if not ivs:
        return [(None, None)]
    out = []
    first_lo = ivs[0][0]
    if first_lo is not None:
        out.append((None, first_lo - 1))
    for (lo1, hi1), (lo2, hi2) in zip(ivs, ivs[1:]):
        # hi1 and lo2 are finite by disjointness and sorting
        out.append((hi1 + 1, lo2 - 1))
    last_hi = ivs[-1][1]
    if last_hi is not None:
        out.append((last_hi + 1, None))
    return out


def _iv_intersect(a, b):
    out = []
    for lo1, hi1 in a:
        for lo2, hi2 in b:
            lo = lo1 if lo2 is None else (lo2 if lo1 is None else max(lo1, lo2))
            hi = hi1 if hi2 is None else (hi2 if hi1 is None else min(hi1, hi2))
            if lo is None or hi is None or lo <= hi:
                out.append((lo, hi))
    return _iv_norm(out)


def _iv_union(a, b):
    return _iv_norm(list(a) + list(b))


def _iv_difference(a, b):
    return _iv_intersect(a, _iv_complement(_iv_norm(list(b))))


# ---------------------------------------------------------------------------


def _divisors(n: int):
    out = [d for d in range(1, n + 1) if n % d == 0]
    return out


def _min_shift_period(residues: set[int], p: int):
    """Minimal q dividing p with residues + q == residues mod p, plus the folded set."""
    for q in _divisors(p):
        if all((r + q) % p in residues for r in residues):
            return q, {r % q for r in residues}
    return p, set(residues)  # q = p always works; unreachable fallback


def _greedy_segments(points: list[int]) -> list[Piece]:
    """Canonical decomposition of a finite sorted point list into segments.

    Deterministic function of the point set: each run takes its stride
    from the gap to the immediate next remaining point.
    """
    out = []
    i = 0
    n = len(points)
    while i < n:
        if i + 1 == n:
            out.append(Piece(points[i], 1, 1))
            break
        d = points[i + 1] - points[i]
        j = i + 1
        while j + 1 < n and points[j + 1] - points[j] == d:
            j += 1
        run = j - i + 1
        out.append(Piece(points[i], d if run > 1 else 1, run))
        i = j + 1
    return out


def _raw_contains(pieces, x: int) -> bool:
    return any(x in p for p in pieces)


def _canonical_pieces(raw: tuple[Piece, ...]) -> tuple[Piece, ...]:
    if not raw:
        return ()
    p = lcm(*[pc.stride for pc in raw])
    per_res = {r: ivs for r, ivs in _decompose_mod(raw, p).items() if ivs}

    up_res = {r for r, ivs in per_res.items() if ivs and ivs[-1][1] is None}
    down_res = {r for r, ivs in per_res.items() if ivs and ivs[0][0] is None}

    p_plus, r_plus = _min_shift_period(up_res, p)
    p_minus, r_minus = _min_shift_period(down_res, p)

    feats = []
    for r, ivs in per_res.items():
        for lo, hi in ivs:
            if lo is not None:
                feats.append(r + p * lo)
            if hi is not None:
                feats.append(r + p * hi)
    b_lo = min(feats, default=0)
    b_hi = max(feats, default=0)

    def up_pat(x):
        return (x % p_plus) in r_plus

    def down_pat(x):
        return (x % p_minus) in r_minus

    def mem(x):
        return _raw_contains(raw, x)

    if p_plus == p_minus and r_plus == r_minus:
        if all(
            mem(x) == up_pat(x)
            for x in range(b_lo - p - p_plus, b_hi + p + p_plus + 1)
        ):
            out = []
            for r in sorted(r_plus):
                out.append(Piece(r, p_plus, None, down=False))
                out.append(Piece(r - p_plus, p_plus, None, down=True))
            return tuple(sorted(out, key=_piece_key))

    guard_lo = b_lo - 2 * p - 2 * p_plus - 4
    guard_hi = b_hi + 2 * p + 2 * p_minus + 4

    t = b_hi + p + 1
    while mem(t - 1) == up_pat(t - 1):
        t -= 1
        assert t > guard_lo, "upward scan left the feature window"
    t_plus = t

    t = b_lo - p - 1
    while mem(t + 1) == down_pat(t + 1):
        t += 1
        assert t < guard_hi, "downward scan left the feature window"
    t_minus = min(t, t_plus - 1)

    middle = [x for x in range(t_minus + 1, t_plus) if mem(x)]

    out = []
    for r in sorted(r_minus):
        anchor = t_minus - ((t_minus - r) % p_minus)
        out.append(Piece(anchor, p_minus, None, down=True))
    out.extend(_greedy_segments(middle))
    for r in sorted(r_plus):
        anchor = t_plus + ((r - t_plus) % p_plus)
        out.append(Piece(anchor, p_plus, None, down=False))
    return tuple(sorted(out, key=_piece_key))


class IntSet:
    """A semilinear subset of Z in canonical form."""

    __slots__ = ("pieces",)

    def __init__(self, pieces: Iterable[Piece] = ()):
        object.__setattr__(self, "pieces", _canonical_pieces(tuple(pieces)))

    def __setattr__(self, *a):
        raise AttributeError("IntSet is immutable")

    # -- constructors

    @classmethod
    def empty(cls) -> "IntSet":
        return cls(())

    @classmethod
    def of(cls, *points: int) -> "IntSet":
        return cls(Piece(x, 1, 1) for x in set(points))

    @classmethod
    def segment(cls, a: int, b: int) -> "IntSet":
        if b < a:
            return cls.empty()
        return cls((Piece(a, 1, b - a + 1),))

    @classmethod
    def progression(cls, a: int, d: int, length: int) -> "IntSet":
        if length == 0:
            return cls.empty()
        if d == 0:
            if length != 1:
                raise ValueError("zero stride needs length 1")
            return cls.of(a)
        if d < 0:
            a, d = a + (length - 1) * d, -d
        return cls((Piece(a, d, length),))

    @classmethod
    def ray_up(cls, a: int, d: int = 1) -> "IntSet":
        if d < 1:
            raise ValueError("ray stride must be positive")
        return cls((Piece(a, d, None, down=False),))

    @classmethod
    def ray_down(cls, a: int, d: int = 1) -> "IntSet":
        if d < 1:
            raise ValueError("ray stride must be positive")
        return cls((Piece(a, d, None, down=True),))

    @classmethod
    def all_integers(cls) -> "IntSet":
        return cls((Piece(0, 1, None), Piece(-1, 1, None, down=True)))

    # -- queries

    def __contains__(self, x: int) -> bool:
        return _raw_contains(self.pieces, x)

    def __eq__(self, other) -> bool:
        return isinstance(other, IntSet) and self.pieces == other.pieces

    def __hash__(self):
        return hash(self.pieces)

    def is_empty(self) -> bool:
        return not self.pieces

    def is_finite(self) -> bool:
        return all(pc.length is not None for pc in self.pieces)

    def size(self):
        """Number of elements; math.inf when some piece is a ray."""
        if not self.is_finite():
            return inf
        return sum(pc.length for pc in self.pieces)

    def elements(self) -> list[int]:
        if not self.is_finite():
            raise ValueError("infinite IntSet")
        out = []
        for pc in self.pieces:
            out.extend(pc.start + i * pc.stride for i in range(pc.length))
        return sorted(out)

    def window(self, lo: int = -WINDOW, hi: int = WINDOW) -> list[int]:
        return [x for x in range(lo, hi + 1) if x in self]

    def min(self) -> int | None:
        """Least element, None when unbounded below; raises on empty."""
        if not self.pieces:
            raise ValueError("empty IntSet")
        mins = [pc.min for pc in self.pieces]
        if any(m is None for m in mins):
            return None
        return min(mins)

    def max(self) -> int | None:
        if not self.pieces:
            raise ValueError("empty IntSet")
        maxs = [pc.max for pc in self.pieces]
        if any(m is None for m in maxs):
            return None
        return max(maxs)

    def closest_to_zero(self) -> int:
        """Element of least absolute value, ties to the nonnegative one."""
        if not self.pieces:
            raise ValueError("empty IntSet")
        best = None
        for pc in self.pieces:
            for cand in _piece_near_zero(pc):
                key = (abs(cand), 0 if cand >= 0 else 1)
                if best is None or key < best[0]:
                    best = (key, cand)
        return best[1]

    # -- algebra

    def _binary(self, other: "IntSet", op) -> "IntSet":
        strides = [pc.stride for pc in self.pieces] + [pc.stride for pc in other.pieces]
        p = lcm(*strides) if strides else 1
        mine = _decompose_mod(self.pieces, p)
        theirs = _decompose_mod(other.pieces, p)
        out = []
        for r in range(p):
            ivs = op(mine.get(r, []), theirs.get(r, []))
            out.extend(_rebuild_residue(r, p, ivs))
        return IntSet(out)

    def union(self, other: "IntSet") -> "IntSet":
        return self._binary(other, _iv_union)

    def intersect(self, other: "IntSet") -> "IntSet":
        return self._binary(other, _iv_intersect)

    def difference(self, other: "IntSet") -> "IntSet":
        return self._binary(other, _iv_difference)

    __or__ = union
    __and__ = intersect
    __sub__ = difference

    def complement_in(self, ambient: "IntSet") -> "IntSet":
        return ambient.difference(self)

    def translate(self, c: int) -> "IntSet":
        return IntSet(pc.translate(c) for pc in self.pieces)

    def is_subset(self, other: "IntSet") -> bool:
        return self.difference(other).is_empty()

    def translates_union(self, c: int) -> "IntSet":
        """Union of self + k*c over all k >= 0 (exact; c may be negative)."""
        if c == 0 or self.is_empty():
            return self
        out = []
        for pc in self.pieces:
            out.extend(_piece_translates_union(pc, c))
        return IntSet(out)

    def __repr__(self):
        return f"IntSet({format_intset(self)!r})"

    def __str__(self):
        return format_intset(self)


def _piece_near_zero(pc: Piece) -> list[int]:
    """Candidate elements of a piece closest to zero."""
    d = pc.stride
    if pc.down:
        if pc.start <= 0:
            return [pc.start]
        k = pc.start // d  # largest k with start - k*d >= something near 0
        cands = {pc.start - k * d, pc.start - (k + 1) * d, pc.start % d}
        return [x for x in cands if x in pc]
    if pc.length is None:
        if pc.start >= 0:
            return [pc.start]
        k = (-pc.start) // d
        cands = {pc.start + k * d, pc.start + (k + 1) * d}
        return [x for x in cands if x in pc]
    lo, hi = pc.start, pc.start + (pc.length - 1) * d
    if lo >= 0:
        return [lo]
    if hi <= 0:
        return [hi]
    k = (-lo) // d
    cands = {lo + k * d, lo + (k + 1) * d}
    return [x for x in cands if x in pc]


def _piece_translates_union(pc: Piece, c: int) -> list[Piece]:
    """Pieces for union over k >= 0 of (pc + k*c), exact."""
    if c < 0:
        # mirror: negate, compute with -c, negate back
        mirrored = _piece_translates_union(_negate_piece(pc), -c)
        return [_negate_piece(q) for q in mirrored]
    d = pc.stride
    if pc.length is not None:
        # each member spawns an upward ray of stride c
        return [
            Piece(pc.start + i * d, c, None)
            for i in range(pc.length)
        ]
    if pc.down:
        # union over k of a down-ray moving up: the full lattice mod gcd
        e = gcd(d, c)
        return [Piece(pc.start, e, None), Piece(pc.start - e, e, None, down=True)]
    # upward ray: start + {j*d + k*c}, numerical-semigroup closure
    e = gcd(d, c)
    pp, qq = d // e, c // e
    bound = e * (pp - 1) * (qq - 1)  # all multiples of e >= bound are hit
    reach = [False] * (bound // e + 1)
    reach[0] = True
    for idx in range(len(reach)):
        if not reach[idx]:
            continue
        v = idx * e
        for step in (d, c):
            nxt = v + step
            if nxt <= bound:
                reach[nxt // e] = True
    out = [Piece(pc.start + bound, e, None)]
    sporadic = [pc.start + i * e for i in range(bound // e) if reach[i]]
    out.extend(Piece(x, 1, 1) for x in sporadic)
    return out


def _negate_piece(pc: Piece) -> Piece:
    if pc.down:
        return Piece(-pc.start, pc.stride, None, down=False)
    if pc.length is None:
        return Piece(-pc.start, pc.stride, None, down=True)
    return Piece(-(pc.start + (pc.length - 1) * pc.stride), pc.stride, pc.length)


def _decompose_mod(pieces, p: int) -> dict[int, list]:
    per: dict[int, list] = {}
    for pc in pieces:
        d = pc.stride
        step = p // d
        if pc.down:
            for i0 in range(step):
                x0 = pc.start - i0 * d
                r = x0 % p
                y0 = (x0 - r) // p
                per.setdefault(r, []).append((None, y0))
        elif pc.length is None:
            for i0 in range(step):
                x0 = pc.start + i0 * d
                r = x0 % p
                y0 = (x0 - r) // p
                per.setdefault(r, []).append((y0, None))
        else:
            for i0 in range(min(step, pc.length)):
                count = (pc.length - 1 - i0) // step + 1
                x0 = pc.start + i0 * d
                r = x0 % p
                y0 = (x0 - r) // p
                per.setdefault(r, []).append((y0, y0 + count - 1))
    return {r: _iv_norm(ivs) for r, ivs in per.items()}


def _rebuild_residue(r: int, p: int, ivs) -> list[Piece]:
    out = []
    for lo, hi in ivs:
        if lo is None and hi is None:
            out.append(Piece(r, p, None))
            out.append(Piece(r - p, p, None, down=True))
        elif lo is None:
            out.append(Piece(r + p * hi, p, None, down=True))
        elif hi is None:
            out.append(Piece(r + p * lo, p, None))
        else:
            out.append(Piece(r + p * lo, p, hi - lo + 1))
    return out


# ---------------------------------------------------------------------------
# textual format


_TERM_RE = re.compile(
    r"""^\s*(?:
        (?P<prog>(?P<pa>-?\d+)\s*:\s*(?P<sign>[+-])\s*(?P<pd>\d+)\s*\*\s*(?P<pl>\d+|inf))
      | (?P<seg>(?P<sa>-?\d+)\s*\.\.\s*(?P<sb>-?\d+))
      | (?P<up>(?P<ua>-?\d+)\s*\.\.)
      | (?P<down>\.\.\s*(?P<da>-?\d+))
      | (?P<single>-?\d+)
    )\s*$""",
    re.VERBOSE,
)


def parse_intset(text: str) -> IntSet:
    """Parse the textual IntSet form; inverse of format_intset."""
    text = text.strip()
    if text in ("", "empty"):
        return IntSet.empty()
    pieces = []
    for term in text.split(";"):
        m = _TERM_RE.match(term)
        if not m:
            raise ValueError(f"bad IntSet term: {term.strip()!r}")
        if m.group("prog"):
            a = int(m.group("pa"))
            d = int(m.group("pd"))
            if d == 0:
                raise ValueError(f"zero stride in term {term.strip()!r}")
            neg = m.group("sign") == "-"
            if m.group("pl") == "inf":
                pieces.append(Piece(a, d, None, down=neg))
            else:
                length = int(m.group("pl"))
                if length == 0:
                    continue
                if neg:
                    pieces.append(Piece(a - (length - 1) * d, d, length))
                else:
                    pieces.append(Piece(a, d, length))
        elif m.group("seg"):
            a, b = int(m.group("sa")), int(m.group("sb"))
            if b < a:
                raise ValueError(f"descending segment {term.strip()!r}")
            pieces.append(Piece(a, 1, b - a + 1))
        elif m.group("up"):
            pieces.append(Piece(int(m.group("ua")), 1, None))
        elif m.group("down"):
            pieces.append(Piece(int(m.group("da")), 1, None, down=True))
        else:
            pieces.append(Piece(int(m.group("single")), 1, 1))
    return IntSet(pieces)


def format_intset(s: IntSet) -> str:
    if s.is_empty():
        return "empty"
    terms = []
    for pc in s.pieces:
        if pc.down:
            terms.append(f"..{pc.start}" if pc.stride == 1 else f"{pc.start}:-{pc.stride}*inf")
        elif pc.length is None:
            terms.append(f"{pc.start}.." if pc.stride == 1 else f"{pc.start}:+{pc.stride}*inf")
        elif pc.length == 1:
            terms.append(f"{pc.start}")
        elif pc.stride == 1:
            terms.append(f"{pc.start}..{pc.start + pc.length - 1}")
        else:
            terms.append(f"{pc.start}:+{pc.stride}*{pc.length}")
    return "; ".join(terms)


# ---------------------------------------------------------------------------


class PiecewiseTranslation:
    """Partial map on Z: finitely many disjoint IntSet domains, each shifted.

    Pieces with equal offsets are merged, so equality of canonical piece
    tuples is equality of graphs.
    """

    __slots__ = ("pieces",)

    def __init__(self, pieces: Iterable[tuple[IntSet, int]] = ()):
        by_offset: dict[int, IntSet] = {}
        for dom, c in pieces:
            if dom.is_empty():
                continue
            by_offset[c] = by_offset[c].union(dom) if c in by_offset else dom
        merged = tuple(sorted(by_offset.items()))
        doms = [d for _, d in merged]
        for i in range(len(doms)):
            for j in range(i + 1, len(doms)):
                both = doms[i].intersect(doms[j])
                if not both.is_empty():
                    x = both.closest_to_zero()
                    raise ValueError(f"overlapping domains at {x}")
        object.__setattr__(
            self, "pieces", tuple((d, c) for c, d in merged)
        )

    def __setattr__(self, *a):
        raise AttributeError("PiecewiseTranslation is immutable")

    @classmethod
    def identity(cls, ambient: IntSet | None = None) -> "PiecewiseTranslation":
        return cls(((ambient if ambient is not None else IntSet.all_integers(), 0),))

    @classmethod
    def empty(cls) -> "PiecewiseTranslation":
        return cls(())

    @classmethod
    def translation(cls, dom: IntSet, c: int) -> "PiecewiseTranslation":
        return cls(((dom, c),))

    # -- map structure

    def domain(self) -> IntSet:
        out = IntSet.empty()
        for d, _ in self.pieces:
            out = out.union(d)
        return out

    def range_set(self) -> IntSet:
        out = IntSet.empty()
        for d, c in self.pieces:
            out = out.union(d.translate(c))
        return out

    def offsets(self) -> dict[int, IntSet]:
        return {c: d for d, c in self.pieces}

    def get(self, x: int) -> int | None:
        for d, c in self.pieces:
            if x in d:
                return x + c
        return None

    def __call__(self, x: int) -> int:
        y = self.get(x)
        if y is None:
            raise KeyError(x)
        return y

    def is_empty(self) -> bool:
        return not self.pieces

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PiecewiseTranslation) and self.pieces == other.pieces
        )

    def __hash__(self):
        return hash(self.pieces)

    # -- algebra

    def image(self, s: IntSet) -> IntSet:
        out = IntSet.empty()
        for d, c in self.pieces:
            out = out.union(d.intersect(s).translate(c))
        return out

    def preimage(self, s: IntSet) -> IntSet:
        out = IntSet.empty()
        for d, c in self.pieces:
            out = out.union(d.intersect(s.translate(-c)))
        return out

    def restrict(self, s: IntSet) -> "PiecewiseTranslation":
        return PiecewiseTranslation((d.intersect(s), c) for d, c in self.pieces)

    def corestrict(self, s: IntSet) -> "PiecewiseTranslation":
        """Restrict to the part whose values land in s."""
        return PiecewiseTranslation(
            (d.intersect(s.translate(-c)), c) for d, c in self.pieces
        )

    def compose(self, other: "PiecewiseTranslation") -> "PiecewiseTranslation":
        """self after other: x -> self(other(x))."""
        out = []
        for d2, c2 in other.pieces:
            for d1, c1 in self.pieces:
                dom = d2.intersect(d1.translate(-c2))
                if not dom.is_empty():
                    out.append((dom, c1 + c2))
        return PiecewiseTranslation(out)

    def union(self, other: "PiecewiseTranslation") -> "PiecewiseTranslation":
        """Union of graphs; domains must be disjoint."""
        both = self.domain().intersect(other.domain())
        if not both.is_empty():
            x = both.closest_to_zero()
            raise ValueError(f"domains overlap at {x}")
        return PiecewiseTranslation(tuple(self.pieces) + tuple(other.pieces))

    def injectivity_witness(self):
        """None if injective, else (x1, x2, y) with x1 != x2 mapping to y."""
        ps = self.pieces
        for i in range(len(ps)):
            for j in range(i + 1, len(ps)):
                (d1, c1), (d2, c2) = ps[i], ps[j]
                both = d1.translate(c1).intersect(d2.translate(c2))
                if not both.is_empty():
                    y = both.closest_to_zero()
                    return (y - c1, y - c2, y)
        return None

    def is_injective(self) -> bool:
        return self.injectivity_witness() is None

    def inverse(self) -> "PiecewiseTranslation":
        w = self.injectivity_witness()
        if w is not None:
            raise NotInjective(f"{w[0]} and {w[1]} both map to {w[2]}", witness=w)
        return PiecewiseTranslation((d.translate(c), -c) for d, c in self.pieces)

    def fixed_points(self) -> IntSet:
        for d, c in self.pieces:
            if c == 0:
                return d
        return IntSet.empty()

    def graph_minus(self, *others: "PiecewiseTranslation") -> "PiecewiseTranslation":
        """Pairs of self not present in any of the others (a partial map again)."""
        out = []
        for d, c in self.pieces:
            rest = d
            for o in others:
                od = o.offsets().get(c)
                if od is not None:
                    rest = rest.difference(od)
            out.append((rest, c))
        return PiecewiseTranslation(out)

    def graph_subset_witness(self, *others: "PiecewiseTranslation"):
        """None if graph(self) is covered by the union of the others, else (x, y)."""
        left = self.graph_minus(*others)
        for d, c in left.pieces:
            if not d.is_empty():
                x = d.closest_to_zero()
                return (x, x + c)
        return None

    def __repr__(self):
        return f"PiecewiseTranslation({format_ptmap(self)!r})"

    def __str__(self):
        return format_ptmap(self)


def parse_ptmap(text: str) -> PiecewiseTranslation:
    """Parse 'intset -> +c | intset -> -c | ...'; inverse of format_ptmap."""
    text = text.strip()
    if text in ("", "empty"):
        return PiecewiseTranslation.empty()
    pieces = []
    for part in text.split("|"):
        if "->" not in part:
            raise ValueError(f"bad map piece: {part.strip()!r}")
        dom_text, off_text = part.split("->", 1)
        off_text = off_text.strip()
        if not re.match(r"^[+-]?\d+$", off_text):
            raise ValueError(f"bad offset: {off_text!r}")
        pieces.append((parse_intset(dom_text), int(off_text)))
    return PiecewiseTranslation(pieces)


def format_ptmap(f: PiecewiseTranslation) -> str:
    if f.is_empty():
        return "empty"
    return " | ".join(
        f"{format_intset(d)} -> {c:+d}" for d, c in f.pieces
    )


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FiniteCarrier:
    """Points 0..size-1, with optional distinct display labels."""

    size: int
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.size < 0:
            raise ValueError("negative carrier size")
        if self.labels is not None:
            if len(self.labels) != self.size:
                raise ValueError("label count differs from size")
            if len(set(self.labels)) != self.size:
                raise ValueError("duplicate labels")

    def label_of(self, i: int) -> str:
        if self.labels is None:
            return str(i)
        return self.labels[i]

    def index_of(self, label: str) -> int:
        if self.labels is None:
            return int(label)
        return self.labels.index(label)

    def points(self) -> range:
        return range(self.size)


@dataclass(frozen=True)
class IntCarrier:
    """The integer line, or a declared semilinear ambient subset of it."""

    ambient: IntSet = IntSet.all_integers()
