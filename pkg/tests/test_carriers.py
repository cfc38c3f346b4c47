"""Semilinear subsets of the integer line and their partial translations.

Every operation is checked two ways: against frozen textual normal forms,
and against a brute-force window oracle that materialises sets as plain
Python sets over a bounded range.
"""

import math

import pytest
from hypothesis import given, settings, strategies as st

from qborel.carriers import (
    FiniteCarrier,
    IntSet,
    NotInjective,
    PiecewiseTranslation,
    format_intset,
    format_ptmap,
    parse_intset,
    parse_ptmap,
)

WIN = 80


def win(s, lo=-WIN, hi=WIN):
    return set(s.window(lo, hi))


# -- strategies ----------------------------------------------------------

atoms = st.one_of(
    st.builds(IntSet.segment, st.integers(-20, 20), st.integers(-20, 20)).filter(
        lambda s: not s.is_empty()
    ),
    st.builds(IntSet.ray_up, st.integers(-20, 20), st.integers(1, 5)),
    st.builds(IntSet.ray_down, st.integers(-20, 20), st.integers(1, 5)),
    st.builds(IntSet.progression, st.integers(-20, 20), st.integers(1, 5), st.integers(1, 6)),
    st.just(IntSet.empty()),
    st.just(IntSet.all_integers()),
)


def combine(children):
    return st.one_of(
        st.builds(lambda a, b: a.union(b), children, children),
        st.builds(lambda a, b: a.intersect(b), children, children),
        st.builds(lambda a, b: a.difference(b), children, children),
        st.builds(lambda a, c: a.translate(c), children, st.integers(-7, 7)),
    )


intsets = st.recursive(atoms, combine, max_leaves=6)


# -- normal form ---------------------------------------------------------

FROZEN = [
    (IntSet.segment(0, 4).union(IntSet.segment(5, 9)), "0..9"),
    (IntSet.ray_up(0, 2).union(IntSet.ray_up(1, 2)), "0.."),
    (IntSet.progression(0, 3, 4), "0:+3*4"),
    (IntSet.ray_down(-1).union(IntSet.ray_up(3)), "..-1; 3.."),
    (IntSet.all_integers().difference(IntSet.of(0)), "..-1; 1.."),
    (IntSet.ray_up(0, 2), "0:+2*inf"),
    (IntSet.ray_down(0, 2), "0:-2*inf"),
    (IntSet.of(3, 1, 7), "1:+2*2; 7"),
    (IntSet.empty(), "empty"),
    (IntSet.of(0).translates_union(3), "0:+3*inf"),
    (IntSet.segment(0, 4).translates_union(5), "0.."),
]


@pytest.mark.parametrize("s, text", FROZEN)
def test_frozen_normal_forms(s, text):
    assert format_intset(s) == text
    assert parse_intset(text) == s


def test_parse_reorders_and_merges():
    assert format_intset(parse_intset("5..; ..-3; 0:+2*3")) == "..-3; 0:+2*2; 4.."


@given(intsets)
def test_format_parse_round_trip(s):
    assert parse_intset(format_intset(s)) == s


@given(intsets, intsets)
def test_equal_windows_on_equal_sets(a, b):
    # canonical form makes syntactic equality the semantic one
    if a == b:
        assert win(a) == win(b)
    elif win(a, -300, 300) == win(b, -300, 300):
        # agree on a window far wider than any stored threshold: must be equal
        if all(abs(p.min if p.min is not None else 0) < 100 and
               abs(p.max if p.max is not None else 0) < 100 for p in a.pieces + b.pieces):
            assert a == b


# -- set algebra against the window oracle --------------------------------

@given(intsets, intsets)
def test_union_window(a, b):
    assert win(a.union(b)) == win(a) | win(b)


@given(intsets, intsets)
def test_intersect_window(a, b):
    assert win(a.intersect(b)) == win(a) & win(b)


@given(intsets, intsets)
def test_difference_window(a, b):
    assert win(a.difference(b)) == win(a) - win(b)


@given(intsets, st.integers(-10, 10))
def test_translate_window(s, c):
    assert win(s.translate(c), -WIN + 10, WIN - 10) == {
        x + c for x in win(s, -WIN - 10, WIN + 10)
    } & set(range(-WIN + 10, WIN - 9))


@given(intsets, intsets)
def test_subset_agrees_with_intersection(a, b):
    assert a.is_subset(b) == (a.intersect(b) == a)


@given(intsets)
def test_complement_partitions_the_line(s):
    c = s.complement_in(IntSet.all_integers())
    assert win(s) | win(c) == set(range(-WIN, WIN + 1))
    assert win(s) & win(c) == set()


@given(intsets, st.integers(-6, 6).filter(bool))
def test_translates_union_window(s, c):
    got = win(s.translates_union(c), -40, 40)
    base = win(s, -240, 240)
    want = set()
    for k in range(0, 80):
        want |= {x + k * c for x in base}
    assert got == want & set(range(-40, 41))


@given(intsets)
def test_size_and_finiteness(s):
    if s.is_finite():
        assert s.size() == len(s.elements())
        assert s.size() == len(win(s, -10**6, 10**6)) or s.size() == 0
    else:
        assert s.size() == math.inf
        with pytest.raises(ValueError):
            s.elements()


@given(intsets)
def test_min_max_closest(s):
    w = win(s, -500, 500)
    if s.is_empty():
        with pytest.raises(ValueError):
            s.min()
        with pytest.raises(ValueError):
            s.max()
        return
    if s.min() is not None and abs(s.min()) < 500:
        assert s.min() == min(w)
    if s.max() is not None and abs(s.max()) < 500:
        assert s.max() == max(w)
    if w:
        c = s.closest_to_zero()
        best = min(w, key=lambda x: (abs(x), -(x >= 0)))
        if abs(best) < 400:
            assert c == best


# -- piecewise translations ----------------------------------------------

ptmaps = st.lists(
    st.tuples(intsets, st.integers(-8, 8)), min_size=0, max_size=4
).map(
    lambda parts: _pt_of(parts)
)


def _pt_of(parts):
    f = PiecewiseTranslation.empty()
    for dom, c in parts:
        g = PiecewiseTranslation.translation(dom, c)
        # keep it a partial map: later parts only add where f is undefined
        g = g.restrict(f.domain().complement_in(IntSet.all_integers()))
        f = f.union(g)
    return f


def pt_dict(f, lo=-WIN, hi=WIN):
    return {x: f.get(x) for x in range(lo, hi + 1) if f.get(x) is not None}


def test_ptmap_text_round_trip():
    text = "..-1 -> +0 | 0.. -> +1"
    f = parse_ptmap(text)
    assert format_ptmap(f) == text
    assert f.get(-3) == -3 and f.get(4) == 5


@given(ptmaps)
def test_ptmap_format_parse_round_trip(f):
    assert parse_ptmap(format_ptmap(f)) == f


@given(ptmaps, intsets)
def test_restrict_corestrict_windows(f, s):
    d = pt_dict(f)
    r = pt_dict(f.restrict(s))
    assert r == {x: y for x, y in d.items() if x in win(s)}
    c = pt_dict(f.corestrict(s))
    assert c == {x: y for x, y in d.items() if y in win(s, -WIN - 8, WIN + 8)}


@given(ptmaps, ptmaps)
def test_compose_window(f, g):
    h = pt_dict(f.compose(g), -40, 40)
    gd = pt_dict(g, -60, 60)
    fd = pt_dict(f, -80, 80)
    want = {x: fd[gd[x]] for x in gd if gd[x] in fd}
    assert h == {x: y for x, y in want.items() if -40 <= x <= 40}


@given(ptmaps)
def test_inverse_of_injective(f):
    w = f.injectivity_witness()
    if w is not None:
        x1, x2, y = w
        assert x1 != x2 and f.get(x1) == f.get(x2) == y
        with pytest.raises(NotInjective):
            f.inverse()
        return
    inv = f.inverse()
    d = pt_dict(f, -60, 60)
    assert {y: x for x, y in d.items() if -40 <= y <= 40} == pt_dict(inv, -40, 40)


@given(ptmaps, ptmaps)
def test_union_requires_disjoint_domains(f, g):
    overlap = f.domain().intersect(g.domain())
    if not overlap.is_empty():
        with pytest.raises(ValueError):
            f.union(g)
    else:
        assert pt_dict(f.union(g)) == {**pt_dict(g), **pt_dict(f)}


@given(ptmaps, intsets)
def test_image_preimage_windows(f, s):
    d = pt_dict(f, -2 * WIN, 2 * WIN)
    sw = win(s, -2 * WIN, 2 * WIN)
    assert win(f.image(s), -WIN, WIN) == {y for x, y in d.items() if x in sw and -WIN <= y <= WIN}
    assert win(f.preimage(s), -WIN, WIN) == {
        x for x, y in d.items() if y in sw and -WIN <= x <= WIN
    }


@given(ptmaps)
def test_domain_range_fixed_points(f):
    d = pt_dict(f)
    assert win(f.domain()) == set(d)
    assert {y for y in d.values() if -WIN <= y <= WIN} <= win(f.range_set())
    assert win(f.fixed_points()) == {x for x, y in d.items() if x == y}


@given(ptmaps, ptmaps)
def test_graph_subset_witness(f, g):
    w = f.graph_subset_witness(g)
    fd, gd = pt_dict(f, -200, 200), pt_dict(g, -200, 200)
    inside = all(gd.get(x) == y for x, y in fd.items())
    if w is None:
        assert inside or not f.is_empty()  # witness may sit outside the window
        assert all(g.get(x) == y for x, y in fd.items())
    else:
        x, y = w
        assert f.get(x) == y and g.get(x) != y


@given(ptmaps, ptmaps)
def test_graph_minus_window(f, g):
    d = pt_dict(f.graph_minus(g))
    fd, gd = pt_dict(f), pt_dict(g)
    assert d == {x: y for x, y in fd.items() if gd.get(x) != y}


def test_identity_and_offsets():
    f = parse_ptmap("0..4 -> +2 | 10.. -> -1")
    assert f.offsets() == {2: IntSet.segment(0, 4), -1: IntSet.ray_up(10)}
    i = PiecewiseTranslation.identity(IntSet.segment(0, 3))
    assert pt_dict(i) == {0: 0, 1: 1, 2: 2, 3: 3}


# -- finite carrier -------------------------------------------------------

def test_finite_carrier_points_and_labels():
    c = FiniteCarrier(3, labels=("a", "b", "c"))
    assert list(c.points()) == [0, 1, 2]
    assert c.label_of(1) == "b" and c.index_of("b") == 1
    plain = FiniteCarrier(2)
    assert plain.label_of(1) == "1" and plain.index_of("0") == 0


def test_finite_carrier_validation():
    with pytest.raises(ValueError):
        FiniteCarrier(-1)
    with pytest.raises(ValueError):
        FiniteCarrier(2, labels=("x",))
