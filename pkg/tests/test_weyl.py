"""Weyl group layer: orders, descents, parabolics, classes."""

import pytest

from heckecells.weyl import weyl_group

ORDERS = {"A1": 2, "A2": 6, "B2": 8, "G2": 12, "A3": 24, "B3": 48}


@pytest.mark.parametrize("typ,order", sorted(ORDERS.items()))
def test_group_order(typ, order):
    assert weyl_group(typ).order == order


@pytest.mark.parametrize("typ", ["A2", "B2", "G2", "A3"])
def test_longest_element(typ):
    g = weyl_group(typ)
    w0 = g.longest_element()
    n_refl = max(g.length[w] for w in range(g.order))
    assert g.length[w0] == n_refl
    # w0 conjugation permutes the generators; multiplication by w0
    # reverses the Bruhat order on lengths
    for w in range(g.order):
        assert g.length[g.mult(w0, w)] == g.length[w0] - g.length[w]


@pytest.mark.parametrize("typ", ["A2", "B2", "A3"])
def test_descents_and_inverse(typ):
    g = weyl_group(typ)
    for w in range(g.order):
        assert g.left_desc[w] == g.right_desc[g.inverse[w]]
        for s in range(g.rank):
            down = g.length[g.mult(g.gen(s), w)] < g.length[w]
            assert bool(g.left_desc[w] & (1 << s)) == down


def test_words_are_reduced_and_multiply():
    g = weyl_group("B2")
    for w in range(g.order):
        word = g.words[w]
        assert len(word) == g.length[w]
        acc = 0  # identity
        for s in word:
            acc = g.mult(acc, g.gen(s))
        assert acc == w


@pytest.mark.parametrize(
    "typ,lam,index",
    [
        ("A2", (0,), 3),
        ("A2", (), 6),
        ("A3", (0, 1), 4),
        ("A3", (0, 2), 6),
        ("B2", (1,), 4),
    ],
)
def test_parabolic_index(typ, lam, index):
    g = weyl_group(typ)
    assert g.order == index * len(g.parabolic(lam))
    assert len(g.min_coset_reps(lam)) == index


CLASS_COUNTS = {"A1": 2, "A2": 3, "B2": 5, "G2": 6, "A3": 5}


@pytest.mark.parametrize("typ,count", sorted(CLASS_COUNTS.items()))
def test_conjugacy_class_count(typ, count):
    g = weyl_group(typ)
    classes = g.conjugacy_classes()
    assert len(classes) == count
    assert sum(len(c) for c in classes) == g.order
    # every element is conjugate to its inverse (rational character theory)
    for cls in classes:
        assert sorted(g.inverse[w] for w in cls) == list(cls)


def test_bruhat_order_sanity():
    g = weyl_group("A2")
    w0 = g.longest_element()
    for w in range(g.order):
        assert g.bruhat_leq(0, w)
        assert g.bruhat_leq(w, w0)
    assert not g.bruhat_leq(g.gen(0), g.gen(1))


def test_parse_format_roundtrip():
    g = weyl_group("A3")
    for w in range(g.order):
        assert g.parse_element(g.format_element(w)) == w
