"""Cell partitions and invariants against independent oracles.

The A3 oracle is Robinson–Schensted row insertion: left cells are the
fibres of the recording tableau, two-sided cells the fibres of the
shape.  This touches none of the cell code.
"""

import pytest

from heckecells.cells import (
    compute_cells,
    order_f_violations,
    support_rule_violations,
)
from heckecells.weyl import weyl_group

LEFT_COUNTS = {"A1": 2, "A2": 4, "B2": 4, "G2": 4, "A3": 10}
TWO_COUNTS = {"A1": 2, "A2": 3, "B2": 3, "G2": 3, "A3": 5}
W0_A = {"A2": 3, "B2": 4, "A3": 6, "G2": 6}


@pytest.mark.parametrize("typ", sorted(LEFT_COUNTS))
def test_cell_counts(typ):
    cd = compute_cells(typ)
    assert len(cd.left_cells) == LEFT_COUNTS[typ]
    assert len(cd.two_cells) == TWO_COUNTS[typ]
    # left cells refine two-sided cells
    for cell in cd.left_cells:
        assert len({cd.two_of[w] for w in cell}) == 1


@pytest.mark.parametrize("typ", sorted(LEFT_COUNTS))
def test_one_distinguished_involution_per_left_cell(typ):
    g = weyl_group(typ)
    cd = compute_cells(typ)
    for i, cell in enumerate(cd.left_cells):
        d = cd.dist_inv[i]
        assert d in cell
        assert g.inverse[d] == d


def _perm_of(g, w):
    p = list(range(1, g.rank + 2))
    for s in g.words[w]:
        p[s], p[s + 1] = p[s + 1], p[s]
    return tuple(p)


def _rsk(perm):
    P, Q = [], []
    for idx, x in enumerate(perm, 1):
        r = 0
        while True:
            if r == len(P):
                P.append([x])
                Q.append([idx])
                break
            row = P[r]
            j = next((k for k, v in enumerate(row) if v > x), None)
            if j is None:
                row.append(x)
                Q[r].append(idx)
                break
            row[j], x = x, row[j]
            r += 1
    return tuple(map(tuple, P)), tuple(map(tuple, Q))


@pytest.mark.parametrize("typ", ["A2", "A3"])
def test_rsk_oracle_type_a(typ):
    g = weyl_group(typ)
    cd = compute_cells(typ)
    by_q = {}
    by_shape = {}
    for w in range(g.order):
        _, Q = _rsk(_perm_of(g, w))
        by_q.setdefault(Q, set()).add(w)
        by_shape.setdefault(tuple(len(r) for r in Q), set()).add(w)
    assert {frozenset(c) for c in cd.left_cells} == {
        frozenset(v) for v in by_q.values()
    }
    assert {frozenset(c) for c in cd.two_cells} == {
        frozenset(v) for v in by_shape.values()
    }


@pytest.mark.parametrize("typ", sorted(W0_A))
def test_a_function_endpoints(typ):
    g = weyl_group(typ)
    cd = compute_cells(typ)
    assert cd.a[0] == 0
    assert cd.a[g.longest_element()] == W0_A[typ]
    assert cd.N == W0_A[typ]


@pytest.mark.parametrize("typ", sorted(LEFT_COUNTS))
def test_a_constant_on_two_sided_cells_and_inverse_invariant(typ):
    g = weyl_group(typ)
    cd = compute_cells(typ)
    for cell in cd.two_cells:
        assert len({cd.a[w] for w in cell}) == 1
    for w in range(g.order):
        assert cd.a[w] == cd.a[g.inverse[w]]


@pytest.mark.parametrize("typ", ["A2", "B2", "G2", "A3"])
def test_order_f_compatibility(typ):
    """Strictly smaller in <=_L (or <=_LR) forces strictly larger f."""
    assert order_f_violations(typ) == ([], [])


@pytest.mark.parametrize("typ", ["A1", "A2", "B2", "G2", "A3"])
def test_support_rule(typ):
    assert support_rule_violations(typ) == []


@pytest.mark.parametrize("typ", sorted(LEFT_COUNTS))
def test_f_values_sorted_by_cell_order(typ):
    cd = compute_cells(typ)
    # f separates two-sided cells at this scale and orders the left order
    assert len(set(cd.f_two)) == len(cd.f_two)
    for i, j in cd.leq_left:
        if i != j:
            assert cd.f_left[i] >= cd.f_left[j]
