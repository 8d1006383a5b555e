"""Kazhdan-Lusztig cells, the a-function, gamma-constants and the sorting
function f.

Cell preorders are generated two independent ways and asserted equal:

* from the actual supports of C'_s * C'_y (structure-constant route);
* from the mu-table with the descent condition (W-graph route): an edge
  y -> z exists iff mu~(z, y) != 0 and some s lies in L(z) but not L(y).

Left cells are the strongly connected components; ``<=_R`` comes from the
same machinery through the inverse map, and ``<=_LR`` from the union of the
edge sets.  The sorting function is

    f(c) = a(c) + N - a(w0 . c),      N = number of positive roots,

constant on two-sided cells, and ``leq_f`` is the associated total preorder
on left cells (equal two-sided cell, else strict f-comparison).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import networkx as nx

from .coeffs import Laurent
from .hecke import HeckeData, hecke_data
from .weyl import positive_root_count


@dataclass
class CellData:
    """Cells and cell invariants of one (equal-parameter) Weyl group."""

    hd: HeckeData
    left_cells: list = field(default_factory=list)  # sorted tuples of ids
    right_cells: list = field(default_factory=list)
    two_cells: list = field(default_factory=list)
    left_of: list = field(default_factory=list)  # element -> left cell index
    right_of: list = field(default_factory=list)
    two_of: list = field(default_factory=list)
    leq_left: set = field(default_factory=set)  # (i, j): cell_i <=_L cell_j
    leq_right: set = field(default_factory=set)
    leq_two: set = field(default_factory=set)
    a: list = field(default_factory=list)  # element -> a-value
    dist_inv: list = field(default_factory=list)  # left cell -> its d in D
    f_left: list = field(default_factory=list)  # left cell -> f value
    f_two: list = field(default_factory=list)
    gamma: dict = field(default_factory=dict)  # (x, y, z) -> nonzero int
    N: int = 0

    # -- convenience -----------------------------------------------------

    @property
    def g(self):
        return self.hd.g

    def a_of_left_cell(self, i: int) -> int:
        return self.a[self.left_cells[i][0]]

    def leq_f(self, i: int, j: int) -> bool:
        """The order <=_f on left cells: same two-sided cell or f(i) < f(j)."""
        if self.two_of[self.left_cells[i][0]] == self.two_of[self.left_cells[j][0]]:
            return True
        return self.f_left[i] < self.f_left[j]

    def gamma_of(self, x: int, y: int, z: int) -> int:
        return self.gamma.get((x, y, z), 0)


def _edges_from_supports(hd: HeckeData, side: str):
    """Edge y -> z when C'_z appears in C'_s C'_y (or C'_y C'_s)."""
    g = hd.g
    edges = set()
    for s in range(g.rank):
        cols = hd.lmult_cols(s) if side == "left" else hd.rmult_cols(s)
        for y in range(g.order):
            for z in cols[y]:
                if z != y:
                    edges.add((y, z))
    return edges


def _edges_from_mu(hd: HeckeData, side: str):
    """Edge y -> z when mu~(z,y) != 0 and desc(z) strictly exceeds desc(y)."""
    g = hd.g
    desc = g.left_desc if side == "left" else g.right_desc
    edges = set()
    for y in range(g.order):
        for z in range(g.order):
            if z == y:
                continue
            if desc[z] & ~desc[y] and hd.mu_sym(z, y):
                edges.add((y, z))
    return edges


def _components(order: int, edges) -> tuple:
    G = nx.DiGraph()
    G.add_nodes_from(range(order))
    G.add_edges_from(edges)
    comps = [tuple(sorted(c)) for c in nx.strongly_connected_components(G)]
    comps.sort(key=lambda c: c[0])
    return comps, G


def _cell_order(comps, G) -> set:
    """(i, j) with cell_i <=_(pre)order cell_j, from condensation reachability.

    Edges point downward (y -> z means z below y), so cell_i <= cell_j iff
    some member of j reaches some member of i.
    """
    index = {}
    for i, c in enumerate(comps):
        for w in c:
            index[w] = i
    cond = nx.DiGraph()
    cond.add_nodes_from(range(len(comps)))
    for u, v in G.edges():
        iu, iv = index[u], index[v]
        if iu != iv:
            cond.add_edge(iu, iv)
    leq = set()
    for j in range(len(comps)):
        for i in nx.descendants(cond, j) | {j}:
            leq.add((i, j))
    return leq


@lru_cache(maxsize=None)
def compute_cells(type_str: str) -> CellData:
    """All cell data for a Cartan type (cached per process).

    >>> cd = compute_cells("A2")
    >>> [len(c) for c in cd.left_cells]
    [1, 2, 2, 1]
    >>> cd.N
    3
    >>> sorted(set(cd.f_left))
    [0, 3, 6]
    """
    hd = hecke_data(type_str)
    g = hd.g
    cd = CellData(hd=hd)
    cd.N = positive_root_count(g)

    # dual-route edge sets (asserted equal for all supported orders)
    edges_l = _edges_from_supports(hd, "left")
    assert edges_l == _edges_from_mu(hd, "left"), "left edge routes disagree"
    edges_r = _edges_from_supports(hd, "right")
    assert edges_r == _edges_from_mu(hd, "right"), "right edge routes disagree"
    inv = g.inverse
    assert edges_r == {(inv[y], inv[z]) for (y, z) in edges_l}, (
        "right edges are not the inverse image of left edges"
    )

    cd.left_cells, G_l = _components(g.order, edges_l)
    cd.right_cells, G_r = _components(g.order, edges_r)
    cd.two_cells, G_2 = _components(g.order, edges_l | edges_r)
    cd.leq_left = _cell_order(cd.left_cells, G_l)
    cd.leq_right = _cell_order(cd.right_cells, G_r)
    cd.leq_two = _cell_order(cd.two_cells, G_2)

    cd.left_of = [None] * g.order
    cd.right_of = [None] * g.order
    cd.two_of = [None] * g.order
    for i, c in enumerate(cd.left_cells):
        for w in c:
            cd.left_of[w] = i
    for i, c in enumerate(cd.right_cells):
        for w in c:
            cd.right_of[w] = i
    for i, c in enumerate(cd.two_cells):
        for w in c:
            cd.two_of[w] = i
    # inverse map sends left cells onto right cells
    for c in cd.left_cells:
        imgs = {cd.right_of[inv[w]] for w in c}
        assert len(imgs) == 1, "inverse of a left cell is not a right cell"

    # a-function by exhaustive scan of the structure constants
    a = [0] * g.order
    for x in range(g.order):
        cols = hd.h_op(x)
        for y in range(g.order):
            for z, c in cols[y].items():
                d = c.degree()
                if d is not None and d > a[z]:
                    a[z] = d
    cd.a = a
    assert a[0] == 0 and a[g.w0] == cd.N, "a-function endpoint values wrong"
    for w in range(g.order):
        assert a[w] == a[inv[w]], "a-function not inverse-invariant"
    for c in cd.two_cells:
        assert len({a[w] for w in c}) == 1, "a not constant on a two-sided cell"

    # distinguished involutions: d^2 = e and a(d) = l(d) - 2 deg_q P_{e,d}
    dist = []
    for i, c in enumerate(cd.left_cells):
        found = []
        for w in c:
            if g.mult(w, w) != 0:
                continue
            p = hd.kl_polynomial(0, w)
            degt = p.degree() or 0
            if a[w] == g.length[w] - degt:
                found.append(w)
        assert len(found) == 1, f"left cell {i} has {len(found)} distinguished involutions"
        dist.append(found[0])
    cd.dist_inv = dist

    # gamma-constants: gamma_{x,y,z} = coeff of t^{a(z)} in h_{x,y,z^{-1}}
    gamma = {}
    for x in range(g.order):
        cols = hd.h_op(x)
        for y in range(g.order):
            for zi, c in cols[y].items():
                z = inv[zi]
                v = c.coeff(a[z])
                if v:
                    gamma[(x, y, z)] = v
    cd.gamma = gamma

    # w0 action permutes left and two-sided cells; sorting function f
    f_left = []
    for i, c in enumerate(cd.left_cells):
        imgs = {cd.left_of[g.mult(g.w0, w)] for w in c}
        assert len(imgs) == 1, "w0 . (left cell) is not a left cell"
        j = imgs.pop()
        f_left.append(a[c[0]] + cd.N - a[cd.left_cells[j][0]])
    cd.f_left = f_left
    f_two = []
    for i, c in enumerate(cd.two_cells):
        imgs = {cd.two_of[g.mult(g.w0, w)] for w in c}
        assert len(imgs) == 1, "w0 . (two-sided cell) is not a two-sided cell"
        j = imgs.pop()
        f_two.append(a[c[0]] + cd.N - a[cd.two_cells[j][0]])
    cd.f_two = f_two
    # f is constant on two-sided cells
    for i, c in enumerate(cd.left_cells):
        assert f_left[i] == f_two[cd.two_of[c[0]]], "f differs between a left cell and its two-sided cell"
    return cd


def a_function(type_str: str, w: int) -> int:
    """a(w), from the exhaustive structure-constant scan."""
    return compute_cells(type_str).a[w]


def distinguished_involutions(type_str: str) -> list:
    """One distinguished involution per left cell, in cell order."""
    return list(compute_cells(type_str).dist_inv)


def sorting_f(type_str: str, i: int) -> int:
    """f-value of the i-th left cell."""
    return compute_cells(type_str).f_left[i]


def leq_f(type_str: str, i: int, j: int) -> bool:
    return compute_cells(type_str).leq_f(i, j)


def support_rule_violations(type_str: str) -> list:
    """Triples violating: h_{x,y,z} != 0 implies z <=_L y and z <=_R x."""
    cd = compute_cells(type_str)
    hd, g = cd.hd, cd.g
    bad = []
    for x in range(g.order):
        cols = hd.h_op(x)
        for y in range(g.order):
            for z, c in cols[y].items():
                if c.is_zero():
                    continue
                ok_l = (cd.left_of[z], cd.left_of[y]) in cd.leq_left
                ok_r = (cd.right_of[z], cd.right_of[x]) in cd.leq_right
                if not (ok_l and ok_r):
                    bad.append((x, y, z))
    return bad


def gamma_support_violations(type_str: str) -> list:
    """Triples violating: gamma_{x,y,z} != 0 implies
    x ~_L y^{-1}, y ~_L z^{-1}, z ~_L x^{-1}."""
    cd = compute_cells(type_str)
    inv = cd.g.inverse
    bad = []
    for (x, y, z), v in cd.gamma.items():
        if not v:
            continue
        if (
            cd.left_of[x] != cd.left_of[inv[y]]
            or cd.left_of[y] != cd.left_of[inv[z]]
            or cd.left_of[z] != cd.left_of[inv[x]]
        ):
            bad.append((x, y, z))
    return bad


def order_f_violations(type_str: str):
    """Check the two order-compatibility statements.

    Returns (bad_two, bad_left) where bad_two lists two-sided cell pairs with
    c <_LR c' but f(c') >= f(c), and bad_left lists left cell pairs with
    w <_L w' (strictly, different cells) but f(w) <= f(w').
    """
    cd = compute_cells(type_str)
    bad_two = []
    for (i, j) in cd.leq_two:
        if i != j and not cd.f_two[j] < cd.f_two[i]:
            bad_two.append((i, j))
    bad_left = []
    for (i, j) in cd.leq_left:
        if i != j and not cd.f_left[i] > cd.f_left[j]:
            bad_left.append((i, j))
    return bad_two, bad_left
