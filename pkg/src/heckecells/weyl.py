"""Finite Weyl groups through their exact integer reflection representations.

A group is interned once per Cartan type: elements are integer matrices on
the root lattice, discovered breadth-first from the identity, so ids are
stable and BFS depth equals Coxeter length.  All downstream modules address
elements by these integer ids.

Element words serialize as ``s1.s2.s1`` (identity: ``e``); type strings look
like ``A2``, ``B3``, ``G2``.

>>> g = weyl_group("A2")
>>> g.order
6
>>> g.format_element(g.w0)
's1.s2.s1'
>>> sorted(g.format_element(w) for w in range(g.order) if g.bruhat_leq(w, g.w0))
['e', 's1', 's1.s2', 's1.s2.s1', 's2', 's2.s1']
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache


def cartan_matrix(family: str, n: int):
    """Integer Cartan matrix (C[i][j]: s_i(a_j) = a_j - C[i][j] a_i)."""
    C = [[0] * n for _ in range(n)]
    for i in range(n):
        C[i][i] = 2
    chain = {("A", None)}

    def bond(i, j, cij, cji):
        C[i][j] = cij
        C[j][i] = cji

    if family == "A":
        for i in range(n - 1):
            bond(i, i + 1, -1, -1)
    elif family in ("B", "C"):
        for i in range(n - 2):
            bond(i, i + 1, -1, -1)
        if n >= 2:
            if family == "B":
                bond(n - 2, n - 1, -2, -1)
            else:
                bond(n - 2, n - 1, -1, -2)
    elif family == "D":
        # chain 0..n-3, with n-2 and n-1 both attached to n-3
        for i in range(n - 3):
            bond(i, i + 1, -1, -1)
        bond(n - 3, n - 2, -1, -1)
        bond(n - 3, n - 1, -1, -1)
    elif family == "F":
        bond(0, 1, -1, -1)
        bond(1, 2, -2, -1)
        bond(2, 3, -1, -1)
    elif family == "G":
        bond(0, 1, -1, -3)
    else:
        raise ValueError(f"unknown family {family!r}")
    return tuple(tuple(row) for row in C)


_RANK_RANGE = {"A": (1, 4), "B": (2, 4), "C": (2, 4), "D": (4, 4), "F": (4, 4), "G": (2, 2)}


def _matmul(a, b, n):
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)) for i in range(n)
    )


@dataclass
class WeylGroup:
    """Interned element table of a finite Weyl group."""

    typ: str
    rank: int
    cartan: tuple
    order: int = 0
    length: list = field(default_factory=list)
    right: list = field(default_factory=list)  # right[w][s] = id of w*s
    left: list = field(default_factory=list)  # left[w][s] = id of s*w
    inverse: list = field(default_factory=list)
    words: list = field(default_factory=list)  # canonical ShortLex words
    left_desc: list = field(default_factory=list)  # bitmasks
    right_desc: list = field(default_factory=list)
    w0: int = 0
    _bruhat_memo: dict = field(default_factory=dict, repr=False)
    _parabolic_memo: dict = field(default_factory=dict, repr=False)

    # -- elementary operations -----------------------------------------

    def gen(self, s: int) -> int:
        """Id of the generator s (0-based)."""
        return self.right[0][s]

    def mult(self, x: int, y: int) -> int:
        """Product x*y via the canonical word of y."""
        for s in self.words[y]:
            x = self.right[x][s]
        return x

    def descents(self, w: int, side: str) -> tuple:
        """Sorted tuple of descent generator indices on the given side.

        >>> g = weyl_group("A2")
        >>> g.descents(g.w0, "left")
        (0, 1)
        """
        mask = self.left_desc[w] if side == "left" else self.right_desc[w]
        return tuple(s for s in range(self.rank) if mask >> s & 1)

    def desc_mask(self, w: int, side: str) -> int:
        return self.left_desc[w] if side == "left" else self.right_desc[w]

    # -- parabolic data --------------------------------------------------

    def parabolic(self, subset) -> tuple:
        """Sorted tuple of the elements of the standard parabolic W_subset."""
        key = self._subset_mask(subset)
        if key not in self._parabolic_memo:
            gens = [s for s in range(self.rank) if key >> s & 1]
            seen = {0}
            queue = [0]
            for w in queue:
                for s in gens:
                    u = self.right[w][s]
                    if u not in seen:
                        seen.add(u)
                        queue.append(u)
            self._parabolic_memo[key] = tuple(sorted(seen))
        return self._parabolic_memo[key]

    def longest_element(self, subset=None) -> int:
        """Longest element of the standard parabolic subgroup.

        >>> g = weyl_group("B2")
        >>> g.length[g.longest_element()]
        4
        >>> g.longest_element(()) == 0
        True
        """
        if subset is None:
            return self.w0
        elems = self.parabolic(subset)
        return max(elems, key=lambda w: self.length[w])

    def min_coset_reps(self, subset) -> tuple:
        """Minimal-length representatives d of the cosets W_subset * d.

        These are the elements with no left descent inside the subset.
        """
        mask = self._subset_mask(subset)
        return tuple(w for w in range(self.order) if not (self.left_desc[w] & mask))

    def _subset_mask(self, subset) -> int:
        if isinstance(subset, int):
            return subset
        m = 0
        for s in subset:
            if not 0 <= s < self.rank:
                raise ValueError(f"generator index {s} out of range")
            m |= 1 << s
        return m

    # -- Bruhat order ------------------------------------------------------

    def bruhat_leq(self, y: int, w: int) -> bool:
        """Bruhat order test, by the descent recursion."""
        if y == w:
            return True
        ly, lw = self.length[y], self.length[w]
        if ly >= lw:
            return False
        key = (y, w)
        memo = self._bruhat_memo
        if key in memo:
            return memo[key]
        mask = self.right_desc[w]
        s = (mask & -mask).bit_length() - 1  # least right descent of w
        wp = self.right[w][s]
        if self.right_desc[y] >> s & 1:
            res = self.bruhat_leq(self.right[y][s], wp)
        else:
            res = self.bruhat_leq(y, wp)
        memo[key] = res
        return res

    # -- serialization -----------------------------------------------------

    def format_element(self, w: int) -> str:
        word = self.words[w]
        if not word:
            return "e"
        return ".".join(f"s{s + 1}" for s in word)

    def parse_element(self, text: str) -> int:
        text = text.strip()
        if text == "e":
            return 0
        w = 0
        for part in text.split("."):
            m = re.fullmatch(r"s(\d+)", part)
            if not m:
                raise ValueError(f"bad element syntax: {text!r}")
            s = int(m.group(1)) - 1
            if not 0 <= s < self.rank:
                raise ValueError(f"generator {part} out of range for {self.typ}")
            w = self.right[w][s]
        return w

    # -- conjugacy classes (used by the t=1 character cross-check) ----------

    def conjugacy_classes(self) -> list:
        """List of sorted tuples of element ids, one per conjugacy class."""
        unseen = set(range(self.order))
        classes = []
        while unseen:
            x0 = min(unseen)
            orbit = {x0}
            queue = [x0]
            for x in queue:
                for s in range(self.rank):
                    y = self.left[self.right[x][s]][s]  # s * (x * s)
                    if y not in orbit:
                        orbit.add(y)
                        queue.append(y)
            orbit = tuple(sorted(orbit))
            classes.append(orbit)
            unseen -= set(orbit)
        return classes


def parse_type(type_str: str):
    m = re.fullmatch(r"([ABCDFG])(\d+)", type_str.strip())
    if not m:
        raise ValueError(f"bad Cartan type {type_str!r} (expected e.g. 'A2', 'B3')")
    family, n = m.group(1), int(m.group(2))
    lo, hi = _RANK_RANGE[family]
    if not lo <= n <= hi:
        raise ValueError(f"rank {n} out of supported range [{lo}, {hi}] for family {family}")
    return family, n


@lru_cache(maxsize=None)
def weyl_group(type_str: str, max_order: int = 1152) -> WeylGroup:
    """Build (and cache) the interned Weyl group of the given type.

    >>> weyl_group("G2").order
    12
    >>> [weyl_group(k).order for k in ("A1", "A2", "A3", "B2", "B3")]
    [2, 6, 24, 8, 48]
    """
    family, n = parse_type(type_str)
    C = cartan_matrix(family, n)
    # generator matrices: s_i(e_j) = e_j - C[i][j] e_i
    gens = []
    for i in range(n):
        M = [[1 if a == b else 0 for b in range(n)] for a in range(n)]
        for j in range(n):
            M[i][j] -= C[i][j]
        gens.append(tuple(tuple(r) for r in M))
    ident = tuple(tuple(1 if a == b else 0 for b in range(n)) for a in range(n))
    index = {ident: 0}
    mats = [ident]
    length = [0]
    right_tab = [[None] * n]
    g = WeylGroup(typ=type_str, rank=n, cartan=C)
    qi = 0
    while qi < len(mats):
        M = mats[qi]
        for s in range(n):
            P = _matmul(M, gens[s], n)
            j = index.get(P)
            if j is None:
                j = len(mats)
                if j >= max_order + 1:
                    raise ValueError(f"group order exceeds cap {max_order}")
                index[P] = j
                mats.append(P)
                length.append(length[qi] + 1)
                right_tab.append([None] * n)
            right_tab[qi][s] = j
        qi += 1
    order = len(mats)
    left_tab = [[None] * n for _ in range(order)]
    for w in range(order):
        for s in range(n):
            left_tab[w][s] = index[_matmul(gens[s], mats[w], n)]
    g.order = order
    g.length = length
    g.right = right_tab
    g.left = left_tab
    g.left_desc = [
        sum(1 << s for s in range(n) if length[left_tab[w][s]] < length[w]) for w in range(order)
    ]
    g.right_desc = [
        sum(1 << s for s in range(n) if length[right_tab[w][s]] < length[w]) for w in range(order)
    ]
    # canonical ShortLex words (least left descent first); BFS order is
    # length-sorted, so shorter elements are always ready first
    words = [None] * order
    words[0] = ()
    for w in sorted(range(order), key=lambda x: length[x]):
        if w == 0:
            continue
        mask = g.left_desc[w]
        s = (mask & -mask).bit_length() - 1
        words[w] = (s,) + words[left_tab[w][s]]
    g.words = words
    inv = [None] * order
    for w in range(order):
        x = 0
        for s in reversed(words[w]):
            x = g.right[x][s]
        inv[w] = x
    g.inverse = inv
    g.w0 = max(range(order), key=lambda w: length[w])
    assert sum(1 for w in range(order) if length[w] == length[g.w0]) == 1
    return g


def positive_root_count(g: WeylGroup) -> int:
    """Number of positive roots N = l(w0)."""
    return g.length[g.w0]
