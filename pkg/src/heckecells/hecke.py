"""The Iwahori-Hecke algebra over Z[t, t^-1] in its T- and C'-bases.

Elements are sparse dicts ``{element_id: Laurent}``.  With q = t^2 the
T-basis satisfies, for a generator s with weight c_s,

    T_s T_w = T_{sw}                                   if l(sw) > l(w),
    T_s T_w = t^{2 c_s} T_{sw} + (t^{2 c_s} - 1) T_w   otherwise,

and symmetrically on the right.  Everything beyond plain multiplication
(Kazhdan-Lusztig polynomials, the C'-basis, structure constants h_{x,y,z})
assumes the equal-parameter case c_s = 1.

Two independent routes produce the C'-basis:

* :meth:`HeckeData.cprime_T` -- from the Kazhdan-Lusztig recursion;
* :meth:`HeckeData.cprime_by_bar` -- a direct triangular solve against the
  bar involution (t -> 1/t, T_w -> inverse of T at the inverse element),
  which never consults the recursion.

Their agreement for every element is one of the package's acceptance checks.
"""

from __future__ import annotations

from functools import lru_cache

from .coeffs import Laurent, parse_poly, render_poly
from .diskcache import load_payload, store_payload
from .weyl import WeylGroup, weyl_group


class HeckeData:
    """Multiplication tables and cell-theoretic data for one Weyl group."""

    def __init__(self, group: WeylGroup, params=None):
        self.g = group
        if params is None:
            params = tuple([1] * group.rank)
        params = tuple(int(c) for c in params)
        if len(params) != group.rank or any(c < 1 for c in params):
            raise ValueError("params must give a positive weight per generator")
        self.params = params
        self.equal_parameters = all(c == 1 for c in params)
        self._kl = {}
        self._cprime = {}
        self._t_in_c = {}
        self._bar_t = {}
        self._cp_bar = {}
        self._lcols = {}
        self._hops = {}

    # ------------------------------------------------------------------
    # T-basis arithmetic
    # ------------------------------------------------------------------

    def T(self, w: int) -> dict:
        return {w: Laurent.one()}

    def unit(self) -> dict:
        return {0: Laurent.one()}

    @staticmethod
    def add(a: dict, b: dict) -> dict:
        out = dict(a)
        for w, c in b.items():
            s = out.get(w, Laurent.zero()) + c
            if s.is_zero():
                out.pop(w, None)
            else:
                out[w] = s
        return out

    @staticmethod
    def scale(a: dict, c) -> dict:
        if isinstance(c, int):
            c = Laurent.const(c)
        if c.is_zero():
            return {}
        return {w: c * v for w, v in a.items()}

    def mult_gen_right(self, a: dict, s: int) -> dict:
        """a * T_s in the T-basis."""
        g = self.g
        q = Laurent.t(2 * self.params[s])
        qm1 = q - 1
        out = {}

        def acc(w, c):
            if c.is_zero():
                return
            cur = out.get(w)
            tot = c if cur is None else cur + c
            if tot.is_zero():
                out.pop(w, None)
            else:
                out[w] = tot

        for w, c in a.items():
            ws = g.right[w][s]
            if g.length[ws] > g.length[w]:
                acc(ws, c)
            else:
                acc(ws, c * q)
                acc(w, c * qm1)
        return out

    def mult_gen_left(self, s: int, a: dict) -> dict:
        """T_s * a in the T-basis."""
        g = self.g
        q = Laurent.t(2 * self.params[s])
        qm1 = q - 1
        out = {}

        def acc(w, c):
            if c.is_zero():
                return
            cur = out.get(w)
            tot = c if cur is None else cur + c
            if tot.is_zero():
                out.pop(w, None)
            else:
                out[w] = tot

        for w, c in a.items():
            sw = g.left[w][s]
            if g.length[sw] > g.length[w]:
                acc(sw, c)
            else:
                acc(sw, c * q)
                acc(w, c * qm1)
        return out

    def mult_T(self, a: dict, b: dict) -> dict:
        """Product of two T-basis elements.

        >>> hd = hecke_data("A1")
        >>> s = hd.g.gen(0)
        >>> hd.mult_T(hd.T(s), hd.T(s)) == {0: Laurent.t(2), s: Laurent.t(2) - 1}
        True
        """
        g = self.g
        out = {}
        for w, c in b.items():
            term = self.scale(a, c)
            for s in g.words[w]:
                term = self.mult_gen_right(term, s)
            out = self.add(out, term)
        return out

    def t_inverse(self, w: int) -> dict:
        """(T_w)^{-1} in the T-basis."""
        out = self.unit()
        for s in reversed(self.g.words[w]):
            q_inv = Laurent.t(-2 * self.params[s])
            # T_s^{-1} = t^{-2c_s} T_s + (t^{-2c_s} - 1) T_e
            ts_inv = {self.g.gen(s): q_inv, 0: q_inv - 1}
            if ts_inv[0].is_zero():
                del ts_inv[0]
            out = self.mult_T(out, ts_inv)
        return out

    # ------------------------------------------------------------------
    # bar involution
    # ------------------------------------------------------------------

    def bar_T(self, w: int) -> dict:
        """bar(T_w) = (T_{w^{-1}})^{-1}, memoized."""
        got = self._bar_t.get(w)
        if got is None:
            got = self.t_inverse(self.g.inverse[w])
            self._bar_t[w] = got
        return got

    def bar_elt(self, a: dict) -> dict:
        out = {}
        for w, c in a.items():
            out = self.add(out, self.scale(self.bar_T(w), c.bar()))
        return out

    # ------------------------------------------------------------------
    # Kazhdan-Lusztig polynomials (equal parameters)
    # ------------------------------------------------------------------

    def _require_equal_params(self):
        if not self.equal_parameters:
            raise ValueError("cell-theoretic data requires equal parameters c_s = 1")

    def kl_polynomial(self, y: int, w: int) -> Laurent:
        """P_{y,w} as a polynomial in q = t^2 (stored with even t-exponents).

        >>> hd = hecke_data("A2")
        >>> str(hd.kl_polynomial(0, hd.g.w0))
        '1'
        """
        self._require_equal_params()
        key = (y, w)
        got = self._kl.get(key)
        if got is not None:
            return got
        g = self.g
        if y == w:
            res = Laurent.one()
        elif not g.bruhat_leq(y, w):
            res = Laurent.zero()
        else:
            mask = g.left_desc[w]
            s = (mask & -mask).bit_length() - 1
            v = g.left[w][s]  # sw, shorter
            sy = g.left[y][s]
            c = 1 if g.length[sy] < g.length[y] else 0
            # q^{1-c} P_{sy,v} + q^c P_{y,v} - sum mu(z,v) q^{(l(w)-l(z))/2} P_{y,z}
            res = self.kl_polynomial(sy, v).shift(2 * (1 - c)) + self.kl_polynomial(
                y, v
            ).shift(2 * c)
            for z in range(g.order):
                if g.length[z] >= g.length[v] or not (g.left_desc[z] >> s & 1):
                    continue
                if not (g.bruhat_leq(y, z) and g.bruhat_leq(z, v)):
                    continue
                m = self.mu(z, v)
                if m:
                    res = res - self.kl_polynomial(y, z).shift(g.length[w] - g.length[z]) * m
            if not res.is_zero():
                d = res.degree()
                assert d is not None and d <= g.length[w] - g.length[y] - 1, (
                    "KL degree bound violated"
                )
                assert all(e % 2 == 0 for e in res.c), "KL polynomial has odd t-powers"
        self._kl[key] = res
        return res

    def mu(self, z: int, w: int) -> int:
        """The mu-coefficient: coeff of q^{(l(w)-l(z)-1)/2} in P_{z,w}."""
        g = self.g
        gap = g.length[w] - g.length[z]
        if gap <= 0 or gap % 2 == 0:
            return 0
        return self.kl_polynomial(z, w).coeff(gap - 1)

    def mu_sym(self, x: int, y: int) -> int:
        """mu of the shorter element inside the longer one."""
        lx, ly = self.g.length[x], self.g.length[y]
        if lx < ly:
            return self.mu(x, y)
        if ly < lx:
            return self.mu(y, x)
        return 0

    # ------------------------------------------------------------------
    # C'-basis
    # ------------------------------------------------------------------

    def cprime_T(self, w: int) -> dict:
        """C'_w in the T-basis: t^{-l(w)} sum_y P_{y,w} T_y.

        >>> hd = hecke_data("A1")
        >>> s = hd.g.gen(0)
        >>> hd.cprime_T(s) == {0: Laurent.t(-1), s: Laurent.t(-1)}
        True
        """
        got = self._cprime.get(w)
        if got is None:
            g = self.g
            lw = g.length[w]
            got = {}
            for y in range(g.order):
                if g.bruhat_leq(y, w):
                    got[y] = self.kl_polynomial(y, w).shift(-lw)
            self._cprime[w] = got
        return got

    def t_in_cprime(self, w: int) -> dict:
        """T_w expanded in the C'-basis (triangular inversion)."""
        got = self._t_in_c.get(w)
        if got is None:
            g = self.g
            lw = g.length[w]
            out = {w: Laurent.t(lw)}
            for y in range(g.order):
                if y != w and g.bruhat_leq(y, w):
                    # T_w = t^{l(w)} C'_w - sum_{y<w} P_{y,w} T_y
                    c = self.kl_polynomial(y, w)
                    for z, d in self.t_in_cprime(y).items():
                        s = out.get(z, Laurent.zero()) - c * d
                        if s.is_zero():
                            out.pop(z, None)
                        else:
                            out[z] = s
            self._t_in_c[w] = out
            got = out
        return got

    def to_cprime(self, a: dict) -> dict:
        """Convert a T-basis element to C'-coordinates."""
        out = {}
        for w, c in a.items():
            for z, d in self.t_in_cprime(w).items():
                s = out.get(z, Laurent.zero()) + c * d
                if s.is_zero():
                    out.pop(z, None)
                else:
                    out[z] = s
        return out

    def cprime_by_bar(self, w: int) -> dict:
        """C'_w in the T-basis, via bar-invariance + unitriangularity only.

        Works in the normalized basis Tt_y = t^{-l(y)} T_y: seeks the unique
        bar-fixed element with Tt_w-coefficient 1 and all lower coefficients
        in t^{-1} Z[t^{-1}].  Independent of the KL recursion.
        """
        got = self._cp_bar.get(w)
        if got is not None:
            return got
        g = self.g
        # delta tracked in Tt coordinates: dict y -> Laurent
        c_t = {w: Laurent.t(-g.length[w])}  # plain T coords

        def to_tilde(a):
            return {y: v * Laurent.t(g.length[y]) for y, v in a.items()}

        delta = self.add(self.bar_elt(c_t), self.scale(c_t, -1))
        delta = to_tilde(delta)
        while delta:
            y = max(delta, key=lambda u: (g.length[u], u))
            a = delta[y]
            assert a.bar() == -a, "bar-solve discrepancy is not antisymmetric"
            m = Laurent({-e: -v for e, v in a.c.items() if e > 0})
            lower = self.cprime_by_bar(y) if y != w else None
            assert lower is not None, "top coefficient failed to normalize"
            # c += m * C'_y ; delta -= a * (C'_y in Tt coords)
            for z, v in lower.items():
                cv = c_t.get(z, Laurent.zero()) + m * v
                if cv.is_zero():
                    c_t.pop(z, None)
                else:
                    c_t[z] = cv
                dv = delta.get(z, Laurent.zero()) - a * (v * Laurent.t(g.length[z]))
                if dv.is_zero():
                    delta.pop(z, None)
                else:
                    delta[z] = dv
        self._cp_bar[w] = c_t
        return c_t

    # ------------------------------------------------------------------
    # structure constants h_{x,y,z}: C'_x C'_y = sum_z h_{x,y,z} C'_z
    # ------------------------------------------------------------------

    def lmult_cols(self, s: int):
        """Columns of left multiplication by C'_s in the C'-basis."""
        got = self._lcols.get(s)
        if got is not None:
            return got
        self._require_equal_params()
        g = self.g
        v2 = Laurent({1: 1, -1: 1})  # t + 1/t
        cols = []
        for y in range(g.order):
            if g.left_desc[y] >> s & 1:
                cols.append({y: v2})
            else:
                col = {g.left[y][s]: Laurent.one()}
                for z in range(g.order):
                    if (g.left_desc[z] >> s & 1) and g.length[z] < g.length[y]:
                        m = self.mu(z, y)
                        if m:
                            col[z] = Laurent.const(m)
                cols.append(col)
        self._lcols[s] = cols
        return cols

    def h_op(self, x: int):
        """Columns of left multiplication by C'_x in the C'-basis.

        h_op(x)[y][z] == h_{x,y,z}.
        """
        got = self._hops.get(x)
        if got is not None:
            return got
        g = self.g
        if x == 0:
            got = [{y: Laurent.one()} for y in range(g.order)]
        else:
            word = g.words[x]
            s = word[0]
            if len(word) == 1:
                got = self.lmult_cols(s)
            else:
                xp = g.left[x][s]  # s*x, shorter
                base = self.h_op(xp)
                lcols = self.lmult_cols(s)
                # L_s @ H_{x'}
                prod = []
                for y in range(g.order):
                    acc = {}
                    for z, c in base[y].items():
                        for u, d in lcols[z].items():
                            v = acc.get(u, Laurent.zero()) + c * d
                            if v.is_zero():
                                acc.pop(u, None)
                            else:
                                acc[u] = v
                    prod.append(acc)
                # subtract mu(z, x') H_z over z < x' with sz < z
                for z in range(g.order):
                    if (g.left_desc[z] >> s & 1) and g.length[z] < g.length[xp]:
                        m = self.mu(z, xp)
                        if m:
                            hz = self.h_op(z)
                            for y in range(g.order):
                                col = prod[y]
                                for u, d in hz[y].items():
                                    v = col.get(u, Laurent.zero()) - d * m
                                    if v.is_zero():
                                        col.pop(u, None)
                                    else:
                                        col[u] = v
                got = prod
        self._hops[x] = got
        return got

    def h_const(self, x: int, y: int) -> dict:
        """The expansion of C'_x C'_y: dict z -> h_{x,y,z}."""
        return self.h_op(x)[y]

    def h(self, x: int, y: int, z: int) -> Laurent:
        return self.h_op(x)[y].get(z, Laurent.zero())

    def rmult_cols(self, s: int):
        """Columns of right multiplication by C'_s (through the
        anti-automorphism h_{y,s,u} = h_{s,y^{-1},u^{-1}})."""
        inv = self.g.inverse
        lcols = self.lmult_cols(s)
        return [
            {inv[u]: c for u, c in lcols[inv[y]].items()} for y in range(self.g.order)
        ]

    # ------------------------------------------------------------------
    # persistence
    # ------------------------------------------------------------------

    def kl_payload(self) -> dict:
        g = self.g
        table = {}
        for w in range(g.order):
            for y in range(g.order):
                if g.bruhat_leq(y, w):
                    p = self.kl_polynomial(y, w)
                    if not p.is_zero():
                        table[f"{y},{w}"] = render_poly(p)
        return {"kl": table}

    def h_payload(self) -> dict:
        g = self.g
        table = {}
        for x in range(g.order):
            cols = self.h_op(x)
            xt = {}
            for y in range(g.order):
                xt[str(y)] = {str(z): render_poly(c) for z, c in sorted(cols[y].items())}
            table[str(x)] = xt
        return {"h": table}

    def load_kl_payload(self, payload) -> bool:
        try:
            table = payload["kl"]
            kl = {}
            for key, val in table.items():
                y, w = key.split(",")
                kl[(int(y), int(w))] = parse_poly(val)
        except (KeyError, ValueError, AttributeError):
            return False
        g = self.g
        for w in range(g.order):
            for y in range(g.order):
                if g.bruhat_leq(y, w) and (y, w) not in kl:
                    return False
                kl.setdefault((y, w), Laurent.zero())
        self._kl.update(kl)
        return True

    def load_h_payload(self, payload) -> bool:
        try:
            table = payload["h"]
            hops = {}
            for xs, cols in table.items():
                x = int(xs)
                got = [None] * self.g.order
                for ys, col in cols.items():
                    got[int(ys)] = {int(z): parse_poly(v) for z, v in col.items()}
                if any(c is None for c in got):
                    return False
                hops[x] = got
            if set(hops) != set(range(self.g.order)):
                return False
        except (KeyError, ValueError, AttributeError):
            return False
        self._hops.update(hops)
        return True


@lru_cache(maxsize=None)
def hecke_data(type_str: str) -> HeckeData:
    """Shared equal-parameter HeckeData for a Cartan type."""
    return HeckeData(weyl_group(type_str))


def hecke_data_cached(type_str: str, cache_dir=None) -> HeckeData:
    """Like :func:`hecke_data` but hydrating from / writing to a disk cache."""
    hd = hecke_data(type_str)
    if cache_dir:
        if not hd._kl:
            payload = load_payload(cache_dir, type_str, "kl")
            if payload is not None:
                hd.load_kl_payload(payload)
        if not hd._hops:
            payload = load_payload(cache_dir, type_str, "hconst")
            if payload is not None:
                hd.load_h_payload(payload)
    return hd


def save_caches(hd: HeckeData, cache_dir) -> None:
    if not cache_dir:
        return
    store_payload(cache_dir, hd.g.typ, "kl", hd.kl_payload())
    store_payload(cache_dir, hd.g.typ, "hconst", hd.h_payload())
