"""Certified exact linear algebra over Q(t), over the localization Q_e, and
over the residue field k_e = Q[t]/(Phi_{2e}).

Large kernels are never computed by exact elimination.  Instead a linear
operator is specialized at deterministic points t = theta modulo word-size
primes (for k_e, theta runs over the roots of Phi_{2e} mod p, with
p = 1 mod 2e so the cyclotomic splits completely), reduced with int64
numpy row-reduction, and the reduced-echelon kernel entries are recovered
by Newton interpolation, Cauchy rational-function reconstruction, CRT and
rational lifting.  Every returned vector is then verified *exactly* against
the operator, and the kernel dimension is certified on both sides:

* a specialization bounds the kernel dimension from above (matrix rank can
  only drop under specialization), and
* the exactly verified, visibly independent vectors bound it from below.

A failed verification never produces a wrong answer; it only forces more
evaluation points (the point and prime sequences are fixed, so results are
deterministic).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt

import numpy as np
import sympy

from .coeffs import (
    CycloScalar,
    Laurent,
    RatFun,
    phi_for_e,
    phi_valuation,
)

# ---------------------------------------------------------------------------
# primes and evaluation points
# ---------------------------------------------------------------------------

_PRIME_START = (1 << 30) - 1


@lru_cache(maxsize=None)
def primes_any(count: int) -> tuple:
    """The first `count` primes below 2^30, descending (deterministic)."""
    out = []
    p = _PRIME_START + 1
    while len(out) < count:
        p = int(sympy.prevprime(p))
        out.append(p)
    return tuple(out)


@lru_cache(maxsize=None)
def primes_1mod(m: int, count: int) -> tuple:
    """The first `count` primes p = 1 (mod m) below 2^30, descending."""
    out = []
    p = _PRIME_START + 1
    while len(out) < count:
        p = int(sympy.prevprime(p))
        if p % m == 1:
            out.append(p)
    return tuple(out)


def _phi_degree(e: int) -> int:
    return int(phi_for_e(e).degree())


@lru_cache(maxsize=None)
def phi_roots_mod(e: int, p: int) -> tuple:
    """All roots of Phi_{2e} mod p (requires p = 1 mod 2e), sorted."""
    n = 2 * e
    if (p - 1) % n:
        raise ValueError("p is not 1 mod 2e")
    phi = phi_for_e(e)
    d = _phi_degree(e)
    for a in range(2, 1000):
        g = pow(a, (p - 1) // n, p)
        if phi.eval_mod(g, p) == 0:
            roots = {pow(g, j, p) for j in range(1, n) if gcd(j, n) == 1}
            if len(roots) == d:
                return tuple(sorted(roots))
    raise ArithmeticError(f"could not split Phi_{2 * e} mod {p}")


# ---------------------------------------------------------------------------
# modular matrix primitives
# ---------------------------------------------------------------------------


def matmul_modp(A: np.ndarray, B: np.ndarray, p: int) -> np.ndarray:
    """(A @ B) % p without int64 overflow (entries assumed in [0, p))."""
    k = A.shape[1]
    # each product < 2^60; keep partial sums of at most 7 terms below 2^63
    step = 7
    out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    for lo in range(0, k, step):
        hi = min(lo + step, k)
        out = (out + A[:, lo:hi] @ B[lo:hi, :]) % p
    return out


def rref_modp(A: np.ndarray, p: int):
    """Reduced row echelon form mod p.  Returns (rank, pivots, R)."""
    A = np.array(A, dtype=np.int64) % p
    m, n = A.shape
    r = 0
    pivots = []
    for c in range(n):
        if r == m:
            break
        col = A[r:, c]
        nz = np.nonzero(col)[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            A[[r, i]] = A[[i, r]]
        inv = pow(int(A[r, c]), -1, p)
        A[r] = (A[r] * inv) % p
        rows = np.nonzero(A[:, c])[0]
        rows = rows[rows != r]
        if rows.size:
            A[rows] = (A[rows] - np.outer(A[rows, c], A[r])) % p
        pivots.append(c)
        r += 1
    return r, tuple(pivots), A[:r]


def nullspace_modp(A: np.ndarray, p: int):
    """Kernel basis mod p in reduced echelon shape: (dim, pivots, vectors)."""
    rank, pivots, R = rref_modp(A, p)
    n = np.shape(A)[1]
    free = [c for c in range(n) if c not in set(pivots)]
    vecs = np.zeros((len(free), n), dtype=np.int64)
    for k, j in enumerate(free):
        vecs[k, j] = 1
        for r, c in enumerate(pivots):
            vecs[k, c] = (-int(R[r, j])) % p
    return len(free), tuple(pivots), vecs


# ---------------------------------------------------------------------------
# interpolation and reconstruction mod p
# ---------------------------------------------------------------------------


def newton_interp_modp(xs, ys, p: int):
    """Coefficients (ascending) of the interpolating polynomial mod p."""
    n = len(xs)
    divided = [y % p for y in ys]
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            inv = pow((xs[i] - xs[i - j]) % p, -1, p)
            divided[i] = (divided[i] - divided[i - 1]) * inv % p
    coeffs = [0] * n
    for i in range(n - 1, -1, -1):
        new = [0] * n
        for d in range(n - 1):
            new[d + 1] = coeffs[d]
        for d in range(n):
            new[d] = (new[d] - xs[i] * coeffs[d]) % p
        new[0] = (new[0] + divided[i]) % p
        coeffs = new
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def _poly_mul_modp(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    while out and out[-1] == 0:
        out.pop()
    return out


def _poly_divmod_modp(a, b, p):
    a = [x % p for x in a]
    while a and a[-1] == 0:
        a.pop()
    b = [x % p for x in b]
    while b and b[-1] == 0:
        b.pop()
    if not b:
        raise ZeroDivisionError
    q = [0] * max(0, len(a) - len(b) + 1)
    inv = pow(b[-1], -1, p)
    while len(a) >= len(b):
        f = a[-1] * inv % p
        d = len(a) - len(b)
        q[d] = f
        for i in range(len(b)):
            a[i + d] = (a[i + d] - f * b[i]) % p
        while a and a[-1] == 0:
            a.pop()
    return q, a


def _poly_eval_modp(cs, x, p):
    acc = 0
    for c in reversed(cs):
        acc = (acc * x + c) % p
    return acc


def ratfun_reconstruct_modp(xs, ys, p: int):
    """Cauchy interpolation: a rational function num/den mod p through the
    points, with balanced degrees via the extended Euclidean algorithm.

    Returns (num_coeffs, den_coeffs) ascending with den monic and nonzero at
    every node, or None when no such balanced function exists.
    """
    n_pts = len(xs)
    H = newton_interp_modp(xs, ys, p)
    M = [1]
    for x in xs:
        M = _poly_mul_modp(M, [(-x) % p, 1], p)
    if not H:
        return [], [1]
    stop = (n_pts + 1) // 2
    r0, r1 = M, H
    v0, v1 = [], [1]
    while r1 and len(r1) - 1 >= stop:
        q, r = _poly_divmod_modp(r0, r1, p)
        r0, r1 = r1, r
        qv = _poly_mul_modp(q, v1, p)
        nv = [0] * max(len(v0), len(qv))
        for i, c in enumerate(v0):
            nv[i] = c
        for i, c in enumerate(qv):
            nv[i] = (nv[i] - c) % p
        while nv and nv[-1] == 0:
            nv.pop()
        v0, v1 = v1, nv
    num, den = r1, v1
    if not den:
        return None
    inv = pow(den[-1], -1, p)
    num = [c * inv % p for c in num]
    den = [c * inv % p for c in den]
    for x in xs:
        if _poly_eval_modp(den, x, p) == 0:
            return None
    return num, den


def crt_int(a1: int, m1: int, a2: int, m2: int) -> int:
    """CRT for coprime moduli; result in [0, m1*m2)."""
    g, u, v = _xgcd(m1, m2)
    assert g == 1
    return (a1 * v * m2 + a2 * u * m1) % (m1 * m2)


def _xgcd(a, b):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def wang_rational(a: int, m: int):
    """Lift a residue mod m to a fraction n/d with |n|, d <= sqrt(m/2)."""
    a %= m
    bound = isqrt(m // 2)
    u0, u1 = m, a
    v0, v1 = 0, 1
    while u1 > bound:
        q = u0 // u1
        u0, u1 = u1, u0 - q * u1
        v0, v1 = v1, v0 - q * v1
    if v1 == 0 or abs(v1) > bound or gcd(abs(u1), abs(v1)) != 1:
        return None
    if v1 < 0:
        u1, v1 = -u1, -v1
    return Fraction(u1, v1)


def _crt_lift(residues):
    """CRT a list of (p, value) pairs and lift to a Fraction (or None)."""
    a, m = 0, 1
    for p, v in residues:
        a = crt_int(a, m, v % p, p) if m > 1 else v % p
        m *= p
    return wang_rational(a, m)


# ---------------------------------------------------------------------------
# Laurent / k_e matrix helpers
# ---------------------------------------------------------------------------


def lmat_eval(M, theta: int, p: int) -> np.ndarray:
    """Evaluate a Laurent matrix at t = theta mod p."""
    n = len(M)
    m = len(M[0]) if n else 0
    out = np.zeros((n, m), dtype=np.int64)
    for i in range(n):
        row = M[i]
        for j in range(m):
            x = row[j]
            if x.c:
                out[i, j] = x.eval_mod(theta, p)
    return out


def lmat_mul(A, B):
    n, k = len(A), len(B)
    m = len(B[0]) if k else 0
    out = [[Laurent.zero() for _ in range(m)] for _ in range(n)]
    for i in range(n):
        Ai = A[i]
        oi = out[i]
        for kk in range(k):
            a = Ai[kk]
            if not a.c:
                continue
            Bk = B[kk]
            for j in range(m):
                b = Bk[j]
                if b.c:
                    oi[j] = oi[j] + a * b
    return out


def lmat_add(A, B):
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def lmat_sub(A, B):
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def lmat_scale(A, c):
    return [[c * a for a in row] for row in A]


def lmat_identity(n):
    return [
        [Laurent.one() if i == j else Laurent.zero() for j in range(n)]
        for i in range(n)
    ]


def lmat_zero(n, m):
    return [[Laurent.zero() for _ in range(m)] for _ in range(n)]


def lmat_transpose(A):
    if not A:
        return []
    return [list(col) for col in zip(*A)]


def lmat_is_zero(A) -> bool:
    return all(x.is_zero() for row in A for x in row)


def kmat_from_laurent(M, e: int):
    return [[CycloScalar.from_laurent(x, e) for x in row] for row in M]


def kmat_mul(A, B, e: int):
    n, k = len(A), len(B)
    m = len(B[0]) if k else 0
    zero = CycloScalar.zero(e)
    out = [[zero for _ in range(m)] for _ in range(n)]
    for i in range(n):
        oi = out[i]
        for kk in range(k):
            a = A[i][kk]
            if a.is_zero():
                continue
            Bk = B[kk]
            for j in range(m):
                b = Bk[j]
                if not b.is_zero():
                    oi[j] = oi[j] + a * b
    return out


def kmat_add(A, B):
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def kmat_sub(A, B):
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def kmat_scale(A, c):
    return [[c * x for x in row] for row in A]


def kmat_rref(rows, e: int):
    """Exact reduced row echelon form over k_e.  Returns (rank, pivots, R).

    Small-size workhorse (Gauss with CycloScalar field arithmetic); used
    where a deterministic exact answer over k is needed without the modular
    reconstruction machinery.
    """
    R = [list(r) for r in rows]
    n = len(R)
    m = len(R[0]) if n else 0
    pivots = []
    r = 0
    for c in range(m):
        pr = next((i for i in range(r, n) if not R[i][c].is_zero()), None)
        if pr is None:
            continue
        R[r], R[pr] = R[pr], R[r]
        inv = R[r][c].inverse()
        R[r] = [inv * x for x in R[r]]
        for i in range(n):
            if i != r and not R[i][c].is_zero():
                f = R[i][c]
                R[i] = [x - f * y for x, y in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
        if r == n:
            break
    return r, pivots, R


def kmat_solve_exact(cols, rhs_list, e: int):
    """Solve cols * alpha = rhs over k_e for several right-hand sides.

    `cols` are independent column vectors; raises LinalgError when a rhs
    falls outside their span.  Returns one CycloScalar coefficient list per
    rhs.
    """
    r = len(cols)
    if r == 0:
        for rhs in rhs_list:
            if any(not x.is_zero() for x in rhs):
                raise LinalgError("inconsistent k-solve: rhs outside zero span")
        return [[] for _ in rhs_list]
    n = len(cols[0])
    nb = len(rhs_list)
    M = [[cols[j][i] for j in range(r)] + [rhs[i] for rhs in rhs_list]
         for i in range(n)]
    rank = 0
    for c in range(r):
        piv = next((i for i in range(rank, n) if not M[i][c].is_zero()), None)
        if piv is None:
            raise LinalgError("k-solve: columns not independent")
        M[rank], M[piv] = M[piv], M[rank]
        inv = M[rank][c].inverse()
        M[rank] = [inv * x for x in M[rank]]
        for i in range(n):
            if i != rank and not M[i][c].is_zero():
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[rank])]
        rank += 1
    for i in range(rank, n):
        if any(not x.is_zero() for x in M[i][r:]):
            raise LinalgError("inconsistent k-solve: rhs outside span")
    return [[M[row][r + b] for row in range(rank)] for b in range(nb)]


def kmat_nullspace(rows, e: int):
    """Exact right nullspace basis over k_e (echelon convention, free col = 1)."""
    n = len(rows)
    m = len(rows[0]) if n else 0
    if n == 0:
        one = CycloScalar.one(e)
        zero = CycloScalar.zero(e)
        return [[one if i == j else zero for i in range(m)] for j in range(m)]
    rank, pivots, R = kmat_rref(rows, e)
    zero = CycloScalar.zero(e)
    one = CycloScalar.one(e)
    piv_set = set(pivots)
    basis = []
    for fc in range(m):
        if fc in piv_set:
            continue
        v = [zero] * m
        v[fc] = one
        for r, pc in enumerate(pivots):
            v[pc] = zero - R[r][fc]
        basis.append(v)
    return basis


# ---------------------------------------------------------------------------
# linear operators
# ---------------------------------------------------------------------------


class DenseOp:
    """A plain matrix of Laurent entries, as an operator on column vectors."""

    def __init__(self, rows):
        self.rows = rows
        self.nrows = len(rows)
        self.ncols = len(rows[0]) if rows else 0

    def eval_mod(self, theta: int, p: int) -> np.ndarray:
        return lmat_eval(self.rows, theta, p)

    def exact_apply(self, vec):
        out = []
        for row in self.rows:
            acc = Laurent.zero()
            for a, v in zip(row, vec):
                if a.c and v.c:
                    acc = acc + a * v
            out.append(acc)
        return out

    def exact_apply_k(self, vec, e: int):
        out = []
        for row in self.rows:
            acc = CycloScalar.zero(e)
            for a, v in zip(row, vec):
                if a.c and not v.is_zero():
                    acc = acc + CycloScalar.from_laurent(a, e) * v
            out.append(acc)
        return out


class HomOp:
    """Constraints P_s F = F Q_s on an unknown np x nq matrix F.

    Row-major vectorization: vec(A F B) = (A kron B^T) vec(F).
    """

    def __init__(self, P_list, Q_list):
        self.P = P_list
        self.Q = Q_list
        self.np_ = len(P_list[0])
        self.nq = len(Q_list[0])
        self.ngen = len(P_list)
        self.ncols = self.np_ * self.nq
        self.nrows = self.ngen * self.ncols
        self._Pk = None
        self._Qk = None

    def eval_mod(self, theta: int, p: int) -> np.ndarray:
        blocks = []
        eye_p = np.eye(self.np_, dtype=np.int64)
        eye_q = np.eye(self.nq, dtype=np.int64)
        for Ps, Qs in zip(self.P, self.Q):
            Pm = lmat_eval(Ps, theta, p)
            Qm = lmat_eval(Qs, theta, p)
            blk = (np.kron(Pm, eye_q) - np.kron(eye_p, Qm.T)) % p
            blocks.append(blk)
        return np.vstack(blocks)

    def unvec(self, vec):
        return [list(vec[i * self.nq : (i + 1) * self.nq]) for i in range(self.np_)]

    def exact_apply(self, vec):
        F = self.unvec(vec)
        out = []
        for Ps, Qs in zip(self.P, self.Q):
            R = lmat_sub(lmat_mul(Ps, F), lmat_mul(F, Qs))
            for row in R:
                out.extend(row)
        return out

    def exact_apply_k(self, vec, e: int):
        if self._Pk is None:
            self._Pk = [kmat_from_laurent(P, e) for P in self.P]
            self._Qk = [kmat_from_laurent(Q, e) for Q in self.Q]
        F = self.unvec(vec)
        out = []
        for Pk, Qk in zip(self._Pk, self._Qk):
            R = kmat_sub(kmat_mul(Pk, F, e), kmat_mul(F, Qk, e))
            for row in R:
                out.extend(row)
        return out


class CocycleOp:
    """The relation-derivative operator for extension cocycles.

    Unknown: a tuple (C_s) of np x nq matrices.  Constraints:

    * quadratic, per generator s:  P_s C_s + C_s Q_s - (q - 1) C_s = 0;
    * braid, per pair s != s' with Coxeter order m: the two alternating words
      of length m must give the same mixed-block sum
      sum_i P(prefix_i) C_{w_i} Q(suffix_i).

    For an extension 0 -> N -> X -> M -> 0 with block matrices
    [[B^N, c], [0, B^M]], P is the sub side (B^N) and Q the quotient side
    (B^M); the coboundary of a matrix h is the HomOp image P_s h - h Q_s,
    and ker(HomOp) = Hom(M, N).
    """

    def __init__(self, P_list, Q_list, coxeter_m, q_exp: int = 2):
        self.P = P_list
        self.Q = Q_list
        self.m = dict(coxeter_m)  # {(s, s2): order} with s < s2
        self.q = Laurent.t(q_exp)
        self.ngen = len(P_list)
        self.np_ = len(P_list[0])
        self.nq = len(Q_list[0])
        self.block = self.np_ * self.nq
        self.ncols = self.ngen * self.block
        self.pairs = sorted(self.m)
        self.nrows = (self.ngen + len(self.pairs)) * self.block
        self._Pk = None
        self._Qk = None

    @staticmethod
    def braid_words(s, s2, m):
        w1 = tuple(s if i % 2 == 0 else s2 for i in range(m))
        w2 = tuple(s2 if i % 2 == 0 else s for i in range(m))
        return w1, w2

    def eval_mod(self, theta: int, p: int) -> np.ndarray:
        Pm = [lmat_eval(P, theta, p) for P in self.P]
        Qm = [lmat_eval(Q, theta, p) for Q in self.Q]
        qv = self.q.eval_mod(theta, p)
        eye_p = np.eye(self.np_, dtype=np.int64)
        eye_q = np.eye(self.nq, dtype=np.int64)
        rows = []
        for s in range(self.ngen):
            blk = np.zeros((self.block, self.ncols), dtype=np.int64)
            piece = (
                np.kron(Pm[s], eye_q)
                + np.kron(eye_p, Qm[s].T)
                - ((qv - 1) % p) * np.kron(eye_p, eye_q)
            ) % p
            blk[:, s * self.block : (s + 1) * self.block] = piece
            rows.append(blk)
        for (s, s2) in self.pairs:
            m = self.m[(s, s2)]
            w1, w2 = self.braid_words(s, s2, m)
            blk = np.zeros((self.block, self.ncols), dtype=np.int64)
            for word, sign in ((w1, 1), (w2, -1)):
                sufs = [eye_q]
                for g in reversed(word[1:]):
                    sufs.append(matmul_modp(Qm[g], sufs[-1], p))
                sufs.reverse()
                pre = eye_p
                for i, g in enumerate(word):
                    contrib = np.kron(pre, sufs[i].T) % p
                    sl = slice(g * self.block, (g + 1) * self.block)
                    blk[:, sl] = (blk[:, sl] + sign * contrib) % p
                    pre = matmul_modp(pre, Pm[g], p)
            rows.append(blk)
        return np.vstack(rows)

    def unvec(self, vec):
        out = []
        for s in range(self.ngen):
            base = s * self.block
            out.append(
                [
                    list(vec[base + i * self.nq : base + (i + 1) * self.nq])
                    for i in range(self.np_)
                ]
            )
        return out

    def exact_apply(self, vec):
        C = self.unvec(vec)
        out = []
        qm1 = self.q - 1
        for s in range(self.ngen):
            R = lmat_add(lmat_mul(self.P[s], C[s]), lmat_mul(C[s], self.Q[s]))
            R = lmat_sub(R, lmat_scale(C[s], qm1))
            for row in R:
                out.extend(row)
        for (s, s2) in self.pairs:
            m = self.m[(s, s2)]
            w1, w2 = self.braid_words(s, s2, m)
            R = lmat_sub(self._word_block(C, w1), self._word_block(C, w2))
            for row in R:
                out.extend(row)
        return out

    def _word_block(self, C, word):
        acc = lmat_zero(self.np_, self.nq)
        for i in range(len(word)):
            term = C[word[i]]
            for g in word[:i][::-1]:
                term = lmat_mul(self.P[g], term)
            for g in word[i + 1 :]:
                term = lmat_mul(term, self.Q[g])
            acc = lmat_add(acc, term)
        return acc

    def exact_apply_k(self, vec, e: int):
        if self._Pk is None:
            self._Pk = [kmat_from_laurent(P, e) for P in self.P]
            self._Qk = [kmat_from_laurent(Q, e) for Q in self.Q]
        C = self.unvec(vec)
        out = []
        qk = CycloScalar.from_laurent(self.q - 1, e)
        for s in range(self.ngen):
            R = kmat_add(
                kmat_mul(self._Pk[s], C[s], e), kmat_mul(C[s], self._Qk[s], e)
            )
            R = kmat_sub(R, kmat_scale(C[s], qk))
            for row in R:
                out.extend(row)
        for (s, s2) in self.pairs:
            m = self.m[(s, s2)]
            w1, w2 = self.braid_words(s, s2, m)
            R = kmat_sub(self._word_block_k(C, w1, e), self._word_block_k(C, w2, e))
            for row in R:
                out.extend(row)
        return out

    def _word_block_k(self, C, word, e):
        zero = CycloScalar.zero(e)
        acc = [[zero for _ in range(self.nq)] for _ in range(self.np_)]
        for i in range(len(word)):
            term = C[word[i]]
            for g in word[:i][::-1]:
                term = kmat_mul(self._Pk[g], term, e)
            for g in word[i + 1 :]:
                term = kmat_mul(term, self._Qk[g], e)
            acc = kmat_add(acc, term)
        return acc


# ---------------------------------------------------------------------------
# certified kernels
# ---------------------------------------------------------------------------


@dataclass
class KernelResult:
    dim: int
    pivots: tuple
    vectors: list  # Laurent vectors (K-mode, denominators cleared) or CycloScalar vectors
    certified: bool


class LinalgError(ArithmeticError):
    pass


class _Retry(Exception):
    pass


class _RankRise(Exception):
    def __init__(self, rank, pivots):
        self.rank = rank
        self.pivots = pivots


def _consensus(cands):
    """Max rank first, then lexicographically smallest pivot tuple."""
    best = None
    for rank, pivots in cands:
        key = (-rank, pivots)
        if best is None or key < best:
            best = key
    return -best[0], best[1]


def _points_K(op, need, p):
    """RREF data at the first `need` evaluation points theta = 2, 3, ..."""
    out = []
    theta = 2
    while len(out) < need:
        th = theta
        theta += 1
        if th % p == 0:
            continue
        rank, pivots, R = rref_modp(op.eval_mod(th, p), p)
        out.append((th, rank, pivots, R))
    return out


def kernel_dim_upper(op, ring) -> int:
    """Kernel dimension at one specialization: an upper bound for the true
    kernel dimension over Q(t) (ring ('K',)) or over k_e (ring ('k', e))."""
    if ring[0] == "K":
        p = primes_any(1)[0]
        rank, _, _ = rref_modp(op.eval_mod(2, p), p)
        return op.ncols - rank
    e = ring[1]
    p = primes_1mod(2 * e, 1)[0]
    root = phi_roots_mod(e, p)[0]
    rank, _, _ = rref_modp(op.eval_mod(root, p), p)
    return op.ncols - rank


def kernel_certified(op, ring, max_points: int = 4096) -> KernelResult:
    """Exact kernel basis, certified as described in the module docstring."""
    if ring[0] == "K":
        return _kernel_certified_K(op, max_points)
    return _kernel_certified_k(op, ring[1])


def _kernel_certified_K(op, max_points: int) -> KernelResult:
    if op.ncols == 0:
        return KernelResult(0, (), [], True)
    primes = primes_any(8)
    base = _points_K(op, 3, primes[0])
    rank, pivots = _consensus([(r, pv) for _, r, pv, _ in base])
    if op.ncols - rank == 0:
        return KernelResult(0, pivots, [], True)
    n_pts = 8
    n_primes = 2
    while n_pts <= max_points:
        free = [c for c in range(op.ncols) if c not in set(pivots)]
        try:
            vectors = _reconstruct_K(op, primes[:n_primes], rank, pivots, free, n_pts)
        except _RankRise as ex:
            rank, pivots = _consensus([(rank, pivots), (ex.rank, ex.pivots)])
            if op.ncols - rank == 0:
                return KernelResult(0, pivots, [], True)
            continue
        except _Retry:
            vectors = None
        if vectors is not None:
            if all(all(x.is_zero() for x in op.exact_apply(v)) for v in vectors):
                return KernelResult(op.ncols - rank, pivots, vectors, True)
        n_pts *= 2
        if n_pts > 64 and n_primes < len(primes):
            n_primes += 1
    raise LinalgError("kernel reconstruction did not stabilize")


def _reconstruct_K(op, primes, rank, pivots, free, n_pts):
    """Entry-wise rational reconstruction of the echelon kernel basis."""
    per_prime = []
    for p in primes:
        pts = _points_K(op, n_pts + 2, p)
        for _, r, pv, _ in pts:
            if r > rank or (r == rank and pv < pivots):
                raise _RankRise(r, pv)
        good = [(th, R) for th, r, pv, R in pts if r == rank and pv == pivots]
        if len(good) < n_pts + 2:
            raise _Retry
        per_prime.append((p, good[: n_pts + 2]))
    entries = {}  # (pivot_row, free_index) -> [(p, num, den)]
    for p, pts in per_prime:
        xs_all = [th for th, _ in pts]
        xs, xs_chk = xs_all[:-2], xs_all[-2:]
        for r in range(rank):
            for j, col in enumerate(free):
                ys = [int(R[r, col]) for _, R in pts]
                cand = ratfun_reconstruct_modp(xs, ys[:-2], p)
                if cand is None:
                    raise _Retry
                num, den = cand
                for x, y in zip(xs_chk, ys[-2:]):
                    dv = _poly_eval_modp(den, x, p)
                    if dv == 0 or _poly_eval_modp(num, x, p) * pow(dv, -1, p) % p != y % p:
                        raise _Retry
                entries.setdefault((r, j), []).append((p, num, den))
    lifted = {}
    for key, cands in entries.items():
        dn = max(len(n) for _, n, _ in cands)
        dd = max(len(d) for _, _, d in cands)
        if any(len(n) != dn or len(d) != dd for _, n, d in cands):
            raise _Retry  # a prime saw a degree drop: unlucky prime
        num = [_crt_lift([(p, n[i]) for p, n, _ in cands]) for i in range(dn)]
        den = [_crt_lift([(p, d[i]) for p, _, d in cands]) for i in range(dd)]
        if any(x is None for x in num + den):
            raise _Retry
        lifted[key] = _fraclist_to_ratfun(num, den)
    vectors = []
    for j, fcol in enumerate(free):
        rfs = {pivots[r]: -1 * lifted[(r, j)] for r in range(rank)}
        common = Laurent.one()
        seen = set()
        for rf in rfs.values():
            if rf.is_zero():
                continue
            key = str(rf.den)
            if key not in seen:
                seen.add(key)
                common = common * rf.den
        pieces = []
        for c, rf in rfs.items():
            if rf.is_zero():
                continue
            prod = rf * RatFun(common)
            assert prod.den.degree() == 0 and prod.den.valuation_t() == 0
            pieces.append((c, prod.num, prod.den.coeff(0)))
        L = 1
        for _, _, s in pieces:
            L = L * s // gcd(L, s)
        vec = [Laurent.zero()] * op.ncols
        for c, numpoly, s in pieces:
            vec[c] = numpoly * (L // s)
        vec[fcol] = common * L
        _normalize_int_vector(vec)
        vectors.append(vec)
    return vectors


def _fraclist_to_ratfun(num, den):
    nl, nd = _fraclist_to_laurent(num)
    dl, dd = _fraclist_to_laurent(den)
    return RatFun(nl * dd, dl * nd)


def _fraclist_to_laurent(cs):
    d = 1
    for c in cs:
        d = d * c.denominator // gcd(d, c.denominator)
    out = {}
    for i, c in enumerate(cs):
        v = int(c * d)
        if v:
            out[i] = v
    return Laurent(out), d


def _normalize_int_vector(vec):
    """In place: divide by integer content; make the first coefficient of the
    first nonzero entry positive (a deterministic sign convention)."""
    g = 0
    for x in vec:
        g = gcd(g, x.content())
    if g > 1:
        for i, x in enumerate(vec):
            vec[i] = Laurent({k: v // g for k, v in x.c.items()})
    for x in vec:
        if x.c:
            if x.c[min(x.c)] < 0:
                for i, y in enumerate(vec):
                    vec[i] = -y
            break
    return vec


def _kernel_certified_k(op, e: int) -> KernelResult:
    if op.ncols == 0:
        return KernelResult(0, (), [], True)
    d = _phi_degree(e)
    primes = primes_1mod(2 * e, 8)
    cands = []
    for p in primes[:2]:
        for th in phi_roots_mod(e, p):
            rank, pivots, _ = rref_modp(op.eval_mod(th, p), p)
            cands.append((rank, pivots))
    rank, pivots = _consensus(cands)
    dim = op.ncols - rank
    if dim == 0:
        return KernelResult(0, pivots, [], True)
    free = [c for c in range(op.ncols) if c not in set(pivots)]
    for n_primes in (2, 3, 4, 6, 8):
        try:
            vectors = _reconstruct_k(op, e, primes[:n_primes], rank, pivots, free, d)
        except _Retry:
            continue
        if all(all(x.is_zero() for x in op.exact_apply_k(v, e)) for v in vectors):
            return KernelResult(dim, pivots, vectors, True)
    raise LinalgError("k-kernel reconstruction did not stabilize")


def _reconstruct_k(op, e, primes, rank, pivots, free, d):
    per_prime = []
    for p in primes:
        datas = []
        for th in phi_roots_mod(e, p):
            r, pv, R = rref_modp(op.eval_mod(th, p), p)
            if r > rank:
                raise LinalgError("k-mode consensus rank too small")
            if r == rank and pv == pivots:
                datas.append((th, R))
        if len(datas) < d:
            raise _Retry
        per_prime.append((p, datas[:d]))
    vectors = []
    one = CycloScalar.one(e)
    zero = CycloScalar.zero(e)
    for j, col in enumerate(free):
        vec = [zero] * op.ncols
        vec[col] = one
        for r in range(rank):
            residues = []
            for p, datas in per_prime:
                xs = [th for th, _ in datas]
                ys = [(-int(R[r, col])) % p for _, R in datas]
                coeffs = newton_interp_modp(xs, ys, p)
                coeffs = coeffs + [0] * (d - len(coeffs))
                residues.append((p, coeffs))
            lifted = []
            for i in range(d):
                fr = _crt_lift([(p, cs[i]) for p, cs in residues])
                if fr is None:
                    raise _Retry
                lifted.append(fr)
            vec[pivots[r]] = CycloScalar(e, tuple(lifted))
        vectors.append(vec)
    return vectors


# ---------------------------------------------------------------------------
# lattices over the DVR
# ---------------------------------------------------------------------------


def vector_phi_normalize(vec, e: int):
    """In place: divide an integer Laurent vector by content and Phi^max."""
    _normalize_int_vector(vec)
    phi = phi_for_e(e)
    while any(not x.is_zero() for x in vec):
        try:
            nxt = [x.divexact(phi) if not x.is_zero() else x for x in vec]
        except ValueError:
            break
        vec[:] = nxt
    return vec


def saturate_dvr(vectors, e: int):
    """Phi-saturate a K-independent family of integer Laurent vectors.

    Returns a basis of the saturated lattice whose reductions mod Phi_{2e}
    are k-independent, certified by a full-rank specialization.
    """
    vecs = [vector_phi_normalize(list(v), e) for v in vectors]
    if not vecs:
        return vecs
    while True:
        if _mod_phi_independent(vecs, e):
            return vecs
        cols = [[v[i] for v in vecs] for i in range(len(vecs[0]))]
        res = kernel_certified(DenseOp(cols), ("k", e))
        if res.dim == 0:
            # both specializations were unlucky; certified independent now
            return vecs
        coeffs = res.vectors[0]
        den = 1
        for c in coeffs:
            for fr in c.v:
                den = den * fr.denominator // gcd(den, fr.denominator)
        lifts = []
        for c in coeffs:
            out = {}
            for i, fr in enumerate(c.v):
                v = int(fr * den)
                if v:
                    out[i] = v
            lifts.append(Laurent(out))
        comb = [Laurent.zero()] * len(vecs[0])
        for lf, v in zip(lifts, vecs):
            if lf.is_zero():
                continue
            for i, x in enumerate(v):
                comb[i] = comb[i] + lf * x
        phi = phi_for_e(e)
        comb = [x.divexact(phi) if not x.is_zero() else x for x in comb]
        vector_phi_normalize(comb, e)
        last = max(i for i, lf in enumerate(lifts) if not lf.is_zero())
        vecs[last] = comb


def _mod_phi_independent(vecs, e: int) -> bool:
    for idx in (0, 1):
        p = primes_1mod(2 * e, 2)[idx]
        root = phi_roots_mod(e, p)[0]
        A = np.zeros((len(vecs[0]), len(vecs)), dtype=np.int64)
        for j, v in enumerate(vecs):
            for i, x in enumerate(v):
                if x.c:
                    A[i, j] = x.eval_mod(root, p)
        rank, _, _ = rref_modp(A, p)
        if rank == len(vecs):
            return True
    return False


def smith_dvr(rows, e: int):
    """Invariant-factor Phi-exponents of a matrix over the localization Q_e.

    Entries may be Laurent or RatFun (denominators prime to Phi).  Returns
    the nondecreasing list of exponents, one per nonzero invariant factor.
    """

    def to_rf(x):
        return x if isinstance(x, RatFun) else RatFun(x)

    M = [[to_rf(x) for x in row] for row in rows]
    nr = len(M)
    nc = len(M[0]) if nr else 0

    def val(x: RatFun):
        if x.is_zero():
            return None
        return phi_valuation(x.num, e) - phi_valuation(x.den, e)

    exponents = []
    r = 0
    while r < min(nr, nc):
        best = None
        for i in range(r, nr):
            for j in range(r, nc):
                v = val(M[i][j])
                if v is not None and (best is None or v < best[0]):
                    best = (v, i, j)
        if best is None:
            break
        v, bi, bj = best
        if bi != r:
            M[r], M[bi] = M[bi], M[r]
        if bj != r:
            for row in M:
                row[r], row[bj] = row[bj], row[r]
        piv = M[r][r]
        for i in range(r + 1, nr):
            if not M[i][r].is_zero():
                f = M[i][r] * piv.inverse()
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        for j in range(r + 1, nc):
            if not M[r][j].is_zero():
                f = M[r][j] * piv.inverse()
                for i in range(r, nr):
                    M[i][j] = M[i][j] - f * M[i][r]
        exponents.append(v)
        r += 1
    assert exponents == sorted(exponents), "DVR Smith exponents not sorted"
    return exponents


def solve_dvr(op, rhs, e: int):
    """Solve op(x) = rhs over the localization Q_e.

    Returns (x_num, den) with den a Phi-unit Laurent polynomial (the solution
    is x_num / den entrywise), or None when no solution exists over Q_e.

    Method: certified kernel of the one-column augmentation [op | -rhs],
    saturated over the DVR.  A lattice vector with unit last coordinate
    exists iff one of the saturated basis vectors has one (valuations only
    rise under Q_e-combinations).
    """

    class _Aug:
        def __init__(self):
            self.nrows = op.nrows
            self.ncols = op.ncols + 1

        def eval_mod(self, theta, p):
            A = op.eval_mod(theta, p)
            b = np.array([[x.eval_mod(theta, p)] for x in rhs], dtype=np.int64)
            return np.hstack([A % p, (-b) % p])

        def exact_apply(self, vec):
            out = op.exact_apply(list(vec[:-1]))
            return [a - b * vec[-1] for a, b in zip(out, rhs)]

        def exact_apply_k(self, vec, ee):
            out = op.exact_apply_k(list(vec[:-1]), ee)
            return [
                a - CycloScalar.from_laurent(b, ee) * vec[-1]
                for a, b in zip(out, rhs)
            ]

    res = kernel_certified(_Aug(), ("K",))
    if res.dim == 0:
        return None
    basis = saturate_dvr(res.vectors, e)
    for v in basis:
        last = v[-1]
        if not last.is_zero() and phi_valuation(last, e) == 0:
            return list(v[:-1]), last
    return None


# ---------------------------------------------------------------------------
# small exact routines (test oracles, t = 1 ranks)
# ---------------------------------------------------------------------------


def rational_rank(rows) -> int:
    """Exact rank over Q of a matrix of ints/Fractions."""
    M = [[Fraction(x) for x in row] for row in rows]
    nr = len(M)
    nc = len(M[0]) if nr else 0
    rank = 0
    for c in range(nc):
        piv = None
        for i in range(rank, nr):
            if M[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        inv = Fraction(1) / M[rank][c]
        M[rank] = [x * inv for x in M[rank]]
        for i in range(nr):
            if i != rank and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[rank])]
        rank += 1
        if rank == nr:
            break
    return rank


def ratfun_kernel_exact(rows):
    """Exact kernel over Q(t) by fraction-field elimination (small matrices).

    Returns (basis, pivots) with basis vectors in echelon shape, entries
    RatFun.  An independent oracle for the certified kernel.
    """
    M = [[x if isinstance(x, RatFun) else RatFun(x) for x in row] for row in rows]
    nr = len(M)
    nc = len(M[0]) if nr else 0
    pivots = []
    rank = 0
    for c in range(nc):
        piv = None
        for i in range(rank, nr):
            if not M[i][c].is_zero():
                piv = i
                break
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        inv = M[rank][c].inverse()
        M[rank] = [x * inv for x in M[rank]]
        for i in range(nr):
            if i != rank and not M[i][c].is_zero():
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[rank])]
        pivots.append(c)
        rank += 1
        if rank == nr:
            break
    free = [c for c in range(nc) if c not in set(pivots)]
    basis = []
    for j in free:
        v = [RatFun.zero()] * nc
        v[j] = RatFun.one()
        for r, c in enumerate(pivots):
            v[c] = -1 * M[r][j]
        basis.append(v)
    return basis, tuple(pivots)


def ratfun_solve_exact(cols, rhs_list):
    """Solve cols * alpha = rhs exactly over Q(t) for several right-hand sides.

    `cols` is a list of column vectors (Laurent or RatFun entries) assumed
    independent; each rhs must lie in their span (raises LinalgError if not).
    Returns one coefficient list per rhs.  Sizes here are small (the columns
    are a lattice basis), so plain fraction-field elimination is fine.
    """
    r = len(cols)
    if r == 0:
        for rhs in rhs_list:
            if any(not x.is_zero() for x in rhs):
                raise LinalgError("inconsistent solve: rhs outside zero span")
        return [[] for _ in rhs_list]
    n = len(cols[0])
    nb = len(rhs_list)

    def _rf(x):
        return x if isinstance(x, RatFun) else RatFun(x)

    # augmented rows [cols | rhs_1 ... rhs_nb], eliminate to echelon
    M = [[_rf(cols[j][i]) for j in range(r)] + [_rf(rhs[i]) for rhs in rhs_list]
         for i in range(n)]
    rank = 0
    piv_rows = []
    for c in range(r):
        piv = next((i for i in range(rank, n) if not M[i][c].is_zero()), None)
        if piv is None:
            raise LinalgError("solve: columns not independent")
        M[rank], M[piv] = M[piv], M[rank]
        inv = M[rank][c].inverse()
        M[rank] = [x * inv for x in M[rank]]
        for i in range(n):
            if i != rank and not M[i][c].is_zero():
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[rank])]
        piv_rows.append(rank)
        rank += 1
    for i in range(rank, n):
        if any(not x.is_zero() for x in M[i][r:]):
            raise LinalgError("inconsistent solve: rhs outside span")
    return [[M[row][r + b] for row in range(rank)] for b in range(nb)]
