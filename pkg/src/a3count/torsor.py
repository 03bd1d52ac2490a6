"""Integral points on the universal torsor of the A3 surface.

For a class tuple C = (C0, ..., C5) the points eta = (eta1, ..., eta9) with
eta_j in O_j satisfy

    eta1 eta4^2 eta7 + eta3 eta6^2 eta8 + eta5 eta9 = 0,

five height conditions N(Psi_i(eta)) <= u_C B and coprimality of
I_j = eta_j O_j^-1 for the non-edges of the curve graph.  Summing |M_C(B)|
over all tuples and dividing by omega^6 gives the number of points of U
with height <= B.

The enumerator works with integral numerators: O_j = J_j / n_j and
xi_j = n_j eta_j in J_j.  Because the unit torus (O_K^x)^6 acts on
eta1..eta6 by independent scalings, it enumerates only points with
eta1..eta6 equal to their canonical associate; each orbit of size omega^6
contains exactly one of those.
"""
from __future__ import annotations

import itertools
import math
from bisect import bisect_right
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .lattice import enumerate_pairs, ideal_lattice
from .number_field import Elem, FieldContext, FracIdeal, make_field
from .surface import ProjPoint5

# edges of the configuration of curves E1..E9
EDGES = frozenset({(1, 2), (1, 4), (2, 3), (2, 5), (3, 6), (4, 7), (5, 9), (6, 8), (7, 8), (7, 9), (8, 9)})
NONADJACENT = tuple((j, k) for j in range(1, 10) for k in range(j + 1, 10) if (j, k) not in EDGES)

# classes of E1..E9 in Pic, in the basis E1..E6
PIC_DEGREES = {
    1: (1, 0, 0, 0, 0, 0), 2: (0, 1, 0, 0, 0, 0), 3: (0, 0, 1, 0, 0, 0),
    4: (0, 0, 0, 1, 0, 0), 5: (0, 0, 0, 0, 1, 0), 6: (0, 0, 0, 0, 0, 1),
    7: (0, 1, 1, -1, 1, 1), 8: (1, 1, 0, 1, 1, -1), 9: (1, 1, 1, 1, 0, 1),
}

# exponents of eta1..eta9 in the five coordinates of Psi (also the height monomials)
PSI_EXPONENTS = (
    (2, 2, 1, 2, 1, 0, 1, 0, 0),
    (1, 2, 2, 0, 1, 2, 0, 1, 0),
    (2, 3, 2, 1, 2, 1, 0, 0, 0),
    (1, 1, 1, 1, 0, 1, 1, 1, 0),
    (0, 0, 0, 0, 0, 0, 1, 1, 1),
)

LOOP_ORDER = (2, 1, 3, 5, 4, 6, 7)


@dataclass(frozen=True)
class ClassTuple:
    idx: tuple
    u: Fraction

    def to_str(self) -> str:
        return "(" + ",".join(map(str, self.idx)) + ")"


def class_tuples(ctx: FieldContext) -> list[ClassTuple]:
    reps = ctx.class_reps
    out = []
    for idx in itertools.product(range(len(reps)), repeat=6):
        C = [reps[i] for i in idx]
        I = C[0] ** 3
        for Ci in C[1:]:
            I = I / Ci
        out.append(ClassTuple(idx, I.norm))
    return out


@dataclass(frozen=True)
class TorsorIdeals:
    O: tuple  # O[1..9]; O[0] is None

    def __getitem__(self, j):
        return self.O[j]


def torsor_ideals(ctx: FieldContext, C: ClassTuple | tuple) -> TorsorIdeals:
    idx = C.idx if isinstance(C, ClassTuple) else tuple(C)
    C0, C1, C2, C3, C4, C5 = (ctx.class_reps[i] for i in idx)
    O = (None, C1 / C4, C0 / (C1 * C2 * C3), C2 / C5, C4, C3, C5, C0 / (C1 * C4), C0 / (C2 * C5), C0 / C3)
    m1 = O[1] * O[4] ** 2 * O[7]
    m2 = O[3] * O[6] ** 2 * O[8]
    m3 = O[5] * O[9]
    assert m1 == m2 == m3, "torsor monomial ideals differ"
    return TorsorIdeals(O)


@dataclass(frozen=True)
class TorsorPoint:
    eta: tuple  # eta[0..8] = eta1..eta9 as Elem
    classtuple: tuple = ()

    def __getitem__(self, j):
        return self.eta[j - 1]

    def key(self):
        return (self.classtuple,) + tuple(e.key() for e in self.eta)

    def to_str(self) -> str:
        from .surface import _fmt_elem

        return " ".join(_fmt_elem(e) for e in self.eta)


# ---------------------------------------------------------------------------
# single-point operations


def _monomial(etas, exps, ctx):
    out = ctx.one
    for e, k in zip(etas, exps):
        if k:
            out = out * e ** k
    return out


def height_ok(ctx: FieldContext, etas, bound) -> bool:
    """The five height conditions for (eta1, ..., eta8) with bound u_C B.

    The fifth uses (eta1 eta4^2 eta7^2 eta8 + eta3 eta6^2 eta7 eta8^2) / eta5.
    """
    e = [x if isinstance(x, Elem) else ctx.elem(x) for x in etas[:8]]
    if e[4].is_zero():
        raise ValueError("eta5 must be nonzero")
    if bound == math.inf:
        return True
    bound = Fraction(bound)
    for exps in PSI_EXPONENTS[:4]:
        if _monomial(e, exps[:8], ctx).norm() > bound:
            return False
    e1, e2, e3, e4, e5, e6, e7, e8 = e
    f = (e1 * e4 * e4 * e7 * e7 * e8 + e3 * e6 * e6 * e7 * e8 * e8) / e5
    return f.norm() <= bound


def solve_eta9(ctx: FieldContext, e1, e3, e4, e5, e6, e7, e8, O9: FracIdeal) -> Elem | None:
    """-(eta1 eta4^2 eta7 + eta3 eta6^2 eta8) / eta5 if it lies in O9, else None."""
    if e5.is_zero():
        raise ValueError("eta5 must be nonzero")
    e9 = -(e1 * e4 * e4 * e7 + e3 * e6 * e6 * e8) / e5
    return e9 if e9 in O9 else None


def coprime_ok(ideals, edges=EDGES) -> bool:
    """ideals[1..9] integral (None for the zero ideal); every non-edge must be coprime.

    {0} + J = J, so the zero ideal is coprime to J only when J = O_K.
    """
    for j in range(1, 10):
        for k in range(j + 1, 10):
            if (j, k) in edges:
                continue
            a, b = ideals[j], ideals[k]
            if a is None and b is None:
                return False
            s = b if a is None else a if b is None else a + b
            if not s.is_unit():
                return False
    return True


def point_ideals(ctx: FieldContext, O: TorsorIdeals, etas) -> list:
    out = [None]
    for j in range(1, 10):
        e = etas[j - 1]
        out.append(None if e.is_zero() else ctx.ideal(e) / O[j])
    return out


def map_to_surface(ctx: FieldContext, tp: TorsorPoint | tuple) -> ProjPoint5:
    etas = tp.eta if isinstance(tp, TorsorPoint) else tuple(tp)
    return ProjPoint5(tuple(_monomial(etas, exps, ctx) for exps in PSI_EXPONENTS))


def verify_point(ctx: FieldContext, C: ClassTuple, tp: TorsorPoint, B) -> list[str]:
    """Check every defining condition of M_C(B) from scratch; returns the failures."""
    fails = []
    O = torsor_ideals(ctx, C)
    e = tp.eta
    for j in range(1, 10):
        if e[j - 1] not in O[j]:
            fails.append(f"eta{j} not in O{j}")
        if j <= 8 and e[j - 1].is_zero():
            fails.append(f"eta{j} is zero")
    if fails:
        return fails
    t = e[0] * e[3] ** 2 * e[6] + e[2] * e[5] ** 2 * e[7] + e[4] * e[8]
    if not t.is_zero():
        fails.append("torsor equation")
    bound = C.u * Fraction(B)
    for i, exps in enumerate(PSI_EXPONENTS):
        if _monomial(e, exps, ctx).norm() > bound:
            fails.append(f"height condition {i + 1}")
    I = point_ideals(ctx, O, e)
    for j, k in NONADJACENT:
        a, b = I[j], I[k]
        s = b if a is None else a if b is None else a + b
        if s is None or not s.is_unit():
            fails.append(f"coprimality {j},{k}")
    return fails


def unit_orbit(ctx: FieldContext, etas) -> list[tuple]:
    """All images of eta under the unit torus (O_K^x)^6, acting through PIC_DEGREES."""
    U = [Elem(ctx, *u) for u in ctx.units]
    out = []
    for ts in itertools.product(U, repeat=6):
        new = []
        for j in range(1, 10):
            s = ctx.one
            for t, k in zip(ts, PIC_DEGREES[j]):
                if k:
                    s = s * t ** k
            new.append(etas[j - 1] * s)
        out.append(tuple(new))
    return out


# ---------------------------------------------------------------------------
# enumeration kernel


def _iroot(q: int, k: int) -> int:
    """Largest r >= 0 with r^k <= q."""
    if q < 0:
        return -1
    if k == 1:
        return q
    if k == 2:
        return math.isqrt(q)
    r = int(round(q ** (1.0 / k)))
    while r ** k > q:
        r -= 1
    while (r + 1) ** k <= q:
        r += 1
    return r


class _Coprime:
    """I_j + I_k = O_K for integral ideals I_j = xi_j J_j^-1, with a norm shortcut."""

    def __init__(self, ctx: FieldContext, J: list):
        self.ctx, self.J = ctx, J
        self.NJ = [None if Jj is None else int(Jj.norm) for Jj in J]
        self.cache: dict = {}

    def ideal(self, j, x):
        key = (j, x)
        I = self.cache.get(key)
        if I is None:
            I = self.ctx.ideal(Elem(self.ctx, *x)) / self.J[j]
            self.cache[key] = I
        return I

    def ok(self, j, x, nx, k, y, ny) -> bool:
        """nx, ny are N(I_j), N(I_k)."""
        if math.gcd(nx, ny) == 1:
            return True
        if self.ctx.rational:
            return False
        return (self.ideal(j, x) + self.ideal(k, y)).is_unit()


@dataclass
class _Setup:
    ctx: FieldContext
    C: ClassTuple
    O: TorsorIdeals
    n: list  # denominators n_j
    J: list  # integral numerators J_j
    F: list  # integer thresholds for the xi-form of conditions 1..5
    mins: list  # N(J_j)


def _setup(ctx: FieldContext, C: ClassTuple, B: Fraction) -> _Setup:
    O = torsor_ideals(ctx, C)
    e = 1 if ctx.rational else 2
    n = [None] + [O[j].den for j in range(1, 10)]
    J = [None] + [FracIdeal(ctx, 1, O[j].a, O[j].b, O[j].c) for j in range(1, 10)]
    X = C.u * B
    F = []
    for exps in PSI_EXPONENTS:
        s = 1
        for j, k in enumerate(exps, start=1):
            s *= n[j] ** (e * k)
        F.append(math.floor(X * s))
    mins = [None] + [int(J[j].norm) for j in range(1, 10)]
    return _Setup(ctx, C, O, n, J, F, mins)


def _element_lists(S: _Setup, normalize: bool):
    """Per variable, elements of J_j sorted by norm up to the a-priori bound."""
    ctx = S.ctx
    lists = {}
    for v in LOOP_ORDER:
        bound = None
        for i, exps in enumerate(PSI_EXPONENTS[:4]):
            k = exps[v - 1]
            if not k:
                continue
            rest = 1
            for j in range(1, 9):
                if j != v:
                    rest *= S.mins[j] ** exps[j - 1]
            b = _iroot(S.F[i] // rest, k)
            bound = b if bound is None else min(bound, b)
        L = ideal_lattice(ctx, S.J[v])
        pts = [p for p in enumerate_pairs(L, norm_bound=max(bound, 0)) if p != (0, 0)]
        if normalize and v <= 6:
            pts = [p for p in pts if ctx.canonical_associate(p) == p]
        norms = [ctx.norm_form(*p) for p in pts]
        lists[v] = (pts, norms)
    return lists


def _rest_mins(S: _Setup):
    """rest[pos][i]: product of min norms^exponent over variables after position pos (eta8 included)."""
    order = LOOP_ORDER + (8,)
    out = []
    for pos in range(len(order)):
        row = []
        for exps in PSI_EXPONENTS[:4]:
            r = 1
            for v in order[pos + 1 :]:
                r *= S.mins[v] ** exps[v - 1]
            row.append(r)
        out.append(row)
    return out


def _bound(S, pos, v, prods, rest):
    """Largest admissible N(xi_v) given the partial products."""
    b = None
    for i in range(4):
        k = PSI_EXPONENTS[i][v - 1]
        if not k:
            continue
        q = S.F[i] // (prods[i] * rest[pos][i])
        r = _iroot(q, k)
        b = r if b is None else min(b, r)
    return b


def _mulp(ctx, x, y):
    return ctx.mul_pair(x, y)


def enumerate_xi(ctx: FieldContext, C: ClassTuple, B, normalize: bool = True, eta2_slice=None,
                 fast: bool = True):
    """Yield xi = (xi1, ..., xi9) integer pairs for the points of M_C(B).

    With normalize, xi1..xi6 run over canonical associates only.  Over Q,
    `fast` solves for eta8 by intervals and a congruence instead of the
    generic disc search.
    eta2_slice = (k, m) keeps every m-th eta2 candidate starting at k.
    """
    B = Fraction(B)
    S = _setup(ctx, C, B)
    lists = _element_lists(S, normalize)
    rest = _rest_mins(S)
    cop = _Coprime(ctx, S.J)
    e = 1 if ctx.rational else 2
    NJ = S.mins
    n = S.n
    mul = ctx.mul_pair
    nf = ctx.norm_form

    # eta9 = -(xi1 xi4^2 xi7 / (n1 n4^2 n7) + xi3 xi6^2 xi8 / (n3 n6^2 n8)) * n5 / xi5
    # xi9 = n9 eta9
    d1 = n[1] * n[4] ** 2 * n[7]
    d2 = n[3] * n[6] ** 2 * n[8]
    L8 = ideal_lattice(ctx, S.J[8])
    J9 = S.J[9]
    F5 = S.F[4]
    Xf = float(C.u * B)

    P2, N2 = lists[2]
    P1, N1 = lists[1]
    P3, N3 = lists[3]
    P5, N5 = lists[5]
    P4, N4 = lists[4]
    P6, N6 = lists[6]
    P7, N7 = lists[7]
    E = PSI_EXPONENTS
    fast_q = fast and ctx.rational

    def nI(j, nx):
        return nx // NJ[j]

    for i2 in range(len(P2)):
        if eta2_slice is not None and i2 % eta2_slice[1] != eta2_slice[0]:
            continue
        x2, v2 = P2[i2], N2[i2]
        pr2 = [v2 ** E[i][1] for i in range(4)]
        b1 = _bound(S, 1, 1, pr2, rest)
        for i1 in range(bisect_right(N1, b1)):
            x1, v1 = P1[i1], N1[i1]
            pr1 = [pr2[i] * v1 ** E[i][0] for i in range(4)]
            b3 = _bound(S, 2, 3, pr1, rest)
            for i3 in range(bisect_right(N3, b3)):
                x3, v3 = P3[i3], N3[i3]
                if not cop.ok(1, x1, nI(1, v1), 3, x3, nI(3, v3)):
                    continue
                pr3 = [pr1[i] * v3 ** E[i][2] for i in range(4)]
                b5 = _bound(S, 3, 5, pr3, rest)
                for i5 in range(bisect_right(N5, b5)):
                    x5, v5 = P5[i5], N5[i5]
                    if not (cop.ok(1, x1, nI(1, v1), 5, x5, nI(5, v5)) and cop.ok(3, x3, nI(3, v3), 5, x5, nI(5, v5))):
                        continue
                    pr5 = [pr3[i] * v5 ** E[i][4] for i in range(4)]
                    b4 = _bound(S, 4, 4, pr5, rest)
                    for i4 in range(bisect_right(N4, b4)):
                        x4, v4 = P4[i4], N4[i4]
                        n4 = nI(4, v4)
                        if not (cop.ok(2, x2, nI(2, v2), 4, x4, n4) and cop.ok(3, x3, nI(3, v3), 4, x4, n4)
                                and cop.ok(4, x4, n4, 5, x5, nI(5, v5))):
                            continue
                        pr4 = [pr5[i] * v4 ** E[i][3] for i in range(4)]
                        b6 = _bound(S, 5, 6, pr4, rest)
                        for i6 in range(bisect_right(N6, b6)):
                            x6, v6 = P6[i6], N6[i6]
                            n6 = nI(6, v6)
                            if not (cop.ok(1, x1, nI(1, v1), 6, x6, n6) and cop.ok(2, x2, nI(2, v2), 6, x6, n6)
                                    and cop.ok(4, x4, n4, 6, x6, n6) and cop.ok(5, x5, nI(5, v5), 6, x6, n6)):
                                continue
                            pr6 = [pr4[i] * v6 ** E[i][5] for i in range(4)]
                            # condition 3 involves eta1..eta6 only
                            if pr6[2] > S.F[2]:
                                continue
                            b7 = _bound(S, 6, 7, pr6, rest)
                            x36 = mul(x3, mul(x6, x6))
                            x144 = mul(x1, mul(x4, x4))
                            for i7 in range(bisect_right(N7, b7)):
                                x7, v7 = P7[i7], N7[i7]
                                n7 = nI(7, v7)
                                if not (cop.ok(1, x1, nI(1, v1), 7, x7, n7) and cop.ok(2, x2, nI(2, v2), 7, x7, n7)
                                        and cop.ok(3, x3, nI(3, v3), 7, x7, n7) and cop.ok(5, x5, nI(5, v5), 7, x7, n7)
                                        and cop.ok(6, x6, n6, 7, x7, n7)):
                                    continue
                                pr7 = [pr6[i] * v7 ** E[i][6] for i in range(4)]
                                b8 = _bound(S, 7, 8, pr7, rest)
                                if b8 < NJ[8]:
                                    continue
                                P = mul(x144, x7)
                                if fast_q:
                                    yield from _eta8_rational(S, (x1, x2, x3, x4, x5, x6, x7), P[0], x36[0], b8)
                                else:
                                    yield from _eta8(ctx, S, cop, L8, J9, F5, Xf, d1, d2, e,
                                                     (x1, x2, x3, x4, x5, x6, x7), (v1, v2, v3, v4, v5, v6, v7),
                                                     P, x36, b8)


def _eta8(ctx, S, cop, L8, J9, F5, Xf, d1, d2, e, xs, vs, P, x36, b8):
    """Candidates for xi8, then xi9 solved; yields complete xi 9-tuples."""
    x1, x2, x3, x4, x5, x6, x7 = xs
    v1, v2, v3, v4, v5, v6, v7 = vs
    n = S.n
    NJ = S.mins
    mul = ctx.mul_pair
    nf = ctx.norm_form
    # eta-space: Pe = P/d1, Qe = x36/(n3 n6^2), eta8 = xi8/n8
    # condition 5 reads N(eta7) N(eta8) N(Pe + Qe eta8) <= X N(eta5), so
    # eta8 lies within T of 0 or of -Pe/Qe, T = sqrt(X N5 / (N7 NQ)) in norm units
    n3n6 = n[3] * n[6] ** 2
    N_eta5 = Fraction(v5, n[5] ** e)
    N_eta7 = Fraction(v7, n[7] ** e)
    N_Q = Fraction(nf(*x36), n3n6 ** e)
    T = math.sqrt(Xf * float(N_eta5) / (float(N_eta7) * float(N_Q)))
    # bound in xi8 units with a safety margin; exact checks follow
    Tx = Fraction(T * n[8] ** e) * Fraction(1000001, 1000000) + Fraction(1, 10 ** 6)
    centre = -(Elem(ctx, *P, d1) / Elem(ctx, *x36, n3n6)) * n[8]
    seen = set()
    cands = []
    for c in (None, centre):
        for y in enumerate_pairs(L8, c, norm_bound=Tx):
            if y not in seen and y != (0, 0):
                seen.add(y)
                cands.append(y)
    cands.sort(key=lambda y: (nf(*y), y))
    n5n9 = n[5] * n[9]
    for x8 in cands:
        v8 = nf(*x8)
        if v8 > b8:
            continue
        # conditions 2 and 4
        ok = True
        for i in (1, 3):
            ex = PSI_EXPONENTS[i]
            val = v8
            for j, vj in enumerate(vs, start=1):
                val *= vj ** ex[j - 1]
            if val > S.F[i]:
                ok = False
                break
        if not ok:
            continue
        # xi9 = -n9 n5 (P/d1 + x36 x8/(n3n6^2 n8)) / xi5
        num = mul(P, (d2, 0))
        t2 = mul(mul(x36, x8), (d1, 0))
        num = (num[0] + t2[0], num[1] + t2[1])
        num = mul(num, ctx.conj_pair(x5))
        den = d1 * d2 * mul(x5, ctx.conj_pair(x5))[0]
        a9, b9 = -num[0] * n5n9, -num[1] * n5n9
        if a9 % den or b9 % den:
            continue
        x9 = (a9 // den, b9 // den)
        if not S.J[9].contains_pair(x9):
            continue
        v9 = nf(*x9)
        # condition 5: N(xi7 xi8 xi9) <= F5
        if v7 * v8 * v9 > F5:
            continue
        n8i = v8 // NJ[8]
        if not all(cop.ok(j, xs[j - 1], vs[j - 1] // NJ[j], 8, x8, n8i) for j in (1, 2, 3, 4, 5)):
            continue
        if x9 == (0, 0):
            if not all(vs[j - 1] == NJ[j] for j in (1, 2, 3, 4, 6)):
                continue
        else:
            n9i = v9 // NJ[9]
            if not all(cop.ok(j, xs[j - 1], vs[j - 1] // NJ[j], 9, x9, n9i) for j in (1, 2, 3, 4, 6)):
                continue
        yield (x1, x2, x3, x4, x5, x6, x7, x8, x9)


def _quad_interval(Q: int, P: int, c: int):
    """Integers y with Q y^2 + P y + c <= 0 (Q > 0) as (lo, hi), or None."""
    D = P * P - 4 * Q * c
    if D < 0:
        return None
    s = math.isqrt(D)
    g = lambda y: (Q * y + P) * y + c
    lo = (-P - s) // (2 * Q)
    hi = (-P + s) // (2 * Q) + 1
    while g(lo) > 0 and lo <= hi:
        lo += 1
    while g(lo - 1) <= 0:
        lo -= 1
    while g(hi) > 0 and hi >= lo:
        hi -= 1
    while g(hi + 1) <= 0:
        hi += 1
    return (lo, hi) if lo <= hi else None


def _eta8_rational(S, xs, P: int, Q: int, b8: int):
    """Over Q: |xi7 xi8 xi9| <= F5 with xi9 = -(P + Q xi8)/xi5 is a pair of
    quadratic inequalities in xi8, and xi5 | P + Q xi8 is a congruence."""
    a1, a2, a3, a4, a5, a6, a7 = (x[0] for x in xs)
    p0, q0 = P, Q
    m = abs(a5)
    Y = S.F[4] * m // abs(a7)
    if Q < 0:
        P, Q = -P, -Q
    r = (-P * pow(Q, -1, m)) % m if m > 1 else 0
    outer = _quad_interval(Q, P, -Y)
    if outer is None:
        return
    lo, hi = max(outer[0], -b8), min(outer[1], b8)
    hole = _quad_interval(Q, P, Y + 1)
    pieces = [(lo, hi)] if hole is None else [(lo, min(hi, hole[0] - 1)), (max(lo, hole[1] + 1), hi)]
    g8 = abs(a1 * a2 * a3 * a4 * a5)
    g9 = abs(a1 * a2 * a3 * a4 * a6)
    F5 = S.F[4]
    for a, b in pieces:
        y = a + (r - a) % m
        while y <= b:
            if y and math.gcd(y, g8) == 1:
                x9 = -(p0 + q0 * y) // a5
                if abs(a7 * y * x9) <= F5 and ((x9 == 0 and g9 == 1) or (x9 and math.gcd(x9, g9) == 1)):
                    yield (xs[0], xs[1], xs[2], xs[3], xs[4], xs[5], xs[6], (y, 0), (x9, 0))
            y += m


def _xi_to_point(ctx, S_n, C, xi) -> TorsorPoint:
    return TorsorPoint(tuple(Elem(ctx, x[0], x[1], S_n[j + 1]) for j, x in enumerate(xi)), C.idx)


@dataclass
class TorsorCount:
    count: int
    per_tuple: list = field(default_factory=list)  # (ClassTuple, |M_C(B)|)

    @property
    def total_M(self) -> int:
        return sum(m for _, m in self.per_tuple)


def enumerate_M_normalized(ctx: FieldContext, C: ClassTuple, B) -> list[TorsorPoint]:
    S = _setup(ctx, C, Fraction(B))
    return [_xi_to_point(ctx, S.n, C, xi) for xi in enumerate_xi(ctx, C, B)]


def enumerate_M(ctx: FieldContext, C: ClassTuple, B) -> list[TorsorPoint]:
    """The full set M_C(B): unit-torus orbits of the normalized points."""
    out = []
    for tp in enumerate_M_normalized(ctx, C, B):
        for etas in unit_orbit(ctx, tp.eta):
            out.append(TorsorPoint(etas, C.idx))
    out.sort(key=TorsorPoint.key)
    return out


def enumerate_M_raw(ctx: FieldContext, C: ClassTuple, B) -> list[TorsorPoint]:
    """M_C(B) without the unit normalization (slow; for cross-checks)."""
    S = _setup(ctx, C, Fraction(B))
    out = [_xi_to_point(ctx, S.n, C, xi) for xi in enumerate_xi(ctx, C, B, normalize=False)]
    out.sort(key=TorsorPoint.key)
    return out


def _count_worker(args):
    d, idx, u, B, k, m = args
    ctx = make_field(d)
    C = ClassTuple(idx, u)
    return sum(1 for _ in enumerate_xi(ctx, C, B, eta2_slice=(k, m)))


def torsor_count(ctx: FieldContext, B, workers: int = 1) -> TorsorCount:
    """N_{U,H}(B) = omega^-6 sum_C |M_C(B)|, with |M_C(B)| = omega^6 * (normalized count)."""
    B = Fraction(B)
    w6 = ctx.units_count ** 6
    tuples = class_tuples(ctx)
    d = None if ctx.rational else ctx.d
    jobs = [(d, C.idx, C.u, B, k, workers) for C in tuples for k in range(workers)]
    if workers > 1:
        with ProcessPoolExecutor(workers) as ex:
            res = list(ex.map(_count_worker, jobs))
    else:
        res = [_count_worker(j) for j in jobs]
    per = []
    for t, C in enumerate(tuples):
        per.append((C, w6 * sum(res[t * workers : (t + 1) * workers])))
    total = sum(m for _, m in per)
    if total % w6:
        raise ArithmeticError("sum of |M_C(B)| not divisible by omega^6")
    return TorsorCount(total // w6, per)


def torsor_points(ctx: FieldContext, B) -> list[tuple[ClassTuple, TorsorPoint]]:
    out = []
    for C in class_tuples(ctx):
        for tp in enumerate_M_normalized(ctx, C, B):
            out.append((C, tp))
    return out


def torsor_heights(ctx: FieldContext, B) -> list[Fraction]:
    """Heights H(Psi(eta)) = max N(Psi_i) / u_C of all normalized points with H <= B, sorted."""
    B = Fraction(B)
    e = 1 if ctx.rational else 2
    out = []
    for C in class_tuples(ctx):
        S = _setup(ctx, C, B)
        scale = []
        for exps in PSI_EXPONENTS:
            s = 1
            for j, k in enumerate(exps, start=1):
                s *= S.n[j] ** (e * k)
            scale.append(s)
        nf = ctx.norm_form
        plain = C.u == 1 and all(s == 1 for s in scale)
        for xi in enumerate_xi(ctx, C, B):
            v1, v2, v3, v4, v5, v6, v7, v8, v9 = (nf(*x) for x in xi)
            vals = (v1 * v1 * v2 * v2 * v3 * v4 * v4 * v5 * v7,
                    v1 * v2 * v2 * v3 * v3 * v5 * v6 * v6 * v8,
                    v1 * v1 * v2 ** 3 * v3 * v3 * v4 * v5 * v5 * v6,
                    v1 * v2 * v3 * v4 * v6 * v7 * v8,
                    v7 * v8 * v9)
            if plain:
                out.append(max(vals))
            else:
                out.append(max(Fraction(x, s) for x, s in zip(vals, scale)) / C.u)
    out.sort()
    return [Fraction(h) for h in out]


def count_trend(ctx: FieldContext, bounds) -> list[tuple[Fraction, int]]:
    """N(B) for every B in `bounds`, from a single enumeration at max(bounds)."""
    bounds = sorted(Fraction(b) for b in bounds)
    hs = torsor_heights(ctx, bounds[-1])
    return [(b, bisect_right(hs, b)) for b in bounds]


def _unit_multipliers(ctx: FieldContext):
    """(omega^6, 9, 2) array: the unit multiplying eta_j for each t in (O_K^x)^6."""
    import numpy as np

    units = list(ctx.units)
    inv = {u: (u if ctx.rational else ctx.conj_pair(u)) for u in units}

    def power(u, k):
        base = u if k >= 0 else inv[u]
        out = (1, 0)
        for _ in range(abs(k)):
            out = ctx.mul_pair(out, base)
        return out

    rows = []
    for ts in itertools.product(units, repeat=6):
        row = []
        for j in range(1, 10):
            s = (1, 0)
            for t, k in zip(ts, PIC_DEGREES[j]):
                if k:
                    s = ctx.mul_pair(s, power(t, k))
            row.append(s)
        rows.append(row)
    return np.array(rows, dtype=np.int64)


def fiber_census(ctx: FieldContext, B) -> dict:
    """Expand every normalized point to its unit orbit (the full M_C(B)), map all
    of M to S through Psi and group by image.

    Returns {"images": number of distinct images, "points": |M|, "sizes": {fiber size: count}}.
    """
    import numpy as np

    from .surface import _Pairs, _reduce_frac

    B = Fraction(B)
    P = _Pairs(ctx)
    mult = _unit_multipliers(ctx)
    e = 1 if ctx.rational else 2
    keys = []
    total = 0
    for C in class_tuples(ctx):
        S = _setup(ctx, C, B)
        # Psi_i(eta) = Psi_i(xi) / s_i with s_i = prod n_j^{e_ij}; bring all five to denominator D
        s = [math.prod(S.n[j] ** k for j, k in enumerate(exps, start=1)) for exps in PSI_EXPONENTS]
        D = math.lcm(*s)
        for xi in enumerate_xi(ctx, C, B):
            x = np.array(xi, dtype=np.int64)  # (9, 2)
            orb = P.mul((x[None, :, 0], x[None, :, 1]), (mult[:, :, 0], mult[:, :, 1]))
            cols = []
            for exps, si in zip(PSI_EXPONENTS, s):
                acc = (np.full(len(mult), D // si, dtype=np.int64), np.zeros(len(mult), dtype=np.int64))
                for j, k in enumerate(exps):
                    for _ in range(k):
                        acc = P.mul(acc, (orb[0][:, j], orb[1][:, j]))
                cols.append(acc)
            # key: every coordinate divided by Psi_2, which never vanishes
            parts = []
            for i in (0, 1, 3, 4):
                parts += list(_reduce_frac(P, cols[i], cols[2]))
            keys.append(np.stack(parts, axis=1))
            total += len(mult)
    if not keys:
        return {"images": 0, "points": 0, "sizes": {}}
    _, counts = np.unique(np.concatenate(keys), axis=0, return_counts=True)
    sizes, freq = np.unique(counts, return_counts=True)
    return {"images": int(len(counts)), "points": total, "sizes": {int(a): int(b) for a, b in zip(sizes, freq)}}
