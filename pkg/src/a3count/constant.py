"""Ingredients of the leading constant

    c = 1/4320 * (2 pi)^6 h^6 / (Delta^4 omega^6) * prod_p f(1/Np) * omega_inf

with f(x) = (1 - x)^6 (1 + 6x + x^2); over Q the middle factor is 1.
"""
from __future__ import annotations

import functools
import itertools
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .number_field import FieldContext, primes_up_to, split_prime

# ---------------------------------------------------------------------------
# Euler product

# exp(-TAIL_K x^2) <= f(x) <= 1 on [0, 1/2]; checked numerically in the tests
TAIL_K = 22


def euler_factor(x: float) -> float:
    return (1 - x) ** 6 * (1 + 6 * x + x * x)


def log_euler_factor(x: float) -> float:
    return 6 * math.log1p(-x) + math.log1p(6 * x + x * x)


@dataclass
class EulerResult:
    value: float
    lower: float
    upper: float
    cutoff: int

    def contains(self, other: "EulerResult") -> bool:
        return self.lower <= other.lower and other.upper <= self.upper


def prime_norms(ctx: FieldContext, P: int) -> list[int]:
    """N p for all prime ideals above rational primes p <= P."""
    out = []
    for p in primes_up_to(P):
        out += [Q.norm for Q in split_prime(ctx, p)]
    return out


def euler_product(ctx: FieldContext, P: int) -> EulerResult:
    """Product of f(1/Np) over prime ideals above p <= P, with a tail bracket.

    Each factor lies in [exp(-K x^2), 1], and the prime ideals above p > P
    have sum x^2 <= m sum_{n > P} n^-2 <= m / P, with m the number of
    primes of degree one above p (1 for Q, at most 2 for K).
    """
    if P < 2:
        raise ValueError("cutoff must be >= 2")
    logs = [log_euler_factor(1.0 / q) for q in prime_norms(ctx, P)]
    value = math.exp(math.fsum(logs))
    m = 1 if ctx.rational else 2
    lower = value * math.exp(-TAIL_K * m / P)
    return EulerResult(value, lower, value, P)


def euler_factor_exact(x: Fraction) -> Fraction:
    return (1 - x) ** 6 * (1 + 6 * x + x * x)


# ---------------------------------------------------------------------------
# theta_8 average identity


_THETA8_ONE = {frozenset(s) for s in ((), (5,), (6,), (7,))}
_THETA8_LINEAR = {frozenset(s) for s in ((1,), (3,), (4,), (1, 2), (1, 4), (2, 3), (2, 5), (3, 6), (4, 7))}


def theta8_local(J) -> list[Fraction]:
    """Local factor theta_8(J) for J subset of {1..7}, as coefficients in x = 1/Np."""
    J = frozenset(J)
    if J in _THETA8_ONE:
        return [Fraction(1)]
    if J in _THETA8_LINEAR:
        return [Fraction(1), Fraction(-1)]
    if J == frozenset({2}):
        return [Fraction(1), Fraction(-2)]
    return [Fraction(0)]


def poly_eval(coeffs, x):
    return sum(c * x ** i for i, c in enumerate(coeffs))


def _poly_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_pow(a, k):
    out = [Fraction(1)]
    for _ in range(k):
        out = _poly_mul(out, a)
    return out


def _poly_add(a, b):
    n = max(len(a), len(b))
    a = a + [Fraction(0)] * (n - len(a))
    b = b + [Fraction(0)] * (n - len(b))
    return [x + y for x, y in zip(a, b)]


def _trim(a):
    a = list(a)
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    return a


def theta8_average_polynomial() -> list[Fraction]:
    """Coefficients of sum_{L subset {1..7}} (1-x)^{7-|L|} x^{|L|} theta_8(L)."""
    total = [Fraction(0)]
    for k in range(8):
        weight = _poly_mul(_poly_pow([Fraction(1), Fraction(-1)], 7 - k), [Fraction(0)] * k + [Fraction(1)])
        for L in itertools.combinations(range(1, 8), k):
            total = _poly_add(total, _poly_mul(weight, theta8_local(L)))
    return _trim(total)


def theta0_polynomial() -> list[Fraction]:
    """(1 - x)^6 (1 + 6x + x^2)."""
    return _trim(_poly_mul(_poly_pow([Fraction(1), Fraction(-1)], 6), [Fraction(1), Fraction(6), Fraction(1)]))


@dataclass
class IdentityResult:
    lhs: list
    rhs: list

    @property
    def equal(self) -> bool:
        return self.lhs == self.rhs


def theta8_average_identity() -> IdentityResult:
    return IdentityResult(theta8_average_polynomial(), theta0_polynomial())


# ---------------------------------------------------------------------------
# alpha via polytope volume

# [-K] and the non-basis negative curves E7, E8, E9, in the basis E1..E6
ANTICANONICAL = (2, 3, 2, 1, 2, 1)
EXTRA_CURVES = ((0, 1, 1, -1, 1, 1), (1, 1, 0, 1, 1, -1), (1, 1, 1, 1, 0, 1))
# the basis is reordered as E1, E6, E3, E4, E5, E2 so that the last coefficient of -K is E2's
BASIS_ORDER = (0, 5, 2, 3, 4, 1)


def alpha_polytope():
    """(A, b) with R0 = {t >= 0 : A t <= b} in R^5 (rows: -K, then E7, E8, E9)."""
    c = [ANTICANONICAL[i] for i in BASIS_ORDER]
    r = len(c) - 1
    cr = c[r]
    if cr <= 0:
        raise ValueError("last anticanonical coefficient must be positive")
    rows = [[Fraction(x) for x in c[:r]]]
    rhs = [Fraction(1)]
    for curve in EXTRA_CURVES:
        b = [curve[i] for i in BASIS_ORDER]
        rows.append([Fraction(b[r] * c[j] - b[j] * cr) for j in range(r)])
        rhs.append(Fraction(b[r]))
    return rows, rhs, cr


def _solve(M, v):
    """Exact solution of the square system M x = v, or None if singular."""
    n = len(M)
    A = [list(row) + [rhs] for row, rhs in zip(M, v)]
    for col in range(n):
        piv = next((i for i in range(col, n) if A[i][col] != 0), None)
        if piv is None:
            return None
        A[col], A[piv] = A[piv], A[col]
        p = A[col][col]
        A[col] = [x / p for x in A[col]]
        for i in range(n):
            if i != col and A[i][col] != 0:
                f = A[i][col]
                A[i] = [x - f * y for x, y in zip(A[i], A[col])]
    return [A[i][n] for i in range(n)]


def _rank(vectors) -> int:
    rows = [list(v) for v in vectors]
    if not rows:
        return 0
    rank, ncol = 0, len(rows[0])
    for col in range(ncol):
        piv = next((i for i in range(rank, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for i in range(rank + 1, len(rows)):
            if rows[i][col] != 0:
                f = rows[i][col] / rows[rank][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def _affine_dim(points) -> int:
    if not points:
        return -1
    p0 = points[0]
    return _rank([[a - b for a, b in zip(p, p0)] for p in points[1:]])


def polytope_vertices(A, b):
    """Vertices of {x : A x <= b} (exact), with the set of tight rows for each."""
    n = len(A[0])
    verts = {}
    for rows in itertools.combinations(range(len(A)), n):
        x = _solve([A[i] for i in rows], [b[i] for i in rows])
        if x is None:
            continue
        if all(sum(a * xi for a, xi in zip(A[i], x)) <= b[i] for i in range(len(A))):
            verts[tuple(x)] = None
    out = []
    for x in sorted(verts):
        tight = frozenset(i for i in range(len(A)) if sum(a * xi for a, xi in zip(A[i], x)) == b[i])
        out.append((x, tight))
    return out


def _triangulate(face_verts, dim, A_len):
    """Simplices (as vertex tuples) triangulating the face spanned by face_verts.

    face_verts: list of (point, tight-set).  Pulling triangulation: cone from
    the smallest vertex over all facets of the face not containing it.
    """
    if dim == 0:
        return [(face_verts[0][0],)]
    v0 = min(face_verts, key=lambda pv: pv[0])
    common = frozenset.intersection(*[t for _, t in face_verts])
    seen = set()
    out = []
    for i in range(A_len):
        if i in common:
            continue
        sub = [pv for pv in face_verts if i in pv[1]]
        key = frozenset(p for p, _ in sub)
        if key in seen or len(sub) < dim:
            continue
        if _affine_dim([p for p, _ in sub]) != dim - 1:
            continue
        seen.add(key)
        if v0[0] in key:
            continue
        for simplex in _triangulate(sub, dim - 1, A_len):
            out.append((v0[0],) + simplex)
    return out


def _simplex_volume(s) -> Fraction:
    p0 = s[0]
    M = [[a - b for a, b in zip(p, p0)] for p in s[1:]]
    n = len(M)
    det = _det(M)
    return abs(det) / math.factorial(n)


def _det(M) -> Fraction:
    M = [list(r) for r in M]
    n = len(M)
    det = Fraction(1)
    for col in range(n):
        piv = next((i for i in range(col, n) if M[i][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            M[col], M[piv] = M[piv], M[col]
            det = -det
        det *= M[col][col]
        for i in range(col + 1, n):
            if M[i][col] != 0:
                f = M[i][col] / M[col][col]
                M[i] = [x - f * y for x, y in zip(M[i], M[col])]
    return det


def polytope_volume(A, b) -> Fraction:
    """Exact volume of the full-dimensional polytope {x : A x <= b}."""
    n = len(A[0])
    verts = polytope_vertices(A, b)
    if _affine_dim([p for p, _ in verts]) != n:
        raise ValueError("polytope is not full-dimensional")
    simplices = _triangulate(verts, n, len(A))
    return sum((_simplex_volume(s) for s in simplices), Fraction(0))


def alpha_volume() -> Fraction:
    """alpha = vol(R0) / c_{r+1}, with R0 from the negative curves."""
    rows, rhs, cr = alpha_polytope()
    r = len(rows[0])
    A = rows + [[Fraction(-1 if i == j else 0) for j in range(r)] for i in range(r)]
    b = rhs + [Fraction(0)] * r
    return polytope_volume(A, b) / cr


def alpha_closed_form() -> Fraction:
    """alpha(S0) / |W| with alpha(S0) = 1/180 in degree 4 and |W| = 4! for A3."""
    return Fraction(1, 180) / math.factorial(4)


def alpha_montecarlo(samples: int = 1_000_000, seed: int = 0) -> tuple[float, float]:
    """MC estimate of alpha: hit rate of R0 inside the simplex {t >= 0, c.t <= 1}."""
    rows, rhs, cr = alpha_polytope()
    c = np.array([float(x) for x in rows[0]])
    A = np.array([[float(x) for x in r] for r in rows[1:]])
    b = np.array([float(x) for x in rhs[1:]])
    r = len(c)
    simplex_vol = 1.0 / (math.factorial(r) * float(np.prod(c)))
    hits = 0
    done = 0
    k = 0
    while done < samples:
        n = min(200_000, samples - done)
        rng = np.random.default_rng([seed, k])
        E = rng.exponential(size=(n, r + 1))
        t = E[:, :r] / E.sum(axis=1, keepdims=True) / c
        hits += int(np.all(t @ A.T <= b, axis=1).sum())
        done += n
        k += 1
    p = hits / samples
    vol = simplex_vol * p
    err = simplex_vol * math.sqrt(p * (1 - p) / samples)
    return vol / cr, err / cr


# ---------------------------------------------------------------------------
# omega_infinity


@dataclass
class OmegaResult:
    value: float
    err: float
    method: str


def _g_complex(r0, r1):
    """Squared radius of the z2 disc: min(1, 1/r0, 1/r1, 1/(r0 r1)^2)."""
    return np.minimum.reduce([np.ones_like(r0 * r1), 1 / r0, 1 / r1, 1 / (r0 * r1) ** 2])


def _theta_measure(r0, r1):
    """Measure of angles t with r0^2 r1^2 |r0 + r1 e^{it}|^2 <= 1."""
    with np.errstate(divide="ignore", invalid="ignore"):
        kappa = (1 / (r0 * r1) ** 2 - r0 * r0 - r1 * r1) / (2 * r0 * r1)
    kappa = np.clip(np.nan_to_num(kappa, nan=1.0, posinf=1.0, neginf=-1.0), -1, 1)
    return 2 * np.pi - 2 * np.arccos(kappa)


@functools.lru_cache(maxsize=None)
def omega_inf_complex_quad(epsabs: float = 1e-10, epsrel: float = 1e-9) -> OmegaResult:
    """24 pi * int int r0 r1 g(r0, r1) Theta(r0, r1) dr0 dr1 by nested adaptive quadrature.

    Uses the symmetry r0 <-> r1 (integrate r1 <= r0, double).
    """
    from scipy.integrate import quad

    def inner_f(r1, r0):
        return r0 * r1 * float(_g_complex(np.float64(r0), np.float64(r1))) * float(_theta_measure(np.float64(r0), np.float64(r1)))

    def inner(r0):
        pts = [1.0, 1 / r0, r0 ** -0.5, r0 ** -2.0]
        # kappa = 1: r0 r1 (r0 + r1) = 1 ; kappa = -1: r0 r1 (r0 - r1) = 1
        disc = r0 * r0 + 4 / r0
        pts.append((-r0 + math.sqrt(disc)) / 2)
        if r0 ** 3 >= 4:
            s = math.sqrt(r0 * r0 - 4 / r0)
            pts += [(r0 - s) / 2, (r0 + s) / 2]
        pts = sorted(p for p in pts if 0 < p < r0)
        edges = [0.0] + pts + [r0]
        total, err = 0.0, 0.0
        for a, b in zip(edges[:-1], edges[1:]):
            if b - a <= 0:
                continue
            v, e = quad(inner_f, a, b, args=(r0,), epsabs=epsabs, epsrel=epsrel, limit=500)
            total += v
            err += e
        return total

    edges = [0.0, 1.0, 4 ** (1 / 3), 2.0, 4.0, 16.0, 100.0, np.inf]
    total, err = 0.0, 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        v, e = quad(inner, a, b, epsabs=epsabs, epsrel=epsrel, limit=500)
        total += v
        err += e
    scale = 24 * math.pi * 2
    return OmegaResult(scale * total, scale * err, "nested-quad")


def _radial_samples(rng, n):
    """|z| for z with density (1 + |z|^2)^(-3/2) / (2 pi) on C (or 1/2 (1+y^2)^(-3/2) on R)."""
    u = rng.random(n)
    return np.sqrt(1.0 / (1.0 - u) ** 2 - 1.0)


def omega_inf_complex_mc(samples: int = 2_000_000, seed: int = 0, chunk: int = 250_000) -> OmegaResult:
    """12 * int r^2(z0, z1) 1[|z0 z1 (z0 + z1)|^2 <= 1] dz0 dz1 by importance sampling on C^2.

    Each z_i has density q(z) = (1 + |z|^2)^(-3/2) / (2 pi); the z2 disc is
    integrated exactly (area pi r^2, which the 12/pi prefactor turns into 12 r^2).
    """
    s1 = s2 = 0.0
    done, k = 0, 0
    while done < samples:
        n = min(chunk, samples - done)
        rng = np.random.default_rng([seed, k])
        r0 = _radial_samples(rng, n)
        r1 = _radial_samples(rng, n)
        t = rng.random(n) * 2 * np.pi
        mod2 = r0 * r0 + r1 * r1 + 2 * r0 * r1 * np.cos(t)
        ok = (r0 * r1) ** 2 * mod2 <= 1
        q = (1 + r0 * r0) ** -1.5 * (1 + r1 * r1) ** -1.5 / (2 * np.pi) ** 2
        w = np.where(ok, 12 * _g_complex(r0, r1) / q, 0.0)
        s1 += w.sum()
        s2 += (w * w).sum()
        done += n
        k += 1
    mean = s1 / samples
    var = s2 / samples - mean * mean
    return OmegaResult(mean, math.sqrt(var / samples), "importance-mc")


def _r_real(y0, y1):
    """Half-length of the y2 interval: min(1, |y0|^-1/2, |y1|^-1/2, 1/|y0 y1|)."""
    a0, a1 = np.abs(y0), np.abs(y1)
    with np.errstate(divide="ignore"):
        return np.minimum.reduce([np.ones_like(a0 * a1), a0 ** -0.5, a1 ** -0.5, 1 / (a0 * a1)])


def _real_inner(y0: float) -> float:
    """int 2 r(y0, y1) dy1 over |y1 (y0 + y1)| <= 1/y0 (y0 > 0), in closed form.

    Between consecutive kinks r is one of 1, y0^-1/2, |y1|^-1/2, 1/(y0 |y1|).
    """
    c = 1.0 / y0
    s = math.sqrt(y0 * y0 + 4 * c)
    # small roots via the product of roots, to avoid cancellation
    lo, hi = (-y0 - s) / 2, 2 * c / (y0 + s)
    pieces = [(lo, hi)]
    if y0 * y0 >= 4 * c:
        t = math.sqrt(y0 * y0 - 4 * c)
        pieces = [(lo, (-y0 - t) / 2), (-2 * c / (y0 + t), hi)]
    kinks = [1.0, c, c * c, y0, y0 ** -0.5]
    kinks = kinks + [-k for k in kinks] + [0.0]
    cap = min(1.0, y0 ** -0.5)
    total = 0.0
    for a, b in pieces:
        pts = sorted({a, b} | {k for k in kinks if a < k < b})
        for u, v in zip(pts[:-1], pts[1:]):
            if v <= u:
                continue
            m = abs(u + v) / 2
            opts = (cap, m ** -0.5, c / m)
            k = min(range(3), key=lambda i: opts[i])
            au, av = sorted((abs(u), abs(v)))
            if k == 0:
                total += cap * (v - u)
            elif k == 1:
                total += 2 * (math.sqrt(av) - math.sqrt(au))
            else:
                total += c * math.log(av / au)
    return 2 * total


def omega_inf_real_quad(epsabs: float = 1e-11, epsrel: float = 1e-9) -> OmegaResult:
    """3/2 * int 2 r(y0, y1) over |y0 y1 (y0 + y1)| <= 1.

    Inner integral exact, outer by adaptive quadrature; y -> -y symmetry
    reduces to y0 > 0.
    """
    from scipy.integrate import quad

    edges = [0.0, 0.1, 0.5, 1.0, 4 ** (1 / 3), 2.0, 4.0, 16.0, 100.0, np.inf]
    total, err = 0.0, 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        v, e = quad(_real_inner, a, b, epsabs=epsabs, epsrel=epsrel, limit=500)
        total += v
        err += e
    return OmegaResult(3 * total, 3 * err, "nested-quad")


def _cubic_pieces_vec(y0):
    """{y1 : |y0 y1 (y0 + y1)| <= 1} for arrays y0 > 0: endpoints (lo, a, b, hi), hole (a, b) empty when a = b."""
    c = 1.0 / y0
    s = np.sqrt(y0 * y0 + 4 * c)
    lo, hi = (-y0 - s) / 2, 2 * c / (y0 + s)
    t = np.sqrt(np.maximum(y0 * y0 - 4 * c, 0.0))
    has = y0 * y0 >= 4 * c
    a = np.where(has, (-y0 - t) / 2, hi)
    b = np.where(has, -2 * c / (y0 + t), hi)
    return lo, a, b, hi


def _overlap(a, b, m):
    return np.maximum(0.0, np.minimum(b, m) - np.maximum(a, -m))


def omega_inf_real_cubature(nodes: int = 64, epsabs: float = 1e-9, epsrel: float = 1e-7) -> OmegaResult:
    """3/2 * vol{y in R^3 : max(|y0 y2^2|, |y1 y2^2|, |y2^3|, |y0 y1 y2|, |y0 y1 (y0 + y1)|) <= 1}.

    Iterated in the order y2, y0, y1 (the opposite of the quad route): for
    fixed y2 = s the y1-section is an explicit union of intervals, its
    length is integrated over y0 by composite Gauss-Legendre on dyadic
    pieces, and s by adaptive quadrature.  The error bar adds the change
    from halving the node count.
    """
    from scipy.integrate import IntegrationWarning, quad

    gx, gw = np.polynomial.legendre.leggauss(nodes)
    k_hole = 4 ** (1 / 3)

    def area(s):
        L = s ** -2
        pts = {0.0, L, s, 1 / s, k_hole} | {2.0 ** k for k in range(-12, 90) if 2.0 ** k < L}
        pts = np.array(sorted(p for p in pts if 0 <= p <= L))
        lo_, hi_ = pts[:-1, None], pts[1:, None]
        y0 = (lo_ + hi_) / 2 + (hi_ - lo_) / 2 * gx
        w = (hi_ - lo_) / 2 * gw
        m = np.minimum(L, 1.0 / (s * y0))
        lo, a, b, hi = _cubic_pieces_vec(y0)
        sec = _overlap(lo, a, m) + _overlap(b, hi, m)
        return float((sec * w).sum())

    def total(nodes_):
        nonlocal gx, gw
        gx, gw = np.polynomial.legendre.leggauss(nodes_)
        grid = [0.0] + [2.0 ** -k for k in range(40, -1, -1)]
        v = e = 0.0
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", IntegrationWarning)
            for a, b in zip(grid[:-1], grid[1:]):
                vi, ei = quad(area, a, b, epsabs=epsabs, epsrel=epsrel, limit=200)
                v += vi
                e += ei
        return v, e

    v, e = total(nodes)
    v_half, _ = total(nodes // 2)
    e += abs(v - v_half)
    return OmegaResult(1.5 * 4 * v, 1.5 * 4 * e, "cubature-3d")


def omega_inf_real_mc(samples: int = 2_000_000, seed: int = 0, chunk: int = 250_000) -> OmegaResult:
    """Importance sampling on R^2 with density prod 1/4 (1 + |y|)^(-3/2).

    The heavy tail keeps the variance finite along the cusps y0 y1 ~ 0.
    """
    s1 = s2 = 0.0
    done, k = 0, 0
    while done < samples:
        n = min(chunk, samples - done)
        rng = np.random.default_rng([seed, k])
        y0 = ((1 - rng.random(n)) ** -2 - 1) * rng.choice([-1.0, 1.0], n)
        y1 = ((1 - rng.random(n)) ** -2 - 1) * rng.choice([-1.0, 1.0], n)
        ok = np.abs(y0 * y1 * (y0 + y1)) <= 1
        q = (1 + np.abs(y0)) ** -1.5 * (1 + np.abs(y1)) ** -1.5 / 16
        w = np.where(ok, 1.5 * 2 * _r_real(y0, y1) / q, 0.0)
        s1 += w.sum()
        s2 += (w * w).sum()
        done += n
        k += 1
    mean = s1 / samples
    var = s2 / samples - mean * mean
    return OmegaResult(mean, math.sqrt(var / samples), "importance-mc")


def omega_inner_box(ctx: FieldContext) -> float:
    """omega_inf-measure of the box with every |z_i| <= 1/2, which lies inside the domain.

    Over Q the box is [-1/2, 1/2]^3 (weight 3/2); over K each z_i ranges over a
    disc of squared modulus 1/2 (weight 12/pi).
    """
    if ctx.rational:
        return 1.5
    return 12 / math.pi * (math.pi / 2) ** 3


def omega_infinity(ctx: FieldContext, method: str = "quad", samples: int = 2_000_000, seed: int = 0) -> OmegaResult:
    """omega_inf by "quad" (reduced nested quadrature), "mc" (importance sampling) or, over Q, "cubature"."""
    if method == "quad":
        return omega_inf_real_quad() if ctx.rational else omega_inf_complex_quad()
    if method == "mc":
        return omega_inf_real_mc(samples, seed) if ctx.rational else omega_inf_complex_mc(samples, seed)
    if method == "cubature" and ctx.rational:
        return omega_inf_real_cubature()
    raise ValueError(f"unknown method {method!r}")


# ---------------------------------------------------------------------------
# assembly


@dataclass
class ConstantBreakdown:
    alpha: Fraction
    euler: EulerResult
    omega_inf: OmegaResult
    prefactor: float
    prefactor_str: str
    c_value: float
    c_err: float
    checks: dict = field(default_factory=dict)
    relation: str = "(1/4320) pi^6 omega_inf B (log B)^5 = 4 V0'(B)"


def prefactor(ctx: FieldContext) -> tuple[float, str]:
    """(2 pi)^6 h^6 / (Delta^4 omega^6), or 1 over Q."""
    if ctx.rational:
        return 1.0, "1"
    q = Fraction(ctx.h ** 6, ctx.disc ** 4 * ctx.units_count ** 6)
    return (2 * math.pi) ** 6 * float(q), f"(2*pi)^6*{q.numerator}/{q.denominator}"


def _c_from(alpha, pf, eu: EulerResult, om: OmegaResult) -> tuple[float, float]:
    c = float(alpha) * pf * eu.value * om.value
    rel = (eu.upper - eu.lower) / eu.value + om.err / om.value
    return c, c * rel


def assemble_constant(ctx: FieldContext, P: int = 100_000, mc_samples: int = 2_000_000, seed: int = 0,
                      cross_check: bool = True) -> ConstantBreakdown:
    """c = 1/4320 * prefactor * Euler product * omega_inf, with alternative omega routes in checks."""
    alpha = alpha_volume()
    if alpha != alpha_closed_form():
        raise AssertionError(f"polytope volume gives alpha = {alpha}")
    eu = euler_product(ctx, P)
    om = omega_infinity(ctx, "quad")
    pf, pfs = prefactor(ctx)
    c, err = _c_from(alpha, pf, eu, om)
    out = ConstantBreakdown(alpha, eu, om, pf, pfs, c, err)
    if cross_check:
        methods = ("mc", "cubature") if ctx.rational else ("mc",)
        for m in methods:
            alt = omega_infinity(ctx, m, mc_samples, seed)
            ca, ea = _c_from(alpha, pf, eu, alt)
            out.checks[m] = {"omega_inf": alt, "c": (ca, ea), "rel_diff": abs(ca - c) / c}
    return out
