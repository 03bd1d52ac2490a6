"""The A3 quartic del Pezzo surface

    S : x0 x1 - x2 x3 = x0 x3 + x1 x3 + x2 x4 = 0   in P^4,

its five lines, the anticanonical height, the birational map psi from P^2
and a brute-force counter for points of bounded height on the open part U.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .lattice import enumerate_pairs, ideal_lattice
from .number_field import Elem, FieldContext, make_field

LINES = ((0, 1, 2), (0, 2, 3), (0, 3, 4), (1, 2, 3), (1, 3, 4))
SINGULAR_POINT = (0, 0, 0, 0, 1)


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


@dataclass(frozen=True)
class ProjPoint5:
    """(x0 : ... : x4) with coordinates in K."""

    coords: tuple

    @classmethod
    def make(cls, ctx: FieldContext, xs) -> "ProjPoint5":
        out = []
        for x in xs:
            if isinstance(x, Elem):
                out.append(x)
            elif isinstance(x, tuple):
                out.append(Elem(ctx, *x))
            else:
                out.append(Elem(ctx, int(x)))
        if all(x.is_zero() for x in out):
            raise ValueError("all coordinates vanish")
        return cls(tuple(out))

    @property
    def ctx(self) -> FieldContext:
        return self.coords[0].ctx

    def key(self) -> tuple:
        """Coordinates divided by the first nonzero one.

        Two points get equal keys iff x_i y_j = x_j y_i for all i, j.
        """
        i = next(k for k, x in enumerate(self.coords) if not x.is_zero())
        p = self.coords[i]
        return (i,) + tuple((x / p).key() for x in self.coords)

    def integral(self) -> "ProjPoint5":
        """Same point with coordinates cleared of denominators."""
        D = 1
        for x in self.coords:
            D = _lcm(D, x.den)
        return ProjPoint5(tuple(x * D for x in self.coords))

    def normalized(self) -> "ProjPoint5":
        """Canonical integral representative: divide by the first nonzero coordinate, clear denominators."""
        i = next(k for k, x in enumerate(self.coords) if not x.is_zero())
        p = self.coords[i]
        return ProjPoint5(tuple(x / p for x in self.coords)).integral()

    def scale(self, lam) -> "ProjPoint5":
        return ProjPoint5(tuple(x * lam for x in self.coords))

    def __eq__(self, other):
        return isinstance(other, ProjPoint5) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def to_str(self) -> str:
        return " ".join(_fmt_elem(x) for x in self.integral().coords)


def _fmt_elem(x: Elem) -> str:
    if x.ctx.rational:
        return str(x.a) if x.den == 1 else f"{x.a}/{x.den}"
    s = f"{x.a}{'+' if x.b >= 0 else '-'}{abs(x.b)}*w"
    return s if x.den == 1 else f"({s})/{x.den}"


@dataclass(frozen=True)
class HeightValue:
    numerator: Fraction
    denominator: Fraction

    @property
    def value(self) -> Fraction:
        return self.numerator / self.denominator

    def __le__(self, B):
        return self.value <= B

    def to_str(self) -> str:
        v = self.value
        return f"{v.numerator}/{v.denominator}"


def on_surface(p: ProjPoint5) -> bool:
    x0, x1, x2, x3, x4 = p.coords
    return (x0 * x1 - x2 * x3).is_zero() and (x0 * x3 + x1 * x3 + x2 * x4).is_zero()


def on_line(p: ProjPoint5) -> int | None:
    """Index into LINES of the first line containing p, or None."""
    if not on_surface(p):
        raise ValueError("point is not on S")
    for k, line in enumerate(LINES):
        if all(p.coords[i].is_zero() for i in line):
            return k
    return None


def lines_through(p: ProjPoint5) -> list[int]:
    return [k for k, line in enumerate(LINES) if all(p.coords[i].is_zero() for i in line)]


def in_U(p: ProjPoint5) -> bool:
    return on_surface(p) and on_line(p) is None


def height(ctx: FieldContext, p: ProjPoint5) -> HeightValue:
    """max N(x_i) / N(x0 O_K + ... + x4 O_K)."""
    num = max(x.norm() for x in p.coords)
    den = ctx.ideal(*p.coords).norm
    return HeightValue(num, den)


def psi(ctx: FieldContext, y0, y1, y2) -> ProjPoint5:
    """(y0 y2^2 : y1 y2^2 : y2^3 : y0 y1 y2 : -y0 y1 (y0 + y1))."""
    y0, y1, y2 = (y if isinstance(y, Elem) else Elem(ctx, *(y if isinstance(y, tuple) else (int(y), 0))) for y in (y0, y1, y2))
    return ProjPoint5.make(ctx, (y0 * y2 * y2, y1 * y2 * y2, y2 * y2 * y2, y0 * y1 * y2, -(y0 * y1 * (y0 + y1))))


# ---------------------------------------------------------------------------
# vectorized pair arithmetic: elements a + b w as two int64 arrays


class _Pairs:
    def __init__(self, ctx: FieldContext):
        self.t, self.n, self.rational = ctx.t, ctx.n, ctx.rational

    def mul(self, x, y):
        a, b = x
        c, d = y
        bd = b * d
        return a * c - bd * self.n, a * d + b * c + bd * self.t

    def norm(self, x):
        a, b = x
        if self.rational:
            return np.abs(a)
        return a * a + self.t * a * b + self.n * b * b

    def conj(self, x):
        return x[0] + self.t * x[1], -x[1]

    def div_exact(self, x, y):
        """(x / y, ok) where ok marks the entries with y | x in O_K."""
        if self.rational:
            ok = x[0] % y[0] == 0
            q = np.where(ok, x[0] // np.where(ok, y[0], 1), 0)
            return (q, np.zeros_like(q)), ok
        num = self.mul(x, self.conj(y))
        N = self.norm(y)
        ok = (num[0] % N == 0) & (num[1] % N == 0)
        return (num[0] // N, num[1] // N), ok


def _reduce_frac(P: _Pairs, x, y):
    """x / y as reduced (a, b, den) arrays (den > 0)."""
    if P.rational:
        g = np.gcd(x[0], y[0])
        s = np.sign(y[0])
        return x[0] * s // g, np.zeros_like(g), np.abs(y[0]) // g
    num = P.mul(x, P.conj(y))
    N = P.norm(y)
    g = np.gcd(np.gcd(num[0], num[1]), N)
    return num[0] // g, num[1] // g, N // g


# ---------------------------------------------------------------------------
# brute force


@dataclass
class BruteResult:
    count: int
    radius: int
    certified: bool
    stabilized: bool | None
    points: dict = field(default_factory=dict, repr=False)  # key -> (ProjPoint5, HeightValue)

    def heights(self) -> list[Fraction]:
        return sorted(h.value for _, h in self.points.values())


def certified_radius(ctx: FieldContext, B) -> int:
    """A coordinate norm bound that provably contains a representative of every point of height <= B.

    Every point has a representative whose gcd ideal is one of the class
    representatives C, and then N(x_i) <= B N(C).
    """
    m = max(C.norm for C in ctx.class_reps)
    return math.floor(Fraction(B) * m)


def small_elements(ctx: FieldContext, R: int) -> np.ndarray:
    """Nonzero elements of O_K with N <= R as an (m, 2) array, sorted by norm."""
    L = ideal_lattice(ctx, ctx.unit_ideal)
    pts = [p for p in enumerate_pairs(L, norm_bound=R) if p != (0, 0)]
    return np.array(pts, dtype=np.int64).reshape(-1, 2)


def _associate_reps(ctx: FieldContext, E: np.ndarray) -> np.ndarray:
    keep = [row for row in map(tuple, E.tolist()) if ctx.canonical_associate(row) == row]
    return np.array(keep, dtype=np.int64).reshape(-1, 2)


def _scan_psi(ctx: FieldContext, B: Fraction, E: np.ndarray, y2s: np.ndarray):
    """Keys (y0/y2, y1/y2) of preimage triples passing the cheap height filter."""
    P = _Pairs(ctx)
    a0 = np.repeat(E[:, 0], len(E)); b0 = np.repeat(E[:, 1], len(E))
    a1 = np.tile(E[:, 0], len(E)); b1 = np.tile(E[:, 1], len(E))
    y0, y1 = (a0, b0), (a1, b1)
    y01 = P.mul(y0, y1)
    s01 = (a0 + a1, b0 + b1)
    x4 = P.mul(y01, s01)
    x4 = (-x4[0], -x4[1])
    n4 = P.norm(x4)
    keys = []
    for a2, b2 in y2s.tolist():
        y2 = (np.full_like(a0, a2), np.full_like(a0, b2))
        y22 = P.mul(y2, y2)
        xs = (P.mul(y0, y22), P.mul(y1, y22), P.mul(y2, y22), P.mul(y01, y2), x4)
        norms = [P.norm(x) for x in xs[:4]] + [n4]
        top = np.maximum.reduce(norms)
        g = np.gcd.reduce(norms)
        # N(gcd ideal) divides every N(x_i), so H >= max N / gcd N
        ok = top * B.denominator <= B.numerator * g
        if P.rational:
            # the ideal gcd is exact here
            g5 = np.gcd.reduce([np.abs(x[0]) for x in xs])
            ok &= top * B.denominator <= B.numerator * g5
        if not ok.any():
            continue
        idx = np.flatnonzero(ok)
        sub = lambda x: (x[0][idx], x[1][idx])
        k0 = _reduce_frac(P, sub(y0), sub(y2))
        k1 = _reduce_frac(P, sub(y1), sub(y2))
        keys.append(np.stack(k0 + k1, axis=1))
    if not keys:
        return np.zeros((0, 6), dtype=np.int64)
    return np.unique(np.concatenate(keys), axis=0)


def _scan_direct(ctx: FieldContext, B: Fraction, E: np.ndarray, R: int, x2s: np.ndarray):
    """Search x0, x3 (and x2 in x2s) directly on S; x1, x4 are forced by the equations."""
    P = _Pairs(ctx)
    a0 = np.repeat(E[:, 0], len(E)); b0 = np.repeat(E[:, 1], len(E))
    a3 = np.tile(E[:, 0], len(E)); b3 = np.tile(E[:, 1], len(E))
    x0, x3 = (a0, b0), (a3, b3)
    keys = []
    for a2, b2 in x2s.tolist():
        x2 = (np.full_like(a0, a2), np.full_like(a0, b2))
        # x0 x1 = x2 x3
        x1, ok = P.div_exact(P.mul(x2, x3), x0)
        ok &= P.norm(x1) <= R
        ok &= (x1[0] != 0) | (x1[1] != 0)
        s = (x0[0] + x1[0], x0[1] + x1[1])
        # x2 x4 = -x3 (x0 + x1)
        m = P.mul(x3, s)
        x4, ok4 = P.div_exact((-m[0], -m[1]), x2)
        ok &= ok4 & (P.norm(x4) <= R)
        if not ok.any():
            continue
        idx = np.flatnonzero(ok)
        sub = lambda x: (x[0][idx], x[1][idx])
        xs = [sub(x0), sub(x1), sub(x2), sub(x3), sub(x4)]
        norms = [P.norm(x) for x in xs]
        top = np.maximum.reduce(norms)
        g = np.gcd.reduce(norms)
        keep = top * B.denominator <= B.numerator * g
        if not keep.any():
            continue
        jdx = np.flatnonzero(keep)
        k0 = _reduce_frac(P, (xs[0][0][jdx], xs[0][1][jdx]), (xs[2][0][jdx], xs[2][1][jdx]))
        k1 = _reduce_frac(P, (xs[1][0][jdx], xs[1][1][jdx]), (xs[2][0][jdx], xs[2][1][jdx]))
        keys.append(np.stack(k0 + k1, axis=1))
    if not keys:
        return np.zeros((0, 6), dtype=np.int64)
    return np.unique(np.concatenate(keys), axis=0)


def _scan_worker(args):
    d, B, E, R, chunk, mode = args
    ctx = make_field(d)
    if mode == "psi":
        return _scan_psi(ctx, B, E, chunk)
    return _scan_direct(ctx, B, E, R, chunk)


def _collect(ctx: FieldContext, B: Fraction, R: int, mode: str, workers: int):
    E = small_elements(ctx, R)
    # scaling by a unit does not change the projective point
    outer = _associate_reps(ctx, E)
    d = None if ctx.rational else ctx.d
    if workers > 1 and len(outer) > 1:
        chunks = [outer[i::workers] for i in range(workers)]
        with ProcessPoolExecutor(workers) as ex:
            parts = list(ex.map(_scan_worker, [(d, B, E, R, c, mode) for c in chunks]))
        keys = np.unique(np.concatenate(parts), axis=0) if parts else np.zeros((0, 6), dtype=np.int64)
    else:
        keys = _scan_worker((d, B, E, R, outer, mode))
    points = {}
    for k0a, k0b, k0d, k1a, k1b, k1d in keys.tolist():
        p0 = Elem(ctx, k0a, k0b, k0d)
        p1 = Elem(ctx, k1a, k1b, k1d)
        pt = psi(ctx, p0, p1, ctx.one).normalized()
        if not in_U(pt):
            continue
        h = height(ctx, pt)
        if h.value <= B:
            points[pt.key()] = (pt, h)
    return points


def brute_force_count(ctx: FieldContext, B, radius: int | None = None, mode: str = "psi",
                      check_stable: bool = True, workers: int = 1) -> BruteResult:
    """Count points of U with H <= B by searching coordinates of norm <= radius.

    mode "psi" searches preimages (y0, y1, y2) in P^2; mode "direct" searches
    (x0, x2, x3) on S and solves for x1, x4.  The default radius is the
    certified one.  With check_stable the search is repeated at twice the
    radius and `stabilized` records whether the count changed.
    """
    B = Fraction(B)
    if B < 0:
        raise ValueError("B must be nonnegative")
    if mode not in ("psi", "direct"):
        raise ValueError(f"unknown mode {mode!r}")
    Rc = certified_radius(ctx, B)
    R = Rc if radius is None else int(radius)
    pts = _collect(ctx, B, R, mode, workers) if R >= 1 else {}
    stable = None
    if check_stable:
        pts2 = _collect(ctx, B, 2 * R, mode, workers) if R >= 1 else {}
        stable = len(pts2) == len(pts)
    return BruteResult(len(pts), R, R >= Rc, stable, dict(sorted(pts.items())))
