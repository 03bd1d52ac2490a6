"""Fractional ideals as lattices in C (or R for Q): enumeration in discs,
counting in polynomially defined regions, and the Davenport main term.

Everything is measured with the field's size function N: |x|^2 in K and
|x| in Q.  A "disc of bound T around c" is {x : N(x - c) <= T}.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .number_field import Elem, FieldContext, FracIdeal


def _lcm(*xs: int) -> int:
    out = 1
    for x in xs:
        out = out * x // math.gcd(out, x)
    return out


def gauss_reduce(ctx: FieldContext, u: tuple[int, int], v: tuple[int, int]):
    """Lagrange-Gauss reduction of the integer-coordinate basis (u, v) w.r.t. N."""
    N = lambda x: ctx.norm_form(*x)

    def dot2(x, y):
        # 2 * Re(x * conj(y)) = N(x + y) - N(x) - N(y)
        return N((x[0] + y[0], x[1] + y[1])) - N(x) - N(y)

    if N(u) > N(v):
        u, v = v, u
    while True:
        # v -= round(<u,v>/<u,u>) u, done exactly
        q = Fraction(dot2(u, v), 2 * N(u))
        r = math.floor(q + Fraction(1, 2))
        if r:
            v = (v[0] - r * u[0], v[1] - r * u[1])
        if N(v) < N(u):
            u, v = v, u
        else:
            return u, v


@dataclass
class ComplexLattice:
    """beta + I with I a fractional ideal; integer coordinates are numerators over `den`."""

    ctx: FieldContext = field(repr=False)
    ideal: FracIdeal
    den: int
    u1: tuple[int, int]
    u2: tuple[int, int] | None
    beta: tuple[int, int] = (0, 0)

    @property
    def rank(self) -> int:
        return 1 if self.u2 is None else 2

    def complex_basis(self) -> list[complex]:
        w = self.ctx.w_complex
        return [(x[0] + x[1] * w) / self.den for x in (self.u1, self.u2) if x is not None]

    @property
    def det(self) -> float:
        """Covolume: area of a fundamental domain (length in Q)."""
        if self.rank == 1:
            return float(self.ideal.norm)
        return 0.5 * math.sqrt(-self.ctx.disc) * float(self.ideal.norm)

    @property
    def lambda1_sq(self) -> Fraction:
        """N of the shortest nonzero vector."""
        return Fraction(self.ctx.norm_form(*self.u1), self.den ** (1 if self.rank == 1 else 2))

    def elem(self, x: tuple[int, int]) -> Elem:
        return Elem(self.ctx, x[0], x[1], self.den)


def ideal_lattice(ctx: FieldContext, I: FracIdeal, beta: Elem | None = None) -> ComplexLattice:
    """The (translated) lattice beta + I with a Gauss-reduced basis."""
    D = I.den if beta is None else _lcm(I.den, beta.den)
    s = D // I.den
    if ctx.rational:
        u1, u2 = (I.a * s, 0), None
    else:
        u1, u2 = gauss_reduce(ctx, (I.a * s, 0), (I.b * s, I.c * s))
    b = (0, 0) if beta is None else (beta.a * (D // beta.den), beta.b * (D // beta.den))
    if beta is not None:
        # reduce beta modulo the lattice so the stored translate is canonical
        b = _reduce_mod(ctx, I, D, b)
    return ComplexLattice(ctx, I, D, u1, u2, b)


def _reduce_mod(ctx: FieldContext, I: FracIdeal, D: int, b: tuple[int, int]) -> tuple[int, int]:
    s = D // I.den
    if ctx.rational:
        return (b[0] % (I.a * s), 0)
    c, bb, a = I.c * s, I.b * s, I.a * s
    k = b[1] // c
    x0, x1 = b[0] - k * bb, b[1] - k * c
    return (x0 % a, x1)


def _center_pair(L: ComplexLattice, center) -> tuple[tuple[int, int], int]:
    """Center as an integer pair over a common denominator with L."""
    if center is None or (isinstance(center, int) and center == 0):
        return (0, 0), L.den
    if not isinstance(center, Elem):
        center = Elem(L.ctx, *_as_pair(center)) if not isinstance(center, Fraction) else Elem(L.ctx, center.numerator, 0, center.denominator)
    return (center.a, center.b), center.den


def _as_pair(x):
    if isinstance(x, tuple):
        return x
    return (int(x), 0)


def enumerate_in_disc(L: ComplexLattice, center=None, radius=None, norm_bound=None) -> list[Elem]:
    """All x in beta + I with N(x - center) <= norm_bound (or |x - center| <= radius).

    Candidates come from float coefficient ranges with a safety margin; the
    final decision is exact.  Output is sorted by (N(x - center), coordinates).
    """
    return [L.elem(p) for p in enumerate_pairs(L, center, radius, norm_bound)]


def _bound_from(L: ComplexLattice, radius, norm_bound) -> Fraction:
    if norm_bound is None:
        if radius is None:
            raise ValueError("give radius or norm_bound")
        radius = Fraction(radius)
        norm_bound = radius if L.rank == 1 else radius * radius
    return Fraction(norm_bound)


def enumerate_pairs(L: ComplexLattice, center=None, radius=None, norm_bound=None) -> list[tuple[int, int]]:
    """Like enumerate_in_disc but returns numerator pairs over L.den."""
    ctx = L.ctx
    T = _bound_from(L, radius, norm_bound)
    if T < 0:
        return []
    cp, cden = _center_pair(L, center)
    D = _lcm(L.den, cden)
    sL, sc = D // L.den, D // cden
    C = (cp[0] * sc, cp[1] * sc)
    # N(y/D) <= T  <=>  N(y) * T.den <= T.num * D^e
    e = 1 if L.rank == 1 else 2
    rhs = T.numerator * D ** e
    tden = T.denominator
    bx, by = L.beta
    out = []
    if L.rank == 1:
        a = L.u1[0]
        # |beta + m a - c| <= T  (all over L.den / D)
        lo = (Fraction(C[0], sL) - bx - Fraction(T * L.den)) / a
        hi = (Fraction(C[0], sL) - bx + Fraction(T * L.den)) / a
        for m in range(math.ceil(lo), math.floor(hi) + 1):
            y = ((bx + m * a) * sL - C[0], 0)
            if abs(y[0]) * tden <= rhs:
                out.append((bx + m * a, 0))
        out.sort(key=lambda p: (abs(p[0] * sL - C[0]), p))
        return out
    w = ctx.w_complex
    u1 = complex(L.u1[0] + L.u1[1] * w)
    u2 = complex(L.u2[0] + L.u2[1] * w)
    v0 = complex(bx + by * w) - complex(C[0] + C[1] * w) / sL
    R = math.sqrt(float(T)) * L.den
    area = abs((u1.conjugate() * u2).imag)
    n1 = abs(u1)
    # coefficient k of u2 in (v0 + m u1 + k u2) lies within R |u1| / area of -Im(conj(u1) v0)/area
    k0 = -(u1.conjugate() * v0).imag / (u1.conjugate() * u2).imag
    dk = R * n1 / area
    margin = 1e-9 * (1 + abs(k0) + dk)
    for k in range(math.ceil(k0 - dk - margin), math.floor(k0 + dk + margin) + 1):
        v = v0 + k * u2
        re = (v * u1.conjugate()).real / (n1 * n1)
        im = (v * u1.conjugate()).imag / n1
        disc = R * R - im * im
        if disc < -1e-9 * (R * R + 1):
            continue
        dm = math.sqrt(max(disc, 0.0)) / n1
        mg = 1e-9 * (1 + abs(re) + dm) + 1e-9
        for m in range(math.ceil(-re - dm - mg), math.floor(-re + dm + mg) + 1):
            x = (bx + m * L.u1[0] + k * L.u2[0], by + m * L.u1[1] + k * L.u2[1])
            y = (x[0] * sL - C[0], x[1] * sL - C[1])
            if ctx.norm_form(*y) * tden <= rhs:
                out.append(x)
    out.sort(key=lambda p: (ctx.norm_form(p[0] * sL - C[0], p[1] * sL - C[1]), p))
    return out


# ---------------------------------------------------------------------------
# regions


def poly_eval(coeffs: Sequence[Elem], z: Elem) -> Elem:
    """Horner evaluation; coeffs[i] is the coefficient of z^i."""
    acc = z.ctx.zero
    for c in reversed(coeffs):
        acc = acc * z + c
    return acc


def poly_eval_complex(coeffs: Sequence[complex], z):
    acc = np.zeros_like(z, dtype=complex)
    for c in reversed(coeffs):
        acc = acc * z + c
    return acc


@dataclass
class Constraint:
    """|f(z)| REL |g(z)| in the field's size function, with REL in {"<=", "="}."""

    f: tuple
    g: tuple
    rel: str = "<="

    def holds(self, z: Elem) -> bool:
        a = poly_eval(self.f, z).norm()
        b = poly_eval(self.g, z).norm()
        return a <= b if self.rel == "<=" else a == b


@dataclass
class Region:
    """Bounded set of z cut out by constraints, with a covering by discs.

    `cover` is a list of (center, norm_bound) pairs whose union contains the
    region; the caller certifies it.
    """

    constraints: list
    cover: list | None = None
    degree_limit: int = 8

    def __post_init__(self):
        for c in self.constraints:
            if c.rel not in ("<=", "="):
                raise ValueError(f"bad relation {c.rel!r}")
            if max(len(c.f), len(c.g)) - 1 > self.degree_limit:
                raise ValueError("constraint degree exceeds limit")

    def contains(self, z: Elem) -> bool:
        return all(c.holds(z) for c in self.constraints)

    def contains_complex(self, z: np.ndarray) -> np.ndarray:
        ok = np.ones(z.shape, dtype=bool)
        for c in self.constraints:
            f = [complex(x) for x in c.f]
            g = [complex(x) for x in c.g]
            a = np.abs(poly_eval_complex(f, z))
            b = np.abs(poly_eval_complex(g, z))
            ok &= (a <= b) if c.rel == "<=" else np.isclose(a, b)
        return ok


def disc_region(ctx: FieldContext, norm_bound, center: Elem | None = None) -> Region:
    """{z : N(z - center) <= norm_bound} for a rational square bound in K.

    In K the bound is |z - c|^2 <= T, i.e. |z - c| <= |r| with r^2 = T.  The
    constraint form needs a constant g with N(g) = T, so T must be a norm;
    here g is taken rational, which requires T to be a rational square (K)
    or any rational (Q).
    """
    T = Fraction(norm_bound)
    c = ctx.zero if center is None else center
    if ctx.rational:
        g = Elem(ctx, T.numerator, 0, T.denominator)
    else:
        rn, rd = math.isqrt(T.numerator), math.isqrt(T.denominator)
        if rn * rn != T.numerator or rd * rd != T.denominator:
            raise ValueError("disc_region needs a rational square bound in K")
        g = Elem(ctx, rn, 0, rd)
    return Region([Constraint((-c, ctx.one), (g,))], [(c, T)])


def count_in_region(L: ComplexLattice, region: Region) -> int:
    """Exact number of points of L inside the region."""
    return len(points_in_region(L, region))


def points_in_region(L: ComplexLattice, region: Region) -> list[Elem]:
    if not region.cover:
        raise ValueError("region has no boundedness certificate")
    seen = set()
    out = []
    for c, T in region.cover:
        for p in enumerate_pairs(L, c, norm_bound=T):
            if p in seen:
                continue
            seen.add(p)
            z = L.elem(p)
            if region.contains(z):
                out.append(z)
    out.sort(key=lambda z: z.key())
    return out


def davenport_main_term(area: float, L: ComplexLattice) -> float:
    """area / covolume, i.e. 2 vol / (sqrt|Delta_K| N I) in K."""
    return area / L.det


def region_area(ctx: FieldContext, region: Region, method: str = "montecarlo", samples: int = 200_000,
                seed: int = 0, step: float | None = None) -> tuple[float, float]:
    """(estimate, error bound) for the area of a region in C.

    montecarlo: uniform samples over the cover's bounding box, error = 3 sigma.
    grid: cell-centre rule with step h; error bound = area of boundary cells
    (cells whose corners are not all in or all out).
    """
    if not region.cover:
        raise ValueError("region has no boundedness certificate")
    xs, ys = [], []
    for c, T in region.cover:
        z = complex(c)
        r = math.sqrt(float(T))
        xs += [z.real - r, z.real + r]
        ys += [z.imag - r, z.imag + r]
    x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    box = (x1 - x0) * (y1 - y0)
    if method == "montecarlo":
        rng = np.random.default_rng(seed)
        hits = 0
        n_done = 0
        chunk = 100_000
        while n_done < samples:
            n = min(chunk, samples - n_done)
            z = rng.uniform(x0, x1, n) + 1j * rng.uniform(y0, y1, n)
            hits += int(region.contains_complex(z).sum())
            n_done += n
        p = hits / samples
        return box * p, 3 * box * math.sqrt(max(p * (1 - p), 1.0 / samples) / samples)
    if method == "grid":
        h = step if step is not None else (x1 - x0) / 400
        gx = np.arange(x0, x1 + h, h)
        gy = np.arange(y0, y1 + h, h)
        Z = gx[None, :] + 1j * gy[:, None]
        inside = region.contains_complex(Z)
        corners = inside[:-1, :-1].astype(int) + inside[1:, :-1] + inside[:-1, 1:] + inside[1:, 1:]
        centre = region.contains_complex(Z[:-1, :-1] + (h + 1j * h) / 2)
        est = centre.sum() * h * h
        boundary = ((corners > 0) & (corners < 4)).sum() * h * h
        return float(est), float(boundary)
    raise ValueError(f"unknown method {method!r}")


# ---------------------------------------------------------------------------
# Davenport-style sweep


@dataclass
class DavenportRecord:
    field: str
    ideal: str
    norm: int
    radius: int
    count: int
    main: float

    @property
    def residual(self) -> float:
        return abs(self.count - self.main)

    @property
    def scaled(self) -> float:
        """residual / (R / sqrt(N) + 1)."""
        return self.residual / (self.radius / math.sqrt(self.norm) + 1)


def random_ideal(ctx: FieldContext, rng, max_norm: int = 60) -> FracIdeal:
    """An integral ideal of norm <= max_norm, chosen uniformly from the enumeration."""
    from .number_field import enumerate_ideals

    pool = enumerate_ideals(ctx, max_norm)
    return pool[int(rng.integers(len(pool)))]


def davenport_sweep(fields, n_ideals: int = 20, radii=(10, 20, 40), seed: int = 0, max_norm: int = 60,
                    center_den: int = 97) -> list[DavenportRecord]:
    """Lattice-point counts in discs |x - c| <= R for random ideals and random rational centers c."""
    rng = np.random.default_rng(seed)
    out = []
    for i in range(n_ideals):
        ctx = fields[i % len(fields)]
        I = random_ideal(ctx, rng, max_norm)
        L = ideal_lattice(ctx, I)
        ca, cb = (int(v) for v in rng.integers(0, center_den, size=2))
        center = Elem(ctx, ca, cb, center_den)
        for R in radii:
            n = len(enumerate_pairs(L, center, radius=R))
            out.append(DavenportRecord(ctx.name, I.to_str(), int(I.norm), R, n,
                                       davenport_main_term(math.pi * R * R, L)))
    return out


def fitted_constants(records) -> dict:
    """Per radius, the smallest C with residual <= C (R/sqrt(N) + 1) over all records."""
    out: dict = {}
    for r in records:
        out[r.radius] = max(out.get(r.radius, 0.0), r.scaled)
    return out
