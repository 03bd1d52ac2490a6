"""Exact arithmetic in Q and in imaginary quadratic fields Q(sqrt(d)), d < 0.

Elements of O_K are written a + b*w with w = sqrt(d) (d = 2, 3 mod 4) or
w = (1 + sqrt(d))/2 (d = 1 mod 4); w satisfies w^2 = t*w - n.  Fractional
ideals are stored as L/den with L an integral ideal in Hermite normal form
L = Z*a + Z*(b + c*w), c | a, c | b, 0 <= b < a.

Q is modelled as a degenerate field (t = n = 0, b = 0 always) so that the
rest of the package can be written once.  In Q the "norm" of x is |x|, which
is the size function used by the height there; in K it is |x|^2.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterator, Sequence

RATIONAL = "Q"


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, s, t) with s*a + t*b = g = gcd(a, b) >= 0."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        return -a, -s0, -t0
    return a, s0, t0


def is_squarefree(m: int) -> bool:
    m = abs(m)
    if m == 0:
        return False
    k = 2
    while k * k <= m:
        if m % (k * k) == 0:
            return False
        k += 1
    return True


def is_prime(m: int) -> bool:
    if m < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if m % p == 0:
            return m == p
    # deterministic Miller-Rabin for m < 3.3e24
    d, s = m - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41):
        if a % m == 0:
            continue
        x = pow(a, d, m)
        if x in (1, m - 1):
            continue
        for _ in range(s - 1):
            x = x * x % m
            if x == m - 1:
                break
        else:
            return False
    return True


def factor_int(m: int, trial_bound: int | None = None) -> dict[int, int]:
    """Factor |m| by trial division; a cofactor left over is checked prime.

    Raises ValueError if trial division stops at `trial_bound` with a
    composite cofactor.
    """
    m = abs(m)
    if m == 0:
        raise ValueError("cannot factor 0")
    out: dict[int, int] = {}
    p = 2
    while p * p <= m:
        if trial_bound is not None and p > trial_bound:
            break
        while m % p == 0:
            out[p] = out.get(p, 0) + 1
            m //= p
        p += 1 if p == 2 else 2
    if m > 1:
        if not is_prime(m):
            raise ValueError(f"trial division bound too small, composite cofactor {m}")
        out[m] = out.get(m, 0) + 1
    return out


def primes_up_to(x: int) -> list[int]:
    import numpy as np

    if x < 2:
        return []
    sieve = np.ones(x + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(x) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.flatnonzero(sieve).tolist()


def kronecker(D: int, p: int) -> int:
    """Kronecker symbol (D/p) for a rational prime p."""
    if p == 2:
        if D % 2 == 0:
            return 0
        return 1 if D % 8 in (1, 7) else -1
    r = pow(D % p, (p - 1) // 2, p)
    if r == 0:
        return 0
    return 1 if r == 1 else -1


def sqrt_mod_prime(a: int, p: int) -> int:
    """Some x with x^2 = a mod p (p prime, a a square mod p)."""
    a %= p
    if p == 2 or a == 0:
        return a
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    # Tonelli-Shanks
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c, t, r = i, b * b % p, t * b * b % p, r * b % p
    return r


# ---------------------------------------------------------------------------
# binary quadratic forms (class group)


def reduce_form(a: int, b: int, c: int) -> tuple[int, int, int]:
    """Reduce a positive definite form: |b| <= a <= c, b >= 0 if |b| == a or a == c."""
    while True:
        if b > a or b <= -a:
            # translate so that -a < b <= a
            k = (a - b) // (2 * a)
            c = a * k * k + b * k + c
            b = b + 2 * a * k
        if a > c:
            a, b, c = c, -b, a
            continue
        if a == c and b < 0:
            b = -b
        return a, b, c


def reduced_forms(D: int) -> list[tuple[int, int, int]]:
    """All reduced primitive positive definite forms of discriminant D < 0."""
    out = []
    a = 1
    while 3 * a * a <= -D:
        for b in range(-a + 1, a + 1):
            if (b - D) % 2:
                continue
            num = b * b - D
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or (b < 0 and a == c):
                continue
            if math.gcd(math.gcd(a, b), c) != 1:
                continue
            out.append((a, b, c))
        a += 1
    return out


# ---------------------------------------------------------------------------
# field


@dataclass(frozen=True, eq=False)
class FieldContext:
    """All invariants of the base field (Q or an imaginary quadratic field).

    Build with :func:`make_field`.
    """

    d: int | None
    disc: int
    t: int
    n: int
    h: int
    units_count: int
    class_forms: tuple = field(repr=False)

    @property
    def rational(self) -> bool:
        return self.d is None

    @property
    def name(self) -> str:
        return "Q" if self.rational else f"Q(sqrt({self.d}))"

    @property
    def mode(self) -> str:
        return "rational" if self.rational else "imaginary-quadratic"

    @cached_property
    def w_complex(self) -> complex:
        if self.rational:
            return 0j
        if self.t == 0:
            return complex(0.0, math.sqrt(-self.d))
        return complex(0.5, math.sqrt(-self.d) / 2)

    @cached_property
    def rho(self) -> float:
        """Ideal density 2^s1 (2 pi)^s2 R_K / (omega_K sqrt|Delta_K|)."""
        if self.rational:
            return 2.0 / (2 * 1.0)
        return 2 * math.pi / (self.units_count * math.sqrt(-self.disc))

    # -- elements --------------------------------------------------------

    def elem(self, a, b=0, den=1) -> "Elem":
        if isinstance(a, Fraction) or isinstance(b, Fraction):
            a, b = Fraction(a), Fraction(b)
            m = a.denominator * b.denominator // math.gcd(a.denominator, b.denominator)
            return Elem(self, int(a * m), int(b * m), den * m)
        return Elem(self, a, b, den)

    @property
    def one(self) -> "Elem":
        return Elem(self, 1, 0, 1)

    @property
    def zero(self) -> "Elem":
        return Elem(self, 0, 0, 1)

    @property
    def w(self) -> "Elem":
        if self.rational:
            raise ValueError("Q has no generator w")
        return Elem(self, 0, 1, 1)

    def norm_form(self, a: int, b: int) -> int:
        """N(a + b w) for integers a, b (|a| in Q)."""
        if self.rational:
            return abs(a)
        return a * a + self.t * a * b + self.n * b * b

    def mul_pair(self, x: tuple[int, int], y: tuple[int, int]) -> tuple[int, int]:
        a, b = x
        c, d = y
        bd = b * d
        return a * c - bd * self.n, a * d + b * c + bd * self.t

    def conj_pair(self, x: tuple[int, int]) -> tuple[int, int]:
        a, b = x
        return a + self.t * b, -b

    @cached_property
    def units(self) -> tuple[tuple[int, int], ...]:
        """The unit group of O_K as coordinate pairs, in a fixed order."""
        if self.rational:
            return ((1, 0), (-1, 0))
        out = [(a, b) for a in range(-2, 3) for b in range(-2, 3) if self.norm_form(a, b) == 1]
        out.sort(key=lambda u: (u != (1, 0), u))
        assert len(out) == self.units_count
        return tuple(out)

    def canonical_associate(self, x: tuple[int, int]) -> tuple[int, int]:
        """Deterministic representative of x*O_K^x (the lexicographic maximum)."""
        return max(self.mul_pair(u, x) for u in self.units)

    def to_complex(self, x: "Elem") -> complex:
        return (x.a + x.b * self.w_complex) / x.den

    # -- ideals ------------------------------------------------------------

    @cached_property
    def unit_ideal(self) -> "FracIdeal":
        return FracIdeal(self, 1, 1, 0, 1)

    def ideal(self, *gens) -> "FracIdeal":
        """Fractional ideal generated by the given field elements (Elem or int)."""
        gens = [g if isinstance(g, Elem) else self.elem(g) for g in gens]
        gens = [g for g in gens if not g.is_zero()]
        if not gens:
            raise ValueError("zero ideal")
        D = 1
        for g in gens:
            D = D * g.den // math.gcd(D, g.den)
        vecs = []
        for g in gens:
            k = D // g.den
            x = (g.a * k, g.b * k)
            vecs.append(x)
            if not self.rational:
                vecs.append(self.mul_pair(x, (0, 1)))
        return self._from_vectors(vecs, D)

    def _from_vectors(self, vecs, den: int) -> "FracIdeal":
        if self.rational:
            a = 0
            for x, _ in vecs:
                a = math.gcd(a, x)
            g = math.gcd(a, den)
            return FracIdeal(self, den // g, a // g, 0, 1)
        a, b, c = hnf(vecs)
        g = math.gcd(den, c)
        return FracIdeal(self, den // g, a // g, b // g, c // g)

    def ideal_from_hnf(self, a: int, b: int, c: int, den: int = 1) -> "FracIdeal":
        """Build an ideal from a (possibly non-reduced) HNF triple, validating it."""
        I = self._from_vectors([(a, 0), (b, c)] + ([] if self.rational else [self.mul_pair((b, c), (0, 1)), (0, a)]), den)
        if not self.rational and I.norm != Fraction(a * c, den * den):
            raise ValueError("HNF data does not describe an O_K-ideal")
        return I

    @cached_property
    def class_reps(self) -> tuple["FracIdeal", ...]:
        """One integral ideal per class, sorted by (norm, basis)."""
        if self.rational:
            return (self.unit_ideal,)
        reps = []
        for (a, b, c) in self.class_forms:
            B = ((-b - self.t) // 2) % a
            reps.append(FracIdeal(self, 1, a, B, 1))
        reps.sort(key=lambda I: (I.norm, I.hnf))
        return tuple(reps)

    @cached_property
    def _form_index(self) -> dict:
        out = {}
        for k, I in enumerate(self.class_reps):
            out[_ideal_form(self, I)] = k
        return out

    def class_index(self, I: "FracIdeal") -> int:
        """Index k with I ~ class_reps[k] (differ by a principal ideal)."""
        if self.rational:
            return 0
        return self._form_index[_ideal_form(self, I)]

    def class_index_primitive(self, A: int, B: int) -> int:
        """class_index of the primitive integral ideal [A, B + w]."""
        if self.rational or self.h == 1:
            return 0
        f = reduce_form(A, -(2 * B + self.t), (B * B + self.t * B + self.n) // A)
        return self._form_index[f]

    def is_principal(self, I: "FracIdeal") -> bool:
        return self.class_index(I) == self.class_index(self.unit_ideal)

    # -- primes ----------------------------------------------------------

    def split_prime(self, p: int) -> list["PrimeIdeal"]:
        return split_prime(self, p)

    def __repr__(self):
        return f"FieldContext({self.name}, disc={self.disc}, h={self.h}, units={self.units_count})"


def hnf(vecs: Sequence[tuple[int, int]]) -> tuple[int, int, int]:
    """Hermite normal form (a, b, c) of the full-rank Z-lattice spanned by vecs.

    The lattice is Z*(a, 0) + Z*(b, c) with a, c > 0 and 0 <= b < a.
    """
    a = 0
    b0, c = 0, 0
    for x0, x1 in vecs:
        if x1 == 0:
            a = math.gcd(a, x0)
            continue
        if c == 0:
            b0, c = (x0, x1) if x1 > 0 else (-x0, -x1)
            continue
        g, s, t = xgcd(c, x1)
        a = math.gcd(a, (x1 // g) * b0 - (c // g) * x0)
        b0, c = s * b0 + t * x0, g
    if a == 0 or c == 0:
        raise ValueError("vectors do not span a full-rank lattice")
    return a, b0 % a, c


def _ideal_form(ctx: FieldContext, I: "FracIdeal") -> tuple[int, int, int]:
    A, B = I.a // I.c, I.b // I.c
    return reduce_form(A, -(2 * B + ctx.t), (B * B + ctx.t * B + ctx.n) // A)


def make_field(d) -> FieldContext:
    """Field context for Q (d = "Q" or None) or Q(sqrt(d)) with d < 0 squarefree."""
    if d is None or (isinstance(d, str) and d.strip().upper() in ("Q", "QQ", "RATIONAL")):
        return FieldContext(None, 1, 0, 0, 1, 2, ())
    d = int(d)
    if d >= 0:
        raise ValueError(f"d must be negative, got {d}")
    if not is_squarefree(d):
        raise ValueError(f"d must be squarefree, got {d}")
    if d % 4 == 1:
        disc, t, n = d, 1, (1 - d) // 4
    else:
        disc, t, n = 4 * d, 0, -d
    units = {-4: 4, -3: 6}.get(disc, 2)
    forms = tuple(reduced_forms(disc))
    return FieldContext(d, disc, t, n, len(forms), units, forms)


# ---------------------------------------------------------------------------
# elements


class Elem:
    """An element (a + b*w)/den of K, kept in lowest terms."""

    __slots__ = ("ctx", "a", "b", "den")

    def __init__(self, ctx: FieldContext, a: int, b: int = 0, den: int = 1):
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if ctx.rational and b:
            raise ValueError("rational field elements have b = 0")
        if den < 0:
            a, b, den = -a, -b, -den
        g = math.gcd(math.gcd(a, b), den)
        if g > 1:
            a, b, den = a // g, b // g, den // g
        self.ctx, self.a, self.b, self.den = ctx, a, b, den

    def _coerce(self, other) -> "Elem":
        if isinstance(other, Elem):
            return other
        if isinstance(other, int):
            return Elem(self.ctx, other)
        if isinstance(other, Fraction):
            return Elem(self.ctx, other.numerator, 0, other.denominator)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Elem(self.ctx, self.a * o.den + o.a * self.den, self.b * o.den + o.b * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return Elem(self.ctx, -self.a, -self.b, self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        a, b = self.ctx.mul_pair((self.a, self.b), (o.a, o.b))
        return Elem(self.ctx, a, b, self.den * o.den)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return (self.ctx.one / self) ** (-k)
        out = self.ctx.one
        for _ in range(k):
            out = out * self
        return out

    def conj(self) -> "Elem":
        a, b = self.ctx.conj_pair((self.a, self.b))
        return Elem(self.ctx, a, b, self.den)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o.is_zero():
            raise ZeroDivisionError("division by zero in K")
        if self.ctx.rational:
            return Elem(self.ctx, self.a * o.den, 0, self.den * o.a)
        # x / y = x * conj(y) / N(y), with y = (c + d w)/e
        num = self * Elem(self.ctx, *self.ctx.conj_pair((o.a, o.b)))
        N = self.ctx.norm_form(o.a, o.b)
        return Elem(self.ctx, num.a * o.den, num.b * o.den, num.den * N)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def norm(self) -> Fraction:
        """Absolute norm: |x| in Q, |x|^2 in K."""
        return Fraction(self.ctx.norm_form(self.a, self.b), self.den ** (1 if self.ctx.rational else 2))

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_integral(self) -> bool:
        return self.den == 1

    def pair(self) -> tuple[int, int]:
        if self.den != 1:
            raise ValueError(f"{self} is not integral")
        return self.a, self.b

    def key(self) -> tuple[int, int, int]:
        return self.a, self.b, self.den

    def __complex__(self):
        return self.ctx.to_complex(self)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.key() == o.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        if self.ctx.rational:
            return f"{self.a}" if self.den == 1 else f"{self.a}/{self.den}"
        s = f"{self.a}+{self.b}*w"
        return s if self.den == 1 else f"({s})/{self.den}"


# ---------------------------------------------------------------------------
# fractional ideals


@dataclass(frozen=True)
class FracIdeal:
    """The fractional ideal (Z*a + Z*(b + c*w)) / den in canonical form.

    In Q the ideal is (a/den)*Z and (b, c) = (0, 1).
    """

    ctx: FieldContext = field(compare=False, repr=False)
    den: int
    a: int
    b: int
    c: int

    @property
    def hnf(self) -> tuple[int, int, int]:
        return self.a, self.b, self.c

    @cached_property
    def norm(self) -> Fraction:
        if self.ctx.rational:
            return Fraction(self.a, self.den)
        return Fraction(self.a * self.c, self.den * self.den)

    def is_integral(self) -> bool:
        return self.den == 1

    def is_unit(self) -> bool:
        return self.den == 1 and self.a == 1 and self.c == 1

    def basis(self) -> tuple[Elem, Elem]:
        ctx = self.ctx
        if ctx.rational:
            return (Elem(ctx, self.a, 0, self.den),) * 2
        return Elem(ctx, self.a, 0, self.den), Elem(ctx, self.b, self.c, self.den)

    def _vectors(self) -> list[tuple[int, int]]:
        if self.ctx.rational:
            return [(self.a, 0)]
        return [(self.a, 0), (self.b, self.c)]

    def __mul__(self, other: "FracIdeal") -> "FracIdeal":
        ctx = self.ctx
        if isinstance(other, Elem):
            if other.is_zero():
                raise ValueError("zero ideal")
            other = ctx.ideal(other)
        if ctx.rational:
            return ctx._from_vectors([(self.a * other.a, 0)], self.den * other.den)
        vecs = [ctx.mul_pair(x, y) for x in self._vectors() for y in other._vectors()]
        return ctx._from_vectors(vecs, self.den * other.den)

    __rmul__ = __mul__

    def inv(self) -> "FracIdeal":
        ctx = self.ctx
        if ctx.rational:
            return ctx._from_vectors([(self.den, 0)], self.a)
        N = self.a * self.c
        vecs = [(self.a * self.den, 0), tuple(self.den * v for v in ctx.conj_pair((self.b, self.c)))]
        vecs.append(ctx.mul_pair(vecs[1], (0, 1)))
        vecs.append(ctx.mul_pair(vecs[0], (0, 1)))
        return ctx._from_vectors(vecs, N)

    def __truediv__(self, other: "FracIdeal") -> "FracIdeal":
        return self * other.inv()

    def __pow__(self, k: int) -> "FracIdeal":
        base = self if k >= 0 else self.inv()
        out = self.ctx.unit_ideal
        for _ in range(abs(k)):
            out = out * base
        return out

    def __add__(self, other: "FracIdeal") -> "FracIdeal":
        """Ideal sum (the gcd of the two ideals)."""
        ctx = self.ctx
        D = self.den * other.den // math.gcd(self.den, other.den)
        vecs = [(x * (D // self.den), y * (D // self.den)) for x, y in self._vectors()]
        vecs += [(x * (D // other.den), y * (D // other.den)) for x, y in other._vectors()]
        return ctx._from_vectors(vecs, D)

    def __contains__(self, x) -> bool:
        ctx = self.ctx
        if not isinstance(x, Elem):
            x = ctx.elem(x) if not isinstance(x, Fraction) else Elem(ctx, x.numerator, 0, x.denominator)
        y0, y1, e = x.a * self.den, x.b * self.den, x.den
        if y0 % e or y1 % e:
            return False
        y0, y1 = y0 // e, y1 // e
        if ctx.rational:
            return y0 % self.a == 0
        if y1 % self.c:
            return False
        return (y0 - (y1 // self.c) * self.b) % self.a == 0

    def contains_pair(self, y: tuple[int, int]) -> bool:
        """Membership of an integral element given as a pair (den must be 1)."""
        y0, y1 = y
        if self.ctx.rational:
            return y0 % self.a == 0
        if y1 % self.c:
            return False
        return (y0 - (y1 // self.c) * self.b) % self.a == 0

    def divides(self, other: "FracIdeal") -> bool:
        """self | other, i.e. other is contained in self."""
        return (other / self).is_integral()

    def class_index(self) -> int:
        return self.ctx.class_index(self)

    def to_str(self) -> str:
        return f"({self.den}; [{self.a},{self.b};0,{self.c}])"

    def __repr__(self):
        return f"Ideal{self.to_str()}"


def parse_ideal(ctx: FieldContext, s: str) -> FracIdeal:
    """Inverse of FracIdeal.to_str: "(den; [a,b;0,c])"."""
    import re

    m = re.fullmatch(r"\s*\(\s*(\d+)\s*;\s*\[\s*(-?\d+)\s*,\s*(-?\d+)\s*;\s*0\s*,\s*(\d+)\s*\]\s*\)\s*", s)
    if not m:
        raise ValueError(f"bad ideal string {s!r}")
    den, a, b, c = map(int, m.groups())
    return ctx.ideal_from_hnf(a, b, c, den)


# ---------------------------------------------------------------------------
# prime ideals and factorization


@dataclass(frozen=True)
class PrimeIdeal:
    p: int
    f: int
    ramified: bool
    ideal: FracIdeal

    @property
    def norm(self) -> int:
        return self.p ** self.f


def _poly_roots_mod_p(ctx: FieldContext, p: int) -> list[int]:
    """Roots r of X^2 - tX + n mod p, sorted."""
    if p == 2:
        return [r for r in range(2) if (r * r - ctx.t * r + ctx.n) % 2 == 0]
    s = sqrt_mod_prime(ctx.disc, p)
    inv2 = (p + 1) // 2
    return sorted({(ctx.t + s) * inv2 % p, (ctx.t - s) * inv2 % p})


def lift_root(ctx: FieldContext, r: int, p: int, k: int) -> int:
    """Hensel-lift a simple root r of X^2 - tX + n from mod p to mod p^k."""
    q = p
    for _ in range(k - 1):
        q *= p
        f = r * r - ctx.t * r + ctx.n
        fp = 2 * r - ctx.t
        r = (r - f * pow(fp, -1, q)) % q
    return r % q


def split_prime(ctx: FieldContext, p: int) -> list[PrimeIdeal]:
    """Prime ideals above the rational prime p, with their decomposition type."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if ctx.rational:
        return [PrimeIdeal(p, 1, False, FracIdeal(ctx, 1, p, 0, 1))]
    k = kronecker(ctx.disc, p)
    if k == -1:
        return [PrimeIdeal(p, 2, False, FracIdeal(ctx, 1, p, 0, p))]
    roots = _poly_roots_mod_p(ctx, p)
    primes = [PrimeIdeal(p, 1, k == 0, FracIdeal(ctx, 1, p, (-r) % p, 1)) for r in roots]
    primes.sort(key=lambda P: P.ideal.hnf)
    return primes


@dataclass(frozen=True)
class IdealFactorization:
    factors: tuple[tuple[PrimeIdeal, int], ...]

    def prime_norms(self) -> list[tuple[int, int]]:
        return [(P.norm, e) for P, e in self.factors]

    def product(self, ctx: FieldContext) -> FracIdeal:
        out = ctx.unit_ideal
        for P, e in self.factors:
            out = out * P.ideal ** e
        return out


def factor_ideal(I: FracIdeal, trial_bound: int | None = None) -> IdealFactorization:
    ctx = I.ctx
    if not I.is_integral():
        raise ValueError("factor_ideal expects an integral ideal")
    N = I.norm
    assert N.denominator == 1
    out = []
    if N == 1:
        return IdealFactorization(())
    for p in sorted(factor_int(N.numerator, trial_bound)):
        for P in split_prime(ctx, p):
            e, J = 0, I
            while True:
                Q = J / P.ideal
                if not Q.is_integral():
                    break
                J, e = Q, e + 1
            if e:
                out.append((P, e))
    fac = IdealFactorization(tuple(out))
    return fac


def _fac(I) -> list[tuple[int, int]]:
    if isinstance(I, IdealFactorization):
        return I.prime_norms()
    if I.norm == 0:
        raise ValueError("zero ideal")
    return factor_ideal(I).prime_norms()


def mobius(I) -> int:
    f = _fac(I)
    if any(e > 1 for _, e in f):
        return 0
    return -1 if len(f) % 2 else 1


def euler_phi(I) -> int:
    out = 1
    for q, e in _fac(I):
        out *= q ** (e - 1) * (q - 1)
    return out


def phi_star(I) -> Fraction:
    out = Fraction(1)
    for q, _ in _fac(I):
        out *= 1 - Fraction(1, q)
    return out


def omega_count(I) -> int:
    return len(_fac(I))


def tau(I) -> int:
    out = 1
    for _, e in _fac(I):
        out *= e + 1
    return out


# ---------------------------------------------------------------------------
# ideal enumeration


@dataclass(frozen=True)
class IdealRecord:
    """An integral ideal c * [A, B + w] together with its factorization."""

    norm: int
    c: int
    A: int
    B: int
    factors: tuple[tuple[int, int], ...]  # (N p, exponent) per prime ideal

    def to_ideal(self, ctx: FieldContext) -> FracIdeal:
        if ctx.rational:
            return FracIdeal(ctx, 1, self.c, 0, 1)
        return FracIdeal(ctx, 1, self.c * self.A, self.c * self.B, self.c)

    @property
    def omega(self) -> int:
        return len(self.factors)


def _prime_blocks(ctx: FieldContext, t: int):
    """Per rational prime, the list of (norm, c_factor, (modulus, root) | None, factors)."""
    blocks = []
    for p in primes_up_to(t):
        choices = []
        if ctx.rational:
            q = p
            e = 1
            while q <= t:
                choices.append((q, q, None, ((p, e),)))
                q *= p
                e += 1
            blocks.append((p, choices))
            continue
        k = kronecker(ctx.disc, p)
        if k == -1:
            if p * p > t:
                continue
            q, e = p * p, 1
            while q <= t:
                choices.append((q, p ** e, None, ((p * p, e),)))
                q *= p * p
                e += 1
            blocks.append((p * p, choices))
        elif k == 0:
            (r,) = _poly_roots_mod_p(ctx, p)
            e, q = 1, p
            while q <= t:
                prim = (p, (-r) % p) if e % 2 else None
                choices.append((q, p ** (e // 2), prim, ((p, e),)))
                q *= p
                e += 1
            blocks.append((p, choices))
        else:
            r1, r2 = _poly_roots_mod_p(ctx, p)
            # order the two primes by their HNF (= by -r mod p)
            pr = sorted([r1, r2], key=lambda r: (-r) % p)
            lifts: dict = {}
            kmax = 0
            q = p
            while q <= t:
                kmax += 1
                q *= p
            for e_tot in range(1, kmax + 1):
                for e1 in range(e_tot, -1, -1):
                    e2 = e_tot - e1
                    m = min(e1, e2)
                    d = e1 - e2
                    if d == 0:
                        prim = None
                    else:
                        r = pr[0] if d > 0 else pr[1]
                        key = (r, abs(d))
                        if key not in lifts:
                            lifts[key] = lift_root(ctx, r, p, abs(d))
                        mod = p ** abs(d)
                        prim = (mod, (-lifts[key]) % mod)
                    fac = tuple((p, e) for e in (e1, e2) if e)
                    choices.append((p ** e_tot, p ** m, prim, fac))
            blocks.append((p, choices))
    blocks.sort(key=lambda blk: blk[0])
    return blocks


def iter_ideals(ctx: FieldContext, t) -> Iterator[IdealRecord]:
    """All nonzero integral ideals of norm <= t (unordered).

    Ideals are produced as products of prime-ideal powers with the
    primitive part assembled by CRT on the roots of X^2 - tX + n.
    """
    t = math.floor(t)
    if t < 1:
        return
    blocks = _prime_blocks(ctx, t)
    mins = [blk[0] for blk in blocks]

    stack = [(0, 1, 1, 1, 0, ())]
    while stack:
        start, norm, c, A, B, fac = stack.pop()
        yield IdealRecord(norm, c, A, B, fac)
        limit = t // norm
        for i in range(start, len(blocks)):
            if mins[i] > limit:
                break
            for q, cf, prim, f in blocks[i][1]:
                if q > limit:
                    break
                if prim is None:
                    A2, B2 = A, B
                else:
                    m, r = prim
                    # CRT: B2 = B mod A, B2 = r mod m
                    B2 = B + A * ((r - B) * pow(A, -1, m) % m)
                    A2 = A * m
                    B2 %= A2
                stack.append((i + 1, norm * q, c * cf, A2, B2, fac + f))


def enumerate_ideals(ctx: FieldContext, t, cls: int | None = None) -> list[FracIdeal]:
    """All integral ideals with norm <= t, sorted by (norm, HNF); optional class filter."""
    out = []
    for rec in iter_ideals(ctx, t):
        if cls is not None and ctx.class_index_primitive(rec.A, rec.B) != cls:
            continue
        out.append(rec.to_ideal(ctx))
    out.sort(key=lambda I: (I.norm, I.hnf))
    return out
