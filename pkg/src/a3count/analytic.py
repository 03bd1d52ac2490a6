"""Desk-scale checks of the ideal-sum machinery.

Ideals are enumerated once per (field, t); sums of multiplicative functions
over them are compared with rho_K * A(theta) * t, where the average A(theta)
comes from its Euler product and, independently, from the Moebius-convolution
series sum (theta * mu)(a) / Na.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .constant import euler_factor, poly_eval, prime_norms, theta8_local
from .number_field import FieldContext, iter_ideals


@dataclass(frozen=True)
class MultiplicativeSpec:
    """theta(a) = prod_p A(Np, v_p(a)), with A(q, n) = A(q, stable) for n >= stable.

    bound: declared C with 0 <= A <= C.  tail_k: exp(-k x^2) <= local factor
    <= exp(k x^2) for x = 1/Np <= 1/2, used for the truncation bracket.
    """

    name: str
    local: Callable[[int, int], float]
    stable: int = 1
    bound: float = 1.0
    tail_k: float = 2.0

    def value(self, factors) -> float:
        out = 1.0
        for q, e in factors:
            out *= self.local(q, min(e, self.stable))
        return out

    def conv_mu(self, factors) -> float:
        """(theta * mu)(a): multiplicative with value A(n) - A(n-1) at p^n."""
        out = 1.0
        for q, e in factors:
            out *= self.local(q, min(e, self.stable)) - self.local(q, min(e - 1, self.stable))
        return out

    def euler_local(self, q: int) -> float:
        """(1 - x) sum_n A(n) x^n with x = 1/q, summed in closed form."""
        x = 1.0 / q
        head = sum(self.local(q, n) * x ** n for n in range(self.stable))
        tail = self.local(q, self.stable) * x ** self.stable / (1 - x)
        return (1 - x) * (head + tail)


ONE = MultiplicativeSpec("one", lambda q, n: 1.0, stable=0, tail_k=0.0)
PHI_STAR = MultiplicativeSpec("phi-star", lambda q, n: 1.0 if n == 0 else 1.0 - 1.0 / q, tail_k=2.0)
SPECS = {s.name: s for s in (ONE, PHI_STAR)}


def get_spec(name: str) -> MultiplicativeSpec:
    try:
        return SPECS[name]
    except KeyError:
        raise ValueError(f"unknown spec {name!r}; choose from {sorted(SPECS)}") from None


# ---------------------------------------------------------------------------
# shared enumeration


@dataclass
class IdealTable:
    """Norms, classes and factorizations of all integral ideals with N <= t."""

    ctx: FieldContext
    t: int
    norm: np.ndarray
    cls: np.ndarray
    factors: list


_TABLES: dict = {}


def ideal_table(ctx: FieldContext, t: int) -> IdealTable:
    """Sorted by norm; a cached table for a larger t is sliced rather than rebuilt."""
    t = int(t)
    cached = _TABLES.get(ctx.d)
    if cached is None or cached.t < t:
        recs = sorted(iter_ideals(ctx, t), key=lambda r: (r.norm, r.c, r.A, r.B))
        norm = np.array([r.norm for r in recs], dtype=np.int64)
        cls = np.array([ctx.class_index_primitive(r.A, r.B) for r in recs], dtype=np.int64)
        cached = _TABLES[ctx.d] = IdealTable(ctx, t, norm, cls, [r.factors for r in recs])
    if cached.t == t:
        return cached
    k = int(np.searchsorted(cached.norm, t, side="right"))
    return IdealTable(ctx, t, cached.norm[:k], cached.cls[:k], cached.factors[:k])


# ---------------------------------------------------------------------------
# averages


@dataclass
class Average:
    value: float
    lower: float
    upper: float
    method: str


def average_euler(ctx: FieldContext, spec: MultiplicativeSpec, P: int) -> Average:
    """A(theta) = prod_p (1 - 1/Np) sum_n A(n)/Np^n over Np <= P, with tail bracket."""
    logs = [math.log(spec.euler_local(q)) for q in prime_norms(ctx, P)]
    v = math.exp(math.fsum(logs))
    m = 1 if ctx.rational else 2
    slack = math.exp(spec.tail_k * m / P)
    return Average(v, v / slack, v * slack, "euler")


def _tail_d2(T: float) -> float:
    """Upper bound for sum_{n > T} d(n) / n^2 (T >= 1)."""
    return (2 * math.log(T) + 6) / T


def average_mobius(ctx: FieldContext, spec: MultiplicativeSpec, T: int) -> Average:
    """A(theta) = sum_a (theta * mu)(a) / Na, truncated at Na <= T.

    Requires |(theta * mu)(a)| <= 1/Na on the enumerated range; the tail is
    then at most sum_{n > T} d(n)/n^2, since at most d(n) ideals have norm n.
    """
    tab = ideal_table(ctx, T)
    terms = np.array([spec.conv_mu(f) for f in tab.factors])
    if np.any(np.abs(terms) * tab.norm > 1 + 1e-9):
        raise ValueError(f"spec {spec.name!r}: |theta * mu| exceeds 1/Na, no tail bound")
    v = math.fsum(terms / tab.norm)
    tail = _tail_d2(T)
    return Average(v, v - tail, v + tail, "mobius")


def theta8_rule_average(ctx: FieldContext, P: int) -> float:
    """prod_p sum_L (1-x)^(7-|L|) x^|L| theta_8(L), evaluated term by term in floats."""
    import itertools

    subsets = [L for k in range(8) for L in itertools.combinations(range(1, 8), k)]
    logs = []
    for q in prime_norms(ctx, P):
        x = 1.0 / q
        local = math.fsum((1 - x) ** (7 - len(L)) * x ** len(L) * float(poly_eval(theta8_local(L), x)) for L in subsets)
        logs.append(math.log(local))
    return math.exp(math.fsum(logs))


def theta8_closed_average(ctx: FieldContext, P: int) -> float:
    return math.exp(math.fsum(math.log(euler_factor(1.0 / q)) for q in prime_norms(ctx, P)))


# ---------------------------------------------------------------------------
# reports


@dataclass
class Row:
    t: int
    cls: int | None
    lhs: float
    rhs: float

    @property
    def ratio(self) -> float:
        return self.lhs / self.rhs if self.rhs else float("nan")

    @property
    def deviation(self) -> float:
        """|lhs - rhs| / t."""
        return abs(self.lhs - self.rhs) / self.t


@dataclass
class AverageReport:
    spec: str
    average: Average
    rows: list[Row] = field(default_factory=list)

    def to_csv(self) -> str:
        return rows_to_csv(self.rows)


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", "class", "lhs", "rhs", "ratio"])
    for r in rows:
        w.writerow([r.t, "" if r.cls is None else r.cls, repr(float(r.lhs)), repr(float(r.rhs)), repr(float(r.ratio))])
    return buf.getvalue()


def average_value_check(ctx: FieldContext, spec: MultiplicativeSpec, t: int, P: int = 100_000,
                        per_class: bool = True) -> AverageReport:
    """sum_{Na <= t, a in class} theta(a) against rho_K A(theta) t, per class and in total."""
    if t < 1:
        raise ValueError("t must be >= 1")
    avg = average_euler(ctx, spec, P)
    tab = ideal_table(ctx, t)
    vals = np.array([spec.value(f) for f in tab.factors])
    rep = AverageReport(spec.name, avg)
    if per_class:
        for k in range(ctx.h):
            rep.rows.append(Row(t, k, float(vals[tab.cls == k].sum()), ctx.rho * avg.value * t))
    rep.rows.append(Row(t, None, float(vals.sum()), ctx.h * ctx.rho * avg.value * t))
    return rep


def ideal_density_check(ctx: FieldContext, t: int) -> AverageReport:
    """Per-class ideal counts against rho_K t (the all-ones average)."""
    return average_value_check(ctx, ONE, t)


def deviation_profile(ctx: FieldContext, spec: MultiplicativeSpec, ts, P: int = 100_000) -> list[tuple[int, float]]:
    """Worst |sum - rho A s| / s over s in (t/2, t], for each t (all classes together).

    Taking the maximum over a window smooths the lattice-point oscillation,
    so the decay exponent can be read off from two values of t.
    """
    avg = average_euler(ctx, spec, P).value
    tab = ideal_table(ctx, max(ts))
    vals = np.array([spec.value(f) for f in tab.factors])
    norms = tab.norm
    # partial sums at each integer s
    tmax = max(ts)
    per_norm = np.bincount(norms, weights=vals, minlength=tmax + 1)
    S = np.cumsum(per_norm)
    s = np.arange(tmax + 1, dtype=float)
    dens = ctx.h * ctx.rho * avg
    out = []
    for t in ts:
        lo = t // 2 + 1
        dev = np.abs(S[lo:t + 1] - dens * s[lo:t + 1]) / s[lo:t + 1]
        out.append((t, float(dev.max())))
    return out


def decay_exponent(profile) -> float:
    """Slope of log deviation against log t between the first and last entries."""
    (t0, d0), (t1, d1) = profile[0], profile[-1]
    return math.log(d1 / d0) / math.log(t1 / t0)


def omega_sum_report(ctx: FieldContext, C: int, ts) -> list[Row]:
    """sum_{Na <= t} (C+1)^omega(a) against t (log t)^C, one row per t (rhs = t log^C t)."""
    tmax = max(ts)
    tab = ideal_table(ctx, tmax)
    w = np.array([(C + 1) ** len(f) for f in tab.factors], dtype=float)
    per_norm = np.bincount(tab.norm, weights=w, minlength=tmax + 1)
    S = np.cumsum(per_norm)
    rows = []
    for t in ts:
        rhs = t * math.log(t) ** C if t > 1 or C == 0 else float(t)
        rows.append(Row(t, None, float(S[t]), rhs))
    return rows
