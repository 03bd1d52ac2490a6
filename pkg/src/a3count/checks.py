"""Randomized exact checks shared by `verify` and the test suite."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .number_field import Elem, FieldContext, FracIdeal
from .surface import height, on_surface, psi


@dataclass
class TrialReport:
    name: str
    trials: int
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def random_elem(ctx: FieldContext, rng, size: int = 12, den: int = 1, nonzero: bool = True) -> Elem:
    while True:
        a = int(rng.integers(-size, size + 1))
        b = 0 if ctx.rational else int(rng.integers(-size, size + 1))
        d = int(rng.integers(1, den + 1))
        if a or b or not nonzero:
            return Elem(ctx, a, b, d)


def random_ideal(ctx: FieldContext, rng, k: int = 2) -> FracIdeal:
    """Fractional ideal generated by k random elements with small denominators."""
    return ctx.ideal(*(random_elem(ctx, rng, 20, 6) for _ in range(k)))


def ideal_inverse_trials(ctx: FieldContext, n: int = 200, seed: int = 0) -> TrialReport:
    """I * I^-1 = O_K and N(IJ) = N(I) N(J) on random fractional ideals."""
    rng = np.random.default_rng(seed)
    rep = TrialReport("ideal I*I^-1 = O_K", n)
    for _ in range(n):
        I, J = random_ideal(ctx, rng), random_ideal(ctx, rng)
        if not (I * I.inv()).is_unit() or (I * J).norm != I.norm * J.norm:
            rep.failures.append((I.to_str(), J.to_str()))
    return rep


def height_invariance_trials(ctx: FieldContext, n: int = 1000, seed: int = 0) -> TrialReport:
    """H(lambda x) = H(x) for random points psi(y) of S and random lambda in K^x."""
    rng = np.random.default_rng(seed)
    rep = TrialReport("height invariant under scaling", n)
    for _ in range(n):
        y = [random_elem(ctx, rng, 9) for _ in range(3)]
        p = psi(ctx, *y)
        lam = random_elem(ctx, rng, 30, 12)
        if height(ctx, p).value != height(ctx, p.scale(lam)).value:
            rep.failures.append((p.to_str(), repr(lam)))
    return rep


def psi_membership_trials(ctx: FieldContext, n: int = 1000, seed: int = 0) -> TrialReport:
    """psi(y) lies on S for random y (including rational entries)."""
    rng = np.random.default_rng(seed)
    rep = TrialReport("psi(y) on S", n)
    for _ in range(n):
        y = [random_elem(ctx, rng, 15, 5) for _ in range(3)]
        p = psi(ctx, *y)
        if not on_surface(p):
            rep.failures.append(p.to_str())
    return rep
