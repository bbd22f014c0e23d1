"""Shared random generators for property-style tests.

Non-signaling 2x2 binary systems are drawn by fixing exact rational
marginals per setting and a joint mass inside the Frechet bounds, so
non-signaling holds by construction with no tolerance.
"""

from __future__ import annotations

import random
from fractions import Fraction

from contextuality import make_system, mix
from contextuality.systems import SystemSpec

BIN = ("0", "1")


def random_fraction(rng: random.Random, max_den: int = 12) -> Fraction:
    den = rng.randint(1, max_den)
    return Fraction(rng.randint(0, den), den)


def random_ns_2x2(rng: random.Random, name: str = "rand") -> SystemSpec:
    alpha = {x: random_fraction(rng) for x in ("1", "2")}
    beta = {y: random_fraction(rng) for y in ("1", "2")}
    pmfs = {}
    for x in ("1", "2"):
        for y in ("1", "2"):
            lo = max(Fraction(0), alpha[x] + beta[y] - 1)
            hi = min(alpha[x], beta[y])
            # lean on the Frechet endpoints so extremal (often contextual)
            # correlation patterns come up regularly
            roll = rng.random()
            if roll < Fraction(1, 3):
                t = Fraction(0)
            elif roll < Fraction(2, 3):
                t = Fraction(1)
            else:
                t = Fraction(rng.randint(0, 16), 16)
            p11 = lo + t * (hi - lo)
            pmfs[(x, y)] = {
                ("1", "1"): p11,
                ("1", "0"): alpha[x] - p11,
                ("0", "1"): beta[y] - p11,
                ("0", "0"): 1 - alpha[x] - beta[y] + p11,
            }
    alph = {"1": BIN, "2": BIN}
    return make_system(name, alph, alph, pmfs)


def random_shape(rng: random.Random, max_settings: int = 3, max_values: int = 3):
    na, nb = rng.randint(1, max_settings), rng.randint(1, max_settings)
    a_alph = {
        str(i + 1): tuple(str(v) for v in range(rng.randint(2, max_values)))
        for i in range(na)
    }
    b_alph = {
        str(j + 1): tuple(str(v) for v in range(rng.randint(2, max_values)))
        for j in range(nb)
    }
    return a_alph, b_alph


def random_deterministic_ns(rng: random.Random, a_alph, b_alph) -> SystemSpec:
    contexts = [(x, y) for x in a_alph for y in b_alph]
    f = {x: rng.choice(a_alph[x]) for x in a_alph}
    g = {y: rng.choice(b_alph[y]) for y in b_alph}
    pmfs = {c: {(f[c[0]], g[c[1]]): Fraction(1)} for c in contexts}
    return make_system("det", a_alph, b_alph, pmfs)


def random_ns_mixture(rng: random.Random, max_components: int = 5) -> SystemSpec:
    a_alph, b_alph = random_shape(rng)
    k = rng.randint(1, max_components)
    systems = [random_deterministic_ns(rng, a_alph, b_alph) for _ in range(k)]
    weights = [rng.randint(1, 9) for _ in range(k)]
    total = sum(weights)
    return mix(
        [(s, Fraction(w, total)) for s, w in zip(systems, weights)],
        name="random-mixture",
    )
