"""Exact Z[sqrt(2)] geometry of the Peres 33-ray construction.

Rays are directions in 3-space with components a + b*sqrt(2), a, b integer,
held in a canonical form that quotients out scaling (including by sqrt(2))
and overall sign.  Orthogonality is exact ring arithmetic, so the 40
mutually-orthogonal triples and the noncolorability search carry no
numerical tolerance at all.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations, product
from math import gcd


@dataclass(frozen=True)
class Zr2:
    """The ring element a + b*sqrt(2)."""

    a: int
    b: int

    def __add__(self, other: "Zr2") -> "Zr2":
        return Zr2(self.a + other.a, self.b + other.b)

    def __mul__(self, other: "Zr2") -> "Zr2":
        # (a + b r)(c + d r) = (ac + 2bd) + (ad + bc) r, with r^2 = 2
        return Zr2(
            self.a * other.a + 2 * self.b * other.b,
            self.a * other.b + self.b * other.a,
        )

    def __neg__(self) -> "Zr2":
        return Zr2(-self.a, -self.b)

    def is_zero(self) -> bool:
        # sqrt(2) is irrational, so a + b*sqrt(2) = 0 forces a = b = 0
        return self.a == 0 and self.b == 0

    def sign(self) -> int:
        if self.a == 0 and self.b == 0:
            return 0
        if self.a == 0:
            return 1 if self.b > 0 else -1
        if self.b == 0:
            return 1 if self.a > 0 else -1
        if (self.a > 0) == (self.b > 0):
            return 1 if self.a > 0 else -1
        # opposite signs: compare |a| with |b|*sqrt(2) via squares
        if self.a * self.a > 2 * self.b * self.b:
            return 1 if self.a > 0 else -1
        return 1 if self.b > 0 else -1

    def __str__(self) -> str:
        if self.b == 0:
            return str(self.a)
        if self.a == 0:
            return f"{self.b}√2" if self.b != 1 else "√2"
        return f"{self.a}{self.b:+}√2"


Z0 = Zr2(0, 0)
Z1 = Zr2(1, 0)
SQRT2 = Zr2(0, 1)


@dataclass(frozen=True)
class Ray:
    """A direction in Z[sqrt(2)]^3, canonical up to Z[sqrt(2)] scaling and sign."""

    coords: tuple[Zr2, Zr2, Zr2]

    def __post_init__(self):
        if all(c.is_zero() for c in self.coords):
            raise ValueError("zero vector is not a ray")

    def key(self):
        return tuple((c.a, c.b) for c in self.coords)

    def __str__(self) -> str:
        return "(" + ", ".join(str(c) for c in self.coords) + ")"


def canonical_ray(coords: tuple[Zr2, Zr2, Zr2]) -> Ray:
    """Reduce by common integer factor and sqrt(2), fix the leading sign."""
    cs = list(coords)
    if all(c.is_zero() for c in cs):
        raise ValueError("zero vector is not a ray")
    while True:
        g = 0
        for c in cs:
            g = gcd(g, gcd(abs(c.a), abs(c.b)))
        if g > 1:
            cs = [Zr2(c.a // g, c.b // g) for c in cs]
        # divisible by sqrt(2) iff every a-part is even: (a + b r)/r = b + (a/2) r
        if all(c.a % 2 == 0 for c in cs):
            cs = [Zr2(c.b, c.a // 2) for c in cs]
            continue
        if g <= 1:
            break
    lead = next(c for c in cs if not c.is_zero())
    if lead.sign() < 0:
        cs = [-c for c in cs]
    return Ray(coords=tuple(cs))


@dataclass(frozen=True)
class Triad:
    """Three pairwise-orthogonal rays, in canonical ray order."""

    rays: tuple[Ray, Ray, Ray]

    def __contains__(self, ray: Ray) -> bool:
        return ray in self.rays

    def index(self, ray: Ray) -> int:
        return self.rays.index(ray)


def dot(u: Ray, v: Ray) -> Zr2:
    out = Z0
    for cu, cv in zip(u.coords, v.coords):
        out = out + cu * cv
    return out


def collinear(u: Ray, v: Ray) -> bool:
    """Cross product zero, tested exactly in the ring."""
    (u0, u1, u2), (v0, v1, v2) = u.coords, v.coords
    return (
        (u1 * v2 + (-(u2 * v1))).is_zero()
        and (u2 * v0 + (-(u0 * v2))).is_zero()
        and (u0 * v1 + (-(u1 * v0))).is_zero()
    )


def _orbit(seed: tuple[Zr2, Zr2, Zr2]) -> set[Ray]:
    """Canonical rays in the seed's orbit under permutations and sign flips."""
    out: set[Ray] = set()
    for perm in permutations(range(3)):
        for signs in product((1, -1), repeat=3):
            v = tuple(
                seed[perm[i]] if signs[i] > 0 else -seed[perm[i]]
                for i in range(3)
            )
            out.add(canonical_ray(v))
    return out


def peres_rays() -> list[Ray]:
    """The 33 Peres rays: four orbit families, deduplicated and sorted.

    Families (counts after canonicalization): (0,0,1) gives 3, (0,1,1)
    gives 6, (0,1,sqrt2) gives 12, (1,1,sqrt2) gives 12.
    """
    families = [
        ((Z0, Z0, Z1), 3),
        ((Z0, Z1, Z1), 6),
        ((Z0, Z1, SQRT2), 12),
        ((Z1, Z1, SQRT2), 12),
    ]
    rays: set[Ray] = set()
    for seed, expected in families:
        orbit = _orbit(seed)
        assert len(orbit) == expected, (seed, len(orbit))
        rays |= orbit
    out = sorted(rays, key=Ray.key)
    assert len(out) == 33, len(out)
    return out


def cross(u: Ray, v: Ray) -> tuple[Zr2, Zr2, Zr2]:
    (u0, u1, u2), (v0, v1, v2) = u.coords, v.coords
    return (
        u1 * v2 + -(u2 * v1),
        u2 * v0 + -(u0 * v2),
        u0 * v1 + -(u1 * v0),
    )


def orthogonal_triads(rays: list[Ray], complete_pairs: bool = True) -> list[Triad]:
    """All mutually orthogonal triples formed from the given rays.

    Triples entirely inside the set come first.  With ``complete_pairs``
    (the default), every orthogonal pair lying in no such triple is closed
    into one by its cross product; the completing ray may fall outside the
    input set.  On the 33 Peres rays this yields 16 internal triads plus 24
    completions, the classic count of 40 triples over 57 rays in total.
    """
    ordered = sorted(set(rays), key=Ray.key)
    orth = {
        (i, j)
        for i, j in combinations(range(len(ordered)), 2)
        if dot(ordered[i], ordered[j]).is_zero()
    }
    triads = []
    used_pairs: set[tuple[int, int]] = set()
    for i, j, k in combinations(range(len(ordered)), 3):
        if (i, j) in orth and (i, k) in orth and (j, k) in orth:
            triads.append(Triad(rays=(ordered[i], ordered[j], ordered[k])))
            used_pairs |= {(i, j), (i, k), (j, k)}
    if complete_pairs:
        for i, j in sorted(orth - used_pairs):
            w = canonical_ray(cross(ordered[i], ordered[j]))
            members = tuple(sorted((ordered[i], ordered[j], w), key=Ray.key))
            triads.append(Triad(rays=members))
    triads.sort(key=lambda t: tuple(r.key() for r in t.rays))
    return triads


@dataclass(frozen=True)
class SearchStats:
    nodes: int
    feasible: bool
    solution_count: int | None = None


@dataclass(frozen=True)
class SearchResult:
    coloring: dict | None
    stats: SearchStats

    @property
    def feasible(self) -> bool:
        return self.stats.feasible


def ks_search(
    rays: list[Ray],
    triads: list[Triad],
    rule: str = "exactly-one-zero",
    count_solutions: bool = False,
) -> SearchResult:
    """Complete search for a 0/1 ray coloring with one designated value per triad.

    rule "exactly-one-zero": each triad carries exactly one 0 and two 1s;
    "exactly-one-one" is the complement.  Backtracking with forward
    checking, most-constrained ray first.  Returns a coloring when one
    exists (the whole count if asked), or infeasibility with node
    statistics.
    """
    if rule not in ("exactly-one-zero", "exactly-one-one"):
        raise ValueError(f"unknown rule {rule!r}")
    lone = 0 if rule == "exactly-one-zero" else 1
    pair = 1 - lone

    # Triads may reach outside the seed set (pair completions); color the union.
    universe = set(rays)
    for t in triads:
        universe.update(t.rays)
    ray_list = sorted(universe, key=Ray.key)
    triads_of: dict[Ray, list[int]] = {r: [] for r in ray_list}
    for ti, t in enumerate(triads):
        for r in t.rays:
            triads_of[r].append(ti)

    values: dict[Ray, int] = {}
    nodes = 0
    solutions: list[dict[Ray, int]] = []

    def triad_ok(ti: int) -> bool:
        got = [values[r] for r in triads[ti].rays if r in values]
        lones = got.count(lone)
        if lones > 1:
            return False
        if len(got) == 3 and lones != 1:
            return False
        return True

    def forced(ti: int) -> list[tuple[Ray, int]]:
        t = triads[ti]
        got = {r: values[r] for r in t.rays if r in values}
        free = [r for r in t.rays if r not in values]
        out = []
        if lone in got.values():
            out = [(r, pair) for r in free]
        elif len(free) == 1:
            out = [(free[0], lone)]
        return out

    def propagate(trail: list[Ray]) -> bool:
        queue = list(range(len(triads)))
        while queue:
            ti = queue.pop()
            if not triad_ok(ti):
                return False
            for r, v in forced(ti):
                if r in values:
                    if values[r] != v:
                        return False
                    continue
                values[r] = v
                trail.append(r)
                queue.extend(triads_of[r])
        return True

    def constrained_key(r: Ray):
        unresolved = sum(
            1
            for ti in triads_of[r]
            if any(q not in values for q in triads[ti].rays)
        )
        return (-unresolved, r.key())

    def recurse() -> bool:
        nonlocal nodes
        free = [r for r in ray_list if r not in values]
        if not free:
            solutions.append(dict(values))
            return not count_solutions
        r = min(free, key=constrained_key)
        for v in (lone, pair):
            nodes += 1
            trail: list[Ray] = [r]
            values[r] = v
            if propagate(trail) and recurse():
                return True
            for q in trail:
                del values[q]
        return False

    stopped_early = recurse()
    coloring = dict(solutions[0]) if solutions else None
    stats = SearchStats(
        nodes=nodes,
        feasible=bool(solutions),
        solution_count=None if stopped_early else len(solutions),
    )
    return SearchResult(coloring=coloring, stats=stats)


A_PATTERNS = ("011", "101", "110")


def build_ksp_support():
    """The possibilistic 40-triad by 33-ray compound system.

    A-settings are the 40 triads (labels "1".."40" in canonical triad
    order); their outcomes are the patterns 011/101/110, read as the
    triad's ray values in canonical ray order.  B-settings are the 33 rays
    (labels "1".."33"); outcomes are 0/1.  When Bob's ray belongs to
    Alice's triad the outcomes must agree on that ray, which cuts the
    context support from 6 pairs to 3.
    """
    from .systems import make_support

    rays = peres_rays()
    triads = orthogonal_triads(rays)
    a_alphabet = {str(i + 1): A_PATTERNS for i in range(len(triads))}
    b_alphabet = {str(j + 1): ("0", "1") for j in range(len(rays))}
    supports = {}
    for i, t in enumerate(triads):
        for j, r in enumerate(rays):
            if r in t:
                pos = t.index(r)
                supp = [(pat, pat[pos]) for pat in A_PATTERNS]
            else:
                supp = [(pat, b) for pat in A_PATTERNS for b in ("0", "1")]
            supports[(str(i + 1), str(j + 1))] = supp
    return make_support("ksp_support", a_alphabet, b_alphabet, supports)


def coloring_from_ns_function(f: dict[str, str], triads: list[Triad]) -> dict[Ray, int]:
    """Read a per-triad pattern choice as a per-ray 0/1 valuation.

    Raises if two triads sharing a ray disagree, which is exactly what the
    Kochen-Specker obstruction forbids.
    """
    values: dict[Ray, int] = {}
    for i, t in enumerate(triads):
        pattern = f[str(i + 1)]
        for pos, r in enumerate(t.rays):
            v = int(pattern[pos])
            if values.setdefault(r, v) != v:
                raise ValueError(f"inconsistent valuation at ray {r}")
    return values
