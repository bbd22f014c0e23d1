"""Exact representation of bipartite compound systems of random variables.

A system assigns to every context (x, y) -- a pair of measurement settings,
one per side -- a joint probability mass function over the outcome pair
alphabet of that context.  All probabilities are `fractions.Fraction`;
nothing in this module touches floating point.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple

Outcome = str
Pair = tuple[Outcome, Outcome]

ZERO = Fraction(0)
ONE = Fraction(1)


class Context(NamedTuple):
    x: str
    y: str


def setting_key(label: str):
    """Sort key placing numeric labels in numeric order, others lexically."""
    try:
        return (0, int(label), label)
    except ValueError:
        return (1, 0, label)


def context_key(ctx: Context):
    return (setting_key(ctx.x), setting_key(ctx.y))


@dataclass(frozen=True)
class SystemSpec:
    """A compound system: contexts with exact joint pmfs.

    `a_alphabet` is keyed by the A-side setting, `b_alphabet` by the B-side
    setting; a context's outcome pairs range over the product of the two.
    """

    name: str
    a_alphabet: Mapping[str, tuple[Outcome, ...]]
    b_alphabet: Mapping[str, tuple[Outcome, ...]]
    contexts: tuple[Context, ...]
    pmfs: Mapping[Context, Mapping[Pair, Fraction]]

    @property
    def a_settings(self) -> tuple[str, ...]:
        return tuple(sorted(self.a_alphabet, key=setting_key))

    @property
    def b_settings(self) -> tuple[str, ...]:
        return tuple(sorted(self.b_alphabet, key=setting_key))

    def sorted_contexts(self) -> tuple[Context, ...]:
        return tuple(sorted(self.contexts, key=context_key))

    def pmf(self, ctx: Context) -> Mapping[Pair, Fraction]:
        if ctx not in self.pmfs:
            raise KeyError(f"unknown context {ctx}")
        return self.pmfs[ctx]

    def pairs(self, ctx: Context) -> list[Pair]:
        return [
            (a, b)
            for a in self.a_alphabet[ctx.x]
            for b in self.b_alphabet[ctx.y]
        ]

    def prob(self, ctx: Context, pair: Pair) -> Fraction:
        return self.pmfs[ctx].get(pair, ZERO)


@dataclass(frozen=True)
class SupportSpec:
    """Possibilistic counterpart of `SystemSpec`: per-context supports only."""

    name: str
    a_alphabet: Mapping[str, tuple[Outcome, ...]]
    b_alphabet: Mapping[str, tuple[Outcome, ...]]
    contexts: tuple[Context, ...]
    supports: Mapping[Context, frozenset[Pair]]

    @property
    def a_settings(self) -> tuple[str, ...]:
        return tuple(sorted(self.a_alphabet, key=setting_key))

    @property
    def b_settings(self) -> tuple[str, ...]:
        return tuple(sorted(self.b_alphabet, key=setting_key))

    def sorted_contexts(self) -> tuple[Context, ...]:
        return tuple(sorted(self.contexts, key=context_key))

    def support(self, ctx: Context) -> frozenset[Pair]:
        if ctx not in self.supports:
            raise KeyError(f"unknown context {ctx}")
        return self.supports[ctx]


@dataclass(frozen=True)
class Assignment:
    """One outcome pair chosen per context."""

    values: Mapping[Context, Pair]

    def contexts(self) -> tuple[Context, ...]:
        return tuple(sorted(self.values, key=context_key))


@dataclass(frozen=True)
class Realization:
    """A support-restricted assignment, flagged non-signaling or not."""

    assignment: Assignment
    ns: bool

    def value(self, ctx: Context) -> Pair:
        return self.assignment.values[ctx]


@dataclass(frozen=True)
class SignalingWitness:
    """Two contexts sharing a setting whose one-sided marginals differ."""

    side: str  # "A" or "B"
    setting: str
    context1: Context
    context2: Context
    marginal1: Mapping[Outcome, Fraction]
    marginal2: Mapping[Outcome, Fraction]

    def describe(self) -> str:
        return (
            f"side {self.side}, setting {self.setting}: marginal in "
            f"{tuple(self.context1)} differs from {tuple(self.context2)}"
        )


def make_system(
    name: str,
    a_alphabet: Mapping[str, Iterable[Outcome]],
    b_alphabet: Mapping[str, Iterable[Outcome]],
    pmfs: Mapping[tuple[str, str], Mapping[Pair, Fraction | int]],
) -> SystemSpec:
    """Build a SystemSpec from plain dicts, coercing probabilities to Fraction."""
    contexts = tuple(sorted((Context(*c) for c in pmfs), key=context_key))
    frozen: dict[Context, dict[Pair, Fraction]] = {}
    for ctx in contexts:
        frozen[ctx] = {
            pair: Fraction(p) for pair, p in pmfs[(ctx.x, ctx.y)].items()
        }
    return SystemSpec(
        name=name,
        a_alphabet={x: tuple(al) for x, al in a_alphabet.items()},
        b_alphabet={y: tuple(al) for y, al in b_alphabet.items()},
        contexts=contexts,
        pmfs=frozen,
    )


def make_support(
    name: str,
    a_alphabet: Mapping[str, Iterable[Outcome]],
    b_alphabet: Mapping[str, Iterable[Outcome]],
    supports: Mapping[tuple[str, str], Iterable[Pair]],
) -> SupportSpec:
    contexts = tuple(sorted((Context(*c) for c in supports), key=context_key))
    return SupportSpec(
        name=name,
        a_alphabet={x: tuple(al) for x, al in a_alphabet.items()},
        b_alphabet={y: tuple(al) for y, al in b_alphabet.items()},
        contexts=contexts,
        supports={
            ctx: frozenset(supports[(ctx.x, ctx.y)]) for ctx in contexts
        },
    )


def validate(system: SystemSpec) -> list[str]:
    """Return every invariant violation; an empty list means the system is valid."""
    violations: list[str] = []
    if not system.contexts:
        violations.append("no contexts")
    seen: set[Context] = set()
    for ctx in system.contexts:
        if ctx in seen:
            violations.append(f"duplicate context {tuple(ctx)}")
        seen.add(ctx)
        if ctx.x not in system.a_alphabet:
            violations.append(f"context {tuple(ctx)}: unknown A-setting {ctx.x!r}")
            continue
        if ctx.y not in system.b_alphabet:
            violations.append(f"context {tuple(ctx)}: unknown B-setting {ctx.y!r}")
            continue
        if ctx not in system.pmfs:
            violations.append(f"context {tuple(ctx)}: missing pmf")
            continue
        pmf = system.pmfs[ctx]
        allowed = set(system.pairs(ctx))
        total = ZERO
        for pair, p in pmf.items():
            if pair not in allowed:
                violations.append(
                    f"context {tuple(ctx)}: pair {pair} outside alphabet product"
                )
            if p < 0:
                violations.append(
                    f"context {tuple(ctx)}: negative probability {p} at {pair}"
                )
            total += p
        if total != 1:
            violations.append(f"context {tuple(ctx)}: sum {total} != 1")
    for ctx in system.pmfs:
        if ctx not in seen:
            violations.append(f"pmf for undeclared context {tuple(ctx)}")
    return violations


def marginal(
    system: SystemSpec, context: Context, side: str
) -> dict[Outcome, Fraction]:
    """Exact one-sided marginal of the context's joint pmf."""
    context = Context(*context)
    pmf = system.pmf(context)
    if side == "A":
        outcomes = system.a_alphabet[context.x]
        out = {o: ZERO for o in outcomes}
        for (a, _b), p in pmf.items():
            out[a] += p
    elif side == "B":
        outcomes = system.b_alphabet[context.y]
        out = {o: ZERO for o in outcomes}
        for (_a, b), p in pmf.items():
            out[b] += p
    else:
        raise ValueError(f"side must be 'A' or 'B', got {side!r}")
    return out


def check_nonsignaling(system: SystemSpec) -> SignalingWitness | None:
    """None if every shared setting has context-independent marginals.

    Otherwise the first witness in canonical order: A-side settings before
    B-side, settings and contexts in canonical label order.
    """
    ctxs = system.sorted_contexts()
    for side, setting_of in (("A", lambda c: c.x), ("B", lambda c: c.y)):
        settings = system.a_settings if side == "A" else system.b_settings
        for s in settings:
            sharing = [c for c in ctxs if setting_of(c) == s]
            if len(sharing) < 2:
                continue
            ref = marginal(system, sharing[0], side)
            for other in sharing[1:]:
                m = marginal(system, other, side)
                if m != ref:
                    return SignalingWitness(
                        side=side,
                        setting=s,
                        context1=sharing[0],
                        context2=other,
                        marginal1=ref,
                        marginal2=m,
                    )
    return None


def support_of(system: SystemSpec) -> SupportSpec:
    """Drop probabilities, keeping the pairs with probability > 0."""
    return SupportSpec(
        name=system.name,
        a_alphabet=dict(system.a_alphabet),
        b_alphabet=dict(system.b_alphabet),
        contexts=system.contexts,
        supports={
            ctx: frozenset(p for p, v in system.pmfs[ctx].items() if v > 0)
            for ctx in system.contexts
        },
    )


def is_ns_assignment(assignment: Assignment) -> bool:
    """True iff the assignment factors through per-side setting functions."""
    f: dict[str, Outcome] = {}
    g: dict[str, Outcome] = {}
    for ctx, (a, b) in assignment.values.items():
        if f.setdefault(ctx.x, a) != a:
            return False
        if g.setdefault(ctx.y, b) != b:
            return False
    return True


def factor_assignment(
    assignment: Assignment,
) -> tuple[dict[str, Outcome], dict[str, Outcome]] | None:
    """The per-side setting functions (f, g), or None if signaling."""
    f: dict[str, Outcome] = {}
    g: dict[str, Outcome] = {}
    for ctx, (a, b) in assignment.values.items():
        if f.setdefault(ctx.x, a) != a or g.setdefault(ctx.y, b) != b:
            return None
    return f, g


@dataclass(frozen=True)
class AssignmentCount:
    """Exact assignment count, with a factored base^exponent display when uniform."""

    value: int
    base: int | None = None
    exponent: int | None = None

    def __str__(self) -> str:
        if self.base is not None and self.exponent is not None and self.exponent > 1:
            return f"{self.base}^{self.exponent}"
        return str(self.value)


def count_assignments(
    system: SystemSpec | SupportSpec, mode: str = "alphabet"
) -> AssignmentCount:
    """Number of assignments: product over contexts of per-context choice counts."""
    sizes: list[int] = []
    for ctx in system.sorted_contexts():
        if mode == "alphabet":
            sizes.append(
                len(system.a_alphabet[ctx.x]) * len(system.b_alphabet[ctx.y])
            )
        elif mode == "support":
            if isinstance(system, SupportSpec):
                sizes.append(len(system.supports[ctx]))
            else:
                sizes.append(sum(1 for p in system.pmfs[ctx].values() if p > 0))
        else:
            raise ValueError(f"mode must be 'alphabet' or 'support', got {mode!r}")
    value = 1
    for s in sizes:
        value *= s
    if sizes and len(set(sizes)) == 1:
        return AssignmentCount(value=value, base=sizes[0], exponent=len(sizes))
    return AssignmentCount(value=value)


def _check_same_shape(a: SystemSpec, b: SystemSpec) -> None:
    if (
        set(a.contexts) != set(b.contexts)
        or dict(a.a_alphabet) != dict(b.a_alphabet)
        or dict(a.b_alphabet) != dict(b.b_alphabet)
    ):
        raise ValueError(f"shape mismatch between {a.name!r} and {b.name!r}")


def mix(
    components: list[tuple[SystemSpec, Fraction]], name: str = "mixture"
) -> SystemSpec:
    """Context-wise convex combination of systems sharing one shape."""
    if not components:
        raise ValueError("empty mixture")
    base = components[0][0]
    total = ZERO
    for sys_i, w in components:
        _check_same_shape(base, sys_i)
        if w < 0:
            raise ValueError(f"negative weight {w}")
        total += w
    if total != 1:
        raise ValueError(f"weights sum to {total}, not 1")
    pmfs: dict[Context, dict[Pair, Fraction]] = {}
    for ctx in base.contexts:
        acc: dict[Pair, Fraction] = {}
        for sys_i, w in components:
            for pair, p in sys_i.pmfs[ctx].items():
                if w * p != 0:
                    acc[pair] = acc.get(pair, ZERO) + w * p
        pmfs[ctx] = acc
    return SystemSpec(
        name=name,
        a_alphabet=dict(base.a_alphabet),
        b_alphabet=dict(base.b_alphabet),
        contexts=base.contexts,
        pmfs=pmfs,
    )


def mix_context_dependent(
    rule: Mapping[Context, list[tuple[SystemSpec, Fraction]]],
    name: str = "context-dependent mixture",
) -> SystemSpec:
    """Mixture whose component weights may differ per context.

    Each context's pmf is the convex combination prescribed for that
    context; the result need not be non-signaling even when every
    component is.
    """
    if not rule:
        raise ValueError("empty rule")
    contexts = tuple(sorted((Context(*c) for c in rule), key=context_key))
    base = rule[contexts[0]][0][0]
    pmfs: dict[Context, dict[Pair, Fraction]] = {}
    for ctx in contexts:
        total = ZERO
        acc: dict[Pair, Fraction] = {}
        for sys_i, w in rule[ctx]:
            _check_same_shape(base, sys_i)
            if w < 0:
                raise ValueError(f"negative weight {w} at context {tuple(ctx)}")
            total += w
            for pair, p in sys_i.pmfs[ctx].items():
                if w * p != 0:
                    acc[pair] = acc.get(pair, ZERO) + w * p
        if total != 1:
            raise ValueError(
                f"context {tuple(ctx)}: weights sum to {total}, not 1"
            )
        pmfs[ctx] = acc
    return SystemSpec(
        name=name,
        a_alphabet=dict(base.a_alphabet),
        b_alphabet=dict(base.b_alphabet),
        contexts=contexts,
        pmfs=pmfs,
    )


def expectation_product(
    system: SystemSpec,
    context: Context,
    coding: Mapping[Outcome, Fraction] | None = None,
) -> Fraction:
    """Expectation of code(a)*code(b) in one context.

    Default coding maps each outcome label to its integer reading
    (so "0"/"1" outcomes give the usual 0/1 product expectation).
    """
    context = Context(*context)
    pmf = system.pmf(context)
    out = ZERO
    for (a, b), p in pmf.items():
        if coding is None:
            ca, cb = Fraction(int(a)), Fraction(int(b))
        else:
            if a not in coding or b not in coding:
                missing = a if a not in coding else b
                raise KeyError(f"no code for outcome {missing!r}")
            ca, cb = coding[a], coding[b]
        out += p * ca * cb
    return out


def realization_system(
    realization: Realization | Assignment,
    shape: SystemSpec | SupportSpec,
    name: str = "realization",
) -> SystemSpec:
    """View a realization as a deterministic system of the given shape."""
    assignment = (
        realization.assignment
        if isinstance(realization, Realization)
        else realization
    )
    pmfs = {
        Context(*ctx): {pair: ONE} for ctx, pair in assignment.values.items()
    }
    return SystemSpec(
        name=name,
        a_alphabet=dict(shape.a_alphabet),
        b_alphabet=dict(shape.b_alphabet),
        contexts=tuple(sorted(pmfs, key=context_key)),
        pmfs=pmfs,
    )
