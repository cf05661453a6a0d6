"""Exact monomial and monomial-ideal arithmetic.

Variables are indexed from 0 internally; ``x1`` is index 0.  A variable set
(``VarSet``) is a frozenset of such indices.  Ideals contracted to a sub-ring
keep the ambient coordinates and remember the sub-ring in ``MonomialIdeal.subring``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property, reduce
from itertools import product
from typing import Iterable, Iterator

from .errors import NotPrimaryError, RedundantDecompositionError, RingMismatchError

VarSet = frozenset  # frozenset[int] of 0-based variable indices

MAX_EXPONENT = 2**31 - 1


@dataclass(frozen=True)
class RingContext:
    n: int

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError(f"ring needs at least one variable, got n={self.n!r}")

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(f"x{i + 1}" for i in range(self.n))

    @property
    def all_vars(self) -> frozenset[int]:
        return frozenset(range(self.n))

    def one(self) -> Monomial:
        return Monomial((0,) * self.n)

    def var(self, i: int, e: int = 1) -> Monomial:
        exps = [0] * self.n
        exps[i] = e
        return Monomial(tuple(exps))

    def monomial(self, *exps: int) -> Monomial:
        m = Monomial(tuple(exps))
        self.check(m)
        return m

    def check(self, m: Monomial) -> None:
        if len(m.exps) != self.n:
            raise RingMismatchError(f"monomial {m.exps} does not live in a ring with {self.n} variables")


def _check_exp(e: int) -> int:
    if e < 0:
        raise ValueError(f"negative exponent {e}")
    if e > MAX_EXPONENT:
        raise OverflowError(f"exponent {e} exceeds {MAX_EXPONENT}")
    return e


@dataclass(frozen=True, order=True)
class Monomial:
    """A monomial given by its exponent vector; ordering is lexicographic."""

    exps: tuple[int, ...]

    def __post_init__(self):
        if not isinstance(self.exps, tuple):
            object.__setattr__(self, "exps", tuple(self.exps))
        for e in self.exps:
            _check_exp(e)

    @property
    def n(self) -> int:
        return len(self.exps)

    def _same_ring(self, other: Monomial) -> None:
        if len(self.exps) != len(other.exps):
            raise RingMismatchError(f"ring mismatch: {len(self.exps)} vs {len(other.exps)} variables")

    def divides(self, other: Monomial) -> bool:
        self._same_ring(other)
        return all(a <= b for a, b in zip(self.exps, other.exps))

    def __mul__(self, other: Monomial) -> Monomial:
        self._same_ring(other)
        return Monomial(tuple(a + b for a, b in zip(self.exps, other.exps)))

    def lcm(self, other: Monomial) -> Monomial:
        self._same_ring(other)
        return Monomial(tuple(max(a, b) for a, b in zip(self.exps, other.exps)))

    def gcd(self, other: Monomial) -> Monomial:
        self._same_ring(other)
        return Monomial(tuple(min(a, b) for a, b in zip(self.exps, other.exps)))

    def quotient(self, other: Monomial) -> Monomial:
        """``self / gcd(self, other)``: what is left of self after cancelling other."""
        self._same_ring(other)
        return Monomial(tuple(max(a - b, 0) for a, b in zip(self.exps, other.exps)))

    @property
    def support(self) -> frozenset[int]:
        return frozenset(i for i, e in enumerate(self.exps) if e)

    @property
    def degree(self) -> int:
        return sum(self.exps)

    def is_one(self) -> bool:
        return not any(self.exps)

    def squarefree_part(self) -> Monomial:
        return Monomial(tuple(1 if e else 0 for e in self.exps))

    def pure_power_var(self) -> int | None:
        """Index of the variable if this is ``x_i^e`` with e >= 1, else None."""
        supp = self.support
        return next(iter(supp)) if len(supp) == 1 else None

    def restrict_to(self, vars_: Iterable[int]) -> Monomial:
        keep = set(vars_)
        return Monomial(tuple(e if i in keep else 0 for i, e in enumerate(self.exps)))

    def __str__(self) -> str:
        return format_monomial(self)


def divides(u: Monomial, v: Monomial) -> bool:
    return u.divides(v)


def format_monomial(m: Monomial) -> str:
    parts = [f"x{i + 1}" if e == 1 else f"x{i + 1}^{e}" for i, e in enumerate(m.exps) if e]
    return "*".join(parts) if parts else "1"


_FACTOR = re.compile(r"^x(\d+)(?:\^(\d+))?$")


def parse_monomial(text: str, ring: RingContext) -> Monomial:
    """Parse ``x1^2*x3`` (or ``1``) into a monomial of ``ring``."""
    text = text.strip()
    exps = [0] * ring.n
    if text == "1":
        return Monomial(tuple(exps))
    if not text:
        raise ValueError("empty monomial")
    for factor in text.split("*"):
        match = _FACTOR.match(factor.strip())
        if not match:
            raise ValueError(f"cannot parse factor {factor.strip()!r}")
        idx = int(match.group(1)) - 1
        if not 0 <= idx < ring.n:
            raise ValueError(f"variable x{idx + 1} outside ring with {ring.n} variables")
        e = int(match.group(2)) if match.group(2) is not None else 1
        if e < 1:
            raise ValueError(f"exponent must be positive in {factor.strip()!r}")
        exps[idx] += e
    return Monomial(tuple(exps))


def _minimal_antichain(gens: Iterable[Monomial]) -> tuple[Monomial, ...]:
    # Ascending degree: a generator can only be divided by one of no larger degree.
    kept: list[Monomial] = []
    for g in sorted(set(gens), key=lambda m: (m.degree, m.exps)):
        if not any(k.divides(g) for k in kept):
            kept.append(g)
    return tuple(sorted(kept))


@dataclass(frozen=True)
class MonomialIdeal:
    """Monomial ideal stored by its minimal generators in lexicographic order.

    Build instances with :func:`minimalize` or :meth:`from_gens`; the raw
    constructor only checks that the generators are already canonical.
    """

    ring: RingContext
    gens: tuple[Monomial, ...]
    subring: frozenset[int] | None = field(default=None, compare=False)

    def __post_init__(self):
        for g in self.gens:
            self.ring.check(g)
        if _minimal_antichain(self.gens) != self.gens:
            raise ValueError("generators are not a canonical minimal antichain; use minimalize()")

    @classmethod
    def from_gens(cls, ring: RingContext, gens: Iterable[Monomial]) -> MonomialIdeal:
        return minimalize(ring, gens)

    @classmethod
    def parse(cls, ring: RingContext, text: str) -> MonomialIdeal:
        parts = [p for p in text.split(",") if p.strip()]
        return minimalize(ring, (parse_monomial(p, ring) for p in parts))

    @classmethod
    def zero(cls, ring: RingContext) -> MonomialIdeal:
        return cls(ring, ())

    @classmethod
    def unit(cls, ring: RingContext) -> MonomialIdeal:
        return cls(ring, (ring.one(),))

    def is_zero(self) -> bool:
        return not self.gens

    def is_unit(self) -> bool:
        return len(self.gens) == 1 and self.gens[0].is_one()

    def is_principal(self) -> bool:
        return len(self.gens) == 1

    @cached_property
    def support(self) -> frozenset[int]:
        return frozenset().union(*(g.support for g in self.gens))

    @cached_property
    def lcm_exponents(self) -> tuple[int, ...]:
        if not self.gens:
            return (0,) * self.ring.n
        return tuple(max(col) for col in zip(*(g.exps for g in self.gens)))

    def contains(self, m: Monomial) -> bool:
        self.ring.check(m)
        return any(g.divides(m) for g in self.gens)

    __contains__ = contains

    def contains_ideal(self, other: MonomialIdeal) -> bool:
        return all(self.contains(g) for g in other.gens)

    def pure_power(self, i: int) -> int | None:
        """Smallest e with x_i^e in the ideal, or None."""
        for g in self.gens:
            if g.is_one():
                return 0
            if g.pure_power_var() == i:
                return g.exps[i]
        return None

    def __str__(self) -> str:
        if not self.gens:
            return "(0)"
        return "(" + ", ".join(format_monomial(g) for g in self.gens) + ")"

    def monomials_in_box(self, bound: tuple[int, ...]) -> Iterator[Monomial]:
        for exps in product(*(range(b + 1) for b in bound)):
            m = Monomial(exps)
            if self.contains(m):
                yield m


def minimalize(ring: RingContext, gens: Iterable[Monomial]) -> MonomialIdeal:
    gens = list(gens)
    for g in gens:
        ring.check(g)
    return MonomialIdeal(ring, _minimal_antichain(gens))


def contains(ideal: MonomialIdeal, m: Monomial) -> bool:
    return ideal.contains(m)


def _same_ring(a: MonomialIdeal, b: MonomialIdeal) -> RingContext:
    if a.ring != b.ring:
        raise RingMismatchError(f"ideals live in different rings: n={a.ring.n} vs n={b.ring.n}")
    return a.ring


def intersect(a: MonomialIdeal, b: MonomialIdeal) -> MonomialIdeal:
    ring = _same_ring(a, b)
    return minimalize(ring, (g.lcm(h) for g in a.gens for h in b.gens))


def intersect_all(ideals: Iterable[MonomialIdeal]) -> MonomialIdeal:
    return reduce(intersect, ideals)


def ideal_sum(a: MonomialIdeal, b: MonomialIdeal) -> MonomialIdeal:
    ring = _same_ring(a, b)
    return minimalize(ring, a.gens + b.gens)


def colon(ideal: MonomialIdeal, w: Monomial) -> MonomialIdeal:
    ideal.ring.check(w)
    return minimalize(ideal.ring, (g.quotient(w) for g in ideal.gens))


def contract(ideal: MonomialIdeal, vars_: Iterable[int]) -> MonomialIdeal:
    """``I ∩ K[vars]``, kept in ambient coordinates and tagged with the sub-ring."""
    sub = frozenset(vars_)
    gens = tuple(g for g in ideal.gens if g.support <= sub)
    return MonomialIdeal(ideal.ring, gens, subring=sub)


def radical(ideal: MonomialIdeal) -> MonomialIdeal:
    return minimalize(ideal.ring, (g.squarefree_part() for g in ideal.gens))


def prime_ideal(ring: RingContext, vars_: Iterable[int]) -> MonomialIdeal:
    return minimalize(ring, (ring.var(i) for i in vars_))


@dataclass(frozen=True)
class PrimaryComponent:
    ideal: MonomialIdeal
    radical: frozenset[int]

    def __post_init__(self):
        if self.ideal.is_zero() or self.ideal.is_unit():
            raise NotPrimaryError("a primary component must be a proper non-zero ideal")
        if self.ideal.support != self.radical:
            raise NotPrimaryError(f"radical {sorted(self.radical)} is not the support of {self.ideal}")
        missing = [i for i in self.radical if self.ideal.pure_power(i) is None]
        if missing:
            raise NotPrimaryError(f"{self.ideal} has no pure power of x{missing[0] + 1}")

    @property
    def ring(self) -> RingContext:
        return self.ideal.ring


def is_primary(ideal: MonomialIdeal) -> bool:
    if ideal.is_zero() or ideal.is_unit():
        return False
    return all(ideal.pure_power(i) is not None for i in ideal.support)


def as_primary(ideal: MonomialIdeal) -> PrimaryComponent | None:
    """The ideal as a primary component, or None if it is not primary."""
    if ideal.is_zero():
        raise ValueError("the zero ideal has no primary structure here")
    if not is_primary(ideal):
        return None
    return PrimaryComponent(ideal, ideal.support)


def _drop_one_changes(ideals: list[MonomialIdeal]) -> list[bool]:
    full = intersect_all(ideals)
    if len(ideals) == 1:
        return [True]
    return [intersect_all(ideals[:i] + ideals[i + 1:]) != full for i in range(len(ideals))]


@dataclass(frozen=True)
class PrimaryDecomposition:
    ring: RingContext
    components: tuple[PrimaryComponent, ...]

    def __post_init__(self):
        if not self.components:
            raise ValueError("a primary decomposition needs at least one component")
        for c in self.components:
            if c.ring != self.ring:
                raise RingMismatchError("component lives in a different ring")

    @classmethod
    def from_ideals(cls, ring: RingContext, ideals: Iterable[MonomialIdeal],
                    check_irredundant: bool = True) -> PrimaryDecomposition:
        comps = []
        for q in ideals:
            c = as_primary(q)
            if c is None:
                raise NotPrimaryError(f"{q} is not primary")
            comps.append(c)
        dec = cls(ring, tuple(comps))
        if check_irredundant and not dec.is_irredundant():
            raise RedundantDecompositionError("decomposition is redundant")
        return dec

    @classmethod
    def parse(cls, ring: RingContext, *components: str, check_irredundant: bool = True):
        return cls.from_ideals(ring, (MonomialIdeal.parse(ring, c) for c in components),
                               check_irredundant=check_irredundant)

    @property
    def s(self) -> int:
        return len(self.components)

    @property
    def ideals(self) -> list[MonomialIdeal]:
        return [c.ideal for c in self.components]

    @property
    def radicals(self) -> list[frozenset[int]]:
        return [c.radical for c in self.components]

    @cached_property
    def ideal(self) -> MonomialIdeal:
        return intersect_all(self.ideals)

    def is_irredundant(self) -> bool:
        return all(_drop_one_changes(self.ideals))


def is_irredundant(dec: PrimaryDecomposition) -> bool:
    return dec.is_irredundant()


def make_irredundant(ideals: list[MonomialIdeal]) -> list[MonomialIdeal]:
    """Drop components, first index first, until every remaining one is needed."""
    ideals = list(ideals)
    changed = True
    while changed and len(ideals) > 1:
        changed = False
        for i, needed in enumerate(_drop_one_changes(ideals)):
            if not needed:
                del ideals[i]
                changed = True
                break
    return ideals

