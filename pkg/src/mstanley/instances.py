"""Instance text format and the seeded random instance generator.

Format::

    # comment
    ring 4
    component: x1^2, x1*x2, x2^2
    component: x1^2, x3
    component: x2, x4^2
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import (
    InstanceSyntaxError,
    MStanleyError,
    NotPrimaryError,
    RedundantDecompositionError,
)
from .monomial import (
    Monomial,
    MonomialIdeal,
    PrimaryDecomposition,
    RingContext,
    as_primary,
    format_monomial,
    minimalize,
    parse_monomial,
)


@dataclass(frozen=True)
class InstanceSpec:
    n: int
    components: tuple[tuple[tuple[int, ...], ...], ...]

    @classmethod
    def from_decomposition(cls, dec: PrimaryDecomposition) -> InstanceSpec:
        return cls(dec.ring.n, tuple(tuple(g.exps for g in c.ideal.gens) for c in dec.components))

    def to_decomposition(self, check_irredundant: bool = True) -> PrimaryDecomposition:
        ring = RingContext(self.n)
        ideals = [minimalize(ring, (Monomial(e) for e in comp)) for comp in self.components]
        return PrimaryDecomposition.from_ideals(ring, ideals, check_irredundant=check_irredundant)

    def to_json(self) -> dict:
        return {"n": self.n, "components": [[list(e) for e in comp] for comp in self.components]}


def parse_instance(text: str, allow_redundant: bool = False) -> InstanceSpec:
    """Parse instance text; components are canonicalized and validated."""
    ring: RingContext | None = None
    ideals: list[tuple[int, MonomialIdeal]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("ring"):
            if ring is not None:
                raise InstanceSyntaxError("duplicate ring line", lineno)
            try:
                ring = RingContext(int(line[4:].strip()))
            except ValueError as exc:
                raise InstanceSyntaxError(f"bad ring line: {exc}", lineno) from None
            continue
        if line.startswith("component:"):
            if ring is None:
                raise InstanceSyntaxError("component before ring line", lineno)
            body = line[len("component:"):]
            try:
                gens = [parse_monomial(p, ring) for p in body.split(",")]
            except ValueError as exc:
                raise InstanceSyntaxError(str(exc), lineno) from None
            q = minimalize(ring, gens)
            if q.is_unit() or as_primary(q) is None:
                raise InstanceSyntaxError(f"component {q} is not a proper primary ideal", lineno)
            ideals.append((lineno, q))
            continue
        raise InstanceSyntaxError(f"unrecognized line {line!r}", lineno)
    if ring is None:
        raise InstanceSyntaxError("missing 'ring <n>' line")
    if not ideals:
        raise InstanceSyntaxError("no components")
    try:
        dec = PrimaryDecomposition.from_ideals(ring, [q for _, q in ideals],
                                               check_irredundant=not allow_redundant)
    except (NotPrimaryError, RedundantDecompositionError) as exc:
        raise InstanceSyntaxError(str(exc)) from None
    return InstanceSpec.from_decomposition(dec)


def format_instance(spec: InstanceSpec) -> str:
    lines = [f"ring {spec.n}"]
    for comp in spec.components:
        # descending lex reads the way instances are usually written by hand
        lines.append("component: " + ", ".join(format_monomial(Monomial(e)) for e in sorted(comp, reverse=True)))
    return "\n".join(lines) + "\n"


def load_instance(path, allow_redundant: bool = False) -> PrimaryDecomposition:
    with open(path, encoding="utf-8") as fh:
        spec = parse_instance(fh.read(), allow_redundant=allow_redundant)
    return spec.to_decomposition(check_irredundant=not allow_redundant)


@dataclass(frozen=True)
class RandomParams:
    seed: int | str
    n: int
    s: int = 3
    max_exp: int = 2
    max_gens: int = 5
    require_cover: bool = True
    allow_maximal: bool = False
    max_attempts: int = 10_000
    radicals: tuple[tuple[int, ...], ...] | None = None  # fixed supports (0-based), one per component

    def __post_init__(self):
        if self.n < 1 or self.s < 1 or self.max_exp < 1 or self.max_gens < 1:
            raise ValueError("random parameters must be positive")
        if not self.allow_maximal and self.n < 2:
            raise ValueError("proper radicals need n >= 2")
        if self.require_cover and not self.allow_maximal and self.s == 1:
            raise ValueError("a single proper component cannot cover every variable")
        if self.radicals is not None:
            if len(self.radicals) != self.s:
                raise ValueError("need one radical per component")
            if any(not r or not set(r) <= set(range(self.n)) for r in self.radicals):
                raise ValueError("radicals must be non-empty subsets of the variables")


class SamplingExhaustedError(MStanleyError, RuntimeError):
    pass


def _draw_component(rng: random.Random, ring: RingContext, p: RandomParams,
                    support: list[int] | None = None) -> MonomialIdeal:
    if support is None:
        top = p.n if p.allow_maximal else p.n - 1
        support = sorted(rng.sample(range(p.n), rng.randint(1, top)))
    gens = [ring.var(i, rng.randint(1, p.max_exp)) for i in support]
    for _ in range(rng.randint(0, max(0, p.max_gens - len(support)))):
        exps = [0] * p.n
        for i in support:
            exps[i] = rng.randint(0, p.max_exp)
        if any(exps):
            gens.append(Monomial(tuple(exps)))
    return minimalize(ring, gens)


def random_instance(p: RandomParams) -> PrimaryDecomposition:
    """Irredundant decomposition with ``p.s`` primary components, by rejection sampling."""
    rng = random.Random(p.seed)
    ring = RingContext(p.n)
    for _ in range(p.max_attempts):
        if p.radicals is None:
            ideals = [_draw_component(rng, ring, p) for _ in range(p.s)]
        else:
            ideals = [_draw_component(rng, ring, p, sorted(r)) for r in p.radicals]
        if p.require_cover and frozenset().union(*(q.support for q in ideals)) != ring.all_vars:
            continue
        dec = PrimaryDecomposition.from_ideals(ring, ideals, check_irredundant=False)
        if dec.is_irredundant():
            return dec
    raise SamplingExhaustedError(f"no irredundant instance after {p.max_attempts} draws (seed {p.seed!r})")
