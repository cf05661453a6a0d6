"""Size, associated primes, quotient dimensions and depth.

Two independent routes to ``depth S/I``: :func:`depth_oracle` reads it off the
multigraded Betti numbers as ``n - pd(S/I)``, :func:`depth_formula` applies
the closed-form case analysis for decompositions with at most three
components.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

from .errors import RedundantDecompositionError, UnsupportedError
from .homology import QQ, Field, betti_table
from .monomial import MonomialIdeal, PrimaryComponent, PrimaryDecomposition, RingContext


@dataclass(frozen=True)
class SizeResult:
    v: int
    h: int
    size: int


@dataclass(frozen=True)
class DepthResult:
    depth_quotient: int
    method: str
    flags: tuple[str, ...] = field(default=())

    @property
    def depth_ideal(self) -> int:
        return self.depth_quotient + 1


def assoc_primes(dec: PrimaryDecomposition) -> set[frozenset[int]]:
    return set(dec.radicals)


def size(dec: PrimaryDecomposition) -> SizeResult:
    return size_of_radicals(dec.radicals, dec.ring.n)


def size_of_radicals(radicals: Sequence[frozenset[int]], n: int) -> SizeResult:
    full = frozenset().union(*radicals)
    h = len(full)
    for t in range(1, len(radicals) + 1):
        if any(frozenset().union(*c) == full for c in combinations(radicals, t)):
            return SizeResult(v=t, h=h, size=t + (n - h) - 1)
    raise AssertionError("unreachable: the full family always covers its union")


def dim_quotient_of_sum(primes: Iterable[frozenset[int]], ring: RingContext | int) -> int:
    n = ring if isinstance(ring, int) else ring.n
    return n - len(frozenset().union(*primes))


def depth_primary_quotient(q: PrimaryComponent, ring: RingContext | None = None) -> int:
    return (ring or q.ring).n - len(q.radical)


def depth_oracle(ideal: MonomialIdeal, field: Field = QQ) -> DepthResult:
    table = betti_table(ideal, field)
    pd_quotient = table.projective_dimension + 1
    return DepthResult(ideal.ring.n - pd_quotient, "oracle")


def lyubeznik_bound_check(dec: PrimaryDecomposition, field: Field = QQ) -> bool:
    return depth_oracle(dec.ideal, field).depth_ideal >= 1 + size(dec).size


def contained_in_sum(q: MonomialIdeal, others: Sequence[MonomialIdeal]) -> bool:
    """Monomial test for ``q ⊂ sum(others)``: each generator lies in some summand."""
    return all(any(o.contains(g) for o in others) for g in q.gens)


def _case_with_contained(i: int, ideals, radicals, n: int) -> tuple[str, int]:
    """Depth of S/I once component ``i`` is known to lie in the sum of the other two."""
    j, k = [x for x in range(3) if x != i]
    p1, p2, p3 = radicals[i], radicals[j], radicals[k]
    in2, in3 = p1 <= p2, p1 <= p3
    if not in2 and not in3:
        return "case-a", 1 + min(n - len(p1 | p2), n - len(p1 | p3))
    if in2 and not in3:
        return "case-b", min(n - len(p2), 1 + n - len(p1 | p3))
    if in3 and not in2:
        return "case-b", min(n - len(p3), 1 + n - len(p1 | p2))
    return "case-c", min(n - len(p2), n - len(p3))


def depth_formula_parts(ideals: Sequence[MonomialIdeal], radicals: Sequence[frozenset[int]],
                        active: frozenset[int]) -> DepthResult:
    """Closed-form depth of S/I where S is the polynomial ring on ``active``.

    Components must be irredundant; free variables of ``active`` are split off
    and each adds one to the depth.
    """
    s = len(ideals)
    if s == 0 or s > 3:
        raise UnsupportedError(f"closed-form depth covers 1 to 3 components, got {s}; use the oracle")
    covered = frozenset().union(*radicals)
    free = len(active - covered)
    n = len(covered)

    if s == 1:
        return DepthResult(free, "primary")
    if any(len(p) == n for p in radicals):
        return DepthResult(free, "maximal-prime")
    if s == 2:
        return DepthResult(1 + free, "two-component")

    contained = [i for i in range(3)
                 if contained_in_sum(ideals[i], [ideals[x] for x in range(3) if x != i])]
    if not contained:
        v = size_of_radicals(radicals, n).v
        # reduced ring: size = v - 1
        return DepthResult(v - 1 + free, "case-d" if v == 2 else "case-e")

    results = [_case_with_contained(i, ideals, radicals, n) for i in contained]
    tag, value = results[0]
    flags: tuple[str, ...] = ()
    if len(results) > 1:
        flags = ("multiple-labelings",)
        if len({v for _, v in results}) > 1:
            flags += ("labeling-discrepancy:" + ",".join(f"{t}={v}" for t, v in results),)
    return DepthResult(value + free, tag, flags)


def depth_formula(dec: PrimaryDecomposition) -> DepthResult:
    if not dec.is_irredundant():
        raise RedundantDecompositionError("depth formula needs an irredundant decomposition")
    return depth_formula_parts(dec.ideals, dec.radicals, dec.ring.all_vars)
