"""Constructive Stanley decompositions for two and three primary components.

Three components ``Q1 ⊂ Q2 + Q3`` with ``P1 + P2`` and ``P1 + P3`` both
proper are split as

    I = Q1 ∩ Q2 ∩ (Q3 ∩ K[P1])S  ⊕  ⊕_w  w · ((I : w) ∩ K[S̄])

where ``w`` runs over the monomials of ``K[P1 ∩ P3]`` outside ``Q3`` and
``S̄`` drops the variables of ``P1 ∩ P3``.  Both pieces live in fewer
variables and are decomposed recursively.  Every other instance is handed to
the exact solver with the target ``depth I``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Sequence

from .errors import InvariantViolationError, UnsupportedError
from .invariants import contained_in_sum, depth_formula, depth_formula_parts
from .monomial import (
    Monomial,
    MonomialIdeal,
    PrimaryDecomposition,
    RingContext,
    as_primary,
    colon,
    contract,
    intersect_all,
    make_irredundant,
)
from .stanley import (
    DEFAULT_BUDGET,
    StanleyDecomposition,
    StanleyInterval,
    decomposition_with_target,
    validate_decomposition,
)


@dataclass(frozen=True)
class SplitFrame:
    labeling: tuple[int, int, int]
    supp_p1: frozenset[int]
    overlap: frozenset[int]
    s_prime: frozenset[int]
    s_bar: frozenset[int]
    w_list: tuple[Monomial, ...]


def _monomials_outside(q: MonomialIdeal, overlap: frozenset[int]) -> tuple[Monomial, ...]:
    ring = q.ring
    order = sorted(overlap)
    ranges = [range(q.pure_power(v)) for v in order]
    out = []
    for exps in product(*ranges):
        w = [0] * ring.n
        for v, e in zip(order, exps):
            w[v] = e
        m = Monomial(tuple(w))
        if not q.contains(m):
            out.append(m)
    return tuple(sorted(out))


def find_split_frame(ideals: Sequence[MonomialIdeal], radicals: Sequence[frozenset[int]],
                     active: frozenset[int]) -> SplitFrame | None:
    """The splitting data for a 3-component instance, or None if it is a leaf case.

    ``active`` must be the reduced ring (the union of the radicals).
    """
    if len(ideals) != 3 or any(p == active for p in radicals):
        return None
    for i in range(3):
        j, k = [x for x in range(3) if x != i]
        if not contained_in_sum(ideals[i], [ideals[j], ideals[k]]):
            continue
        p1, p2, p3 = radicals[i], radicals[j], radicals[k]
        if p1 | p2 == active or p1 | p3 == active:
            return None
        overlap = p1 & p3
        if not overlap:
            raise InvariantViolationError("empty overlap contradicts irredundancy")
        return SplitFrame(
            labeling=(i, j, k),
            supp_p1=p1,
            overlap=overlap,
            s_prime=p1,
            s_bar=active - overlap,
            w_list=_monomials_outside(ideals[k], overlap),
        )
    return None


@dataclass(frozen=True)
class SplitPieces:
    frame: SplitFrame
    reduced_ideal: MonomialIdeal          # I' = Q1 ∩ Q2 ∩ (Q3 ∩ S')S
    reduced_components: tuple[MonomialIdeal, ...]
    colon_pieces: tuple[tuple[Monomial, tuple[MonomialIdeal, ...]], ...]  # (w, L_1..L_3)

    def colon_ideal(self, w_index: int) -> MonomialIdeal:
        return intersect_all(self.colon_pieces[w_index][1])


def split_pieces_parts(ideals: Sequence[MonomialIdeal], frame: SplitFrame) -> SplitPieces:
    i, j, k = frame.labeling
    q1, q2, q3 = ideals[i], ideals[j], ideals[k]
    primed = (q1, q2, contract(q3, frame.s_prime))
    pieces = []
    for w in frame.w_list:
        pieces.append((w, tuple(contract(colon(q, w), frame.s_bar) for q in (q1, q2, q3))))
    return SplitPieces(frame, intersect_all(primed), primed, tuple(pieces))


def split_pieces(dec: PrimaryDecomposition) -> SplitPieces | None:
    """The splitting of ``dec`` on its full ring, or None if it is not a split case."""
    active = frozenset().union(*dec.radicals)
    frame = find_split_frame(dec.ideals, dec.radicals, active)
    if frame is None:
        return None
    frame = SplitFrame(frame.labeling, frame.supp_p1, frame.overlap, frame.s_prime,
                       dec.ring.all_vars - frame.overlap, frame.w_list)
    return split_pieces_parts(dec.ideals, frame)


@dataclass
class TraceNode:
    kind: str
    variables: int
    parent: int | None
    detail: str = ""


@dataclass
class Decomposer:
    """Recursive decomposer; ``trace`` records one node per call for inspection."""

    budget: int = DEFAULT_BUDGET
    method: str = "split"
    trace: list[TraceNode] = field(default_factory=list)

    def decompose(self, ideals: Sequence[MonomialIdeal], active: frozenset[int],
                  parent: int | None = None) -> list[StanleyInterval]:
        ring = ideals[0].ring
        if any(q.is_zero() for q in ideals):
            self.trace.append(TraceNode("zero", len(active), parent))
            return []
        ideals = [q for q in ideals if not q.is_unit()]
        if not ideals:
            self.trace.append(TraceNode("unit", len(active), parent))
            return [StanleyInterval(ring.one(), active)]
        ideals = [MonomialIdeal(ring, q.gens) for q in make_irredundant(ideals)]
        radicals = []
        for q in ideals:
            comp = as_primary(q)
            if comp is None or not comp.radical <= active:
                raise InvariantViolationError(f"sub-instance component {q} is not primary on the ring")
            radicals.append(comp.radical)
        reduced = frozenset().union(*radicals)
        free = active - reduced
        node = len(self.trace)
        frame = find_split_frame(ideals, radicals, reduced) if self.method == "split" else None
        if frame is None:
            self.trace.append(TraceNode("leaf", len(reduced), parent, f"s={len(ideals)}"))
            intervals = self._leaf(ideals, radicals, reduced)
        else:
            self.trace.append(TraceNode("split", len(reduced), parent, f"w={len(frame.w_list)}"))
            pieces = split_pieces_parts(ideals, frame)
            intervals = self.decompose(list(pieces.reduced_components), reduced, node)
            for w, colon_components in pieces.colon_pieces:
                for iv in self.decompose(list(colon_components), frame.s_bar, node):
                    intervals.append(StanleyInterval(iv.base * w, iv.zset))
        if free:
            intervals = [StanleyInterval(iv.base, iv.zset | free) for iv in intervals]
        return intervals

    def _leaf(self, ideals, radicals, reduced) -> list[StanleyInterval]:
        target = depth_formula_parts(ideals, radicals, reduced).depth_ideal
        ideal = intersect_all(ideals)
        dec = decomposition_with_target(ideal, target, self.budget, sorted(reduced))
        if dec is None:
            raise InvariantViolationError(
                f"no Stanley decomposition of {ideal} with sdepth >= depth = {target}")
        return list(dec.intervals)


def _checked(dec: PrimaryDecomposition, intervals: list[StanleyInterval]) -> StanleyDecomposition:
    out = StanleyDecomposition(dec.ring, tuple(intervals))
    check = validate_decomposition(dec.ideal, out)
    if not check:
        raise InvariantViolationError(f"constructed decomposition is invalid: {check.reason}")
    return out


def decompose(dec: PrimaryDecomposition, method: str = "split", budget: int = DEFAULT_BUDGET,
              decomposer: Decomposer | None = None) -> StanleyDecomposition:
    if method not in ("split", "exact"):
        raise UnsupportedError(f"unknown method {method!r}")
    if dec.s > 3:
        raise UnsupportedError("constructive decompositions cover at most three components")
    worker = decomposer or Decomposer(budget=budget, method=method)
    return _checked(dec, worker.decompose(dec.ideals, dec.ring.all_vars))


def decompose_two_primary(dec: PrimaryDecomposition, budget: int = DEFAULT_BUDGET) -> StanleyDecomposition:
    if dec.s != 2:
        raise UnsupportedError(f"expected two components, got {dec.s}")
    depth_formula(dec)  # rejects redundant input
    return decompose(dec, "exact", budget)


def split_theorem3(dec: PrimaryDecomposition, budget: int = DEFAULT_BUDGET,
                   decomposer: Decomposer | None = None) -> StanleyDecomposition:
    if dec.s != 3:
        raise UnsupportedError(f"expected three components, got {dec.s}")
    depth_formula(dec)
    return decompose(dec, "split", budget, decomposer)


def box_count(ideal: MonomialIdeal, bound: Sequence[int]) -> int:
    return sum(1 for _ in ideal.monomials_in_box(tuple(bound)))


def colon_piece_count(ring: RingContext, w: Monomial, piece: MonomialIdeal, s_bar: frozenset[int],
                      bound: Sequence[int]) -> int:
    """``|w · (piece ∩ K[S̄]) ∩ box|`` by direct enumeration."""
    ranges = [range(b + 1) if k in s_bar else range(w.exps[k], w.exps[k] + 1)
              for k, b in enumerate(bound)]
    total = 0
    for exps in product(*ranges):
        m = Monomial(exps)
        if w.divides(m) and piece.contains(m.quotient(w)):
            total += 1
    return total
