"""Stanley decompositions, their validation, and the exact sdepth solver.

The solver partitions the characteristic poset ``{a <= g : x^a in I}`` into
intervals ``[a, b]`` and scores an interval by ``rho(b) = #{k : b_k = g_k}``.
An interval ``[a, b]`` lifts to the Stanley spaces ``x^c K[Z]`` with
``Z = {k : b_k = g_k}`` and ``c`` ranging over ``[a, b]`` with ``c_k = a_k``
on ``Z``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import linprog
from scipy.sparse import coo_matrix

from .errors import BudgetExceededError
from .monomial import Monomial, MonomialIdeal, RingContext, format_monomial

DEFAULT_BUDGET = 4096


@dataclass(frozen=True)
class StanleyInterval:
    base: Monomial
    zset: frozenset[int]

    def contains(self, m: Monomial) -> bool:
        return all(
            e >= b if k in self.zset else e == b
            for k, (e, b) in enumerate(zip(m.exps, self.base.exps))
        )

    def to_json(self) -> dict:
        return {"base": list(self.base.exps), "zset": sorted(k + 1 for k in self.zset)}

    @classmethod
    def from_json(cls, data: dict) -> StanleyInterval:
        return cls(Monomial(tuple(data["base"])), frozenset(k - 1 for k in data["zset"]))

    def __str__(self) -> str:
        z = ",".join(f"x{k + 1}" for k in sorted(self.zset))
        return f"{format_monomial(self.base)}*K[{z}]"


@dataclass(frozen=True)
class StanleyDecomposition:
    ring: RingContext
    intervals: tuple[StanleyInterval, ...]

    @property
    def sdepth_of(self) -> int | None:
        """Minimum |Z| over the intervals (None for the empty decomposition)."""
        if not self.intervals:
            return None
        return min(len(iv.zset) for iv in self.intervals)

    def to_json(self) -> list[dict]:
        return [iv.to_json() for iv in self.intervals]

    def __len__(self) -> int:
        return len(self.intervals)


def intervals_meet(p: StanleyInterval, q: StanleyInterval) -> Monomial | None:
    """A monomial lying in both Stanley spaces, or None if they are disjoint."""
    common = []
    for k, (u, v) in enumerate(zip(p.base.exps, q.base.exps)):
        free_p, free_q = k in p.zset, k in q.zset
        if not free_p and not free_q:
            if u != v:
                return None
            common.append(u)
        elif not free_p:
            if u < v:
                return None
            common.append(u)
        elif not free_q:
            if v < u:
                return None
            common.append(v)
        else:
            common.append(max(u, v))
    return Monomial(tuple(common))


@dataclass(frozen=True)
class Validation:
    ok: bool
    reason: str = ""
    witness: Monomial | None = None

    def __bool__(self) -> bool:
        return self.ok


def validate_decomposition(ideal: MonomialIdeal, dec: StanleyDecomposition,
                           variables: Iterable[int] | None = None) -> Validation:
    """Check that ``dec`` is a Stanley decomposition of ``ideal ∩ K[variables]``."""
    ring = ideal.ring
    if dec.ring != ring:
        return Validation(False, "decomposition and ideal live in different rings")
    allowed = ring.all_vars if variables is None else frozenset(variables)
    ivs = dec.intervals
    for iv in ivs:
        if not iv.zset <= allowed or not iv.base.support <= allowed:
            return Validation(False, f"interval {iv} leaves the ring on {sorted(allowed)}", iv.base)
        if not ideal.contains(iv.base):
            return Validation(False, f"base of {iv} is not in the ideal", iv.base)
    for i in range(len(ivs)):
        for j in range(i + 1, len(ivs)):
            m = intervals_meet(ivs[i], ivs[j])
            if m is not None:
                return Validation(False, f"{ivs[i]} and {ivs[j]} overlap", m)
    bound = [1 + max((g.exps[k] for g in ideal.gens), default=0) for k in range(ring.n)]
    for iv in ivs:
        bound = [max(b, 1 + e) for b, e in zip(bound, iv.base.exps)]
    ranges = [range(b + 1) if k in allowed else range(1) for k, b in enumerate(bound)]
    for exps in product(*ranges):
        m = Monomial(exps)
        if ideal.contains(m) and not any(iv.contains(m) for iv in ivs):
            return Validation(False, f"{format_monomial(m)} is not covered", m)
    return Validation(True)


class CharacteristicPoset:
    """Exponent vectors ``a <= g`` with ``x^a`` in the ideal, in local coordinates.

    ``variables`` lists the ambient variable indices of the ring the poset
    lives in; element ``i`` is ``elements[i]`` in that order, sorted
    lexicographically.
    """

    def __init__(self, ideal: MonomialIdeal, variables: Sequence[int] | None = None,
                 budget: int = DEFAULT_BUDGET):
        ring = ideal.ring
        self.ideal = ideal
        self.variables = tuple(sorted(ring.all_vars if variables is None else variables))
        outside = ideal.support - set(self.variables)
        if outside:
            raise ValueError(f"ideal uses variables {sorted(outside)} outside the poset ring")
        if ideal.is_zero():
            raise ValueError("characteristic poset of the zero ideal is empty")
        lcm = ideal.lcm_exponents
        self.g = tuple(lcm[v] for v in self.variables)
        box = 1
        for e in self.g:
            box *= e + 1
        if box > budget:
            raise BudgetExceededError(f"poset box has {box} points, budget is {budget}")
        gens = [tuple(gen.exps[v] for v in self.variables) for gen in ideal.gens]
        self.elements = [
            a for a in product(*(range(e + 1) for e in self.g))
            if any(all(x <= y for x, y in zip(gen, a)) for gen in gens)
        ]
        self.rho = [sum(1 for x, e in zip(a, self.g) if x == e) for a in self.elements]
        count = len(self.elements)
        self.up = [0] * count
        self.down = [0] * count
        for i, a in enumerate(self.elements):
            for j in range(i, count):
                b = self.elements[j]
                if all(x <= y for x, y in zip(a, b)):
                    self.up[i] |= 1 << j
                    self.down[j] |= 1 << i

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def g_monomial(self) -> Monomial:
        exps = [0] * self.ideal.ring.n
        for v, e in zip(self.variables, self.g):
            exps[v] = e
        return Monomial(tuple(exps))

    def ambient(self, local: Sequence[int]) -> Monomial:
        exps = [0] * self.ideal.ring.n
        for v, e in zip(self.variables, local):
            exps[v] = e
        return Monomial(tuple(exps))

    def lift(self, bottom: int, top: int) -> list[StanleyInterval]:
        a, b = self.elements[bottom], self.elements[top]
        free_local = [k for k, (x, e) in enumerate(zip(b, self.g)) if x == e]
        zset = frozenset(self.variables[k] for k in free_local)
        ranges = [range(a[k], a[k] + 1) if k in free_local else range(a[k], b[k] + 1)
                  for k in range(len(a))]
        return [StanleyInterval(self.ambient(c), zset) for c in product(*ranges)]

    def to_decomposition(self, partition: list[tuple[int, int]]) -> StanleyDecomposition:
        intervals = []
        for bottom, top in partition:
            intervals.extend(self.lift(bottom, top))
        return StanleyDecomposition(self.ideal.ring, tuple(intervals))


def characteristic_poset(ideal: MonomialIdeal, variables: Sequence[int] | None = None,
                         budget: int = DEFAULT_BUDGET) -> CharacteristicPoset:
    return CharacteristicPoset(ideal, variables, budget)


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _has_saturating_matching(choices: list[list[int]]) -> bool:
    """Can every row pick a distinct column from its list (Kuhn's augmenting paths)?"""
    owner: dict[int, int] = {}

    def augment(row: int, seen: set[int]) -> bool:
        for col in choices[row]:
            if col in seen:
                continue
            seen.add(col)
            if col not in owner or augment(owner[col], seen):
                owner[col] = row
                return True
        return False

    return all(augment(row, set()) for row in range(len(choices)))


class _NodeLimit(Exception):
    pass


class _IntervalCover:
    """Exact cover of the elements with rho < k by intervals topped at rho == k."""

    def __init__(self, poset: CharacteristicPoset, k: int):
        count = len(poset)
        self.full = (1 << count) - 1
        good = exact = 0
        for j, r in enumerate(poset.rho):
            if r >= k:
                good |= 1 << j
            if r == k:
                exact |= 1 << j
        self.bad_all = self.full & ~good
        self.up, self.down = poset.up, poset.down
        self.blocks = [(a, b, self.up[a] & self.down[b])
                       for a in _bits(self.bad_all) for b in _bits(self.up[a] & exact)]
        self.containing: list[list[int]] = [[] for _ in range(count)]
        for idx, (_, _, block) in enumerate(self.blocks):
            for e in _bits(block & self.bad_all):
                self.containing[e].append(idx)
        # dead states stay dead under any branching order, so restarts share them
        self.failed: set[int] = set()

    def relaxation_feasible(self) -> bool:
        """LP relaxation of the cover; infeasibility certifies that no partition exists."""
        rows, cols = [], []
        for j, (_, _, block) in enumerate(self.blocks):
            for e in _bits(block):
                rows.append(e)
                cols.append(j)
        count = self.full.bit_length()
        if not self.blocks:
            return not self.bad_all
        matrix = coo_matrix((np.ones(len(rows)), (rows, cols)), shape=(count, len(self.blocks))).tocsr()
        bad = [e for e in range(count) if self.bad_all >> e & 1]
        rest = [e for e in range(count) if not self.bad_all >> e & 1]
        result = linprog(
            np.zeros(len(self.blocks)),
            A_eq=matrix[bad], b_eq=np.ones(len(bad)),
            A_ub=matrix[rest] if rest else None, b_ub=np.ones(len(rest)) if rest else None,
            bounds=(0, 1), method="highs",
        )
        return result.status != 2

    def solve(self, containing: list[list[int]], limit: int | None) -> list[tuple[int, int]] | None:
        blocks, down, bad_all, failed = self.blocks, self.down, self.bad_all, self.failed
        chosen: list[tuple[int, int]] = []
        nodes = 0

        def search(uncovered: int) -> bool:
            nonlocal nodes
            nodes += 1
            if limit is not None and nodes > limit:
                raise _NodeLimit
            bad = uncovered & bad_all
            if not bad:
                return True
            if uncovered in failed:
                return False
            branch: list[int] | None = None
            forced: list[list[int]] = []
            for e in _bits(bad):
                fits = [i for i in containing[e] if not blocks[i][2] & ~uncovered]
                if not fits:
                    failed.add(uncovered)
                    return False
                if branch is None or len(fits) < len(branch):
                    branch = fits
                if down[e] & bad == 1 << e:
                    forced.append([blocks[i][1] for i in fits if blocks[i][0] == e])
            if not _has_saturating_matching(forced):
                failed.add(uncovered)
                return False
            for i in branch:
                a, b, block = blocks[i]
                chosen.append((a, b))
                if search(uncovered & ~block):
                    return True
                chosen.pop()
            failed.add(uncovered)
            return False

        return chosen if search(self.full) else None


RESTARTS = 12
FIRST_LIMIT = 400


def find_partition(poset: CharacteristicPoset, k: int) -> list[tuple[int, int]] | None:
    """An interval partition whose tops all have rho >= k, or None.

    rho is monotone, so an element with rho >= k can always stand alone and
    only the elements with rho < k need placing.  Tops are restricted to
    rho == k: an interval with a higher top splits into intervals topped at
    rho == k plus singletons, by induction on the boolean lattice of its
    saturated coordinates.

    The remaining exact cover problem is searched Algorithm X style: branch
    on the element lying in the fewest admissible intervals, and prune when
    the minimal uncovered elements (forced bottoms) cannot get pairwise
    distinct tops.  Search times are heavy tailed, so a few node-limited runs
    with seeded shuffles of the interval order come before one unlimited run
    in lexicographic order; once the first run stalls, an infeasible LP
    relaxation ends the search early.  The seeds are fixed, so the witness is
    deterministic.  Leftover elements become singleton intervals.
    """
    cover = _IntervalCover(poset, k)
    chosen = None
    limit = FIRST_LIMIT
    for attempt in range(RESTARTS + 1):
        last = attempt == RESTARTS
        containing = cover.containing
        if attempt:
            rng = random.Random(attempt)
            containing = [rng.sample(c, len(c)) for c in containing]
        try:
            chosen = cover.solve(containing, None if last else limit)
            break
        except _NodeLimit:
            if attempt == 0 and not cover.relaxation_feasible():
                return None
            limit = limit * 3 // 2
    if chosen is None:
        return None
    covered = 0
    for a, b in chosen:
        covered |= poset.up[a] & poset.down[b]
    return sorted(chosen + [(j, j) for j in _bits(cover.full & ~covered)])


@dataclass(frozen=True)
class SdepthResult:
    value: int
    witness: StanleyDecomposition


def sdepth_exact(ideal: MonomialIdeal, budget: int = DEFAULT_BUDGET,
                 variables: Sequence[int] | None = None) -> SdepthResult:
    """Exact Stanley depth of ``ideal`` (as an ideal of K[variables]) with a witness."""
    if ideal.is_zero():
        raise ValueError("sdepth of the zero ideal is undefined here")
    poset = characteristic_poset(ideal, variables, budget)
    for k in range(len(poset.variables), -1, -1):
        partition = find_partition(poset, k)
        if partition is not None:
            return SdepthResult(k, poset.to_decomposition(partition))
    raise AssertionError("unreachable: k = 0 always admits the singleton partition")


def decomposition_with_target(ideal: MonomialIdeal, k: int, budget: int = DEFAULT_BUDGET,
                              variables: Sequence[int] | None = None) -> StanleyDecomposition | None:
    """A decomposition with sdepth_of >= k if one exists (early exit at the target)."""
    poset = characteristic_poset(ideal, variables, budget)
    partition = find_partition(poset, k)
    return None if partition is None else poset.to_decomposition(partition)
