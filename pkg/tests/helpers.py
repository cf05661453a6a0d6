"""Independent oracles and instance samplers shared by the test modules.

Nothing here calls the solver or the homology code; membership is decided by
plain divisibility checks on exponent tuples.
"""

from __future__ import annotations

import random
from functools import lru_cache
from itertools import product

from mstanley.instances import RandomParams, SamplingExhaustedError, random_instance
from mstanley.invariants import depth_formula
from mstanley.splitting import split_pieces


def member(gens, exps) -> bool:
    return any(all(g <= e for g, e in zip(gen, exps)) for gen in gens)


def box(n, bound):
    return product(range(bound + 1), repeat=n)


def all_antichains_ideals(n, top):
    """Every non-zero proper monomial ideal of K[x1..xn] with generators in {0..top}^n."""
    points = [p for p in product(range(top + 1), repeat=n) if any(p)]
    seen = set()
    # an ideal is determined by its set of lattice points in the box
    for mask in _upsets(points):
        gens = tuple(sorted(p for p in mask if not any(q != p and all(a <= b for a, b in zip(q, p)) for q in mask)))
        if gens and gens not in seen:
            seen.add(gens)
            yield gens


def _upsets(points):
    """All non-empty up-closed subsets of ``points`` (within the box)."""
    points = sorted(points, key=sum)
    index = {p: i for i, p in enumerate(points)}
    above = [[index[q] for q in points if q != p and all(a <= b for a, b in zip(p, q))] for p in points]
    below = [[index[q] for q in points if q != p and all(a <= b for a, b in zip(q, p))] for p in points]
    results = []

    def rec(i, chosen):
        if i == len(points):
            if chosen:
                results.append(frozenset(points[j] for j in chosen))
            return
        # decide points in order of increasing degree: a point may be left out
        # only if nothing below it was taken
        if all(j not in chosen for j in below[i]):
            rec(i + 1, chosen)
        rec(i + 1, chosen | {i})

    rec(0, frozenset())
    return [r for r in results if all(all(points[j] in r for j in above[index[p]]) for p in r)]


def naive_sdepth(gens, n) -> int:
    """Max over all interval partitions of the characteristic poset of min rho(top).

    Exhaustive: the largest uncovered element is placed in every interval that
    contains it; no pruning, no restriction on tops.
    """
    g = tuple(max((gen[k] for gen in gens), default=0) for k in range(n))
    elems = [a for a in product(*(range(e + 1) for e in g)) if member(gens, a)]
    idx = {a: i for i, a in enumerate(elems)}
    rho = [sum(1 for x, e in zip(a, g) if x == e) for a in elems]

    def leq(a, b):
        return all(x <= y for x, y in zip(a, b))

    intervals_with = [[] for _ in elems]
    for a in elems:
        for b in elems:
            if leq(a, b):
                members = frozenset(idx[c] for c in elems if leq(a, c) and leq(c, b))
                for m in members:
                    intervals_with[m].append((members, rho[idx[b]]))

    @lru_cache(maxsize=None)
    def best(uncovered: frozenset) -> int:
        if not uncovered:
            return n + 1
        e = max(uncovered)
        out = -1
        for members, score in intervals_with[e]:
            if members <= uncovered:
                out = max(out, min(score, best(uncovered - members)))
        return out

    return best(frozenset(range(len(elems))))


def structured_instance(seed, shape):
    """Three-component instance whose radicals follow ``shape`` in {'a', 'b', 'c', 'free'}."""
    rng = random.Random(f"{shape}:{seed}")
    n = rng.randint(3, 5)
    variables = list(range(n))
    while True:
        p1 = set(rng.sample(variables, rng.randint(1, n - 1)))
        if shape == "c":
            p2 = p1 | set(rng.sample(variables, rng.randint(0, n - 1)))
            p3 = p1 | set(rng.sample(variables, rng.randint(0, n - 1)))
        elif shape == "b":
            p2 = p1 | set(rng.sample(variables, rng.randint(0, n - 1)))
            p3 = set(rng.sample(variables, rng.randint(1, n - 1)))
        else:
            p2 = set(rng.sample(variables, rng.randint(1, n - 1)))
            p3 = set(rng.sample(variables, rng.randint(1, n - 1)))
        if p1 | p2 | p3 == set(variables) and len(p2) < n and len(p3) < n:
            break
    params = RandomParams(seed=f"{shape}:{seed}", n=n, s=3,
                          radicals=(tuple(sorted(p1)), tuple(sorted(p2)), tuple(sorted(p3))), max_attempts=50)
    try:
        return random_instance(params)
    except SamplingExhaustedError:
        return None


def instances_for_case(case, count):
    """``count`` instances whose closed-form depth uses ``case``."""
    out, seed = [], 0
    shape = {"case-a": "a", "case-b": "b", "case-c": "c"}.get(case, "a")
    while len(out) < count:
        dec = structured_instance(seed, shape)
        seed += 1
        if dec is not None and depth_formula(dec).method == case:
            out.append(dec)
    return out


def split_instances(count):
    out, seed = [], 0
    while len(out) < count:
        dec = structured_instance(seed, "abc"[seed % 3])
        seed += 1
        if dec is not None and split_pieces(dec) is not None:
            out.append(dec)
    return out


def mixed_corpus(count, prefix="corpus"):
    """Random irredundant instances with s in {2, 3}, n in 2..5, exponents <= 2."""
    out = []
    for i in range(count):
        s = 2 + i % 2
        n = 2 + (i // 2) % 4 if s == 2 else 3 + (i // 2) % 3
        out.append(random_instance(RandomParams(seed=f"{prefix}:{i}", n=n, s=s, max_exp=2)))
    return out
