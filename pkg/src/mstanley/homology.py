"""Multigraded Betti numbers from upper Koszul simplicial complexes.

For a multidegree ``a`` the complex has one face per variable subset ``F`` of
``supp(a)`` with ``x^a / x^F`` in the ideal; ``beta_{i,a}(I)`` is the dimension
of its reduced homology in degree ``i - 1``.  Ranks are exact, over the
rationals (fraction-free integer elimination) or over a prime field.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Mapping

from .errors import UnsupportedError
from .monomial import Monomial, MonomialIdeal


@dataclass(frozen=True)
class Field:
    characteristic: int = 0

    @classmethod
    def parse(cls, text: str | None) -> Field:
        """``"q"`` for the rationals, ``"fp:<p>"`` for a prime field."""
        if text is None or text.lower() in ("q", "qq", "0"):
            return cls(0)
        if text.lower().startswith("fp:"):
            try:
                p = int(text[3:])
            except ValueError:
                raise UnsupportedError(f"bad field characteristic in {text!r}") from None
            return cls.prime(p)
        raise UnsupportedError(f"unknown field {text!r}; use 'q' or 'fp:<p>'")

    @classmethod
    def prime(cls, p: int) -> Field:
        if p < 2 or any(p % d == 0 for d in range(2, int(p**0.5) + 1)):
            raise UnsupportedError(f"characteristic {p} is not prime")
        return cls(p)

    def __str__(self) -> str:
        return "q" if self.characteristic == 0 else f"fp:{self.characteristic}"


QQ = Field(0)


def rank(rows: list[list[int]], field: Field = QQ) -> int:
    """Exact rank of an integer matrix over ``field``."""
    p = field.characteristic
    mat = [[x % p for x in r] if p else list(r) for r in rows if any(r)]
    if not mat:
        return 0
    ncols = len(mat[0])
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(mat)) if mat[i][c]), None)
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        prow = mat[r]
        pv = prow[c]
        if p:
            inv = pow(pv, -1, p)
            prow = [(x * inv) % p for x in prow]
            mat[r] = prow
        for i in range(r + 1, len(mat)):
            f = mat[i][c]
            if not f:
                continue
            if p:
                mat[i] = [(x - f * y) % p for x, y in zip(mat[i], prow)]
            else:
                row = [pv * x - f * y for x, y in zip(mat[i], prow)]
                g = 0
                for x in row:
                    g = gcd(g, x)
                mat[i] = [x // g for x in row] if g > 1 else row
        r += 1
        if r == len(mat):
            break
    return r


def lcm_lattice(ideal: MonomialIdeal) -> list[Monomial]:
    """All lcms of non-empty subsets of the minimal generators, sorted."""
    seen: set[Monomial] = set()
    for g in ideal.gens:
        seen |= {g.lcm(m) for m in seen}
        seen.add(g)
    return sorted(seen)


def upper_koszul_faces(ideal: MonomialIdeal, a: Monomial) -> list[int]:
    """Faces (as bitmasks over variable indices) of the upper Koszul complex at ``a``."""
    supp = [i for i, e in enumerate(a.exps) if e]
    faces = []
    for mask in range(1 << len(supp)):
        exps = list(a.exps)
        bits = 0
        for j, i in enumerate(supp):
            if mask >> j & 1:
                exps[i] -= 1
                bits |= 1 << i
        if ideal.contains(Monomial(tuple(exps))):
            faces.append(bits)
    return faces


def reduced_homology(faces: list[int], field: Field = QQ) -> dict[int, int]:
    """Reduced homology ranks ``{dim: rank}`` (dim -1 included) of a simplicial complex.

    ``faces`` must list every face, the empty face (mask 0) included.
    """
    by_dim: dict[int, list[int]] = {}
    for f in faces:
        by_dim.setdefault(bin(f).count("1") - 1, []).append(f)
    for fs in by_dim.values():
        fs.sort()
    if not by_dim:
        return {}
    top = max(by_dim)
    index = {d: {f: k for k, f in enumerate(fs)} for d, fs in by_dim.items()}

    def boundary_rank(d: int) -> int:
        # boundary from dim d to dim d - 1
        if d not in by_dim or d - 1 not in by_dim:
            return 0
        target = index[d - 1]
        rows = []
        for f in by_dim[d]:
            row = [0] * len(target)
            bits = [i for i in range(f.bit_length()) if f >> i & 1]
            for pos, i in enumerate(bits):
                row[target[f & ~(1 << i)]] = -1 if pos % 2 else 1
            rows.append(row)
        return rank(rows, field)

    ranks = {d: boundary_rank(d) for d in range(0, top + 2)}
    homology = {}
    for d in range(-1, top + 1):
        h = len(by_dim.get(d, ())) - ranks.get(d, 0) - ranks.get(d + 1, 0)
        if h:
            homology[d] = h
    return homology


@dataclass(frozen=True)
class BettiTable:
    entries: Mapping[tuple[int, Monomial], int]

    def get(self, i: int, a: Monomial) -> int:
        return self.entries.get((i, a), 0)

    @property
    def projective_dimension(self) -> int:
        """pd of the ideal itself (so pd(S/I) is one more)."""
        return max(i for i, _ in self.entries)

    def totals(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for (i, _), b in self.entries.items():
            out[i] = out.get(i, 0) + b
        return dict(sorted(out.items()))


def betti_table(ideal: MonomialIdeal, field: Field = QQ) -> BettiTable:
    if ideal.is_zero() or ideal.is_unit():
        raise ValueError("Betti table needs a proper non-zero ideal")
    entries = {}
    for a in lcm_lattice(ideal):
        for d, h in reduced_homology(upper_koszul_faces(ideal, a), field).items():
            entries[(d + 1, a)] = h
    return BettiTable(entries)
