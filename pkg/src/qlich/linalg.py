"""Sparse exact linear algebra over the rationals.

Vectors are plain dicts mapping orderable keys to nonzero ``Fraction``s.
Elimination pivots on the smallest key of each vector, so every echelon
vector has its pivot as leading term and all other keys strictly larger.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Hashable, Iterable, Sequence

Vector = dict


def add_scaled(target: dict, source: dict, factor) -> None:
    """In place ``target += factor * source``, dropping cancelled entries."""
    if not factor:
        return
    for k, v in source.items():
        nv = target.get(k, 0) + factor * v
        if nv:
            target[k] = nv
        else:
            target.pop(k, None)


class Echelon:
    """Incrementally built echelon basis of a subspace.

    Each inserted vector may carry a *tag*, an arbitrary linear combination
    (dict) recording how it was built from the caller's inputs.  Reducing
    a vector to zero exposes a linear relation among the inputs, which is
    how kernels and solutions are extracted.
    """

    def __init__(self, track: bool = True):
        self.pivots: dict[Hashable, tuple[dict, dict]] = {}
        self.track = track

    def __len__(self) -> int:
        return len(self.pivots)

    def reduce(self, vec: dict, comb: dict | None = None) -> tuple[dict, dict]:
        vec = dict(vec)
        comb = dict(comb) if comb is not None else {}
        pivots = self.pivots
        while True:
            hit = [k for k in vec if k in pivots]
            if not hit:
                return vec, comb
            k = min(hit)
            pvec, pcomb = pivots[k]
            f = -vec[k]
            add_scaled(vec, pvec, f)
            if self.track:
                add_scaled(comb, pcomb, f)

    def insert(self, vec: dict, comb: dict | None = None) -> tuple[bool, dict]:
        """Insert ``vec``; return (independent, residual combination).

        When ``vec`` is dependent the returned combination satisfies
        ``sum(comb[t] * input_t) == 0``.
        """
        r, c = self.reduce(vec, comb)
        if not r:
            return False, c
        k = min(r)
        inv = 1 / Fraction(r[k])
        r = {kk: vv * inv for kk, vv in r.items()}
        if self.track:
            c = {kk: vv * inv for kk, vv in c.items()}
        self.pivots[k] = (r, c)
        return True, c

    def contains(self, vec: dict) -> bool:
        r, _ = self.reduce(vec)
        return not r

    def reduced_basis(self) -> list[dict]:
        """Fully reduced row echelon basis, sorted by pivot key."""
        keys = sorted(self.pivots)
        rows = {k: dict(self.pivots[k][0]) for k in keys}
        for k in reversed(keys):
            row = rows[k]
            for j in keys:
                if j == k:
                    continue
                other = rows[j]
                f = other.get(k)
                if f:
                    add_scaled(other, row, -f)
        return [rows[k] for k in keys]


def kernel(images: Sequence[dict]) -> list[dict]:
    """Basis of the kernel of the map ``e_i -> images[i]``.

    Kernel vectors are dicts over input positions, returned in fully
    reduced echelon form so that the output is canonical.
    """
    ech = Echelon()
    rels = Echelon(track=False)
    for i, img in enumerate(images):
        ok, c = ech.insert(img, {i: Fraction(1)})
        if not ok:
            rels.insert(c)
    return rels.reduced_basis()


def rank(vectors: Iterable[dict]) -> int:
    ech = Echelon(track=False)
    for v in vectors:
        ech.insert(v)
    return len(ech)


def solve(columns: Sequence[dict], target: dict) -> dict | None:
    """Find ``x`` with ``sum(x[i] * columns[i]) == target`` or return None."""
    ech = Echelon()
    for i, col in enumerate(columns):
        ech.insert(col, {i: Fraction(1)})
    r, c = ech.reduce(target)
    if r:
        return None
    # reduce(target) subtracted sum(c) of columns, so target = -c
    return {i: -v for i, v in c.items() if v}


def combine(coeffs: dict, vectors: Sequence[dict]) -> dict:
    out: dict = {}
    for i, a in coeffs.items():
        add_scaled(out, vectors[i], a)
    return out
