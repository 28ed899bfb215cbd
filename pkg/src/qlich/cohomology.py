"""Cohomology of one graded cell of a cochain complex, by exact elimination."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Hashable, Sequence

from . import linalg


@dataclass
class CohomologyCell:
    grading: tuple
    kernel_dim: int
    image_dim: int
    dim: int
    representatives: list
    truncated: bool = False


@dataclass
class CohomologyReport:
    grading: tuple
    cells: list
    metadata: dict = field(default_factory=dict)

    def cell(self, *grading) -> CohomologyCell | None:
        for c in self.cells:
            if c.grading == tuple(grading):
                return c
        return None

    def nonzero(self) -> list[CohomologyCell]:
        return [c for c in self.cells if c.dim]

    def total_dims(self, axis: int = 0) -> dict:
        out: dict = {}
        for c in self.cells:
            out[c.grading[axis]] = out.get(c.grading[axis], 0) + c.dim
        return dict(sorted(out.items()))

    def representatives(self) -> list:
        return [r for c in self.cells for r in c.representatives]

    @property
    def truncated(self) -> bool:
        return any(c.truncated for c in self.cells)


def cell_cohomology(
    grading: tuple,
    basis: Sequence[Hashable],
    apply: Callable[[Hashable], dict],
    lower: Sequence[Hashable],
    order: Callable | None = None,
    banded: bool = False,
) -> CohomologyCell:
    """H = ker(d on span(basis)) / (d(span(lower)) intersected with span(basis)).

    ``apply`` maps a basis key to its image as a sparse dict.  Unless
    ``banded`` is set, every image of ``lower`` must land in span(basis);
    with ``banded`` the part of span(lower) mapping outside is discarded
    and the cell is flagged truncated when that happens.
    """
    order = order or (lambda k: k)

    def wrap(vec):
        return {(order(k), k): v for k, v in vec.items()}

    in_basis = set(basis)
    images = [apply(k) for k in basis]
    ker_pos = linalg.kernel(images)

    truncated = False
    inside, outside = [], []
    for key in lower:
        img = apply(key)
        ins = {k: v for k, v in img.items() if k in in_basis}
        out = {k: v for k, v in img.items() if k not in in_basis}
        if out and not banded:
            raise ValueError(f"differential leaves cell {grading}: {key!r}")
        inside.append(ins)
        outside.append(out)
    if any(outside):
        truncated = True
        keep = linalg.kernel(outside)
        image_vectors = [linalg.combine(c, inside) for c in keep]
    else:
        image_vectors = inside

    ech = linalg.Echelon(track=False)
    for v in image_vectors:
        ech.insert(wrap(v))
    image_dim = len(ech)

    reduced = []
    for kv in ker_pos:
        vec = wrap({basis[i]: a for i, a in kv.items()})
        r, _ = ech.reduce(vec)
        if r:
            ok, _ = ech.insert(r)
            if ok:
                reduced.append(r)
    rep_ech = linalg.Echelon(track=False)
    for r in reduced:
        rep_ech.insert(r)
    reps = [{k: v for (_, k), v in row.items()} for row in rep_ech.reduced_basis()]
    return CohomologyCell(
        grading=tuple(grading),
        kernel_dim=len(ker_pos),
        image_dim=image_dim,
        dim=len(ker_pos) - image_dim,
        representatives=reps,
        truncated=truncated or banded,
    )
