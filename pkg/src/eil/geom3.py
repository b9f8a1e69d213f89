"""Points, canonical affine lines, duality, and line enumeration in F_q^3.

A line is stored as (base, dir) in a canonical form that makes equal point
sets compare equal: dir is scaled so its first nonzero coordinate (the
pivot) is 1, and base is slid along the line so its pivot coordinate is 0.
In canonical form a line passes through the origin exactly when base is
(0,0,0).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product

import numpy as np

from .errors import GraphFormatError, ParameterError
from .gf import FieldCtx

Point3 = tuple[int, int, int]

ORIGIN: Point3 = (0, 0, 0)


@dataclass(frozen=True)
class AffineLine:
    base: Point3
    dir: Point3


def point_index(ctx: FieldCtx, p: Point3) -> int:
    """Index of a point in the fixed 0..q^3-1 layout (x1*q^2 + x2*q + x3)."""
    q = ctx.q
    return (p[0] * q + p[1]) * q + p[2]


def point_from_index(ctx: FieldCtx, idx: int) -> Point3:
    q = ctx.q
    if not 0 <= idx < q**3:
        raise ParameterError(f"point index {idx} out of range for q = {q}")
    return (idx // (q * q), (idx // q) % q, idx % q)


def check_point(ctx: FieldCtx, p: Point3) -> Point3:
    if len(p) != 3:
        raise ParameterError(f"a point needs 3 coordinates, got {p!r}")
    for c in p:
        ctx.check(c)
    return tuple(p)


def canonical_line(ctx: FieldCtx, base: Point3, direction: Point3) -> AffineLine:
    """Canonicalize (base, direction); direction must be nonzero."""
    q = ctx.q
    base = check_point(ctx, base)
    direction = check_point(ctx, direction)
    if direction == ORIGIN:
        raise ParameterError("line direction must be nonzero")
    pivot = next(i for i in range(3) if direction[i] != 0)
    inv = ctx.inv(direction[pivot])
    d = tuple(c * inv % q for c in direction)
    s = base[pivot]
    b = tuple((base[i] - s * d[i]) % q for i in range(3))
    return AffineLine(b, d)


def line_through(ctx: FieldCtx, p: Point3, r: Point3) -> AffineLine:
    """The unique line containing two distinct points."""
    p = check_point(ctx, p)
    r = check_point(ctx, r)
    if p == r:
        raise ParameterError("two distinct points are needed to span a line")
    direction = tuple((r[i] - p[i]) % ctx.q for i in range(3))
    return canonical_line(ctx, p, direction)


def points_on(ctx: FieldCtx, line: AffineLine) -> list[Point3]:
    """The q points base + s*dir, in increasing s order."""
    q = ctx.q
    b, d = line.base, line.dir
    return [tuple((b[i] + s * d[i]) % q for i in range(3)) for s in range(q)]


def passes_origin(line: AffineLine) -> bool:
    """True iff (0,0,0) lies on the (canonical) line."""
    return line.base == ORIGIN


def incident(ctx: FieldCtx, x: Point3, y: Point3) -> bool:
    """The bilinear incidence x1*y1 + x2*y2 + x3*y3 = 1."""
    check_point(ctx, x)
    check_point(ctx, y)
    return (x[0] * y[0] + x[1] * y[1] + x[2] * y[2]) % ctx.q == 1


def all_lines(ctx: FieldCtx):
    """Every affine line of F_q^3 exactly once, in canonical form.

    Enumerates canonical (base, dir) pairs directly: pivot position, then
    dir tail, then the two free base coordinates, all in increasing order.
    Total count is q^2 * (q^2 + q + 1).
    """
    q = ctx.q
    rng = range(q)
    for pivot in range(3):
        for tail in product(rng, repeat=2 - pivot):
            d = [0, 0, 0]
            d[pivot] = 1
            d[pivot + 1 :] = tail
            free = [i for i in range(3) if i != pivot]
            for v0 in rng:
                for v1 in rng:
                    b = [0, 0, 0]
                    b[free[0]] = v0
                    b[free[1]] = v1
                    yield AffineLine(tuple(b), tuple(d))


def line_count(ctx: FieldCtx) -> int:
    q = ctx.q
    return q * q * (q * q + q + 1)


def dual_line(ctx: FieldCtx, line: AffineLine) -> AffineLine:
    """The dual of a line avoiding the origin.

    For l = base + F_q*dir, the dual is the solution set of the 2x3 system
    base . z = 1, dir . z = 0; it is again a line avoiding the origin, and
    the planes {y : z . y = 1} for z on the dual all contain l.
    """
    if canonical_line(ctx, line.base, line.dir) != line:
        raise ParameterError(f"{line} is not in canonical form")
    if passes_origin(line):
        raise ParameterError("a line through the origin has no dual line")
    q = ctx.q
    rows = [list(line.base) + [1], list(line.dir) + [0]]
    pivots: list[int] = []
    r = 0
    for col in range(3):
        piv = next((i for i in range(r, 2) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = ctx.inv(rows[r][col])
        rows[r] = [v * inv % q for v in rows[r]]
        for i in range(2):
            if i != r and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [(rows[i][j] - f * rows[r][j]) % q for j in range(4)]
        pivots.append(col)
        r += 1
        if r == 2:
            break
    # base and dir are independent for a non-origin canonical line
    assert r == 2, "degenerate dual system"
    free = next(c for c in range(3) if c not in pivots)
    z0 = [0, 0, 0]
    w = [0, 0, 0]
    w[free] = 1
    for i, col in enumerate(pivots):
        z0[col] = rows[i][3]
        w[col] = (-rows[i][free]) % q
    return canonical_line(ctx, tuple(z0), tuple(w))


def parallel_class_partition(ctx: FieldCtx) -> list[AffineLine]:
    """q^2 disjoint lines with direction (1,0,0) covering all of F_q^3."""
    q = ctx.q
    return [AffineLine((0, b, c), (1, 0, 0)) for b in range(q) for c in range(q)]


def line_to_text(line: AffineLine) -> str:
    b, d = line.base, line.dir
    return f"{b[0]},{b[1]},{b[2]};{d[0]},{d[1]},{d[2]}"


def line_from_text(ctx: FieldCtx, text: str) -> AffineLine:
    try:
        b_part, d_part = text.strip().split(";")
        b = tuple(int(v) for v in b_part.split(","))
        d = tuple(int(v) for v in d_part.split(","))
        line = AffineLine(check_point(ctx, b), check_point(ctx, d))
    except (ValueError, ParameterError) as exc:
        raise GraphFormatError(f"bad line literal {text!r}") from exc
    if canonical_line(ctx, b, d) != line:
        raise GraphFormatError(f"line literal {text!r} is not canonical")
    return line


class LineTable:
    """Array views of the full canonical line enumeration for one field.

    Rows follow all_lines() order. Holds, per line, its q point indices, an
    origin flag, and the index of its dual (-1 for lines through the origin).
    Shared by the bulk paths in evasive/incidence; built once per q.
    """

    def __init__(self, ctx: FieldCtx):
        q = ctx.q
        self.ctx = ctx
        self.lines = list(all_lines(ctx))
        self.index_of = {line: i for i, line in enumerate(self.lines)}
        n = len(self.lines)
        assert n == line_count(ctx)
        self.base = np.array([line.base for line in self.lines], dtype=np.int64)
        self.dir = np.array([line.dir for line in self.lines], dtype=np.int64)
        s = np.arange(q, dtype=np.int64)
        pts = (self.base[:, None, :] + s[None, :, None] * self.dir[:, None, :]) % q
        self.point_idx = (pts[:, :, 0] * q + pts[:, :, 1]) * q + pts[:, :, 2]
        self.origin_mask = (self.base == 0).all(axis=1)
        dual_idx = np.full(n, -1, dtype=np.int64)
        for i, line in enumerate(self.lines):
            if not self.origin_mask[i]:
                dual_idx[i] = self.index_of[dual_line(ctx, line)]
        self.dual_idx = dual_idx

    def __len__(self) -> int:
        return len(self.lines)


@lru_cache(maxsize=None)
def line_table(q: int) -> LineTable:
    return LineTable(FieldCtx(q))
