"""Randomized algebraic construction of line-evasive point sets.

Samples a uniform trivariate polynomial of total degree <= t, takes its
zero set X0, then removes every point lying on a line on which the
polynomial vanishes identically. The pruned set X meets every line in at
most t points, and for each line the chance of hitting exactly t points
stays bounded away from zero as q grows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import product

import numpy as np

from .errors import GraphFormatError, ParameterError
from .geom3 import AffineLine, line_table, point_index
from .gf import FieldCtx

# Fixed reference line used by the Monte Carlo commands: canonical and not
# through the origin, valid for every q.
def reference_line(ctx: FieldCtx) -> AffineLine:
    return AffineLine((1, 0, 0), (0, 1, 0))


@lru_cache(maxsize=None)
def monomials(t: int) -> tuple[tuple[int, int, int], ...]:
    """Exponent triples (i,j,k) with i+j+k <= t in graded-lex order.

    Ascending total degree, ties broken by ascending lexicographic order on
    the triple. This fixes the coefficient-vector layout everywhere
    (sampling order, serialization, restriction matrices).
    """
    mons = [
        (i, j, k)
        for i in range(t + 1)
        for j in range(t + 1)
        for k in range(t + 1)
        if i + j + k <= t
    ]
    mons.sort(key=lambda m: (sum(m), m))
    assert len(mons) == math.comb(t + 3, 3)
    return tuple(mons)


@dataclass(frozen=True)
class TriPoly:
    """Trivariate polynomial of total degree <= t over F_q.

    coeffs is aligned with monomials(t); exactly C(t+3,3) entries.
    """

    q: int
    t: int
    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.coeffs) != math.comb(self.t + 3, 3):
            raise ParameterError(
                f"degree-{self.t} polynomial needs {math.comb(self.t + 3, 3)} "
                f"coefficients, got {len(self.coeffs)}"
            )

    def coefficient(self, exponents: tuple[int, int, int]) -> int:
        return self.coeffs[monomials(self.t).index(exponents)]

    def to_text(self) -> str:
        return ",".join(str(c) for c in self.coeffs)

    @classmethod
    def from_text(cls, ctx: FieldCtx, t: int, text: str) -> "TriPoly":
        try:
            coeffs = tuple(int(v) for v in text.strip().split(","))
        except ValueError as exc:
            raise GraphFormatError(f"bad coefficient list {text!r}") from exc
        for c in coeffs:
            ctx.check(c)
        return cls(ctx.q, t, coeffs)


@dataclass(frozen=True)
class UniPoly:
    """Univariate polynomial of degree <= t; coeffs[d] multiplies s^d."""

    q: int
    coeffs: tuple[int, ...]

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def evaluate(self, s: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * s + c) % self.q
        return acc


class PointSet:
    """Subset of F_q^3 as a membership bitmask over point indices."""

    def __init__(self, q: int, member: np.ndarray):
        if member.shape != (q**3,) or member.dtype != np.bool_:
            raise ParameterError("membership must be a bool array of length q^3")
        self.q = q
        self.member = member

    @classmethod
    def empty(cls, q: int) -> "PointSet":
        return cls(q, np.zeros(q**3, dtype=np.bool_))

    @classmethod
    def from_indices(cls, q: int, indices) -> "PointSet":
        member = np.zeros(q**3, dtype=np.bool_)
        member[np.asarray(indices, dtype=np.int64)] = True
        return cls(q, member)

    @property
    def count(self) -> int:
        return int(self.member.sum())

    def __len__(self) -> int:
        return self.count

    def __eq__(self, other) -> bool:
        if not isinstance(other, PointSet):
            return NotImplemented
        return self.q == other.q and bool((self.member == other.member).all())

    def contains_index(self, idx: int) -> bool:
        return bool(self.member[idx])

    def contains(self, ctx: FieldCtx, p) -> bool:
        return bool(self.member[point_index(ctx, p)])

    def indices(self) -> np.ndarray:
        return np.flatnonzero(self.member)

    def to_text(self) -> str:
        lines = [f"q={self.q} n={self.count}"]
        lines.extend(str(i) for i in self.indices())
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "PointSet":
        rows = text.splitlines()
        if not rows:
            raise GraphFormatError("line 1: empty point-set file")
        head = rows[0].split()
        if len(head) != 2 or not head[0].startswith("q=") or not head[1].startswith("n="):
            raise GraphFormatError("line 1: expected header 'q=<q> n=<count>'")
        try:
            q = int(head[0][2:])
            n = int(head[1][2:])
        except ValueError as exc:
            raise GraphFormatError("line 1: bad header numbers") from exc
        try:
            FieldCtx(q)
        except ParameterError as exc:
            raise GraphFormatError(f"line 1: {exc}") from exc
        if q > 1290:  # q^3 bools; keep hostile headers from exhausting memory
            raise GraphFormatError(f"line 1: q = {q} too large for a point-set file")
        member = np.zeros(q**3, dtype=np.bool_)
        prev = -1
        for lineno, row in enumerate(rows[1:], start=2):
            try:
                idx = int(row)
            except ValueError as exc:
                raise GraphFormatError(f"line {lineno}: expected a point index") from exc
            if not 0 <= idx < q**3:
                raise GraphFormatError(f"line {lineno}: index {idx} out of range")
            if idx <= prev:
                raise GraphFormatError(f"line {lineno}: indices must be strictly increasing")
            prev = idx
            member[idx] = True
        if int(member.sum()) != n:
            raise GraphFormatError(f"header count n={n} does not match {int(member.sum())} indices")
        return cls(q, member)


class CoefficientStream:
    """Seeded counter-based stream of exactly-uniform field elements.

    Backed by Philox; 64-bit words are reduced by rejection sampling (words
    at or above the largest multiple of q are discarded), so residues carry
    no modulo bias. Words are consumed strictly in generation order and
    unconsumed words are kept, so draw(q, a) followed by draw(q, b) yields
    the same elements as one draw(q, a + b).
    """

    _BATCH = 256

    def __init__(self, seed: int):
        if not isinstance(seed, int) or seed < 0:
            raise ParameterError(f"seed must be a nonnegative integer, got {seed!r}")
        self.seed = seed
        self._bits = np.random.Philox(seed)
        self._pending = np.empty(0, dtype=np.uint64)

    def draw(self, ctx: FieldCtx, n: int) -> np.ndarray:
        q = ctx.q
        rem = (1 << 64) % q
        out = np.empty(n, dtype=np.int64)
        filled = 0
        while filled < n:
            if self._pending.size == 0:
                self._pending = self._bits.random_raw(self._BATCH)
            words = self._pending
            if rem:
                accept = words < np.uint64((1 << 64) - rem)
            else:
                accept = np.ones(words.size, dtype=np.bool_)
            need = n - filled
            cum = np.cumsum(accept)
            if cum[-1] >= need:
                cut = int(np.searchsorted(cum, need)) + 1
            else:
                cut = words.size
            got = words[:cut][accept[:cut]]
            out[filled : filled + got.size] = (got % np.uint64(q)).astype(np.int64)
            filled += got.size
            self._pending = words[cut:]
        return out


def sample_poly(ctx: FieldCtx, t: int, rng: CoefficientStream) -> TriPoly:
    """Uniform random TriPoly: coefficients drawn iid in monomial order."""
    if t < 3:
        raise ParameterError(f"degree bound t must be >= 3, got {t}")
    coeffs = rng.draw(ctx, math.comb(t + 3, 3))
    return TriPoly(ctx.q, t, tuple(int(c) for c in coeffs))


def evaluate(f: TriPoly, p) -> int:
    """f at a single point, by direct monomial summation."""
    q = f.q
    powers = [[pow(c, e, q) for e in range(f.t + 1)] for c in p]
    acc = 0
    for (i, j, k), a in zip(monomials(f.t), f.coeffs):
        if a:
            acc += a * powers[0][i] * powers[1][j] % q * powers[2][k]
    return acc % q


def restrict_to_line(ctx: FieldCtx, f: TriPoly, line: AffineLine) -> UniPoly:
    """Symbolic substitution of base + s*dir into f, collected in s.

    Returns the full coefficient list of length t+1 (high coefficients may
    be zero); g(s) = f(base + s*dir) for every s.
    """
    q, t = ctx.q, f.t
    # expansions[c][e] = coefficient list of (base[c] + s*dir[c])^e
    expansions = []
    for b, d in zip(line.base, line.dir):
        per_e = [[1]]
        for e in range(1, t + 1):
            per_e.append(
                [math.comb(e, m) * pow(b, e - m, q) * pow(d, m, q) % q for m in range(e + 1)]
            )
        expansions.append(per_e)
    g = [0] * (t + 1)
    for (i, j, k), a in zip(monomials(t), f.coeffs):
        if a == 0:
            continue
        ei, ej, ek = expansions[0][i], expansions[1][j], expansions[2][k]
        for m1, c1 in enumerate(ei):
            if c1 == 0:
                continue
            ac1 = a * c1 % q
            for m2, c2 in enumerate(ej):
                if c2 == 0:
                    continue
                ac12 = ac1 * c2 % q
                for m3, c3 in enumerate(ek):
                    if c3:
                        g[m1 + m2 + m3] = (g[m1 + m2 + m3] + ac12 * c3) % q
    return UniPoly(q, tuple(g))


@lru_cache(maxsize=None)
def _eval_matrix(q: int, t: int) -> np.ndarray:
    """(q^3, n_monomials) matrix of monomial values at every point."""
    coords = np.array(list(product(range(q), repeat=3)), dtype=np.int64)
    mons = monomials(t)
    powers = [
        np.stack([_pow_mod(coords[:, c], e, q) for e in range(t + 1)]) for c in range(3)
    ]
    v = np.empty((q**3, len(mons)), dtype=np.int64)
    for m, (i, j, k) in enumerate(mons):
        v[:, m] = powers[0][i] * powers[1][j] % q * powers[2][k] % q
    return v


def _pow_mod(col: np.ndarray, e: int, q: int) -> np.ndarray:
    out = np.ones_like(col)
    b = col % q
    while e:
        if e & 1:
            out = out * b % q
        b = b * b % q
        e >>= 1
    return out


@lru_cache(maxsize=None)
def restriction_tensor(q: int, t: int) -> np.ndarray:
    """(n_lines, t+1, n_monomials) linear maps: coeffs -> per-line restriction.

    Row l gives the matrix taking a TriPoly coefficient vector to the
    coefficients of its symbolic restriction to line l of line_table(q).
    """
    table = line_table(q)
    n = len(table)
    mons = monomials(t)
    base, dirv = table.base, table.dir
    # expans[c][e] has shape (e+1, n): binomial expansion of (b_c + s d_c)^e
    expans = []
    for c in range(3):
        powb = np.stack([_pow_mod(base[:, c], e, q) for e in range(t + 1)])
        powd = np.stack([_pow_mod(dirv[:, c], e, q) for e in range(t + 1)])
        per_e = []
        for e in range(t + 1):
            rows = [math.comb(e, m) % q * powb[e - m] % q * powd[m] % q for m in range(e + 1)]
            per_e.append(np.stack(rows))
        expans.append(per_e)
    tensor = np.zeros((n, t + 1, len(mons)), dtype=np.int64)
    for m, (i, j, k) in enumerate(mons):
        for m1 in range(i + 1):
            for m2 in range(j + 1):
                part = expans[0][i][m1] * expans[1][j][m2] % q
                for m3 in range(k + 1):
                    d = m1 + m2 + m3
                    tensor[:, d, m] = (tensor[:, d, m] + part * expans[2][k][m3]) % q
    return tensor


def restrict_all_lines(ctx: FieldCtx, f: TriPoly) -> np.ndarray:
    """(n_lines, t+1) coefficients of f restricted to every canonical line."""
    q, t = ctx.q, f.t
    tensor = restriction_tensor(q, t)
    a = np.asarray(f.coeffs, dtype=np.int64)
    flat = tensor.reshape(-1, a.size) @ a % q
    return flat.reshape(tensor.shape[0], t + 1)


def zero_set(ctx: FieldCtx, f: TriPoly) -> PointSet:
    """The points where f evaluates to zero."""
    values = _eval_matrix(ctx.q, f.t) @ np.asarray(f.coeffs, dtype=np.int64) % ctx.q
    return PointSet(ctx.q, values == 0)


def prune_bad_lines(
    ctx: FieldCtx, f: TriPoly, x0: PointSet
) -> tuple[PointSet, list[AffineLine]]:
    """Remove all points lying on a line where f vanishes identically.

    A line counts as vanishing when its symbolic restriction is the zero
    polynomial. The returned set meets every line in at most t points: a
    line with more than t surviving points would force its degree-<=t
    restriction to have more than t roots, hence vanish, hence be cleared.
    """
    table = line_table(ctx.q)
    coeffs = restrict_all_lines(ctx, f)
    vanishing = np.flatnonzero(~coeffs.any(axis=1))
    member = x0.member.copy()
    if vanishing.size:
        member[np.unique(table.point_idx[vanishing])] = False
    return PointSet(ctx.q, member), [table.lines[i] for i in vanishing]


def line_intersection_counts(x: PointSet) -> np.ndarray:
    """|X intersect l| for every line of line_table(q), in table order."""
    table = line_table(x.q)
    return x.member[table.point_idx].sum(axis=1)


@dataclass(frozen=True)
class LineHistogram:
    """Lines bucketed by intersection size, split by origin membership."""

    through_origin: dict[int, int]
    off_origin: dict[int, int]

    def total(self) -> dict[int, int]:
        return {
            k: self.through_origin[k] + self.off_origin[k] for k in self.through_origin
        }


def line_histogram(ctx: FieldCtx, x: PointSet) -> LineHistogram:
    """Number of lines meeting X in exactly k points, for k = 0..q."""
    counts = line_intersection_counts(x)
    origin = line_table(ctx.q).origin_mask
    on = np.bincount(counts[origin], minlength=ctx.q + 1)
    off = np.bincount(counts[~origin], minlength=ctx.q + 1)
    return LineHistogram(
        {k: int(on[k]) for k in range(ctx.q + 1)},
        {k: int(off[k]) for k in range(ctx.q + 1)},
    )


@dataclass(frozen=True)
class ExactProbabilities:
    """Closed-form per-line probabilities for the unpruned zero set."""

    p_vanish: float
    p_exact_t: float
    e_binom: float


def exact_probabilities(q: int, t: int) -> ExactProbabilities:
    """p_vanish = q^-(t+1); e_binom = C(q,t) q^-t; p_exact_t = (1-1/q) e_binom.

    All three are exact rationals rounded once to double precision.
    """
    FieldCtx(q)
    if t > q:
        raise ParameterError(f"t = {t} exceeds q = {q}; a line has only q points")
    if t < 0:
        raise ParameterError(f"t must be nonnegative, got {t}")
    return ExactProbabilities(
        p_vanish=1 / q ** (t + 1),
        p_exact_t=(q - 1) * math.comb(q, t) / q ** (t + 1),
        e_binom=math.comb(q, t) / q**t,
    )
