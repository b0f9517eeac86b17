"""Sum-rank weights and distances, metric balls, and linear isometries.

A vector in GF(q^m)^n is split by a length partition (n_1, ..., n_l) into l
blocks; its weight is the sum over blocks of the rank of each block's
coordinate matrix.  With all sublengths 1 this is the Hamming weight, with a
single block it is the matrix rank.  The linear isometries of this metric
permute blocks of equal sublength, scale each block by a nonzero extension
field element, and multiply each block on the right by an invertible base
field matrix; both directions of that characterization are used here.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Optional, Sequence

from .errors import BudgetExceeded, PartitionError, PreconditionError
from .galois import FieldCtx, Matrix, matrix_rep

# ---------------------------------------------------------------------------
# partitions and vectors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LengthPartition:
    """Ordered sublengths (n_1, ..., n_l) of a sum-rank length partition."""

    sublengths: tuple[int, ...]

    def __init__(self, sublengths: Iterable[int]) -> None:
        object.__setattr__(self, "sublengths", tuple(int(v) for v in sublengths))
        if not self.sublengths or any(v < 1 for v in self.sublengths):
            raise PartitionError("all sublengths must be >= 1")

    @property
    def n(self) -> int:
        return sum(self.sublengths)

    @property
    def ell(self) -> int:
        return len(self.sublengths)

    def block_ranges(self) -> tuple[tuple[int, int], ...]:
        """Half-open [start, stop) coordinate ranges of the blocks."""
        out = []
        start = 0
        for ni in self.sublengths:
            out.append((start, start + ni))
            start += ni
        return tuple(out)

    def grouped(self) -> tuple[tuple[int, int], ...]:
        """Distinct sublengths with multiplicities, ascending: ((N_j, l_j), ...)."""
        counts: dict[int, int] = {}
        for ni in self.sublengths:
            counts[ni] = counts.get(ni, 0) + 1
        return tuple(sorted(counts.items()))

    def __iter__(self) -> Iterator[int]:
        return iter(self.sublengths)


def partition_of(spec: "LengthPartition | Iterable[int]") -> LengthPartition:
    return spec if isinstance(spec, LengthPartition) else LengthPartition(spec)


@dataclass(frozen=True)
class SumRankVector:
    """A vector over GF(q^m) together with its partition and context."""

    ctx: FieldCtx
    partition: LengthPartition
    entries: tuple[int, ...]

    def __init__(self, ctx: FieldCtx, partition, entries: Iterable[int]) -> None:
        partition = partition_of(partition)
        entries = tuple(entries)
        if len(entries) != partition.n:
            raise PartitionError(
                f"vector length {len(entries)} != partition total {partition.n}"
            )
        order = ctx.ext.order
        for v in entries:
            if not 0 <= v < order:
                raise PartitionError(f"entry {v} outside GF({ctx.q}^{ctx.m})")
        object.__setattr__(self, "ctx", ctx)
        object.__setattr__(self, "partition", partition)
        object.__setattr__(self, "entries", entries)

    def blocks(self) -> list[tuple[int, ...]]:
        return [
            self.entries[a:b] for a, b in self.partition.block_ranges()
        ]

    def is_zero(self) -> bool:
        return not any(self.entries)


def _check_same_shape(u: SumRankVector, v: SumRankVector) -> None:
    if u.ctx is not v.ctx:
        raise PartitionError("vectors use different field contexts")
    if u.partition != v.partition:
        raise PartitionError("vectors use different length partitions")


# ---------------------------------------------------------------------------
# weight and distance
# ---------------------------------------------------------------------------

def block_weight(block: Sequence[int], ctx: FieldCtx) -> int:
    """Rank of one block's coordinate matrix."""
    if ctx.m == 1:
        return 1 if any(block) else 0
    if not any(block):
        return 0
    return matrix_rep(block, ctx).rank()


def weight_of_entries(entries: Sequence[int], partition: LengthPartition, ctx: FieldCtx) -> int:
    total = 0
    for a, b in partition.block_ranges():
        total += block_weight(entries[a:b], ctx)
    return total


def sumrank_weight(v: SumRankVector) -> int:
    """Sum over blocks of the rank of the block's coordinate matrix."""
    return weight_of_entries(v.entries, v.partition, v.ctx)


def sumrank_distance(u: SumRankVector, v: SumRankVector) -> int:
    """Weight of the difference; a metric on GF(q^m)^n."""
    _check_same_shape(u, v)
    sub = u.ctx.ext.sub
    diff = tuple(sub(a, b) for a, b in zip(u.entries, v.entries))
    return weight_of_entries(diff, u.partition, u.ctx)


# ---------------------------------------------------------------------------
# ball sizes via rank-count convolution
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def gaussian_binomial(n: int, k: int, q: int) -> int:
    """Number of k-dimensional subspaces of GF(q)^n."""
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


@lru_cache(maxsize=None)
def matrix_rank_count(q: int, m: int, n: int, k: int) -> int:
    """Number of m x n matrices over GF(q) of rank exactly k."""
    if k < 0 or k > min(m, n):
        return 0
    count = gaussian_binomial(n, k, q)
    for i in range(k):
        count *= q ** m - q ** i
    return count


def _block_rank_counts(q: int, m: int, ni: int) -> list[int]:
    return [matrix_rank_count(q, m, ni, k) for k in range(min(m, ni) + 1)]


def ball_size(partition, ctx: FieldCtx, t: int) -> int:
    """Number of vectors of sum-rank weight at most t (exact big integer).

    Computed from the closed-form count of m x n_i matrices of each rank,
    convolved across blocks.  For m = 1, t = 1 and equal sublengths N this
    reduces to 1 + l (q^N - 1).
    """
    if t < 0:
        raise PreconditionError("radius must be >= 0")
    partition = partition_of(partition)
    poly = [1]
    for ni in partition.sublengths:
        counts = _block_rank_counts(ctx.q, ctx.m, ni)
        out = [0] * (len(poly) + len(counts) - 1)
        for i, a in enumerate(poly):
            for j, b in enumerate(counts):
                out[i + j] += a * b
        poly = out
    return sum(poly[: t + 1])


# ---------------------------------------------------------------------------
# linear sum-rank isometries
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IsometrySpec:
    """Data of a linear sum-rank isometry.

    Output block i is beta_i * v^(sigma(i)) * A_i, where sigma only moves
    blocks between positions of equal sublength, each beta_i is a nonzero
    extension field element, and each A_i is invertible over the base field.
    """

    sigma: tuple[int, ...]
    betas: tuple[int, ...]
    mats: tuple[Matrix, ...]

    def validate(self, partition: LengthPartition, ctx: FieldCtx) -> None:
        ell = partition.ell
        subl = partition.sublengths
        if sorted(self.sigma) != list(range(ell)):
            raise PartitionError("sigma is not a permutation of the blocks")
        if len(self.betas) != ell or len(self.mats) != ell:
            raise PartitionError("betas/mats length must equal the block count")
        for i in range(ell):
            if subl[self.sigma[i]] != subl[i]:
                raise PartitionError("sigma moves a block to a different sublength")
            if not 0 < self.betas[i] < ctx.ext.order:
                raise PartitionError("betas must be nonzero field elements")
            a = self.mats[i]
            if a.nrows != subl[i] or a.ncols != subl[i]:
                raise PartitionError("A_i must be square of the sublength")
            if a.inverse() is None:
                raise PartitionError("A_i must be invertible")


def identity_isometry(partition, ctx: FieldCtx) -> IsometrySpec:
    partition = partition_of(partition)
    return IsometrySpec(
        sigma=tuple(range(partition.ell)),
        betas=(1,) * partition.ell,
        mats=tuple(Matrix.identity(ctx.base, ni) for ni in partition.sublengths),
    )


def apply_isometry(spec: IsometrySpec, v: SumRankVector) -> SumRankVector:
    """Apply the isometry; the sum-rank weight is preserved."""
    partition = v.partition
    ctx = v.ctx
    spec.validate(partition, ctx)
    blocks = v.blocks()
    ext = ctx.ext
    out: list[int] = []
    for i in range(partition.ell):
        src = blocks[spec.sigma[i]]
        a = spec.mats[i]
        # right-multiply the block by A_i entry-wise over GF(q^m), then scale
        mixed = [0] * a.ncols
        for r, x in enumerate(src):
            if x == 0:
                continue
            for c in range(a.ncols):
                e = a.entry(r, c)
                if e:
                    mixed[c] = ext.add(mixed[c], ext.mul(x, ctx.embed(e)))
        beta = spec.betas[i]
        out.extend(ext.mul(beta, x) if x else 0 for x in mixed)
    return SumRankVector(ctx, partition, out)


def compose_isometries(f: IsometrySpec, g: IsometrySpec, partition, ctx: FieldCtx) -> IsometrySpec:
    """Spec of f after g: apply(compose(f, g), v) == apply(f, apply(g, v))."""
    partition = partition_of(partition)
    f.validate(partition, ctx)
    g.validate(partition, ctx)
    ext = ctx.ext
    sigma = tuple(g.sigma[f.sigma[i]] for i in range(partition.ell))
    betas = tuple(
        ext.mul(f.betas[i], g.betas[f.sigma[i]]) for i in range(partition.ell)
    )
    mats = tuple(g.mats[f.sigma[i]] @ f.mats[i] for i in range(partition.ell))
    return IsometrySpec(sigma=sigma, betas=betas, mats=mats)


def random_isometry(partition, ctx: FieldCtx, rng) -> IsometrySpec:
    """Uniform-ish random isometry spec for tests and simulations."""
    partition = partition_of(partition)
    subl = partition.sublengths
    indices = list(range(partition.ell))
    sigma = [-1] * partition.ell
    for group_len, _ in partition.grouped():
        positions = [i for i in indices if subl[i] == group_len]
        shuffled = positions[:]
        rng.shuffle(shuffled)
        for pos, src in zip(positions, shuffled):
            sigma[pos] = src
    betas = tuple(rng.randrange(1, ctx.ext.order) for _ in range(partition.ell))
    mats = []
    for ni in subl:
        while True:
            cand = Matrix(
                ctx.base,
                [[rng.randrange(ctx.q) for _ in range(ni)] for _ in range(ni)],
            )
            if cand.inverse() is not None:
                mats.append(cand)
                break
    return IsometrySpec(sigma=tuple(sigma), betas=betas, mats=tuple(mats))


# ---------------------------------------------------------------------------
# code isometry search (desk scale)
# ---------------------------------------------------------------------------

def _invertible_matrices(ctx: FieldCtx, n: int) -> list[Matrix]:
    field = ctx.base
    out = []
    for flat in itertools.product(range(ctx.q), repeat=n * n):
        m = Matrix(field, [flat[i * n : (i + 1) * n] for i in range(n)])
        if m.inverse() is not None:
            out.append(m)
    return out


def _group_permutations(partition: LengthPartition) -> Iterator[tuple[int, ...]]:
    """All permutations of the blocks that preserve sublengths."""
    subl = partition.sublengths
    groups: dict[int, list[int]] = {}
    for i, ni in enumerate(subl):
        groups.setdefault(ni, []).append(i)
    keys = sorted(groups)
    for perms in itertools.product(
        *(itertools.permutations(groups[k]) for k in keys)
    ):
        sigma = [-1] * partition.ell
        for k, perm in zip(keys, perms):
            for pos, src in zip(groups[k], perm):
                sigma[pos] = src
        yield tuple(sigma)


def parity_block_spaces(code) -> frozenset[tuple[tuple[int, ...], ...]]:
    """Set of the column spaces of the parity-check blocks, canonically."""
    h = code.parity_check
    spaces = []
    for a, b in code.partition.block_ranges():
        spaces.append(h.submatrix_columns(range(a, b)).column_space_canonical())
    return frozenset(spaces)


def codes_isometric(code_c, code_d, budget: int = 10_000_000) -> bool:
    """Whether some linear sum-rank isometry maps one code onto the other.

    A matching parity-check block subspace set is a sufficient fast path
    (build the block permutation directly); otherwise the isometry specs are
    searched exhaustively, which is only feasible at desk scale.  The number
    of candidate specs after canonical pruning (for m = 1 the scalars fold
    into the matrices, in general a global scalar is normalized away) must
    not exceed the budget.
    """
    ctx = code_c.ctx
    if ctx is not code_d.ctx or code_c.partition != code_d.partition:
        return False
    if code_c.dimension != code_d.dimension:
        return False
    gen_rows_c = code_c.generator.rows
    h_d = code_d.parity_check
    if code_c.generator.row_space_canonical() == code_d.generator.row_space_canonical():
        return True
    def blocks_full_rank(code) -> bool:
        h = code.parity_check
        return all(
            h.submatrix_columns(range(a, b)).rank() == b - a
            for a, b in code.partition.block_ranges()
        )

    if blocks_full_rank(code_c) and blocks_full_rank(code_d):
        if parity_block_spaces(code_c) == parity_block_spaces(code_d):
            return True

    partition = code_c.partition
    subl = partition.sublengths
    ell = partition.ell
    q = ctx.q

    def gl_order(n: int) -> int:
        out = 1
        for i in range(n):
            out *= q ** n - q ** i
        return out

    n_sigma = 1
    for _, count in partition.grouped():
        for v in range(2, count + 1):
            n_sigma *= v
    n_beta = 1 if ctx.m == 1 else (ctx.ext.order - 1) ** (ell - 1)
    total = n_sigma * n_beta
    for ni in subl:
        total *= gl_order(ni)
    if total > budget:
        raise BudgetExceeded(f"{total} isometry specs exceed budget {budget}")

    gl_by_size = {ni: _invertible_matrices(ctx, ni) for ni in set(subl)}
    if ctx.m == 1:
        beta_iter = lambda: iter([(1,) * ell])  # noqa: E731 - scalars fold into A_i
    else:
        nonzero = range(1, ctx.ext.order)
        beta_iter = lambda: (  # noqa: E731
            (1,) + rest for rest in itertools.product(nonzero, repeat=ell - 1)
        )

    for sigma in _group_permutations(partition):
        for mats in itertools.product(*(gl_by_size[subl[i]] for i in range(ell))):
            for betas in beta_iter():
                spec = IsometrySpec(sigma=sigma, betas=betas, mats=mats)
                ok = True
                for row in gen_rows_c:
                    image = apply_isometry(
                        spec, SumRankVector(ctx, partition, row)
                    ).entries
                    syndrome = h_d.mul_vector(image)
                    if any(syndrome):
                        ok = False
                        break
                if ok:
                    return True
    return False
