"""Locally repairable codes built from an outer code and per-group locals.

The global code is the outer code times a block-diagonal of local generator
matrices; it keeps the outer dimension while gaining the locals' in-group
erasure repair.  With single-parity locals, one erasure per group is fixed by
one XOR; globally, an erasure pattern is correctable whenever the outer
minimum sum-rank distance exceeds the total rank loss of the restricted
local generators.  With a one-error-correcting outer code that criterion
covers one erasure per group plus any two extra erasures anywhere.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .codes import CodeDescriptor, code_from_json, code_to_json, hamming_code, min_sumrank_distance
from .errors import (
    DimensionError,
    InvariantViolation,
    LocalRepairImpossible,
    PreconditionError,
)
from .galois import Matrix, field_ctx, format_matrix, parse_matrix


# ---------------------------------------------------------------------------
# descriptor
# ---------------------------------------------------------------------------

class LrcDescriptor:
    """Outer code + local generators + the derived global generator.

    Group i occupies the consecutive coordinate range Gamma_i of width N_i;
    its locality is the outer sublength n_i.  The global generator is
    G_outer restricted to each group times that group's local generator, so
    its rank equals the outer dimension.
    """

    def __init__(self, outer: CodeDescriptor, locals_: Iterable[Matrix]) -> None:
        locals_ = tuple(locals_)
        subl = outer.partition.sublengths
        if len(locals_) != len(subl):
            raise PreconditionError("one local generator per outer block required")
        for a, ni in zip(locals_, subl):
            if a.field is not outer.ctx.base:
                raise PreconditionError("local generators must live over GF(q)")
            if a.nrows != ni:
                raise PreconditionError("local generator must have n_i rows")
            if a.ncols < ni:
                raise PreconditionError("local code length must be >= its dimension")
            if a.rank() != ni:
                raise PreconditionError("local generator must have full row rank")
        self.outer = outer
        self.locals = locals_
        self.ctx = outer.ctx
        self.localities = subl
        widths = tuple(a.ncols for a in locals_)
        self.group_widths = widths
        ranges = []
        start = 0
        for w in widths:
            ranges.append((start, start + w))
            start += w
        self.group_ranges = tuple(ranges)
        self.total_length = start
        self.dimension = outer.dimension
        self.global_generator = self._build_global_generator()
        if self.global_generator.rank() != outer.generator.rank():
            raise InvariantViolation("global generator lost rank")
        self._outer_distance: Optional[int] = None

    def _build_global_generator(self) -> Matrix:
        ext = self.ctx.ext
        out_rows = []
        for row in self.outer.generator.rows:
            new_row: list[int] = []
            for (a, b), local in zip(self.outer.partition.block_ranges(), self.locals):
                block = row[a:b]
                # row-vector times local generator, with GF(q) entries embedded
                acc = [0] * local.ncols
                for x, lrow in zip(block, local.rows):
                    if x == 0:
                        continue
                    for j, e in enumerate(lrow):
                        if e:
                            acc[j] = ext.add(acc[j], ext.mul(x, self.ctx.embed(e)))
                new_row.extend(acc)
            out_rows.append(new_row)
        return Matrix(ext, out_rows)

    def outer_distance(self) -> int:
        if self._outer_distance is None:
            d = min_sumrank_distance(self.outer)
            if d is None:
                raise PreconditionError("outer code has dimension zero")
            self._outer_distance = d
        return self._outer_distance

    def group_of(self, coordinate: int) -> int:
        for i, (a, b) in enumerate(self.group_ranges):
            if a <= coordinate < b:
                return i
        raise DimensionError(f"coordinate {coordinate} outside [0, {self.total_length})")

    def encode(self, message: Sequence[int]) -> tuple[int, ...]:
        if len(message) != self.dimension:
            raise DimensionError("message length must equal the dimension")
        return self.global_generator.rmul_vector(message)

    def __repr__(self) -> str:
        return (
            f"LrcDescriptor(q={self.ctx.q}, m={self.ctx.m}, M={self.total_length}, "
            f"k={self.dimension}, groups={len(self.locals)})"
        )


def single_parity_local(q: int, ni: int) -> Matrix:
    """The [n_i + 1, n_i] generator (I | all-ones): one XOR-style parity."""
    field = field_ctx(q, 1).base
    rows = [[1 if j == i else 0 for j in range(ni)] + [1] for i in range(ni)]
    return Matrix(field, rows)


def build_lrc(outer: CodeDescriptor, locals_: Iterable[Matrix]) -> LrcDescriptor:
    return LrcDescriptor(outer, locals_)


def hamming_lrc(q: int, big_n: int, r: int) -> LrcDescriptor:
    """The construction with a proper Hamming outer code and single-parity
    locals: locality N, l = (q^r-1)/(q^N-1) groups, M = (N+1) l, k = N l - r."""
    outer = hamming_code(q, big_n, r)
    locals_ = [single_parity_local(q, ni) for ni in outer.partition.sublengths]
    return LrcDescriptor(outer, locals_)


# ---------------------------------------------------------------------------
# erasure patterns
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ErasurePattern:
    """An erased coordinate set with its per-group split."""

    erased: frozenset[int]
    per_group: tuple[frozenset[int], ...]

    @classmethod
    def for_lrc(cls, lrc: LrcDescriptor, erased: Iterable[int]) -> "ErasurePattern":
        erased = frozenset(int(i) for i in erased)
        for i in erased:
            if not 0 <= i < lrc.total_length:
                raise DimensionError(f"erased index {i} outside the code length")
        per_group = tuple(
            frozenset(i for i in erased if a <= i < b) for a, b in lrc.group_ranges
        )
        return cls(erased=erased, per_group=per_group)


def _local_parity_checks(local: Matrix) -> Matrix:
    return local.kernel_basis()


# ---------------------------------------------------------------------------
# local repair
# ---------------------------------------------------------------------------

def local_repair(
    lrc: LrcDescriptor,
    word: Sequence[Optional[int]],
    erased: Iterable[int],
    group: Optional[int] = None,
) -> list[Optional[int]]:
    """Repair the erasures of one group using only that group's symbols.

    The group's erased coordinates are re-solved from the local code's
    parity checks restricted to the group; for the default single-parity
    local this is the sum (XOR for q = 2) of the surviving group symbols.
    Raises LocalRepairImpossible when the group's erasure count reaches the
    local minimum distance and the solve is not unique.
    """
    pattern = ErasurePattern.for_lrc(lrc, erased)
    if group is None:
        hit = [i for i, e in enumerate(pattern.per_group) if e]
        if len(hit) != 1:
            raise PreconditionError("specify the group when several have erasures")
        group = hit[0]
    erased_here = sorted(pattern.per_group[group])
    if not erased_here:
        return list(word)
    a, b = lrc.group_ranges[group]
    local = lrc.locals[group]
    checks = _local_parity_checks(local)
    known_cols = [i - a for i in range(a, b) if i not in pattern.per_group[group]]
    erased_cols = [i - a for i in erased_here]
    ext = lrc.ctx.ext
    # checks @ group_symbols = 0  =>  solve for the erased columns
    lhs = Matrix(
        lrc.ctx.ext,
        [
            [lrc.ctx.embed(checks.entry(i, j)) for j in erased_cols]
            for i in range(checks.nrows)
        ],
    )
    rhs = []
    for i in range(checks.nrows):
        acc = 0
        for j in known_cols:
            coeff = checks.entry(i, j)
            sym = word[a + j]
            if coeff and sym:
                acc = ext.add(acc, ext.mul(lrc.ctx.embed(coeff), sym))
        rhs.append(ext.neg(acc))
    if lhs.rank() < len(erased_cols):
        raise LocalRepairImpossible(
            f"{len(erased_here)} erasures reach the local code's erasure limit"
        )
    solution = lhs.solve(rhs)
    if solution is None:
        raise LocalRepairImpossible("local parity checks are inconsistent")
    repaired = list(word)
    for col, value in zip(erased_cols, solution):
        repaired[a + col] = value
    return repaired


# ---------------------------------------------------------------------------
# global criterion and decoding
# ---------------------------------------------------------------------------

def restricted_rank_sum(lrc: LrcDescriptor, pattern: ErasurePattern) -> int:
    total = 0
    for (a, _b), local, erased_here in zip(lrc.group_ranges, lrc.locals, pattern.per_group):
        keep = [j for j in range(local.ncols) if (a + j) not in erased_here]
        total += local.submatrix_columns(keep).rank() if keep else 0
    return total


def global_correctable(lrc: LrcDescriptor, erased: Iterable[int]) -> bool:
    """Sufficient criterion: outer distance > n - sum of restricted ranks."""
    pattern = ErasurePattern.for_lrc(lrc, erased)
    n = lrc.outer.n
    return lrc.outer_distance() > n - restricted_rank_sum(lrc, pattern)


class ErasureDecoder:
    """Prepared solver for one erasure pattern, reusable across words.

    Picks an information set among the surviving coordinates once; each
    decode is then a small matrix product.  Words must carry their original
    values outside the pattern (erased entries are ignored).
    """

    def __init__(self, lrc: LrcDescriptor, erased: Iterable[int]) -> None:
        self.lrc = lrc
        self.pattern = ErasurePattern.for_lrc(lrc, erased)
        if not global_correctable(lrc, self.pattern.erased):
            raise PreconditionError("pattern fails the global correctability criterion")
        keep = [i for i in range(lrc.total_length) if i not in self.pattern.erased]
        g = lrc.global_generator
        restricted = g.submatrix_columns(keep)
        if restricted.rank() != lrc.dimension:
            raise InvariantViolation(
                "criterion passed but the restricted generator lost rank"
            )
        # greedy information set: first independent columns of the restriction
        _red, pivots = restricted.rref()
        info = [keep[j] for j in pivots]
        inv = g.submatrix_columns(info).inverse()
        if inv is None:  # pragma: no cover - pivots guarantee invertibility
            raise InvariantViolation("information-set matrix is singular")
        self.info_set = tuple(info)
        self._solver = inv
        self._use_bits = lrc.ctx.q == 2 and lrc.ctx.m == 1
        if self._use_bits:
            k = lrc.dimension
            self._solver_cols = [
                sum(inv.entry(i, j) << i for i in range(k)) for j in range(k)
            ]

    def message_of(self, word: Sequence[Optional[int]]) -> tuple[int, ...]:
        picked = [word[i] for i in self.info_set]
        if any(v is None for v in picked):
            raise InvariantViolation("information set hit an erased coordinate")
        if self._use_bits:
            packed = 0
            for pos, v in enumerate(picked):
                if v:
                    packed |= 1 << pos
            return tuple(
                (packed & col).bit_count() & 1 for col in self._solver_cols
            )
        return self._solver.rmul_vector(picked)  # type: ignore[arg-type]

    def decode(self, word: Sequence[Optional[int]]) -> tuple[int, ...]:
        """The unique codeword agreeing with the word off the pattern."""
        message = self.message_of(word)
        full = self.lrc.encode(message)
        for i, v in enumerate(word):
            if i not in self.pattern.erased and v != full[i]:
                raise InvariantViolation("survivors disagree with the decoded codeword")
        return full


def global_erasure_decode(
    lrc: LrcDescriptor, word: Sequence[Optional[int]], erased: Iterable[int]
) -> tuple[int, ...]:
    """One-shot erasure decode; see ErasureDecoder for the batched variant."""
    return ErasureDecoder(lrc, erased).decode(word)


def repair_then_decode(
    lrc: LrcDescriptor, word: Sequence[Optional[int]], erased: Iterable[int]
) -> tuple[int, ...]:
    """Local-first pipeline: fix every single-erasure group locally, then run
    the global solve on whatever remains.  Agrees with the direct global
    decode wherever both apply."""
    pattern = ErasurePattern.for_lrc(lrc, erased)
    word = list(word)
    remaining = set(pattern.erased)
    for group, erased_here in enumerate(pattern.per_group):
        if len(erased_here) == 1:
            word = local_repair(lrc, word, erased_here, group=group)
            remaining -= erased_here
    if not remaining:
        return tuple(word)  # type: ignore[arg-type]
    return global_erasure_decode(lrc, word, remaining)


# ---------------------------------------------------------------------------
# parameter table
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TableRow:
    locality: int
    local_groups: int
    global_parities: int
    dimension: int
    length: int

    def as_tuple(self) -> tuple[int, int, int, int, int]:
        return (
            self.locality,
            self.local_groups,
            self.global_parities,
            self.dimension,
            self.length,
        )


TABLE_CSV_HEADER = "N,local_groups,global_parities,dimension,length"

# Published reference values (q = 2) this construction is compared against.
# The first column disagrees with the defining formulas: (N=2, r=4) gives
# l = 5 and M = 15, not 4 and 12 (its k = 6 only matches l = 5).
PUBLISHED_TABLE_Q2: tuple[TableRow, ...] = (
    TableRow(2, 4, 4, 6, 12),
    TableRow(2, 21, 6, 36, 63),
    TableRow(3, 9, 6, 21, 36),
    TableRow(3, 73, 9, 210, 292),
    TableRow(4, 17, 8, 60, 85),
    TableRow(4, 273, 12, 1080, 1365),
    TableRow(5, 33, 10, 155, 198),
    TableRow(5, 1057, 15, 5270, 6342),
)

PUBLISHED_PAIRS_Q2: tuple[tuple[int, int], ...] = tuple(
    (row.locality, row.global_parities) for row in PUBLISHED_TABLE_Q2
)


def lrc_parameter_row(q: int, big_n: int, r: int) -> TableRow:
    """Formula row: l = (q^r-1)/(q^N-1), M = (N+1) l, k = N l - r."""
    if big_n < 1 or r % big_n != 0:
        raise PreconditionError("N must divide r")
    ell = (q ** r - 1) // (q ** big_n - 1)
    return TableRow(
        locality=big_n,
        local_groups=ell,
        global_parities=r,
        dimension=big_n * ell - r,
        length=(big_n + 1) * ell,
    )


def lrc_parameter_table(q: int, pairs: Sequence[tuple[int, int]]) -> list[TableRow]:
    return [lrc_parameter_row(q, big_n, r) for big_n, r in pairs]


@dataclass(frozen=True)
class TableComparison:
    computed: TableRow
    published: TableRow
    matches: bool
    mismatched_fields: tuple[str, ...]


def compare_with_published(q: int = 2) -> list[TableComparison]:
    """Computed vs published rows; mismatches are flagged, never adopted."""
    if q != 2:
        raise PreconditionError("published reference values are for q = 2")
    out = []
    for published in PUBLISHED_TABLE_Q2:
        computed = lrc_parameter_row(q, published.locality, published.global_parities)
        mismatched = tuple(
            name
            for name in ("locality", "local_groups", "global_parities", "dimension", "length")
            if getattr(computed, name) != getattr(published, name)
        )
        out.append(
            TableComparison(
                computed=computed,
                published=published,
                matches=not mismatched,
                mismatched_fields=mismatched,
            )
        )
    return out


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def lrc_to_json(lrc: LrcDescriptor) -> str:
    ctx_base = field_ctx(lrc.ctx.q, 1)
    return json.dumps(
        {
            "q": lrc.ctx.q,
            "m": lrc.ctx.m,
            "outer": json.loads(code_to_json(lrc.outer)),
            "locals": [format_matrix(a, ctx_base) for a in lrc.locals],
            "M": lrc.total_length,
            "k": lrc.dimension,
        },
        sort_keys=True,
    )


def lrc_from_json(text: str) -> LrcDescriptor:
    data = json.loads(text)
    outer = code_from_json(json.dumps(data["outer"]))
    locals_ = []
    for block in data["locals"]:
        mat, ctx = parse_matrix(block)
        if ctx.q != data["q"] or ctx.m != 1:
            raise PreconditionError("local generators must be over GF(q)")
        locals_.append(mat)
    lrc = LrcDescriptor(outer, locals_)
    if lrc.total_length != data["M"] or lrc.dimension != data["k"]:
        raise PreconditionError("stored M/k disagree with the matrices")
    return lrc
