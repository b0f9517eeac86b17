"""Single-error syndrome decoding for m = 1 codes of sum-rank distance >= 3.

A weight-<=1 error is supported on one block, so its syndrome H y^T lands in
the column space of exactly one parity-check block (the blocks span a partial
spread and meet only in zero).  Decoding is therefore: compute the syndrome,
find the unique block whose linear system is consistent, subtract the
recovered block error.  Per-block eliminations are precomputed once, giving
O(nr + l r^2) base-field operations per decode against the O(nr + l r^3)
contract; every decode reports its exact operation count.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

from .codes import CodeDescriptor, check_distance3
from .errors import (
    BudgetExceeded,
    DecodingFailure,
    DimensionError,
    InvariantViolation,
    PreconditionError,
)

SYNDROME_TABLE_BUDGET = 1_000_000


@dataclass(frozen=True)
class DecodeResult:
    """Outcome of one decode: the codeword, the removed block error (if
    any), the syndrome, and the base-field operation count."""

    codeword: tuple[int, ...]
    error_location: Optional[int]
    error_vector: Optional[tuple[int, ...]]
    syndrome: tuple[int, ...]
    ops: int


class SyndromeDecoder:
    """Reusable decoder with per-block eliminations cached up front.

    For each block H_j (full column rank n_j) an invertible row transform
    T_j with T_j H_j = [I; 0] is prepared; then H_j a = s is consistent
    exactly when the tail of T_j s vanishes, and the head is the solution.
    """

    def __init__(self, code: CodeDescriptor, validate: bool = True) -> None:
        if code.ctx.m != 1:
            raise PreconditionError("syndrome decoding is defined for m = 1")
        if validate and not check_distance3(code):
            raise PreconditionError("code does not have sum-rank distance >= 3")
        self.code = code
        self.field = code.ctx.base
        self.h_rows = code.parity_check.rows
        self.r = code.redundancy
        self.block_ranges = code.partition.block_ranges()
        self._transforms: list[tuple[tuple[tuple[int, ...], ...], int]] = []
        for block in code.parity_blocks():
            self._transforms.append(self._eliminate(block))

    def _eliminate(self, block) -> tuple[tuple[tuple[int, ...], ...], int]:
        """Row transform T with T @ block = [I; 0], plus the block width."""
        f = self.field
        r = self.r
        ni = block.ncols
        rows = [list(block.rows[i]) + [1 if j == i else 0 for j in range(r)] for i in range(r)]
        pr = 0
        for col in range(ni):
            pivot = next((i for i in range(pr, r) if rows[i][col]), None)
            if pivot is None:
                raise InvariantViolation("parity block is column rank deficient")
            rows[pr], rows[pivot] = rows[pivot], rows[pr]
            inv = f.inv(rows[pr][col])
            if inv != 1:
                rows[pr] = [f.mul(inv, v) for v in rows[pr]]
            prow = rows[pr]
            for i in range(r):
                if i != pr and rows[i][col]:
                    c = rows[i][col]
                    ri = rows[i]
                    for j in range(ni + r):
                        if prow[j]:
                            ri[j] = f.sub(ri[j], f.mul(c, prow[j]))
            pr += 1
        transform = tuple(tuple(row[ni:]) for row in rows)
        return transform, ni

    # -- decoding -----------------------------------------------------------

    def _syndrome(self, received: Sequence[int]) -> tuple[tuple[int, ...], int]:
        f = self.field
        ops = 0
        syndrome = []
        for row in self.h_rows:
            acc = 0
            for a, y in zip(row, received):
                if a and y:
                    acc = f.add(acc, f.mul(a, y))
                    ops += 2
            syndrome.append(acc)
        return tuple(syndrome), ops

    def decode(self, received: Sequence[int]) -> DecodeResult:
        """Correct one sum-rank error; raise DecodingFailure when no block
        admits a solution (a detected weight->=2 error)."""
        if len(received) != self.code.n:
            raise DimensionError("received word length mismatch")
        f = self.field
        syndrome, ops = self._syndrome(received)
        if not any(syndrome):
            return DecodeResult(
                codeword=tuple(received),
                error_location=None,
                error_vector=None,
                syndrome=syndrome,
                ops=ops,
            )
        found: Optional[tuple[int, tuple[int, ...]]] = None
        for index, (transform, ni) in enumerate(self._transforms):
            reduced = []
            consistent = True
            for i, trow in enumerate(transform):
                acc = 0
                for t, s in zip(trow, syndrome):
                    if t and s:
                        acc = f.add(acc, f.mul(t, s))
                        ops += 2
                if i >= ni and acc:
                    consistent = False
                    break
                reduced.append(acc)
            if not consistent:
                continue
            solution = tuple(reduced[:ni])
            if found is not None:
                raise InvariantViolation(
                    "two blocks admit a solution; parity blocks do not form a spread"
                )
            found = (index, solution)
        if found is None:
            raise DecodingFailure("no single-block error matches the syndrome")
        index, solution = found
        start, stop = self.block_ranges[index]
        corrected = list(received)
        for offset, a in enumerate(solution):
            if a:
                corrected[start + offset] = f.sub(corrected[start + offset], a)
                ops += 1
        return DecodeResult(
            codeword=tuple(corrected),
            error_location=index,
            error_vector=solution,
            syndrome=syndrome,
            ops=ops,
        )


def decoder_for(code: CodeDescriptor) -> SyndromeDecoder:
    """The code's cached decoder (built on first use)."""
    if code._decoder is None:
        code._decoder = SyndromeDecoder(code)
    return code._decoder


def decode(code: CodeDescriptor, received: Sequence[int]) -> DecodeResult:
    return decoder_for(code).decode(received)


def ops_budget(code: CodeDescriptor) -> int:
    """The contracted per-decode operation count nr + l r^3."""
    n = code.n
    r = code.redundancy
    return n * r + code.partition.ell * r ** 3


# ---------------------------------------------------------------------------
# precomputed lookup table
# ---------------------------------------------------------------------------

def syndrome_table(
    code: CodeDescriptor, budget: int = SYNDROME_TABLE_BUDGET
) -> dict[tuple[int, ...], tuple[Optional[int], tuple[int, ...]]]:
    """Map from syndrome to the weight-<=1 coset leader (block, pattern).

    The zero syndrome maps to (None, zero block).  Table size equals the
    radius-1 ball size; for perfect codes the domain is all of GF(q)^r.
    """
    if code.ctx.m != 1:
        raise PreconditionError("syndrome decoding is defined for m = 1")
    q = code.ctx.q
    if q ** code.redundancy > budget:
        raise BudgetExceeded(
            f"{q ** code.redundancy} syndromes exceed budget {budget}"
        )
    table: dict[tuple[int, ...], tuple[Optional[int], tuple[int, ...]]] = {}
    table[(0,) * code.redundancy] = (None, ())
    for index, (block, ni) in enumerate(
        zip(code.parity_blocks(), code.partition.sublengths)
    ):
        for coeffs in itertools.product(range(q), repeat=ni):
            if not any(coeffs):
                continue
            syndrome = block.mul_vector(coeffs)
            if syndrome in table:
                raise InvariantViolation(
                    "syndrome collision; parity blocks do not form a spread"
                )
            table[syndrome] = (index, coeffs)
    return table


def decode_with_table(
    code: CodeDescriptor,
    received: Sequence[int],
    table: dict[tuple[int, ...], tuple[Optional[int], tuple[int, ...]]],
) -> DecodeResult:
    """Table-lookup variant of decode; agrees with the solving decoder on
    every syndrome in the table's domain."""
    dec = decoder_for(code)
    syndrome, ops = dec._syndrome(received)
    entry = table.get(syndrome)
    if entry is None:
        raise DecodingFailure("syndrome outside the weight-<=1 leader table")
    index, coeffs = entry
    if index is None:
        return DecodeResult(
            codeword=tuple(received),
            error_location=None,
            error_vector=None,
            syndrome=syndrome,
            ops=ops,
        )
    f = code.ctx.base
    start, _stop = dec.block_ranges[index]
    corrected = list(received)
    for offset, a in enumerate(coeffs):
        if a:
            corrected[start + offset] = f.sub(corrected[start + offset], a)
            ops += 1
    return DecodeResult(
        codeword=tuple(corrected),
        error_location=index,
        error_vector=tuple(coeffs),
        syndrome=syndrome,
        ops=ops,
    )
