"""Multishot matrix-multiplicative channel with sum-rank errors and erasures.

Each shot i multiplies the transmitted m x n_i block on the right by a
transfer matrix A_i and adds an error matrix E_i.  The error count is the
total rank of the E_i; the erasure count is the total rank deficit of the
A_i.  A code of minimum sum-rank distance d corrects t errors plus rho
erasures coherently (transfer matrices known to the receiver) exactly when
d > 2t + rho; the decoder implemented here covers the square-invertible
transfer case with t <= 1 via syndrome decoding, which is the regime the
one-error-correcting codes of this package are built for.

All randomness is drawn from ``random.Random`` (Mersenne Twister) seeded
explicitly, so every realization and simulation is reproducible bit for bit.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional, Sequence

from .codes import CodeDescriptor
from .errors import (
    DecodingFailure,
    DimensionError,
    PartitionError,
    PreconditionError,
)
from .galois import FieldCtx, Matrix, matrix_rep, vector_from_matrix
from .metric import LengthPartition, partition_of
from .syndrome import decoder_for


@dataclass(frozen=True)
class ChannelSpec:
    """Shape and budget parameters of the channel.

    One shared row count m; per-shot input widths n_i and output widths N_i;
    at most ``max_errors`` total error rank and ``max_erasures`` total
    transfer rank deficit; a seed fixing the realization stream.
    """

    q: int
    rows: int
    in_cols: tuple[int, ...]
    out_cols: tuple[int, ...]
    max_errors: int
    max_erasures: int
    seed: int

    def __post_init__(self) -> None:
        if self.rows < 1 or not self.in_cols or len(self.in_cols) != len(self.out_cols):
            raise PreconditionError("need matching, nonempty shot dimension lists")
        if any(v < 1 for v in self.in_cols) or any(v < 1 for v in self.out_cols):
            raise PreconditionError("all shot dimensions must be >= 1")
        if self.max_errors < 0 or self.max_erasures < 0:
            raise PreconditionError("budgets must be >= 0")

    @property
    def shots(self) -> int:
        return len(self.in_cols)


@dataclass(frozen=True)
class ChannelRealization:
    """One draw of transfer and error matrices honoring the spec budgets."""

    spec: ChannelSpec
    transfers: tuple[Matrix, ...]
    errors: tuple[Matrix, ...]

    def error_count(self) -> int:
        return sum(e.rank() for e in self.errors)

    def erasure_count(self) -> int:
        return sum(n - a.rank() for n, a in zip(self.spec.in_cols, self.transfers))


def _bounded_compositions(total: int, caps: Sequence[int], lows: Sequence[int]) -> list[tuple[int, ...]]:
    """All tuples with lows[i] <= t_i <= caps[i] summing to total."""
    out: list[tuple[int, ...]] = []

    def rec(i: int, left: int, acc: list[int]) -> None:
        if i == len(caps):
            if left == 0:
                out.append(tuple(acc))
            return
        rest_hi = sum(caps[i + 1 :])
        rest_lo = sum(lows[i + 1 :])
        for v in range(lows[i], caps[i] + 1):
            if left - v < rest_lo or left - v > rest_hi:
                continue
            acc.append(v)
            rec(i + 1, left - v, acc)
            acc.pop()

    rec(0, total, [])
    return out


def _random_full_rank(field, rows: int, cols: int, rng: random.Random) -> Matrix:
    """Uniform matrix of full rank min(rows, cols), by rejection."""
    q = field.order
    target = min(rows, cols)
    while True:
        cand = Matrix(field, [[rng.randrange(q) for _ in range(cols)] for _ in range(rows)])
        if cand.rank() == target:
            return cand


def _random_matrix_of_rank(field, rows: int, cols: int, rank: int, rng: random.Random) -> Matrix:
    """Uniform matrix of exactly the given rank (U V with full-rank factors)."""
    if rank == 0:
        return Matrix.zeros(field, rows, cols)
    left = _random_full_rank(field, rows, rank, rng)
    right = _random_full_rank(field, rank, cols, rng)
    return left @ right


def sample_realization(spec: ChannelSpec) -> ChannelRealization:
    """Deterministic draw for the spec's seed.

    The error budget is spent exactly: a rank allocation summing to
    max_errors is chosen uniformly among the feasible ones, then each E_i is
    uniform of its allocated rank.  Transfers likewise get a deficit
    allocation summing to max_erasures, each A_i uniform of the resulting
    rank.
    """
    rng = random.Random(spec.seed)
    from .galois import base_field

    field = base_field(spec.q)
    m = spec.rows
    err_caps = [min(m, nc) for nc in spec.out_cols]
    if spec.max_errors > sum(err_caps):
        raise PreconditionError(
            f"error budget {spec.max_errors} exceeds total capacity {sum(err_caps)}"
        )
    def_lows = [max(0, n - big) for n, big in zip(spec.in_cols, spec.out_cols)]
    def_caps = list(spec.in_cols)
    if spec.max_erasures > sum(def_caps) or spec.max_erasures < sum(def_lows):
        raise PreconditionError("erasure budget infeasible for the shot shapes")

    err_allocs = _bounded_compositions(spec.max_errors, err_caps, [0] * spec.shots)
    err_alloc = err_allocs[rng.randrange(len(err_allocs))]
    def_allocs = _bounded_compositions(spec.max_erasures, def_caps, def_lows)
    def_alloc = def_allocs[rng.randrange(len(def_allocs))]

    transfers = []
    for n, big, deficit in zip(spec.in_cols, spec.out_cols, def_alloc):
        transfers.append(_random_matrix_of_rank(field, n, big, n - deficit, rng))
    errors = []
    for big, k in zip(spec.out_cols, err_alloc):
        errors.append(_random_matrix_of_rank(field, m, big, k, rng))
    return ChannelRealization(spec=spec, transfers=tuple(transfers), errors=tuple(errors))


# ---------------------------------------------------------------------------
# transmission
# ---------------------------------------------------------------------------

def transmit(
    message: Sequence[int],
    code: CodeDescriptor,
    realization: ChannelRealization,
) -> tuple[tuple[int, ...], LengthPartition]:
    """Encode, push each block through its shot, return the received vector
    (over GF(q^m), partitioned by the output widths)."""
    spec = realization.spec
    ctx = code.ctx
    if spec.q != ctx.q or spec.rows != ctx.m:
        raise PartitionError("channel field/rows disagree with the code context")
    if tuple(code.partition.sublengths) != spec.in_cols:
        raise PartitionError("channel input widths disagree with the code partition")
    codeword = code.encode(message)
    received: list[int] = []
    for (a, b), transfer, error in zip(
        code.partition.block_ranges(), realization.transfers, realization.errors
    ):
        block = codeword[a:b]
        x = matrix_rep(block, ctx)
        y = (x @ transfer).add(error)
        received.extend(vector_from_matrix(y, ctx))
    return tuple(received), LengthPartition(spec.out_cols)


def coherent_decode(
    received: Sequence[int],
    code: CodeDescriptor,
    realization: ChannelRealization,
) -> tuple[int, ...]:
    """Undo the (known, square invertible) transfers, then syndrome-decode.

    Requires m = 1, distance >= 3, zero erasure budget; recovers the message
    exactly whenever the realized total error rank is at most one.
    """
    spec = realization.spec
    ctx = code.ctx
    if ctx.m != 1:
        raise PreconditionError("coherent decoding implemented for m = 1")
    if spec.in_cols != spec.out_cols:
        raise PreconditionError("coherent decoding needs square transfers")
    inverses = []
    for transfer in realization.transfers:
        inv = transfer.inverse()
        if inv is None:
            raise PreconditionError("transfer matrix is singular (erasure regime)")
        inverses.append(inv)
    if len(received) != sum(spec.out_cols):
        raise DimensionError("received length disagrees with the channel output")
    equalized: list[int] = []
    start = 0
    for width, inv in zip(spec.out_cols, inverses):
        block = received[start : start + width]
        equalized.extend(inv.rmul_vector(block))
        start += width
    result = decoder_for(code).decode(equalized)
    return code.unencode(result.codeword)


# ---------------------------------------------------------------------------
# seeded Monte-Carlo driver
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SimulationReport:
    trials: int
    successes: int
    failures: int
    miscorrections: int
    mean_decode_ops: float
    t: int
    rho: int
    seed: int

    def as_dict(self) -> dict:
        return {
            "trials": self.trials,
            "successes": self.successes,
            "failures": self.failures,
            "miscorrections": self.miscorrections,
            "mean_decode_ops": self.mean_decode_ops,
            "t": self.t,
            "rho": self.rho,
            "seed": self.seed,
        }


def simulate(
    code: CodeDescriptor,
    trials: int,
    t: int = 1,
    rho: int = 0,
    seed: int = 0,
    out_cols: Optional[Sequence[int]] = None,
) -> SimulationReport:
    """Run seeded transmission/decode trials and tally the outcomes.

    Each trial draws an independent realization (from a per-trial seed
    derived off the master seed) and a uniform message.  ``failures`` counts
    detected-uncorrectable decodes, ``miscorrections`` silent wrong ones.
    """
    if trials < 1:
        raise PreconditionError("need at least one trial")
    ctx = code.ctx
    master = random.Random(seed)
    in_cols = tuple(code.partition.sublengths)
    out_cols = tuple(out_cols) if out_cols is not None else in_cols
    successes = failures = miscorrections = 0
    total_ops = 0
    decoder = decoder_for(code)
    order = ctx.ext.order
    for _ in range(trials):
        trial_seed = master.getrandbits(64)
        spec = ChannelSpec(
            q=ctx.q,
            rows=ctx.m,
            in_cols=in_cols,
            out_cols=out_cols,
            max_errors=t,
            max_erasures=rho,
            seed=trial_seed,
        )
        realization = sample_realization(spec)
        rng = random.Random(trial_seed ^ 0x5EED)
        message = tuple(rng.randrange(order) for _ in range(code.dimension))
        received, _out_partition = transmit(message, code, realization)
        try:
            equal_start = 0
            equalized: list[int] = []
            for width, transfer in zip(out_cols, realization.transfers):
                inv = transfer.inverse()
                if inv is None:
                    raise PreconditionError("transfer matrix is singular")
                block = received[equal_start : equal_start + width]
                equalized.extend(inv.rmul_vector(block))
                equal_start += width
            result = decoder.decode(equalized)
            total_ops += result.ops
            decoded = code.unencode(result.codeword)
        except DecodingFailure:
            failures += 1
            continue
        if decoded == message:
            successes += 1
        else:
            miscorrections += 1
    return SimulationReport(
        trials=trials,
        successes=successes,
        failures=failures,
        miscorrections=miscorrections,
        mean_decode_ops=total_ops / trials,
        t=t,
        rho=rho,
        seed=seed,
    )
