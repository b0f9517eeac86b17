"""Sum-rank Hamming and simplex codes: construction, distances, bounds.

Hamming codes here are the longest one-sum-rank-error-correcting codes for a
fixed redundancy; for one matrix row (m = 1) they are exactly the codes whose
parity-check blocks span a maximal-size partial spread, and in that case they
are perfect.  Simplex codes are their duals.  This module builds both from
spreads, measures minimum sum-rank distance exactly at desk scale, checks the
blockwise independence conditions equivalent to distance >= 3, and evaluates
every published parameter bound.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence

from .errors import (
    BudgetExceeded,
    DimensionError,
    InvariantViolation,
    PreconditionError,
)
from .galois import FieldCtx, Matrix, field_ctx, format_matrix, parse_matrix
from .metric import (
    LengthPartition,
    SumRankVector,
    ball_size,
    partition_of,
    weight_of_entries,
)
from .spreads import SpreadFamily, desarguesian_spread

DISTANCE_BUDGET = 10_000_000

CODE_KINDS = ("hamming", "simplex", "outer", "global", "custom")


class CodeDescriptor:
    """A linear code over GF(q^m) with partition metadata.

    Holds the parity-check matrix H (r x n over GF(q^m)); the generator is
    derived lazily as the canonical kernel basis unless supplied.  Instances
    are immutable after construction.
    """

    def __init__(
        self,
        ctx: FieldCtx,
        partition,
        parity_check: Matrix,
        kind: str = "custom",
        generator: Optional[Matrix] = None,
    ) -> None:
        if kind not in CODE_KINDS:
            raise PreconditionError(f"unknown code kind {kind!r}")
        partition = partition_of(partition)
        if parity_check.field is not ctx.ext:
            raise PreconditionError("parity check must live over GF(q^m) of ctx")
        if parity_check.ncols != partition.n:
            raise DimensionError("parity check width disagrees with partition")
        self.ctx = ctx
        self.partition = partition
        self.parity_check = parity_check
        self.kind = kind
        self._redundancy = parity_check.rank()
        if self._redundancy != parity_check.nrows:
            raise PreconditionError("parity check rows must be independent")
        if generator is not None:
            if generator.ncols != partition.n:
                raise DimensionError("generator width disagrees with partition")
            if generator.rank() != generator.nrows:
                raise PreconditionError("generator rows must be independent")
            if generator.nrows != partition.n - self._redundancy:
                raise DimensionError("generator and parity check dimensions clash")
            for row in generator.rows:
                if any(parity_check.mul_vector(row)):
                    raise InvariantViolation("generator is not orthogonal to parity check")
        self._generator = generator
        self._decoder = None  # lazily attached by syndrome.SyndromeDecoder

    # -- derived parameters ---------------------------------------------------

    @property
    def n(self) -> int:
        return self.partition.n

    @property
    def redundancy(self) -> int:
        return self._redundancy

    @property
    def dimension(self) -> int:
        return self.n - self._redundancy

    @property
    def generator(self) -> Matrix:
        if self._generator is None:
            self._generator = self.parity_check.kernel_basis()
        return self._generator

    def parity_blocks(self) -> list[Matrix]:
        return [
            self.parity_check.submatrix_columns(range(a, b))
            for a, b in self.partition.block_ranges()
        ]

    # -- encoding ----------------------------------------------------------------

    def encode(self, message: Sequence[int]) -> tuple[int, ...]:
        if len(message) != self.dimension:
            raise DimensionError("message length must equal the code dimension")
        return self.generator.rmul_vector(message)

    def unencode(self, codeword: Sequence[int]) -> tuple[int, ...]:
        """Recover the message from a codeword (inverse of encode)."""
        sol = self.generator.transpose().solve(codeword)
        if sol is None:
            raise PreconditionError("vector is not a codeword")
        return sol

    def codewords(self) -> Iterator[tuple[int, ...]]:
        """All codewords, by enumerating the message space."""
        order = self.ctx.ext.order
        for message in itertools.product(range(order), repeat=self.dimension):
            yield self.encode(message)

    def contains(self, word: Sequence[int]) -> bool:
        return not any(self.parity_check.mul_vector(word))

    def vector(self, entries: Sequence[int]) -> SumRankVector:
        return SumRankVector(self.ctx, self.partition, entries)

    def __repr__(self) -> str:
        return (
            f"CodeDescriptor(kind={self.kind!r}, q={self.ctx.q}, m={self.ctx.m}, "
            f"n={self.n}, k={self.dimension}, r={self.redundancy})"
        )


# ---------------------------------------------------------------------------
# constructions
# ---------------------------------------------------------------------------

def hamming_from_spread(spread: SpreadFamily) -> CodeDescriptor:
    """Parity-check concatenation of the spread members (one row, m = 1)."""
    spread.validate()
    ctx = field_ctx(spread.q, 1)
    rows = [
        tuple(v for member in spread.members for v in member.rows[i])
        for i in range(spread.r)
    ]
    h = Matrix(ctx.base, rows)
    partition = LengthPartition(spread.dims)
    return CodeDescriptor(ctx, partition, h, kind="hamming")


def hamming_code(q: int, big_n: int, r: int) -> CodeDescriptor:
    """Proper sum-rank Hamming code for N | r via the classical spread."""
    return hamming_from_spread(desarguesian_spread(q, big_n, r))


def simplex_from_hamming(code: CodeDescriptor) -> CodeDescriptor:
    """The dual code: generator of the output is the parity check of the input."""
    if code.kind != "hamming":
        raise PreconditionError("input must be a Hamming-kind code")
    return CodeDescriptor(
        code.ctx,
        code.partition,
        parity_check=code.generator,
        kind="simplex",
        generator=code.parity_check,
    )


def simplex_code(q: int, big_n: int, r: int) -> CodeDescriptor:
    return simplex_from_hamming(hamming_code(q, big_n, r))


# ---------------------------------------------------------------------------
# minimum distance (exact, desk scale)
# ---------------------------------------------------------------------------

def min_sumrank_distance(code: CodeDescriptor, budget: int = DISTANCE_BUDGET) -> Optional[int]:
    """Exact minimum sum-rank weight of a nonzero codeword; None if k = 0.

    The budget is in per-entry work units.  Enumerates the q^(mk) codewords
    when q^(mk) * n fits.  Otherwise, for m = 1, searches vectors of
    ascending sum-rank weight (a weight-w vector is supported on w blocks)
    and returns the first weight at which the syndrome vanishes; each
    weight level's candidate count is charged up front, so an infeasible
    call raises BudgetExceeded without doing the work.
    """
    k = code.dimension
    if k == 0:
        return None
    ctx = code.ctx
    size = ctx.ext.order ** k
    if size * code.n <= budget:
        best: Optional[int] = None
        for word in code.codewords():
            if not any(word):
                continue
            w = weight_of_entries(word, code.partition, ctx)
            if best is None or w < best:
                best = w
                if best == 1:
                    break
        return best
    if ctx.m != 1:
        raise BudgetExceeded(
            f"{size} codewords exceed budget {budget} and the ascending-weight "
            "search only supports m = 1"
        )
    return _ascending_weight_distance(code, budget)


def _ascending_weight_distance(code: CodeDescriptor, budget: int) -> int:
    q = code.ctx.q
    partition = code.partition
    h_blocks = code.parity_blocks()
    field = code.ctx.ext
    # per-block syndromes of every nonzero local pattern
    block_syndromes: list[list[tuple[int, ...]]] = []
    for block, ni in zip(h_blocks, partition.sublengths):
        syndromes = []
        for coeffs in itertools.product(range(q), repeat=ni):
            if any(coeffs):
                syndromes.append(block.mul_vector(coeffs))
        block_syndromes.append(syndromes)

    examined = 0
    ell = partition.ell
    max_weight = ell  # m = 1: each block contributes rank at most 1
    per_block = [len(s) for s in block_syndromes]

    def level_count(w: int) -> int:
        # coefficient of z^w in prod_i (1 + c_i z)
        dp = [1] + [0] * w
        for c in per_block:
            for d in range(w, 0, -1):
                dp[d] += c * dp[d - 1]
        return dp[w]

    for w in range(1, max_weight + 1):
        # charge the whole level before starting it, so an over-budget call
        # fails immediately instead of after the work
        examined += level_count(w)
        if examined > budget:
            raise BudgetExceeded(
                f"ascending-weight search needs {examined} > budget {budget}"
            )
        for support in itertools.combinations(range(ell), w):
            pools = [block_syndromes[i] for i in support]
            for combo in itertools.product(*pools):
                acc = combo[0]
                for syn in combo[1:]:
                    acc = tuple(field.add(a, b) for a, b in zip(acc, syn))
                if not any(acc):
                    return w
    raise InvariantViolation("no nonzero codeword found although k > 0")


# ---------------------------------------------------------------------------
# blockwise independence test (distance >= 3)
# ---------------------------------------------------------------------------

def check_distance3(code: CodeDescriptor) -> bool:
    """Both blockwise independence conditions for minimum distance >= 3.

    Condition 1: nonzero combinations from different blocks are never
    proportional over GF(q^m).  Condition 2: within one block, base-field
    independent coefficient pairs give extension-field independent
    syndromes.  For m = 1 this is exactly the partial-spread property of the
    block column spaces, checked by marking nonzero column-space vectors.
    """
    if code.ctx.m == 1:
        return _check_distance3_points(code)
    return _check_distance3_generic(code)


def _check_distance3_points(code: CodeDescriptor) -> bool:
    q = code.ctx.q
    field = code.ctx.base
    seen: dict[tuple[int, ...], int] = {}
    for index, (block, ni) in enumerate(
        zip(code.parity_blocks(), code.partition.sublengths)
    ):
        if block.rank() != ni:
            return False  # condition 2 fails inside this block
        for coeffs in itertools.product(range(q), repeat=ni):
            if not any(coeffs):
                continue
            point = block.mul_vector(coeffs)
            owner = seen.setdefault(point, index)
            if owner != index:
                return False  # condition 1 fails between two blocks
    return True


def _check_distance3_generic(code: CodeDescriptor) -> bool:
    ctx = code.ctx
    q = ctx.q
    ext = ctx.ext
    blocks = code.parity_blocks()
    subl = code.partition.sublengths

    def nonzero_syndromes(i: int) -> list[tuple[int, ...]]:
        out = []
        for coeffs in itertools.product(range(q), repeat=subl[i]):
            if any(coeffs):
                out.append(blocks[i].mul_vector([ctx.embed(c) for c in coeffs]))
        return out

    syndromes = [nonzero_syndromes(i) for i in range(len(blocks))]

    def independent(u: tuple[int, ...], v: tuple[int, ...]) -> bool:
        return Matrix(ext, [u, v]).rank() == 2

    # condition 2: inside each block
    for i, ni in enumerate(subl):
        pairs = itertools.combinations(itertools.product(range(q), repeat=ni), 2)
        for a, b in pairs:
            if Matrix(ctx.base, [a, b]).rank() != 2:
                continue
            u = blocks[i].mul_vector([ctx.embed(c) for c in a])
            v = blocks[i].mul_vector([ctx.embed(c) for c in b])
            if not independent(u, v):
                return False
    # condition 1: across blocks
    for i, j in itertools.combinations(range(len(blocks)), 2):
        for u in syndromes[i]:
            for v in syndromes[j]:
                if not independent(u, v):
                    return False
    return True


# ---------------------------------------------------------------------------
# parameter bounds
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LengthBoundsReport:
    """Evaluation of every length/shot bound for one parameter set.

    The distance-derived bounds presuppose a nonzero codeword, so for
    zero-dimensional candidates (k = n - r <= 0) they are reported as not
    applicable rather than violated.
    """

    q: int
    m: int
    r: int
    partition: tuple[int, ...]
    n: int
    ell: int
    k: int
    applicable: bool
    projective_cap: int
    shots_times_cap: int
    length_cap: int
    average_sublength: float
    average_cap: float
    block_cap: int
    shots_cap: Optional[int]
    window: Optional[tuple[int, int]]
    window_equality: Optional[bool]
    violations: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def rank_code_length_cap(m: int, r: int) -> int:
    """Largest single-block length compatible with distance >= 3: floor(rm/2)."""
    return (r * m) // 2


def length_bounds(q: int, m: int, r: int, partition) -> LengthBoundsReport:
    """Evaluate the length, average-sublength, shot-count, per-block and
    (for m = 1, equal sublengths) length-window bounds; flag violations."""
    partition = partition_of(partition)
    n = partition.n
    ell = partition.ell
    k = n - r
    subl = partition.sublengths
    applicable = k >= 1

    projective_cap = (q ** (m * r) - 1) // (q ** m - 1)
    shots_times_cap = (ell * m * r) // 2
    length_cap = min(projective_cap, shots_times_cap)
    average = n / ell
    average_cap = m * r / 2
    block_cap = rank_code_length_cap(m, r)

    equal = len(set(subl)) == 1
    shots_cap = (q ** (m * r) - 1) // (subl[0] * (q ** m - 1)) if equal else None

    window = None
    window_equality = None
    if m == 1 and equal:
        big_n = subl[0]
        if big_n <= r:
            s = r % big_n
            upper = big_n * ((q ** r - q ** s) // (q ** big_n - 1))
            lower = upper - big_n * (q ** s - 1)
            window = (lower, upper)
            window_equality = (s == 0) and (n == upper)

    violations = []
    if applicable:
        if n > length_cap:
            violations.append(f"n={n} exceeds min cap {length_cap}")
        if average > average_cap:
            violations.append(f"average sublength {average} exceeds {average_cap}")
        if any(2 * ni > m * r for ni in subl):
            violations.append(f"a sublength exceeds the per-block cap {block_cap}")
        if shots_cap is not None and ell > shots_cap:
            violations.append(f"shot count {ell} exceeds {shots_cap}")
    if window is not None and applicable:
        if not window[0] <= n <= window[1]:
            violations.append(f"n={n} outside the Hamming length window {window}")

    return LengthBoundsReport(
        q=q,
        m=m,
        r=r,
        partition=subl,
        n=n,
        ell=ell,
        k=k,
        applicable=applicable,
        projective_cap=projective_cap,
        shots_times_cap=shots_times_cap,
        length_cap=length_cap,
        average_sublength=average,
        average_cap=average_cap,
        block_cap=block_cap,
        shots_cap=shots_cap,
        window=window,
        window_equality=window_equality,
        violations=tuple(violations),
    )


# ---------------------------------------------------------------------------
# perfect codes and simplex distance
# ---------------------------------------------------------------------------

def perfect_code_check(code: CodeDescriptor) -> bool:
    """Exact identity |C| * |ball of radius 1| = q^n (big integers)."""
    if code.ctx.m != 1:
        raise PreconditionError("perfect-code identity is stated for m = 1")
    subl = code.partition.sublengths
    if len(set(subl)) != 1:
        raise PreconditionError("perfect-code identity needs equal sublengths")
    big_n = subl[0]
    if code.redundancy % big_n != 0:
        raise PreconditionError("perfect-code identity needs N | r")
    q = code.ctx.q
    lhs = q ** code.dimension * ball_size(code.partition, code.ctx, 1)
    return lhs == q ** code.n


def simplex_distance_bound(q: int, big_n: int, r: int) -> int:
    """Guaranteed minimum sum-rank distance of a proper simplex code.

    ceil(q^(r-1)(q-1)/(q^N-1)) when N | r; with remainder s > 0 the floor of
    the same ratio minus q^s - 1.
    """
    if r < big_n:
        raise PreconditionError("need r >= N")
    s = r % big_n
    num = q ** (r - 1) * (q - 1)
    den = q ** big_n - 1
    if s == 0:
        return -(-num // den)
    return num // den - q ** s + 1


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def code_to_json(code: CodeDescriptor) -> str:
    ctx = code.ctx
    return json.dumps(
        {
            "q": ctx.q,
            "m": ctx.m,
            "partition": list(code.partition.sublengths),
            "kind": code.kind,
            "r": code.redundancy,
            "k": code.dimension,
            "n": code.n,
            "H": format_matrix(code.parity_check, ctx),
            "G": format_matrix(code.generator, ctx),
        },
        sort_keys=True,
    )


def code_from_json(text: str) -> CodeDescriptor:
    data = json.loads(text)
    h, ctx = parse_matrix(data["H"])
    if ctx.q != data["q"] or ctx.m != data["m"]:
        raise PreconditionError("matrix header disagrees with code metadata")
    generator = None
    if data.get("G"):
        g, gctx = parse_matrix(data["G"])
        if gctx is not ctx:
            raise PreconditionError("generator field disagrees with parity check")
        generator = g
    code = CodeDescriptor(
        ctx,
        LengthPartition(data["partition"]),
        parity_check=h,
        kind=data.get("kind", "custom"),
        generator=generator,
    )
    for name, expect in (("r", code.redundancy), ("k", code.dimension), ("n", code.n)):
        if data.get(name) not in (None, expect):
            raise PreconditionError(f"stored {name}={data[name]} disagrees with matrices")
    return code
