"""Partial spreads of GF(q)^r: construction, exhaustive search, size bounds.

A partial spread is a family of subspaces meeting pairwise only in zero; the
proper kind has one common dimension N, the improper kind mixes dimensions.
When N divides r the exact maximal size (q^r - 1)/(q^N - 1) is attained by
the classical construction that views GF(q)^r as GF(q^N)^(r/N); otherwise
only the two-sided bound is implemented and the backtracking search reports
whether it exhausted the (canonically pruned) space, which is what turns a
"largest found" into a proved maximum.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import InvariantViolation, PreconditionError
from .galois import (
    ExtensionField,
    FieldCtx,
    Matrix,
    base_field,
    default_modulus,
    field_ctx,
    format_matrix,
    parse_matrix,
)

DEFAULT_SEARCH_BUDGET = 5_000_000


# ---------------------------------------------------------------------------
# family container
# ---------------------------------------------------------------------------

def _vector_index(vec: Sequence[int], q: int) -> int:
    idx = 0
    for v in reversed(vec):
        idx = idx * q + v
    return idx


def subspace_point_mask(member: Matrix, q: int) -> int:
    """Bitmask of the nonzero column-space vectors, bit = base-q index."""
    import itertools

    field = member.field
    mask = 0
    cols = member.columns()
    for coeffs in itertools.product(range(q), repeat=len(cols)):
        if not any(coeffs):
            continue
        vec = [0] * member.nrows
        for c, col in zip(coeffs, cols):
            if c:
                for i, x in enumerate(col):
                    if x:
                        vec[i] = field.add(vec[i], field.mul(c, x))
        mask |= 1 << _vector_index(vec, q)
    return mask


@dataclass(frozen=True)
class SpreadFamily:
    """Subspaces of GF(q)^r given by column-basis matrices, pairwise meeting
    only in the zero vector."""

    q: int
    r: int
    dims: tuple[int, ...]
    members: tuple[Matrix, ...]

    def __init__(self, q: int, r: int, members: Iterable[Matrix], validate: bool = True) -> None:
        members = tuple(members)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "members", members)
        object.__setattr__(self, "dims", tuple(m.ncols for m in members))
        if validate:
            self.validate()

    def validate(self) -> None:
        """Assert full column rank and pairwise trivial intersections."""
        field = base_field(self.q)
        masks = []
        for i, member in enumerate(self.members):
            if member.field is not field or member.nrows != self.r:
                raise InvariantViolation("member has wrong shape or field")
            if member.rank() != member.ncols:
                raise InvariantViolation(f"member {i} is column rank deficient")
            masks.append(subspace_point_mask(member, self.q))
        seen = 0
        for i, mask in enumerate(masks):
            if seen & mask:
                raise InvariantViolation("two members share a nonzero vector")
            seen |= mask

    @property
    def ell(self) -> int:
        return len(self.members)

    def point_masks(self) -> list[int]:
        return [subspace_point_mask(m, self.q) for m in self.members]

    def covers_all_nonzero(self) -> bool:
        total = 0
        for mask in self.point_masks():
            total |= mask
        return total == (1 << self.q ** self.r) - 2  # all bits except index 0


def spread_to_json(spread: SpreadFamily) -> str:
    ctx = field_ctx(spread.q, 1)
    return json.dumps(
        {
            "q": spread.q,
            "r": spread.r,
            "dims": list(spread.dims),
            "members": [format_matrix(m, ctx) for m in spread.members],
        },
        sort_keys=True,
    )


def spread_from_json(text: str) -> SpreadFamily:
    data = json.loads(text)
    members = []
    for block in data["members"]:
        mat, ctx = parse_matrix(block)
        if ctx.q != data["q"] or ctx.m != 1:
            raise PreconditionError("member matrix field disagrees with spread header")
        members.append(mat)
    spread = SpreadFamily(data["q"], data["r"], members)
    if list(spread.dims) != list(data["dims"]):
        raise PreconditionError("dims field disagrees with member shapes")
    return spread


# ---------------------------------------------------------------------------
# size bounds
# ---------------------------------------------------------------------------

def spread_size_bounds(q: int, big_n: int, r: int) -> tuple[int, int]:
    """Lower and upper bound for the size of a maximal partial N-spread.

    With s = r mod N these are (q^r - q^s)/(q^N - 1) - q^s + 1 and
    (q^r - q^s)/(q^N - 1); they coincide exactly when N divides r.
    """
    if not 1 <= big_n <= r:
        raise PreconditionError("need 1 <= N <= r")
    s = r % big_n
    upper = (q ** r - q ** s) // (q ** big_n - 1)
    lower = upper - q ** s + 1
    return lower, upper


# ---------------------------------------------------------------------------
# classical construction for N | r
# ---------------------------------------------------------------------------

def desarguesian_spread(q: int, big_n: int, r: int) -> SpreadFamily:
    """The size-(q^r - 1)/(q^N - 1) partial N-spread for N dividing r.

    GF(q)^r is identified with GF(q^N)^(r/N); every projective point of the
    latter expands to an N-dimensional GF(q)-subspace by multiplying with a
    basis of GF(q^N).  The members partition the nonzero vectors.
    """
    if big_n < 1 or r % big_n != 0:
        raise PreconditionError("N must divide r")
    h = r // big_n
    base = base_field(q)
    if big_n == 1:
        members = []
        for rep in _projective_points_prime(q, r):
            members.append(Matrix.from_columns(base, [rep]))
        fam = SpreadFamily(q, r, members, validate=q ** r <= (1 << 16))
        return fam
    big_field = ExtensionField(base, default_modulus(base, big_n))
    members = []
    for rep in _projective_points_ext(big_field, h):
        cols = []
        for t in range(big_n):
            scalar = q ** t  # the basis element x^t of GF(q^N) over GF(q)
            col: list[int] = []
            for coord in rep:
                prod = big_field.mul(scalar, coord)
                col.extend(big_field.digits(prod))
            cols.append(col)
        members.append(Matrix.from_columns(base, cols))
    return SpreadFamily(q, r, members, validate=q ** r <= (1 << 16))


def _projective_points_prime(q: int, r: int) -> Iterable[tuple[int, ...]]:
    """Projective representatives of GF(q)^r: first nonzero coordinate 1."""
    import itertools

    for lead in range(r):
        for tail in itertools.product(range(q), repeat=r - lead - 1):
            yield (0,) * lead + (1,) + tail


def _projective_points_ext(field: ExtensionField, h: int) -> Iterable[tuple[int, ...]]:
    import itertools

    for lead in range(h):
        for tail in itertools.product(range(field.order), repeat=h - lead - 1):
            yield (0,) * lead + (1,) + tail


# ---------------------------------------------------------------------------
# subspace enumeration (reduced echelon canonical form)
# ---------------------------------------------------------------------------

def enumerate_subspaces(q: int, r: int, dim: int) -> list[Matrix]:
    """All dim-dimensional subspaces of GF(q)^r as column-basis matrices.

    Each subspace appears exactly once, as the transpose of its reduced
    row-echelon basis, in lexicographic pivot order.
    """
    import itertools

    if not 0 <= dim <= r:
        raise PreconditionError("need 0 <= dim <= r")
    base = base_field(q)
    out = []
    for pivots in itertools.combinations(range(r), dim):
        free_positions = []
        for row_i, p in enumerate(pivots):
            nxt = pivots[row_i + 1] if row_i + 1 < dim else r
            for col in range(p + 1, r):
                if col not in pivots:
                    free_positions.append((row_i, col))
        for values in itertools.product(range(q), repeat=len(free_positions)):
            rows = [[0] * r for _ in range(dim)]
            for row_i, p in enumerate(pivots):
                rows[row_i][p] = 1
            for (row_i, col), v in zip(free_positions, values):
                rows[row_i][col] = v
            out.append(Matrix(base, rows).transpose())
    return out


# ---------------------------------------------------------------------------
# backtracking search with optimality certificate
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SpreadSearchResult:
    family: SpreadFamily
    certified: bool
    nodes: int
    bounds: Optional[tuple[int, int]]


def search_partial_spread(
    q: int,
    r: int,
    big_n: Optional[int] = None,
    dims: Optional[Sequence[int]] = None,
    budget: int = DEFAULT_SEARCH_BUDGET,
) -> SpreadSearchResult:
    """Backtracking search for a largest partial spread.

    Proper mode (``big_n``): maximize the number of N-dimensional members.
    Improper mode (``dims``): place members with the given dimension profile,
    larger dimensions first, maximizing how many are placed.  The first
    member is pinned to the lexicographically first subspace of the largest
    dimension (sound because invertible maps act transitively on subspaces
    of one dimension), and members of equal dimension are chosen in
    increasing canonical order.  ``certified`` is True when the search space
    was exhausted within budget, or a proved size bound was attained.
    """
    if big_n is None and dims is None:
        raise PreconditionError("give either big_n or dims")
    if big_n is not None and dims is not None:
        raise PreconditionError("give only one of big_n and dims")
    if dims is not None:
        profile = sorted((int(d) for d in dims), reverse=True)
        if not profile:
            raise PreconditionError("dims must be nonempty")
    else:
        lower, upper = spread_size_bounds(q, big_n, r)
        profile = [big_n] * upper
    if max(profile) > r:
        raise PreconditionError("subspace dimension exceeds ambient dimension")

    candidates = {
        d: [(m, subspace_point_mask(m, q)) for m in enumerate_subspaces(q, r, d)]
        for d in sorted(set(profile))
    }
    proper = len(set(profile)) == 1
    points_per_member = q ** profile[0] - 1

    best_members: list[Matrix] = []
    nodes = 0
    exhausted = True

    def recurse(level: int, used_mask: int, chosen: list[tuple[int, Matrix]]) -> None:
        nonlocal nodes, exhausted, best_members
        if len(chosen) > len(best_members):
            best_members = [m for _, m in chosen]
        if level == len(profile):
            return
        d = profile[level]
        same_dim_as_prev = level > 0 and profile[level - 1] == d
        start = chosen[-1][0] + 1 if (chosen and same_dim_as_prev) else 0
        pool = candidates[d]
        compat = [
            (idx, m, mask)
            for idx, (m, mask) in enumerate(pool)
            if idx >= start and not (mask & used_mask)
        ]
        remaining_cap = len(profile) - level
        if proper:
            # equal dimensions: the compatible-member count and the number of
            # still-coverable points both cap the completion size
            coverable = 0
            for _, _, mask in compat:
                coverable |= mask
            remaining_cap = min(
                remaining_cap,
                len(compat),
                coverable.bit_count() // points_per_member,
            )
        if len(chosen) + remaining_cap <= len(best_members):
            return
        for idx, m, mask in compat:
            nodes += 1
            if nodes > budget:
                exhausted = False
                return
            chosen.append((idx, m))
            recurse(level + 1, used_mask | mask, chosen)
            chosen.pop()
            if len(best_members) == len(profile):
                return  # every slot placed; nothing larger exists
            if not exhausted:
                return

    # pin the first member: the lexicographically first subspace of the
    # largest dimension (index 0 of its candidate list)
    d0 = profile[0]
    first, first_mask = candidates[d0][0]
    recurse(1, first_mask, [(0, first)])

    family = SpreadFamily(q, r, best_members)
    bound_pair = spread_size_bounds(q, big_n, r) if big_n is not None else None
    certified = exhausted
    if bound_pair is not None and family.ell == bound_pair[1]:
        certified = True
    return SpreadSearchResult(
        family=family, certified=certified, nodes=nodes, bounds=bound_pair
    )
