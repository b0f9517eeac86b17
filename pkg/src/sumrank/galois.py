"""Exact arithmetic in GF(q) and GF(q^m), and dense matrices over them.

Field elements are plain Python ints in ``[0, order)``.  The int encodes the
element's coordinate vector over the prime field in little-endian positional
notation: for GF(p^e) the base-p digits are the coefficients of the
polynomial representative, and for GF(q^m) built on top of GF(q) the base-q
digits are the coordinates with respect to the polynomial basis
``{1, x, ..., x^(m-1)}`` of the chosen modulus.  This makes the map between
a vector over GF(q^m) and its m x n coordinate matrix over GF(q) a pure
reshaping (see :func:`matrix_rep`), with no arithmetic involved.

Supported sizes are q^m <= 2^16.  Multiplication and inversion use exp/log
tables built from a primitive element, so all operations are exact and O(1)
per element.  Moduli default to the lexicographically smallest monic
irreducible polynomial of the required degree; a custom modulus and a custom
ordered basis can be supplied for basis-independence experiments.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import (
    ContextMismatch,
    DimensionError,
    DivisionByZero,
    PreconditionError,
)

MAX_FIELD_SIZE = 1 << 16


# ---------------------------------------------------------------------------
# number-theory helpers
# ---------------------------------------------------------------------------

def _prime_factors(n: int) -> list[int]:
    """Distinct prime factors of n by trial division (n <= 2^16 here)."""
    factors = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            factors.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        factors.append(n)
    return factors


def prime_power(q: int) -> tuple[int, int]:
    """Decompose q = p^e with p prime, or raise PreconditionError."""
    if q < 2:
        raise PreconditionError(f"{q} is not a prime power")
    factors = _prime_factors(q)
    if len(factors) != 1:
        raise PreconditionError(f"{q} is not a prime power")
    p = factors[0]
    e = 0
    while q % p == 0:
        q //= p
        e += 1
    if q != 1:
        raise PreconditionError("not a prime power")
    return p, e


# ---------------------------------------------------------------------------
# polynomial helpers (coefficient tuples over a field, little-endian)
# ---------------------------------------------------------------------------

def _poly_trim(a: Sequence[int]) -> tuple[int, ...]:
    i = len(a)
    while i > 0 and a[i - 1] == 0:
        i -= 1
    return tuple(a[:i])


def _poly_mul(field: "Field", a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            if bj:
                out[i + j] = field.add(out[i + j], field.mul(ai, bj))
    return _poly_trim(out)


def _poly_mod(field: "Field", a: Sequence[int], mod: Sequence[int]) -> tuple[int, ...]:
    """Remainder of a modulo the monic polynomial mod."""
    a = list(a)
    d = len(mod) - 1
    while len(a) > d:
        lead = a[-1]
        if lead != 0:
            shift = len(a) - 1 - d
            for i in range(d):
                a[shift + i] = field.sub(a[shift + i], field.mul(lead, mod[i]))
        a.pop()
    return _poly_trim(a)


def _monic_polys(field: "Field", degree: int) -> Iterable[tuple[int, ...]]:
    """All monic polynomials of the given degree, in lexicographic order."""
    q = field.order
    total = q ** degree
    for idx in range(total):
        coeffs = []
        v = idx
        for _ in range(degree):
            v, d = divmod(v, q)
            coeffs.append(d)
        yield tuple(coeffs) + (1,)


def is_irreducible(field: "Field", poly: Sequence[int]) -> bool:
    """Irreducibility over the coefficient field by trial division.

    Feasible because q^(deg/2) stays tiny under the q^m <= 2^16 size cap.
    """
    poly = _poly_trim(poly)
    d = len(poly) - 1
    if d < 1 or poly[-1] != field.one:
        return False
    if d == 1:
        return True
    for deg in range(1, d // 2 + 1):
        for divisor in _monic_polys(field, deg):
            if not _poly_mod(field, poly, divisor):
                return False
    return True


def default_modulus(field: "Field", degree: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of the given degree."""
    for candidate in _monic_polys(field, degree):
        if candidate[0] != 0 and is_irreducible(field, candidate):
            return candidate
    raise PreconditionError("no irreducible polynomial found")  # unreachable


# ---------------------------------------------------------------------------
# fields
# ---------------------------------------------------------------------------

class Field:
    """Common interface: exact arithmetic on canonical int encodings."""

    order: int
    char: int
    zero = 0
    one = 1

    def add(self, a: int, b: int) -> int:
        raise NotImplementedError

    def sub(self, a: int, b: int) -> int:
        raise NotImplementedError

    def neg(self, a: int) -> int:
        raise NotImplementedError

    def mul(self, a: int, b: int) -> int:
        raise NotImplementedError

    def inv(self, a: int) -> int:
        raise NotImplementedError

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, k: int) -> int:
        if k < 0:
            return self.pow(self.inv(a), -k)
        out = self.one
        while k:
            if k & 1:
                out = self.mul(out, a)
            a = self.mul(a, a)
            k >>= 1
        return out

    def elements(self) -> range:
        return range(self.order)

    def nonzero(self) -> range:
        return range(1, self.order)


class PrimeField(Field):
    """GF(p) with modular arithmetic on ints 0..p-1."""

    def __init__(self, p: int) -> None:
        self.order = p
        self.char = p

    def add(self, a: int, b: int) -> int:
        s = a + b
        return s - self.order if s >= self.order else s

    def sub(self, a: int, b: int) -> int:
        d = a - b
        return d + self.order if d < 0 else d

    def neg(self, a: int) -> int:
        return self.order - a if a else 0

    def mul(self, a: int, b: int) -> int:
        return (a * b) % self.order

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("inverse of zero")
        return pow(a, self.order - 2, self.order)

    def __repr__(self) -> str:
        return f"GF({self.order})"


class ExtensionField(Field):
    """GF(b^d) built as base-field polynomials modulo an irreducible.

    Elements are ints whose base-b digits (little-endian) are the polynomial
    coefficients over the base field.  Multiplication goes through exp/log
    tables for a primitive element found at construction time.
    """

    def __init__(self, base: Field, modulus: Sequence[int]) -> None:
        modulus = _poly_trim(modulus)
        degree = len(modulus) - 1
        if degree < 2:
            raise PreconditionError("extension degree must be >= 2")
        if modulus[-1] != base.one:
            raise PreconditionError("modulus must be monic")
        order = base.order ** degree
        if order > MAX_FIELD_SIZE:
            raise PreconditionError(
                f"field size {order} exceeds supported cap {MAX_FIELD_SIZE}"
            )
        if not is_irreducible(base, modulus):
            raise PreconditionError("modulus is not irreducible")
        self.base = base
        self.degree = degree
        self.modulus = modulus
        self.order = order
        self.char = base.char
        # additions are plain XOR exactly when the whole tower has char 2
        # and every level uses a power-of-two digit radix
        self._xor_add = base.char == 2 and (
            isinstance(base, PrimeField) or getattr(base, "_xor_add", False)
        )
        self._digits = [self._decompose(v) for v in range(order)]
        self._build_log_tables()

    # -- digit plumbing ----------------------------------------------------

    def _decompose(self, v: int) -> tuple[int, ...]:
        b = self.base.order
        out = []
        for _ in range(self.degree):
            v, d = divmod(v, b)
            out.append(d)
        return tuple(out)

    def _compose(self, digits: Sequence[int]) -> int:
        b = self.base.order
        v = 0
        for d in reversed(digits):
            v = v * b + d
        return v

    def digits(self, a: int) -> tuple[int, ...]:
        """Coefficients of a over the base field (little-endian)."""
        return self._digits[a]

    def from_digits(self, digits: Sequence[int]) -> int:
        if len(digits) > self.degree:
            digits = _poly_mod(self.base, digits, self.modulus)
        padded = list(digits) + [0] * (self.degree - len(digits))
        return self._compose(padded)

    # -- table construction ------------------------------------------------

    def _mul_raw(self, a: int, b: int) -> int:
        prod = _poly_mul(self.base, self._digits[a], self._digits[b])
        return self.from_digits(_poly_mod(self.base, prod, self.modulus))

    def _build_log_tables(self) -> None:
        n = self.order - 1
        gen = None
        cofactors = [n // f for f in _prime_factors(n)]
        for g in range(2, self.order):
            if all(self._pow_raw(g, c) != 1 for c in cofactors):
                gen = g
                break
        if gen is None:  # pragma: no cover - the group is always cyclic
            raise PreconditionError("no primitive element found")
        self._exp = [0] * (2 * n)
        self._log = [0] * self.order
        v = 1
        for i in range(n):
            self._exp[i] = v
            self._exp[i + n] = v
            self._log[v] = i
            v = self._mul_raw(v, gen)
        self.generator = gen

    def _pow_raw(self, a: int, k: int) -> int:
        out = 1
        while k:
            if k & 1:
                out = self._mul_raw(out, a)
            a = self._mul_raw(a, a)
            k >>= 1
        return out

    # -- arithmetic ---------------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self._xor_add:
            return a ^ b
        base = self.base
        return self._compose(
            [base.add(x, y) for x, y in zip(self._digits[a], self._digits[b])]
        )

    def sub(self, a: int, b: int) -> int:
        if self._xor_add:
            return a ^ b
        base = self.base
        return self._compose(
            [base.sub(x, y) for x, y in zip(self._digits[a], self._digits[b])]
        )

    def neg(self, a: int) -> int:
        if self._xor_add:
            return a
        base = self.base
        return self._compose([base.neg(x) for x in self._digits[a]])

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("inverse of zero")
        return self._exp[self.order - 1 - self._log[a]]

    def __repr__(self) -> str:
        return f"GF({self.base.order}^{self.degree})"


_FIELD_CACHE: dict[tuple, Field] = {}


def base_field(q: int) -> Field:
    """GF(q) for a prime power q, cached."""
    key = ("base", q)
    if key not in _FIELD_CACHE:
        p, e = prime_power(q)
        if q > MAX_FIELD_SIZE:
            raise PreconditionError(
                f"field size {q} exceeds supported cap {MAX_FIELD_SIZE}"
            )
        if e == 1:
            _FIELD_CACHE[key] = PrimeField(p)
        else:
            prime = base_field(p)
            _FIELD_CACHE[key] = ExtensionField(prime, default_modulus(prime, e))
    return _FIELD_CACHE[key]


# ---------------------------------------------------------------------------
# field context: GF(q) together with GF(q^m) and an ordered basis
# ---------------------------------------------------------------------------

class FieldCtx:
    """GF(q), its extension GF(q^m), and an ordered basis of the extension.

    The default basis is the polynomial basis of the modulus; pass ``basis``
    (m extension-field elements) to exercise basis independence.  Instances
    are immutable; obtain them through :func:`field_ctx` which caches the
    default-modulus, default-basis contexts.
    """

    def __init__(
        self,
        q: int,
        m: int = 1,
        modulus: Optional[Sequence[int]] = None,
        basis: Optional[Sequence[int]] = None,
    ) -> None:
        if m < 1:
            raise PreconditionError("extension degree m must be >= 1")
        p, e = prime_power(q)
        if q ** m > MAX_FIELD_SIZE:
            raise PreconditionError(
                f"field size {q}^{m} exceeds supported cap {MAX_FIELD_SIZE}"
            )
        self.q = q
        self.m = m
        self.p = p
        self.e = e
        self.base = base_field(q)
        if m == 1:
            if modulus is not None:
                raise PreconditionError("modulus only applies when m > 1")
            self.ext: Field = self.base
            self.modulus: tuple[int, ...] = (0, 1)
        else:
            mod = _poly_trim(modulus) if modulus is not None else default_modulus(self.base, m)
            if len(mod) - 1 != m:
                raise PreconditionError("modulus degree must equal m")
            self.ext = ExtensionField(self.base, mod)
            self.modulus = mod
        if basis is None:
            basis = [self._poly_basis_element(i) for i in range(m)]
        basis = tuple(basis)
        if len(basis) != m:
            raise PreconditionError("basis must contain m elements")
        self.basis = basis
        self._basis_is_poly = basis == tuple(self._poly_basis_element(i) for i in range(m))
        mat = Matrix(
            self.base,
            [[self._poly_coords(b)[i] for b in basis] for i in range(m)],
        )
        inv = mat.inverse()
        if inv is None:
            raise PreconditionError("basis elements are GF(q)-linearly dependent")
        self._basis_inv = inv

    def _poly_basis_element(self, i: int) -> int:
        return self.q ** i if self.m > 1 else 1

    def _poly_coords(self, a: int) -> tuple[int, ...]:
        if self.m == 1:
            return (a,)
        return self.ext.digits(a)  # type: ignore[union-attr]

    # -- coordinates --------------------------------------------------------

    def coords(self, a: int) -> tuple[int, ...]:
        """Coordinates of a with respect to the ordered basis."""
        poly = self._poly_coords(a)
        if self._basis_is_poly:
            return poly
        return self._basis_inv.mul_vector(poly)

    def from_coords(self, coords: Sequence[int]) -> int:
        if len(coords) != self.m:
            raise DimensionError("coordinate vector has wrong length")
        out = 0
        for c, b in zip(coords, self.basis):
            out = self.ext.add(out, self.ext.mul(self.embed(c), b))
        return out

    def embed(self, c: int) -> int:
        """Canonical embedding of a GF(q) scalar into GF(q^m)."""
        if not 0 <= c < self.q:
            raise PreconditionError("not a GF(q) scalar")
        return c

    # -- elements ------------------------------------------------------------

    def element(self, value: int) -> "FieldElement":
        if not 0 <= value < self.ext.order:
            raise PreconditionError(f"value {value} outside field of order {self.ext.order}")
        return FieldElement(self, value)

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(self, 0)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(self, 1)

    def __repr__(self) -> str:
        return f"FieldCtx(q={self.q}, m={self.m})"


_CTX_CACHE: dict[tuple[int, int], FieldCtx] = {}


def field_ctx(
    q: int,
    m: int = 1,
    modulus: Optional[Sequence[int]] = None,
    basis: Optional[Sequence[int]] = None,
) -> FieldCtx:
    """FieldCtx factory; default-configuration contexts are cached."""
    if modulus is None and basis is None:
        key = (q, m)
        if key not in _CTX_CACHE:
            _CTX_CACHE[key] = FieldCtx(q, m)
        return _CTX_CACHE[key]
    return FieldCtx(q, m, modulus=modulus, basis=basis)


@dataclass(frozen=True)
class FieldElement:
    """An element of GF(q^m) bound to its context.

    Arithmetic between elements of different contexts raises
    ContextMismatch; inversion of zero raises DivisionByZero.
    """

    ctx: FieldCtx
    value: int

    def _check(self, other: "FieldElement") -> None:
        if not isinstance(other, FieldElement):
            raise TypeError("expected a FieldElement")
        if other.ctx is not self.ctx:
            raise ContextMismatch("elements belong to different contexts")

    def __add__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement(self.ctx, self.ctx.ext.add(self.value, other.value))

    def __sub__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement(self.ctx, self.ctx.ext.sub(self.value, other.value))

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement(self.ctx, self.ctx.ext.mul(self.value, other.value))

    def __neg__(self) -> "FieldElement":
        return FieldElement(self.ctx, self.ctx.ext.neg(self.value))

    def inverse(self) -> "FieldElement":
        return FieldElement(self.ctx, self.ctx.ext.inv(self.value))

    def coords(self) -> tuple[int, ...]:
        return self.ctx.coords(self.value)

    def __bool__(self) -> bool:
        return self.value != 0

    def __repr__(self) -> str:
        return f"FieldElement({self.value} in GF({self.ctx.q}^{self.ctx.m}))"


def field_arith(a: FieldElement, b: Optional[FieldElement], op: str) -> FieldElement:
    """Dispatch add/mul/neg/inv on FieldElements by name."""
    if op == "add":
        assert b is not None
        return a + b
    if op == "mul":
        assert b is not None
        return a * b
    if op == "neg":
        return -a
    if op == "inv":
        return a.inverse()
    raise PreconditionError(f"unknown op {op!r}")


# ---------------------------------------------------------------------------
# dense matrices over a field
# ---------------------------------------------------------------------------

class Matrix:
    """Immutable dense matrix with exact entries over a Field.

    Entries are canonical ints.  Row reduction, rank, solving, inversion and
    kernel computation all work over any Field instance.
    """

    __slots__ = ("field", "nrows", "ncols", "rows")

    def __init__(self, field: Field, rows: Sequence[Sequence[int]]) -> None:
        self.field = field
        self.rows = tuple(tuple(r) for r in rows)
        self.nrows = len(self.rows)
        self.ncols = len(self.rows[0]) if self.rows else 0
        order = field.order
        for r in self.rows:
            if len(r) != self.ncols:
                raise DimensionError("ragged rows")
            for v in r:
                if not 0 <= v < order:
                    raise DimensionError(f"entry {v} outside field of order {order}")

    # -- constructors --------------------------------------------------------

    @classmethod
    def zeros(cls, field: Field, nrows: int, ncols: int) -> "Matrix":
        return cls(field, [[0] * ncols for _ in range(nrows)])

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        return cls(field, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def from_columns(cls, field: Field, cols: Sequence[Sequence[int]]) -> "Matrix":
        if not cols:
            return cls(field, [])
        nrows = len(cols[0])
        return cls(field, [[c[i] for c in cols] for i in range(nrows)])

    # -- access ---------------------------------------------------------------

    def entry(self, i: int, j: int) -> int:
        return self.rows[i][j]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self.rows)

    def columns(self) -> list[tuple[int, ...]]:
        return [self.column(j) for j in range(self.ncols)]

    def submatrix_columns(self, idx: Sequence[int]) -> "Matrix":
        return Matrix(self.field, [[r[j] for j in idx] for r in self.rows])

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Matrix)
            and other.field is self.field
            and other.rows == self.rows
        )

    def __hash__(self) -> int:
        return hash((id(self.field), self.rows))

    def __repr__(self) -> str:
        return f"Matrix({self.nrows}x{self.ncols} over {self.field!r})"

    # -- arithmetic -------------------------------------------------------------

    def add(self, other: "Matrix") -> "Matrix":
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise DimensionError("shape mismatch in add")
        f = self.field
        return Matrix(
            f,
            [
                [f.add(a, b) for a, b in zip(ra, rb)]
                for ra, rb in zip(self.rows, other.rows)
            ],
        )

    def scale(self, c: int) -> "Matrix":
        f = self.field
        return Matrix(f, [[f.mul(c, v) for v in r] for r in self.rows])

    def transpose(self) -> "Matrix":
        return Matrix(self.field, list(zip(*self.rows)) if self.rows else [])

    def hstack(self, other: "Matrix") -> "Matrix":
        if self.nrows != other.nrows:
            raise DimensionError("row count mismatch in hstack")
        return Matrix(self.field, [ra + rb for ra, rb in zip(self.rows, other.rows)])

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise DimensionError("inner dimensions disagree")
        f = self.field
        ocols = other.ncols
        out = []
        for ra in self.rows:
            row = [0] * ocols
            for k, a in enumerate(ra):
                if a == 0:
                    continue
                rb = other.rows[k]
                for j in range(ocols):
                    b = rb[j]
                    if b:
                        row[j] = f.add(row[j], f.mul(a, b))
            out.append(row)
        return Matrix(f, out)

    def mul_vector(self, v: Sequence[int]) -> tuple[int, ...]:
        """Matrix times column vector."""
        if len(v) != self.ncols:
            raise DimensionError("vector length mismatch")
        f = self.field
        out = []
        for r in self.rows:
            acc = 0
            for a, x in zip(r, v):
                if a and x:
                    acc = f.add(acc, f.mul(a, x))
            out.append(acc)
        return tuple(out)

    def rmul_vector(self, v: Sequence[int]) -> tuple[int, ...]:
        """Row vector times matrix."""
        if len(v) != self.nrows:
            raise DimensionError("vector length mismatch")
        f = self.field
        out = [0] * self.ncols
        for x, r in zip(v, self.rows):
            if x == 0:
                continue
            for j, a in enumerate(r):
                if a:
                    out[j] = f.add(out[j], f.mul(x, a))
        return tuple(out)

    # -- elimination -------------------------------------------------------------

    def rref(self) -> tuple["Matrix", tuple[int, ...]]:
        """Reduced row echelon form and the pivot column indices."""
        f = self.field
        rows = [list(r) for r in self.rows]
        pivots = []
        pr = 0
        for col in range(self.ncols):
            pivot = None
            for i in range(pr, len(rows)):
                if rows[i][col]:
                    pivot = i
                    break
            if pivot is None:
                continue
            rows[pr], rows[pivot] = rows[pivot], rows[pr]
            inv = f.inv(rows[pr][col])
            if inv != 1:
                rows[pr] = [f.mul(inv, v) for v in rows[pr]]
            prow = rows[pr]
            for i in range(len(rows)):
                if i != pr and rows[i][col]:
                    c = rows[i][col]
                    ri = rows[i]
                    for j in range(col, self.ncols):
                        if prow[j]:
                            ri[j] = f.sub(ri[j], f.mul(c, prow[j]))
            pivots.append(col)
            pr += 1
            if pr == len(rows):
                break
        return Matrix(f, rows), tuple(pivots)

    def rank(self) -> int:
        return len(self.rref()[1])

    def solve(self, rhs: Sequence[int]) -> Optional[tuple[int, ...]]:
        """One solution x of self @ x = rhs, or None if inconsistent."""
        if len(rhs) != self.nrows:
            raise DimensionError("rhs length mismatch")
        aug = Matrix(self.field, [list(r) + [b] for r, b in zip(self.rows, rhs)])
        red, pivots = aug.rref()
        if self.ncols in pivots:
            return None
        x = [0] * self.ncols
        for i, col in enumerate(pivots):
            x[col] = red.rows[i][self.ncols]
        return tuple(x)

    def inverse(self) -> Optional["Matrix"]:
        """Inverse matrix, or None when singular or non-square."""
        n = self.nrows
        if n != self.ncols:
            return None
        aug = self.hstack(Matrix.identity(self.field, n))
        red, pivots = aug.rref()
        if tuple(pivots[:n]) != tuple(range(n)) or len(pivots) < n:
            return None
        return Matrix(self.field, [r[n:] for r in red.rows])

    def kernel_basis(self) -> "Matrix":
        """Rows form a basis of the right kernel {x : self @ x = 0}.

        The basis is in reduced echelon form with respect to the free
        columns, so it is canonical for a given matrix.
        """
        red, pivots = self.rref()
        f = self.field
        free = [j for j in range(self.ncols) if j not in pivots]
        rows = []
        for fc in free:
            x = [0] * self.ncols
            x[fc] = 1
            for i, pc in enumerate(pivots):
                x[pc] = f.neg(red.rows[i][fc])
            rows.append(x)
        out = Matrix(f, rows) if rows else Matrix(f, [])
        if rows:
            return out
        return Matrix.zeros(f, 0, self.ncols)

    def row_space_canonical(self) -> tuple[tuple[int, ...], ...]:
        """Canonical generators of the row space (nonzero RREF rows)."""
        red, pivots = self.rref()
        return tuple(red.rows[i] for i in range(len(pivots)))

    def column_space_canonical(self) -> tuple[tuple[int, ...], ...]:
        """Canonical generators of the column space."""
        return self.transpose().row_space_canonical()


# ---------------------------------------------------------------------------
# matrix representation map: GF(q^m)^n  <->  GF(q)^(m x n)
# ---------------------------------------------------------------------------

def matrix_rep(entries: Sequence[int], ctx: FieldCtx) -> Matrix:
    """Coordinate matrix of a vector over GF(q^m): column j holds the basis
    coordinates of entry j.  GF(q)-linear and injective."""
    order = ctx.ext.order
    for v in entries:
        if not 0 <= v < order:
            raise ContextMismatch(f"entry {v} outside GF({ctx.q}^{ctx.m})")
    return Matrix.from_columns(ctx.base, [ctx.coords(v) for v in entries]) if entries else Matrix.zeros(ctx.base, ctx.m, 0)


def vector_from_matrix(mat: Matrix, ctx: FieldCtx) -> tuple[int, ...]:
    """Inverse of matrix_rep: reassemble the GF(q^m) vector from columns."""
    if mat.nrows != ctx.m:
        raise DimensionError("row count must equal the extension degree")
    return tuple(ctx.from_coords(mat.column(j)) for j in range(mat.ncols))


# ---------------------------------------------------------------------------
# matrix text format
# ---------------------------------------------------------------------------

def encode_element(value: int, ctx: FieldCtx) -> int:
    """Integer encoding: basis coordinates packed base q, little-endian."""
    coords = ctx.coords(value)
    out = 0
    for c in reversed(coords):
        out = out * ctx.q + c
    return out


def decode_element(code: int, ctx: FieldCtx) -> int:
    if not 0 <= code < ctx.q ** ctx.m:
        raise PreconditionError(f"element code {code} out of range")
    coords = []
    v = code
    for _ in range(ctx.m):
        v, d = divmod(v, ctx.q)
        coords.append(d)
    return ctx.from_coords(coords)


def format_matrix(mat: Matrix, ctx: FieldCtx) -> str:
    """Serialize to the text format: header ``q m rows cols`` then rows of
    base-q little-endian integer encodings.  Round trips bit-exactly."""
    if mat.field is ctx.ext:
        m = ctx.m
    elif mat.field is ctx.base:
        m = 1
    else:
        raise ContextMismatch("matrix field does not belong to the context")
    enc_ctx = ctx if m == ctx.m else field_ctx(ctx.q, 1)
    lines = [f"{ctx.q} {m} {mat.nrows} {mat.ncols}"]
    for r in mat.rows:
        lines.append(" ".join(str(encode_element(v, enc_ctx)) for v in r))
    return "\n".join(lines)


def parse_matrix(text: str) -> tuple[Matrix, FieldCtx]:
    """Parse the text format back into a matrix plus its default context."""
    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    if not lines:
        raise PreconditionError("empty matrix text")
    header = lines[0].split()
    if len(header) != 4:
        raise PreconditionError("matrix header must be 'q m rows cols'")
    q, m, nrows, ncols = (int(v) for v in header)
    ctx = field_ctx(q, m)
    if len(lines) != 1 + nrows:
        raise PreconditionError(f"expected {nrows} matrix rows, got {len(lines) - 1}")
    rows = []
    for ln in lines[1:]:
        vals = ln.split()
        if len(vals) != ncols:
            raise PreconditionError("row width disagrees with header")
        rows.append([decode_element(int(v), ctx) for v in vals])
    return Matrix(ctx.ext, rows), ctx
