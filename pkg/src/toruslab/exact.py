"""Exact integer and rational linear algebra for torus frequency vectors.

Frequency components are stored as vectors of rationals over a declared
irrationality basis whose first element is always 1, so a plain rational
number is a coordinate vector with a single entry.  Independence of the
remaining basis elements over the rationals is a trusted declaration, not
something this module verifies.  Under that contract, "is there an integer
relation among these frequencies" is decidable, and it is decided here with
exact integer matrix algebra instead of floating point.

Lattices of integer vectors are kept in a canonical column Hermite normal
form, so two lattices are equal exactly when their stored matrices are
equal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Optional, Sequence

__all__ = [
    "InvariantViolation",
    "ExactNumber",
    "IrrationalBasis",
    "FrequencyVector",
    "IntegerLattice",
    "UnimodularSplitting",
    "hermite_normal_form",
    "smith_normal_form",
    "integer_kernel",
    "unimodular_inverse",
    "relation_lattice",
    "split_frequencies",
    "find_resonant_mode",
    "parse_rational",
    "RESONANCE_BOX",
]

#: Default bound on the max-norm of a reported resonant mode.  Exact
#: coordinatewise solving makes an actual search unnecessary; the box only
#: rejects absurdly large solutions of pathological inputs.
RESONANCE_BOX = 10**4


class InvariantViolation(RuntimeError):
    """An internal consistency guarantee failed, e.g. a frequency vector
    declared free of rational relations turned out to have one."""


def parse_rational(value) -> Fraction:
    """Parse an exact rational from an int, a Fraction, or a 'p/q' string.

    Floats are rejected on purpose: the whole point of this layer is that
    no value has ever been rounded.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


# ---------------------------------------------------------------------------
# Integer matrix primitives (lists of rows of Python ints; sizes here are
# tiny, so arbitrary precision beats numpy overflow traps).
# ---------------------------------------------------------------------------


def _identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _transpose(rows: Sequence[Sequence[int]]) -> list[list[int]]:
    return [list(col) for col in zip(*rows)] if rows and len(rows[0]) else []


def _mat_mul(A, B) -> list[list[int]]:
    if not A:
        return []
    inner = len(B)
    width = len(B[0]) if inner else 0
    return [
        [sum(A[i][t] * B[t][j] for t in range(inner)) for j in range(width)]
        for i in range(len(A))
    ]


def _mat_vec(A, v) -> list[int]:
    return [sum(row[j] * v[j] for j in range(len(v))) for row in A]


def _det_int(M: Sequence[Sequence[int]]) -> int:
    """Exact determinant via fraction-free Bareiss elimination."""
    n = len(M)
    if n == 0:
        return 1
    a = [[int(x) for x in row] for row in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            pivot_row = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if pivot_row is None:
                return 0
            a[k], a[pivot_row] = a[pivot_row], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[-1][-1]


def _row_hnf(B: Sequence[Sequence[int]]) -> tuple[list[list[int]], list[list[int]]]:
    """Row-style Hermite form: (H, V) with H = V @ B and V unimodular.

    H is in row echelon shape with positive pivots; entries above each
    pivot are reduced into [0, pivot).
    """
    H = [[int(x) for x in row] for row in B]
    m = len(H)
    V = _identity(m)
    ncols = len(H[0]) if m else 0

    def axpy(target, i, j, q):
        row_j = target[j]
        row_i = target[i]
        for t in range(len(row_i)):
            row_i[t] -= q * row_j[t]

    r = 0
    for col in range(ncols):
        if r == m:
            break
        while True:
            candidates = [i for i in range(r, m) if H[i][col] != 0]
            if not candidates:
                break
            i0 = min(candidates, key=lambda i: (abs(H[i][col]), i))
            if i0 != r:
                H[r], H[i0] = H[i0], H[r]
                V[r], V[i0] = V[i0], V[r]
            pivot = H[r][col]
            clean = True
            for i in range(r + 1, m):
                if H[i][col] != 0:
                    q = H[i][col] // pivot
                    if q:
                        axpy(H, i, r, q)
                        axpy(V, i, r, q)
                    if H[i][col] != 0:
                        clean = False
            if clean:
                break
        if H[r][col] == 0:
            continue
        if H[r][col] < 0:
            H[r] = [-x for x in H[r]]
            V[r] = [-x for x in V[r]]
        pivot = H[r][col]
        for i in range(r):
            q = H[i][col] // pivot
            if q:
                axpy(H, i, r, q)
                axpy(V, i, r, q)
        r += 1
    return H, V


def hermite_normal_form(A: Sequence[Sequence[int]]) -> tuple[list[list[int]], list[list[int]]]:
    """Column Hermite normal form: (H, U) with H = A @ U and U unimodular.

    Convention: transpose of the row Hermite form of the transpose.  The
    pivot of each nonzero column is its topmost nonzero entry; pivot rows
    strictly increase left to right (a lower-triangular profile), pivots
    are positive, entries in a pivot row right of the pivot are zero and
    entries left of it are reduced into [0, pivot).  Zero columns come
    last.  The map is idempotent, so HNF matrices are canonical lattice
    representatives.
    """
    nrows = len(A)
    ncols = len(A[0]) if nrows else 0
    if nrows == 0 or ncols == 0:
        return [[] for _ in range(nrows)], _identity(ncols)
    Hrow, V = _row_hnf(_transpose(A))
    return _transpose(Hrow) or [[] for _ in range(nrows)], _transpose(V)


def smith_normal_form(A: Sequence[Sequence[int]]) -> tuple[list[list[int]], list[list[int]], list[list[int]]]:
    """Smith normal form: (S, U, V) with S = U @ A @ V.

    S is diagonal with nonnegative entries satisfying d1 | d2 | ...; U and
    V are unimodular.
    """
    S = [[int(x) for x in row] for row in A]
    m = len(S)
    n = len(S[0]) if m else 0
    U = _identity(m)
    V = _identity(n)

    def row_op(i, j, q):  # row_i -= q * row_j
        for t in range(len(S[i])):
            S[i][t] -= q * S[j][t]
        for t in range(m):
            U[i][t] -= q * U[j][t]

    def col_op(i, j, q):  # col_i -= q * col_j
        for t in range(m):
            S[t][i] -= q * S[t][j]
        for t in range(n):
            V[t][i] -= q * V[t][j]

    def swap_rows(i, j):
        S[i], S[j] = S[j], S[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for t in range(m):
            S[t][i], S[t][j] = S[t][j], S[t][i]
        for t in range(n):
            V[t][i], V[t][j] = V[t][j], V[t][i]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    if S[i][j] != 0 and (best is None or abs(S[i][j]) < abs(S[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                break
            if best[0] != t:
                swap_rows(t, best[0])
            if best[1] != t:
                swap_cols(t, best[1])
            pivot = S[t][t]
            dirty = False
            for i in range(t + 1, m):
                if S[i][t] != 0:
                    row_op(i, t, S[i][t] // pivot)
                    if S[i][t] != 0:
                        dirty = True
            for j in range(t + 1, n):
                if S[t][j] != 0:
                    col_op(j, t, S[t][j] // pivot)
                    if S[t][j] != 0:
                        dirty = True
            if dirty:
                continue
            pivot = S[t][t]
            offender = None
            for i in range(t + 1, m):
                if any(S[i][j] % pivot != 0 for j in range(t + 1, n)):
                    offender = i
                    break
            if offender is None:
                break
            row_op(t, offender, -1)  # fold the bad row in and re-reduce
        if t < m and t < n and S[t][t] < 0:
            for j in range(n):
                S[t][j] = -S[t][j]
            for j in range(m):
                U[t][j] = -U[t][j]
    return S, U, V


def integer_kernel(A: Sequence[Sequence[int]]) -> list[list[int]]:
    """Basis, as a list of column vectors, of {x in Z^n : A @ x = 0}.

    The kernel of an integer matrix is automatically saturated: the
    quotient of Z^n by it is torsion-free.
    """
    nrows = len(A)
    ncols = len(A[0]) if nrows else 0
    if ncols == 0:
        return []
    if nrows == 0:
        return [[int(i == j) for i in range(ncols)] for j in range(ncols)]
    H, U = hermite_normal_form(A)
    rank = sum(1 for j in range(ncols) if any(H[i][j] != 0 for i in range(nrows)))
    return [[U[i][j] for i in range(ncols)] for j in range(rank, ncols)]


def unimodular_inverse(M: Sequence[Sequence[int]]) -> list[list[int]]:
    """Exact integer inverse of a matrix with determinant +-1."""
    n = len(M)
    aug = [
        [Fraction(M[i][j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)]
        for i in range(n)
    ]
    for col in range(n):
        pivot_row = next((i for i in range(col, n) if aug[i][col] != 0), None)
        if pivot_row is None:
            raise InvariantViolation("matrix is singular, expected unimodular")
        if pivot_row != col:
            aug[col], aug[pivot_row] = aug[pivot_row], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for i in range(n):
            if i != col and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[col])]
    out = []
    for i in range(n):
        row = []
        for j in range(n, 2 * n):
            q = aug[i][j]
            if q.denominator != 1:
                raise InvariantViolation("matrix inverse is not integral, expected unimodular")
            row.append(int(q))
        out.append(row)
    return out


# ---------------------------------------------------------------------------
# Numbers over a declared irrationality basis
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExactNumber:
    """A number given by exact rational coordinates over a fixed basis.

    The basis is (1, beta_2, ..., beta_m) with the beta_i assumed linearly
    independent over the rationals; equality is coordinatewise rational
    equality with no tolerance.
    """

    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        coeffs = tuple(parse_rational(c) for c in self.coeffs)
        if len(coeffs) < 1:
            raise ValueError("coordinate vector must have at least one entry")
        object.__setattr__(self, "coeffs", coeffs)

    @staticmethod
    def rational(value, dim: int = 1) -> "ExactNumber":
        q = parse_rational(value)
        return ExactNumber((q,) + (Fraction(0),) * (dim - 1))

    @property
    def dim(self) -> int:
        return len(self.coeffs)

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    @property
    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def _check_compatible(self, other: "ExactNumber"):
        if self.dim != other.dim:
            raise ValueError("numbers declared over different bases")

    def __add__(self, other: "ExactNumber") -> "ExactNumber":
        self._check_compatible(other)
        return ExactNumber(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "ExactNumber") -> "ExactNumber":
        self._check_compatible(other)
        return ExactNumber(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "ExactNumber":
        return ExactNumber(tuple(-a for a in self.coeffs))

    def scaled(self, factor) -> "ExactNumber":
        q = parse_rational(factor)
        return ExactNumber(tuple(q * a for a in self.coeffs))


@dataclass(frozen=True)
class IrrationalBasis:
    """Declared irrationality basis with decimal values for the one place
    exact numbers ever become floats.

    The first element must be the rational unit 1.  The independence of
    the rest over the rationals is trusted as part of the input contract.
    """

    names: tuple[str, ...]
    values: tuple[float, ...]

    def __post_init__(self):
        names = tuple(str(s) for s in self.names)
        values = tuple(float(v) for v in self.values)
        if len(names) != len(values) or not names:
            raise ValueError("basis needs matching, nonempty names and values")
        if values[0] != 1.0:
            raise ValueError("the first basis element must be 1")
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "values", values)

    @property
    def dim(self) -> int:
        return len(self.names)

    def number(self, coeffs) -> ExactNumber:
        x = ExactNumber(tuple(coeffs))
        if x.dim != self.dim:
            raise ValueError("coordinate count does not match basis size")
        return x

    def rational(self, value) -> ExactNumber:
        return ExactNumber.rational(value, self.dim)

    def to_float(self, x: ExactNumber) -> float:
        if x.dim != self.dim:
            raise ValueError("number does not belong to this basis")
        return math.fsum(float(c) * v for c, v in zip(x.coeffs, self.values))


@dataclass(frozen=True)
class FrequencyVector:
    """The vector of flow frequencies, each entry an ExactNumber."""

    entries: tuple[ExactNumber, ...]

    def __post_init__(self):
        entries = tuple(self.entries)
        if not entries:
            raise ValueError("frequency vector must have positive dimension")
        m = entries[0].dim
        if any(e.dim != m for e in entries):
            raise ValueError("all entries must share one coordinate basis")
        if all(e.is_zero for e in entries):
            raise ValueError("frequency vector must not vanish")
        object.__setattr__(self, "entries", entries)

    @staticmethod
    def from_rows(rows, basis_dim: Optional[int] = None) -> "FrequencyVector":
        """Build from a list of per-entry rational coordinate rows."""
        entries = []
        for row in rows:
            if isinstance(row, (int, str, Fraction)):
                row = [row]
            coeffs = [parse_rational(x) for x in row]
            if basis_dim is not None:
                coeffs += [Fraction(0)] * (basis_dim - len(coeffs))
            entries.append(ExactNumber(tuple(coeffs)))
        return FrequencyVector(tuple(entries))

    @property
    def dimension(self) -> int:
        return len(self.entries)

    @property
    def basis_dim(self) -> int:
        return self.entries[0].dim

    def dot(self, alpha: Sequence[int]) -> ExactNumber:
        if len(alpha) != self.dimension:
            raise ValueError("integer vector has wrong length")
        acc = ExactNumber.rational(0, self.basis_dim)
        for a, entry in zip(alpha, self.entries):
            if a:
                acc = acc + entry.scaled(int(a))
        return acc

    def coordinate_rows(self) -> list[list[Fraction]]:
        """The m x n matrix of rational coordinates, one row per basis
        element."""
        return [[e.coeffs[i] for e in self.entries] for i in range(self.basis_dim)]

    def to_floats(self, basis: IrrationalBasis) -> list[float]:
        return [basis.to_float(e) for e in self.entries]


# ---------------------------------------------------------------------------
# Lattices and the orbit-closure splitting
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IntegerLattice:
    """A sublattice of Z^n stored as the canonical column HNF of a basis.

    rows[i][j] is entry i of basis vector j, so the basis vectors are the
    columns of the stored matrix.
    """

    rows: tuple[tuple[int, ...], ...]

    @property
    def ambient_dimension(self) -> int:
        return len(self.rows)

    @property
    def rank(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    @staticmethod
    def from_columns(columns: Sequence[Sequence[int]], ambient_dimension: int) -> "IntegerLattice":
        cols = [list(map(int, c)) for c in columns]
        if any(len(c) != ambient_dimension for c in cols):
            raise ValueError("column length does not match the ambient dimension")
        if not cols:
            return IntegerLattice(tuple((() for _ in range(ambient_dimension))))
        matrix = [[c[i] for c in cols] for i in range(ambient_dimension)]
        H, _ = hermite_normal_form(matrix)
        nonzero = [j for j in range(len(cols)) if any(H[i][j] != 0 for i in range(ambient_dimension))]
        if len(nonzero) != len(cols):
            raise ValueError("basis columns are linearly dependent")
        return IntegerLattice(tuple(tuple(H[i][j] for j in nonzero) for i in range(ambient_dimension)))

    def columns(self) -> list[list[int]]:
        return [[self.rows[i][j] for i in range(self.ambient_dimension)] for j in range(self.rank)]

    def spans_rationally(self, vector: Sequence[int]) -> bool:
        """Whether an integer vector lies in the rational span of the basis."""
        n = self.ambient_dimension
        v = [Fraction(int(x)) for x in vector]
        if len(v) != n:
            raise ValueError("vector has wrong length")
        r = self.rank
        aug = [[Fraction(self.rows[i][j]) for j in range(r)] + [v[i]] for i in range(n)]
        row = 0
        for col in range(r):
            pivot = next((i for i in range(row, n) if aug[i][col] != 0), None)
            if pivot is None:
                continue
            aug[row], aug[pivot] = aug[pivot], aug[row]
            lead = aug[row][col]
            aug[row] = [x / lead for x in aug[row]]
            for i in range(n):
                if i != row and aug[i][col] != 0:
                    f = aug[i][col]
                    aug[i] = [a - f * b for a, b in zip(aug[i], aug[row])]
            row += 1
        return all(aug[i][r] == 0 for i in range(row, n))

    def to_json_obj(self) -> list[list[int]]:
        return [list(map(int, row)) for row in self.rows]


def relation_lattice(omega: FrequencyVector) -> IntegerLattice:
    """The lattice of integer vectors alpha with alpha . omega = 0.

    Computed exactly: each irrationality-basis coordinate of the dot
    product must vanish separately, so the lattice is the integer kernel
    of the cleared-denominator coordinate matrix.
    """
    n = omega.dimension
    rows = []
    for coords in omega.coordinate_rows():
        if all(c == 0 for c in coords):
            continue
        denom_lcm = math.lcm(*(c.denominator for c in coords))
        rows.append([int(c * denom_lcm) for c in coords])
    kernel = integer_kernel(rows) if rows else [[int(i == j) for i in range(n)] for j in range(n)]
    return IntegerLattice.from_columns(kernel, n)


@dataclass(frozen=True)
class UnimodularSplitting:
    """Integer change of coordinates splitting the torus along an orbit
    closure.

    The columns of ``matrix`` form a Z-basis of Z^n whose first
    ``orbit_dimension`` columns span the saturated lattice of integer
    vectors inside the orbit-closure subspace.  ``omega_tilde`` holds the
    reduced frequencies, which satisfy no rational relation.
    """

    matrix: tuple[tuple[int, ...], ...]
    orbit_dimension: int
    omega_tilde: tuple[ExactNumber, ...]

    def __post_init__(self):
        M = tuple(tuple(int(x) for x in row) for row in self.matrix)
        n = len(M)
        if any(len(row) != n for row in M):
            raise ValueError("splitting matrix must be square")
        if abs(_det_int(M)) != 1:
            raise ValueError("splitting matrix must be unimodular")
        if not (1 <= self.orbit_dimension <= n):
            raise ValueError("orbit dimension out of range")
        if len(self.omega_tilde) != self.orbit_dimension:
            raise ValueError("reduced frequency count must equal the orbit dimension")
        object.__setattr__(self, "matrix", M)

    @property
    def dimension(self) -> int:
        return len(self.matrix)

    @cached_property
    def inverse(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(row) for row in unimodular_inverse([list(r) for r in self.matrix]))

    def to_split_frequency(self, xi: Sequence[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """Relabel a torus frequency xi as (along, across) = M^T xi."""
        eta = _mat_vec(_transpose([list(r) for r in self.matrix]), [int(x) for x in xi])
        k = self.orbit_dimension
        return tuple(eta[:k]), tuple(eta[k:])

    def to_torus_frequency(self, along: Sequence[int], across: Sequence[int]) -> tuple[int, ...]:
        """Inverse relabeling: xi = M^{-T} (along, across)."""
        eta = list(map(int, along)) + list(map(int, across))
        return tuple(_mat_vec(_transpose([list(r) for r in self.inverse]), eta))


def _complete_basis(columns: list[list[int]], n: int) -> list[list[int]]:
    """Extend a saturated lattice basis to a Z-basis of Z^n.

    Uses the unimodular transform of the Smith factorization: with
    S = U B V and all invariant factors 1, the first k columns of U^{-1}
    are B V, a basis of the same lattice, and the remaining columns of
    U^{-1} complete it.
    """
    k = len(columns)
    if k == 0:
        raise ValueError("cannot complete an empty basis")
    B = [[columns[j][i] for j in range(k)] for i in range(n)]
    S, U, V = smith_normal_form(B)
    if any(S[t][t] != 1 for t in range(k)):
        raise InvariantViolation("lattice basis is not saturated")
    M = unimodular_inverse(U)
    if _det_int(M) == -1:
        for i in range(n):
            M[i][n - 1] = -M[i][n - 1]
    return M


def split_frequencies(omega: FrequencyVector) -> UnimodularSplitting:
    """Split the torus along the closure of the linear flow with the given
    frequencies.

    Returns a unimodular matrix M whose first k columns span the saturated
    lattice inside the relation-annihilator subspace, together with the
    reduced frequencies, i.e. the leading k entries of M^{-1} omega.  The
    trailing entries of M^{-1} omega vanish exactly; this is asserted.
    """
    n = omega.dimension
    relations = relation_lattice(omega)
    k = n - relations.rank
    if relations.rank == 0:
        orbit_basis = [[int(i == j) for i in range(n)] for j in range(n)]
    else:
        relation_rows = [
            [relations.rows[i][j] for i in range(n)] for j in range(relations.rank)
        ]
        orbit_basis = integer_kernel(relation_rows)
    if len(orbit_basis) != k:
        raise InvariantViolation("orbit-closure lattice has unexpected rank")
    M = _complete_basis(orbit_basis, n)
    Minv = unimodular_inverse(M)
    reduced = [
        omega.dot(Minv[i]) if any(Minv[i]) else ExactNumber.rational(0, omega.basis_dim)
        for i in range(n)
    ]
    for i in range(k, n):
        if not reduced[i].is_zero:
            raise InvariantViolation("frequencies do not vanish across the orbit closure")
    return UnimodularSplitting(
        matrix=tuple(tuple(row) for row in M),
        orbit_dimension=k,
        omega_tilde=tuple(reduced[:k]),
    )


def find_resonant_mode(
    omega_tilde: Sequence[ExactNumber],
    c: ExactNumber,
    box: int = RESONANCE_BOX,
) -> Optional[tuple[int, ...]]:
    """The unique integer vector a with omega_tilde . a + c = 0, if any.

    Solved coordinatewise in the irrationality basis by exact Gaussian
    elimination.  Because the reduced frequencies admit no rational
    relation, the coordinate matrix has a trivial kernel and the rational
    solution, when the system is consistent, is unique; rank deficiency
    therefore signals a violated input contract and raises.
    """
    k = len(omega_tilde)
    if k == 0:
        return None
    m = omega_tilde[0].dim
    if any(w.dim != m for w in omega_tilde) or c.dim != m:
        raise ValueError("mixed coordinate bases")
    # rows: one equation per irrationality-basis coordinate
    aug = [
        [omega_tilde[j].coeffs[i] for j in range(k)] + [-c.coeffs[i]]
        for i in range(m)
    ]
    pivot_cols: list[int] = []
    row = 0
    for col in range(k):
        pivot = next((i for i in range(row, m) if aug[i][col] != 0), None)
        if pivot is None:
            raise InvariantViolation(
                "reduced frequencies admit a rational relation; resonant mode not unique"
            )
        aug[row], aug[pivot] = aug[pivot], aug[row]
        lead = aug[row][col]
        aug[row] = [x / lead for x in aug[row]]
        for i in range(m):
            if i != row and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[row])]
        pivot_cols.append(col)
        row += 1
    for i in range(row, m):
        if aug[i][k] != 0:
            return None  # inconsistent: no solution at all
    solution = [aug[r][k] for r in range(k)]
    if any(q.denominator != 1 for q in solution):
        return None
    alpha = tuple(int(q) for q in solution)
    if max(abs(a) for a in alpha) > box:
        return None
    return alpha
