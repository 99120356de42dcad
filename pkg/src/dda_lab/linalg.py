"""Finite-dimensional spaces, linear maps and quotients over an exact field.

Vectors are plain lists of field scalars.  LinMap stores a dense matrix,
rows indexed by the codomain basis (so apply(v)[i] = sum_j M[i][j] v[j]).
Everything is immutable by convention: no routine mutates its arguments,
and shared objects are safe to read from several threads.

Determinism: all eliminations use Gauss-Jordan with the lowest-index pivot,
so echelon bases, quotient bases and solver outputs are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field


class LinAlgError(ValueError):
    pass


@dataclass(frozen=True)
class FinSpace:
    """A based vector space: a dimension and human-readable basis labels."""

    field: object
    dim: int
    labels: tuple

    def __post_init__(self):
        if len(self.labels) != self.dim:
            raise LinAlgError("label count != dimension")
        if len(set(self.labels)) != self.dim:
            raise LinAlgError("basis labels must be unique")

    @staticmethod
    def make(field, labels):
        return FinSpace(field, len(labels), tuple(labels))

    def zero(self):
        z = self.field.zero
        return [z] * self.dim

    def basis_vector(self, i):
        v = self.zero()
        v[i] = self.field.one
        return v

    def basis(self):
        return [self.basis_vector(i) for i in range(self.dim)]

    def describe(self, vec, zero_as="0"):
        """Pretty-print a vector as a combination of basis labels."""
        fld = self.field
        terms = [
            f"{fld.format(c)}*{lbl}"
            for c, lbl in zip(vec, self.labels)
            if not fld.is_zero(c)
        ]
        return " + ".join(terms) if terms else zero_as


def vec_eq(field, u, v):
    return all(field.eq(a, b) for a, b in zip(u, v))

def vec_is_zero(field, u):
    return all(field.is_zero(a) for a in u)

def vec_add(field, u, v):
    return [field.add(a, b) for a, b in zip(u, v)]

def vec_sub(field, u, v):
    return [field.sub(a, b) for a, b in zip(u, v)]

def vec_scale(field, c, u):
    return [field.mul(c, a) for a in u]

def vec_axpy(field, c, u, v):
    """v + c*u, skipping zero entries of u."""
    out = list(v)
    if field.is_zero(c):
        return out
    for i, a in enumerate(u):
        if not field.is_zero(a):
            out[i] = field.add(out[i], field.mul(c, a))
    return out


class Echelon:
    """A row space kept in reduced echelon form (pivots 1, lowest index first).

    Rows can be inserted one by one; memory stays bounded by the rank, which
    is what makes large relation families (tensor balancing, intertwiner
    systems) tractable.
    """

    def __init__(self, field, ncols: int):
        self.field = field
        self.ncols = ncols
        self.pivot_of_row = []   # row i has pivot at this column
        self.rows = []           # reduced rows, sorted by pivot column
        self._col_to_row = {}

    @property
    def rank(self):
        return len(self.rows)

    def reduce(self, vec):
        """Fully reduce vec against the current rows; returns the residue."""
        fld = self.field
        is_zero, add, mul, neg = fld.is_zero, fld.add, fld.mul, fld.neg
        out = list(vec)
        for col, ri in self._col_to_row.items():
            c = out[col]
            if is_zero(c):
                continue
            nc = neg(c)
            row = self.rows[ri]
            for i, a in enumerate(row):
                if not is_zero(a):
                    out[i] = add(out[i], mul(nc, a))
        return out

    def insert(self, vec) -> bool:
        """Insert vec's residue; True if the rank grew."""
        fld = self.field
        is_zero, add, mul, neg = fld.is_zero, fld.add, fld.mul, fld.neg
        res = self.reduce(vec)
        pivot = next((i for i, c in enumerate(res) if not is_zero(c)), None)
        if pivot is None:
            return False
        inv = fld.inv(res[pivot])
        if not fld.eq(inv, fld.one):
            res = [mul(inv, a) for a in res]
        # back-substitute into existing rows (owned lists) to stay reduced
        for row in self.rows:
            c = row[pivot]
            if is_zero(c):
                continue
            nc = neg(c)
            for i, a in enumerate(res):
                if not is_zero(a):
                    row[i] = add(row[i], mul(nc, a))
        self.rows.append(res)
        self.pivot_of_row.append(pivot)
        order = sorted(range(len(self.rows)), key=lambda i: self.pivot_of_row[i])
        self.rows = [self.rows[i] for i in order]
        self.pivot_of_row = [self.pivot_of_row[i] for i in order]
        self._col_to_row = {p: i for i, p in enumerate(self.pivot_of_row)}
        return True

    def extend(self, vecs):
        for v in vecs:
            self.insert(v)
        return self

    def contains(self, vec) -> bool:
        return vec_is_zero(self.field, self.reduce(vec))

    def pivot_columns(self):
        return list(self.pivot_of_row)

    def free_columns(self):
        pivots = set(self.pivot_of_row)
        return [j for j in range(self.ncols) if j not in pivots]

    def basis(self):
        return [list(r) for r in self.rows]

    def equals_span(self, other: "Echelon") -> bool:
        if self.rank != other.rank:
            return False
        return all(other.contains(r) for r in self.rows)


def span_echelon(field, ncols, vecs) -> Echelon:
    ech = Echelon(field, ncols)
    ech.extend(vecs)
    return ech


@dataclass(frozen=True)
class LinMap:
    """A linear map with explicit domain and codomain.

    matrix has codomain.dim rows and domain.dim columns.
    """

    domain: FinSpace
    codomain: FinSpace
    matrix: tuple

    @staticmethod
    def from_rows(domain, codomain, rows):
        if len(rows) != codomain.dim or any(len(r) != domain.dim for r in rows):
            raise LinAlgError("matrix shape does not match domain/codomain")
        return LinMap(domain, codomain, tuple(tuple(r) for r in rows))

    @staticmethod
    def from_columns(domain, codomain, cols):
        """cols[j] = image of the j-th domain basis vector."""
        if len(cols) != domain.dim or any(len(c) != codomain.dim for c in cols):
            raise LinAlgError("column data does not match domain/codomain")
        rows = [[cols[j][i] for j in range(domain.dim)] for i in range(codomain.dim)]
        return LinMap.from_rows(domain, codomain, rows)

    @staticmethod
    def on_basis(domain, codomain, images):
        return LinMap.from_columns(domain, codomain, images)

    @staticmethod
    def identity(space):
        fld = space.field
        rows = [
            [fld.one if i == j else fld.zero for j in range(space.dim)]
            for i in range(space.dim)
        ]
        return LinMap.from_rows(space, space, rows)

    @staticmethod
    def zero(domain, codomain):
        z = domain.field.zero
        return LinMap.from_rows(domain, codomain, [[z] * domain.dim for _ in range(codomain.dim)])

    @property
    def field(self):
        return self.domain.field

    def apply(self, vec):
        fld = self.field
        out = []
        for row in self.matrix:
            acc = fld.zero
            for c, x in zip(row, vec):
                if not (fld.is_zero(c) or fld.is_zero(x)):
                    acc = fld.add(acc, fld.mul(c, x))
            out.append(acc)
        return out

    def column(self, j):
        return [row[j] for row in self.matrix]

    def columns(self):
        return [self.column(j) for j in range(self.domain.dim)]

    def compose(self, other: "LinMap") -> "LinMap":
        """self after other (self ∘ other)."""
        if other.codomain.dim != self.domain.dim:
            raise LinAlgError("composition shape mismatch")
        cols = [self.apply(other.column(j)) for j in range(other.domain.dim)]
        return LinMap.from_columns(other.domain, self.codomain, cols)

    def add(self, other: "LinMap") -> "LinMap":
        fld = self.field
        rows = [
            [fld.add(a, b) for a, b in zip(r1, r2)]
            for r1, r2 in zip(self.matrix, other.matrix)
        ]
        return LinMap.from_rows(self.domain, self.codomain, rows)

    def sub(self, other: "LinMap") -> "LinMap":
        fld = self.field
        rows = [
            [fld.sub(a, b) for a, b in zip(r1, r2)]
            for r1, r2 in zip(self.matrix, other.matrix)
        ]
        return LinMap.from_rows(self.domain, self.codomain, rows)

    def scale(self, c) -> "LinMap":
        fld = self.field
        rows = [[fld.mul(c, a) for a in r] for r in self.matrix]
        return LinMap.from_rows(self.domain, self.codomain, rows)

    def equals(self, other: "LinMap") -> bool:
        fld = self.field
        return all(
            fld.eq(a, b)
            for r1, r2 in zip(self.matrix, other.matrix)
            for a, b in zip(r1, r2)
        )

    def is_zero(self) -> bool:
        fld = self.field
        return all(fld.is_zero(a) for r in self.matrix for a in r)

    def flatten(self):
        """Row-major vector of all entries; used to coordinatize map spaces."""
        return [a for row in self.matrix for a in row]

    @staticmethod
    def unflatten(domain, codomain, flat):
        n = domain.dim
        rows = [flat[i * n:(i + 1) * n] for i in range(codomain.dim)]
        return LinMap.from_rows(domain, codomain, rows)


def rank_kernel_image(f: LinMap):
    """(rank, kernel basis, image basis), all exact and deterministic.

    rank + len(kernel) == dim(domain) always holds.
    """
    fld = f.field
    n = f.domain.dim
    # columns of f span the image; eliminate transposed rows for the image basis
    image = span_echelon(fld, f.codomain.dim, f.columns())
    # kernel from RREF of the matrix itself
    rowspace = span_echelon(fld, n, [list(r) for r in f.matrix])
    pivots = rowspace.pivot_columns()
    free = rowspace.free_columns()
    kernel = []
    for j in free:
        v = [fld.zero] * n
        v[j] = fld.one
        for row, p in zip(rowspace.rows, pivots):
            v[p] = fld.neg(row[j])
        kernel.append(v)
    rank = image.rank
    assert rank == rowspace.rank
    assert rank + len(kernel) == n
    return rank, kernel, image.basis()


def solve_linear(f: LinMap, target):
    """Solve f(x) = target exactly.

    Returns (solution, kernel_basis) with solution None when inconsistent;
    "no solution" is a value, not an exception.
    """
    fld = f.field
    n = f.domain.dim
    ech = Echelon(fld, n + 1)
    for row, t in zip(f.matrix, target):
        ech.insert(list(row) + [t])
    if n in ech.pivot_columns():
        _, kernel, _ = rank_kernel_image(f)
        return None, kernel
    sol = [fld.zero] * n
    for row, p in zip(ech.rows, ech.pivot_of_row):
        sol[p] = row[n]
    _, kernel, _ = rank_kernel_image(f)
    residual = vec_sub(fld, f.apply(sol), target)
    assert vec_is_zero(fld, residual)
    return sol, kernel


def invert(f: LinMap) -> LinMap:
    """Two-sided inverse; raises LinAlgError when f is not bijective."""
    if f.domain.dim != f.codomain.dim:
        raise LinAlgError("only square maps can be inverted")
    fld = f.field
    n = f.domain.dim
    ech = Echelon(fld, 2 * n)
    for i, row in enumerate(f.matrix):
        aug = list(row) + [fld.one if j == i else fld.zero for j in range(n)]
        ech.insert(aug)
    if ech.pivot_columns()[:n] != list(range(n)):
        raise LinAlgError("map is singular")
    inv_rows = [row[n:] for row in ech.rows]
    g = LinMap.from_rows(f.codomain, f.domain, inv_rows)
    assert g.compose(f).equals(LinMap.identity(f.domain))
    return g


def is_bijective(f: LinMap) -> bool:
    if f.domain.dim != f.codomain.dim:
        return False
    rank, _, _ = rank_kernel_image(f)
    return rank == f.domain.dim


def cokernel_witness(f: LinMap):
    """A codomain basis vector not in the image, or None if f is onto."""
    fld = f.field
    image = span_echelon(fld, f.codomain.dim, f.columns())
    if image.rank == f.codomain.dim:
        return None
    j = image.free_columns()[0]
    return f.codomain.basis_vector(j)


@dataclass(frozen=True)
class QuotientSpace:
    """ambient / span(relations), with a fixed section.

    projection ∘ section = id on the quotient; ker(projection) = span(relations).
    The stored relations are the echelonized generators (same span as the
    raw input family).
    """

    ambient: FinSpace
    relations: tuple
    space: FinSpace
    projection: LinMap
    section: LinMap

    @property
    def dim(self):
        return self.space.dim

    def project(self, vec):
        return self.projection.apply(vec)

    def lift(self, qvec):
        return self.section.apply(qvec)

    def contains_relation(self, vec) -> bool:
        fld = self.ambient.field
        return vec_is_zero(fld, self.projection.apply(vec))


def quotient_by(ambient: FinSpace, relations) -> QuotientSpace:
    """Quotient with the deterministic complement basis.

    The quotient basis is indexed by the non-pivot columns of the
    echelonized relation span, and the section sends basis j back to the
    ambient basis vector e_j of that column.
    """
    fld = ambient.field
    ech = span_echelon(fld, ambient.dim, relations)
    free = ech.free_columns()
    qdim = len(free)
    labels = tuple(ambient.labels[j] for j in free)
    qspace = FinSpace(fld, qdim, labels)
    # projection column for e_k: reduce e_k, read coefficients at free columns
    proj_cols = []
    for k in range(ambient.dim):
        res = ech.reduce(ambient.basis_vector(k))
        proj_cols.append([res[j] for j in free])
    projection = LinMap.from_columns(ambient, qspace, proj_cols)
    section_cols = [ambient.basis_vector(j) for j in free]
    section = LinMap.from_columns(qspace, ambient, section_cols)
    assert projection.compose(section).equals(LinMap.identity(qspace))
    return QuotientSpace(
        ambient=ambient,
        relations=tuple(tuple(r) for r in ech.basis()),
        space=qspace,
        projection=projection,
        section=section,
    )


def product_space(a: FinSpace, b: FinSpace, sep="⊗") -> FinSpace:
    labels = tuple(f"{la}{sep}{lb}" for la in a.labels for lb in b.labels)
    return FinSpace(a.field, a.dim * b.dim, labels)


def tensor_index(b_dim: int, i: int, j: int) -> int:
    return i * b_dim + j


def pure_tensor(a: FinSpace, b: FinSpace, u, v):
    fld = a.field
    out = [fld.zero] * (a.dim * b.dim)
    for i, x in enumerate(u):
        if fld.is_zero(x):
            continue
        base = i * b.dim
        for j, y in enumerate(v):
            if not fld.is_zero(y):
                out[base + j] = fld.mul(x, y)
    return out


def kron(f: LinMap, g: LinMap) -> LinMap:
    """f ⊗ g on the product spaces."""
    dom = product_space(f.domain, g.domain)
    cod = product_space(f.codomain, g.codomain)
    cols = []
    for i in range(f.domain.dim):
        fi = f.column(i)
        for j in range(g.domain.dim):
            gj = g.column(j)
            cols.append(pure_tensor(f.codomain, g.codomain, fi, gj))
    return LinMap.from_columns(dom, cod, cols)


def express_in_span(field, generators, ncols, vec):
    """Coefficients writing vec in the given generators, or None.

    Deterministic: least-squares-free exact solve on the generator matrix.
    """
    dummy_dom = FinSpace(field, len(generators), tuple(f"g{i}" for i in range(len(generators))))
    dummy_cod = FinSpace(field, ncols, tuple(f"c{i}" for i in range(ncols)))
    m = LinMap.from_columns(dummy_dom, dummy_cod, [list(g) for g in generators])
    sol, _ = solve_linear(m, list(vec))
    return sol
