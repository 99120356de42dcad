"""Structure-constant algebras, bimodules, tensor products over a base,
Hom-spaces, centralizers and Frobenius data.

An algebra is a FinSpace plus a multiplication tensor mult[i][j] = vector
of e_i * e_j, and a unit vector.  Bimodules store action tensors the same
way.  Tensor products over a base algebra are realized as explicit
quotients of the plain tensor product by the balancing relations
    (x . r) ⊗ y  -  x ⊗ (r . y),
and every quotient carries its deterministic projection/section pair.

Subalgebras (images of projections, centralizers, invariants) are always
carried with an explicit embedding; nothing is ever identified silently.
"""

from __future__ import annotations

from dataclasses import dataclass

from .linalg import (
    Echelon,
    FinSpace,
    LinMap,
    QuotientSpace,
    express_in_span,
    pure_tensor,
    product_space,
    quotient_by,
    rank_kernel_image,
    solve_linear,
    span_echelon,
    vec_add,
    vec_axpy,
    vec_eq,
    vec_is_zero,
    vec_scale,
    vec_sub,
)
from .reporting import Report


def bilinear_apply(field, tensor, u, v, out_dim):
    """Evaluate a bilinear tensor[i][j] = vector on (u, v)."""
    out = [field.zero] * out_dim
    for i, a in enumerate(u):
        if field.is_zero(a):
            continue
        row = tensor[i]
        for j, b in enumerate(v):
            if field.is_zero(b):
                continue
            c = field.mul(a, b)
            out = vec_axpy(field, c, row[j], out)
    return out


@dataclass(frozen=True)
class StructAlgebra:
    """Associative unital algebra given by structure constants."""

    space: FinSpace
    mult: tuple      # mult[i][j] = e_i * e_j as a vector
    unit: tuple

    @staticmethod
    def make(space, mult, unit):
        return StructAlgebra(
            space,
            tuple(tuple(tuple(v) for v in row) for row in mult),
            tuple(unit),
        )

    @staticmethod
    def from_products(space, product_fn, unit):
        mult = [
            [product_fn(i, j) for j in range(space.dim)]
            for i in range(space.dim)
        ]
        return StructAlgebra.make(space, mult, unit)

    @property
    def field(self):
        return self.space.field

    @property
    def dim(self):
        return self.space.dim

    def mul(self, u, v):
        return bilinear_apply(self.field, self.mult, u, v, self.dim)

    def basis_product(self, i, j):
        return list(self.mult[i][j])

    def left_mult_map(self, u) -> LinMap:
        cols = [self.mul(u, self.space.basis_vector(j)) for j in range(self.dim)]
        return LinMap.from_columns(self.space, self.space, cols)

    def right_mult_map(self, u) -> LinMap:
        cols = [self.mul(self.space.basis_vector(j), u) for j in range(self.dim)]
        return LinMap.from_columns(self.space, self.space, cols)

    def opposite(self) -> "StructAlgebra":
        mult = [
            [self.basis_product(j, i) for j in range(self.dim)]
            for i in range(self.dim)
        ]
        return StructAlgebra.make(self.space, mult, self.unit)

    def power(self, u, k):
        out = list(self.unit)
        for _ in range(k):
            out = self.mul(out, u)
        return out


def field_algebra(field) -> StructAlgebra:
    """The 1-dimensional algebra k, used for one-sided modules."""
    space = FinSpace(field, 1, ("1",))
    return StructAlgebra.make(space, [[[field.one]]], [field.one])


def check_algebra(a: StructAlgebra) -> Report:
    """Brute-force associativity and unit laws over all basis tuples."""
    rep = Report()
    fld = a.field
    sp = a.space
    bad = None
    for i in range(a.dim):
        for j in range(a.dim):
            eij = a.basis_product(i, j)
            for k in range(a.dim):
                lhs = a.mul(eij, sp.basis_vector(k))
                rhs = a.mul(sp.basis_vector(i), a.basis_product(j, k))
                if not vec_eq(fld, lhs, rhs):
                    bad = f"({sp.labels[i]})*({sp.labels[j]})*({sp.labels[k]})"
                    break
            if bad:
                break
        if bad:
            break
    rep.add("algebra.associative", bad is None, bad)
    bad = None
    for i in range(a.dim):
        e = sp.basis_vector(i)
        if not vec_eq(fld, a.mul(list(a.unit), e), e) or not vec_eq(fld, a.mul(e, list(a.unit)), e):
            bad = sp.labels[i]
            break
    rep.add("algebra.unital", bad is None, bad)
    return rep


@dataclass(frozen=True)
class AlgebraMap:
    """A linear map between algebras, checkable for multiplicativity."""

    source: StructAlgebra
    target: StructAlgebra
    map: LinMap

    def check(self) -> Report:
        rep = Report()
        fld = self.source.field
        bad = None
        for i in range(self.source.dim):
            fi = self.map.column(i)
            for j in range(self.source.dim):
                lhs = self.map.apply(self.source.basis_product(i, j))
                rhs = self.target.mul(fi, self.map.column(j))
                if not vec_eq(fld, lhs, rhs):
                    bad = f"{self.source.space.labels[i]}*{self.source.space.labels[j]}"
                    break
            if bad:
                break
        rep.add("algebra_map.multiplicative", bad is None, bad)
        rep.add(
            "algebra_map.unital",
            vec_eq(fld, self.map.apply(list(self.source.unit)), list(self.target.unit)),
        )
        return rep

    def apply(self, vec):
        return self.map.apply(vec)


@dataclass(frozen=True)
class SubAlgebra:
    """A subalgebra presented by an embedding into the ambient algebra.

    coords expresses ambient vectors (that happen to lie in the image) in
    the subalgebra basis; coords ∘ embedding = id.
    """

    algebra: StructAlgebra
    ambient: StructAlgebra
    embedding: LinMap          # sub space -> ambient space
    coords: LinMap             # ambient space -> sub space (a retraction)

    def contains(self, vec) -> bool:
        fld = self.ambient.field
        back = self.embedding.apply(self.coords.apply(vec))
        return vec_eq(fld, back, vec)

    def to_sub(self, vec):
        if not self.contains(vec):
            raise ValueError("vector is not in the subalgebra")
        return self.coords.apply(vec)

    @property
    def dim(self):
        return self.algebra.dim


def subalgebra_from_vectors(ambient: StructAlgebra, vectors, labels=None, unit_vec=None,
                            label_prefix="s") -> SubAlgebra:
    """Echelonized span of the given vectors, required to be closed and unital.

    unit_vec defaults to the ambient unit, which must lie in the span.
    """
    fld = ambient.field
    ech = span_echelon(fld, ambient.dim, vectors)
    basis = ech.basis()
    n = len(basis)
    if labels is None:
        labels = tuple(f"{label_prefix}{i}" for i in range(n))
    sub_space = FinSpace(fld, n, tuple(labels))
    embedding = LinMap.from_columns(sub_space, ambient.space, basis)
    # retraction: solve embedding * x = v for v in span (pivot coordinates)
    pivots = ech.pivot_columns()
    coords_rows = []
    for i in range(n):
        row = [fld.zero] * ambient.dim
        row[pivots[i]] = fld.one
        coords_rows.append(row)
    coords = LinMap.from_rows(ambient.space, sub_space, coords_rows)
    # fix coords on the whole image: reduce each ambient basis vector
    # (pivot-coordinate reading is exact on the span because basis is RREF)
    unit = list(ambient.unit) if unit_vec is None else list(unit_vec)
    if not ech.contains(unit):
        raise ValueError("unit is not contained in the subalgebra span")
    mult = []
    for i in range(n):
        row = []
        for j in range(n):
            prod = ambient.mul(basis[i], basis[j])
            if not ech.contains(prod):
                raise ValueError(
                    f"span is not multiplicatively closed at ({labels[i]},{labels[j]})"
                )
            row.append(coords.apply(prod))
        mult.append(row)
    sub_alg = StructAlgebra.make(sub_space, mult, coords.apply(unit))
    return SubAlgebra(sub_alg, ambient, embedding, coords)


@dataclass(frozen=True)
class Bimodule:
    """A left_alg-right_alg-bimodule with explicit action tensors.

    left_action[i][j]  = a_i . m_j,   right_action[i][j] = m_i . a_j.
    """

    left_alg: StructAlgebra
    right_alg: StructAlgebra
    space: FinSpace
    left_action: tuple
    right_action: tuple

    @staticmethod
    def make(left_alg, right_alg, space, left_action, right_action):
        return Bimodule(
            left_alg,
            right_alg,
            space,
            tuple(tuple(tuple(v) for v in row) for row in left_action),
            tuple(tuple(tuple(v) for v in row) for row in right_action),
        )

    @property
    def field(self):
        return self.space.field

    @property
    def dim(self):
        return self.space.dim

    def act_left(self, a_vec, m_vec):
        return bilinear_apply(self.field, self.left_action, a_vec, m_vec, self.dim)

    def act_right(self, m_vec, a_vec):
        return bilinear_apply(self.field, self.right_action, m_vec, a_vec, self.dim)

    def check(self) -> Report:
        rep = Report()
        fld = self.field
        sp = self.space
        la, ra = self.left_alg, self.right_alg
        ok = all(
            vec_eq(fld, self.act_left(list(la.unit), sp.basis_vector(j)), sp.basis_vector(j))
            and vec_eq(fld, self.act_right(sp.basis_vector(j), list(ra.unit)), sp.basis_vector(j))
            for j in range(self.dim)
        )
        rep.add("bimodule.unital", ok)
        bad = None
        for i in range(la.dim):
            for j in range(la.dim):
                prod = la.basis_product(i, j)
                for m in range(self.dim):
                    mv = sp.basis_vector(m)
                    lhs = self.act_left(prod, mv)
                    rhs = self.act_left(la.space.basis_vector(i), self.act_left(la.space.basis_vector(j), mv))
                    if not vec_eq(fld, lhs, rhs):
                        bad = f"left ({la.space.labels[i]},{la.space.labels[j]},{sp.labels[m]})"
                        break
                if bad:
                    break
            if bad:
                break
        rep.add("bimodule.left_associative", bad is None, bad)
        bad = None
        for m in range(self.dim):
            mv = sp.basis_vector(m)
            for i in range(ra.dim):
                for j in range(ra.dim):
                    lhs = self.act_right(mv, ra.basis_product(i, j))
                    rhs = self.act_right(self.act_right(mv, ra.space.basis_vector(i)), ra.space.basis_vector(j))
                    if not vec_eq(fld, lhs, rhs):
                        bad = f"right ({sp.labels[m]},{ra.space.labels[i]},{ra.space.labels[j]})"
                        break
                if bad:
                    break
            if bad:
                break
        rep.add("bimodule.right_associative", bad is None, bad)
        bad = None
        for i in range(la.dim):
            av = la.space.basis_vector(i)
            for m in range(self.dim):
                mv = sp.basis_vector(m)
                for j in range(ra.dim):
                    bv = ra.space.basis_vector(j)
                    lhs = self.act_right(self.act_left(av, mv), bv)
                    rhs = self.act_left(av, self.act_right(mv, bv))
                    if not vec_eq(fld, lhs, rhs):
                        bad = f"commute ({la.space.labels[i]},{sp.labels[m]},{ra.space.labels[j]})"
                        break
                if bad:
                    break
            if bad:
                break
        rep.add("bimodule.actions_commute", bad is None, bad)
        return rep


def regular_bimodule(a: StructAlgebra) -> Bimodule:
    """a as an a-a-bimodule by multiplication."""
    act = [[a.basis_product(i, j) for j in range(a.dim)] for i in range(a.dim)]
    return Bimodule.make(a, a, a.space, act, act)


def bimodule_from_actions(left_alg, right_alg, space, left_fn, right_fn) -> Bimodule:
    """Build action tensors from basis-level action functions."""
    la = [
        [left_fn(i, j) for j in range(space.dim)]
        for i in range(left_alg.dim)
    ]
    ra = [
        [right_fn(i, j) for j in range(right_alg.dim)]
        for i in range(space.dim)
    ]
    return Bimodule.make(left_alg, right_alg, space, la, ra)


def one_sided(space_alg_side):
    raise NotImplementedError


def left_module(alg: StructAlgebra, space: FinSpace, left_fn) -> Bimodule:
    """A left module viewed as an (alg, k)-bimodule."""
    k = field_algebra(space.field)
    return bimodule_from_actions(
        alg, k, space,
        left_fn,
        lambda m, j: space.basis_vector(m),
    )


def right_module(alg: StructAlgebra, space: FinSpace, right_fn) -> Bimodule:
    """A right module viewed as a (k, alg)-bimodule."""
    k = field_algebra(space.field)
    return bimodule_from_actions(
        k, alg, space,
        lambda i, m: space.basis_vector(m),
        right_fn,
    )


@dataclass(frozen=True)
class BimoduleTensor:
    """x ⊗_base y as a quotient, carrying the descended outer actions."""

    left_factor: Bimodule
    right_factor: Bimodule
    base: StructAlgebra
    quotient: QuotientSpace
    bimodule: Bimodule     # outer actions on the quotient space

    @property
    def space(self):
        return self.quotient.space

    @property
    def dim(self):
        return self.quotient.dim

    def project_pure(self, u, v):
        amb = pure_tensor(self.left_factor.space, self.right_factor.space, u, v)
        return self.quotient.project(amb)


def tensor_over(x: Bimodule, y: Bimodule, base: StructAlgebra) -> BimoduleTensor:
    """x ⊗_base y with balancing relations (x.r)⊗y - x⊗(r.y).

    Precondition: right algebra of x == base == left algebra of y.
    The outer actions are checked to descend (they map the relation span
    into itself) before being installed on the quotient.
    """
    if x.right_alg is not base and x.right_alg != base:
        raise ValueError("right algebra of the left factor must be the base")
    if y.left_alg is not base and y.left_alg != base:
        raise ValueError("left algebra of the right factor must be the base")
    fld = x.field
    ambient = product_space(x.space, y.space)
    relations = []
    for i in range(x.dim):
        xi = x.space.basis_vector(i)
        for r in range(base.dim):
            xr = x.act_right(xi, base.space.basis_vector(r))
            for j in range(y.dim):
                yj = y.space.basis_vector(j)
                ry = y.act_left(base.space.basis_vector(r), yj)
                rel = vec_sub(
                    fld,
                    pure_tensor(x.space, y.space, xr, yj),
                    pure_tensor(x.space, y.space, xi, ry),
                )
                if not vec_is_zero(fld, rel):
                    relations.append(rel)
    quot = quotient_by(ambient, relations)

    # ambient outer actions
    def amb_left(a_idx, t_idx):
        i, j = divmod(t_idx, y.dim)
        av = x.left_alg.space.basis_vector(a_idx)
        return pure_tensor(x.space, y.space, x.act_left(av, x.space.basis_vector(i)), y.space.basis_vector(j))

    def amb_right(t_idx, b_idx):
        i, j = divmod(t_idx, y.dim)
        bv = y.right_alg.space.basis_vector(b_idx)
        return pure_tensor(x.space, y.space, x.space.basis_vector(i), y.act_right(y.space.basis_vector(j), bv))

    # descent check: each outer action must map relations into the relation span
    for rel in quot.relations:
        for a_idx in range(x.left_alg.dim):
            moved = _act_ambient_tensor(fld, x, y, rel, left_idx=a_idx)
            if not quot.contains_relation(moved):
                raise ValueError("left outer action does not descend to the tensor quotient")
        for b_idx in range(y.right_alg.dim):
            moved = _act_ambient_tensor(fld, x, y, rel, right_idx=b_idx)
            if not quot.contains_relation(moved):
                raise ValueError("right outer action does not descend to the tensor quotient")

    qspace = quot.space

    def q_left(a_idx, q_idx):
        amb = quot.lift(qspace.basis_vector(q_idx))
        moved = _act_ambient_tensor(fld, x, y, amb, left_idx=a_idx)
        return quot.project(moved)

    def q_right(q_idx, b_idx):
        amb = quot.lift(qspace.basis_vector(q_idx))
        moved = _act_ambient_tensor(fld, x, y, amb, right_idx=b_idx)
        return quot.project(moved)

    bim = bimodule_from_actions(x.left_alg, y.right_alg, qspace, q_left, q_right)
    return BimoduleTensor(x, y, base, quot, bim)


def _act_ambient_tensor(fld, x: Bimodule, y: Bimodule, amb_vec, left_idx=None, right_idx=None):
    """Apply an outer action legwise to an ambient tensor vector."""
    out = [fld.zero] * (x.dim * y.dim)
    for t, c in enumerate(amb_vec):
        if fld.is_zero(c):
            continue
        i, j = divmod(t, y.dim)
        if left_idx is not None:
            xi = x.act_left(x.left_alg.space.basis_vector(left_idx), x.space.basis_vector(i))
            part = pure_tensor(x.space, y.space, xi, y.space.basis_vector(j))
        else:
            yj = y.act_right(y.space.basis_vector(j), y.right_alg.space.basis_vector(right_idx))
            part = pure_tensor(x.space, y.space, x.space.basis_vector(i), yj)
        out = vec_axpy(fld, c, part, out)
    return out


@dataclass(frozen=True)
class HomSpace:
    """A space of intertwiners with its evaluation back to linear maps."""

    source: Bimodule
    target: Bimodule
    side: str
    space: FinSpace
    basis_maps: tuple

    @property
    def dim(self):
        return self.space.dim

    def evaluate(self, coords) -> LinMap:
        fld = self.source.field
        out = LinMap.zero(self.source.space, self.target.space)
        for c, m in zip(coords, self.basis_maps):
            if not fld.is_zero(c):
                out = out.add(m.scale(c))
        return out

    def coordinates(self, f: LinMap):
        """Coordinates of an intertwiner in the solution basis, or None."""
        fld = self.source.field
        gens = [m.flatten() for m in self.basis_maps]
        return express_in_span(fld, gens, len(f.flatten()), f.flatten())


def hom_space(x: Bimodule, y: Bimodule, side: str = "bi") -> HomSpace:
    """Solution space of the intertwiner equations f(a.m.b) = a.f(m).b.

    side: "left" (left-linear maps), "right", or "bi" (both).
    The basis is deterministic (echelonized nullspace, lowest pivots).
    """
    if side not in ("left", "right", "bi"):
        raise ValueError("side must be left, right or bi")
    fld = x.field
    nx, ny = x.dim, y.dim
    ncols = nx * ny           # unknown matrix f[q][m], row-major (q = target index)
    ech = Echelon(fld, ncols)

    def row_for(m_idx, out_coeff_map):
        # constraint: sum over unknowns
        row = [fld.zero] * ncols
        for (q, m), c in out_coeff_map.items():
            row[q * nx + m] = fld.add(row[q * nx + m], c)
        return row

    constraints = []
    if side in ("left", "bi"):
        for a in range(x.left_alg.dim):
            av = x.left_alg.space.basis_vector(a)
            act_y = [y.act_left(av, y.space.basis_vector(q)) for q in range(ny)]
            for m in range(nx):
                am = x.act_left(av, x.space.basis_vector(m))
                # f(a.m) - a.f(m) = 0, coordinates at each target index q0
                for q0 in range(ny):
                    coeffs = {}
                    for mm, c in enumerate(am):
                        if not fld.is_zero(c):
                            coeffs[(q0, mm)] = c
                    for q in range(ny):
                        c2 = act_y[q][q0]
                        if not fld.is_zero(c2):
                            key = (q, m)
                            coeffs[key] = fld.sub(coeffs.get(key, fld.zero), c2)
                    constraints.append(coeffs)
    if side in ("right", "bi"):
        for b in range(y.right_alg.dim):
            bv = y.right_alg.space.basis_vector(b)
            act_y = [y.act_right(y.space.basis_vector(q), bv) for q in range(ny)]
            for m in range(nx):
                mb = x.act_right(x.space.basis_vector(m), bv)
                for q0 in range(ny):
                    coeffs = {}
                    for mm, c in enumerate(mb):
                        if not fld.is_zero(c):
                            coeffs[(q0, mm)] = c
                    for q in range(ny):
                        c2 = act_y[q][q0]
                        if not fld.is_zero(c2):
                            key = (q, m)
                            coeffs[key] = fld.sub(coeffs.get(key, fld.zero), c2)
                    constraints.append(coeffs)
    for coeffs in constraints:
        row = [fld.zero] * ncols
        for (q, m), c in coeffs.items():
            row[q * nx + m] = fld.add(row[q * nx + m], c)
        ech.insert(row)

    # nullspace of the echelonized constraint rows
    pivots = ech.pivot_columns()
    free = ech.free_columns()
    basis_maps = []
    for j in free:
        v = [fld.zero] * ncols
        v[j] = fld.one
        for row, p in zip(ech.rows, pivots):
            v[p] = fld.neg(row[j])
        rows = [v[q * nx:(q + 1) * nx] for q in range(ny)]
        basis_maps.append(LinMap.from_rows(x.space, y.space, rows))
    space = FinSpace(fld, len(basis_maps), tuple(f"h{i}" for i in range(len(basis_maps))))
    return HomSpace(x, y, side, space, tuple(basis_maps))


@dataclass(frozen=True)
class FrobeniusData:
    """Frobenius homomorphism with a verified dual basis.

    dual_basis is a list of (u_i, v_i) vector pairs in the ambient algebra;
    both Frobenius equations
        sum_i u_i * phi(v_i * a) = a     and     sum_i phi(a * u_i) * v_i = a
    hold exactly on every basis element a.
    """

    extension: AlgebraMap
    frobenius_hom: LinMap          # ambient -> ambient, image in the subalgebra
    dual_basis: tuple              # ((u, v), ...)

    def verify(self, ambient: StructAlgebra) -> Report:
        rep = Report()
        fld = ambient.field
        bad1 = bad2 = None
        for k in range(ambient.dim):
            a = ambient.space.basis_vector(k)
            s1 = [fld.zero] * ambient.dim
            s2 = [fld.zero] * ambient.dim
            for (u, v) in self.dual_basis:
                s1 = vec_add(fld, s1, ambient.mul(list(u), self.frobenius_hom.apply(ambient.mul(list(v), a))))
                s2 = vec_add(fld, s2, ambient.mul(self.frobenius_hom.apply(ambient.mul(a, list(u))), list(v)))
            if bad1 is None and not vec_eq(fld, s1, a):
                bad1 = ambient.space.labels[k]
            if bad2 is None and not vec_eq(fld, s2, a):
                bad2 = ambient.space.labels[k]
        rep.add("frobenius.equation_left", bad1 is None, bad1)
        rep.add("frobenius.equation_right", bad2 is None, bad2)
        return rep


@dataclass(frozen=True)
class NotFrobenius:
    """Witness that no dual basis exists for the given homomorphism."""

    reason: str


def frobenius_dual_basis(incl: AlgebraMap, phi: LinMap, sub: SubAlgebra | None = None):
    """Solve for a dual basis of phi over the extension incl: X -> A.

    phi: A -> A must be an X-X-bimodule map with image in X (checked).
    The bilinear Frobenius equations are linear in the unknown tensor
    sum_i u_i ⊗ v_i ∈ A ⊗ A, so one exact solve decides existence; the
    deterministic pivot choice fixes the returned basis.
    Returns FrobeniusData or NotFrobenius.
    """
    amb = incl.target
    fld = amb.field
    n = amb.dim
    x_img = span_echelon(fld, n, [incl.map.column(j) for j in range(incl.source.dim)])
    for k in range(n):
        if not x_img.contains(phi.column(k)):
            return NotFrobenius(f"phi image leaves the subalgebra at basis {amb.space.labels[k]}")
    # X-X bimodule property of phi
    for j in range(incl.source.dim):
        xv = incl.map.column(j)
        lx = amb.left_mult_map(xv)
        rx = amb.right_mult_map(xv)
        if not phi.compose(lx).equals(lx.compose(phi)):
            return NotFrobenius(f"phi is not left linear over subalgebra generator {j}")
        if not phi.compose(rx).equals(rx.compose(phi)):
            return NotFrobenius(f"phi is not right linear over subalgebra generator {j}")
    # unknown w in A⊗A; equations indexed by (side, a, coordinate)
    ncols = n * n
    ech = Echelon(fld, ncols + 1)
    rows = []
    for a in range(n):
        av = amb.space.basis_vector(a)
        # sum_ij w_ij e_i * phi(e_j * a) = e_a
        phi_ja = [phi.apply(amb.basis_product(j, a)) for j in range(n)]
        phi_aj = [phi.apply(amb.basis_product(a, j)) for j in range(n)]
        for coord in range(n):
            row1 = [fld.zero] * (ncols + 1)
            row2 = [fld.zero] * (ncols + 1)
            for i in range(n):
                for j in range(n):
                    t1 = bilinear_coord(fld, amb, i, phi_ja[j], coord)
                    if not fld.is_zero(t1):
                        row1[i * n + j] = fld.add(row1[i * n + j], t1)
                    t2 = bilinear_coord_right(fld, amb, phi_aj[i], j, coord)
                    if not fld.is_zero(t2):
                        row2[i * n + j] = fld.add(row2[i * n + j], t2)
            row1[ncols] = fld.one if coord == a else fld.zero
            row2[ncols] = fld.one if coord == a else fld.zero
            rows.append(row1)
            rows.append(row2)
    for r in rows:
        ech.insert(r)
    if ncols in ech.pivot_columns():
        return NotFrobenius("the Frobenius equations are infeasible")
    w = [fld.zero] * ncols
    for row, p in zip(ech.rows, ech.pivot_of_row):
        if p < ncols:
            w[p] = row[ncols]
    pairs = []
    for i in range(n):
        for j in range(n):
            c = w[i * n + j]
            if not fld.is_zero(c):
                u = vec_scale(fld, c, amb.space.basis_vector(i))
                v = amb.space.basis_vector(j)
                pairs.append((tuple(u), tuple(v)))
    data = FrobeniusData(incl, phi, tuple(pairs))
    ver = data.verify(amb)
    if not ver.ok():
        return NotFrobenius("solver produced a tensor violating the Frobenius equations")
    return data


def bilinear_coord(fld, amb: StructAlgebra, i, vec, coord):
    """coordinate <coord> of e_i * vec."""
    acc = fld.zero
    for j, c in enumerate(vec):
        if not fld.is_zero(c):
            acc = fld.add(acc, fld.mul(c, amb.mult[i][j][coord]))
    return acc


def bilinear_coord_right(fld, amb: StructAlgebra, vec, j, coord):
    """coordinate <coord> of vec * e_j."""
    acc = fld.zero
    for i, c in enumerate(vec):
        if not fld.is_zero(c):
            acc = fld.add(acc, fld.mul(c, amb.mult[i][j][coord]))
    return acc


def centralizer(sub: AlgebraMap) -> SubAlgebra:
    """Elements of the target commuting with the image of sub."""
    amb = sub.target
    fld = amb.field
    n = amb.dim
    ech = Echelon(fld, n)
    rows = []
    for j in range(sub.source.dim):
        xv = sub.map.column(j)
        comm = amb.left_mult_map(xv).sub(amb.right_mult_map(xv))
        rows.extend([list(r) for r in comm.matrix])
    dummy_dom = amb.space
    dummy_cod = FinSpace(fld, len(rows), tuple(f"r{i}" for i in range(len(rows))))
    m = LinMap.from_rows(dummy_dom, dummy_cod, rows) if rows else LinMap.zero(dummy_dom, FinSpace(fld, 0, ()))
    _, kernel, _ = rank_kernel_image(m)
    labels = tuple(f"c{i}" for i in range(len(kernel)))
    return subalgebra_from_vectors(amb, kernel, labels=labels)


def center(a: StructAlgebra) -> SubAlgebra:
    return centralizer(AlgebraMap(a, a, LinMap.identity(a.space)))


def algebra_isomorphic_by(f: LinMap, source: StructAlgebra, target: StructAlgebra) -> Report:
    """Check that f is a bijective algebra map source -> target."""
    rep = Report()
    amap = AlgebraMap(source, target, f)
    rep.merge(amap.check())
    rank, _, _ = rank_kernel_image(f)
    rep.add("algebra_map.bijective", rank == source.dim == target.dim)
    return rep
