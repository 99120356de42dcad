"""Builders for the concrete test universe.

Groups are given by multiplication tables; from a group we build the two
standard finite-dimensional Hopf algebras (the group algebra kG with
Δ(g) = g⊗g, and the function algebra k^G with pointwise product), and
from any Hopf algebra with a normalized integral pair (Λ, λ) a double
algebra:

    ⋆ := Hopf multiplication, i := 1, e := Λ,
    ∘ := the dual convolution product pulled back along the Frobenius
         pairing ⟨h, h'⟩ = λ(h ⋆ h').

The pairing must be nondegenerate and λ(Λ) = 1 (we renormalize λ when
λ(Λ) is invertible, and reject otherwise — over F_p this enforces the
usual characteristic restrictions, e.g. p ∤ |G| for group algebras).

Every builder validates its output before returning it: a builder never
hands out unchecked data.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

from .algebra import StructAlgebra, check_algebra
from .double_algebra import (
    DoubleAlgebra,
    ValidatedDda,
    full_dda_suite,
)
from .linalg import (
    FinSpace,
    LinMap,
    invert,
    is_bijective,
    pure_tensor,
    solve_linear,
    vec_eq,
)
from .reporting import CheckFailure, Report


@dataclass(frozen=True)
class FiniteGroup:
    name: str
    labels: tuple          # identity first
    table: tuple           # table[i][j] = index of g_i g_j

    @property
    def order(self):
        return len(self.labels)

    def mul(self, i, j):
        return self.table[i][j]

    def inverse(self, i):
        for j in range(self.order):
            if self.table[i][j] == 0:
                return j
        raise ValueError(f"group table has no inverse for element {i}")

    def check(self):
        n = self.order
        assert all(self.table[0][j] == j and self.table[j][0] == j for j in range(n))
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    assert self.mul(self.mul(i, j), k) == self.mul(i, self.mul(j, k))
        for i in range(n):
            self.inverse(i)
        return self


def cyclic_group(n: int) -> FiniteGroup:
    labels = tuple("1" if k == 0 else f"g{k}" if n > 2 else "g" for k in range(n))
    table = tuple(tuple((i + j) % n for j in range(n)) for i in range(n))
    return FiniteGroup(f"C{n}", labels, table).check()


def symmetric_group(n: int) -> FiniteGroup:
    elems = sorted(permutations(range(n)))
    identity = tuple(range(n))
    elems.remove(identity)
    elems.insert(0, identity)
    index = {p: k for k, p in enumerate(elems)}

    def compose(p, q):  # (p∘q)(x) = p(q(x))
        return tuple(p[q[x]] for x in range(n))

    table = tuple(tuple(index[compose(p, q)] for q in elems) for p in elems)
    labels = tuple("".join(str(x) for x in p) for p in elems)
    return FiniteGroup(f"S{n}", labels, table).check()


TRIVIAL_GROUP = cyclic_group(1)


@dataclass(frozen=True)
class HopfData:
    """A finite-dimensional Hopf algebra with a chosen integral pair."""

    algebra: StructAlgebra
    comult: LinMap            # H -> H ⊗ H (plain tensor square)
    counit: LinMap            # H -> k
    antipode: LinMap
    integral: tuple           # Λ ∈ H
    dual_integral: tuple      # λ ∈ H*, stored by its values on the basis

    @property
    def field(self):
        return self.algebra.field

    def eval_dual_integral(self, vec):
        fld = self.field
        acc = fld.zero
        for c, l in zip(vec, self.dual_integral):
            if not (fld.is_zero(c) or fld.is_zero(l)):
                acc = fld.add(acc, fld.mul(c, l))
        return acc


def group_hopf(group: FiniteGroup, field) -> HopfData:
    """kG: Δ(g) = g⊗g, ε(g) = 1, S(g) = g⁻¹, Λ = Σ_g g, λ = coefficient of 1."""
    n = group.order
    space = FinSpace(field, n, group.labels)
    alg = StructAlgebra.from_products(
        space,
        lambda i, j: space.basis_vector(group.mul(i, j)),
        space.basis_vector(0),
    )
    sq = FinSpace(field, n * n, tuple(f"{a}⊗{b}" for a in group.labels for b in group.labels))
    comult = LinMap.from_columns(
        space, sq,
        [pure_tensor(space, space, space.basis_vector(g), space.basis_vector(g)) for g in range(n)],
    )
    kspace = FinSpace(field, 1, ("1",))
    counit = LinMap.from_rows(space, kspace, [[field.one] * n])
    antipode = LinMap.from_columns(
        space, space, [space.basis_vector(group.inverse(g)) for g in range(n)]
    )
    integral = [field.one] * n
    dual_integral = [field.one if g == 0 else field.zero for g in range(n)]
    return HopfData(alg, comult, counit, antipode, tuple(integral), tuple(dual_integral))


def function_hopf(group: FiniteGroup, field) -> HopfData:
    """k^G: pointwise product, Δ(p_h) = Σ_{ab=h} p_a⊗p_b, Λ = p_1, λ = Σ-evaluation."""
    n = group.order
    labels = tuple(f"p_{l}" for l in group.labels)
    space = FinSpace(field, n, labels)

    def point_prod(i, j):
        v = space.zero()
        if i == j:
            v[i] = field.one
        return v

    alg = StructAlgebra.from_products(space, point_prod, [field.one] * n)
    sq = FinSpace(field, n * n, tuple(f"{a}⊗{b}" for a in labels for b in labels))
    cols = []
    for h in range(n):
        v = [field.zero] * (n * n)
        for a in range(n):
            for b in range(n):
                if group.mul(a, b) == h:
                    v[a * n + b] = field.one
        cols.append(v)
    comult = LinMap.from_columns(space, sq, cols)
    kspace = FinSpace(field, 1, ("1",))
    counit = LinMap.from_rows(
        space, kspace, [[field.one if h == 0 else field.zero for h in range(n)]]
    )
    antipode = LinMap.from_columns(
        space, space, [space.basis_vector(group.inverse(h)) for h in range(n)]
    )
    integral = space.basis_vector(0)
    dual_integral = [field.one] * n
    return HopfData(alg, comult, counit, antipode, tuple(integral), tuple(dual_integral))


def trivial_hopf(field) -> HopfData:
    return group_hopf(TRIVIAL_GROUP, field)


@dataclass(frozen=True)
class DdaInstance:
    """A validated double algebra plus builder metadata used by tests."""

    name: str
    validated: ValidatedDda
    expected_antipode: LinMap | None = None

    @property
    def dda(self) -> DoubleAlgebra:
        return self.validated.dda

    @property
    def base(self):
        return self.validated.base

    @property
    def comuls(self):
        return self.validated.comuls

    @property
    def antipode(self):
        return self.validated.antipode


def dda_from_hopf(hopf: HopfData, name: str = "hopf-dda", validate: bool = True):
    """Double algebra of a Frobenius Hopf algebra.

    Rejects (CheckFailure) when λ(Λ) is not invertible or the pairing
    ⟨h,h'⟩ = λ(h⋆h') is singular; the witness names the offending datum.
    When validate is set the full suite runs and the solved antipode is
    compared with the transported Hopf antipode.
    """
    fld = hopf.field
    alg = hopf.algebra
    n = alg.dim
    space = alg.space
    rep = Report()

    s = hopf.eval_dual_integral(list(hopf.integral))
    if fld.is_zero(s):
        rep.add("hopf.integral_normalizable", False, "λ(Λ) = 0")
        raise CheckFailure("hopf.integral_normalizable", "λ(Λ) = 0")
    lam = [fld.div(v, s) for v in hopf.dual_integral]

    def lam_of(vec):
        acc = fld.zero
        for c, l in zip(vec, lam):
            if not (fld.is_zero(c) or fld.is_zero(l)):
                acc = fld.add(acc, fld.mul(c, l))
        return acc

    # Frobenius pairing K[x][h] = λ(e_x ⋆ e_h)
    pairing = LinMap.from_rows(
        space, space,
        [[lam_of(alg.basis_product(x, h)) for h in range(n)] for x in range(n)],
    )
    if not is_bijective(pairing):
        rep.add("hopf.pairing_nondegenerate", False, "singular Frobenius pairing")
        raise CheckFailure("hopf.pairing_nondegenerate", "the pairing λ(h⋆h') is singular")

    # transport the dual convolution: solve Σ_x w_x λ(e_x ⋆ e_h) = F_ab(h)
    comult_cols = [hopf.comult.column(h) for h in range(n)]

    def conv_functional(a_idx, b_idx):
        out = []
        for h in range(n):
            acc = fld.zero
            for t, c in enumerate(comult_cols[h]):
                if fld.is_zero(c):
                    continue
                h1, h2 = divmod(t, n)
                c1 = lam_of(alg.basis_product(a_idx, h1))
                if fld.is_zero(c1):
                    continue
                c2 = lam_of(alg.basis_product(b_idx, h2))
                if fld.is_zero(c2):
                    continue
                acc = fld.add(acc, fld.mul(c, fld.mul(c1, c2)))
            out.append(acc)
        return out

    # rows of the transposed pairing: row h, entries K[x][h]
    pairing_t = LinMap.from_rows(
        space, space,
        [[pairing.matrix[x][h] for x in range(n)] for h in range(n)],
    )
    pairing_t_inv = invert(pairing_t)

    def vprod(a_idx, b_idx):
        return pairing_t_inv.apply(conv_functional(a_idx, b_idx))

    vertical = StructAlgebra.from_products(space, vprod, list(hopf.integral))
    dda = DoubleAlgebra(space, vertical, alg)
    rep.merge(check_algebra(vertical), prefix="hopf.vertical.")
    if not rep.ok():
        bad = rep.failures()[0]
        raise CheckFailure(bad.rule, bad.witness)
    if not validate:
        return DdaInstance(name, ValidatedDda(dda, None, None, None, None, rep),
                           expected_antipode=hopf.antipode)
    validated = full_dda_suite(dda)
    inst = DdaInstance(name, validated, expected_antipode=hopf.antipode)
    if not validated.antipode.s.equals(hopf.antipode):
        raise CheckFailure(
            "hopf.antipode_transport",
            "solved double-algebra antipode differs from the Hopf antipode",
        )
    return inst


def trivial_dda(field, validate: bool = True) -> DdaInstance:
    return dda_from_hopf(trivial_hopf(field), name="trivial", validate=validate)


def group_dda(group: FiniteGroup, field, validate: bool = True) -> DdaInstance:
    return dda_from_hopf(group_hopf(group, field), name=f"k{group.name}", validate=validate)


def function_dda(group: FiniteGroup, field, validate: bool = True) -> DdaInstance:
    return dda_from_hopf(function_hopf(group, field), name=f"k^{group.name}", validate=validate)


def function_module_algebra(group: FiniteGroup, field, dda_instance: DdaInstance | None = None):
    """k^G with the translation action of the group-algebra double algebra.

    (f ◁ g)(x) = f(gx); invariants are the constants, and the extension
    k ⊆ k^G is the classical Galois test case.
    """
    from .representation import HModuleAlgebra, check_module_algebra, module_from_action

    inst = dda_instance or group_dda(group, field)
    ctx = inst.validated
    n = group.order
    space = FinSpace(field, n, tuple(f"p_{l}" for l in group.labels))

    def point_prod(i, j):
        v = space.zero()
        if i == j:
            v[i] = field.one
        return v

    algebra = StructAlgebra.from_products(space, point_prod, [field.one] * n)

    def act(x, g):
        # p_x ◁ g = p_{g⁻¹ x}
        return space.basis_vector(group.mul(group.inverse(g), x))

    module = module_from_action(ctx, space, act)
    rsub = ctx.base.R.sub
    eta = LinMap.from_columns(rsub.algebra.space, space, [[field.one] * n])
    modalg = HModuleAlgebra(module, algebra, eta)
    rep = check_module_algebra(modalg)
    if not rep.ok():
        bad = rep.failures()[0]
        raise CheckFailure(f"function_module.{bad.rule}", bad.witness)
    return modalg


@dataclass(frozen=True)
class MatrixExtension:
    """M_n over the diagonal, graded by a cyclic group.

    modalg realizes M_n as a module algebra over the function double
    algebra of C_n (the grading action); diag is the diagonal subalgebra,
    which coincides with the invariants.
    """

    modalg: object
    matrix_algebra: StructAlgebra
    diag: object              # SubAlgebra of matrix_algebra


def matrix_algebra(n: int, field) -> StructAlgebra:
    labels = tuple(f"E{x}{y}" for x in range(n) for y in range(n))
    space = FinSpace(field, n * n, labels)

    def prod(i, j):
        x, y = divmod(i, n)
        z, w = divmod(j, n)
        v = space.zero()
        if y == z:
            v[x * n + w] = field.one
        return v

    unit = space.zero()
    for x in range(n):
        unit[x * n + x] = field.one
    return StructAlgebra.from_products(space, prod, unit)


def matrix_extension(n: int, field, dda_instance: DdaInstance | None = None) -> MatrixExtension:
    """M_n(k) ⊇ diagonal as a graded module algebra over k^{C_n}.

    The matrix unit E_{xy} sits in degree y−x mod n; the action of p_h
    keeps exactly the degree-h component.  Invariants = diagonal.
    """
    from .algebra import subalgebra_from_vectors
    from .representation import HModuleAlgebra, check_module_algebra, module_from_action

    if n < 1:
        raise ValueError("matrix size must be at least 1")
    group = cyclic_group(n)
    inst = dda_instance or function_dda(group, field)
    ctx = inst.validated
    alg = matrix_algebra(n, field)
    space = alg.space

    def act(m_idx, h):
        x, y = divmod(m_idx, n)
        deg = (y - x) % n
        v = space.zero()
        if deg == h:
            v[m_idx] = field.one
        return v

    module = module_from_action(ctx, space, act)
    rsub = ctx.base.R.sub
    eta = LinMap.from_columns(rsub.algebra.space, space, [list(alg.unit)])
    modalg = HModuleAlgebra(module, alg, eta)
    rep = check_module_algebra(modalg)
    if not rep.ok():
        bad = rep.failures()[0]
        raise CheckFailure(f"matrix_extension.{bad.rule}", bad.witness)
    diag_vectors = [space.basis_vector(x * n + x) for x in range(n)]
    diag = subalgebra_from_vectors(alg, diag_vectors, labels=tuple(f"d{x}" for x in range(n)))
    return MatrixExtension(modalg, alg, diag)
