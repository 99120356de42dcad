"""Right modules and comodules over a validated double algebra.

A right module is an associative unital action of the horizontal algebra
H = ⟨A,⋆,i⟩, written m◁h; restricting along B and T gives the two base
actions m↽b and m↼t, and r·m·r' = m◁(Φ_B(r)⋆Φ_T(r')) makes every module
an R-R-bimodule.

A right comodule is a pair of coactions δ_M: M → M⊗_B A and
δ^M: M → M⊗_T A that are coassociative and counital over their
bialgebroid views and satisfy the two mixed coassociativity squares.
Actions and coactions determine each other:

    δ^M(m) = m◁u^k ⊗ v^k          δ_M(m) = m◁u_k ⊗ v_k
    m◁h = m_(0) ↽ Φ_B(m_(1)⋆h) = m^(0) ↼ Φ_T(m^(1)⋆h)

and the library stores both coactions so the mixed squares can be
cross-checked rather than assumed.

A module algebra adds a multiplication with (mm')◁h = (m◁h^[1])(m'◁h^[2])
and a unit map η: R → M with 1◁h = η(Φ_R(h)); its invariants
M^H = {n | n◁h = n◁Φ_TΦ_R(h)} form a subalgebra isomorphic to the
convolution algebra of module maps R → M.  The smash product H#M lives
on H⊗_R M with (h#m)(h'#m') = h⋆h'^[1] # (m◁h'^[2])m'.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import (
    AlgebraMap,
    StructAlgebra,
    SubAlgebra,
    bilinear_apply,
    check_algebra,
    subalgebra_from_vectors,
)
from .double_algebra import ValidatedDda, tensor_pairs
from .linalg import (
    Echelon,
    FinSpace,
    LinMap,
    QuotientSpace,
    pure_tensor,
    quotient_by,
    rank_kernel_image,
    span_echelon,
    vec_eq,
    vec_is_zero,
    vec_sub,
)
from .reporting import CheckFailure, Report


@dataclass(frozen=True)
class RightHModule:
    """An action of the horizontal algebra, with the induced base actions."""

    ctx: ValidatedDda
    space: FinSpace
    action: tuple          # action[m][a] = e_m ◁ e_a

    @property
    def field(self):
        return self.space.field

    @property
    def dim(self):
        return self.space.dim

    def act(self, m_vec, a_vec):
        return bilinear_apply(self.field, self.action, m_vec, a_vec, self.dim)

    def act_map(self, a_vec) -> LinMap:
        cols = [self.act(self.space.basis_vector(m), a_vec) for m in range(self.dim)]
        return LinMap.from_columns(self.space, self.space, cols)

    def act_by_base(self, m_vec, site_name: str, base_idx: int):
        """m ◁ (embedded basis element of the base subalgebra)."""
        sub = self.ctx.base.sites[site_name].sub
        return self.act(m_vec, sub.embedding.column(base_idx))

    def check(self) -> Report:
        rep = Report()
        fld = self.field
        dda = self.ctx.dda
        n, na = self.dim, dda.dim
        ok = all(
            vec_eq(fld, self.act(self.space.basis_vector(m), dda.i), self.space.basis_vector(m))
            for m in range(n)
        )
        rep.add("module.unital", ok)
        bad = None
        for m in range(n):
            mv = self.space.basis_vector(m)
            for a in range(na):
                ma = self.act(mv, dda.space.basis_vector(a))
                for b in range(na):
                    lhs = self.act(ma, dda.space.basis_vector(b))
                    rhs = self.act(mv, dda.horizontal.basis_product(a, b))
                    if not vec_eq(fld, lhs, rhs):
                        bad = f"(m={self.space.labels[m]}, a={dda.space.labels[a]}, b={dda.space.labels[b]})"
                        break
                if bad:
                    break
            if bad:
                break
        rep.add("module.associative", bad is None, bad)
        # induced B and T actions commute
        bsub = self.ctx.base.B.sub
        tsub = self.ctx.base.T.sub
        bad = None
        for m in range(n):
            mv = self.space.basis_vector(m)
            for b in range(bsub.dim):
                bv = bsub.embedding.column(b)
                mb = self.act(mv, bv)
                for t in range(tsub.dim):
                    tv = tsub.embedding.column(t)
                    if not vec_eq(fld, self.act(mb, tv), self.act(self.act(mv, tv), bv)):
                        bad = f"(m={m}, b={b}, t={t})"
                        break
                if bad:
                    break
            if bad:
                break
        rep.add("module.base_actions_commute", bad is None, bad)
        return rep


def module_from_action(ctx: ValidatedDda, space: FinSpace, act_fn) -> RightHModule:
    action = [
        [act_fn(m, a) for a in range(ctx.dda.dim)]
        for m in range(space.dim)
    ]
    return RightHModule(ctx, space, tuple(tuple(tuple(v) for v in row) for row in action))


@dataclass(frozen=True)
class SubSpace:
    """A subspace with embedding and a retraction onto it."""

    ambient: FinSpace
    space: FinSpace
    embedding: LinMap
    coords: LinMap

    @property
    def dim(self):
        return self.space.dim

    def contains(self, vec) -> bool:
        fld = self.ambient.field
        return vec_eq(fld, self.embedding.apply(self.coords.apply(vec)), vec)


def _subspace_from_kernel(space: FinSpace, vectors, label_prefix="n") -> SubSpace:
    fld = space.field
    ech = span_echelon(fld, space.dim, vectors)
    basis = ech.basis()
    sub_space = FinSpace(fld, len(basis), tuple(f"{label_prefix}{k}" for k in range(len(basis))))
    embedding = LinMap.from_columns(sub_space, space, basis)
    pivots = ech.pivot_columns()
    rows = []
    for k in range(len(basis)):
        row = [fld.zero] * space.dim
        row[pivots[k]] = fld.one
        rows.append(row)
    coords = LinMap.from_rows(space, sub_space, rows)
    return SubSpace(space, sub_space, embedding, coords)


def invariants(module: RightHModule) -> SubSpace:
    """M^H: solutions of n◁h = n◁Φ_TΦ_R(h), computed four ways and compared.

    The four routes (action condition through Φ_TΦ_R, through Φ_BΦ_R, and
    coinvariance of either coaction) must agree; disagreement raises,
    since it would mean the ambient double algebra is inconsistent.
    """
    ctx = module.ctx
    fld = module.field
    dda = ctx.dda
    rows = []
    phi_TR = ctx.base.T.phi.compose(ctx.base.R.phi)
    phi_BR = ctx.base.B.phi.compose(ctx.base.R.phi)
    rows_alt = []
    for a in range(dda.dim):
        av = dda.space.basis_vector(a)
        d1 = module.act_map(av).sub(module.act_map(phi_TR.apply(av)))
        d2 = module.act_map(av).sub(module.act_map(phi_BR.apply(av)))
        rows.extend([list(r) for r in d1.matrix])
        rows_alt.extend([list(r) for r in d2.matrix])
    # n is invariant iff every difference map kills it
    sub = _invariant_kernel(module, rows)
    sub_alt = _invariant_kernel(module, rows_alt)
    ech = span_echelon(fld, module.dim, [sub.embedding.column(j) for j in range(sub.dim)])
    ech_alt = span_echelon(fld, module.dim, [sub_alt.embedding.column(j) for j in range(sub_alt.dim)])
    if not ech.equals_span(ech_alt):
        raise CheckFailure("invariants.two_action_conditions_agree")
    com = coactions_from_action(module)
    for quot, lift, rule in (
        (com.quot_T, com.delta_T_lift, "T"),
        (com.quot_B, com.delta_B_lift, "B"),
    ):
        n = module.dim
        # coinvariants: kernel of m ↦ δ(m) - m⊗e in the quotient
        mat_rows = []
        for m in range(n):
            base = pure_tensor(module.space, dda.space, module.space.basis_vector(m), dda.e)
            diff_cols_m = vec_sub(fld, lift.column(m), base)
            mat_rows.append(quot.project(diff_cols_m))
        # kernel of m ↦ [δ(m) - m⊗e]
        mm = LinMap.from_columns(module.space, quot.space, mat_rows)
        _, kern, _ = rank_kernel_image(mm)
        ech_co = span_echelon(fld, module.dim, kern)
        if not ech.equals_span(ech_co):
            raise CheckFailure(f"invariants.coinvariants_{rule}_agree")
    return sub


def _invariant_kernel(module: RightHModule, rows) -> SubSpace:
    fld = module.field
    cod = FinSpace(fld, len(rows), tuple(f"r{i}" for i in range(len(rows))))
    m = LinMap.from_rows(module.space, cod, rows)
    _, kernel, _ = rank_kernel_image(m)
    return _subspace_from_kernel(module.space, kernel)


@dataclass(frozen=True)
class RightVComodule:
    """Both coactions of a right comodule, with their quotient targets."""

    ctx: ValidatedDda
    space: FinSpace
    act_B: tuple            # act_B[m][j] = m ↽ (B basis j), for the ⊗_B balancing
    act_T: tuple
    quot_B: QuotientSpace   # M ⊗_B A
    quot_T: QuotientSpace   # M ⊗_T A
    delta_B_lift: LinMap    # M -> M ⊗ A (ambient), canonical representative
    delta_T_lift: LinMap

    @property
    def field(self):
        return self.space.field

    def delta_B(self) -> LinMap:
        return self.quot_B.projection.compose(self.delta_B_lift)

    def delta_T(self) -> LinMap:
        return self.quot_T.projection.compose(self.delta_T_lift)


def module_coaction_quotients(ctx: ValidatedDda, space: FinSpace, act_B, act_T):
    """M⊗_B A and M⊗_T A for a module with the given base actions."""
    fld = space.field
    dda = ctx.dda
    na = dda.dim
    quots = []
    for site_name, act in (("B", act_B), ("T", act_T)):
        sub = ctx.base.sites[site_name].sub
        relations = []
        for m in range(space.dim):
            for j in range(sub.dim):
                mb = act[m][j]
                bv = sub.embedding.column(j)
                for a in range(na):
                    left = pure_tensor(space, dda.space, mb, dda.space.basis_vector(a))
                    right = pure_tensor(
                        space, dda.space, space.basis_vector(m), dda.hmul(bv, dda.space.basis_vector(a))
                    )
                    rel = vec_sub(fld, left, right)
                    if not vec_is_zero(fld, rel):
                        relations.append(rel)
        ambient = FinSpace(
            fld, space.dim * na,
            tuple(f"{lm}⊗{la}" for lm in space.labels for la in dda.space.labels),
        )
        quots.append(quotient_by(ambient, relations))
    return quots[0], quots[1]


def coactions_from_action(module: RightHModule) -> RightVComodule:
    """δ^M(m) = m◁u^k ⊗ v^k and δ_M(m) = m◁u_k ⊗ v_k."""
    ctx = module.ctx
    fld = module.field
    dda = ctx.dda
    space = module.space
    bsub = ctx.base.B.sub
    tsub = ctx.base.T.sub
    act_B = tuple(
        tuple(tuple(module.act_by_base(space.basis_vector(m), "B", j)) for j in range(bsub.dim))
        for m in range(space.dim)
    )
    act_T = tuple(
        tuple(tuple(module.act_by_base(space.basis_vector(m), "T", j)) for j in range(tsub.dim))
        for m in range(space.dim)
    )
    quot_B, quot_T = module_coaction_quotients(ctx, space, act_B, act_T)
    cols_B, cols_T = [], []
    for m in range(space.dim):
        mv = space.basis_vector(m)
        acc_B = [fld.zero] * (space.dim * dda.dim)
        for (u, v) in ctx.base.B.dual_basis:
            t = pure_tensor(space, dda.space, module.act(mv, list(u)), list(v))
            acc_B = [fld.add(x, y) for x, y in zip(acc_B, t)]
        cols_B.append(acc_B)
        acc_T = [fld.zero] * (space.dim * dda.dim)
        for (u, v) in ctx.base.T.dual_basis:
            t = pure_tensor(space, dda.space, module.act(mv, list(u)), list(v))
            acc_T = [fld.add(x, y) for x, y in zip(acc_T, t)]
        cols_T.append(acc_T)
    ambient = quot_B.ambient
    delta_B_lift = LinMap.from_columns(space, ambient, cols_B)
    delta_T_lift = LinMap.from_columns(space, quot_T.ambient, cols_T)
    return RightVComodule(ctx, space, act_B, act_T, quot_B, quot_T, delta_B_lift, delta_T_lift)


def check_comodule(com: RightVComodule) -> Report:
    """Per-coaction coassociativity and counitality plus both mixed squares."""
    rep = Report()
    ctx = com.ctx
    fld = com.field
    dda = ctx.dda
    n, na = com.space.dim, dda.dim

    # counitality: m_(0) ↽ Φ_B(m_(1)) = m and m^(0) ↼ Φ_T(m^(1)) = m
    for site_name, lift, rule in (
        ("B", com.delta_B_lift, "comodule.B.counital"),
        ("T", com.delta_T_lift, "comodule.T.counital"),
    ):
        sub = ctx.base.sites[site_name].sub
        phi = ctx.base.sites[site_name].phi
        act = com.act_B if site_name == "B" else com.act_T
        bad = None
        for m in range(n):
            acc = [fld.zero] * n
            for c, x, a in tensor_pairs(fld, lift.column(m), na):
                bcoords = sub.coords.apply(phi.apply(dda.space.basis_vector(a)))
                for j, cb in enumerate(bcoords):
                    if fld.is_zero(cb):
                        continue
                    term = act[x][j]
                    cc = fld.mul(c, cb)
                    for idx, cv in enumerate(term):
                        if not fld.is_zero(cv):
                            acc[idx] = fld.add(acc[idx], fld.mul(cc, cv))
            if not vec_eq(fld, acc, com.space.basis_vector(m)):
                bad = com.space.labels[m]
                break
        rep.add(rule, bad is None, bad)

    # coassociativity over each view, through M ⊗_X A ⊗_X A
    for site_name, lift, rule in (
        ("B", com.delta_B_lift, "comodule.B.coassociative"),
        ("T", com.delta_T_lift, "comodule.T.coassociative"),
    ):
        site = ctx.base.sites[site_name]
        triple = _module_triple_quotient(com, site_name, site_name)
        comul_lift = ctx.comuls.lifts[site_name]
        bad = None
        for m in range(n):
            left = [fld.zero] * (n * na * na)
            right = [fld.zero] * (n * na * na)
            for c, x, a in tensor_pairs(fld, lift.column(m), na):
                for c2, x2, a2 in tensor_pairs(fld, lift.column(x), na):
                    left[(x2 * na + a2) * na + a] = fld.add(
                        left[(x2 * na + a2) * na + a], fld.mul(c, c2)
                    )
                for c2, p, q in tensor_pairs(fld, comul_lift.column(a), na):
                    right[(x * na + p) * na + q] = fld.add(
                        right[(x * na + p) * na + q], fld.mul(c, c2)
                    )
            if not vec_is_zero(fld, triple.reduce(vec_sub(fld, left, right))):
                bad = com.space.labels[m]
                break
        rep.add(rule, bad is None, bad)

    # mixed coassociativity
    rep.add("comodule.mixed_coassociativity_1", *_mixed_square(com, first="T"))
    rep.add("comodule.mixed_coassociativity_2", *_mixed_square(com, first="B"))
    return rep


def _module_triple_quotient(com: RightVComodule, mid_site: str, last_site: str) -> Echelon:
    """Relation span of M ⊗_mid A ⊗_last A (echelon, for membership tests)."""
    ctx = com.ctx
    fld = com.field
    dda = ctx.dda
    n, na = com.space.dim, dda.dim
    total = n * na * na
    ech = Echelon(fld, total)
    mid_sub = ctx.base.sites[mid_site].sub
    act_mid = com.act_B if mid_site == "B" else com.act_T
    for m in range(n):
        for j in range(mid_sub.dim):
            mb = act_mid[m][j]
            bv = mid_sub.embedding.column(j)
            for a in range(na):
                ba = dda.hmul(bv, dda.space.basis_vector(a))
                for a2 in range(na):
                    rel = [fld.zero] * total
                    for idx, cv in enumerate(mb):
                        if not fld.is_zero(cv):
                            rel[(idx * na + a) * na + a2] = fld.add(
                                rel[(idx * na + a) * na + a2], cv
                            )
                    for idx, cv in enumerate(ba):
                        if not fld.is_zero(cv):
                            rel[(m * na + idx) * na + a2] = fld.sub(
                                rel[(m * na + idx) * na + a2], cv
                            )
                    ech.insert(rel)
    last_sub = ctx.base.sites[last_site].sub
    for m in range(n):
        for a in range(na):
            for j in range(last_sub.dim):
                bv = last_sub.embedding.column(j)
                ab = dda.hmul(dda.space.basis_vector(a), bv)
                ba2 = [dda.hmul(bv, dda.space.basis_vector(a2)) for a2 in range(na)]
                for a2 in range(na):
                    rel = [fld.zero] * total
                    for idx, cv in enumerate(ab):
                        if not fld.is_zero(cv):
                            rel[(m * na + idx) * na + a2] = fld.add(
                                rel[(m * na + idx) * na + a2], cv
                            )
                    for idx, cv in enumerate(ba2[a2]):
                        if not fld.is_zero(cv):
                            rel[(m * na + a) * na + idx] = fld.sub(
                                rel[(m * na + a) * na + idx], cv
                            )
                    ech.insert(rel)
    return ech


def _mixed_square(com: RightVComodule, first: str):
    """One mixed coassociativity square.

    first="T": δ^M then δ_M on the module leg, versus δ_M then Δ_T on the
    algebra leg (inside M⊗_B A⊗_T A).  first="B" is the mirror square.
    """
    ctx = com.ctx
    fld = com.field
    dda = ctx.dda
    n, na = com.space.dim, dda.dim
    if first == "T":
        outer_lift, inner_lift = com.delta_T_lift, com.delta_B_lift
        comul_lift = ctx.comuls.lifts["T"]
        triple = _module_triple_quotient(com, mid_site="B", last_site="T")
    else:
        outer_lift, inner_lift = com.delta_B_lift, com.delta_T_lift
        comul_lift = ctx.comuls.lifts["B"]
        triple = _module_triple_quotient(com, mid_site="T", last_site="B")
    for m in range(n):
        lhs = [fld.zero] * (n * na * na)
        rhs = [fld.zero] * (n * na * na)
        for c, x, a in tensor_pairs(fld, outer_lift.column(m), na):
            for c2, x2, a2 in tensor_pairs(fld, inner_lift.column(x), na):
                lhs[(x2 * na + a2) * na + a] = fld.add(
                    lhs[(x2 * na + a2) * na + a], fld.mul(c, c2)
                )
        for c, x, a in tensor_pairs(fld, inner_lift.column(m), na):
            for c2, p, q in tensor_pairs(fld, comul_lift.column(a), na):
                rhs[(x * na + p) * na + q] = fld.add(
                    rhs[(x * na + p) * na + q], fld.mul(c, c2)
                )
        if not vec_is_zero(fld, triple.reduce(vec_sub(fld, lhs, rhs))):
            return False, com.space.labels[m]
    return True, None


def action_from_coactions(com: RightVComodule) -> RightHModule:
    """m◁h = m_(0) ↽ Φ_B(m_(1)⋆h) = m^(0) ↼ Φ_T(m^(1)⋆h); both must agree.

    Raises CheckFailure("coaction.mismatch") with a witness element when
    the two formulas disagree, which happens exactly when the mixed
    coassociativity squares fail.
    """
    ctx = com.ctx
    fld = com.field
    dda = ctx.dda
    n, na = com.space.dim, dda.dim
    bsub, tsub = ctx.base.B.sub, ctx.base.T.sub
    phi_B, phi_T = ctx.base.B.phi, ctx.base.T.phi
    action = []
    for m in range(n):
        row = []
        for h in range(na):
            hv = dda.space.basis_vector(h)
            via_B = [fld.zero] * n
            for c, x, a in tensor_pairs(fld, com.delta_B_lift.column(m), na):
                w = phi_B.apply(dda.hmul(dda.space.basis_vector(a), hv))
                wc = bsub.coords.apply(w)
                for j, cb in enumerate(wc):
                    if fld.is_zero(cb):
                        continue
                    term = com.act_B[x][j]
                    cc = fld.mul(c, cb)
                    for idx, cv in enumerate(term):
                        if not fld.is_zero(cv):
                            via_B[idx] = fld.add(via_B[idx], fld.mul(cc, cv))
            via_T = [fld.zero] * n
            for c, x, a in tensor_pairs(fld, com.delta_T_lift.column(m), na):
                w = phi_T.apply(dda.hmul(dda.space.basis_vector(a), hv))
                wc = tsub.coords.apply(w)
                for j, ct in enumerate(wc):
                    if fld.is_zero(ct):
                        continue
                    term = com.act_T[x][j]
                    cc = fld.mul(c, ct)
                    for idx, cv in enumerate(term):
                        if not fld.is_zero(cv):
                            via_T[idx] = fld.add(via_T[idx], fld.mul(cc, cv))
            if not vec_eq(fld, via_B, via_T):
                raise CheckFailure(
                    "coaction.mismatch",
                    f"the two induced actions differ at (m={com.space.labels[m]}, h={dda.space.labels[h]})",
                )
            row.append(via_B)
        action.append(row)
    return RightHModule(ctx, com.space, tuple(tuple(tuple(v) for v in r) for r in action))


@dataclass(frozen=True)
class HModuleAlgebra:
    """A module that is an algebra, with unit map η: R → M."""

    module: RightHModule
    algebra: StructAlgebra
    eta: LinMap                # R subalgebra space -> M

    @property
    def ctx(self):
        return self.module.ctx

    @property
    def space(self):
        return self.module.space

    @property
    def field(self):
        return self.module.field

    @property
    def dim(self):
        return self.module.dim

    def eta_of_ambient(self, vec_in_A):
        """η applied to an ambient element of A known to lie in R."""
        rsub = self.ctx.base.R.sub
        return self.eta.apply(rsub.coords.apply(vec_in_A))

    def unit_vec(self):
        return list(self.algebra.unit)


def check_module_algebra(m: HModuleAlgebra) -> Report:
    """All module-algebra laws on basis tuples, plus the comodule laws.

    Includes the R-bimodule compatibilities η(r)·m = m◁Φ_B(r) and
    m·η(r) = m◁Φ_T(r) which make the multiplication ⊗_R-balanced, and the
    pinned unit coaction value 1^(0) ⊗ 1^(1) = 1 ⊗ e.
    """
    rep = Report()
    ctx = m.ctx
    fld = m.field
    dda = ctx.dda
    n, na = m.dim, dda.dim
    rep.merge(m.module.check())
    rep.merge(check_algebra(m.algebra), prefix="module_algebra.")

    rsub = ctx.base.R.sub
    eta_map = AlgebraMap(rsub.algebra, m.algebra, m.eta)
    erep = eta_map.check()
    rep.add("module_algebra.eta_algebra_map", erep.ok(),
            None if erep.ok() else erep.failures()[0].rule)

    # unit law 1◁h = η(Φ_R(h))
    one = m.unit_vec()
    bad = None
    for h in range(na):
        hv = dda.space.basis_vector(h)
        lhs = m.module.act(one, hv)
        rhs = m.eta_of_ambient(ctx.base.R.phi.apply(hv))
        if not vec_eq(fld, lhs, rhs):
            bad = dda.space.labels[h]
            break
    rep.add("module_algebra.unit_law", bad is None, bad)

    # η(r)m = m◁Φ_B(r),  mη(r) = m◁Φ_T(r)
    bad = None
    for j in range(rsub.dim):
        rv = rsub.embedding.column(j)
        eta_r = m.eta.apply(rsub.algebra.space.basis_vector(j))
        phiB_r = ctx.base.B.phi.apply(rv)
        phiT_r = ctx.base.T.phi.apply(rv)
        for k in range(n):
            mv = m.space.basis_vector(k)
            if not vec_eq(fld, m.algebra.mul(eta_r, mv), m.module.act(mv, phiB_r)):
                bad = f"left at (r={j}, m={k})"
                break
            if not vec_eq(fld, m.algebra.mul(mv, eta_r), m.module.act(mv, phiT_r)):
                bad = f"right at (r={j}, m={k})"
                break
        if bad:
            break
    rep.add("module_algebra.eta_matches_base_actions", bad is None, bad)

    # (mm')◁h = (m◁h^[1])(m'◁h^[2])
    lift_R = ctx.comuls.lifts["R"]
    bad = None
    for h in range(na):
        pairs = list(tensor_pairs(fld, lift_R.column(h), na))
        act_legs = {}
        for _, p, q in pairs:
            for leg in (p, q):
                if leg not in act_legs:
                    act_legs[leg] = m.module.act_map(dda.space.basis_vector(leg))
        hv = dda.space.basis_vector(h)
        for k1 in range(n):
            v1 = m.space.basis_vector(k1)
            for k2 in range(n):
                v2 = m.space.basis_vector(k2)
                lhs = m.module.act(m.algebra.basis_product(k1, k2), hv)
                rhs = [fld.zero] * n
                for c, p, q in pairs:
                    term = m.algebra.mul(act_legs[p].column(k1), act_legs[q].column(k2))
                    for idx, cv in enumerate(term):
                        if not fld.is_zero(cv):
                            rhs[idx] = fld.add(rhs[idx], fld.mul(c, cv))
                if not vec_eq(fld, lhs, rhs):
                    bad = f"(m={m.space.labels[k1]}, m'={m.space.labels[k2]}, h={dda.space.labels[h]})"
                    break
            if bad:
                break
        if bad:
            break
    rep.add("module_algebra.action_law", bad is None, bad)

    # comodule algebra laws through the coactions
    com = coactions_from_action(m.module)
    rep.merge(check_comodule(com))
    for site_name, lift, quot, rule in (
        ("T", com.delta_T_lift, com.quot_T, "comodule_algebra.T"),
        ("B", com.delta_B_lift, com.quot_B, "comodule_algebra.B"),
    ):
        bad = None
        for k1 in range(n):
            for k2 in range(n):
                prod = m.algebra.basis_product(k1, k2)
                lhs = [fld.zero] * (n * na)
                for idx, cv in enumerate(prod):
                    if fld.is_zero(cv):
                        continue
                    col = lift.column(idx)
                    for t, cc in enumerate(col):
                        if not fld.is_zero(cc):
                            lhs[t] = fld.add(lhs[t], fld.mul(cv, cc))
                rhs = [fld.zero] * (n * na)
                for c1, x1, a1 in tensor_pairs(fld, lift.column(k1), na):
                    for c2, x2, a2 in tensor_pairs(fld, lift.column(k2), na):
                        mm = m.algebra.basis_product(x1, x2)
                        aa = dda.vertical.basis_product(a1, a2)
                        t = pure_tensor(m.space, dda.space, mm, aa)
                        cc = fld.mul(c1, c2)
                        for idx, cv in enumerate(t):
                            if not fld.is_zero(cv):
                                rhs[idx] = fld.add(rhs[idx], fld.mul(cc, cv))
                if not vec_eq(fld, quot.project(lhs), quot.project(rhs)):
                    bad = f"(m={k1}, m'={k2})"
                    break
            if bad:
                break
        rep.add(rule, bad is None, bad)
    # unit coaction value: 1 ⊗ e
    unit_T = pure_tensor(m.space, dda.space, m.unit_vec(), dda.e)
    lhs = [fld.zero] * (n * na)
    for idx, cv in enumerate(m.unit_vec()):
        if fld.is_zero(cv):
            continue
        col = com.delta_T_lift.column(idx)
        for t, cc in enumerate(col):
            if not fld.is_zero(cc):
                lhs[t] = fld.add(lhs[t], fld.mul(cv, cc))
    rep.add(
        "comodule_algebra.unit_coaction",
        vec_eq(fld, com.quot_T.project(lhs), com.quot_T.project(unit_T)),
    )
    return rep


def invariants_subalgebra(m: HModuleAlgebra):
    """M^H as a SubAlgebra, plus the convolution-algebra comparison report.

    The comparison realizes the module maps R → M, shows ξ ↦ ξ(e) is a
    bijection onto M^H, and that the convolution product (ξ*ξ')(r) =
    ξ(e)ξ'(r) is carried to the product of M^H.
    """
    rep = Report()
    ctx = m.ctx
    fld = m.field
    inv = invariants(m.module)
    vectors = [inv.embedding.column(j) for j in range(inv.dim)]
    sub = subalgebra_from_vectors(
        m.algebra, vectors, labels=tuple(f"n{k}" for k in range(inv.dim))
    )
    rep.add("invariants.subalgebra_closed", True)

    # Hom_H(R, M): R is the trivial module r◁h = r⋆h
    r_mod = trivial_module_R(ctx)
    maps = module_hom(r_mod, m.module)
    rep.add("invariants.hom_dimension_matches", len(maps) == inv.dim,
            f"dim Hom = {len(maps)}, dim invariants = {inv.dim}")
    rsub = ctx.base.R.sub
    e_coords = rsub.coords.apply(ctx.dda.e)
    eval_cols = [f.apply(e_coords) for f in maps]
    ok_bij = span_echelon(fld, m.dim, eval_cols).rank == inv.dim and all(
        inv.contains(c) for c in eval_cols
    )
    rep.add("invariants.evaluation_bijective", ok_bij)
    # convolution multiplicativity: (ξ*ξ')(e) = ξ(e)ξ'(e) is definitional;
    # check the full products of basis maps stay in Hom and evaluate correctly
    bad = None
    for f in maps:
        fe = f.apply(e_coords)
        for g in maps:
            conv_vals = []
            for j in range(rsub.dim):
                gr = g.apply(rsub.algebra.space.basis_vector(j))
                conv_vals.append(m.algebra.mul(fe, gr))
            conv = LinMap.from_columns(rsub.algebra.space, m.space, conv_vals)
            if not _is_module_map(r_mod, m.module, conv):
                bad = "convolution leaves the Hom space"
                break
            lhs = conv.apply(e_coords)
            rhs = m.algebra.mul(fe, g.apply(e_coords))
            if not vec_eq(fld, lhs, rhs):
                bad = "evaluation is not multiplicative"
                break
        if bad:
            break
    rep.add("invariants.convolution_iso", bad is None, bad)
    return sub, rep


def trivial_module_R(ctx: ValidatedDda) -> RightHModule:
    """R with r◁h = r⋆h (the monoidal unit as a module)."""
    rsub = ctx.base.R.sub
    dda = ctx.dda

    def act(j, a):
        rv = rsub.embedding.column(j)
        return rsub.coords.apply(dda.hmul(rv, dda.space.basis_vector(a)))

    return module_from_action(ctx, rsub.algebra.space, act)


def trivial_module_algebra_R(ctx: ValidatedDda) -> HModuleAlgebra:
    """R as a module algebra; non-Galois whenever dim V > dim T."""
    rsub = ctx.base.R.sub
    return HModuleAlgebra(
        trivial_module_R(ctx),
        rsub.algebra,
        LinMap.identity(rsub.algebra.space),
    )


def self_test_module_algebra(ctx: ValidatedDda) -> HModuleAlgebra:
    """V acting on itself by a◁h = a⋆h; the canonical Galois self-test."""
    dda = ctx.dda

    def act(m, a):
        return dda.horizontal.basis_product(m, a)

    module = module_from_action(ctx, dda.space, act)
    return HModuleAlgebra(module, dda.vertical, ctx.base.R.sub.embedding)


def regular_module(ctx: ValidatedDda) -> RightHModule:
    """H acting on itself by right ⋆-multiplication."""
    dda = ctx.dda
    return module_from_action(
        ctx, dda.space, lambda m, a: dda.horizontal.basis_product(m, a)
    )


@dataclass(frozen=True)
class ModuleTensor:
    """The monoidal product X ⊗_R Y in the module category.

    Balancing: (x◁Φ_T(r)) ⊗ y  ~  x ⊗ (y◁Φ_B(r)); the action is diagonal
    through the coproduct of H over R.
    """

    left: RightHModule
    right: RightHModule
    quotient: QuotientSpace
    module: RightHModule

    def project_pure(self, x_vec, y_vec):
        return self.quotient.project(
            pure_tensor(self.left.space, self.right.space, x_vec, y_vec)
        )


def module_tensor_product(x: RightHModule, y: RightHModule) -> ModuleTensor:
    ctx = x.ctx
    fld = x.field
    dda = ctx.dda
    rsub = ctx.base.R.sub
    nx, ny = x.dim, y.dim
    ambient = FinSpace(
        fld, nx * ny,
        tuple(f"{a}⊗{b}" for a in x.space.labels for b in y.space.labels),
    )
    relations = []
    for j in range(rsub.dim):
        rv = rsub.embedding.column(j)
        sT = ctx.base.T.phi.apply(rv)
        tB = ctx.base.B.phi.apply(rv)
        for k in range(nx):
            xk = x.space.basis_vector(k)
            x_s = x.act(xk, sT)
            for k2 in range(ny):
                yk = y.space.basis_vector(k2)
                y_t = y.act(yk, tB)
                rel = vec_sub(
                    fld,
                    pure_tensor(x.space, y.space, x_s, yk),
                    pure_tensor(x.space, y.space, xk, y_t),
                )
                if not vec_is_zero(fld, rel):
                    relations.append(rel)
    quot = quotient_by(ambient, relations)
    lift_R = ctx.comuls.lifts["R"]
    act_x = {}
    act_y = {}

    def q_act(q_idx, a_idx):
        amb = quot.lift(quot.space.basis_vector(q_idx))
        out = [fld.zero] * (nx * ny)
        pairs = list(tensor_pairs(fld, lift_R.column(a_idx), dda.dim))
        for t, c in enumerate(amb):
            if fld.is_zero(c):
                continue
            k, k2 = divmod(t, ny)
            for c2, p, q in pairs:
                if p not in act_x:
                    act_x[p] = x.act_map(dda.space.basis_vector(p))
                if q not in act_y:
                    act_y[q] = y.act_map(dda.space.basis_vector(q))
                tvec = pure_tensor(x.space, y.space, act_x[p].column(k), act_y[q].column(k2))
                cc = fld.mul(c, c2)
                for idx, cv in enumerate(tvec):
                    if not fld.is_zero(cv):
                        out[idx] = fld.add(out[idx], fld.mul(cc, cv))
        return quot.project(out)

    module = module_from_action(ctx, quot.space, q_act)
    return ModuleTensor(x, y, quot, module)


def module_hom(x: RightHModule, y: RightHModule):
    """Basis of right module maps x → y (deterministic echelon order)."""
    fld = x.field
    dda = x.ctx.dda
    nx, ny, na = x.dim, y.dim, dda.dim
    ncols = ny * nx
    ech = Echelon(fld, ncols)
    for a in range(na):
        av = dda.space.basis_vector(a)
        xa = [x.act(x.space.basis_vector(k), av) for k in range(nx)]
        ya = [y.act(y.space.basis_vector(q), av) for q in range(ny)]
        for k in range(nx):
            for q0 in range(ny):
                row = [fld.zero] * ncols
                for mm, c in enumerate(xa[k]):
                    if not fld.is_zero(c):
                        row[q0 * nx + mm] = fld.add(row[q0 * nx + mm], c)
                for q in range(ny):
                    c2 = ya[q][q0]
                    if not fld.is_zero(c2):
                        row[q * nx + k] = fld.sub(row[q * nx + k], c2)
                ech.insert(row)
    pivots = ech.pivot_columns()
    out = []
    for j in ech.free_columns():
        v = [fld.zero] * ncols
        v[j] = fld.one
        for row, p in zip(ech.rows, pivots):
            v[p] = fld.neg(row[j])
        rows = [v[q * nx:(q + 1) * nx] for q in range(ny)]
        out.append(LinMap.from_rows(x.space, y.space, rows))
    return out


def _is_module_map(x: RightHModule, y: RightHModule, f: LinMap) -> bool:
    fld = x.field
    dda = x.ctx.dda
    for a in range(dda.dim):
        av = dda.space.basis_vector(a)
        if not f.compose(x.act_map(av)).equals(y.act_map(av).compose(f)):
            return False
    return True


@dataclass(frozen=True)
class SmashAlgebra:
    """H # M on H ⊗_R M with (h#m)(h'#m') = h⋆h'^[1] # (m◁h'^[2])m'."""

    modalg: HModuleAlgebra
    quotient: QuotientSpace      # of A ⊗ M
    algebra: StructAlgebra       # on the quotient space
    iota: LinMap                 # A -> smash, h ↦ h#1
    embed_m: LinMap              # M -> smash, m ↦ i#m

    @property
    def ctx(self):
        return self.modalg.ctx

    def project_pure(self, h_vec, m_vec):
        dda = self.ctx.dda
        return self.quotient.project(
            pure_tensor(dda.space, self.modalg.space, h_vec, m_vec)
        )


def smash_product(m: HModuleAlgebra) -> SmashAlgebra:
    """Build H#M and verify associativity, unit, and both embeddings."""
    ctx = m.ctx
    fld = m.field
    dda = ctx.dda
    na, nm = dda.dim, m.dim
    rsub = ctx.base.R.sub
    ambient = FinSpace(
        fld, na * nm,
        tuple(f"{lh}#{lm}" for lh in dda.space.labels for lm in m.space.labels),
    )
    relations = []
    for h in range(na):
        hv = dda.space.basis_vector(h)
        for j in range(rsub.dim):
            rv = rsub.embedding.column(j)
            h_sr = dda.hmul(hv, ctx.base.T.phi.apply(rv))
            for k in range(nm):
                mv = m.space.basis_vector(k)
                r_m = m.module.act(mv, ctx.base.B.phi.apply(rv))
                rel = vec_sub(
                    fld,
                    pure_tensor(dda.space, m.space, h_sr, mv),
                    pure_tensor(dda.space, m.space, hv, r_m),
                )
                if not vec_is_zero(fld, rel):
                    relations.append(rel)
    quot = quotient_by(ambient, relations)
    lift_R = ctx.comuls.lifts["R"]

    def pure_product(h1, m1, h2, m2):
        out = [fld.zero] * (na * nm)
        for c, p, q in tensor_pairs(fld, lift_R.column(h2), na):
            hp = dda.horizontal.basis_product(h1, p)
            mq = m.algebra.mul(m.module.act(m.space.basis_vector(m1), dda.space.basis_vector(q)),
                               m.space.basis_vector(m2))
            t = pure_tensor(dda.space, m.space, hp, mq)
            for idx, cv in enumerate(t):
                if not fld.is_zero(cv):
                    out[idx] = fld.add(out[idx], fld.mul(c, cv))
        return out

    qdim = quot.dim

    def q_product(qi, qj):
        amb_i = quot.lift(quot.space.basis_vector(qi))
        amb_j = quot.lift(quot.space.basis_vector(qj))
        out = [fld.zero] * (na * nm)
        for ci, ti in enumerate(amb_i):
            if fld.is_zero(ti):
                continue
            h1, m1 = divmod(ci, nm)
            for cj, tj in enumerate(amb_j):
                if fld.is_zero(tj):
                    continue
                h2, m2 = divmod(cj, nm)
                pp = pure_product(h1, m1, h2, m2)
                cc = fld.mul(ti, tj)
                for idx, cv in enumerate(pp):
                    if not fld.is_zero(cv):
                        out[idx] = fld.add(out[idx], fld.mul(cc, cv))
        return quot.project(out)

    unit = quot.project(pure_tensor(dda.space, m.space, dda.i, m.unit_vec()))
    algebra = StructAlgebra.from_products(quot.space, q_product, unit)
    iota_cols = [
        quot.project(pure_tensor(dda.space, m.space, dda.space.basis_vector(h), m.unit_vec()))
        for h in range(na)
    ]
    iota = LinMap.from_columns(dda.space, quot.space, iota_cols)
    embed_cols = [
        quot.project(pure_tensor(dda.space, m.space, dda.i, m.space.basis_vector(k)))
        for k in range(nm)
    ]
    embed_m = LinMap.from_columns(m.space, quot.space, embed_cols)
    smash = SmashAlgebra(m, quot, algebra, iota, embed_m)
    rep = check_algebra(algebra)
    if not rep.ok():
        bad = rep.failures()[0]
        raise CheckFailure(f"smash.{bad.rule}", bad.witness)
    # ι is multiplicative: (h#1)(h'#1) = h⋆h'#1
    for h1 in range(na):
        for h2 in range(na):
            lhs = algebra.mul(iota.column(h1), iota.column(h2))
            rhs = iota.apply(dda.horizontal.basis_product(h1, h2))
            if not vec_eq(fld, lhs, rhs):
                raise CheckFailure("smash.iota_multiplicative", f"({h1},{h2})")
    return smash
