"""Weak moment maps for multisymplectic Lie algebra actions on R^n.

A weak moment map for an action with (n+1)-form omega is a family of linear
maps f_k from the degree-k Lie kernel to (n-k)-forms satisfying

    d f_k(p) = -zeta(k) * (V_p . omega),      zeta(k) = -(-1)^(k(k+1)/2),

for k = 1..n.  Maps are stored by their values on the canonical kernel
basis and extended linearly.

Three constructors (each re-verifies the defining equation before
returning):
  * `construct_poincare`   — always available when omega is preserved:
                             f(p) = -zeta(k) K(V_p . omega) with K the
                             homotopy operator;
  * `construct_exactness`  — needs every kernel element to be a boundary;
  * `construct_brackets`   — needs the kernel to equal its own bracket
                             with the algebra.

Equivariance: the defect cochain

    Sigma(xi)(p) = f([xi,p]) - s * L_{V_xi} f(p)

(s the action's bracket sign) has closed-form entries, is a 1-cocycle for
the natural module structure on Hom(kernel, closed forms), and vanishes
exactly when f is a module morphism in the strong sense.  `make_equivariant`
repairs f by a coboundary inside a chosen polynomial truncation, or reports
the obstruction relative to that truncation.
"""

from __future__ import annotations

from fractions import Fraction

from .linalg import Mat, frac, mat_hstack, rank, solve
from .lie_core import (StructureError, boundary_matrix, ce_betti,
                       exterior_basis, format_multivector, lie_kernel_basis,
                       mv_coords, mv_from_coords)
from .gmodule import (cochain_dim, coboundary_solve, dual_lie_kernel_module,
                      dual_module, invariants_basis, lie_kernel_module,
                      module_cohomology_dim, tensor_module)
from .polyform import (Form, contract, exterior_d, lie_derivative,
                       poincare_homotopy, wedge)
from .action import (LieAction, TruncatedFormModule, check_multisymplectic,
                     infinitesimal_generator, preserves_omega)


def zeta(k: int) -> int:
    return -((-1) ** (k * (k + 1) // 2))


class MomentMap:
    """Values of each f_k on the canonical degree-k kernel basis."""

    def __init__(self, action: LieAction, components: dict):
        n = action.plectic_degree()
        self.action = action
        self.components = {}
        for k, forms in components.items():
            kb = lie_kernel_basis(action.algebra, k)
            if len(forms) != len(kb):
                raise ValueError(f"degree {k}: need one form per kernel basis element")
            for f in forms:
                if f.degree != n - k:
                    raise ValueError(f"degree {k}: values must be {n - k}-forms")
            self.components[k] = list(forms)

    def degrees(self):
        return sorted(self.components)

    def kernel_basis(self, k: int):
        return lie_kernel_basis(self.action.algebra, k)

    def value(self, k: int, mv: dict) -> Form:
        """f_k on an arbitrary kernel element (multivector dict)."""
        g = self.action.algebra
        kb = self.kernel_basis(k)
        vec = mv_coords(mv, exterior_basis(g.dim, k))
        kmat = Mat.from_columns(kb, len(vec)) if kb else Mat.zeros(len(vec), 0)
        coeffs = solve(kmat, vec)
        if coeffs is None:
            raise ValueError("element is not in the Lie kernel")
        out = Form.zero(self.action.ambient_dim, self.action.plectic_degree() - k)
        for c, f in zip(coeffs, self.components[k]):
            c = frac(c)
            if c:
                out = out + f * c
        return out


def defining_residuals(mm: MomentMap) -> dict:
    """(k, basis index) -> d f_k(p) + zeta(k) (V_p . omega); all-zero
    certifies the moment map."""
    action = mm.action
    out = {}
    for k in mm.degrees():
        z = zeta(k)
        for a, vec in enumerate(mm.kernel_basis(k)):
            v_p = infinitesimal_generator(action, mv_from_coords(
                vec, exterior_basis(action.algebra.dim, k)))
            out[(k, a)] = (exterior_d(mm.components[k][a])
                           + contract(v_p, action.omega) * Fraction(z))
    return out


def verify_moment(mm: MomentMap) -> bool:
    return all(r.is_zero() for r in defining_residuals(mm).values())


def _checked(mm: MomentMap, route: str) -> MomentMap:
    bad = [key for key, r in defining_residuals(mm).items() if not r.is_zero()]
    if bad:
        raise StructureError(
            f"{route} construction failed its defining-equation recheck at {bad}")
    return mm


def _default_degrees(action: LieAction, ks):
    if ks is None:
        return list(range(1, action.plectic_degree() + 1))
    return sorted(set(ks))


def construct_poincare(action: LieAction, ks=None) -> MomentMap:
    """f_k(p) = -zeta(k) K(V_p . omega); valid whenever the action preserves
    the closed form omega (then V_p . omega is closed for kernel p)."""
    components = {}
    for k in _default_degrees(action, ks):
        z = zeta(k)
        forms = []
        for vec in lie_kernel_basis(action.algebra, k):
            v_p = infinitesimal_generator(action, mv_from_coords(
                vec, exterior_basis(action.algebra.dim, k)))
            forms.append(poincare_homotopy(contract(v_p, action.omega)) * Fraction(-z))
        components[k] = forms
    return _checked(MomentMap(action, components), "homotopy-operator")


def construct_exactness(action: LieAction, ks=None) -> MomentMap:
    """f_k(p) = zeta(k) s (-1)^k (V_q . omega) for a boundary preimage
    dq = p; applicable only when every kernel element is a boundary."""
    g = action.algebra
    s = action.sign()
    components = {}
    for k in _default_degrees(action, ks):
        z = Fraction(zeta(k) * s * (-1) ** k)
        bmat = boundary_matrix(g, k + 1)
        basis_next = exterior_basis(g.dim, k + 1)
        forms = []
        for a, vec in enumerate(lie_kernel_basis(g, k)):
            q = solve(bmat, vec)
            if q is None:
                raise StructureError(
                    f"exactness route does not apply at degree {k}: kernel basis "
                    f"element {a} is not a boundary")
            v_q = infinitesimal_generator(action, mv_from_coords(q, basis_next))
            forms.append(contract(v_q, action.omega) * z)
        components[k] = forms
    return _checked(MomentMap(action, components), "exactness")


def construct_brackets(action: LieAction, ks=None) -> MomentMap:
    """f_k(p) = sum_i c_i zeta(k) s ((V_{q_i} ^ V_{xi_i}) . omega) for a
    decomposition p = sum_i c_i [q_i, xi_i] with q_i in the kernel;
    applicable only when the kernel equals its bracket with the algebra.
    (The sign follows from d(q ^ xi) = (-1)^k [q, xi] for kernel q and the
    boundary identity for the preserved closed form omega.)"""
    g = action.algebra
    s = action.sign()
    components = {}
    for k in _default_degrees(action, ks):
        z = Fraction(zeta(k) * s)
        kb = lie_kernel_basis(g, k)
        r = len(kb)
        forms = []
        if r:
            kernel_mod = lie_kernel_module(g, k)
            # columns: [q_a, e_j] = -ad_{e_j} q_a in kernel coordinates
            cols = []
            for a in range(r):
                for j in range(g.dim):
                    cols.append([-kernel_mod.rho[j].rows[b][a] for b in range(r)])
            bracket_mat = Mat.from_columns(cols, r)
            basis_k = exterior_basis(g.dim, k)
            term_forms = {}
            for a in range(r):
                target = [Fraction(int(b == a)) for b in range(r)]
                coeffs = solve(bracket_mat, target)
                if coeffs is None:
                    raise StructureError(
                        f"bracket route does not apply at degree {k}: kernel basis "
                        f"element {a} is not a bracket combination")
                out = Form.zero(action.ambient_dim, action.plectic_degree() - k)
                for idx, c in enumerate(coeffs):
                    c = frac(c)
                    if not c:
                        continue
                    b, j = divmod(idx, g.dim)
                    if (b, j) not in term_forms:
                        v_q = infinitesimal_generator(action, mv_from_coords(
                            kb[b], basis_k))
                        term_forms[(b, j)] = contract(
                            wedge(v_q, action.fields[j]), action.omega) * z
                    out = out + term_forms[(b, j)] * c
                forms.append(out)
        components[k] = forms
    return _checked(MomentMap(action, components), "bracket")


# ---------------------------------------------------------------------------
# equivariance
# ---------------------------------------------------------------------------

def sigma_cochain(mm: MomentMap, k: int):
    """Sigma(e_i)(p_a) = f([e_i, p_a]) - s L_{V_i} f(p_a), as a list indexed
    [i][a] of forms.  Entries are closed for a verified moment map."""
    action = mm.action
    g = action.algebra
    s = action.sign()
    kernel_mod = lie_kernel_module(g, k)
    comp = mm.components[k]
    out = []
    for i in range(g.dim):
        rho_i = kernel_mod.rho[i]
        row = []
        for a in range(len(comp)):
            val = lie_derivative(action.fields[i], comp[a]) * Fraction(-s)
            for b in range(len(comp)):
                c = rho_i.rows[b][a]
                if c:
                    val = val + comp[b] * c
            row.append(val)
        out.append(row)
    return out


def sigma_is_zero(sigma) -> bool:
    return all(form.is_zero() for row in sigma for form in row)


def check_sigma_cocycle(mm: MomentMap, k: int) -> bool:
    """delta Sigma = 0 for the module action
    (xi.alpha)(p) = -alpha([xi,p]) + s L_{V_xi}(alpha(p)), checked exactly
    (no truncation: the check is symbolic in the form entries)."""
    action = mm.action
    g = action.algebra
    s = action.sign()
    kernel_mod = lie_kernel_module(g, k)
    sigma = sigma_cochain(mm, k)
    r = len(mm.components[k])

    def module_act(i, row):
        # (e_i . alpha) for alpha given by its values on the kernel basis
        out = []
        for a in range(r):
            val = lie_derivative(action.fields[i], row[a]) * Fraction(s)
            for b in range(r):
                c = kernel_mod.rho[i].rows[b][a]
                if c:
                    val = val - row[b] * c
            out.append(val)
        return out

    for i in range(g.dim):
        for j in range(i + 1, g.dim):
            lhs = module_act(i, sigma[j])
            rhs = module_act(j, sigma[i])
            bracket_row = [Form.zero(action.ambient_dim, f.degree) for f in sigma[i]]
            for m, c in enumerate(g.bracket_basis(i, j)):
                if c:
                    bracket_row = [acc + f * c for acc, f in zip(bracket_row, sigma[m])]
            for a in range(r):
                if not (lhs[a] - rhs[a] - bracket_row[a]).is_zero():
                    return False
    return True


def check_module_morphism(mm: MomentMap, k: int):
    """Quotient identity d f([xi,p]) = s d L_{V_xi} f(p) (holds for every
    verified moment map) and the strong identity f([xi,p]) = s L_{V_xi} f(p)
    (holds iff Sigma vanishes).  Returns (quotient_ok, strong_ok)."""
    action = mm.action
    sigma = sigma_cochain(mm, k)
    quotient_ok = all(exterior_d(form).is_zero() for row in sigma for form in row)
    return quotient_ok, sigma_is_zero(sigma)


def _hom_module(action: LieAction, k: int, max_degree: int):
    """Hom(kernel_k, closed (n-k)-forms of coefficient degree <= D) as a
    GModule, with the truncated form module it was built from."""
    trunc = TruncatedFormModule(action, action.plectic_degree() - k, max_degree)
    dual_kernel = dual_module(lie_kernel_module(action.algebra, k))
    dual_kernel.name = f"dual_lie_kernel(k={k})"
    return tensor_module(dual_kernel, trunc.module), trunc


def make_equivariant(mm: MomentMap, k: int, max_degree: int):
    """Try to repair f_k by l with delta l = Sigma inside the truncated
    module; returns (new_map, l_forms, status) where status is one of
    'already equivariant', 'repaired', 'obstructed at degree D'.
    StructureError if Sigma escapes the truncation (raise max_degree)."""
    action = mm.action
    sigma = sigma_cochain(mm, k)
    if sigma_is_zero(sigma):
        return mm, None, "already equivariant"
    hom, trunc = _hom_module(action, k, max_degree)
    g = action.algebra
    r = len(mm.components[k])
    t = trunc.module.dim
    target = [Fraction(0)] * cochain_dim(g, hom, 1)
    for i in range(g.dim):
        for a in range(r):
            coords = trunc.to_coords(sigma[i][a])
            if coords is None:
                raise StructureError(
                    "Sigma entry escapes the truncated closed-form space; "
                    "raise the truncation degree")
            for b, c in enumerate(coords):
                if c:
                    target[i * (r * t) + a * t + b] = c
    sol = coboundary_solve(hom, 1, target)
    if sol is None:
        return None, None, f"obstructed at degree {max_degree}"
    l_forms = [trunc.from_coords(sol[a * t:(a + 1) * t]) for a in range(r)]
    components = {kk: list(forms) for kk, forms in mm.components.items()}
    components[k] = [f + l for f, l in zip(components[k], l_forms)]
    new_mm = _checked(MomentMap(action, components), "equivariantized")
    if not sigma_is_zero(sigma_cochain(new_mm, k)):
        raise StructureError("equivariantization failed its Sigma recheck")
    return new_mm, l_forms, "repaired"


def uniqueness_check(action: LieAction, k: int, max_degree: int):
    """Equivariant moment maps at degree k differ by invariant elements of
    Hom(kernel, closed forms); reports that space within the truncation."""
    hom, trunc = _hom_module(action, k, max_degree)
    inv = invariants_basis(hom)
    t = trunc.module.dim
    r = hom.dim // t if t else 0
    reps = []
    for v in inv:
        reps.append([trunc.from_coords(v[a * t:(a + 1) * t]) for a in range(r)])
    return {"dim_invariants": len(inv), "unique": not inv, "representatives": reps}


# ---------------------------------------------------------------------------
# existence diagnostics
# ---------------------------------------------------------------------------

def existence_diagnostic(action: LieAction, ks=None, max_degree=None):
    """Per-degree applicability report for the three constructors, plus
    (optionally) cohomology of the truncated coefficient module governing
    equivariant existence and uniqueness."""
    g = action.algebra
    msy = check_multisymplectic(action)
    preserved = not preserves_omega(action)
    betti = ce_betti(g)
    out = {"action": action.name, "plectic_degree": action.plectic_degree(),
           "omega_closed": msy["closed"], "omega_nondegenerate": msy["nondegenerate"],
           "omega_preserved": preserved, "bracket_sign": action.sign(),
           "betti": list(betti), "degrees": {}}
    for k in _default_degrees(action, ks):
        kb = lie_kernel_basis(g, k)
        r = len(kb)
        entry = {"dim_kernel": r,
                 "betti_k": betti[k] if k < len(betti) else 0}
        bmat = boundary_matrix(g, k + 1)
        if r:
            aug = mat_hstack(bmat, Mat.from_columns(kb, bmat.nrows))
            entry["exactness_applies"] = rank(aug) == rank(bmat)
            h0_dual = len(invariants_basis(dual_lie_kernel_module(g, k)))
            entry["h0_dual_kernel"] = h0_dual
            entry["brackets_apply"] = h0_dual == 0
        else:
            entry["exactness_applies"] = True
            entry["h0_dual_kernel"] = 0
            entry["brackets_apply"] = True
        entry["poincare_applies"] = (msy["closed"] and msy["nondegenerate"]
                                     and preserved)
        if max_degree is not None:
            hom, _ = _hom_module(action, k, max_degree)
            entry["hom_module_dim"] = hom.dim
            entry["h0_hom"] = module_cohomology_dim(hom, 0)
            entry["h1_hom"] = module_cohomology_dim(hom, 1)
            entry["truncation_degree"] = max_degree
        out["degrees"][k] = entry
    return out


def describe_kernel(action: LieAction, k: int):
    """Canonical kernel basis at degree k as formatted multivector strings."""
    g = action.algebra
    basis = exterior_basis(g.dim, k)
    return [format_multivector(mv_from_coords(vec, basis))
            for vec in lie_kernel_basis(g, k)]
