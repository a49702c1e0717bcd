"""Lie algebra actions on R^n by polynomial vector fields.

A LieAction pairs a LieAlgebra with one generator field per basis element and
a distinguished closed nondegenerate form omega.  `validate_action` checks
that the generators close under the vector-field bracket and detects the
uniform bracket sign s with

    [V_xi, V_eta] = s * V_[xi,eta]    (s in {+1, -1}).

Rotation-style catalog actions below close with s = +1; for an abelian
algebra both signs hold vacuously and the default is s = -1 (the classical
left-action convention, which fixes the sign of the equivariance cocycle
for the translation examples).

Also here: infinitesimal generators of multivectors, truncated spaces of
(invariant) closed forms as finite-dimensional modules, and the boundary
identity linking d, contraction, and Lie derivatives (`cartan_residual`).
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import reduce

from .linalg import Mat, frac, mat_vstack, nullspace, rank, solve_many
from .lie_core import (LieAlgebra, StructureError, abelian, catalog_algebra,
                       mv_boundary)
from .gmodule import GModule
from .polyform import (Form, MultiField, Poly, contract, exterior_d,
                       lie_derivative, vf_bracket, volume_form, wedge)


class LieAction:
    """A Lie algebra acting on R^n by polynomial vector fields, with a
    distinguished form omega on the same space."""

    def __init__(self, algebra: LieAlgebra, fields, omega: Form, name: str = ""):
        if len(fields) != algebra.dim:
            raise ValueError("need one generator field per basis element")
        for v in fields:
            if not isinstance(v, MultiField) or v.degree != 1:
                raise ValueError("generators must be vector fields")
            if v.n != omega.n:
                raise ValueError("generator/omega dimension mismatch")
        self.algebra = algebra
        self.fields = list(fields)
        self.omega = omega
        self.ambient_dim = omega.n
        self.name = name or algebra.name
        self.bracket_sign: int | None = None  # set by validate_action

    def plectic_degree(self) -> int:
        return self.omega.degree - 1

    def field_of(self, coeffs) -> MultiField:
        """Generator field of a general algebra element (coefficient list)."""
        out = MultiField.zero(self.ambient_dim, 1)
        for c, v in zip(coeffs, self.fields):
            c = frac(c)
            if c:
                out = out + v * c
        return out

    def sign(self) -> int:
        if self.bracket_sign is None:
            validate_action(self)
        return self.bracket_sign


def validate_action(action: LieAction, default_sign: int = -1) -> int:
    """Check the generators close per the structure constants and detect the
    bracket sign; raises StructureError naming the first failing pair."""
    g = action.algebra
    plus_ok, minus_ok = True, True
    saw_nonzero = False
    first_fail = {1: None, -1: None}
    for i in range(g.dim):
        for j in range(i + 1, g.dim):
            got = vf_bracket(action.fields[i], action.fields[j])
            want = action.field_of(g.bracket_basis(i, j))
            if not (got.is_zero() and want.is_zero()):
                saw_nonzero = True
            if got != want:
                plus_ok = False
                first_fail[1] = first_fail[1] or (i, j)
            if got != -want:
                minus_ok = False
                first_fail[-1] = first_fail[-1] or (i, j)
    if not saw_nonzero:
        action.bracket_sign = default_sign
        return default_sign
    if plus_ok:
        action.bracket_sign = 1
    elif minus_ok:
        action.bracket_sign = -1
    else:
        i, j = first_fail[1]
        raise StructureError(
            f"generator fields do not close under the bracket: pair (e{i + 1}, e{j + 1}) "
            f"matches neither sign convention")
    return action.bracket_sign


_SAMPLE_SEEDS = (
    None,  # origin
    lambda n: [Fraction(1)] * n,
    lambda n: [Fraction(i + 1) for i in range(n)],
    lambda n: [Fraction((-1) ** i, i + 2) for i in range(n)],
)


def _contraction_matrix_at(omega: Form, point) -> Mat:
    """Matrix of v -> v . omega with omega's coefficients evaluated at a
    point: rows indexed by (deg-1)-index tuples, columns by ambient basis."""
    n = omega.n
    rows_index = {idx: r for r, idx in
                  enumerate(itertools.combinations(range(n), omega.degree - 1))}
    m = Mat.zeros(len(rows_index), n)
    for idx, p in omega.comps.items():
        c = p.eval(point)
        if not c:
            continue
        for pos, i in enumerate(idx):
            key = idx[:pos] + idx[pos + 1:]
            m.rows[rows_index[key]][i] += c * ((-1) ** pos)
    return m


def check_multisymplectic(action: LieAction) -> dict:
    """Closedness of omega (exact) and nondegeneracy of v -> v . omega on
    constant vectors, sampled at the origin and three fixed rational points
    (exact and sufficient for constant-coefficient omega)."""
    omega = action.omega
    n = omega.n
    closed = exterior_d(omega).is_zero()
    nondeg = True
    constant_coeffs = omega.max_coeff_degree() <= 0
    for seed in _SAMPLE_SEEDS:
        point = [Fraction(0)] * n if seed is None else seed(n)
        if rank(_contraction_matrix_at(omega, point)) != n:
            nondeg = False
            break
        if constant_coeffs:
            break  # all sample points give the same matrix
    return {"closed": closed, "nondegenerate": nondeg,
            "plectic_degree": omega.degree - 1}


def preserves_omega(action: LieAction):
    """Indices of generators that fail L_{V_i} omega = 0 (empty = preserved)."""
    bad = []
    for i, v in enumerate(action.fields):
        if not lie_derivative(v, action.omega).is_zero():
            bad.append(i)
    return bad


def infinitesimal_generator(action: LieAction, mv) -> MultiField:
    """Multivector field of a multivector: each basis term e_{t1}^...^e_{tk}
    maps to V_{t1} ^ ... ^ V_{tk}, extended linearly.  `mv` is a dict from
    increasing index tuples to coefficients (a single tuple is accepted)."""
    if isinstance(mv, tuple):
        mv = {mv: Fraction(1)}
    n = action.ambient_dim
    degree = len(next(iter(mv))) if mv else 0
    out = MultiField.zero(n, degree)
    one = MultiField(n, 0, {(): Poly.const(n, 1)})
    for idx, c in mv.items():
        c = frac(c)
        if not c:
            continue
        term = one
        for t in idx:
            term = wedge(term, action.fields[t])
        out = out + term * c
    return out


def cartan_residual(action: LieAction, mv, tau: Form) -> Form:
    """Residual of the boundary identity

        (-1)^k d(V_p . tau) = s V_{dp} . tau
                              + sum_i (-1)^i (V_{t1}^..hat i..^V_{tk}) . L_{V_{ti}} tau
                              + V_p . d tau

    for p a degree-k multivector (dict form), extended linearly over basis
    terms.  Returns LHS - RHS; the zero form certifies the identity."""
    if isinstance(mv, tuple):
        mv = {mv: Fraction(1)}
    if not mv:
        raise ValueError("empty multivector")
    k = len(next(iter(mv)))
    if k < 1:
        raise ValueError("need degree >= 1")
    if tau.degree < k:
        raise ValueError("tau degree must be at least the multivector degree")
    s = action.sign()
    n = action.ambient_dim
    one = MultiField(n, 0, {(): Poly.const(n, 1)})

    v_p = infinitesimal_generator(action, mv)
    lhs = exterior_d(contract(v_p, tau)) * Fraction((-1) ** k)

    boundary_field = infinitesimal_generator(action, mv_boundary(action.algebra, mv))
    if boundary_field.is_zero():
        rhs = Form.zero(n, tau.degree - k + 1)
    else:
        rhs = contract(boundary_field, tau) * Fraction(s)
    for idx, c in mv.items():
        c = frac(c)
        for a, t in enumerate(idx):
            rest = one
            for b, u in enumerate(idx):
                if b != a:
                    rest = wedge(rest, action.fields[u])
            ltau = lie_derivative(action.fields[t], tau)
            term = contract(rest, ltau) * (c * Fraction((-1) ** (a + 1)))
            rhs = rhs + term
    return (lhs - rhs) - contract(v_p, exterior_d(tau))


# ---------------------------------------------------------------------------
# truncated form spaces as finite-dimensional modules
# ---------------------------------------------------------------------------

def monomial_basis(n: int, max_degree: int):
    """All exponent tuples of total degree <= max_degree, sorted by
    (total degree, tuple)."""
    monos = []
    for d in range(max_degree + 1):
        for c in itertools.combinations_with_replacement(range(n), d):
            mono = [0] * n
            for i in c:
                mono[i] += 1
            monos.append(tuple(mono))
    return sorted(monos, key=lambda m: (sum(m), m))


def form_key_basis(n: int, p: int, max_degree: int):
    """Ordered (index-tuple, monomial) keys spanning p-forms with polynomial
    coefficients of degree <= max_degree."""
    monos = monomial_basis(n, max_degree)
    return [(idx, mono) for idx in itertools.combinations(range(n), p)
            for mono in monos]


def form_to_vector(alpha: Form, keys, key_index=None):
    """Coefficient vector of a form in a key basis; StructureError if the
    form has a component outside the basis (degree truncation escape)."""
    if key_index is None:
        key_index = {key: r for r, key in enumerate(keys)}
    vec = [Fraction(0)] * len(keys)
    for idx, poly in alpha.comps.items():
        for mono, c in poly.terms.items():
            try:
                vec[key_index[(idx, mono)]] = c
            except KeyError:
                raise StructureError(
                    f"form escapes the truncated space at key {(idx, mono)}") from None
    return vec


def vector_to_form(vec, keys, n: int, p: int) -> Form:
    comps: dict = {}
    for c, (idx, mono) in zip(vec, keys):
        if c:
            comps.setdefault(idx, {})[mono] = c
    return Form(n, p, {idx: Poly(n, terms) for idx, terms in comps.items()})


def _operator_matrix(op, keys_in, keys_out, n: int, p_in: int):
    """Matrix of a linear operator on forms w.r.t. key bases (columns =
    images of input basis forms)."""
    out_index = {key: r for r, key in enumerate(keys_out)}
    cols = []
    for idx, mono in keys_in:
        image = op(Form(n, p_in, {idx: Poly(n, {mono: Fraction(1)})}))
        cols.append(form_to_vector(image, keys_out, out_index))
    return Mat.from_columns(cols, nrows=len(keys_out))


def closed_form_basis(n: int, p: int, max_degree: int):
    """Canonical basis (list of Forms) of closed p-forms of coefficient
    degree <= max_degree, plus the key basis and coordinate matrix."""
    keys = form_key_basis(n, p, max_degree)
    if p >= n:
        # top-degree (and beyond) forms are all closed
        vecs = [Mat.identity(len(keys)).col(j) for j in range(len(keys))]
    else:
        keys_out = form_key_basis(n, p + 1, max(max_degree - 1, 0))
        dmat = _operator_matrix(exterior_d, keys, keys_out, n, p)
        vecs = nullspace(dmat)
    basis_mat = Mat.from_columns(vecs, nrows=len(keys))
    forms = [vector_to_form(v, keys, n, p) for v in vecs]
    return forms, keys, basis_mat


def invariant_closed_forms(action: LieAction, p: int, max_degree: int):
    """Basis of closed p-forms of coefficient degree <= max_degree killed by
    every L_{V_i}."""
    n = action.ambient_dim
    keys = form_key_basis(n, p, max_degree)
    field_deg = max((v.max_coeff_degree() for v in action.fields), default=0)
    out_degree = max_degree + max(field_deg - 1, 0)
    keys_lie = form_key_basis(n, p, out_degree)
    blocks = []
    if p < n:
        keys_d = form_key_basis(n, p + 1, max(max_degree - 1, 0))
        blocks.append(_operator_matrix(exterior_d, keys, keys_d, n, p))
    for v in action.fields:
        blocks.append(_operator_matrix(lambda a, v=v: lie_derivative(v, a),
                                       keys, keys_lie, n, p))
    return [vector_to_form(v, keys, n, p)
            for v in nullspace(reduce(mat_vstack, blocks))]


class TruncatedFormModule:
    """Closed p-forms of coefficient degree <= D as a GModule under
    rho(xi) = s * L_{V_xi} (s the action's bracket sign, so that rho is a
    genuine left module structure)."""

    def __init__(self, action: LieAction, p: int, max_degree: int):
        s = action.sign()
        n = action.ambient_dim
        forms, keys, basis_mat = closed_form_basis(n, p, max_degree)
        key_index = {key: r for r, key in enumerate(keys)}
        rho = []
        for v in action.fields:
            cols = []
            for b in forms:
                image = lie_derivative(v, b) * Fraction(s)
                cols.append(form_to_vector(image, keys, key_index))
            coords = solve_many(basis_mat,
                                Mat.from_columns(cols, nrows=len(keys)))
            if coords is None:
                raise StructureError(
                    "Lie derivative leaves the truncated closed-form space; "
                    "raise the truncation degree")
            rho.append(coords)
        self.action = action
        self.form_degree = p
        self.max_degree = max_degree
        self.forms = forms
        self.keys = keys
        self.key_index = key_index
        self.basis_mat = basis_mat
        self.module = GModule(action.algebra, rho,
                              name=f"closed_forms(p={p},D<={max_degree})")

    def to_coords(self, alpha: Form):
        """Coordinates of a closed form in this basis; StructureError if it
        escapes the truncation, None if it is not closed (not in span)."""
        vec = form_to_vector(alpha, self.keys, self.key_index)
        sol = solve_many(self.basis_mat, Mat.from_columns([vec], nrows=len(self.keys)))
        return None if sol is None else sol.col(0)

    def from_coords(self, coords) -> Form:
        out = Form.zero(self.action.ambient_dim, self.form_degree)
        for c, b in zip(coords, self.forms):
            c = frac(c)
            if c:
                out = out + b * c
        return out


# ---------------------------------------------------------------------------
# catalog actions
# ---------------------------------------------------------------------------

def _linear_field(n: int, terms) -> MultiField:
    """Vector field sum of c * x_var * d/dx_direction terms (0-based indices)."""
    comps = [Poly(n) for _ in range(n)]
    for c, var, direction in terms:
        comps[direction] = comps[direction] + Poly.var(var, n) * frac(c)
    return MultiField.vector(n, comps)


def translations_r3() -> LieAction:
    fields = [MultiField.vector(3, [int(i == j) for j in range(3)])
              for i in range(3)]
    act = LieAction(abelian(3), fields, volume_form(3), name="translations_r3")
    validate_action(act)
    return act


def so3_r3() -> LieAction:
    fields = [
        _linear_field(3, [(1, 2, 1), (-1, 1, 2)]),   # x3 d2 - x2 d3
        _linear_field(3, [(1, 0, 2), (-1, 2, 0)]),   # x1 d3 - x3 d1
        _linear_field(3, [(1, 1, 0), (-1, 0, 1)]),   # x2 d1 - x1 d2
    ]
    act = LieAction(catalog_algebra("so3"), fields, volume_form(3), name="so3_r3")
    validate_action(act)
    return act


def so4_r4() -> LieAction:
    fields = [_linear_field(4, [(1, i, j), (-1, j, i)])  # x_i d_j - x_j d_i
              for (i, j) in itertools.combinations(range(4), 2)]
    act = LieAction(catalog_algebra("so4"), fields, volume_form(4), name="so4_r4")
    validate_action(act)
    return act


def u2_r4() -> LieAction:
    half = Fraction(1, 2)
    fields = [
        # complex structure: -x2 d1 + x1 d2 - x4 d3 + x3 d4
        _linear_field(4, [(-1, 1, 0), (1, 0, 1), (-1, 3, 2), (1, 2, 3)]),
        # su(2) triple, realified spin-1/2 generators
        _linear_field(4, [(-half, 3, 0), (half, 2, 1), (-half, 1, 2), (half, 0, 3)]),
        _linear_field(4, [(half, 2, 0), (half, 3, 1), (-half, 0, 2), (-half, 1, 3)]),
        _linear_field(4, [(-half, 1, 0), (half, 0, 1), (half, 3, 2), (-half, 2, 3)]),
    ]
    act = LieAction(catalog_algebra("u2"), fields, volume_form(4), name="u2_r4")
    validate_action(act)
    return act


ACTION_CATALOG = {
    "translations_r3": translations_r3,
    "so3_r3": so3_r3,
    "so4_r4": so4_r4,
    "u2_r4": u2_r4,
}


def catalog_action(name: str) -> LieAction:
    try:
        factory = ACTION_CATALOG[name]
    except KeyError:
        raise KeyError(f"unknown catalog action {name!r}; "
                       f"available: {sorted(ACTION_CATALOG)}") from None
    return factory()
