"""Lie algebra modules and cohomology with coefficients.

A GModule packages exact matrices rho(e_i) satisfying
rho([x,y]) = rho(x) rho(y) - rho(y) rho(x); construction validates this
identity exactly.  Cochains C^k(g, M) are stored as coordinate vectors over
the basis {(T, u)}: T an increasing k-tuple over the algebra basis (ordered
lexicographically, major index) and u a module basis index (minor index).
"""

from __future__ import annotations

from fractions import Fraction

from .linalg import Mat, kron, mat_add, mat_mul, mat_scale, mat_vec, mat_vstack, \
    nullspace, rank, solve, solve_many
from .lie_core import LieAlgebra, StructureError, ad_matrix, exterior_basis, \
    lie_kernel_basis, sort_with_sign, unit_vector

ZERO = Fraction(0)


class GModule:
    """Finite-dimensional module over a Lie algebra, given by action matrices."""

    def __init__(self, algebra: LieAlgebra, rho, name: str = "", validate: bool = True):
        if len(rho) != algebra.dim:
            raise ValueError("need one action matrix per algebra basis element")
        self.algebra = algebra
        self.rho = list(rho)
        self.dim = rho[0].nrows if rho else 0
        self.name = name
        for m in self.rho:
            if m.shape != (self.dim, self.dim):
                raise ValueError("action matrices must be square of equal size")
        if validate:
            self.validate()

    def validate(self) -> None:
        g = self.algebra
        for i in range(g.dim):
            for j in range(i + 1, g.dim):
                lhs = Mat.zeros(self.dim, self.dim)
                for m, c in enumerate(g.bracket_basis(i, j)):
                    if c:
                        lhs = mat_add(lhs, mat_scale(self.rho[m], c))
                comm = mat_add(mat_mul(self.rho[i], self.rho[j]),
                               mat_scale(mat_mul(self.rho[j], self.rho[i]), -1))
                if lhs != comm:
                    raise StructureError(
                        f"module action is not a representation on pair (e{i}, e{j})"
                        + (f" of {self.name}" if self.name else ""))

    def act(self, xi, v):
        """Action of the algebra element with coefficient vector xi on v."""
        out = [ZERO] * self.dim
        for i, c in enumerate(xi):
            if c:
                for r, x in enumerate(mat_vec(self.rho[i], v)):
                    if x:
                        out[r] += c * x
        return out

    def __repr__(self):
        return f"GModule({self.name or ''} dim={self.dim} over {self.algebra.name})"


def trivial_module(g: LieAlgebra, n: int = 1) -> GModule:
    return GModule(g, [Mat.zeros(n, n) for _ in range(g.dim)], name="trivial")


def dual_module(m: GModule) -> GModule:
    rho = [mat_scale(r.transpose(), -1) for r in m.rho]
    return GModule(m.algebra, rho, name=f"dual({m.name})", validate=False)


def tensor_module(a: GModule, b: GModule) -> GModule:
    """Tensor product module: rho(x) = rho_a(x) (x) 1 + 1 (x) rho_b(x)."""
    if a.algebra is not b.algebra:
        raise ValueError("tensor factors must share the algebra")
    ia, ib = Mat.identity(a.dim), Mat.identity(b.dim)
    rho = [mat_add(kron(ra, ib), kron(ia, rb)) for ra, rb in zip(a.rho, b.rho)]
    return GModule(a.algebra, rho, name=f"{a.name}(x){b.name}", validate=False)


def lie_kernel_module(g: LieAlgebra, k: int) -> GModule:
    """The degree-k Lie kernel with the extended adjoint action, in the
    canonical kernel basis.  The adjoint action preserves the kernel; this
    construction verifies that fact exactly while restricting."""
    kb = lie_kernel_basis(g, k)
    ncoords = len(exterior_basis(g.dim, k))
    kmat = Mat.from_columns(kb, ncoords) if kb else Mat.zeros(ncoords, 0)
    rho = []
    for i in range(g.dim):
        a = ad_matrix(g, unit_vector(i, g.dim), k)
        image = mat_mul(a, kmat)
        restricted = solve_many(kmat, image)
        if restricted is None:
            raise StructureError(
                f"adjoint action of e{i} does not preserve the degree-{k} Lie kernel")
        rho.append(restricted)
    return GModule(g, rho, name=f"lie_kernel(k={k})")


def dual_lie_kernel_module(g: LieAlgebra, k: int) -> GModule:
    """Dual of the Lie kernel module: rho(x) = -(ad_x restricted)^T."""
    m = dual_module(lie_kernel_module(g, k))
    m.name = f"dual_lie_kernel(k={k})"
    return m


# ---------------------------------------------------------------------------
# cochain spaces and the differential
# ---------------------------------------------------------------------------

def cochain_basis(g: LieAlgebra, m: GModule, k: int):
    """Ordered basis of C^k(g, M): (k-tuple, module index), tuple-major."""
    return [(t, u) for t in exterior_basis(g.dim, k) for u in range(m.dim)]


def cochain_dim(g: LieAlgebra, m: GModule, k: int) -> int:
    return len(exterior_basis(g.dim, k)) * m.dim


def ce_module_differential(m: GModule, k: int) -> Mat:
    """Matrix of the cochain differential C^k(g, M) -> C^{k+1}(g, M):

    (d f)(x_1..x_{k+1}) = sum_i (-1)^(i+1) x_i . f(..x_i-hat..)
                        + sum_{i<j} (-1)^(i+j) f([x_i,x_j], ..hats..)
    """
    g = m.algebra
    dom = exterior_basis(g.dim, k)
    cod = exterior_basis(g.dim, k + 1)
    dompos = {t: i for i, t in enumerate(dom)}
    out = Mat.zeros(len(cod) * m.dim, len(dom) * m.dim)
    for row_t, s in enumerate(cod):
        # action terms: (-1)^a rho(e_{s_a}) applied to f(s minus position a)
        for a in range(len(s)):
            rest = s[:a] + s[a + 1:]
            col_t = dompos[rest]
            sign = (-1) ** a
            rhoa = m.rho[s[a]]
            for u in range(m.dim):
                rowvec = out.rows[row_t * m.dim + u]
                rrow = rhoa.rows[u]
                for v in range(m.dim):
                    if rrow[v]:
                        rowvec[col_t * m.dim + v] += sign * rrow[v]
        # bracket terms: (-1)^(a+b) f([e_{s_a}, e_{s_b}] ^ rest)
        for a in range(len(s)):
            for b in range(a + 1, len(s)):
                sign = (-1) ** (a + b)
                vec = g.bracket_basis(s[a], s[b])
                rest = s[:a] + s[a + 1:b] + s[b + 1:]
                for w, c in enumerate(vec):
                    if not c:
                        continue
                    tsign, t = sort_with_sign((w,) + rest)
                    if tsign == 0:
                        continue
                    col_t = dompos[t]
                    coeff = sign * tsign * c
                    for u in range(m.dim):
                        out.rows[row_t * m.dim + u][col_t * m.dim + u] += coeff
    return out


def module_cohomology_dim(m: GModule, k: int) -> int:
    """dim H^k(g, M), exactly."""
    g = m.algebra
    if k < 0 or k > g.dim:
        return 0
    rank_out = rank(ce_module_differential(m, k))
    rank_in = rank(ce_module_differential(m, k - 1)) if k > 0 else 0
    return cochain_dim(g, m, k) - rank_out - rank_in


def invariants_basis(m: GModule):
    """Canonical basis of H^0(g, M) = the joint kernel of all rho(e_i)."""
    if m.dim == 0:
        return []
    if m.algebra.dim == 0:
        return [unit_vector(i, m.dim) for i in range(m.dim)]
    stacked = m.rho[0]
    for r in m.rho[1:]:
        stacked = mat_vstack(stacked, r)
    return nullspace(stacked)


def coboundary_solve(m: GModule, k: int, target):
    """Solve d x = target for x in C^{k-1}(g, M), target in C^k(g, M).

    Returns the deterministic particular solution (free coordinates zero),
    or None when the target is not a coboundary.  Raises StructureError if
    the target is not even a cocycle (then no solution can exist and the
    caller's input is inconsistent).
    """
    dk = ce_module_differential(m, k)
    if any(mat_vec(dk, target)):
        raise StructureError("coboundary_solve target is not a cocycle")
    dprev = ce_module_differential(m, k - 1)
    return solve(dprev, target)
