"""Command-line front end: problem files, diagnostics, constructions, reports.

Problem files are line-oriented with four sections:

    [algebra]   algebra = "so4"          (catalog reference), or
                dim = 3                  followed by bracket statements
                [e1,e2] = e3 - 2*e1
    [action]    dim = 3                  (ambient dimension)
                V1 = x3*d/dx2 - x2*d/dx3 (one generator per basis element)
    [omega]     omega = dx(1,2,3)
    [options]   k = 1,2                  (degrees to process; default 1..n)
                max_poly_degree = 1      (truncation for invariants/repair;
                                          default 0)

`#` starts a comment.  Expressions are sums of terms; a term is a product of
a rational literal, variables `x<i>` with optional `^<exp>`, and one basis
factor: `dx(i,j,...)` for forms, `d/dx<i>` for vector fields, `e<i>` for
algebra elements.  All numerics are exact rationals (`p/q`).

Exit status: 0 = success, 1 = a check failed, 2 = input error.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from fractions import Fraction

from .lie_core import (LieAlgebra, StructureError, catalog_algebra,
                       format_multivector, lie_kernel_basis, validate_jacobi,
                       ALGEBRA_CATALOG, ce_betti)
from .polyform import Form, MultiField, Poly, format_field, format_form
from .action import (LieAction, check_multisymplectic, invariant_closed_forms,
                     preserves_omega, validate_action)
from .moment import (construct_brackets, construct_exactness,
                     construct_poincare, defining_residuals, existence_diagnostic,
                     make_equivariant, sigma_cochain, sigma_is_zero,
                     check_sigma_cocycle, check_module_morphism, uniqueness_check,
                     describe_kernel)


class MmkError(Exception):
    """Problem-file error with position information."""

    def __init__(self, message, line=None, col=None, expected=None):
        self.line, self.col, self.expected = line, col, expected
        where = f"line {line}" + (f", col {col}" if col is not None else "") \
            if line is not None else "input"
        exp = f" (expected {', '.join(sorted(expected))})" if expected else ""
        super().__init__(f"{where}: {message}{exp}")


# ---------------------------------------------------------------------------
# tokenizer
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<comment>\#.*)
  | (?P<ddx>d/dx(?P<ddxi>[0-9]+))
  | (?P<dx>dx)\b
  | (?P<var>x(?P<vari>[0-9]+))
  | (?P<eb>e(?P<ebi>[0-9]+))
  | (?P<number>[0-9]+(/[0-9]+)?)
  | (?P<string>"[A-Za-z0-9_]*")
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<sym>[-+*^(),=\[\]])
""", re.VERBOSE)


def tokenize(text, line_no):
    """One statement line -> list of (kind, value, col); col is 1-based."""
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise MmkError(f"unexpected character {text[pos]!r}",
                           line=line_no, col=pos + 1)
        kind = m.lastgroup if m.lastgroup in ("ws", "comment") else None
        if kind is None:
            for k in ("ddx", "dx", "var", "eb", "number", "string", "name", "sym"):
                if m.group(k):
                    kind = k
                    break
        col = pos + 1
        if kind == "dx":
            out.append(("dx", "dx", col))
        elif kind == "ddx":
            out.append(("ddx", int(m.group("ddxi")), col))
        elif kind == "var":
            out.append(("var", int(m.group("vari")), col))
        elif kind == "eb":
            out.append(("eb", int(m.group("ebi")), col))
        elif kind == "number":
            try:
                value = Fraction(m.group("number"))
            except ZeroDivisionError:
                raise MmkError("division by zero in rational literal",
                               line=line_no, col=col)
            out.append(("number", value, col))
        elif kind == "string":
            out.append(("string", m.group("string")[1:-1], col))
        elif kind == "name":
            out.append(("name", m.group("name"), col))
        elif kind == "sym":
            out.append(("sym", m.group("sym"), col))
        pos = m.end()
    return out


class _TokenStream:
    def __init__(self, tokens, line_no):
        self.tokens = tokens
        self.line = line_no
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def next(self):
        t = self.peek()
        if t is not None:
            self.i += 1
        return t

    def col(self):
        t = self.peek()
        if t is not None:
            return t[2]
        return (self.tokens[-1][2] + 1) if self.tokens else 1

    def fail(self, message, expected=None):
        raise MmkError(message, line=self.line, col=self.col(), expected=expected)

    def expect_sym(self, sym):
        t = self.peek()
        if t is None or t[0] != "sym" or t[1] != sym:
            self.fail(f"expected {sym!r}", expected={repr(sym)})
        return self.next()


# ---------------------------------------------------------------------------
# expression parser: sums of product terms
# ---------------------------------------------------------------------------

def _parse_factor(ts, term):
    t = ts.peek()
    if t is None:
        ts.fail("expected a factor", expected={"number", "x<i>", "dx(...)",
                                               "d/dx<i>", "e<i>"})
    kind, value, col = t
    if kind == "number":
        ts.next()
        term["coeff"] *= value
    elif kind == "var":
        ts.next()
        exp = 1
        nxt = ts.peek()
        if nxt is not None and nxt[0] == "sym" and nxt[1] == "^":
            caret = ts.next()
            num = ts.peek()
            if num is None or num[0] != "number" or num[1].denominator != 1:
                raise MmkError("exponent must be a positive integer",
                               line=ts.line, col=caret[2], expected={"integer"})
            ts.next()
            exp = int(num[1])
            if exp < 1:
                raise MmkError("exponent must be a positive integer",
                               line=ts.line, col=caret[2], expected={"integer"})
        term["powers"][value] = term["powers"].get(value, 0) + exp
    elif kind == "ddx":
        ts.next()
        if term["basis"] is not None:
            ts.fail("more than one basis factor in a term")
        term["basis"] = ("ddx", value, col)
    elif kind == "eb":
        ts.next()
        if term["basis"] is not None:
            ts.fail("more than one basis factor in a term")
        term["basis"] = ("e", value, col)
    elif kind == "dx":
        ts.next()
        ts.expect_sym("(")
        indices = []
        while True:
            num = ts.peek()
            if num is None or num[0] != "number" or num[1].denominator != 1:
                ts.fail("expected a coordinate index", expected={"integer"})
            ts.next()
            indices.append(int(num[1]))
            nxt = ts.peek()
            if nxt is not None and nxt[0] == "sym" and nxt[1] == ",":
                ts.next()
                continue
            break
        ts.expect_sym(")")
        if term["basis"] is not None:
            ts.fail("more than one basis factor in a term")
        term["basis"] = ("dx", tuple(indices), col)
    else:
        ts.fail(f"unexpected {value!r}", expected={"number", "x<i>", "dx(...)",
                                                   "d/dx<i>", "e<i>"})


def parse_expression(ts):
    """List of term dicts: coeff (Fraction), powers (var index -> exp, 1-based),
    basis (None or tagged tuple)."""
    terms = []
    sign = Fraction(1)
    t = ts.peek()
    if t is not None and t[0] == "sym" and t[1] in "+-":
        ts.next()
        if t[1] == "-":
            sign = -sign
    while True:
        term = {"coeff": sign, "powers": {}, "basis": None, "col": ts.col()}
        _parse_factor(ts, term)
        while True:
            nxt = ts.peek()
            if nxt is not None and nxt[0] == "sym" and nxt[1] == "*":
                ts.next()
                _parse_factor(ts, term)
            else:
                break
        terms.append(term)
        nxt = ts.peek()
        if nxt is None:
            break
        if nxt[0] == "sym" and nxt[1] in "+-":
            ts.next()
            sign = Fraction(1) if nxt[1] == "+" else Fraction(-1)
        else:
            ts.fail("expected '+', '-' or end of expression",
                    expected={"'+'", "'-'"})
    return terms


def _is_zero_literal(terms):
    return (len(terms) == 1 and terms[0]["basis"] is None
            and not terms[0]["powers"] and terms[0]["coeff"] == 0)


def terms_to_form(terms, n, line):
    """Build a Form on R^n; every term needs a dx(...) basis factor (or the
    whole expression is the literal 0)."""
    if _is_zero_literal(terms):
        return None  # degree unknown; caller decides
    degree = None
    comps = {}
    for term in terms:
        basis = term["basis"]
        if basis is None or basis[0] != "dx":
            raise MmkError("form term needs a dx(...) factor",
                           line=line, col=term["col"])
        idx1 = basis[1]
        for i in idx1:
            if not (1 <= i <= n):
                raise MmkError(f"coordinate index {i} out of range for dim {n}",
                               line=line, col=basis[2])
        if len(set(idx1)) != len(idx1):
            continue  # repeated index: the term is zero
        if degree is None:
            degree = len(idx1)
        elif degree != len(idx1):
            raise MmkError("mixed form degrees in one expression",
                           line=line, col=basis[2])
        mono = [0] * n
        for v, e in term["powers"].items():
            if not (1 <= v <= n):
                raise MmkError(f"variable x{v} out of range for dim {n}",
                               line=line, col=term["col"])
            mono[v - 1] += e
        # sort indices, tracking the permutation sign
        idx0 = [i - 1 for i in idx1]
        sign = 1
        for a in range(len(idx0)):
            for b in range(len(idx0) - 1 - a):
                if idx0[b] > idx0[b + 1]:
                    idx0[b], idx0[b + 1] = idx0[b + 1], idx0[b]
                    sign = -sign
        key = tuple(idx0)
        poly = comps.setdefault(key, {})
        mono = tuple(mono)
        poly[mono] = poly.get(mono, Fraction(0)) + term["coeff"] * sign
    if degree is None:
        raise MmkError("form expression has no nonzero term", line=line, col=1)
    return Form(n, degree, {k: Poly(n, v) for k, v in comps.items()})


def terms_to_field(terms, n, line):
    """Build a vector field on R^n; every term needs one d/dx<i> factor."""
    comps = [Poly(n) for _ in range(n)]
    if _is_zero_literal(terms):
        return MultiField.vector(n, comps)
    for term in terms:
        basis = term["basis"]
        if basis is None or basis[0] != "ddx":
            raise MmkError("vector-field term needs a d/dx<i> factor",
                           line=line, col=term["col"])
        i = basis[1]
        if not (1 <= i <= n):
            raise MmkError(f"direction d/dx{i} out of range for dim {n}",
                           line=line, col=basis[2])
        mono = [0] * n
        for v, e in term["powers"].items():
            if not (1 <= v <= n):
                raise MmkError(f"variable x{v} out of range for dim {n}",
                               line=line, col=term["col"])
            mono[v - 1] += e
        comps[i - 1] = comps[i - 1] + Poly(n, {tuple(mono): term["coeff"]})
    return MultiField.vector(n, comps)


def terms_to_algebra_vector(terms, dim, line):
    """Coefficient vector over e1..e<dim> from an algebra expression."""
    vec = [Fraction(0)] * dim
    if _is_zero_literal(terms):
        return vec
    for term in terms:
        basis = term["basis"]
        if basis is None or basis[0] != "e":
            raise MmkError("algebra term needs an e<i> factor",
                           line=line, col=term["col"])
        if term["powers"]:
            raise MmkError("algebra expressions cannot contain variables",
                           line=line, col=term["col"])
        i = basis[1]
        if not (1 <= i <= dim):
            raise MmkError(f"basis element e{i} out of range for dim {dim}",
                           line=line, col=basis[2])
        vec[i - 1] += term["coeff"]
    return vec


# ---------------------------------------------------------------------------
# problem files
# ---------------------------------------------------------------------------

SECTIONS = ("algebra", "action", "omega", "options")


class ProblemFile:
    def __init__(self):
        self.algebra_ref = None      # catalog name, or None for inline
        self.algebra = None          # LieAlgebra
        self.ambient_dim = None
        self.fields = None           # list of MultiField
        self.omega = None            # Form
        self.ks = None               # list of degrees, or None = default
        self.max_poly_degree = 0

    def build_action(self) -> LieAction:
        return LieAction(self.algebra, self.fields, self.omega)

    def degrees(self, override=None):
        if override is not None:
            return override
        if self.ks is not None:
            return self.ks
        return list(range(1, self.omega.degree))  # 1..n, n = degree - 1


def _split_sections(text):
    """section name -> list of (line_no, raw statement)."""
    sections = {}
    current = None
    for line_no, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].strip()
        if not stripped:
            continue
        m = re.fullmatch(r"\[([a-z_]+)\]", stripped)
        if m and m.group(1) in SECTIONS:
            current = m.group(1)
            if current in sections:
                raise MmkError(f"duplicate section [{current}]", line=line_no)
            sections[current] = []
            continue
        # bracket statements like [e1,e2] = ... belong to the algebra section
        if current is None:
            raise MmkError("statement outside of any section", line=line_no)
        sections[current].append((line_no, stripped))
    for required in ("algebra", "action", "omega"):
        if required not in sections:
            raise MmkError(f"missing required section [{required}]")
    return sections


def _statement(ts):
    """Parse 'name = <rest>' or '[ei,ej] = <rest>'; returns (key, ts-after-=)."""
    t = ts.peek()
    if t is None:
        ts.fail("empty statement")
    if t[0] == "sym" and t[1] == "[":
        ts.next()
        left = ts.peek()
        if left is None or left[0] != "eb":
            ts.fail("expected e<i>", expected={"e<i>"})
        ts.next()
        ts.expect_sym(",")
        right = ts.peek()
        if right is None or right[0] != "eb":
            ts.fail("expected e<j>", expected={"e<j>"})
        ts.next()
        ts.expect_sym("]")
        ts.expect_sym("=")
        return ("bracket", left[1], right[1]), ts
    if t[0] == "name":
        # plain identifiers: algebra, dim, omega, k, max_poly_degree, V<i>
        ts.next()
        ts.expect_sym("=")
        return ("name", t[1]), ts
    ts.fail("expected a statement")


def parse_problem(text) -> ProblemFile:
    sections = _split_sections(text)
    pf = ProblemFile()

    # ---- algebra ----
    dim = None
    brackets = {}
    bracket_lines = []
    for line_no, stmt in sections["algebra"]:
        ts = _TokenStream(tokenize(stmt, line_no), line_no)
        key, ts = _statement(ts)
        if key == ("name", "algebra"):
            t = ts.peek()
            if t is None or t[0] != "string":
                ts.fail("expected a quoted catalog name", expected={"string"})
            ts.next()
            if ts.peek() is not None:
                ts.fail("trailing input after catalog name")
            if t[1] not in ALGEBRA_CATALOG:
                raise MmkError(f"unknown catalog algebra {t[1]!r} "
                               f"(available: {', '.join(sorted(ALGEBRA_CATALOG))})",
                               line=line_no, col=t[2])
            pf.algebra_ref = t[1]
        elif key == ("name", "dim"):
            t = ts.peek()
            if t is None or t[0] != "number" or t[1].denominator != 1 or t[1] <= 0:
                ts.fail("expected a positive integer dimension",
                        expected={"integer"})
            ts.next()
            dim = int(t[1])
        elif key[0] == "bracket":
            bracket_lines.append((line_no, key[1], key[2], ts))
        else:
            raise MmkError(f"unexpected statement {key[1]!r} in [algebra]",
                           line=line_no)
    if pf.algebra_ref is not None:
        if dim is not None or bracket_lines:
            raise MmkError("catalog reference and inline structure constants "
                           "cannot be mixed in [algebra]")
        pf.algebra = catalog_algebra(pf.algebra_ref)
    else:
        if dim is None:
            raise MmkError("[algebra] needs either algebra = \"<name>\" or dim = <d>")
        for line_no, i, j, ts in bracket_lines:
            if not (1 <= i <= dim and 1 <= j <= dim):
                raise MmkError(f"bracket indices [e{i},e{j}] out of range "
                               f"for dim {dim}", line=line_no)
            if i == j:
                raise MmkError(f"bracket [e{i},e{i}] must be zero and cannot "
                               f"be assigned", line=line_no)
            vec = terms_to_algebra_vector(parse_expression(ts), dim, line_no)
            if ts.peek() is not None:
                ts.fail("trailing input after expression")
            sign = 1
            if i > j:
                i, j, sign = j, i, -1
            if (i - 1, j - 1) in brackets:
                raise MmkError(f"duplicate bracket [e{i},e{j}]", line=line_no)
            if any(vec):
                brackets[(i - 1, j - 1)] = [sign * c for c in vec]
        pf.algebra = LieAlgebra(dim, brackets, name=f"inline{dim}")
        try:
            validate_jacobi(pf.algebra)
        except StructureError as e:
            raise MmkError(f"structure constants fail the Jacobi identity: {e}")

    # ---- action ----
    n = None
    field_stmts = {}
    for line_no, stmt in sections["action"]:
        ts = _TokenStream(tokenize(stmt, line_no), line_no)
        key, ts = _statement(ts)
        if key == ("name", "dim"):
            t = ts.peek()
            if t is None or t[0] != "number" or t[1].denominator != 1 or t[1] <= 0:
                ts.fail("expected a positive integer dimension",
                        expected={"integer"})
            ts.next()
            n = int(t[1])
        elif key[0] == "name" and re.fullmatch(r"V[0-9]+", key[1]):
            idx = int(key[1][1:])
            if n is None:
                raise MmkError("dim = <n> must precede generator statements",
                               line=line_no)
            if idx in field_stmts:
                raise MmkError(f"duplicate generator V{idx}", line=line_no)
            field_stmts[idx] = terms_to_field(parse_expression(ts), n, line_no)
            if ts.peek() is not None:
                ts.fail("trailing input after expression")
        else:
            raise MmkError(f"unexpected statement in [action]", line=line_no)
    if n is None:
        raise MmkError("[action] needs dim = <n>")
    d = pf.algebra.dim
    missing = [i for i in range(1, d + 1) if i not in field_stmts]
    extra = [i for i in field_stmts if not (1 <= i <= d)]
    if missing or extra:
        raise MmkError(f"[action] needs V1..V{d} exactly"
                       + (f"; missing {missing}" if missing else "")
                       + (f"; out of range {extra}" if extra else ""))
    pf.ambient_dim = n
    pf.fields = [field_stmts[i] for i in range(1, d + 1)]

    # ---- omega ----
    omega = None
    for line_no, stmt in sections["omega"]:
        ts = _TokenStream(tokenize(stmt, line_no), line_no)
        key, ts = _statement(ts)
        if key != ("name", "omega"):
            raise MmkError("only omega = <form> is allowed in [omega]",
                           line=line_no)
        if omega is not None:
            raise MmkError("duplicate omega statement", line=line_no)
        omega = terms_to_form(parse_expression(ts), n, line_no)
        if ts.peek() is not None:
            ts.fail("trailing input after expression")
        if omega is None:
            raise MmkError("omega must not be the zero form", line=line_no)
    if omega is None:
        raise MmkError("[omega] needs omega = <form>")
    if omega.degree < 2:
        raise MmkError("omega must have degree at least 2")
    pf.omega = omega

    # ---- options ----
    for line_no, stmt in sections.get("options", []):
        ts = _TokenStream(tokenize(stmt, line_no), line_no)
        key, ts = _statement(ts)
        if key == ("name", "k"):
            ks = []
            while True:
                t = ts.peek()
                if t is None or t[0] != "number" or t[1].denominator != 1 or t[1] < 1:
                    ts.fail("expected a degree", expected={"integer"})
                ts.next()
                ks.append(int(t[1]))
                nxt = ts.peek()
                if nxt is not None and nxt[0] == "sym" and nxt[1] == ",":
                    ts.next()
                    continue
                break
            if ts.peek() is not None:
                ts.fail("trailing input after degree list")
            pf.ks = sorted(set(ks))
        elif key == ("name", "max_poly_degree"):
            t = ts.peek()
            if t is None or t[0] != "number" or t[1].denominator != 1 or t[1] < 0:
                ts.fail("expected a nonnegative integer", expected={"integer"})
            ts.next()
            if ts.peek() is not None:
                ts.fail("trailing input")
            pf.max_poly_degree = int(t[1])
        else:
            raise MmkError(f"unknown option {key[1]!r}", line=line_no)
    return pf


def serialize_problem(pf: ProblemFile) -> str:
    """Canonical text form; parse(serialize(parse(t))) == parse(t)."""
    out = ["[algebra]"]
    if pf.algebra_ref is not None:
        out.append(f'algebra = "{pf.algebra_ref}"')
    else:
        out.append(f"dim = {pf.algebra.dim}")
        for (i, j) in sorted(pf.algebra.table):
            vec = pf.algebra.table[(i, j)]
            mv = {(m,): c for m, c in enumerate(vec) if c}
            out.append(f"[e{i + 1},e{j + 1}] = {format_multivector(mv)}")
    out.append("")
    out.append("[action]")
    out.append(f"dim = {pf.ambient_dim}")
    for i, v in enumerate(pf.fields):
        out.append(f"V{i + 1} = {format_field(v)}")
    out.append("")
    out.append("[omega]")
    out.append(f"omega = {format_form(pf.omega)}")
    out.append("")
    out.append("[options]")
    if pf.ks is not None:
        out.append("k = " + ",".join(str(k) for k in pf.ks))
    out.append(f"max_poly_degree = {pf.max_poly_degree}")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# reporting
# ---------------------------------------------------------------------------

class Report:
    """Collects per-command results; renders text or canonical JSON."""

    def __init__(self, command, problem_name):
        self.data = {"command": command, "problem": problem_name, "sections": []}

    def section(self, title, payload, lines):
        self.data["sections"].append(
            {"title": title, "data": payload, "text": lines})

    def render(self, fmt):
        if fmt == "machine":
            return json.dumps(self.data, sort_keys=True, indent=2) + "\n"
        out = []
        for sec in self.data["sections"]:
            out.append(f"== {sec['title']} ==")
            out.extend(sec["text"])
            out.append("")
        return "\n".join(out)


def _kernel_section(report, action, ks):
    lines = []
    payload = {}
    for k in ks:
        names = describe_kernel(action, k)
        payload[str(k)] = names
        lines.append(f"k={k}: dim {len(names)}")
        for s in names:
            lines.append(f"  {s}")
    report.section("Lie kernel bases", payload, lines)


def _cohomology_payload(action, ks):
    g = action.algebra
    betti = list(ce_betti(g))
    kernels = {str(k): len(lie_kernel_basis(g, k)) for k in ks}
    return betti, kernels


def cmd_cohomology(pf, args, report):
    action = pf.build_action()
    ks = pf.degrees(args.k)
    betti, kernels = _cohomology_payload(action, ks)
    lines = ["H^k dimensions (trivial coefficients), k = 0.."
             + str(len(betti) - 1) + ":",
             "  (" + ", ".join(str(b) for b in betti) + ")",
             "Lie kernel dimensions:"]
    for k in ks:
        lines.append(f"  k={k}: {kernels[str(k)]}")
    report.section("Cohomology", {"betti": betti, "kernel_dims": kernels}, lines)
    return 0


def cmd_kernel(pf, args, report):
    action = pf.build_action()
    _kernel_section(report, action, pf.degrees(args.k))
    return 0


def cmd_check_action(pf, args, report):
    action = pf.build_action()
    ok = True
    payload = {}
    lines = []
    try:
        s = validate_action(action)
        payload["closes"] = True
        payload["bracket_sign"] = s
        lines.append(f"generators close under the bracket: yes (sign {s:+d})")
    except StructureError as e:
        ok = False
        payload["closes"] = False
        payload["error"] = str(e)
        lines.append(f"generators close under the bracket: NO — {e}")
    msy = check_multisymplectic(action)
    payload.update(msy)
    lines.append(f"omega closed: {'yes' if msy['closed'] else 'NO'}")
    lines.append(f"omega nondegenerate on constant vectors: "
                 f"{'yes' if msy['nondegenerate'] else 'NO'}")
    lines.append(f"plectic degree n = {msy['plectic_degree']}")
    bad = preserves_omega(action)
    payload["omega_preserved"] = not bad
    if bad:
        ok = False
        lines.append("omega preserved by all generators: NO — failing: "
                     + ", ".join(f"V{i + 1}" for i in bad))
    else:
        lines.append("omega preserved by all generators: yes")
    if not (msy["closed"] and msy["nondegenerate"]):
        ok = False
    report.section("Action checks", payload, lines)
    return 0 if ok else 1


def cmd_invariants(pf, args, report):
    action = pf.build_action()
    validate_action(action)
    D = pf.max_poly_degree if args.max_poly_degree is None else args.max_poly_degree
    n = action.plectic_degree()
    payload = {}
    lines = [f"invariant closed forms, coefficient degree <= {D}:"]
    for k in pf.degrees(args.k):
        p = n - k
        if p < 0:
            continue
        forms = invariant_closed_forms(action, p, D)
        payload[str(k)] = [format_form(f) for f in forms]
        lines.append(f"k={k} (form degree {p}): dim {len(forms)}")
        for f in forms:
            lines.append(f"  {format_form(f)}")
    report.section("Invariant closed forms", payload, lines)
    return 0


def cmd_diagnose(pf, args, report):
    action = pf.build_action()
    validate_action(action)
    D = pf.max_poly_degree if args.max_poly_degree is None else args.max_poly_degree
    diag = existence_diagnostic(action, ks=pf.degrees(args.k), max_degree=D)
    lines = [f"bracket sign: {diag['bracket_sign']:+d}",
             "H^k (trivial coefficients): ("
             + ", ".join(str(b) for b in diag["betti"]) + ")",
             f"omega closed/nondegenerate/preserved: "
             f"{diag['omega_closed']}/{diag['omega_nondegenerate']}/"
             f"{diag['omega_preserved']}"]
    for k, e in sorted(diag["degrees"].items()):
        lines.append(
            f"k={k}: kernel dim {e['dim_kernel']}, betti {e['betti_k']}, "
            f"h0(dual kernel) {e['h0_dual_kernel']}")
        lines.append(
            f"      routes: homotopy-operator {'yes' if e['poincare_applies'] else 'no'}, "
            f"exactness {'yes' if e['exactness_applies'] else 'no'}, "
            f"brackets {'yes' if e['brackets_apply'] else 'no'}")
        lines.append(
            f"      truncated Hom module (D<={e['truncation_degree']}): "
            f"dim {e['hom_module_dim']}, h0 = {e['h0_hom']} "
            f"(uniqueness obstruction), h1 = {e['h1_hom']} "
            f"(equivariantization obstruction)")
    diag_json = {"degrees": {str(k): v for k, v in diag["degrees"].items()}}
    for key, val in diag.items():
        if key != "degrees":
            diag_json[key] = val
    report.section("Existence diagnostics", diag_json, lines)
    return 0


_METHODS = {
    "poincare": construct_poincare,
    "exactness": construct_exactness,
    "brackets": construct_brackets,
}


def _moment_section(report, action, mm, title):
    payload = {}
    lines = []
    residuals = defining_residuals(mm)
    all_zero = all(r.is_zero() for r in residuals.values())
    for k in mm.degrees():
        names = describe_kernel(action, k)
        entries = []
        for a, nm in enumerate(names):
            val = format_form(mm.components[k][a])
            entries.append({"p": nm, "f": val})
            lines.append(f"f_{k}({nm}) = {val}")
        payload[str(k)] = entries
    payload["residuals_zero"] = all_zero
    lines.append(f"defining-equation residuals all zero: {'yes' if all_zero else 'NO'}")
    report.section(title, payload, lines)
    return all_zero


def cmd_construct(pf, args, report):
    action = pf.build_action()
    validate_action(action)
    ks = pf.degrees(args.k)
    try:
        mm = _METHODS[args.method](action, ks=ks)
    except StructureError as e:
        report.section(f"Moment map ({args.method})",
                       {"error": str(e)}, [f"construction failed: {e}"])
        return 1
    ok = _moment_section(report, action, mm, f"Moment map ({args.method})")
    return 0 if ok else 1


def cmd_equivariance(pf, args, report):
    action = pf.build_action()
    validate_action(action)
    ks = pf.degrees(args.k)
    D = pf.max_poly_degree if args.max_poly_degree is None else args.max_poly_degree
    try:
        mm = _METHODS[args.method](action, ks=ks)
    except StructureError as e:
        report.section(f"Moment map ({args.method})",
                       {"error": str(e)}, [f"construction failed: {e}"])
        return 1
    ok = True
    for k in ks:
        payload = {}
        lines = []
        sigma = sigma_cochain(mm, k)
        zero = sigma_is_zero(sigma)
        payload["sigma_zero"] = zero
        names = describe_kernel(action, k)
        if not zero:
            entries = []
            for i in range(action.algebra.dim):
                for a, nm in enumerate(names):
                    if not sigma[i][a].is_zero():
                        entries.append({"xi": f"e{i + 1}", "p": nm,
                                        "value": format_form(sigma[i][a])})
                        lines.append(f"Sigma(e{i + 1})({nm}) = "
                                     f"{format_form(sigma[i][a])}")
            payload["nonzero_entries"] = entries
        cocycle = check_sigma_cocycle(mm, k)
        payload["cocycle"] = cocycle
        lines.append(f"Sigma is a 1-cocycle: {'yes' if cocycle else 'NO'}")
        if not cocycle:
            ok = False
        quotient_ok, strong_ok = check_module_morphism(mm, k)
        payload["morphism_quotient"] = quotient_ok
        payload["morphism_strong"] = strong_ok
        lines.append(f"module morphism up to exact terms: "
                     f"{'yes' if quotient_ok else 'NO'}")
        lines.append(f"strong module morphism (Sigma = 0): "
                     f"{'yes' if strong_ok else 'no'}")
        if not quotient_ok:
            ok = False
        if zero:
            lines.append("already equivariant; no repair needed")
            payload["repair"] = "already equivariant"
        else:
            try:
                fixed, l_forms, status = make_equivariant(mm, k, D)
            except StructureError as e:
                status, fixed, l_forms = f"failed: {e}", None, None
                ok = False
            payload["repair"] = status
            lines.append(f"equivariantization at D<={D}: {status}")
            if fixed is not None:
                for a, nm in enumerate(names):
                    lines.append(f"  l({nm}) = {format_form(l_forms[a])}")
                payload["l"] = [{"p": nm, "l": format_form(l_forms[a])}
                                for a, nm in enumerate(names)]
        uniq = uniqueness_check(action, k, D)
        payload["unique_in_truncation"] = uniq["unique"]
        payload["invariant_hom_dim"] = uniq["dim_invariants"]
        lines.append(f"equivariant map unique in truncation: "
                     f"{'yes' if uniq['unique'] else 'no'} "
                     f"(invariant Hom dim {uniq['dim_invariants']})")
        report.section(f"Equivariance, k={k}", payload, lines)
    return 0 if ok else 1


def cmd_report(pf, args, report):
    rc = 0
    rc = max(rc, cmd_check_action(pf, args, report))
    rc = max(rc, cmd_cohomology(pf, args, report))
    cmd_kernel(pf, args, report)
    rc = max(rc, cmd_diagnose(pf, args, report))
    rc = max(rc, cmd_invariants(pf, args, report))
    rc = max(rc, cmd_construct(pf, args, report))
    rc = max(rc, cmd_equivariance(pf, args, report))
    return rc


COMMANDS = {
    "cohomology": cmd_cohomology,
    "kernel": cmd_kernel,
    "check-action": cmd_check_action,
    "invariants": cmd_invariants,
    "diagnose": cmd_diagnose,
    "construct": cmd_construct,
    "equivariance": cmd_equivariance,
    "report": cmd_report,
}


def _resolve_path(name):
    if os.path.exists(name):
        return name
    bundled = os.path.join(os.path.dirname(__file__), "problems", name)
    if os.path.exists(bundled):
        return bundled
    if not name.endswith(".mmk") and os.path.exists(bundled + ".mmk"):
        return bundled + ".mmk"
    return None


def _parse_k_list(text):
    try:
        ks = sorted({int(part) for part in text.split(",")})
    except ValueError:
        raise argparse.ArgumentTypeError("expected a comma-separated list of degrees")
    if any(k < 1 for k in ks):
        raise argparse.ArgumentTypeError("degrees must be >= 1")
    return ks


def build_parser():
    ap = argparse.ArgumentParser(
        prog="momentkit",
        description="Exact Lie algebra cohomology and weak moment maps "
                    "for multisymplectic actions on R^n.")
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("file", help="problem file (path or bundled name, e.g. so4_r4.mmk)")
    ap.add_argument("--k", type=_parse_k_list, default=None,
                    help="degrees to process, e.g. 1,2")
    ap.add_argument("--max-poly-degree", type=int, default=None, dest="max_poly_degree",
                    help="polynomial truncation degree for invariants/repairs")
    ap.add_argument("--method", choices=sorted(_METHODS), default="poincare",
                    help="construction route (construct/equivariance/report)")
    ap.add_argument("--format", choices=("text", "machine"), default="text")
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    path = _resolve_path(args.file)
    if path is None:
        print(f"error: cannot find problem file {args.file!r}", file=sys.stderr)
        return 2
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    try:
        pf = parse_problem(text)
    except MmkError as e:
        print(f"error: {path}: {e}", file=sys.stderr)
        return 2
    if args.max_poly_degree is not None and args.max_poly_degree < 0:
        print("error: --max-poly-degree must be >= 0", file=sys.stderr)
        return 2
    report = Report(args.command, os.path.basename(path))
    try:
        rc = COMMANDS[args.command](pf, args, report)
    except (StructureError, ValueError) as e:
        report.section("Error", {"error": str(e)}, [f"error: {e}"])
        rc = 1
    sys.stdout.write(report.render(args.format))
    return rc


if __name__ == "__main__":
    sys.exit(main())
