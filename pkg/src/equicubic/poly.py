"""Sparse multivariate polynomials over a cyclotomic field.

Monomials are exponent tuples; the order used for leading terms and for the
single-divisor reduction is graded lexicographic (total degree first, then
lexicographic with the first variable largest).  Symbolic parameters are
ordinary extra variables: identities involving them are required to hold
coefficientwise.
"""

from __future__ import annotations

from itertools import combinations_with_replacement

from .exactnum import CycloField, CycNum, DomainError
from .linalg import MatF, rank_and_kernel


class MultiPoly:
    __slots__ = ("field", "nvars", "terms", "_hash")

    def __init__(self, field: CycloField, nvars: int, terms=None):
        self.field = field
        self.nvars = nvars
        t = {}
        if terms:
            for exps, c in (terms.items() if isinstance(terms, dict) else terms):
                if len(exps) != nvars:
                    raise DomainError("exponent vector has wrong arity")
                if not isinstance(c, CycNum):
                    c = field.from_fraction(c)
                if c:
                    key = tuple(exps)
                    if key in t:
                        s = t[key] + c
                        if s:
                            t[key] = s
                        else:
                            del t[key]
                    else:
                        t[key] = c
        self.terms = t
        self._hash = None

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(field, nvars):
        return MultiPoly(field, nvars)

    @staticmethod
    def constant(field, nvars, c):
        if not isinstance(c, CycNum):
            c = field.from_fraction(c)
        return MultiPoly(field, nvars, {(0,) * nvars: c})

    @staticmethod
    def variable(field, nvars, i):
        exps = [0] * nvars
        exps[i] = 1
        return MultiPoly(field, nvars, {tuple(exps): field.one})

    # -- structure ---------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def degree(self):
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def is_homogeneous(self, in_first=None):
        """Homogeneous in the first `in_first` variables (default: all)."""
        if not self.terms:
            return True
        k = self.nvars if in_first is None else in_first
        degs = {sum(e[:k]) for e in self.terms}
        return len(degs) == 1

    def leading(self):
        """(exps, coeff) maximal in graded-lex order."""
        if not self.terms:
            raise DomainError("zero polynomial has no leading term")
        exps = max(self.terms, key=lambda e: (sum(e), e))
        return exps, self.terms[exps]

    def coeff(self, exps):
        return self.terms.get(tuple(exps), self.field.zero)

    def __eq__(self, other):
        return (
            isinstance(other, MultiPoly)
            and self.field is other.field
            and self.nvars == other.nvars
            and self.terms == other.terms
        )

    def __hash__(self):
        h = self._hash
        if h is None:
            h = self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return h

    # -- ring operations ---------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, MultiPoly):
            if other.field is not self.field or other.nvars != self.nvars:
                raise DomainError("polynomial arity or field mismatch")
            return other
        if isinstance(other, CycNum) or isinstance(other, int):
            return MultiPoly.constant(self.field, self.nvars, other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        t = dict(self.terms)
        for e, c in other.terms.items():
            if e in t:
                s = t[e] + c
                if s:
                    t[e] = s
                else:
                    del t[e]
            else:
                t[e] = c
        out = MultiPoly(self.field, self.nvars)
        out.terms = t
        return out

    __radd__ = __add__

    def __neg__(self):
        out = MultiPoly(self.field, self.nvars)
        out.terms = {e: -c for e, c in self.terms.items()}
        return out

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (CycNum, int)):
            if not isinstance(other, CycNum):
                other = self.field.from_fraction(other)
            if not other:
                return MultiPoly.zero(self.field, self.nvars)
            out = MultiPoly(self.field, self.nvars)
            out.terms = {e: c * other for e, c in self.terms.items()}
            return out
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        t = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                c = c1 * c2
                if e in t:
                    s = t[e] + c
                    if s:
                        t[e] = s
                    else:
                        del t[e]
                elif c:
                    t[e] = c
        out = MultiPoly(self.field, self.nvars)
        out.terms = t
        return out

    __rmul__ = __mul__

    def __pow__(self, e):
        if e < 0:
            raise DomainError("negative polynomial power")
        result = MultiPoly.constant(self.field, self.nvars, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base if e > 1 else base
            e >>= 1
        return result

    # -- evaluation and substitution ----------------------------------------

    def evaluate(self, point):
        if len(point) != self.nvars:
            raise DomainError("point arity mismatch")
        point = [p if isinstance(p, CycNum) else self.field.from_fraction(p) for p in point]
        acc = self.field.zero
        pow_cache = [{0: self.field.one} for _ in range(self.nvars)]
        for exps, c in self.terms.items():
            v = c
            for i, e in enumerate(exps):
                if e:
                    cache = pow_cache[i]
                    pe = cache.get(e)
                    if pe is None:
                        pe = point[i] ** e
                        cache[e] = pe
                    v = v * pe
            acc = acc + v
        return acc

    def partial(self, i):
        t = {}
        for exps, c in self.terms.items():
            e = exps[i]
            if e:
                ne = list(exps)
                ne[i] = e - 1
                t[tuple(ne)] = c * e
        out = MultiPoly(self.field, self.nvars)
        out.terms = t
        return out

    def substitute(self, images):
        """Substitute variable i by the polynomial images[i]."""
        return substitute_map(self, images)


def jacobian(f: MultiPoly):
    """All partial derivatives of f."""
    return [f.partial(i) for i in range(f.nvars)]


def substitute_map(q: MultiPoly, images) -> MultiPoly:
    """Compose q with the map x_i -> images[i]; images share field and arity."""
    if len(images) != q.nvars:
        raise DomainError("substitution needs one image per variable")
    if not images:
        raise DomainError("empty substitution")
    field = q.field
    nv = images[0].nvars
    for g in images:
        if g.nvars != nv or g.field is not field:
            raise DomainError("substitution images disagree in arity or field")
    pow_cache = [dict() for _ in range(q.nvars)]
    acc = MultiPoly.zero(field, nv)
    for exps, c in q.terms.items():
        term = MultiPoly.constant(field, nv, c)
        for i, e in enumerate(exps):
            if e:
                cache = pow_cache[i]
                pe = cache.get(e)
                if pe is None:
                    pe = images[i] ** e
                    cache[e] = pe
                term = term * pe
        acc = acc + term
    return acc


def act_linear(g: MatF, f: MultiPoly) -> MultiPoly:
    """Substitute x -> g*x on the first g.rows variables of f.

    Remaining variables (symbolic parameters) pass through unchanged.
    """
    if g.rows != g.cols:
        raise DomainError("linear action needs a square matrix")
    r = g.rows
    if f.nvars < r:
        raise DomainError("polynomial has fewer variables than the matrix size")
    field = f.field
    nv = f.nvars
    images = []
    for i in range(r):
        terms = {}
        for j in range(r):
            c = g[i, j]
            if c:
                e = [0] * nv
                e[j] = 1
                terms[tuple(e)] = c
        images.append(MultiPoly(field, nv, terms))
    for i in range(r, nv):
        images.append(MultiPoly.variable(field, nv, i))
    return substitute_map(f, images)


def is_semi_invariant(generators, f: MultiPoly):
    """Whether act_linear(g, f) is a scalar multiple of f for every generator.

    Accepts a list of MatF or any object with a `generator_matrices` attribute.
    Returns (flag, scalars per generator); scalars are None past a failure.
    """
    if hasattr(generators, "generator_matrices"):
        generators = generators.generator_matrices
    if f.is_zero():
        raise DomainError("semi-invariance of the zero polynomial is ill-posed")
    lead_exps, lead_c = f.leading()
    scalars = []
    ok = True
    for g in generators:
        h = act_linear(g, f)
        lam = h.coeff(lead_exps) / lead_c
        if lam.is_zero() or h != f * lam:
            # leading monomial may have moved; recover lambda from h's lead
            if not h.is_zero():
                he, hc = h.leading()
                if he in f.terms:
                    lam = hc / f.terms[he]
            if lam.is_zero() or h != f * lam:
                ok = False
                scalars.append(None)
                continue
        scalars.append(lam)
    return ok, scalars


def divides_principal(F: MultiPoly, q: MultiPoly) -> bool:
    """Exact divisibility F | q by reduction under graded-lex order.

    A single polynomial is a Groebner basis of the principal ideal it
    generates, so remainder zero is a decision procedure.
    """
    if F.is_zero():
        raise DomainError("division by the zero polynomial")
    if q.field is not F.field or q.nvars != F.nvars:
        raise DomainError("operands disagree in arity or field")
    f_exps, f_c = F.leading()
    f_c_inv = f_c.inverse()
    cur = dict(q.terms)
    field = q.field
    while cur:
        exps = max(cur, key=lambda e: (sum(e), e))
        c = cur[exps]
        diff = tuple(a - b for a, b in zip(exps, f_exps))
        if any(d < 0 for d in diff):
            return False
        factor = c * f_c_inv
        for e2, c2 in F.terms.items():
            e = tuple(a + b for a, b in zip(diff, e2))
            v = cur.get(e)
            s = (v - factor * c2) if v is not None else (-factor * c2)
            if s:
                cur[e] = s
            elif v is not None:
                del cur[e]
    return True


# ---------------------------------------------------------------------------
# lines in P^4 and interpolation
# ---------------------------------------------------------------------------

class LineParam:
    """A line in P^4 held as the canonical RREF 2x5 parametrization."""

    __slots__ = ("mat",)

    def __init__(self, mat: MatF):
        from .linalg import rref_rowspace

        if mat.cols != 5:
            raise DomainError("lines live in P^4: need 5 columns")
        canon = rref_rowspace(mat)
        if canon.rows != 2:
            raise DomainError("parametrization does not span a line")
        self.mat = canon

    @staticmethod
    def from_span(field, u, v):
        return LineParam(MatF.from_rows(field, [u, v]))

    @staticmethod
    def from_equations(field, eq_rows):
        """Line cut out by 3 independent linear equations (rows of coeffs)."""
        A = MatF.from_rows(field, eq_rows)
        rk, ker = rank_and_kernel(A)
        if len(ker) != 2:
            raise DomainError("equations do not cut out a line")
        return LineParam(MatF.from_rows(field, [list(k) for k in ker]))

    def rows(self):
        return self.mat.row(0), self.mat.row(1)

    def key(self):
        return self.mat.key()

    def __eq__(self, other):
        return isinstance(other, LineParam) and self.mat == other.mat

    def __hash__(self):
        return hash(self.mat)

    def point(self, s, t):
        """The point s*u + t*v on the line, as raw coordinates."""
        u, v = self.rows()
        f = self.mat.field
        if not isinstance(s, CycNum):
            s = f.from_fraction(s)
        if not isinstance(t, CycNum):
            t = f.from_fraction(t)
        return tuple(s * a + t * b for a, b in zip(u, v))

    def __repr__(self):
        return f"LineParam({self.mat!r})"


def restrict_to_line(f: MultiPoly, L: LineParam):
    """Coefficients of f(s*u + t*v) as a binary form in (s, t).

    f has 5 projective variables and possibly extra parameter variables.
    The returned list has degree+1 entries; entry j is the coefficient of
    s^(d-j) t^j, itself a MultiPoly in the parameters (constant when f has
    no parameters).
    """
    if f.nvars < 5:
        raise DomainError("restriction needs at least the 5 projective variables")
    if f.is_zero():
        return []
    nparams = f.nvars - 5
    if not f.is_homogeneous(in_first=5):
        raise DomainError("restriction needs a form homogeneous in x0..x4")
    field = f.field
    u, v = L.rows()
    nv2 = 2 + nparams
    s = MultiPoly.variable(field, nv2, 0)
    t = MultiPoly.variable(field, nv2, 1)
    images = [s * u[i] + t * v[i] for i in range(5)]
    for i in range(nparams):
        images.append(MultiPoly.variable(field, nv2, 2 + i))
    g = substitute_map(f, images)
    d = max(sum(e[:5]) for e in f.terms)
    coeffs = []
    for j in range(d + 1):
        sub = {}
        for e, c in g.terms.items():
            if e[0] == d - j and e[1] == j:
                sub[e[2:]] = c
        p = MultiPoly(field, nparams)
        p.terms = {k: v2 for k, v2 in sub.items() if v2}
        coeffs.append(p)
    return coeffs


def vanishes_on_line(f: MultiPoly, L: LineParam) -> bool:
    return all(c.is_zero() for c in restrict_to_line(f, L))


def monomials_of_degree(nvars: int, d: int):
    """All exponent tuples of total degree d, in descending graded-lex order."""
    out = []
    for combo in combinations_with_replacement(range(nvars), d):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    out.sort(key=lambda e: e, reverse=True)
    return out


def forms_vanishing_on(field, d: int, points=(), lines=()):
    """Exact basis of degree-d forms in 5 variables vanishing at the given
    points and identically on the given lines."""
    if d < 1:
        raise DomainError("interpolation degree must be >= 1")
    monos = monomials_of_degree(5, d)
    rows = []
    for p in points:
        coords = [c if isinstance(c, CycNum) else field.from_fraction(c) for c in p]
        pow_cache = [{0: field.one} for _ in range(5)]

        def mono_val(e):
            v = field.one
            for i, ei in enumerate(e):
                if ei:
                    cache = pow_cache[i]
                    w = cache.get(ei)
                    if w is None:
                        w = coords[i] ** ei
                        cache[ei] = w
                    v = v * w
            return v

        rows.append([mono_val(e) for e in monos])
    for L in lines:
        # the restriction of a monomial to the line is a binary form; each of
        # its d+1 coefficients is one linear condition on the coefficients
        cond = [[] for _ in range(d + 1)]
        for e in monos:
            mono = MultiPoly(field, 5, {e: field.one})
            cs = restrict_to_line(mono, L)
            for j in range(d + 1):
                cond[j].append(cs[j].coeff(()))
        rows.extend(cond)
    if not rows:
        basis_vecs = [
            tuple(field.one if i == j else field.zero for j in range(len(monos)))
            for i in range(len(monos))
        ]
    else:
        A = MatF(field, len(rows), len(monos), [x for row in rows for x in row])
        _, basis_vecs = rank_and_kernel(A)
    basis = []
    for vec in basis_vecs:
        p = MultiPoly(field, 5, {e: c for e, c in zip(monos, vec) if c})
        basis.append(p)
    return basis


# ---------------------------------------------------------------------------
# text form
# ---------------------------------------------------------------------------

def poly_to_str(f: MultiPoly, names=None) -> str:
    if names is None:
        names = [f"x{i}" for i in range(f.nvars)]
    if not f.terms:
        return "0"
    items = sorted(f.terms.items(), key=lambda kv: (sum(kv[0]), kv[0]), reverse=True)
    parts = []
    for exps, c in items:
        factors = []
        for i, e in enumerate(exps):
            if e == 1:
                factors.append(names[i])
            elif e > 1:
                factors.append(f"{names[i]}^{e}")
        cs = str(c)
        need_paren = (" + " in cs) or (" - " in cs) or cs.startswith("-") and factors
        if not factors:
            parts.append(f"({cs})" if (" + " in cs or " - " in cs) else cs)
            continue
        mono = "*".join(factors)
        if c.is_one():
            parts.append(mono)
        elif (-c).is_one() if isinstance(c, CycNum) else False:
            parts.append(f"-{mono}")
        elif need_paren:
            parts.append(f"({cs})*{mono}")
        else:
            parts.append(f"{cs}*{mono}")
    out = parts[0]
    for p in parts[1:]:
        if p.startswith("-") and not p.startswith("-("):
            out += " - " + p[1:]
        else:
            out += " + " + p
    return out


def poly_from_str(field: CycloField, text: str, names) -> MultiPoly:
    """Parse a polynomial in the named variables; `z` is the field generator."""
    from .exactnum import _tokenize
    from fractions import Fraction

    tokens = _tokenize(text)
    nv = len(names)
    name_idx = {nm: i for i, nm in enumerate(names)}
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else None

    def take():
        nonlocal pos
        tok = tokens[pos]
        pos += 1
        return tok

    def parse_atom():
        tok = peek()
        if tok == "(":
            take()
            v = parse_sum()
            if take() != ")":
                raise DomainError("unbalanced parenthesis")
        elif tok == "z":
            take()
            v = MultiPoly.constant(field, nv, field.zeta())
        elif tok in name_idx:
            take()
            v = MultiPoly.variable(field, nv, name_idx[tok])
        elif tok is not None and tok[0].isdigit():
            take()
            v = MultiPoly.constant(field, nv, Fraction(tok))
        else:
            raise DomainError(f"unexpected token {tok!r}")
        if peek() == "^":
            take()
            sign = 1
            if peek() == "-":
                take()
                sign = -1
            e = int(take())
            if sign < 0:
                if not (len(v.terms) == 1 and not any(any(k) for k in v.terms)):
                    raise DomainError("negative powers only on scalars")
                c = next(iter(v.terms.values())) ** (-e)
                v = MultiPoly.constant(field, nv, c)
            else:
                v = v ** e
        return v

    def parse_product():
        v = parse_atom()
        while peek() in ("*", "/"):
            op = take()
            w = parse_atom()
            if op == "*":
                v = v * w
            else:
                if not (len(w.terms) == 1 and not any(any(k) for k in w.terms)):
                    raise DomainError("division only by scalars")
                v = v * next(iter(w.terms.values())).inverse()
        return v

    def parse_sum():
        sign = 1
        if peek() in ("+", "-"):
            sign = -1 if take() == "-" else 1
        v = parse_product()
        if sign < 0:
            v = -v
        while peek() in ("+", "-"):
            op = take()
            w = parse_product()
            v = v + w if op == "+" else v - w
        return v

    value = parse_sum()
    if pos != len(tokens):
        raise DomainError("trailing garbage in polynomial text")
    return value
