"""Exact equivariant projective geometry on explicit threefolds: orbits and
stabilizers of points, line orbits, singularity and node certification, and
invariant members of hypersurface families.
"""

from __future__ import annotations

from dataclasses import dataclass

from .exactnum import CycNum, DomainError
from .groups import FinGroup, canonical_point, _point_key
from .linalg import MatF, rank, rank_and_kernel
from .poly import (LineParam, MultiPoly, act_linear, is_semi_invariant,
                   jacobian, restrict_to_line, substitute_map)


class ProjPoint:
    """A point of P^4 in canonical form (first nonzero coordinate 1)."""

    __slots__ = ("field", "coords")

    def __init__(self, field, coords):
        self.field = field
        self.coords = canonical_point(field, coords)

    def key(self):
        return _point_key(self.coords)

    def __eq__(self, other):
        return isinstance(other, ProjPoint) and self.coords == other.coords

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return "[" + " : ".join(str(c) for c in self.coords) + "]"


@dataclass
class Hypersurface:
    """A hypersurface in P^4: one defining form, possibly with parameters
    adjoined as extra variables beyond the first five."""

    form: MultiPoly
    name: str = ""

    def __post_init__(self):
        if self.form.is_zero():
            raise DomainError("hypersurface needs a nonzero form")
        if not self.form.is_homogeneous(in_first=5):
            raise DomainError("defining form must be homogeneous in x0..x4")

    @property
    def nparams(self):
        return self.form.nvars - 5

    def value_at(self, p):
        """Value at a point; a polynomial in the parameters (constant if none)."""
        coords = list(p.coords if isinstance(p, ProjPoint) else p)
        return _eval_in_params(self.form, coords)

    def contains(self, p) -> bool:
        return self.value_at(p).is_zero()


def _eval_in_params(f: MultiPoly, coords):
    """Evaluate the projective variables only; result is a MultiPoly in the
    parameter variables."""
    field = f.field
    np_ = f.nvars - 5
    images = [MultiPoly.constant(field, np_, c if isinstance(c, CycNum) else field.from_fraction(c))
              for c in coords]
    for i in range(np_):
        images.append(MultiPoly.variable(field, np_, i))
    return substitute_map(f, images)


# ---------------------------------------------------------------------------
# orbits
# ---------------------------------------------------------------------------

@dataclass
class OrbitRecord:
    seed: ProjPoint
    orbit: list          # sorted ProjPoint list
    stabilizer: frozenset  # element ids
    length: int

    def __post_init__(self):
        assert self.length == len(self.orbit)


def orbit_and_stabilizer(G: FinGroup, p: ProjPoint) -> OrbitRecord:
    """Orbit by applying every element; stabilizer by exact fixed-point test."""
    field = G.field
    seen = {}
    stab = []
    base = p.coords
    for i in range(G.order):
        q = canonical_point(field, G.elements[i].apply(base))
        k = _point_key(q)
        if k not in seen:
            seen[k] = q
        if q == base:
            stab.append(i)
    orbit = [ProjPoint(field, q) for q in seen.values()]
    orbit.sort(key=lambda pt: pt.key())
    rec = OrbitRecord(seed=p, orbit=orbit, stabilizer=frozenset(stab), length=len(orbit))
    if rec.length * len(rec.stabilizer) != G.order:
        raise RuntimeError("orbit-stabilizer identity failed")
    return rec


def orbit_of_line(G: FinGroup, L: LineParam):
    """Images g*L, canonicalized by row-space RREF and deduplicated."""
    field = G.field
    u, v = L.rows()
    out = {}
    for i in range(G.order):
        M = G.elements[i]
        img = LineParam(MatF(field, 2, 5, list(M.apply(u)) + list(M.apply(v))))
        out.setdefault(img.key(), img)
    return sorted(out.values(), key=lambda l: l.key())


def orbit_of_subspace(G: FinGroup, mat: MatF):
    """Orbit of a linear subspace given by a spanning-row matrix."""
    from .linalg import rref_rowspace

    field = G.field
    out = {}
    for i in range(G.order):
        M = G.elements[i]
        rows = [list(M.apply(mat.row(r))) for r in range(mat.rows)]
        img = rref_rowspace(MatF(field, mat.rows, mat.cols, [x for row in rows for x in row]))
        out.setdefault(img.key(), img)
    return sorted(out.values(), key=lambda m: m.key())


# ---------------------------------------------------------------------------
# singularity and node certification
# ---------------------------------------------------------------------------

def is_singular_at(X: Hypersurface, p: ProjPoint) -> bool:
    """All five partials vanish at p (p must lie on X)."""
    if X.nparams:
        raise DomainError("instantiate parameters before singularity checks")
    if not X.contains(p):
        raise DomainError("point does not lie on the hypersurface")
    coords = list(p.coords)
    return all(d.evaluate(coords).is_zero() for d in jacobian(X.form))


def _dehomogenize(f: MultiPoly, c: int, at):
    """Substitute x_c = at[c] and keep the other four as variables."""
    field = f.field
    images = []
    vi = 0
    for i in range(5):
        if i == c:
            images.append(MultiPoly.constant(field, 4, at[c]))
        else:
            images.append(MultiPoly.variable(field, 4, vi))
            vi += 1
    return substitute_map(f, images)


def hessian_rank_at(X: Hypersurface, p: ProjPoint) -> int:
    """Rank of the 4x4 Hessian of the affine equation at p (dehomogenized in
    a coordinate nonzero at p)."""
    if X.nparams:
        raise DomainError("instantiate parameters before Hessian checks")
    coords = list(p.coords)
    c = next(i for i, x in enumerate(coords) if x)
    g = _dehomogenize(X.form, c, coords)
    pt = [coords[i] for i in range(5) if i != c]
    field = X.form.field
    H = []
    firsts = jacobian(g)
    for a in range(4):
        da = firsts[a]
        H.extend(da.partial(b).evaluate(pt) for b in range(4))
    return rank(MatF(field, 4, 4, H))


def is_node_at(X: Hypersurface, p: ProjPoint) -> bool:
    """Ordinary double point of the threefold: full-rank affine Hessian."""
    if not is_singular_at(X, p):
        raise DomainError("node test at a smooth point")
    return hessian_rank_at(X, p) == 4


@dataclass
class SurfaceSlice:
    """A surface cut out on a hypersurface X by one extra form q."""

    threefold: Hypersurface
    cut: MultiPoly
    name: str = ""

    def contains(self, p) -> bool:
        return self.threefold.contains(p) and _eval_in_params(self.cut, list(p.coords)).is_zero()

    def is_singular_at(self, p: ProjPoint) -> bool:
        """Jacobian criterion for the complete intersection {X = q = 0}."""
        if not self.contains(p):
            raise DomainError("point does not lie on the surface")
        field = self.threefold.form.field
        coords = list(p.coords)
        rows = []
        for f in (self.threefold.form, self.cut):
            rows.extend(d.evaluate(coords) for d in jacobian(f))
        J = MatF(field, 2, 5, rows)
        return rank(J) < 2

    def is_node_at(self, p: ProjPoint) -> bool:
        """Surface ordinary double point at a point where the ambient
        threefold is smooth: the Hessian of a local defining function of the
        surface inside the threefold, restricted to the threefold tangent
        space, has full rank 3."""
        if not self.is_singular_at(p):
            return False
        field = self.threefold.form.field
        coords = list(p.coords)
        gradF = [d.evaluate(coords) for d in jacobian(self.threefold.form)]
        gradq = [d.evaluate(coords) for d in jacobian(self.cut)]
        if not any(gradF):
            raise DomainError("ambient threefold is singular here; node test void")
        # mu with grad(q - mu F) = 0
        i0 = next(i for i, x in enumerate(gradF) if x)
        mu = gradq[i0] * gradF[i0].inverse()
        if any((gradq[i] - mu * gradF[i]) for i in range(5)):
            raise RuntimeError("gradients are not proportional at a singular point")
        c = next(i for i, x in enumerate(coords) if x)
        h = _dehomogenize(self.cut - self.threefold.form * mu, c, coords)
        pt = [coords[i] for i in range(5) if i != c]
        firsts = jacobian(h)
        H = []
        for a in range(4):
            da = firsts[a]
            H.extend(da.partial(b).evaluate(pt) for b in range(4))
        # tangent space of X in the chart: kernel of the affine gradient row
        gF = _dehomogenize(self.threefold.form, c, coords)
        row = [d.evaluate(pt) for d in jacobian(gF)]
        _, tangent = rank_and_kernel(MatF(field, 1, 4, row))
        if len(tangent) != 3:
            raise RuntimeError("tangent space of the threefold is not 3-dimensional")
        Hm = MatF(field, 4, 4, H)
        rows = []
        for u in tangent:
            Hu = Hm.apply(u)
            rows.append([sum_product(field, Hu, v) for v in tangent])
        B = MatF(field, 3, 3, [x for r in rows for x in r])
        return rank(B) == 3


def sum_product(field, xs, ys):
    acc = field.zero
    for x, y in zip(xs, ys):
        if x and y:
            acc = acc + x * y
    return acc


# ---------------------------------------------------------------------------
# invariant families and censuses
# ---------------------------------------------------------------------------

def invariant_members_of_pencil(G: FinGroup, members):
    """Indices of the family members semi-invariant under every generator."""
    out = []
    for idx, X in enumerate(members):
        ok, _ = is_semi_invariant(G.generator_matrices, X.form)
        if ok:
            out.append(idx)
    return out


@dataclass
class CensusEntry:
    label: str
    seed: ProjPoint
    on_hypersurface: bool
    length: int
    stabilizer_order: int
    stabilizer_fingerprint: object
    record: OrbitRecord


def orbit_census(G: FinGroup, X: Hypersurface | None, seeds, fingerprints=True):
    """Per-seed orbit, stabilizer and membership report."""
    from .groups import SubFinGroup
    from .subgroups import fingerprint_of_group

    out = []
    for label, p in seeds:
        rec = orbit_and_stabilizer(G, p)
        on_x = bool(X) and all(X.value_at(q).is_zero() for q in rec.orbit)
        fp = None
        if fingerprints:
            H = SubFinGroup(G, rec.stabilizer)
            fp = fingerprint_of_group(H)
        out.append(CensusEntry(label, p, on_x, rec.length,
                               len(rec.stabilizer), fp, rec))
    return out


def plane_in_hypersurface(X: Hypersurface, plane: MatF) -> bool:
    """Whether a plane (3x5 parametrization, rank 3) lies on X."""
    if plane.rows != 3 or plane.cols != 5:
        raise DomainError("a plane needs a 3x5 parametrization")
    if rank(plane) != 3:
        raise DomainError("parametrization does not span a plane")
    field = X.form.field
    nparams = X.nparams
    nv = 3 + nparams
    svars = [MultiPoly.variable(field, nv, i) for i in range(3)]
    images = []
    for i in range(5):
        acc = MultiPoly.zero(field, nv)
        for r in range(3):
            c = plane[r, i]
            if c:
                acc = acc + svars[r] * c
        images.append(acc)
    for i in range(nparams):
        images.append(MultiPoly.variable(field, nv, 3 + i))
    return substitute_map(X.form, images).is_zero()


def plane_from_equations(field, eq_rows) -> MatF:
    """Parametrize the plane cut out by 2 independent linear equations."""
    A = MatF.from_rows(field, eq_rows)
    _, ker = rank_and_kernel(A)
    if len(ker) != 3:
        raise DomainError("equations do not cut out a plane")
    return MatF(field, 3, 5, [x for v in ker for x in v])


def graded_piece_span_equal(A_forms, B_forms) -> bool:
    """Whether two sets of forms of one degree span the same linear space."""
    from .linalg import rref_rowspace
    from .poly import monomials_of_degree

    if not A_forms or not B_forms:
        return not A_forms and not B_forms
    field = A_forms[0].field
    nv = A_forms[0].nvars
    degs = {f.degree() for f in A_forms} | {f.degree() for f in B_forms}
    if len(degs) != 1:
        raise DomainError("span comparison needs forms of one common degree")
    d = degs.pop()
    monos = monomials_of_degree(nv, d)
    pos = {m: i for i, m in enumerate(monos)}

    def coeff_matrix(forms):
        rows = []
        for f in forms:
            row = [field.zero] * len(monos)
            for e, c in f.terms.items():
                row[pos[e]] = c
            rows.append(row)
        return MatF(field, len(forms), len(monos), [x for r in rows for x in r])

    return rref_rowspace(coeff_matrix(A_forms)) == rref_rowspace(coeff_matrix(B_forms))


def lines_pairwise_intersections(field, lines):
    """All intersection points of distinct lines in the list."""
    pts = {}
    for i in range(len(lines)):
        ui, vi = lines[i].rows()
        for j in range(i + 1, len(lines)):
            uj, vj = lines[j].rows()
            stack = MatF(field, 4, 5, list(ui) + list(vi) + list(uj) + list(vj))
            if rank(stack) == 3:
                # the two row spaces share a 1-dim subspace; find it
                # solve a*ui + b*vi = c*uj + d*vj: kernel of the 5x4 transpose
                cols = []
                for r in range(5):
                    cols.append([ui[r], vi[r], -uj[r], -vj[r]])
                Amat = MatF(field, 5, 4, [x for row in cols for x in row])
                _, ker = rank_and_kernel(Amat)
                if len(ker) != 1:
                    raise RuntimeError("line pair with unexpected intersection")
                a, b = ker[0][0], ker[0][1]
                coords = tuple(a * x + b * y for x, y in zip(ui, vi))
                p = ProjPoint(field, coords)
                pts[p.key()] = p
    return sorted(pts.values(), key=lambda p: p.key())
