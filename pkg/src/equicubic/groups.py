"""Finite matrix subgroups of PGL_5 over a cyclotomic field.

A group is enumerated from its generator matrices by breadth-first closure.
The closure runs on the *linear* matrix group generated by the given
matrices (exact dedup, no scaling); projective elements are the canonical
forms (first nonzero entry scaled to 1) of the linear elements.  When the
linear closure meets no nontrivial scalar matrix, the stored linear elements
form an isomorphic lift and their traces give honest character values.

After enumeration every group carries a faithful permutation action on a
finite set of exact projective points, derived from the matrices themselves;
all subsequent group theory (multiplication, conjugacy, subgroups) runs on
element ids through that action.
"""

from __future__ import annotations

from math import lcm

from .exactnum import CycloField, CycNum, DomainError
from .linalg import MatF, is_invertible


class GroupTooLarge(RuntimeError):
    pass


class ActionNotFaithful(RuntimeError):
    pass


class GroupElement:
    """A canonical projective matrix with its id in an enumerated group."""

    __slots__ = ("matrix", "id", "group")

    def __init__(self, matrix, id=None, group=None):
        self.matrix = matrix
        self.id = id
        self.group = group

    def __eq__(self, other):
        return isinstance(other, GroupElement) and self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    def __repr__(self):
        return f"GroupElement(id={self.id})"


# ---------------------------------------------------------------------------
# canonicalization helpers
# ---------------------------------------------------------------------------

def canonical_projective(M: MatF) -> MatF:
    """Scale so the first nonzero entry in row-major order is 1."""
    for e in M.entries:
        if e:
            if e.is_one():
                return M
            return M.scale(e.inverse())
    raise DomainError("zero matrix has no projective class")


def canonical_point(field, coords):
    """Projective normal form of a point: first nonzero coordinate 1."""
    coords = [c if isinstance(c, CycNum) else field.from_fraction(c) for c in coords]
    for c in coords:
        if c:
            if c.is_one():
                return tuple(coords)
            inv = c.inverse()
            return tuple(inv * x for x in coords)
    raise DomainError("the zero vector is not a projective point")


def _point_key(pt):
    return tuple((c._num, c._den) for c in pt)


# ---------------------------------------------------------------------------
# monomial fast path
# ---------------------------------------------------------------------------

def _as_monomial(M: MatF, root_exp):
    """(sigma, exps) if M is monomial with root-of-unity entries, else None.

    Row i has its nonzero entry at column sigma[i] with value zeta_n^exps[i].
    """
    n = M.rows
    sigma = []
    exps = []
    for i in range(n):
        row = M.row(i)
        nz = [j for j, e in enumerate(row) if e]
        if len(nz) != 1:
            return None
        j = nz[0]
        k = root_exp.get(row[j])
        if k is None:
            return None
        sigma.append(j)
        exps.append(k)
    if len(set(sigma)) != n:
        return None
    return tuple(sigma), tuple(exps)


def _monomial_mul(a, b, n_root):
    """Product of monomial reps: (A B) x = A (B x)."""
    (sa, ea), (sb, eb) = a, b
    # row i of A*B: nonzero at column sb[sa[i]] with exponent ea[i] + eb[sa[i]]
    sigma = tuple(sb[si] for si in sa)
    exps = tuple((ea[i] + eb[sa[i]]) % n_root for i in range(len(sa)))
    return sigma, exps


def _monomial_matrix(field, rep):
    sigma, exps = rep
    n = len(sigma)
    zero = field.zero
    entries = [zero] * (n * n)
    for i in range(n):
        entries[i * n + sigma[i]] = field.root_of_unity(field.n, exps[i])
    return MatF(field, n, n, entries)


# ---------------------------------------------------------------------------
# the enumerated group
# ---------------------------------------------------------------------------

class FinGroup:
    def __init__(self, field, generator_matrices, elements, lifts, gen_ids,
                 perms, points, lift_faithful, scalar_order):
        self.field = field
        self.generator_matrices = list(generator_matrices)
        self.elements = elements          # canonical projective MatF, sorted
        self.lifts = lifts                # linear lift per element id
        self.order = len(elements)
        self.gen_ids = gen_ids
        self.perms = perms
        self.points = points
        self.lift_faithful = lift_faithful
        self.scalar_order = scalar_order
        self._key_to_id = {M.key(): i for i, M in enumerate(elements)}
        self._perm_to_id = {p: i for i, p in enumerate(perms)}
        ident = tuple(range(len(points)))
        self.identity_id = self._perm_to_id[ident]
        self.inverse_ids = [0] * self.order
        for i, p in enumerate(perms):
            inv = [0] * len(p)
            for a, b in enumerate(p):
                inv[b] = a
            self.inverse_ids[i] = self._perm_to_id[tuple(inv)]
        self._orders = None
        self._classes = None
        self._pp_ids = None

    # -- id-level ops -------------------------------------------------------

    def mul(self, a: int, b: int) -> int:
        pa = self.perms[a]
        return self._perm_to_id[tuple(map(pa.__getitem__, self.perms[b]))]

    def inv(self, a: int) -> int:
        return self.inverse_ids[a]

    def conj(self, a: int, g: int) -> int:
        """g^-1 a g."""
        return self.mul(self.mul(self.inverse_ids[g], a), g)

    def element_order(self, a: int) -> int:
        p = self.perms[a]
        seen = [False] * len(p)
        out = 1
        for i in range(len(p)):
            if not seen[i]:
                ln = 0
                j = i
                while not seen[j]:
                    seen[j] = True
                    j = p[j]
                    ln += 1
                out = lcm(out, ln)
        return out

    def element_orders(self):
        if self._orders is None:
            self._orders = [self.element_order(i) for i in range(self.order)]
        return self._orders

    def exponent(self):
        return lcm(*set(self.element_orders())) if self.order > 1 else 1

    def power(self, a: int, k: int) -> int:
        k %= self.element_order(a)
        result = self.identity_id
        base = a
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def element(self, i: int) -> GroupElement:
        return GroupElement(self.elements[i], i, self)

    def matrix_to_id(self, M: MatF):
        return self._key_to_id.get(canonical_projective(M).key())

    def trace_of_lift(self, i: int) -> CycNum:
        M = self.lifts[i]
        acc = self.field.zero
        for k in range(M.rows):
            acc = acc + M[k, k]
        return acc

    # -- conjugacy classes ---------------------------------------------------

    def conjugacy_classes(self):
        if self._classes is None:
            self._classes = ElementClassData(self)
        return self._classes

    def prime_power_ids(self):
        if self._pp_ids is None:
            out = []
            for i, o in enumerate(self.element_orders()):
                if o > 1 and _is_prime_power(o):
                    out.append(i)
            self._pp_ids = out
        return self._pp_ids

    def __repr__(self):
        return f"FinGroup(order={self.order}, field=Q(zeta_{self.field.n}))"


def _is_prime_power(n):
    if n < 2:
        return False
    p = 2
    while p * p <= n:
        if n % p == 0:
            while n % p == 0:
                n //= p
            return n == 1
        p += 1
    return True  # n is prime


class ElementClassData:
    """Conjugacy classes of an enumerated group with power maps."""

    def __init__(self, G: FinGroup):
        self.group = G
        class_of = [-1] * G.order
        reps = []
        sizes = []
        gen_invs = [(g, G.inverse_ids[g]) for g in G.gen_ids]
        for i in range(G.order):
            if class_of[i] >= 0:
                continue
            ci = len(reps)
            orbit = [i]
            class_of[i] = ci
            pos = 0
            while pos < len(orbit):
                x = orbit[pos]
                pos += 1
                for g, gi in gen_invs:
                    y = G.mul(G.mul(gi, x), g)
                    if class_of[y] < 0:
                        class_of[y] = ci
                        orbit.append(y)
            reps.append(i)
            sizes.append(len(orbit))
        # identity class is first because element ids start at arbitrary sort
        # order; normalize so that class 0 is the identity's class
        id_ci = class_of[G.identity_id]
        if id_ci != 0:
            perm = list(range(len(reps)))
            perm[0], perm[id_ci] = perm[id_ci], perm[0]
            reps[0], reps[id_ci] = reps[id_ci], reps[0]
            sizes[0], sizes[id_ci] = sizes[id_ci], sizes[0]
            remap = {0: id_ci, id_ci: 0}
            class_of = [remap.get(c, c) for c in class_of]
        self.representatives = reps
        self.sizes = sizes
        self.class_of = class_of
        self.count = len(reps)
        self._power_cache = {}

    def power_class(self, ci: int, k: int) -> int:
        key = (ci, k)
        v = self._power_cache.get(key)
        if v is None:
            G = self.group
            v = self.class_of[G.power(self.representatives[ci], k)]
            self._power_cache[key] = v
        return v

    def inverse_class(self, ci: int) -> int:
        G = self.group
        return self.class_of[G.inverse_ids[self.representatives[ci]]]


# ---------------------------------------------------------------------------
# closure
# ---------------------------------------------------------------------------

def _linear_closure_monomial(field, gens, cap):
    reps = [_as_monomial(M, _root_exp_table(field)) for M in gens]
    n = field.n
    dim = gens[0].rows
    ident = (tuple(range(dim)), (0,) * dim)
    index = {ident: 0}
    order_list = [ident]
    tree = [(-1, -1)]
    frontier = [0]
    while frontier:
        nxt = []
        for idx in frontier:
            cur = order_list[idx]
            for gi, g in enumerate(reps):
                prod = _monomial_mul(cur, g, n)
                if prod not in index:
                    index[prod] = len(order_list)
                    order_list.append(prod)
                    tree.append((idx, gi))
                    nxt.append(len(order_list) - 1)
                    if len(order_list) > cap:
                        raise GroupTooLarge(f"linear closure exceeded cap {cap}")
        frontier = nxt
    mats = [_monomial_matrix(field, rep) for rep in order_list]
    return mats, tree


_ROOT_EXP_CACHE = {}


def _root_exp_table(field):
    tab = _ROOT_EXP_CACHE.get(field.n)
    if tab is None:
        tab = {}
        for k in range(field.n):
            tab[field.root_of_unity(field.n, k)] = k
        _ROOT_EXP_CACHE[field.n] = tab
    return tab


def _linear_closure_generic(field, gens, cap):
    ident = MatF.identity(field, gens[0].rows)
    index = {ident.key(): 0}
    order_list = [ident]
    tree = [(-1, -1)]
    frontier = [0]
    while frontier:
        nxt = []
        for idx in frontier:
            cur = order_list[idx]
            for gi, g in enumerate(gens):
                prod = cur * g
                k = prod.key()
                if k not in index:
                    index[k] = len(order_list)
                    order_list.append(prod)
                    tree.append((idx, gi))
                    nxt.append(len(order_list) - 1)
                    if len(order_list) > cap:
                        raise GroupTooLarge(f"linear closure exceeded cap {cap}")
        frontier = nxt
    return order_list, tree


def _default_point_pool(field, dim):
    pool = []
    for i in range(dim):
        e = [field.zero] * dim
        e[i] = field.one
        pool.append(tuple(e))
    for i in range(dim):
        for j in range(i + 1, dim):
            e = [field.zero] * dim
            e[i] = field.one
            e[j] = field.one
            pool.append(tuple(e))
    return pool


def _close_point_orbit(field, gens, start_points):
    pts = []
    index = {}
    for p in start_points:
        cp = canonical_point(field, p)
        k = _point_key(cp)
        if k not in index:
            index[k] = len(pts)
            pts.append(cp)
    frontier = list(range(len(pts)))
    while frontier:
        nxt = []
        for i in frontier:
            for g in gens:
                img = canonical_point(field, g.apply(pts[i]))
                k = _point_key(img)
                if k not in index:
                    index[k] = len(pts)
                    pts.append(img)
                    nxt.append(len(pts) - 1)
        frontier = nxt
    return pts, index


def _gen_perms(field, gens, pts, index):
    perms = []
    for g in gens:
        img = []
        for p in pts:
            q = canonical_point(field, g.apply(p))
            img.append(index[_point_key(q)])
        perms.append(tuple(img))
    return perms


def generate_closure(generators, cap=20000, seeds=None) -> FinGroup:
    """Enumerate the projective group generated by invertible matrices.

    The breadth-first closure deduplicates exact matrices of the linear
    group; `cap` bounds the projective order (the linear closure may exceed
    it by the order of its scalar subgroup, at most n).
    """
    if not generators:
        raise DomainError("need at least one generator")
    field = generators[0].field
    dim = generators[0].rows
    for g in generators:
        if g.field is not field or g.rows != dim or g.cols != dim:
            raise DomainError("generators must be square matrices over one field")
        if not is_invertible(g):
            raise DomainError("generator is not invertible")
    root_tab = _root_exp_table(field)
    monomial = all(_as_monomial(g, root_tab) is not None for g in generators)
    lin_cap = cap * field.n if monomial else cap * 64
    if monomial:
        lin, tree = _linear_closure_monomial(field, generators, lin_cap)
    else:
        lin, tree = _linear_closure_generic(field, generators, lin_cap)

    # projective classes
    canon_key_to_first = {}
    canon_of = []
    canon_mats = {}
    for i, M in enumerate(lin):
        C = canonical_projective(M)
        k = C.key()
        if k not in canon_key_to_first:
            canon_key_to_first[k] = i
            canon_mats[k] = C
        canon_of.append(k)
    proj_keys = list(canon_mats.keys())
    if len(proj_keys) > cap:
        raise GroupTooLarge(f"group order {len(proj_keys)} exceeds cap {cap}")
    ident_key = canonical_projective(MatF.identity(field, dim)).key()
    scalar_order = sum(1 for k in canon_of if k == ident_key)
    lift_faithful = scalar_order == 1

    # permutation action on exact projective points, extended to faithfulness
    start = list(seeds) if seeds else []
    pool = _default_point_pool(field, dim)
    if not start:
        start = pool[:dim]
    pts, index = _close_point_orbit(field, generators, start)
    while True:
        gperms = _gen_perms(field, generators, pts, index)
        deg = len(pts)
        ident_perm = tuple(range(deg))
        # propagate along the linear BFS tree
        lin_perms = [None] * len(lin)
        lin_perms[0] = ident_perm
        for i in range(1, len(lin)):
            parent, gi = tree[i]
            pp = lin_perms[parent]
            gp = gperms[gi]
            # perm of parent*g: x -> parent(g(x))
            lin_perms[i] = tuple(map(pp.__getitem__, gp))
        # find a kernel element: non-identity projective class with identity perm
        kernel_key = None
        seen = set()
        for i, k in enumerate(canon_of):
            if k in seen:
                continue
            seen.add(k)
            if k != ident_key and lin_perms[i] == ident_perm:
                kernel_key = k
                break
        if kernel_key is None:
            proj_perm = {}
            for i, k in enumerate(canon_of):
                if k not in proj_perm:
                    proj_perm[k] = lin_perms[i]
            break
        K = canon_mats[kernel_key]
        moved = None
        for p in pool:
            cp = canonical_point(field, p)
            if canonical_point(field, K.apply(cp)) != cp:
                moved = cp
                break
        if moved is None:
            raise ActionNotFaithful("no pool point separates a kernel element")
        pts, index = _close_point_orbit(field, generators, pts + [moved])

    # sort projective elements canonically
    order_keys = sorted(proj_keys, key=lambda k: canon_mats[k].sort_key())
    elements = [canon_mats[k] for k in order_keys]
    lifts = [lin[canon_key_to_first[k]] for k in order_keys]
    perms = [proj_perm[k] for k in order_keys]
    key_to_id = {k: i for i, k in enumerate(order_keys)}
    gen_ids = [key_to_id[canonical_projective(g).key()] for g in generators]
    return FinGroup(field, generators, elements, lifts, gen_ids, perms,
                    pts, lift_faithful, scalar_order)


def to_permutation_action(G: FinGroup, seeds=None):
    """A faithful permutation action of G grown from the given seed points.

    Returns (points, generator images).  Seeds default to the coordinate
    points; the domain is extended automatically until the kernel is trivial.
    """
    field = G.field
    dim = G.generator_matrices[0].rows if G.generator_matrices else 5
    if G.order == 1:
        return [], [tuple() for _ in G.generator_matrices]
    start = [canonical_point(field, s) for s in seeds] if seeds else None
    pool = _default_point_pool(field, dim)
    pts, index = _close_point_orbit(field, G.generator_matrices, start or pool[:dim])
    while True:
        gperms = _gen_perms(field, G.generator_matrices, pts, index)
        # kernel test via full element perms (propagate through id-level BFS)
        deg = len(pts)
        ident_perm = tuple(range(deg))
        elem_perm = {G.identity_id: ident_perm}
        frontier = [G.identity_id]
        while frontier:
            nxt = []
            for a in frontier:
                pa = elem_perm[a]
                for gi, g in enumerate(G.gen_ids):
                    b = G.mul(a, g)
                    if b not in elem_perm:
                        elem_perm[b] = tuple(map(pa.__getitem__, gperms[gi]))
                        nxt.append(b)
            frontier = nxt
        kernel = [a for a, p in elem_perm.items() if p == ident_perm and a != G.identity_id]
        if not kernel:
            return pts, gperms
        K = G.elements[kernel[0]]
        moved = None
        for p in pool:
            cp = canonical_point(field, p)
            if canonical_point(field, K.apply(cp)) != cp:
                moved = cp
                break
        if moved is None:
            raise ActionNotFaithful("no pool point separates a kernel element")
        pts, index = _close_point_orbit(field, G.generator_matrices, pts + [moved])


# ---------------------------------------------------------------------------
# subgroups as id sets
# ---------------------------------------------------------------------------

def closure_ids(G: FinGroup, gen_ids, seed_ids=None):
    """Elements of the subgroup generated by gen_ids (plus optional seeds)."""
    base = {G.identity_id}
    if seed_ids:
        base.update(seed_ids)
    gens = [g for g in gen_ids if g != G.identity_id]
    if not gens:
        return base
    frontier = list(base)
    elems = set(base)
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = G.mul(x, g)
                if y not in elems:
                    elems.add(y)
                    nxt.append(y)
        frontier = nxt
    return elems


def small_generating_set(G: FinGroup, ids):
    """A short generating list for the subgroup with the given element set."""
    gens = []
    cur = {G.identity_id}
    for x in sorted(ids):
        if x not in cur:
            gens.append(x)
            cur = closure_ids(G, gens)
            if len(cur) == len(ids):
                break
    return gens


def subgroup_order_histogram(G: FinGroup, ids):
    hist = {}
    orders = G.element_orders()
    for i in ids:
        o = orders[i]
        hist[o] = hist.get(o, 0) + 1
    return tuple(sorted(hist.items()))


def subgroups_conjugate_in(G: FinGroup, A, B):
    """A conjugator g with A^g = B, or None.

    Search over the ambient group, pruned by order and order histogram.
    """
    A, B = set(A), set(B)
    if len(A) != len(B):
        return None
    if A == B:
        return G.identity_id
    if subgroup_order_histogram(G, A) != subgroup_order_histogram(G, B):
        return None
    gens = small_generating_set(G, A)
    for g in range(G.order):
        gi = G.inverse_ids[g]
        for a in gens:
            if G.mul(G.mul(gi, a), g) not in B:
                break
        else:
            return g
    return None


def normalizer(G: FinGroup, ids):
    """Element ids g with H^g = H."""
    H = set(ids)
    gens = small_generating_set(G, H)
    out = set()
    for g in range(G.order):
        gi = G.inverse_ids[g]
        for a in gens:
            if G.mul(G.mul(gi, a), g) not in H:
                break
        else:
            out.add(g)
    return out


def subgroup_conjugates(G: FinGroup, ids):
    """The full orbit of the subgroup under conjugation, as frozensets."""
    start = frozenset(ids)
    seen = {start}
    frontier = [start]
    gen_pairs = [(g, G.inverse_ids[g]) for g in G.gen_ids]
    while frontier:
        nxt = []
        for S in frontier:
            for g, gi in gen_pairs:
                img = frozenset(G.mul(G.mul(gi, x), g) for x in S)
                if img not in seen:
                    seen.add(img)
                    nxt.append(img)
        frontier = nxt
    return seen


class SubFinGroup(FinGroup):
    """A subgroup of an enumerated group, re-indexed as a group of its own.

    Shares the ambient permutation representation (restricted, still
    faithful); keeps the map back to ambient element ids.
    """

    def __init__(self, ambient: FinGroup, ids, gen_ids=None):
        ids = sorted(ids)
        if gen_ids is None:
            gen_ids = small_generating_set(ambient, ids)
        elements = [ambient.elements[i] for i in ids]
        lifts = [ambient.lifts[i] for i in ids]
        perms = [ambient.perms[i] for i in ids]
        gens = [ambient.elements[g] for g in gen_ids] or [ambient.elements[ambient.identity_id]]
        pos = {amb: k for k, amb in enumerate(ids)}
        local_gen_ids = [pos[g] for g in gen_ids] or [pos[ambient.identity_id]]
        FinGroup.__init__(self, ambient.field, gens, elements, lifts,
                          local_gen_ids, perms, ambient.points,
                          ambient.lift_faithful, ambient.scalar_order)
        self.ambient = ambient
        self.ambient_ids = list(ids)

    def to_ambient(self, i):
        return self.ambient_ids[i]
