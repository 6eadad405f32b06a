"""Exact character tables via the Dixon-Schneider method.

The class-algebra structure matrices are simultaneously diagonalized over a
prime field F_p with p = 1 (mod e), e the group exponent; the resulting
modular characters are lifted to exact cyclotomic values in Q(zeta_e) by the
finite Fourier inversion over power-map classes.  Row orthogonality and the
degree sum are verified exactly before a table is returned.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt

import numpy as np

from .exactnum import CycNum, DomainError
from .groups import FinGroup, SubFinGroup


class CharactersError(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# F_p helpers (plain integer arithmetic; sizes here are tiny)
# ---------------------------------------------------------------------------

def _is_prime(n):
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _dixon_prime(e, lower):
    p = lower + (e - lower % e) + 1
    while True:
        if _is_prime(p):
            return p
        p += e


def _primitive_root_of_unity(p, e):
    # factor p-1
    m = p - 1
    fac = []
    d = 2
    while d * d <= m:
        if m % d == 0:
            fac.append(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        fac.append(m)
    g = 2
    while True:
        if all(pow(g, (p - 1) // q, p) != 1 for q in fac):
            break
        g += 1
    return pow(g, (p - 1) // e, p)


def _mat_mul_mod(A, B, p):
    n, k, m = len(A), len(B), len(B[0])
    out = [[0] * m for _ in range(n)]
    for i in range(n):
        Ai = A[i]
        oi = out[i]
        for t in range(k):
            a = Ai[t]
            if a:
                Bt = B[t]
                for j in range(m):
                    oi[j] = (oi[j] + a * Bt[j]) % p
    return out


def _solve_mod(W, Y, p):
    """Solve W X = Y for X (W has full column rank); shapes k x d, k x m."""
    k = len(W)
    d = len(W[0])
    m = len(Y[0])
    aug = [list(W[i]) + list(Y[i]) for i in range(k)]
    r = 0
    piv_rows = []
    for c in range(d):
        pr = None
        for i in range(r, k):
            if aug[i][c] % p:
                pr = i
                break
        if pr is None:
            raise CharactersError("restriction solve hit a rank-deficient basis")
        aug[r], aug[pr] = aug[pr], aug[r]
        inv = pow(aug[r][c], p - 2, p)
        aug[r] = [(x * inv) % p for x in aug[r]]
        for i in range(k):
            if i != r and aug[i][c] % p:
                f = aug[i][c]
                aug[i] = [(a - f * b) % p for a, b in zip(aug[i], aug[r])]
        piv_rows.append(r)
        r += 1
    X = [[0] * m for _ in range(d)]
    for rr in range(d):
        X[rr] = [aug[rr][d + j] % p for j in range(m)]
    return X


def _nullspace_mod(B, p):
    """Basis (list of vectors) of the kernel of the square matrix B mod p."""
    n = len(B)
    A = [list(row) for row in B]
    piv_col_of_row = []
    r = 0
    for c in range(n):
        pr = None
        for i in range(r, n):
            if A[i][c] % p:
                pr = i
                break
        if pr is None:
            continue
        A[r], A[pr] = A[pr], A[r]
        inv = pow(A[r][c], p - 2, p)
        A[r] = [(x * inv) % p for x in A[r]]
        for i in range(n):
            if i != r and A[i][c] % p:
                f = A[i][c]
                A[i] = [(a - f * b) % p for a, b in zip(A[i], A[r])]
        piv_col_of_row.append(c)
        r += 1
    piv = set(piv_col_of_row)
    basis = []
    for c in range(n):
        if c in piv:
            continue
        v = [0] * n
        v[c] = 1
        for i, pc in enumerate(piv_col_of_row):
            v[pc] = (-A[i][c]) % p
        basis.append(v)
    return basis


def _charpoly_mod(B, p):
    """Characteristic polynomial of B mod p via Hessenberg reduction."""
    n = len(B)
    H = [[x % p for x in row] for row in B]
    for c in range(n - 2):
        pr = None
        for i in range(c + 1, n):
            if H[i][c] % p:
                pr = i
                break
        if pr is None:
            continue
        if pr != c + 1:
            H[c + 1], H[pr] = H[pr], H[c + 1]
            for i in range(n):
                H[i][c + 1], H[i][pr] = H[i][pr], H[i][c + 1]
        inv = pow(H[c + 1][c], p - 2, p)
        for i in range(c + 2, n):
            f = (H[i][c] * inv) % p
            if f:
                for j in range(c, n):
                    H[i][j] = (H[i][j] - f * H[c + 1][j]) % p
                for j in range(n):
                    H[j][c + 1] = (H[j][c + 1] + f * H[j][i]) % p
    # charpoly recurrence on the Hessenberg form
    polys = [[1]]
    for m in range(1, n + 1):
        # c_m = (x - H[m-1][m-1]) c_{m-1} - sum_i H[i-1][m-1] (prod subdiag) c_{i-1}
        prev = polys[m - 1]
        cur = [0] * (len(prev) + 1)
        for i, a in enumerate(prev):
            cur[i + 1] = (cur[i + 1] + a) % p
            cur[i] = (cur[i] - H[m - 1][m - 1] * a) % p
        beta = 1
        for i in range(m - 1, 0, -1):
            beta = (beta * H[i][i - 1]) % p
            coef = (H[i - 1][m - 1] * beta) % p
            if coef:
                pi = polys[i - 1]
                for j, a in enumerate(pi):
                    cur[j] = (cur[j] - coef * a) % p
        polys.append(cur)
    return polys[n]


def _poly_mod(a, b, p):
    """a mod b over F_p (b monic-ized internally)."""
    b = list(b)
    while b and b[-1] % p == 0:
        b.pop()
    if not b:
        raise CharactersError("polynomial modulus is zero")
    inv_lead = pow(b[-1], p - 2, p)
    b = [(x * inv_lead) % p for x in b]
    r = [x % p for x in a]
    db = len(b) - 1
    while len(r) - 1 >= db and any(r):
        while r and r[-1] % p == 0:
            r.pop()
        if len(r) - 1 < db:
            break
        c = r[-1]
        shift = len(r) - 1 - db
        for j in range(db + 1):
            r[shift + j] = (r[shift + j] - c * b[j]) % p
    while r and r[-1] % p == 0:
        r.pop()
    return r


def _poly_gcd(a, b, p):
    a = [x % p for x in a]
    b = [x % p for x in b]
    while any(b):
        a, b = b, _poly_mod(a, b, p)
        while b and b[-1] % p == 0:
            b.pop()
    while a and a[-1] % p == 0:
        a.pop()
    if a:
        inv = pow(a[-1], p - 2, p)
        a = [(x * inv) % p for x in a]
    return a


def _poly_pow_mod(base, e, mod, p):
    result = [1]
    base = _poly_mod(base, mod, p)
    while e:
        if e & 1:
            result = _poly_mod(_poly_mul_mod(result, base, p), mod, p)
        base = _poly_mod(_poly_mul_mod(base, base, p), mod, p)
        e >>= 1
    return result


def _poly_mul_mod(a, b, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return out


def _roots_mod(f, p, rng_state=12345):
    """All roots in F_p of f (squarefree part of linear factors only)."""
    f = [x % p for x in f]
    while f and f[-1] % p == 0:
        f.pop()
    if len(f) <= 1:
        return []
    # keep only linear factors: gcd(x^p - x, f)
    xp = _poly_pow_mod([0, 1], p, f, p)
    xp_minus_x = list(xp) + [0] * max(0, 2 - len(xp))
    if len(xp_minus_x) < 2:
        xp_minus_x += [0] * (2 - len(xp_minus_x))
    xp_minus_x[1] = (xp_minus_x[1] - 1) % p
    g = _poly_gcd(f, xp_minus_x, p)
    roots = []
    state = rng_state

    def split(h):
        nonlocal state
        h = list(h)
        while h and h[-1] % p == 0:
            h.pop()
        d = len(h) - 1
        if d <= 0:
            return
        if d == 1:
            roots.append((-h[0] * pow(h[1], p - 2, p)) % p)
            return
        while True:
            state = (state * 1103515245 + 12345) % (1 << 31)
            a = state % p
            # gcd((x+a)^((p-1)/2) - 1, h)
            t = _poly_pow_mod([a, 1], (p - 1) // 2, h, p)
            t = list(t)
            if not t:
                t = [0]
            t[0] = (t[0] - 1) % p
            w = _poly_gcd(h, t, p)
            if 0 < len(w) - 1 < d:
                split(w)
                # h / w
                q = _poly_divmod_modp(h, w, p)
                split(q)
                return

    split(g)
    return sorted(set(roots))


def _poly_divmod_modp(a, b, p):
    a = [x % p for x in a]
    b = [x % p for x in b]
    while b and b[-1] % p == 0:
        b.pop()
    inv = pow(b[-1], p - 2, p)
    q = [0] * max(1, len(a) - len(b) + 1)
    r = list(a)
    while len(r) >= len(b) and any(r):
        while r and r[-1] % p == 0:
            r.pop()
        if len(r) < len(b):
            break
        c = (r[-1] * inv) % p
        shift = len(r) - len(b)
        q[shift] = c
        for j in range(len(b)):
            r[shift + j] = (r[shift + j] - c * b[j]) % p
    return q


# ---------------------------------------------------------------------------
# class functions and the table
# ---------------------------------------------------------------------------

class ClassFunction:
    __slots__ = ("group", "values")

    def __init__(self, group, values):
        cc = group.conjugacy_classes()
        values = tuple(values)
        if len(values) != cc.count:
            raise DomainError("one value per conjugacy class required")
        self.group = group
        self.values = values

    def __eq__(self, other):
        return (
            isinstance(other, ClassFunction)
            and self.group is other.group
            and self.values == other.values
        )

    def __hash__(self):
        return hash(self.values)

    def __add__(self, other):
        return ClassFunction(self.group, [a + b for a, b in zip(self.values, other.values)])

    def __mul__(self, other):
        if isinstance(other, ClassFunction):
            return ClassFunction(self.group, [a * b for a, b in zip(self.values, other.values)])
        return ClassFunction(self.group, [v * other for v in self.values])

    def degree(self):
        return self.values[0]


def inner_product(alpha: ClassFunction, beta: ClassFunction) -> CycNum:
    """<a, b> = |G|^-1 sum |C| a(g) b(g^-1); exact."""
    if alpha.group is not beta.group:
        raise DomainError("class functions on different groups")
    G = alpha.group
    cc = G.conjugacy_classes()
    field = G.field
    acc = field.zero
    for j in range(cc.count):
        jinv = cc.inverse_class(j)
        acc = acc + alpha.values[j] * beta.values[jinv] * cc.sizes[j]
    return acc * field.from_fraction(Fraction(1, G.order))


class CharacterTable:
    def __init__(self, group, rows, degrees, prime, exponent):
        self.group = group
        self.class_data = group.conjugacy_classes()
        self.rows = rows          # tuple of ClassFunction
        self.degrees = degrees    # tuple of ints, aligned with rows
        self.prime = prime
        self.exponent = exponent

    @property
    def count(self):
        return len(self.rows)

    def degree_multiset(self):
        return tuple(sorted(self.degrees))

    def row_kernel_ids(self, s):
        """Element ids in the kernel of row s."""
        G = self.group
        cc = self.class_data
        deg = G.field.from_fraction(self.degrees[s])
        vals = self.rows[s].values
        kernel_classes = {j for j in range(cc.count) if vals[j] == deg}
        return [i for i in range(G.order) if cc.class_of[i] in kernel_classes]

    def is_row_faithful(self, s):
        return len(self.row_kernel_ids(s)) == 1

    def faithful_irrep_dims(self):
        return tuple(sorted(self.degrees[s] for s in range(self.count)
                            if self.is_row_faithful(s)))

    def json_payload(self):
        cc = self.class_data
        return {
            "order": self.group.order,
            "class_sizes": list(cc.sizes),
            "degrees": list(self.degrees),
            "values": [[str(v) for v in row.values] for row in self.rows],
        }


def character_table(G: FinGroup) -> CharacterTable:
    cc = G.conjugacy_classes()
    k = cc.count
    field = G.field
    e = G.exponent()
    if field.n % e:
        raise CharactersError(
            f"field Q(zeta_{field.n}) cannot hold character values: exponent {e}")
    if k == 1:
        row = ClassFunction(G, [field.one])
        return CharacterTable(G, (row,), (1,), 2, 1)
    maxc = max(cc.sizes)
    lower = max(2 * maxc * isqrt(G.order) + 1, G.order + 1)
    p = _dixon_prime(e, lower)

    members = [[] for _ in range(k)]
    for i in range(G.order):
        members[cc.class_of[i]].append(i)
    reps = cc.representatives

    # structure matrices: M_i[j][t] = #{x in C_i : x^-1 z_t in C_j}
    mats = []
    for i in range(k):
        Mi = [[0] * k for _ in range(k)]
        for x in members[i]:
            xi = G.inverse_ids[x]
            for t in range(k):
                j = cc.class_of[G.mul(xi, reps[t])]
                Mi[j][t] += 1
        mats.append(Mi)

    # simultaneous diagonalization over F_p
    subspaces = [[[1 if i == j else 0 for j in range(k)] for i in range(k)]]
    # a subspace is a list of basis vectors (rows)
    for i in range(1, k):
        if all(len(W) == 1 for W in subspaces):
            break
        A = mats[i]
        new_spaces = []
        for W in subspaces:
            d = len(W)
            if d == 1:
                new_spaces.append(W)
                continue
            # columns of Wt are basis vectors
            Wt = [[W[s][r] for s in range(d)] for r in range(k)]
            AW = _mat_mul_mod(A, Wt, p)
            B = _solve_mod(Wt, AW, p)  # d x d with A W = W B
            lams = _roots_mod(_charpoly_mod(B, p), p)
            for lam in lams:
                Bl = [[(B[r][s] - (lam if r == s else 0)) % p for s in range(d)] for r in range(d)]
                eig = []
                for v in _nullspace_mod(Bl, p):
                    vec = [0] * k
                    for s in range(d):
                        if v[s]:
                            for r in range(k):
                                vec[r] = (vec[r] + v[s] * W[s][r]) % p
                    eig.append(vec)
                if eig:
                    new_spaces.append(eig)
        total = sum(len(W) for W in new_spaces)
        if total != k:
            raise CharactersError("class algebra failed to split over F_p")
        subspaces = new_spaces
    if not all(len(W) == 1 for W in subspaces):
        raise CharactersError("class matrices did not separate all characters")

    gsize_mod = G.order % p
    inv_sizes = [pow(c % p, p - 2, p) for c in cc.sizes]
    invclass = [cc.inverse_class(j) for j in range(k)]
    chi_p = []
    degs = []
    for (v,) in subspaces:
        v0 = v[0] % p
        if v0 == 0:
            raise CharactersError("eigenvector vanishes on the identity class")
        inv0 = pow(v0, p - 2, p)
        w = [(x * inv0) % p for x in v]
        S = 0
        for j in range(k):
            S = (S + w[j] * w[invclass[j]] * inv_sizes[j]) % p
        d2 = (gsize_mod * pow(S, p - 2, p)) % p
        d = isqrt(d2)
        if d * d != d2 or d == 0 or d * d > G.order:
            raise CharactersError("modular degree is not a small integer square")
        row = [(d * w[j] * inv_sizes[j]) % p for j in range(k)]
        chi_p.append(row)
        degs.append(d)

    # lift with the Fourier inversion over power-map classes
    omega = _primitive_root_of_unity(p, e)
    inv_e = pow(e % p, p - 2, p)
    # dft[l][t] = omega^(-l t)
    om_inv = pow(omega, p - 2, p)
    pow_om = [1] * e
    for a in range(1, e):
        pow_om[a] = (pow_om[a - 1] * om_inv) % p
    dft = np.zeros((e, e), dtype=np.int64)
    for l in range(e):
        for t in range(e):
            dft[l][t] = pow_om[(l * t) % e]
    chi_np = np.array(chi_p, dtype=np.int64)

    # zeta_e^t as raw reduced integer vectors
    zeta_vecs = []
    for t in range(e):
        zv = field.root_of_unity(e, t)
        if zv._den != 1:
            raise CharactersError("root of unity with a denominator")
        zeta_vecs.append(zv._num)
    phi = field.degree

    rows_vals = [[None] * k for _ in range(len(chi_p))]
    for j in range(k):
        cls_pow = []
        cur = G.identity_id
        rep = reps[j]
        for _ in range(e):
            cls_pow.append(cc.class_of[cur])
            cur = G.mul(cur, rep)
        U = chi_np[:, cls_pow]                     # k_rows x e
        Mjs = (U @ dft) % p
        Mjs = (Mjs * inv_e) % p
        om_pows = [1] * e
        for a in range(1, e):
            om_pows[a] = (om_pows[a - 1] * omega) % p
        for s in range(len(chi_p)):
            ms = Mjs[s]
            acc = [0] * phi
            check = 0
            for t in range(e):
                m = int(ms[t])
                if m:
                    if m > G.order:
                        raise CharactersError("Fourier multiplicity out of range")
                    zv = zeta_vecs[t]
                    for idx in range(phi):
                        if zv[idx]:
                            acc[idx] += m * zv[idx]
                    check = (check + m * om_pows[t]) % p
            if check != chi_p[s][j] % p:
                raise CharactersError("lift does not reduce back to the modular value")
            rows_vals[s][j] = CycNum(field, acc, 1)

    order_key = sorted(range(len(chi_p)),
                       key=lambda s: (degs[s], [v.sort_key() for v in rows_vals[s]]))
    rows = tuple(ClassFunction(G, rows_vals[s]) for s in order_key)
    degrees = tuple(degs[s] for s in order_key)

    if sum(d * d for d in degrees) != G.order:
        raise CharactersError("degree squares do not sum to the group order")
    one = field.one
    for s in range(len(rows)):
        for r in range(s, len(rows)):
            ip = inner_product(rows[s], rows[r])
            want = one if s == r else field.zero
            if ip != want:
                raise CharactersError("orthogonality failure in the lifted table")
    return CharacterTable(G, rows, degrees, p, e)


# ---------------------------------------------------------------------------
# derived class functions
# ---------------------------------------------------------------------------

def natural_character(G: FinGroup) -> ClassFunction:
    """Trace of the stored linear lift on each conjugacy class."""
    if not G.lift_faithful:
        raise CharactersError(
            "matrix lift meets nontrivial scalars; traces are not well-defined")
    cc = G.conjugacy_classes()
    return ClassFunction(G, [G.trace_of_lift(r) for r in cc.representatives])


def constituents(table: CharacterTable, alpha: ClassFunction):
    """Multiset of (degree, multiplicity) with multiplicity > 0."""
    out = []
    total = None
    for s in range(table.count):
        m = inner_product(alpha, table.rows[s])
        if not m.is_rational() or m.as_fraction().denominator != 1:
            raise CharactersError("not a character: non-integer multiplicity")
        mi = int(m.as_fraction())
        if mi < 0:
            raise CharactersError("not a character: negative multiplicity")
        if mi:
            out.append((table.degrees[s], mi))
            total = (total or 0) + mi * table.degrees[s]
    deg = alpha.values[0]
    if not deg.is_rational() or int(deg.as_fraction()) != (total or 0):
        raise CharactersError("constituents do not add up to the degree")
    return tuple(sorted(out))


def constituent_dims_with_multiplicity(table, alpha):
    dims = []
    for d, m in constituents(table, alpha):
        dims.extend([d] * m)
    return sorted(dims)


def kernel_and_faithful(table: CharacterTable, s: int):
    ids = table.row_kernel_ids(s)
    return ids, len(ids) == 1


def restrict_class_function(alpha: ClassFunction, H: SubFinGroup) -> ClassFunction:
    """Restriction along the class fusion of a subgroup."""
    G = alpha.group
    if H.ambient is not G:
        raise DomainError("subgroup was built from a different ambient group")
    ccG = G.conjugacy_classes()
    ccH = H.conjugacy_classes()
    vals = []
    for r in ccH.representatives:
        amb = H.to_ambient(r)
        vals.append(alpha.values[ccG.class_of[amb]])
    return ClassFunction(H, vals)


def restrict_and_test_irreducible(table: CharacterTable, s: int, H: SubFinGroup):
    res = restrict_class_function(table.rows[s], H)
    ip = inner_product(res, res)
    return res, ip.is_one()


def sym_power_character(alpha: ClassFunction, k: int) -> ClassFunction:
    """Character of Sym^k, k in {2, 3}, via power-map classes."""
    G = alpha.group
    cc = G.conjugacy_classes()
    field = G.field
    vals = []
    for j in range(cc.count):
        x1 = alpha.values[j]
        x2 = alpha.values[cc.power_class(j, 2)]
        if k == 2:
            v = (x1 * x1 + x2) * field.from_fraction(Fraction(1, 2))
        elif k == 3:
            x3 = alpha.values[cc.power_class(j, 3)]
            v = (x1 * x1 * x1 + x1 * x2 * 3 + x3 * 2) * field.from_fraction(Fraction(1, 6))
        else:
            raise DomainError("only Sym^2 and Sym^3 are supported")
        vals.append(v)
    return ClassFunction(G, vals)


def trivial_multiplicity(alpha: ClassFunction) -> int:
    G = alpha.group
    triv = ClassFunction(G, [G.field.one] * G.conjugacy_classes().count)
    m = inner_product(alpha, triv)
    if not m.is_rational() or m.as_fraction().denominator != 1:
        raise CharactersError("trivial multiplicity is not an integer")
    return int(m.as_fraction())
