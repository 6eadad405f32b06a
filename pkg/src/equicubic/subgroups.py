"""Conjugacy classes of subgroups, isomorphism fingerprints, the plane-free
and qualifying filters, and inclusion digraphs.

Subgroup classes are enumerated bottom-up: starting from the trivial group,
each known representative H is extended by one element g of prime-power
order, with g running over representatives of the conjugation action of
N_G(H); the subgroup <H, g> is then identified up to ambient conjugacy.
Every subgroup of every class orbit is stored, so identification is a set
lookup and inclusion tests are subset tests.  Completeness is elementary:
any overgroup of H contains a prime-power element outside H.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .characters import (CharacterTable, character_table, constituents,
                         natural_character)
from .groups import (FinGroup, SubFinGroup, closure_ids, normalizer,
                     small_generating_set, subgroup_conjugates)


class SubgroupEnumerationError(RuntimeError):
    pass


@dataclass(frozen=True, order=True)
class Fingerprint:
    """Isomorphism-invariant summary used in place of database group ids."""

    order: int
    abelian: bool
    element_order_histogram: tuple  # sorted (order, count)
    class_count: int
    class_size_histogram: tuple     # sorted (size, count)
    center_order: int
    derived_order: int
    char_degrees: tuple             # sorted degrees with multiplicity

    def short(self):
        hist = ",".join(f"{o}^{c}" if c > 1 else f"{o}"
                        for o, c in self.element_order_histogram)
        degs = ",".join(str(d) for d in self.char_degrees)
        ab = "ab" if self.abelian else "nonab"
        return (f"o{self.order}:{ab}:k{self.class_count}:z{self.center_order}"
                f":d{self.derived_order}:[{hist}]:deg[{degs}]")


def derived_subgroup_ids(H: FinGroup):
    """Element ids of the commutator subgroup (normal closure of generator
    commutators)."""
    gens = H.gen_ids
    comms = set()
    for a in gens:
        for b in gens:
            c = H.mul(H.mul(H.mul(H.inverse_ids[a], H.inverse_ids[b]), a), b)
            comms.add(c)
    cur = closure_ids(H, sorted(comms))
    while True:
        extra = set()
        for g in gens:
            gi = H.inverse_ids[g]
            for x in cur:
                y = H.mul(H.mul(gi, x), g)
                if y not in cur:
                    extra.add(y)
        if not extra:
            return cur
        cur = closure_ids(H, sorted(set(small_generating_set(H, cur)) | extra))


def fingerprint_of_group(H: FinGroup, table: CharacterTable | None = None) -> Fingerprint:
    cc = H.conjugacy_classes()
    orders = H.element_orders()
    hist = {}
    for o in orders:
        hist[o] = hist.get(o, 0) + 1
    sizes = {}
    for s in cc.sizes:
        sizes[s] = sizes.get(s, 0) + 1
    if table is None:
        table = character_table(H)
    return Fingerprint(
        order=H.order,
        abelian=(cc.count == H.order),
        element_order_histogram=tuple(sorted(hist.items())),
        class_count=cc.count,
        class_size_histogram=tuple(sorted(sizes.items())),
        center_order=sum(1 for s in cc.sizes if s == 1),
        derived_order=len(derived_subgroup_ids(H)),
        char_degrees=table.degree_multiset(),
    )


@dataclass
class SubgroupClass:
    index: int
    representative: frozenset       # ambient element ids
    generators: tuple               # ambient ids generating the representative
    order: int
    class_length: int
    normalizer_order: int
    _cache: dict = dc_field(default_factory=dict, repr=False)


class SubgroupClassification:
    """Complete conjugacy classes of subgroups of an enumerated group."""

    def __init__(self, group: FinGroup, classes, orbits, sub_to_class):
        self.group = group
        self.classes = classes          # list[SubgroupClass]
        self.orbits = orbits            # list[list[frozenset]]
        self.sub_to_class = sub_to_class

    @property
    def count(self):
        return len(self.classes)

    def total_subgroups(self):
        return sum(len(o) for o in self.orbits)

    def subgroup(self, ci: int) -> SubFinGroup:
        cl = self.classes[ci]
        sub = cl._cache.get("subgroup")
        if sub is None:
            sub = SubFinGroup(self.group, cl.representative, list(cl.generators))
            cl._cache["subgroup"] = sub
        return sub

    def table(self, ci: int) -> CharacterTable:
        cl = self.classes[ci]
        tbl = cl._cache.get("table")
        if tbl is None:
            tbl = character_table(self.subgroup(ci))
            cl._cache["table"] = tbl
        return tbl

    def fingerprint(self, ci: int) -> Fingerprint:
        cl = self.classes[ci]
        fp = cl._cache.get("fingerprint")
        if fp is None:
            fp = fingerprint_of_group(self.subgroup(ci), self.table(ci))
            cl._cache["fingerprint"] = fp
        return fp

    def class_of_subgroup(self, ids):
        return self.sub_to_class.get(frozenset(ids))

    def natural_constituent_dims(self, ci: int):
        cl = self.classes[ci]
        dims = cl._cache.get("nat_dims")
        if dims is None:
            H = self.subgroup(ci)
            tbl = self.table(ci)
            chi = natural_character(H)
            dims = []
            for d, m in constituents(tbl, chi):
                dims.extend([d] * m)
            dims = tuple(sorted(dims))
            cl._cache["nat_dims"] = dims
        return dims


def subgroup_classes(G: FinGroup, cap: int = 10 ** 4) -> SubgroupClassification:
    if G.order > cap:
        raise SubgroupEnumerationError(f"group order {G.order} exceeds cap {cap}")
    pp = G.prime_power_ids()
    classes = []
    orbits = []
    sub_to_class = {}

    def register(ids, gens):
        S0 = frozenset(ids)
        orbit = sorted(subgroup_conjugates(G, S0), key=sorted)
        ci = len(classes)
        for S in orbit:
            sub_to_class[S] = ci
        norm_order = G.order // len(orbit)
        classes.append(SubgroupClass(
            index=ci,
            representative=S0,
            generators=tuple(gens),
            order=len(S0),
            class_length=len(orbit),
            normalizer_order=norm_order,
        ))
        orbits.append(orbit)
        return ci

    trivial = frozenset({G.identity_id})
    register(trivial, ())
    work = [0]
    while work:
        ci = work.pop()
        cl = classes[ci]
        H = cl.representative
        if cl.order == G.order:
            continue
        N = normalizer(G, H)
        ngens = small_generating_set(G, N)
        ngen_pairs = [(g, G.inverse_ids[g]) for g in ngens]
        seen = set()
        for x in pp:
            if x in seen:
                continue
            # orbit of x under conjugation by N
            orbit = [x]
            seen.add(x)
            pos = 0
            while pos < len(orbit):
                y = orbit[pos]
                pos += 1
                for g, gi in ngen_pairs:
                    z = G.mul(G.mul(gi, y), g)
                    if z not in seen:
                        seen.add(z)
                        orbit.append(z)
            rep = orbit[0]
            if rep in H:
                continue
            gens = list(cl.generators) + [rep]
            K = frozenset(closure_ids(G, gens, seed_ids=H))
            if K in sub_to_class:
                continue
            cj = register(K, gens)
            work.append(cj)

    # deterministic order: by order, then fingerprint, then sorted rep ids
    order_key = sorted(
        range(len(classes)),
        key=lambda ci: (classes[ci].order, _fp_sort_key(classes, ci, G), sorted(classes[ci].representative)),
    )
    new_classes = []
    new_orbits = []
    new_map = {}
    for new_idx, old_idx in enumerate(order_key):
        cl = classes[old_idx]
        cl.index = new_idx
        new_classes.append(cl)
        new_orbits.append(orbits[old_idx])
        new_map[old_idx] = new_idx
    sub_to_class = {S: new_map[ci] for S, ci in sub_to_class.items()}
    return SubgroupClassification(G, new_classes, new_orbits, sub_to_class)


def _fp_sort_key(classes, ci, G):
    # cheap isomorphism-ish sort key that avoids building character tables
    # during enumeration: (order histogram); full fingerprints are computed
    # lazily later and do not affect completeness
    from .groups import subgroup_order_histogram

    return subgroup_order_histogram(G, classes[ci].representative)


# ---------------------------------------------------------------------------
# filters
# ---------------------------------------------------------------------------

def invariant_subspace_dims(cls: SubgroupClassification, ci: int):
    """All dimensions of invariant subspaces of the natural 5-dim action of
    the class representative: subset sums of natural constituent dims."""
    dims = cls.natural_constituent_dims(ci)
    sums = 1  # bitset of achievable sums
    for d in dims:
        sums |= sums << d
    return {s for s in range(sum(dims) + 1) if sums >> s & 1}


def has_invariant_plane(cls: SubgroupClassification, ci: int) -> bool:
    """True iff the natural module has an invariant subspace of dimension 3
    (equivalently, P^4 contains an invariant plane for this subgroup)."""
    return 3 in invariant_subspace_dims(cls, ci)


def qualifying(cls: SubgroupClassification, ci: int) -> bool:
    """True iff the class has an irreducible character of degree 4 or 5."""
    degs = cls.table(ci).degrees
    return any(d in (4, 5) for d in degs)


def faithful_irrep_dims(cls: SubgroupClassification, ci: int):
    """Degrees of faithful irreducible characters of the representative."""
    return cls.table(ci).faithful_irrep_dims()


# ---------------------------------------------------------------------------
# inclusion digraphs
# ---------------------------------------------------------------------------

@dataclass
class DigraphVertex:
    class_index: int
    order: int
    class_length: int
    fingerprint: Fingerprint


@dataclass
class InclusionDigraph:
    name: str
    vertices: list
    edges: list  # (i, j) with vertex i containing a conjugate of vertex j


def inclusion_digraph(cls: SubgroupClassification, class_indices, name="PlaneFree"):
    """Digraph on the chosen classes; edge i -> j iff the representative of
    class i contains some ambient conjugate of the representative of j."""
    idxs = list(class_indices)
    vertices = [
        DigraphVertex(ci, cls.classes[ci].order, cls.classes[ci].class_length,
                      cls.fingerprint(ci))
        for ci in idxs
    ]
    edges = []
    for a, ci in enumerate(idxs):
        rep = cls.classes[ci].representative
        oi = cls.classes[ci].order
        for b, cj in enumerate(idxs):
            if a == b:
                continue
            oj = cls.classes[cj].order
            if oj >= oi or oi % oj:
                continue
            if any(S <= rep for S in cls.orbits[cj]):
                edges.append((a, b))
    return InclusionDigraph(name, vertices, sorted(edges))


def dot_emit(D: InclusionDigraph) -> str:
    lines = [f"digraph {D.name} {{"]
    for i, v in enumerate(D.vertices):
        label = (f"order={v.order}\\nfingerprint={v.fingerprint.short()}"
                 f"\\nclass_length={v.class_length}")
        lines.append(f'  v{i} [label="{label}"];')
    for i, j in D.edges:
        lines.append(f"  v{i} -> v{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def classes_json(cls: SubgroupClassification, class_indices=None):
    idxs = list(class_indices) if class_indices is not None else range(cls.count)
    out = []
    for ci in idxs:
        c = cls.classes[ci]
        fp = cls.fingerprint(ci)
        out.append({
            "order": c.order,
            "class_length": c.class_length,
            "fingerprint": {
                "order": fp.order,
                "abelian": fp.abelian,
                "element_order_histogram": list(map(list, fp.element_order_histogram)),
                "class_count": fp.class_count,
                "center_order": fp.center_order,
                "derived_order": fp.derived_order,
                "char_degrees": list(fp.char_degrees),
            },
        })
    return out


# ---------------------------------------------------------------------------
# brute-force oracle (used by the test suite)
# ---------------------------------------------------------------------------

def all_subgroups_bruteforce(G: FinGroup, limit: int = 200):
    """Every subgroup of G as a frozenset of ids; plain set-dedup extension.

    Independent of the class enumeration above: cyclic subgroups first, then
    a fixpoint of one-element extensions with BFS closure over full element
    sets (no normalizer pruning, no conjugacy canonicalization).
    """
    if G.order > limit:
        raise SubgroupEnumerationError("oracle capped at order %d" % limit)
    subs = set()
    for x in range(G.order):
        cyc = [G.identity_id]
        cur = x
        while cur != G.identity_id:
            cyc.append(cur)
            cur = G.mul(cur, x)
        subs.add(frozenset(cyc))
    work = list(subs)
    while work:
        S = work.pop()
        if len(S) == G.order:
            continue
        for g in range(G.order):
            if g in S:
                continue
            elems = set(S)
            elems.add(g)
            frontier = list(elems)
            mults = list(elems)
            while frontier:
                nxt = []
                for a in frontier:
                    for b in mults:
                        c = G.mul(a, b)
                        if c not in elems:
                            elems.add(c)
                            nxt.append(c)
                        c = G.mul(b, a)
                        if c not in elems:
                            elems.add(c)
                            nxt.append(c)
                frontier = nxt
            K = frozenset(elems)
            if K not in subs:
                subs.add(K)
                work.append(K)
    return subs


def bruteforce_classes(G: FinGroup, limit: int = 200):
    """Conjugacy classes of subgroups from the brute-force enumeration."""
    subs = all_subgroups_bruteforce(G, limit)
    remaining = set(subs)
    out = []
    while remaining:
        S = min(remaining, key=sorted)
        orbit = subgroup_conjugates(G, S)
        if not orbit <= remaining:
            raise SubgroupEnumerationError("oracle conjugation left the set")
        remaining -= orbit
        out.append((S, len(orbit)))
    return out
