"""Group actions on categories and trisps; orbits, quotients, and lifting.

Group elements are explicit permutation tables: an automorphism of a
category permutes objects and morphisms, an automorphism of a trisp
permutes simplices dimension by dimension, commuting with the boundary
operators.  Groups are closed by breadth-first products of generators.
"""

from __future__ import annotations

from dataclasses import dataclass

from .accat import AcyclicCategory, validate_category
from .errors import InputError, PreconditionError
from .nerve import Nerve
from .trisp import Trisp


def _compose_perm(g, h):
    """Permutation g∘h (apply h first)."""
    return tuple(g[x] for x in h)


def _invert_perm(g):
    inv = [0] * len(g)
    for i, x in enumerate(g):
        inv[x] = i
    return tuple(inv)


def _is_perm(p, n):
    return len(p) == n and sorted(p) == list(range(n))


@dataclass(frozen=True)
class CatAut:
    """Automorphism of a category: an object permutation plus a morphism permutation."""

    obj: tuple
    mor: tuple

    def __mul__(self, other):
        return CatAut(_compose_perm(self.obj, other.obj), _compose_perm(self.mor, other.mor))

    def inverse(self):
        return CatAut(_invert_perm(self.obj), _invert_perm(self.mor))

    def is_identity(self):
        return all(i == x for i, x in enumerate(self.obj)) and all(
            i == x for i, x in enumerate(self.mor)
        )


@dataclass(frozen=True)
class TrispAut:
    """Automorphism of a trisp: one simplex permutation per dimension."""

    dims: tuple

    def __mul__(self, other):
        return TrispAut(tuple(_compose_perm(g, h) for g, h in zip(self.dims, other.dims)))

    def inverse(self):
        return TrispAut(tuple(_invert_perm(g) for g in self.dims))

    def is_identity(self):
        return all(all(i == x for i, x in enumerate(p)) for p in self.dims)


def cat_automorphism_violation(c, g):
    """None if g is an automorphism of c, else a witness tuple."""
    if not _is_perm(g.obj, c.n_objects) or not _is_perm(g.mor, c.n_morphisms):
        return ("not-a-permutation",)
    for m in range(c.n_morphisms):
        gm = g.mor[m]
        if c.src[gm] != g.obj[c.src[m]]:
            return ("source", m)
        if c.tgt[gm] != g.obj[c.tgt[m]]:
            return ("target", m)
    for (m1, m2), m12 in c.comp.items():
        if c.comp.get((g.mor[m1], g.mor[m2])) != g.mor[m12]:
            return ("composition", (m1, m2))
    return None


def trisp_automorphism_violation(t, g):
    if len(g.dims) != t.dim + 1:
        return ("wrong-dimension-count",)
    for d in range(t.dim + 1):
        if not _is_perm(g.dims[d], t.n(d)):
            return ("not-a-permutation", d)
    for d in range(1, t.dim + 1):
        for s in range(t.n(d)):
            gs = g.dims[d][s]
            for i in range(d + 1):
                if t.face(d, gs, i) != g.dims[d - 1][t.face(d, s, i)]:
                    return ("boundary", (d, s, i))
    return None


def simplicial_automorphism_violation(t, g):
    """Setwise variant: faces must map to faces, but positions may permute.

    Vertex relabelings of a simplicial complex are automorphisms in this
    sense even when they reverse the vertex order inside a simplex; they
    need not commute with the ordered boundary operators, which is what the
    quotient machinery requires.
    """
    if len(g.dims) != t.dim + 1:
        return ("wrong-dimension-count",)
    for d in range(t.dim + 1):
        if not _is_perm(g.dims[d], t.n(d)):
            return ("not-a-permutation", d)
    for d in range(1, t.dim + 1):
        for s in range(t.n(d)):
            image_faces = set(t.faces(d, g.dims[d][s]))
            mapped_faces = {g.dims[d - 1][f] for f in t.faces(d, s)}
            if image_faces != mapped_faces:
                return ("faces", (d, s))
    return None


@dataclass
class GroupAction:
    """A closed finite group of automorphisms, with its generators retained."""

    generators: tuple
    elements: tuple
    nerve_induced: bool = False

    @property
    def order(self):
        return len(self.elements)

    @property
    def identity_index(self):
        return self._id_index

    def __post_init__(self):
        self._id_index = next(i for i, g in enumerate(self.elements) if g.is_identity())


def close_group(generators, on=None, setwise=False):
    """Close generators under composition; assert the group axioms.

    If `on` is a category or trisp, each generator is first checked to be a
    genuine automorphism; a failure raises with a witness.  With
    ``setwise=True`` a trisp generator only needs to map faces to faces
    (vertex relabelings of simplicial complexes).
    """
    generators = tuple(generators)
    if on is not None:
        for k, g in enumerate(generators):
            if isinstance(on, AcyclicCategory):
                witness = cat_automorphism_violation(on, g)
            elif setwise:
                witness = simplicial_automorphism_violation(on, g)
            else:
                witness = trisp_automorphism_violation(on, g)
            if witness is not None:
                raise InputError(f"generator {k} is not an automorphism: {witness}")
    if generators:
        first = generators[0]
        if isinstance(first, CatAut):
            identity = CatAut(tuple(range(len(first.obj))), tuple(range(len(first.mor))))
        else:
            identity = TrispAut(tuple(tuple(range(len(p))) for p in first.dims))
    else:
        raise InputError("close_group of an empty generator list needs a carrier; "
                         "use trivial_action instead")
    elements = {identity}
    frontier = [g for g in generators if g not in elements]
    elements.update(frontier)
    while frontier:
        new = []
        for g in generators:
            for h in frontier:
                gh = g * h
                if gh not in elements:
                    elements.add(gh)
                    new.append(gh)
        frontier = new
    for g in elements:
        assert g.inverse() in elements, "closure lost an inverse"
    ordered = sorted(elements, key=lambda g: (g.obj, g.mor) if isinstance(g, CatAut) else g.dims)
    return GroupAction(generators, tuple(ordered))


def trivial_cat_action(c):
    identity = CatAut(tuple(range(c.n_objects)), tuple(range(c.n_morphisms)))
    return GroupAction((), (identity,))


def trivial_trisp_action(t):
    identity = TrispAut(tuple(tuple(range(t.n(d))) for d in range(t.dim + 1)))
    return GroupAction((), (identity,))


def orbit_partition(perms, n):
    """(orbit id per item, orbit representatives) for a list of permutations.

    Orbits are numbered by their least member, in increasing order.
    """
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for p in perms:
        for i, j in enumerate(p):
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[max(ri, rj)] = min(ri, rj)
    reps = sorted({find(i) for i in range(n)})
    rank = {r: k for k, r in enumerate(reps)}
    return [rank[find(i)] for i in range(n)], reps


def check_horizontal(c, action_or_perms):
    """gx != x must imply that x and gx have no morphisms either way."""
    if isinstance(action_or_perms, GroupAction):
        perms = [g.obj for g in action_or_perms.elements]
    else:
        perms = list(action_or_perms)
    for gi, p in enumerate(perms):
        for x in range(c.n_objects):
            gx = p[x]
            if gx != x and (c.hom(x, gx) or c.hom(gx, x)):
                return False, (gi, x)
    return True, None


def induced_trisp_action(nerve_obj, action):
    """Transport a category action to the nerve: g sends a chain to its image chain."""
    c = nerve_obj.category
    t = nerve_obj.trisp
    gens = []
    for g in action.generators if action.generators else action.elements:
        dims = [g.obj]
        for d in range(1, t.dim + 1):
            level = []
            for ch in nerve_obj.chains[d]:
                img = tuple(g.mor[m] for m in ch.morphisms)
                level.append(nerve_obj.simplex_of_morphisms(img))
            dims.append(tuple(level))
        aut = TrispAut(tuple(dims))
        witness = trisp_automorphism_violation(t, aut)
        assert witness is None, f"induced map is not an automorphism: {witness}"
        gens.append(aut)
    if not gens:
        out = trivial_trisp_action(t)
    else:
        out = close_group(gens)
    out.nerve_induced = True
    assert out.order == action.order, "the induced action must be faithful alongside the original"
    return out


@dataclass
class RegularActionReport:
    """Outcome of the quotient-regularity condition on a trisp action.

    The condition: for every group element g and simplex σ, every common
    iterated face of σ and gσ (including σ itself when gσ = σ) is fixed by
    g and fixed vertexwise.  It guarantees that T/G is a regular trisp.
    """

    ok: bool
    witness: tuple | None  # (element index, simplex, face, kind)
    pairs_checked: int

    def to_json(self):
        return {"ok": self.ok, "witness": self.witness, "pairs_checked": self.pairs_checked}


def check_regular_action(t, action):
    pairs = 0
    for d in range(t.dim + 1):
        for s in range(t.n(d)):
            face_list = sorted(t.iterated_faces(d, s))
            face_set = set(face_list)
            for gi, g in enumerate(action.elements):
                if gi == action.identity_index:
                    continue
                pairs += 1
                inv = g.inverse()
                for (dd, ss) in face_list:
                    if (dd, inv.dims[dd][ss]) not in face_set:
                        continue  # not a face of g(σ)
                    if g.dims[dd][ss] != ss:
                        return RegularActionReport(False, (gi, (d, s), (dd, ss), "moved"), pairs)
                    for v in t.vertex_tuple(dd, ss):
                        if g.dims[0][v] != v:
                            return RegularActionReport(
                                False, (gi, (d, s), (dd, ss), "vertex"), pairs
                            )
    return RegularActionReport(True, None, pairs)


@dataclass
class QuotientTrisp:
    trisp: Trisp
    projection: tuple  # per dimension, item -> orbit index
    reps: tuple  # per dimension, orbit -> least original index
    regularity_violations: list

    @property
    def regular(self):
        return not self.regularity_violations


def quotient_trisp(t, action):
    """Orbit trisp: simplices are orbits, boundaries act on representatives."""
    projection = []
    reps = []
    for d in range(t.dim + 1):
        proj, rep = orbit_partition([g.dims[d] for g in action.elements], t.n(d))
        projection.append(tuple(proj))
        reps.append(tuple(rep))
    counts = [len(r) for r in reps]
    bnd = [()]
    for d in range(1, t.dim + 1):
        table = []
        for rep in reps[d]:
            table.append(tuple(projection[d - 1][f] for f in t.faces(d, rep)))
        bnd.append(tuple(table))
    qt = Trisp(counts, bnd)
    violations = []
    for d in range(1, qt.dim + 1):
        for s in range(qt.n(d)):
            if len(set(qt.vertex_tuple(d, s))) != d + 1:
                violations.append((d, s))
    return QuotientTrisp(qt, tuple(projection), tuple(reps), violations)


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[max(ra, rb)] = min(ra, rb)
        return True


@dataclass
class QuotientCategory:
    """Colimit quotient of a category by a group action.

    Objects are object orbits; morphisms are classes of the congruence
    generated by m ~ gm and closed under composition of equal classes.
    """

    category: AcyclicCategory
    obj_class: tuple  # object -> class index
    mor_class: tuple  # morphism -> class index
    obj_members: tuple
    mor_members: tuple


def quotient_category(c, action, check_composition=True):
    horizontal, witness = check_horizontal(c, action)
    if not horizontal:
        raise PreconditionError(f"action is not horizontal at {witness}")
    obj_class, obj_reps = orbit_partition([g.obj for g in action.elements], c.n_objects)

    uf = _UnionFind(c.n_morphisms)
    gens = action.generators if action.generators else action.elements
    for g in gens:
        for m in range(c.n_morphisms):
            uf.union(m, g.mor[m])
    pairs = list(c.comp.items())
    changed = True
    while changed:
        changed = False
        buckets = {}
        for (m1, m2), m12 in pairs:
            buckets.setdefault((uf.find(m1), uf.find(m2)), []).append(m12)
        for values in buckets.values():
            first = values[0]
            for v in values[1:]:
                if uf.union(first, v):
                    changed = True

    roots = sorted({uf.find(m) for m in range(c.n_morphisms)})
    root_rank = {r: k for k, r in enumerate(roots)}
    mor_class = [root_rank[uf.find(m)] for m in range(c.n_morphisms)]
    mor_members = [[] for _ in roots]
    for m in range(c.n_morphisms):
        mor_members[mor_class[m]].append(m)
    obj_members = [[] for _ in obj_reps]
    for x in range(c.n_objects):
        obj_members[obj_class[x]].append(x)

    # endpoints must be constant on classes
    q_src, q_tgt = [], []
    for members in mor_members:
        srcs = {obj_class[c.src[m]] for m in members}
        tgts = {obj_class[c.tgt[m]] for m in members}
        assert len(srcs) == 1 and len(tgts) == 1, "congruence broke endpoint classes"
        q_src.append(srcs.pop())
        q_tgt.append(tgts.pop())

    # class composition by representative lifting
    by_class_and_src = [{} for _ in roots]
    for k, members in enumerate(mor_members):
        for m in members:
            by_class_and_src[k].setdefault(c.src[m], []).append(m)
    comp_entries = {}
    for k1 in range(len(roots)):
        for k2 in range(len(roots)):
            if q_tgt[k1] != q_src[k2]:
                continue
            composites = set()
            found = None
            for m1 in mor_members[k1]:
                for m2 in by_class_and_src[k2].get(c.tgt[m1], ()):
                    m12 = c.comp.get((m1, m2))
                    assert m12 is not None, "composition missing on composable pair"
                    composites.add(mor_class[m12])
                    found = mor_class[m12]
                    if not check_composition:
                        break
                if found is not None and not check_composition:
                    break
            assert found is not None, "no composable representatives for composable classes"
            assert len(composites) == 1, (
                f"class composition not well-defined for ({k1}, {k2}): {sorted(composites)}"
            )
            comp_entries[(k1, k2)] = found

    labels = [f"[{c.objects[obj_members[k][0]]}]" for k in range(len(obj_reps))]
    mor_list = [
        (q_src[k], q_tgt[k], f"[{c.mor_labels[mor_members[k][0]]}]") for k in range(len(roots))
    ]
    quotient = AcyclicCategory(labels, mor_list, [(a, b, m) for (a, b), m in comp_entries.items()])
    report = validate_category(quotient)
    assert report.ok, f"quotient category invalid: {report.to_json()}"
    # the projection must be a functor
    for (m1, m2), m12 in c.comp.items():
        assert comp_entries[(mor_class[m1], mor_class[m2])] == mor_class[m12]
    return QuotientCategory(
        quotient,
        tuple(obj_class),
        tuple(mor_class),
        tuple(tuple(m) for m in obj_members),
        tuple(tuple(m) for m in mor_members),
    )


@dataclass
class CanonicalMap:
    """The canonical comparison from the orbit trisp of the nerve to the nerve
    of the quotient category, together with a constructive lift procedure.

    It is bijective on vertices and surjective in every dimension.
    """

    nerve_src: Nerve
    action: GroupAction
    qt: QuotientTrisp
    qc: QuotientCategory
    nerve_dst: Nerve
    entries: tuple  # per dimension, orbit index -> simplex of nerve_dst

    @property
    def surjective_by_dim(self):
        out = []
        for d in range(self.nerve_dst.trisp.dim + 1):
            image = set(self.entries[d]) if d < len(self.entries) else set()
            out.append(len(image) == self.nerve_dst.trisp.n(d))
        return tuple(out)

    @property
    def vertex_bijective(self):
        entries = self.entries[0]
        return len(set(entries)) == len(entries) == self.nerve_dst.trisp.n(0)

    def lift(self, d, s):
        """An orbit of the source whose image is the simplex (d, s) of the target.

        Built inductively: extend a lifted chain one morphism at a time,
        translating the next representative by a group element so that the
        endpoints match.
        """
        if d == 0:
            member = self.qc.obj_members[s][0]
            return self.qt.projection[0][member]
        target_chain = self.nerve_dst.chain(d, s)
        lifted = []
        current = None
        for cls in target_chain.morphisms:
            members = self.qc.mor_members[cls]
            if current is None:
                m = members[0]
            else:
                matching = [m for m in members if self.nerve_src.category.src[m] == current]
                assert matching, "no class member continues the lifted chain"
                m = matching[0]
            lifted.append(m)
            current = self.nerve_src.category.tgt[m]
        src_simplex = self.nerve_src.simplex_of_morphisms(tuple(lifted))
        orbit = self.qt.projection[d][src_simplex]
        assert self.entries[d][orbit] == s, "lift does not round-trip"
        return orbit


def canonical_map(c, action, nerve_src=None, taction=None, qt=None, qc=None, nerve_dst=None):
    """Build the canonical map for a category action, with all the pieces.

    Precomputed pieces may be passed in to avoid recomputation.
    """
    if nerve_src is None:
        from .nerve import nerve as _nerve

        nerve_src = _nerve(c)
    if taction is None:
        taction = induced_trisp_action(nerve_src, action)
    if qt is None:
        qt = quotient_trisp(nerve_src.trisp, taction)
    if qc is None:
        qc = quotient_category(c, action)
    if nerve_dst is None:
        from .nerve import nerve as _nerve

        nerve_dst = _nerve(qc.category)
    entries = []
    for d in range(nerve_src.trisp.dim + 1):
        level = []
        for rep in qt.reps[d]:
            if d == 0:
                level.append(qc.obj_class[rep])
            else:
                chain = nerve_src.chains[d][rep]
                img = tuple(qc.mor_class[m] for m in chain.morphisms)
                level.append(nerve_dst.simplex_of_morphisms(img))
        entries.append(tuple(level))
    cmap = CanonicalMap(nerve_src, taction, qt, qc, nerve_dst, tuple(entries))
    # commutes with boundaries
    for d in range(1, qt.trisp.dim + 1):
        for o in range(qt.trisp.n(d)):
            img = entries[d][o]
            for i in range(d + 1):
                assert entries[d - 1][qt.trisp.face(d, o, i)] == nerve_dst.trisp.face(d, img, i), (
                    "canonical map does not commute with boundaries"
                )
    assert cmap.vertex_bijective, "canonical map must be bijective on vertices"
    return cmap
