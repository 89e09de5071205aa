"""Finite acyclic categories, posets, and structure-preserving maps.

Objects and non-identity morphisms are dense integer indices with optional
string labels; identities are implicit and never stored.  Composition is a
partial table defined exactly on composable pairs: ``comp[(m1, m2)]`` is the
morphism "m1 followed by m2".
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InputError, NotAPosetError


class AcyclicCategory:
    """A finite category in which only the (implicit) identities are invertible.

    Immutable after construction; construction checks index ranges only.
    Whether the data actually is an acyclic category (no directed cycles,
    total and associative composition) is the job of `validate_category`.
    """

    def __init__(self, objects, morphisms, composition=()):
        if isinstance(objects, int):
            objects = [str(i) for i in range(objects)]
        self.objects = tuple(str(o) for o in objects)
        src, tgt, labels = [], [], []
        for m in morphisms:
            if len(m) == 2:
                s, t = m
                lab = f"m{len(src)}"
            else:
                s, t, lab = m
            if not (0 <= s < len(self.objects) and 0 <= t < len(self.objects)):
                raise InputError(f"morphism endpoint out of range: {m}")
            src.append(s)
            tgt.append(t)
            labels.append(str(lab))
        self.src = tuple(src)
        self.tgt = tuple(tgt)
        self.mor_labels = tuple(labels)
        n = len(self.src)
        comp = {}
        for m1, m2, m12 in composition:
            for m in (m1, m2, m12):
                if not 0 <= m < n:
                    raise InputError(f"composition entry out of range: {(m1, m2, m12)}")
            if (m1, m2) in comp and comp[(m1, m2)] != m12:
                raise InputError(f"conflicting composition entries for {(m1, m2)}")
            comp[(m1, m2)] = m12
        self.comp = comp
        hom = {}
        for m in range(n):
            hom.setdefault((self.src[m], self.tgt[m]), []).append(m)
        self._hom = {k: tuple(v) for k, v in hom.items()}

    @property
    def n_objects(self):
        return len(self.objects)

    @property
    def n_morphisms(self):
        return len(self.src)

    def hom(self, x, y):
        """Indices of non-identity morphisms x -> y."""
        return self._hom.get((x, y), ())

    def compose(self, m1, m2):
        """Composite of m1 followed by m2."""
        return self.comp[(m1, m2)]

    def out_morphisms(self, x):
        return tuple(m for m in range(self.n_morphisms) if self.src[m] == x)

    def in_morphisms(self, x):
        return tuple(m for m in range(self.n_morphisms) if self.tgt[m] == x)

    def __repr__(self):
        return f"AcyclicCategory({self.n_objects} objects, {self.n_morphisms} morphisms)"

    def to_json(self):
        return {
            "objects": [{"id": i, "label": l} for i, l in enumerate(self.objects)],
            "morphisms": [
                {"id": m, "src": self.src[m], "tgt": self.tgt[m], "label": self.mor_labels[m]}
                for m in range(self.n_morphisms)
            ],
            "composition": sorted([m1, m2, m12] for (m1, m2), m12 in self.comp.items()),
        }

    @classmethod
    def from_json(cls, data):
        try:
            objs = data["objects"]
            mors = data["morphisms"]
            comp = data.get("composition", [])
        except (TypeError, KeyError) as exc:
            raise InputError(f"not a category document: missing {exc}") from exc
        labels = []
        for i, o in enumerate(objs):
            if o.get("id") != i:
                raise InputError(f"object ids must be dense, got {o!r} at position {i}")
            labels.append(o.get("label", str(i)))
        morphisms = []
        for i, m in enumerate(mors):
            if m.get("id") != i:
                raise InputError(f"morphism ids must be dense, got {m!r} at position {i}")
            morphisms.append((m["src"], m["tgt"], m.get("label", f"m{i}")))
        return cls(labels, morphisms, comp)


@dataclass
class CategoryReport:
    """Validation outcome with witnesses for every failed law."""

    self_loops: list
    cycle: list | None
    missing_compositions: list
    bad_endpoints: list
    associativity_failures: list

    @property
    def acyclic(self):
        return not self.self_loops and self.cycle is None

    @property
    def composition_total(self):
        return not self.missing_compositions

    @property
    def ok(self):
        return (
            self.acyclic
            and self.composition_total
            and not self.bad_endpoints
            and not self.associativity_failures
        )

    def to_json(self):
        return {
            "ok": self.ok,
            "acyclic": self.acyclic,
            "self_loops": self.self_loops,
            "cycle": self.cycle,
            "composition_total": self.composition_total,
            "missing_compositions": self.missing_compositions,
            "bad_endpoints": self.bad_endpoints,
            "associativity_failures": self.associativity_failures,
        }


def validate_category(c):
    """Check the acyclic-category laws, returning witnesses rather than raising.

    Reports: directed cycles (including self-loops), missing composites of
    composable pairs, composites with wrong endpoints, and associativity
    failures wherever both parenthesizations are defined.
    """
    self_loops = [m for m in range(c.n_morphisms) if c.src[m] == c.tgt[m]]
    cycle = _find_cycle(c)

    by_src = {}
    for m in range(c.n_morphisms):
        by_src.setdefault(c.src[m], []).append(m)
    missing = []
    bad_endpoints = []
    for m1 in range(c.n_morphisms):
        for m2 in by_src.get(c.tgt[m1], ()):
            m12 = c.comp.get((m1, m2))
            if m12 is None:
                missing.append((m1, m2))
            elif c.src[m12] != c.src[m1] or c.tgt[m12] != c.tgt[m2]:
                bad_endpoints.append((m1, m2))

    assoc = []
    for (m1, m2), m12 in c.comp.items():
        for m3 in by_src.get(c.tgt[m2], ()):
            left = c.comp.get((m12, m3))
            m23 = c.comp.get((m2, m3))
            right = None if m23 is None else c.comp.get((m1, m23))
            if left is not None and right is not None and left != right:
                assoc.append((m1, m2, m3))
    return CategoryReport(self_loops, cycle, missing, bad_endpoints, assoc)


def _find_cycle(c):
    """Directed cycle of objects in the morphism digraph, or None."""
    adjacency = {x: set() for x in range(c.n_objects)}
    for m in range(c.n_morphisms):
        if c.src[m] != c.tgt[m]:
            adjacency[c.src[m]].add(c.tgt[m])
    color = {}
    stack_path = []

    def visit(x):
        color[x] = 1
        stack_path.append(x)
        for y in sorted(adjacency[x]):
            if color.get(y, 0) == 1:
                return stack_path[stack_path.index(y):]
            if color.get(y, 0) == 0:
                found = visit(y)
                if found is not None:
                    return found
        stack_path.pop()
        color[x] = 2
        return None

    for x in range(c.n_objects):
        if color.get(x, 0) == 0:
            found = visit(x)
            if found is not None:
                return found
    return None


class Poset:
    """A finite poset, viewed as an acyclic category with hom-sets of size <= 1."""

    def __init__(self, category):
        self.category = category
        self.mor_of = {}
        for m in range(category.n_morphisms):
            self.mor_of[(category.src[m], category.tgt[m])] = m

    @property
    def n(self):
        return self.category.n_objects

    @property
    def labels(self):
        return self.category.objects

    def leq(self, x, y):
        return x == y or (x, y) in self.mor_of

    def lt(self, x, y):
        return (x, y) in self.mor_of

    def incomparable(self, x, y):
        return x != y and (x, y) not in self.mor_of and (y, x) not in self.mor_of

    def morphism(self, x, y):
        """Index of the morphism x -> y, or None (identities are implicit)."""
        return self.mor_of.get((x, y))

    def __repr__(self):
        return f"Poset({self.n} elements, {self.category.n_morphisms} relations)"


def as_poset(c):
    """View a category as a poset; raises NotAPosetError with a witness pair."""
    for (x, y), ms in c._hom.items():
        if len(ms) > 1:
            raise NotAPosetError((x, y))
    return Poset(c)


def poset_from_relation(labels, strict_pairs):
    """Build a poset from any irreflexive acyclic relation, taking the transitive closure."""
    if isinstance(labels, int):
        labels = [str(i) for i in range(labels)]
    n = len(labels)
    succ = [set() for _ in range(n)]
    for x, y in strict_pairs:
        if not (0 <= x < n and 0 <= y < n):
            raise InputError(f"relation pair out of range: {(x, y)}")
        if x == y:
            raise InputError(f"relation is reflexive at {x}")
        succ[x].add(y)
    desc = [0] * n  # descendant sets as bitmasks
    state = [0] * n

    def dfs(x):
        if state[x] == 1:
            raise InputError(f"relation has a cycle through {labels[x]}")
        if state[x] == 2:
            return desc[x]
        state[x] = 1
        mask = 0
        for y in succ[x]:
            mask |= (1 << y) | dfs(y)
        desc[x] = mask
        state[x] = 2
        return mask

    for x in range(n):
        dfs(x)
        if (desc[x] >> x) & 1:
            raise InputError(f"relation has a cycle through {labels[x]}")
    pairs = sorted(
        (x, y) for x in range(n) for y in range(n) if (desc[x] >> y) & 1
    )
    index = {p: i for i, p in enumerate(pairs)}
    by_src = {}
    for j, (y, z) in enumerate(pairs):
        by_src.setdefault(y, []).append(j)
    comp = []
    for i, (x, y) in enumerate(pairs):
        for j in by_src.get(y, ()):
            comp.append((i, j, index[(x, pairs[j][1])]))
    cat = AcyclicCategory(labels, [(x, y, f"{labels[x]}<{labels[y]}") for x, y in pairs], comp)
    return Poset(cat)


def chain_poset(k):
    """The total order 0 < 1 < ... < k-1."""
    return poset_from_relation(k, [(i, i + 1) for i in range(k - 1)])


def antichain_poset(k):
    return poset_from_relation(k, [])


def subposet(p, keep):
    """Induced subposet on `keep`; returns (poset, new-to-old index map)."""
    keep = sorted(keep)
    pos = {x: i for i, x in enumerate(keep)}
    pairs = [(pos[x], pos[y]) for (x, y) in p.mor_of if x in pos and y in pos]
    labels = [p.labels[x] for x in keep]
    return poset_from_relation(labels, pairs), tuple(keep)


def opposite_category(c):
    """Same objects, all morphisms reversed."""
    morphisms = [(c.tgt[m], c.src[m], c.mor_labels[m]) for m in range(c.n_morphisms)]
    comp = [(m2, m1, m12) for (m1, m2), m12 in c.comp.items()]
    return AcyclicCategory(c.objects, morphisms, comp)


def covers(p):
    """Cover relations of a poset (the Hasse diagram edges)."""
    out = []
    for x, y in sorted(p.mor_of):
        if not any(p.lt(x, z) and p.lt(z, y) for z in range(p.n)):
            out.append((x, y))
    return out


@dataclass(frozen=True)
class ACMap:
    """A functor given by an object map and a morphism map.

    A morphism entry of None means the morphism collapses to the identity
    at the (shared) image of its endpoints.
    """

    obj: tuple
    mor: tuple

    @classmethod
    def identity(cls, c):
        return cls(tuple(range(c.n_objects)), tuple(range(c.n_morphisms)))

    @classmethod
    def from_objects(cls, p, obj_map):
        """Lift an order-preserving object map on a poset to an ACMap."""
        obj_map = tuple(obj_map)
        witness = order_violation(p, obj_map)
        if witness is not None:
            raise InputError(f"object map is not order-preserving at {witness}")
        mor = [None] * p.category.n_morphisms
        for (x, y), m in p.mor_of.items():
            fx, fy = obj_map[x], obj_map[y]
            mor[m] = None if fx == fy else p.mor_of[(fx, fy)]
        return cls(obj_map, tuple(mor))

    def apply_obj(self, x):
        return self.obj[x]


def order_violation(p, obj_map):
    """First pair (x, y) with x < y whose images are not related, else None."""
    for (x, y) in sorted(p.mor_of):
        if not p.leq(obj_map[x], obj_map[y]):
            return (x, y)
    return None


@dataclass
class FunctorReport:
    witnesses: list

    @property
    def ok(self):
        return not self.witnesses


def check_functor(c, d, f):
    """Does f preserve sources, targets, and all defined composites of c -> d?"""
    witnesses = []
    if len(f.obj) != c.n_objects or len(f.mor) != c.n_morphisms:
        raise InputError("map has wrong domain size")
    for x in f.obj:
        if not 0 <= x < d.n_objects:
            raise InputError(f"object image out of range: {x}")
    for m in range(c.n_morphisms):
        fm = f.mor[m]
        fs, ft = f.obj[c.src[m]], f.obj[c.tgt[m]]
        if fm is None:
            if fs != ft:
                witnesses.append(("identity-collapse", m))
        else:
            if not 0 <= fm < d.n_morphisms:
                raise InputError(f"morphism image out of range: {fm}")
            if d.src[fm] != fs:
                witnesses.append(("source", m))
            if d.tgt[fm] != ft:
                witnesses.append(("target", m))
    for (m1, m2), m12 in c.comp.items():
        fm1, fm2, fm12 = f.mor[m1], f.mor[m2], f.mor[m12]
        if fm1 is None and fm2 is None:
            expected = None
        elif fm1 is None:
            expected = fm2
        elif fm2 is None:
            expected = fm1
        else:
            expected = d.comp.get((fm1, fm2))
            if expected is None:
                witnesses.append(("composition-undefined", (m1, m2)))
                continue
        if fm12 != expected:
            witnesses.append(("composition", (m1, m2)))
    return FunctorReport(witnesses)


def check_ac_map(c, f):
    """Functor check of an endomap; on a poset this is order-preservation."""
    return check_functor(c, c, f)


@dataclass
class ClosureReport:
    """Flags for a candidate closure operator; each False flag has witnesses."""

    monotone: bool
    idempotent: bool
    descending: bool
    ascending: bool
    witnesses: dict

    @property
    def is_closure_operator(self):
        return self.monotone and self.idempotent

    def direction(self):
        """'descending' or 'ascending' when one-sided (identity counts as both)."""
        if not self.is_closure_operator:
            return None
        if self.descending:
            return "descending"
        if self.ascending:
            return "ascending"
        return None

    def to_json(self):
        return {
            "monotone": self.monotone,
            "idempotent": self.idempotent,
            "descending": self.descending,
            "ascending": self.ascending,
            "witnesses": {k: list(v) for k, v in self.witnesses.items()},
        }


def check_closure_operator(p, f):
    """Classify an ACMap on a poset: monotone, idempotent, descending, ascending."""
    witnesses = {"monotone": [], "idempotent": [], "descending": [], "ascending": []}
    for (x, y) in p.mor_of:
        if not p.leq(f.obj[x], f.obj[y]):
            witnesses["monotone"].append((x, y))
    for x in range(p.n):
        if f.obj[f.obj[x]] != f.obj[x]:
            witnesses["idempotent"].append(x)
        if not p.leq(f.obj[x], x):
            witnesses["descending"].append(x)
        if not p.leq(x, f.obj[x]):
            witnesses["ascending"].append(x)
    return ClosureReport(
        monotone=not witnesses["monotone"],
        idempotent=not witnesses["idempotent"],
        descending=not witnesses["descending"],
        ascending=not witnesses["ascending"],
        witnesses=witnesses,
    )


def check_closure_prerequisites(c, f, blue):
    """Necessary conditions for an AC-map to induce a closure map on the nerve.

    With B the chosen blue objects: B and f(B) must be disjoint, and every
    b in B must be joined to f(b) by exactly one morphism (in either
    direction, counting both).
    """
    blue = set(blue)
    witnesses = []
    image = {f.obj[b] for b in blue}
    overlap = blue & image
    for x in sorted(overlap):
        witnesses.append(("not-disjoint", x))
    for b in sorted(blue):
        fb = f.obj[b]
        count = len(c.hom(b, fb)) + len(c.hom(fb, b))
        if count != 1:
            witnesses.append(("hom-count", b, count))
    return (not witnesses), witnesses


def find_terminal_object(c):
    """The object receiving exactly one morphism from every other object, or None."""
    found = []
    for t in range(c.n_objects):
        if any(c.hom(t, x) for x in range(c.n_objects) if x != t):
            continue
        if all(len(c.hom(x, t)) == 1 for x in range(c.n_objects) if x != t):
            found.append(t)
    assert len(found) <= 1, "two terminal objects would force a directed cycle"
    return found[0] if found else None


def to_dot(obj):
    """DOT export: full morphism digraph for a category, Hasse diagram for a poset."""
    if isinstance(obj, Poset):
        lines = ["digraph hasse {"]
        for i, lab in enumerate(obj.labels):
            lines.append(f'  n{i} [label="{lab}"];')
        for x, y in covers(obj):
            lines.append(f"  n{x} -> n{y};")
        lines.append("}")
        return "\n".join(lines) + "\n"
    c = obj
    lines = ["digraph category {"]
    for i, lab in enumerate(c.objects):
        lines.append(f'  n{i} [label="{lab}"];')
    for m in range(c.n_morphisms):
        lines.append(f'  n{c.src[m]} -> n{c.tgt[m]} [label="{c.mor_labels[m]}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
