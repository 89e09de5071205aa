"""Independent oracles and enumerators used to cross-check the implementation.

Everything here recomputes results by brute force along a different route
than the library: path counting for nerve sizes, factorization matching for
morphism classes, exhaustive enumeration of posets and operators.
"""

from __future__ import annotations

from itertools import combinations, permutations

from trispcat.accat import ACMap, Poset, poset_from_relation
from trispcat.symmetry import CatAut, GroupAction, close_group, trivial_cat_action


def natural_orders(n):
    """All transitive relations contained in the numeric order on n elements."""
    pairs_all = list(combinations(range(n), 2))
    out = []
    for mask in range(1 << len(pairs_all)):
        rel = {pairs_all[i] for i in range(len(pairs_all)) if (mask >> i) & 1}
        if all(
            (a, c) in rel
            for (a, b) in rel
            for (b2, c) in rel
            if b2 == b
        ):
            out.append(rel)
    return out


def all_posets_upto_iso(max_n):
    """One poset per isomorphism class, for every size up to max_n."""
    posets = []
    for n in range(1, max_n + 1):
        seen = set()
        for rel in natural_orders(n):
            canon = min(
                tuple(sorted((p[x], p[y]) for (x, y) in rel))
                for p in permutations(range(n))
            )
            if canon in seen:
                continue
            seen.add(canon)
            posets.append(poset_from_relation(n, rel))
    return posets


def count_chains_by_length(c):
    """Number of composable chains of each length, by path counting."""
    totals = [c.n_objects]
    count = {x: 1 for x in range(c.n_objects)}
    while True:
        nxt = {}
        for m in range(c.n_morphisms):
            nxt[c.tgt[m]] = nxt.get(c.tgt[m], 0) + count.get(c.src[m], 0)
        total = sum(nxt.values())
        if total == 0:
            return totals
        totals.append(total)
        count = nxt


def decomposition_quotient_classes(c, action):
    """Morphism classes from factorization matching, the direct definition.

    Two morphisms are related when they admit factorizations of equal length
    whose factors are orbit-equal position by position; the classes are the
    transitive closure of that relation.
    """
    orbit = list(range(c.n_morphisms))
    changed = True
    while changed:
        changed = False
        for g in action.elements:
            for m in range(c.n_morphisms):
                a, b = orbit[m], orbit[g.mor[m]]
                if a != b:
                    lo, hi = min(a, b), max(a, b)
                    for i in range(c.n_morphisms):
                        if orbit[i] == hi:
                            orbit[i] = lo
                    changed = True

    splits = {}
    for (m1, m2), m12 in c.comp.items():
        splits.setdefault(m12, []).append((m1, m2))

    memo = {}

    def decompositions(m):
        if m in memo:
            return memo[m]
        memo[m] = {(m,)}
        for m1, m2 in splits.get(m, ()):
            for rest in decompositions(m2):
                memo[m].add((m1,) + rest)
        return memo[m]

    parent = list(range(c.n_morphisms))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    buckets = {}
    for m in range(c.n_morphisms):
        for decomp in decompositions(m):
            signature = tuple(orbit[z] for z in decomp)
            buckets.setdefault(signature, []).append(m)
    for members in buckets.values():
        for m in members[1:]:
            ra, rb = find(members[0]), find(m)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    roots = sorted({find(m) for m in range(c.n_morphisms)})
    rank = {r: i for i, r in enumerate(roots)}
    return [rank[find(m)] for m in range(c.n_morphisms)]


def monotone_idempotent_maps(p):
    """All monotone idempotent self-maps of a poset, as ACMaps."""
    n = p.n
    out = []

    def extend(values):
        if len(values) == n:
            if all(values[values[x]] == values[x] for x in range(n)):
                out.append(ACMap.from_objects(p, values))
            return
        x = len(values)
        for y in range(n):
            if all(
                not p.lt(z, x) or p.leq(values[z], y)
                for z in range(x)
            ) and all(
                not p.lt(x, z) or p.leq(y, values[z])
                for z in range(x)
            ):
                extend(values + [y])

    extend([])
    return out


def poset_automorphisms(p):
    """All automorphisms of a poset, as category automorphisms."""
    out = []
    for perm in permutations(range(p.n)):
        if all(p.lt(perm[x], perm[y]) == p.lt(x, y) for x in range(p.n) for y in range(p.n)):
            mor = [None] * p.category.n_morphisms
            for (x, y), m in p.mor_of.items():
                mor[m] = p.mor_of[(perm[x], perm[y])]
            out.append(CatAut(tuple(perm), tuple(mor)))
    return out


def subgroups_upto_order(p, max_order):
    """All subgroups of Aut(P) of order at most max_order (as GroupActions)."""
    auts = poset_automorphisms(p)
    seen = {}
    trivial = trivial_cat_action(p.category)
    seen[frozenset(trivial.elements)] = trivial
    for g in auts:
        action = close_group([g])
        if action.order <= max_order:
            seen.setdefault(frozenset(action.elements), action)
    for g, h in combinations(auts, 2):
        action = close_group([g, h])
        if action.order <= max_order:
            seen.setdefault(frozenset(action.elements), action)
    return list(seen.values())


def random_poset(rng, max_n=7, p_edge=0.4):
    n = rng.randint(1, max_n)
    pairs = [pair for pair in combinations(range(n), 2) if rng.random() < p_edge]
    return poset_from_relation(n, pairs)


def random_action(rng, p, max_order=6, attempts=8):
    """A random subgroup of Aut(P) with order at most max_order."""
    auts = poset_automorphisms(p)
    for _ in range(attempts):
        gens = rng.sample(auts, k=min(len(auts), rng.choice([1, 2])))
        action = close_group(gens)
        if 1 < action.order <= max_order:
            return action
    return trivial_cat_action(p.category)


def random_path_category(rng, max_nodes=5, max_edges=6):
    """Free category on a random DAG multigraph: morphisms are directed paths.

    Duplicate edges give parallel morphisms, so this exercises the
    non-poset corners of the category machinery.
    """
    from trispcat.accat import AcyclicCategory

    n = rng.randint(2, max_nodes)
    edges = []
    for _ in range(rng.randint(1, max_edges)):
        a, b = rng.randrange(n), rng.randrange(n)
        if a != b:
            edges.append((min(a, b), max(a, b)))
    by_src = {}
    for i, (a, _b) in enumerate(edges):
        by_src.setdefault(a, []).append(i)
    paths = [(i,) for i in range(len(edges))]
    frontier = list(paths)
    while frontier:
        new = [
            p + (e,)
            for p in frontier
            for e in by_src.get(edges[p[-1]][1], ())
        ]
        paths.extend(new)
        frontier = new
    paths.sort()
    index = {p: i for i, p in enumerate(paths)}
    morphisms = [
        (edges[p[0]][0], edges[p[-1]][1], "e" + "".join(map(str, p))) for p in paths
    ]
    comp = [
        (index[p1], index[p2], index[p1 + p2])
        for p1 in paths
        for p2 in paths
        if edges[p1[-1]][1] == edges[p2[0]][0]
    ]
    return AcyclicCategory(n, morphisms, comp)
