"""Complexes of disconnected graphs, partition posets, and the two collapse pipelines.

The complex DG_n has one vertex per possible edge of a graph on n labeled
vertices and one simplex per nonempty edge set whose graph is disconnected
(isolated vertices count).  The symmetric group acts by relabeling graph
vertices; taking transitive closures of graphs gives an ascending,
equivariant closure operator on the face poset whose image is the poset of
nontrivial set partitions.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from itertools import combinations

from .accat import ACMap, Poset, check_closure_operator, find_terminal_object, poset_from_relation
from .closure import (
    check_matching_acyclic,
    closure_matching,
    collapse,
    cone_closure_map,
    full_collapse_audit,
    induced_trisp_closure_map,
    search_collapse_to_point,
    verify_collapse_sequence,
    verify_trisp_closure_map,
)
from .equivariant import (
    check_image_subtrisp_equality,
    image_quotient_nerve,
    push_closure_map,
    quotient_poset_closure_map,
)
from .errors import InputError, PipelineError
from .nerve import nerve
from .symmetry import (
    CatAut,
    TrispAut,
    check_horizontal,
    check_regular_action,
    close_group,
    induced_trisp_action,
    quotient_category,
    quotient_trisp,
)
from .trisp import (
    euler_characteristic,
    induced_subtrisp,
    reverse_trisp,
    simplicial_from_faces,
    trisps_equal_over_vertices,
)


# -- the complex of disconnected graphs -------------------------------------


def edge_list(n):
    """Possible edges of a labeled graph on {0..n-1}, in lexicographic order."""
    return tuple(combinations(range(n), 2))


def is_disconnected(n, edge_ids, edges):
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in edge_ids:
        a, b = edges[e]
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    return len({find(x) for x in range(n)}) > 1


@dataclass(eq=False)
class GraphComplex:
    n: int
    edges: tuple  # edge id -> vertex pair
    trisp: object
    faces_by_dim: tuple  # per dimension, sorted tuples of edge ids
    index: dict  # frozenset of edge ids -> (d, s)

    def edge_label(self, e):
        a, b = self.edges[e]
        return f"{a + 1}{b + 1}"


def build_dgn(n):
    """All nonempty edge sets of disconnected graphs on n labeled vertices."""
    if not 3 <= n <= 6:
        raise InputError(f"n must be between 3 and 6, got {n}")
    edges = edge_list(n)
    m = len(edges)
    faces = []
    for size in range(1, m + 1):
        found = False
        for subset in combinations(range(m), size):
            if is_disconnected(n, subset, edges):
                faces.append(subset)
                found = True
        if not found:
            break
    trisp, faces_by_dim, index = simplicial_from_faces(m, faces)
    return GraphComplex(n, edges, trisp, faces_by_dim, index)


@dataclass(eq=False)
class FacePoset:
    poset: Poset
    elements: tuple  # object -> (d, s) of the underlying trisp
    position: dict  # (d, s) -> object
    vertex_sets: tuple  # object -> frozenset of trisp vertices

    @property
    def category(self):
        return self.poset.category


def face_poset(k):
    """Poset of the nonempty faces of a simplicial trisp, ordered by inclusion."""
    t = k.trisp if isinstance(k, GraphComplex) else k
    for d in range(1, t.dim + 1):
        seen = set()
        for s in range(t.n(d)):
            key = frozenset(t.vertex_tuple(d, s))
            if key in seen or len(key) != d + 1:
                raise InputError("face poset needs a simplicial complex")
            seen.add(key)
    elements = [(d, s) for d in range(t.dim + 1) for s in range(t.n(d))]
    position = {ds: i for i, ds in enumerate(elements)}
    vertex_sets = [frozenset(t.vertex_tuple(d, s)) for (d, s) in elements]
    by_set = {vs: i for i, vs in enumerate(vertex_sets)}
    pairs = []
    for i, vs in enumerate(vertex_sets):
        for size in range(1, len(vs)):
            for sub in combinations(sorted(vs), size):
                pairs.append((by_set[frozenset(sub)], i))
    labels = ["{" + ",".join(map(str, sorted(vs))) + "}" for vs in vertex_sets]
    poset = poset_from_relation(labels, pairs)
    return FacePoset(poset, tuple(elements), position, tuple(vertex_sets))


def barycentric(k):
    """Barycentric subdivision: the nerve of the face poset."""
    return nerve(face_poset(k).category)


# -- partitions --------------------------------------------------------------


def set_partitions(n):
    """All partitions of {0..n-1} in canonical form (sorted tuples of sorted tuples)."""
    if n == 0:
        return [()]
    out = []

    def grow(k, blocks):
        if k == n:
            out.append(tuple(sorted(tuple(sorted(b)) for b in blocks)))
            return
        for i in range(len(blocks)):
            grow(k + 1, blocks[:i] + [blocks[i] + [k]] + blocks[i + 1:])
        grow(k + 1, blocks + [[k]])

    grow(1, [[0]])
    return sorted(out)


def refines(fine, coarse):
    """Every block of `fine` is contained in a block of `coarse`."""
    lookup = {}
    for i, block in enumerate(coarse):
        for x in block:
            lookup[x] = i
    return all(len({lookup[x] for x in block}) == 1 for block in fine)


def partition_label(partition):
    return "|".join("".join(str(x + 1) for x in block) for block in partition)


def number_partition(partition):
    return tuple(sorted((len(b) for b in partition), reverse=True))


@dataclass(eq=False)
class PartitionPoset:
    """Set partitions of {0..n-1} except the discrete and one-block partitions.

    With ``fine_on_top=True`` morphisms point from coarser to finer
    partitions, so the one-doubleton classes sit at the top and survive as a
    terminal object in the quotient.  With ``fine_on_top=False`` the order
    matches inclusion of the corresponding unions of complete graphs.
    """

    n: int
    partitions: tuple
    poset: Poset
    index: dict
    fine_on_top: bool

    @property
    def category(self):
        return self.poset.category


def partition_poset(n, fine_on_top=True):
    if n < 3:
        raise InputError("partition poset needs n >= 3")
    parts = [
        p for p in set_partitions(n) if 1 < len(p) < n
    ]
    index = {p: i for i, p in enumerate(parts)}
    pairs = []
    for i, p in enumerate(parts):
        for j, q in enumerate(parts):
            if i != j and refines(p, q):
                # p strictly finer than q
                pairs.append((j, i) if fine_on_top else (i, j))
    labels = [partition_label(p) for p in parts]
    poset = poset_from_relation(labels, pairs)
    return PartitionPoset(n, tuple(parts), poset, index, fine_on_top)


def partition_of_edges(n, edge_ids, edges):
    """Partition of {0..n-1} into the connected components of an edge set."""
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in edge_ids:
        a, b = edges[e]
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    blocks = {}
    for x in range(n):
        blocks.setdefault(find(x), []).append(x)
    return tuple(sorted(tuple(sorted(b)) for b in blocks.values()))


def edges_of_partition(partition, edge_index):
    """Edge ids of the union of complete graphs on the blocks."""
    out = []
    for block in partition:
        for pair in combinations(block, 2):
            out.append(edge_index[pair])
    return tuple(sorted(out))


def transitive_closure_operator(k, fp):
    """The map sending each face to the edge set of its transitive closure.

    Ascending, idempotent, monotone, and equivariant on the face poset; its
    image is the poset of nontrivial set partitions.
    """
    edge_index = {pair: e for e, pair in enumerate(k.edges)}
    obj_map = []
    for (d, s) in fp.elements:
        face = k.faces_by_dim[d][s]
        partition = partition_of_edges(k.n, face, k.edges)
        closed = edges_of_partition(partition, edge_index)
        obj_map.append(fp.position[k.index[frozenset(closed)]])
    return ACMap.from_objects(fp.poset, obj_map)


def image_partition_isomorphism(k, fp, f):
    """Order isomorphism between the operator image and the partition poset.

    The image, as a subposet of the inclusion-ordered face poset, is matched
    against the partition poset in its inclusion orientation
    (``fine_on_top=False``); the bijection sends a closed edge set to the
    partition of its components.
    """
    pp = partition_poset(k.n, fine_on_top=False)
    image = sorted(set(f.obj))
    bijection = {}
    for x in image:
        d, s = fp.elements[x]
        partition = partition_of_edges(k.n, k.faces_by_dim[d][s], k.edges)
        bijection[x] = pp.index[partition]
    if sorted(bijection.values()) != list(range(len(pp.partitions))):
        return False, None, pp
    for x in image:
        for y in image:
            if x == y:
                continue
            if fp.poset.lt(x, y) != pp.poset.lt(bijection[x], bijection[y]):
                return False, (x, y), pp
    return True, bijection, pp


# -- symmetric group actions -------------------------------------------------


def sn_generator_perms(n):
    """The transposition (1 2) and the n-cycle, as vertex permutations."""
    transposition = tuple([1, 0] + list(range(2, n)))
    cycle = tuple(list(range(1, n)) + [0])
    return (transposition, cycle)


def lift_to_edges(perm, edges, edge_index):
    return tuple(edge_index[tuple(sorted((perm[a], perm[b])))] for a, b in edges)


def dgn_trisp_action(k):
    """The relabeling action on the complex itself (not on its face poset).

    Relabelings permute the vertices inside a simplex, so they are only
    setwise automorphisms; the quotient machinery is never applied to this
    action (it fails the quotient-regularity condition; that failure is the
    reason the face poset is used instead).
    """
    edge_index = {pair: e for e, pair in enumerate(k.edges)}
    gens = []
    for perm in sn_generator_perms(k.n):
        eperm = lift_to_edges(perm, k.edges, edge_index)
        dims = []
        for d, level in enumerate(k.faces_by_dim):
            table = []
            for face in level:
                image = tuple(sorted(eperm[e] for e in face))
                table.append(k.index[frozenset(image)][1])
            dims.append(tuple(table))
        gens.append(TrispAut(tuple(dims)))
    action = close_group(gens, on=k.trisp, setwise=True)
    assert action.order == math.factorial(k.n)
    return action


def face_poset_cat_aut(fp, vertex_perm_on_trisp_vertices, k):
    edge_index = {pair: e for e, pair in enumerate(k.edges)}
    eperm = lift_to_edges(vertex_perm_on_trisp_vertices, k.edges, edge_index)
    obj = []
    for (d, s) in fp.elements:
        face = k.faces_by_dim[d][s]
        image = frozenset(eperm[e] for e in face)
        obj.append(fp.position[k.index[image]])
    mor = [None] * fp.category.n_morphisms
    for (x, y), m in fp.poset.mor_of.items():
        mor[m] = fp.poset.mor_of[(obj[x], obj[y])]
    return CatAut(tuple(obj), tuple(mor))


def face_poset_action(k, fp):
    gens = [face_poset_cat_aut(fp, perm, k) for perm in sn_generator_perms(k.n)]
    action = close_group(gens, on=fp.category)
    assert action.order == math.factorial(k.n)
    horizontal, witness = check_horizontal(fp.category, action)
    assert horizontal, f"face poset action must be horizontal, witness {witness}"
    return action


def partition_action(pp):
    gens = []
    for perm in sn_generator_perms(pp.n):
        obj = []
        for p in pp.partitions:
            image = tuple(sorted(tuple(sorted(perm[x] for x in block)) for block in p))
            obj.append(pp.index[image])
        mor = [None] * pp.category.n_morphisms
        for (x, y), m in pp.poset.mor_of.items():
            mor[m] = pp.poset.mor_of[(obj[x], obj[y])]
        gens.append(CatAut(tuple(obj), tuple(mor)))
    action = close_group(gens, on=pp.category)
    assert action.order == math.factorial(pp.n)
    horizontal, witness = check_horizontal(pp.category, action)
    assert horizontal, f"partition action must be horizontal, witness {witness}"
    return action


@dataclass(eq=False)
class SnAction:
    n: int
    on_complex: object
    on_face_poset: object
    on_partitions: object


def sn_action(n, k=None, fp=None, pp=None):
    """The symmetric group acting on the complex, its face poset, and partitions."""
    if k is None:
        k = build_dgn(n)
    if fp is None:
        fp = face_poset(k)
    if pp is None:
        pp = partition_poset(n)
    return SnAction(n, dgn_trisp_action(k), face_poset_action(k, fp), partition_action(pp))


# -- pipelines ----------------------------------------------------------------


@dataclass
class Stage:
    name: str
    seconds: float
    info: dict = field(default_factory=dict)

    def to_json(self):
        return {"name": self.name, "seconds": round(self.seconds, 4), "info": self.info}


@dataclass
class PipelineReport:
    variant: str
    n: int
    ok: bool
    stages: list
    endpoint_search_skipped: bool = False
    certificates: dict = field(default_factory=dict)

    def to_json(self):
        return {
            "variant": self.variant,
            "n": self.n,
            "ok": self.ok,
            "endpoint_search_skipped": self.endpoint_search_skipped,
            "stages": [s.to_json() for s in self.stages],
            "certificates": {
                name: [[list(a), list(b)] for a, b in steps]
                for name, steps in self.certificates.items()
            },
        }


class _StageClock:
    def __init__(self, report):
        self.report = report
        self.t0 = time.perf_counter()

    def done(self, name, **info):
        t1 = time.perf_counter()
        self.report.stages.append(Stage(name, t1 - self.t0, info))
        self.t0 = t1

    def fail(self, name, message):
        raise PipelineError(name, message)


def pipeline_quotient_trisp(n, endpoint_budget=300.0, check_regularity=None):
    """Collapse the quotient of the barycentric subdivision onto the partition complex.

    Builds the subdivision of the disconnected-graph complex, pushes the
    closure map induced by the transitive-closure operator through the
    symmetric-group action, collapses the quotient onto the subtrisp of
    partition chains, and at small n certifies full collapsibility to a
    point by exhaustive search.  CLI name: pipeline 61.
    """
    report = PipelineReport("quotient-trisp", n, False, [])
    clock = _StageClock(report)
    if check_regularity is None:
        check_regularity = n <= 4

    k = build_dgn(n)
    clock.done("build_complex", counts=list(k.trisp.counts))
    fp = face_poset(k)
    bd = nerve(fp.category)
    clock.done("barycentric", counts=list(bd.trisp.counts))

    f = transitive_closure_operator(k, fp)
    cls = check_closure_operator(fp.poset, f)
    if not (cls.monotone and cls.idempotent and cls.ascending):
        clock.fail("closure_operator", str(cls.to_json()))
    iso_ok, iso_witness, _pp = image_partition_isomorphism(k, fp, f)
    if not iso_ok:
        clock.fail("closure_operator", f"image not isomorphic to partitions at {iso_witness}")
    clock.done("closure_operator", image_size=len(set(f.obj)))

    act = face_poset_action(k, fp)
    for g in act.generators:
        for x in range(fp.category.n_objects):
            if f.obj[g.obj[x]] != g.obj[f.obj[x]]:
                clock.fail("action", f"operator not equivariant at {x}")
    tact = induced_trisp_action(bd, act)
    clock.done("action", order=act.order)

    regular_report = None
    if check_regularity:
        regular_report = check_regular_action(bd.trisp, tact)
        if not regular_report.ok:
            clock.fail("regularity_condition", str(regular_report.witness))
        clock.done("regularity_condition", pairs=regular_report.pairs_checked)

    cmap = induced_trisp_closure_map(fp.poset, f, cls)
    base_verify = verify_trisp_closure_map(bd.trisp, cmap)
    if not base_verify.ok:
        clock.fail("induced_closure_map", str(base_verify.failures[:3]))
    clock.done("induced_closure_map", extended=base_verify.extended)

    pushed = push_closure_map(bd.trisp, tact, cmap, regular_report=regular_report)
    qt = pushed.qt
    if not qt.regular:
        clock.fail("quotient", f"quotient not regular at {qt.regularity_violations[:3]}")
    clock.done("quotient", counts=list(qt.trisp.counts), verified=pushed.verify_report.ok)

    matching = closure_matching(qt.trisp, pushed.cmap, pushed.verify_report)
    acyclic, cycle = check_matching_acyclic(qt.trisp, matching)
    if not acyclic:
        clock.fail("matching", f"cycle: {cycle}")
    cert = collapse(qt.trisp, matching, pushed.cmap.red)
    clock.done("collapse", steps=len(cert.steps), final_counts=list(cert.final.trisp.counts))

    # the final subtrisp must be the quotient of the partition-chain complex
    pp = partition_poset(n, fine_on_top=False)
    pact = partition_action(pp)
    pn = nerve(pp.category)
    ptact = induced_trisp_action(pn, pact)
    pqt = quotient_trisp(pn.trisp, ptact)
    vmap = []
    for parent in cert.final.to_parent[0]:
        rep_vertex = qt.reps[0][parent]
        d, s = fp.elements[rep_vertex]
        partition = partition_of_edges(n, k.faces_by_dim[d][s], k.edges)
        vmap.append(pqt.projection[0][pp.index[partition]])
    match = trisps_equal_over_vertices(cert.final.trisp, pqt.trisp, vmap)
    if not match.ok:
        clock.fail("target_equality", str(match.witness))
    clock.done("target_equality", counts=list(pqt.trisp.counts))

    chi = euler_characteristic(cert.final.trisp)
    if chi != 1:
        clock.fail("endpoint_search", f"final complex has Euler characteristic {chi}")
    status, steps = search_collapse_to_point(cert.final.trisp, budget_seconds=endpoint_budget)
    report.certificates["collapse"] = cert.steps
    if status == "collapsed":
        report.certificates["endpoint"] = steps
        clock.done("endpoint_search", steps=len(steps))
    elif status == "timeout" and n >= 5:
        report.endpoint_search_skipped = True
        clock.done("endpoint_search", skipped=True)
    else:
        clock.fail("endpoint_search", f"search returned {status}")

    report.ok = True
    return report, cert


def pipeline_quotient_category(n, check_composition=True):
    """Collapse the nerve of the quotient of the face poset down to a point.

    Builds the quotient category of the face poset by the symmetric group,
    the closure map its equivariant operator induces there, collapses onto
    the nerve of the image quotient, and finishes through the terminal
    object of the partition quotient.  CLI name: pipeline 62.
    """
    report = PipelineReport("quotient-category", n, False, [])
    clock = _StageClock(report)

    k = build_dgn(n)
    fp = face_poset(k)
    clock.done("build_complex", faces=fp.category.n_objects)
    f = transitive_closure_operator(k, fp)
    act = face_poset_action(k, fp)
    clock.done("action", order=act.order)

    qc = quotient_category(fp.category, act, check_composition=check_composition)
    nerve_q = nerve(qc.category)
    clock.done(
        "quotient_category",
        objects=qc.category.n_objects,
        morphisms=qc.category.n_morphisms,
        nerve_counts=list(nerve_q.trisp.counts),
    )

    qp = quotient_poset_closure_map(fp.poset, act, f, qc, nerve_q)
    if not qp.verify_report.ok:
        clock.fail("quotient_closure_map", str(qp.verify_report.failures[:3]))
    clock.done("quotient_closure_map", blue=len(qp.cmap.blue), red=len(qp.cmap.red))

    matching = closure_matching(nerve_q.trisp, qp.cmap, qp.verify_report)
    acyclic, cycle = check_matching_acyclic(nerve_q.trisp, matching)
    if not acyclic:
        clock.fail("matching", f"cycle: {cycle}")
    cert = collapse(nerve_q.trisp, matching, qp.cmap.red)
    clock.done("collapse", steps=len(cert.steps), final_counts=list(cert.final.trisp.counts))

    match52 = check_image_subtrisp_equality(fp.poset, act, f, qc, nerve_q)
    if not match52.ok:
        clock.fail("image_subtrisp_equality", str(match52.witness))
    clock.done("image_subtrisp_equality")

    pp = partition_poset(n, fine_on_top=True)
    pact = partition_action(pp)
    pqc = quotient_category(pp.category, pact)
    expected_objects = len({number_partition(p) for p in pp.partitions})
    if pqc.category.n_objects != expected_objects:
        clock.fail(
            "partition_quotient",
            f"{pqc.category.n_objects} objects, expected {expected_objects}",
        )
    terminal = find_terminal_object(pqc.category)
    if terminal is None:
        clock.fail("partition_quotient", "no terminal object")
    rep_partition = pp.partitions[pqc.obj_members[terminal][0]]
    if number_partition(rep_partition) != tuple([2] + [1] * (n - 2)):
        clock.fail("partition_quotient", f"terminal object is {rep_partition}")
    clock.done("partition_quotient", objects=pqc.category.n_objects, terminal=terminal)

    pn_q = nerve(pqc.category)
    cone = cone_closure_map(pqc.category, terminal, pn_q)
    cone_cert = full_collapse_audit(pn_q.trisp, cone)
    if cone_cert.final.trisp.counts != (1,):
        clock.fail("cone_collapse", f"final counts {cone_cert.final.trisp.counts}")
    clock.done("cone_collapse", steps=len(cone_cert.steps))

    # stitch the cone collapse back into the big nerve through the two
    # identifications: partition quotient ~ mirror of image quotient ~ red subtrisp
    image = sorted(set(f.obj))
    sub_p, keep, sub_qc, nerve_img = image_quotient_nerve(fp.poset, act, image)
    pos = {x: i for i, x in enumerate(keep)}
    edge_index = {pair: e for e, pair in enumerate(k.edges)}
    vmap2 = [None] * pn_q.trisp.n(0)
    for cls in range(pqc.category.n_objects):
        partition = pp.partitions[pqc.obj_members[cls][0]]
        closed = edges_of_partition(partition, edge_index)
        x = fp.position[k.index[frozenset(closed)]]
        vmap2[cls] = sub_qc.obj_class[pos[x]]
    match_mirror = trisps_equal_over_vertices(pn_q.trisp, reverse_trisp(nerve_img.trisp), vmap2)
    if not match_mirror.ok:
        clock.fail("stitch", f"partition nerve mismatch: {match_mirror.witness}")
    red_classes = sorted({qc.obj_class[x] for x in image})
    sub = induced_subtrisp(nerve_q.trisp, set(red_classes))
    vmap52 = [None] * nerve_img.trisp.n(0)
    red_pos = {c: i for i, c in enumerate(red_classes)}
    for i, x in enumerate(keep):
        vmap52[sub_qc.obj_class[i]] = red_pos[qc.obj_class[x]]
    match52b = trisps_equal_over_vertices(nerve_img.trisp, sub.trisp, vmap52)
    assert match52b.ok
    translated = []
    for (d, s), (d2, s2) in cone_cert.steps:
        a = match52b.mapping[d][match_mirror.mapping[d][s]]
        b = match52b.mapping[d2][match_mirror.mapping[d2][s2]]
        translated.append(((d, sub.to_parent[d][a]), (d2, sub.to_parent[d2][b])))
    full_steps = list(cert.steps) + translated
    remaining = verify_collapse_sequence(nerve_q.trisp, full_steps)
    if len(remaining) != 1 or next(iter(remaining))[0] != 0:
        clock.fail("stitch", f"stitched collapse leaves {sorted(remaining)[:5]}")
    report.certificates["collapse"] = tuple(full_steps)
    clock.done("stitch", total_steps=len(full_steps))

    report.ok = True
    return report, full_steps
