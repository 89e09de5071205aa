"""Transfer of closure maps across quotients.

Pushing forward: an equivariant closure map on a trisp with a quotient-
regular action descends to the orbit trisp.  Lifting: a closure map on the
quotient lifts back exactly when each blue vertex has a unique red partner
in the right orbit (and the trisp is an honest simplicial complex).
Finally, a poset quotient need not be a poset, but the quotient of a
one-sided equivariant closure operator still induces a closure map on the
nerve of the quotient category.
"""

from __future__ import annotations

from dataclasses import dataclass

from .accat import ACMap, check_closure_operator, opposite_category, subposet, as_poset
from .closure import TrispClosureMap, verify_trisp_closure_map
from .errors import PreconditionError
from .nerve import nerve
from .symmetry import (
    CatAut,
    GroupAction,
    check_regular_action,
    close_group,
    quotient_category,
    quotient_trisp,
)
from .trisp import induced_subtrisp, trisps_equal_over_vertices


@dataclass
class EquivarianceReport:
    map_equivariant: bool
    blue_closed: bool
    red_closed: bool
    witnesses: list

    @property
    def ok(self):
        return self.map_equivariant and self.blue_closed and self.red_closed

    def to_json(self):
        return {
            "map_equivariant": self.map_equivariant,
            "blue_closed": self.blue_closed,
            "red_closed": self.red_closed,
            "witnesses": [list(w) for w in self.witnesses],
        }


def check_equivariant(action, cmap):
    """φ(gb) = gφ(b) for all g, plus blue and red closed under the action."""
    witnesses = []
    map_eq = blue_closed = red_closed = True
    for gi, g in enumerate(action.elements):
        vperm = g.dims[0]
        for b in sorted(cmap.blue):
            if vperm[b] not in cmap.blue:
                blue_closed = False
                witnesses.append(("blue-not-closed", gi, b))
            elif cmap.mapping[vperm[b]] != vperm[cmap.mapping[b]]:
                map_eq = False
                witnesses.append(("not-equivariant", gi, b))
        for r in sorted(cmap.red):
            if vperm[r] not in cmap.red:
                red_closed = False
                witnesses.append(("red-not-closed", gi, r))
    return EquivarianceReport(map_eq, blue_closed, red_closed, witnesses)


@dataclass
class PushedClosureMap:
    qt: object  # QuotientTrisp
    cmap: TrispClosureMap
    verify_report: object


def push_closure_map(t, action, cmap, qt=None, regular_report=None):
    """Quotient of an equivariant closure map; verified on the orbit trisp.

    Preconditions checked in order: the action satisfies the quotient-
    regularity condition (taken on faith for nerve-induced actions), the map
    verifies on t, and it is equivariant with blue/red closed.
    """
    if regular_report is None and not action.nerve_induced:
        regular_report = check_regular_action(t, action)
    if regular_report is not None and not regular_report.ok:
        raise PreconditionError(f"quotient-regularity fails: {regular_report.witness}")
    base_report = verify_trisp_closure_map(t, cmap)
    if not base_report.ok:
        raise PreconditionError(f"map does not verify upstairs: {base_report.failures[:3]}")
    eq = check_equivariant(action, cmap)
    if not eq.ok:
        raise PreconditionError(f"equivariance fails: {eq.witnesses[:3]}")
    if qt is None:
        qt = quotient_trisp(t, action)
    proj0 = qt.projection[0]
    blue = frozenset(proj0[b] for b in cmap.blue)
    red = frozenset(proj0[r] for r in cmap.red)
    assert not (blue & red), "blue and red orbits overlap despite closedness"
    mapping = {}
    for orbit, rep in enumerate(qt.reps[0]):
        if orbit in blue:
            mapping[orbit] = proj0[cmap.mapping[rep]]
    pushed = TrispClosureMap(blue, red, mapping, cmap.convention)
    report = verify_trisp_closure_map(qt.trisp, pushed)
    assert report.ok, f"pushed map failed verification: {report.failures[:3]}"
    return PushedClosureMap(qt, pushed, report)


@dataclass
class LiftConditionReport:
    """Per blue vertex: candidate red partners in the prescribed orbit.

    The condition holds when each candidate set is a single vertex joined by
    a single 1-simplex; the assignment is then forced.
    """

    holds: bool
    candidates: dict  # blue vertex -> list of (red vertex, 1-simplex count)
    assignment: dict  # blue vertex -> red vertex, when holds

    def to_json(self):
        return {
            "holds": self.holds,
            "candidates": {str(b): c for b, c in sorted(self.candidates.items())},
            "assignment": {str(b): r for b, r in sorted(self.assignment.items())},
        }


def check_lift_condition(t, action, psi, qt=None):
    """Unique red partner in the image orbit, joined by a unique 1-simplex."""
    if qt is None:
        qt = quotient_trisp(t, action)
    proj0 = qt.projection[0]
    blue = [v for v in range(t.n(0)) if proj0[v] in psi.blue]
    edges_between = {}
    for e in range(t.n(1)):
        u, w = t.vertex_tuple(1, e)
        for key in ((u, w), (w, u)):
            edges_between.setdefault(key, []).append(e)
    candidates = {}
    assignment = {}
    holds = True
    for b in blue:
        target_orbit = psi.mapping[proj0[b]]
        orbit_vertices = [v for v in range(t.n(0)) if proj0[v] == target_orbit]
        cand = []
        for r in orbit_vertices:
            count = len(edges_between.get((b, r), ()))
            if count:
                cand.append((r, count))
        candidates[b] = cand
        if len(cand) == 1 and cand[0][1] == 1:
            assignment[b] = cand[0][0]
        else:
            holds = False
    return LiftConditionReport(holds, candidates, assignment if holds else {})


def lift_candidate(t, action, psi, qt=None):
    """The forced candidate lift, without any verification."""
    report = check_lift_condition(t, action, psi, qt)
    if not report.holds:
        raise PreconditionError(f"lift condition fails: {report.to_json()['candidates']}")
    if qt is None:
        qt = quotient_trisp(t, action)
    proj0 = qt.projection[0]
    blue = frozenset(v for v in range(t.n(0)) if proj0[v] in psi.blue)
    red = frozenset(v for v in range(t.n(0)) if proj0[v] in psi.red)
    return TrispClosureMap(blue, red, dict(report.assignment), psi.convention)


def lift_closure_map(t, action, psi, qt=None):
    """Lift a closure map from the orbit trisp back to the trisp.

    Guaranteed only for abstract simplicial complexes; on general trisps the
    forced candidate may fail, so non-simplicial input is rejected.
    """
    from .trisp import compute_simplicial_flag

    if not compute_simplicial_flag(t).is_simplicial:
        raise PreconditionError(
            "lifting is guaranteed only for abstract simplicial complexes; "
            "use lift_candidate to inspect the forced assignment"
        )
    if not action.nerve_induced:
        rep = check_regular_action(t, action)
        if not rep.ok:
            raise PreconditionError(f"quotient-regularity fails: {rep.witness}")
    if qt is None:
        qt = quotient_trisp(t, action)
    psi_report = verify_trisp_closure_map(qt.trisp, psi)
    if not psi_report.ok:
        raise PreconditionError("psi does not verify on the quotient")
    lift = lift_candidate(t, action, psi, qt)
    report = verify_trisp_closure_map(t, lift)
    assert report.ok, f"forced lift failed verification on a simplicial complex: {report.failures[:3]}"
    pushed = push_closure_map(t, action, lift, qt)
    assert pushed.cmap == psi or (
        pushed.cmap.blue == psi.blue
        and pushed.cmap.red == psi.red
        and pushed.cmap.mapping == psi.mapping
        and pushed.cmap.convention == psi.convention
    ), "push of the lift does not recover the original map"
    return lift


# -- poset quotients --------------------------------------------------------


def restrict_action_to_image(p, action, image):
    """Restrict a poset action to the induced subposet on `image` elements."""
    sub_p, keep = subposet(p, image)
    pos = {x: i for i, x in enumerate(keep)}
    gens = []
    source = action.generators if action.generators else action.elements
    for g in source:
        if any(g.obj[x] not in pos for x in keep):
            raise PreconditionError("subset is not closed under the action")
        obj = tuple(pos[g.obj[x]] for x in keep)
        mor = [None] * sub_p.category.n_morphisms
        for (x, y), m in sub_p.mor_of.items():
            mor[m] = sub_p.mor_of[(obj[x], obj[y])]
        gens.append(CatAut(obj, tuple(mor)))
    if not gens:
        from .symmetry import trivial_cat_action

        return sub_p, keep, trivial_cat_action(sub_p.category)
    return sub_p, keep, close_group(gens, on=sub_p.category)


def _poset_action_is_equivariant(p, action, f):
    for g in action.elements:
        for x in range(p.n):
            if f.obj[g.obj[x]] != g.obj[f.obj[x]]:
                return (x,)
    return None


def _arrow_class(p, qc, x, y):
    """Class tag of the image arrow x <= y in the quotient: identity or morphism class."""
    if x == y:
        return ("id", qc.obj_class[x])
    return ("mor", qc.mor_class[p.mor_of[(x, y)]])


def check_operator_class_coherence(p, action, f, qc=None):
    """Equal morphism classes stay equal after applying the operator.

    For a descending equivariant closure operator: whenever two poset
    morphisms with a common target lie in one class of the quotient, their
    operator images lie in one class too, both in the quotient of the poset
    and in the quotient of the image subposet.  Ascending operators are
    handled on the opposite poset.
    """
    report = check_closure_operator(p, f)
    direction = report.direction()
    if direction is None:
        raise PreconditionError("operator is not one-sided")
    if direction == "ascending" and not report.descending:
        # same permutations act on the opposite poset; the operator becomes descending
        op_p = as_poset(opposite_category(p.category))
        gens = action.generators if action.generators else action.elements
        op_action = close_group(list(gens), on=op_p.category)
        return check_operator_class_coherence(op_p, op_action, f, None)
    if _poset_action_is_equivariant(p, action, f) is not None:
        raise PreconditionError("operator is not equivariant")
    if qc is None:
        qc = quotient_category(p.category, action)
    image = sorted(set(f.obj))
    sub_p, keep, sub_action = restrict_action_to_image(p, action, image)
    sub_qc = quotient_category(sub_p.category, sub_action)
    pos = {x: i for i, x in enumerate(keep)}

    witnesses = []
    for members in qc.mor_members:
        tags_q = set()
        tags_img = set()
        for m in members:
            x, y = p.category.src[m], p.category.tgt[m]
            fx, fy = f.obj[x], f.obj[y]
            tags_q.add(_arrow_class(p, qc, fx, fy))
            if fx == fy:
                tags_img.add(("id", sub_qc.obj_class[pos[fx]]))
            else:
                tags_img.add(("mor", sub_qc.mor_class[sub_p.mor_of[(pos[fx], pos[fy])]]))
        if len(tags_q) > 1:
            witnesses.append(("quotient", tuple(members), tuple(sorted(tags_q))))
        if len(tags_img) > 1:
            witnesses.append(("image-quotient", tuple(members), tuple(sorted(tags_img))))
    return (not witnesses), witnesses


def image_quotient_nerve(p, action, image):
    """Quotient machinery for the induced subposet on an action-closed subset."""
    sub_p, keep, sub_action = restrict_action_to_image(p, action, sorted(set(image)))
    sub_qc = quotient_category(sub_p.category, sub_action)
    return sub_p, keep, sub_qc, nerve(sub_qc.category)


def check_image_subtrisp_equality(p, action, f, qc=None, nerve_q=None):
    """The red part of the quotient nerve equals the nerve of the quotient image.

    Red vertices of the quotient are the classes meeting the operator image.
    The subtrisp of the quotient nerve they induce must equal, boundary for
    boundary, the nerve of the quotient category of the image subposet.
    """
    if qc is None:
        qc = quotient_category(p.category, action)
    if nerve_q is None:
        nerve_q = nerve(qc.category)
    image = sorted(set(f.obj))
    red_classes = sorted({qc.obj_class[x] for x in image})
    sub = induced_subtrisp(nerve_q.trisp, set(red_classes))

    sub_p, keep, sub_qc, nerve_img = image_quotient_nerve(p, action, image)

    # vertex identification: class of x in the image quotient -> position of
    # the class of x among the red classes of the big quotient
    red_pos = {cls: i for i, cls in enumerate(red_classes)}
    vertex_map = [None] * sub_qc.category.n_objects
    for i, x in enumerate(keep):
        vertex_map[sub_qc.obj_class[i]] = red_pos[qc.obj_class[x]]
    match = trisps_equal_over_vertices(nerve_img.trisp, sub.trisp, vertex_map)
    return match


@dataclass
class QuotientPosetClosure:
    qc: object
    nerve_q: object
    cmap: TrispClosureMap
    verify_report: object


def quotient_poset_closure_map(p, action, f, qc=None, nerve_q=None):
    """Closure map on the nerve of a poset quotient, from an equivariant operator.

    Red classes are those meeting the operator image, the map sends a blue
    class to the class of the operator image of any member, and the
    convention follows the operator direction.  The result is verified.
    """
    report = check_closure_operator(p, f)
    direction = report.direction()
    if direction is None:
        raise PreconditionError("operator is not a one-sided closure operator")
    if _poset_action_is_equivariant(p, action, f) is not None:
        raise PreconditionError("operator is not equivariant")
    if qc is None:
        qc = quotient_category(p.category, action)
    if nerve_q is None:
        nerve_q = nerve(qc.category)
    image = set(f.obj)
    red = frozenset(qc.obj_class[x] for x in image)
    blue = frozenset(range(qc.category.n_objects)) - red
    mapping = {}
    for cls in blue:
        members = qc.obj_members[cls]
        images = {qc.obj_class[f.obj[x]] for x in members}
        assert len(images) == 1, "operator image is not constant on classes"
        mapping[cls] = images.pop()
    cmap = TrispClosureMap(blue, red, mapping, "min" if direction == "descending" else "max")
    verify = verify_trisp_closure_map(nerve_q.trisp, cmap)
    return QuotientPosetClosure(qc, nerve_q, cmap, verify)
