import pytest
from hypothesis import given, settings, strategies as st
from itertools import combinations

from trispcat.accat import chain_poset, poset_from_relation
from trispcat.errors import InputError
from trispcat.nerve import nerve
from trispcat.trisp import (
    Trisp,
    euler_characteristic,
    induced_subtrisp,
    reverse_trisp,
    simplicial_from_faces,
    skeleton_dot,
    trisps_equal_over_vertices,
    validate_trisp,
)

from test_accat import posets


def full_triangle():
    return nerve(chain_poset(3).category).trisp


def test_point_is_valid():
    t = Trisp((1,), [])
    assert validate_trisp(t).ok
    assert euler_characteristic(t) == 1


def test_double_filled_triangle_valid_not_simplicial(double_filled):
    t, _action, _psi = double_filled
    report = validate_trisp(t)
    assert report.ok
    assert not report.flags.is_simplicial
    assert not report.flags.is_flag_complex
    assert euler_characteristic(t) == 2


def test_loop_edge_fails_regularity():
    t = Trisp((1, 1), [[(0, 0)]])
    report = validate_trisp(t)
    assert not report.ok
    assert report.regularity_violations == [(1, 0)]


def test_identity_violation_detected():
    # two triangles over a square of edges, wired so ∂_i∂_j breaks
    t = Trisp((4, 4, 1), [[(1, 0), (2, 1), (3, 2), (3, 0)], [(1, 3, 0)]])
    report = validate_trisp(t)
    assert not report.ok
    assert report.identity_violations


def test_vertex_tuple_conventions():
    t = Trisp((2, 1), [[(1, 0)]])
    assert t.vertex_tuple(1, 0) == (0, 1)
    tri = full_triangle()
    assert tri.vertex_tuple(2, 0) == (0, 1, 2)


def test_vertex_tuple_deletion_identity(dgn4_bundle):
    for t in (full_triangle(), dgn4_bundle["bd"].trisp):
        for d in range(1, t.dim + 1):
            for s in range(t.n(d)):
                vt = t.vertex_tuple(d, s)
                for j in range(d + 1):
                    expected = vt[:j] + vt[j + 1:]
                    assert t.vertex_tuple(d - 1, t.face(d, s, j)) == expected


def test_hollow_triangle_not_flag():
    faces = [(0,), (1,), (2,), (0, 1), (0, 2), (1, 2)]
    t, _, _ = simplicial_from_faces(3, faces)
    report = validate_trisp(t)
    assert report.ok and report.flags.is_simplicial
    assert not report.flags.is_flag_complex


def test_boundary_of_tetrahedron_not_flag():
    faces = [f for size in (1, 2, 3) for f in combinations(range(4), size)]
    t, _, _ = simplicial_from_faces(4, faces)
    report = validate_trisp(t)
    assert report.ok and report.flags.is_simplicial
    assert not report.flags.is_flag_complex


def test_nerve_with_parallel_composite_is_flag():
    # a -> b -> c with both the composite and an extra parallel arrow a -> c
    from trispcat.accat import AcyclicCategory, validate_category

    c = AcyclicCategory(
        ["a", "b", "c"],
        [(0, 1), (1, 2), (0, 2, "composite"), (0, 2, "extra")],
        [(0, 1, 2)],
    )
    assert validate_category(c).ok
    report = validate_trisp(nerve(c).trisp)
    assert report.ok
    assert report.flags.is_flag_complex
    assert not report.flags.is_simplicial  # two edges a -> c share a vertex set


def test_induced_subtrisp_full_and_empty():
    t = full_triangle()
    sub = induced_subtrisp(t, range(3))
    match = trisps_equal_over_vertices(sub.trisp, t, range(3))
    assert match.ok
    empty = induced_subtrisp(t, set())
    assert empty.trisp.counts == ()


def test_induced_subtrisp_skips_middle_vertex():
    sub = induced_subtrisp(full_triangle(), {0, 2})
    assert sub.trisp.counts == (2, 1)
    assert sub.trisp.vertex_tuple(1, 0) == (0, 1)  # reindexed a < c edge


def test_euler_characteristic_values(double_filled):
    assert euler_characteristic(full_triangle()) == 1
    hollow, _, _ = simplicial_from_faces(
        3, [(0,), (1,), (2,), (0, 1), (0, 2), (1, 2)]
    )
    assert euler_characteristic(hollow) == 0


def test_equality_rejects_dimension_mismatch():
    edge = Trisp((2, 1), [[(1, 0)]])
    point = Trisp((1,), [])
    assert not trisps_equal_over_vertices(edge, point, [0]).ok


def test_equality_is_boundary_sensitive():
    path_012 = Trisp((3, 2), [[(1, 0), (2, 1)]])
    fork_from_0 = Trisp((3, 2), [[(1, 0), (2, 0)]])
    assert not trisps_equal_over_vertices(path_012, fork_from_0, range(3)).ok
    path_201 = Trisp((3, 2), [[(0, 2), (1, 0)]])
    assert not trisps_equal_over_vertices(path_012, path_201, range(3)).ok
    assert trisps_equal_over_vertices(path_012, path_201, (2, 0, 1)).ok


def test_reverse_trisp_matches_opposite_nerve(chain3):
    from trispcat.accat import opposite_category

    forward = nerve(chain3.category).trisp
    backward = nerve(opposite_category(chain3.category)).trisp
    rev = reverse_trisp(forward)
    assert validate_trisp(rev).ok
    match = trisps_equal_over_vertices(backward, rev, range(3))
    assert match.ok


def test_simplicial_from_faces_requires_closure():
    with pytest.raises(InputError):
        simplicial_from_faces(3, [(0,), (1,), (2,), (0, 1, 2)])


def test_json_roundtrip(double_filled):
    t, _, _ = double_filled
    doc = t.to_json()
    back = Trisp.from_json(doc)
    assert back.counts == t.counts
    assert all(back.boundary_table(d) == t.boundary_table(d) for d in range(1, t.dim + 1))
    with pytest.raises(InputError):
        Trisp.from_json({"nope": 1})


def test_skeleton_dot():
    out = skeleton_dot(full_triangle())
    assert out.count("->") == 3


@settings(max_examples=50, deadline=None)
@given(posets())
def test_nerves_of_posets_are_regular_simplicial_flag(p):
    report = validate_trisp(nerve(p.category).trisp)
    assert report.ok
    assert report.flags.is_simplicial
    assert report.flags.is_flag_complex


@settings(max_examples=30, deadline=None)
@given(posets(max_n=5))
def test_subtrisp_of_all_vertices_is_identity(p):
    t = nerve(p.category).trisp
    sub = induced_subtrisp(t, range(t.n(0)))
    assert trisps_equal_over_vertices(sub.trisp, t, range(t.n(0))).ok
