from itertools import product

import pytest

from tvnet.qalgebra import get_context
from tvnet.complex3 import (Triangulation3, Triangulation2, parse_triangulation,
                            serialize_triangulation, from_vertex_tets, s3_5tet,
                            s2xs1, t3, boundary_delta3, two_triangle_torus,
                            pachner_14, pachner_23, pachner_32, relabeled,
                            dual_triangulation, prism_complex,
                            glue_top_to_bottom, enumerate_colorings, CENSUS)
from tvnet.stringnet import honeycomb_torus


class TestTriangulation3:
    def test_s3_counts(self):
        t = s3_5tet()
        assert (t.N3, t.N1, t.N0) == (5, 10, 5)
        assert t.closed
        # 4-simplex boundary: 10 faces
        assert len(t.faces) == 10

    def test_single_tet(self):
        t = Triangulation3(1, {})
        assert t.N1 == 6
        assert len(t.boundary_faces) == 4
        assert t.N0 == 4
        assert not t.closed

    def test_s2xs1_closed(self):
        t = s2xs1()
        assert t.closed
        assert t.N3 == 12

    def test_census_names(self):
        assert set(CENSUS) == {"S3_5tet", "S2xS1", "T3"}
        for name, ctor in CENSUS.items():
            assert ctor().closed, name

    def test_edge_classes_boundary(self):
        t = Triangulation3(1, {})
        assert t.boundary_edge_classes == frozenset(range(6))

    def test_self_face_gluing_rejected(self):
        with pytest.raises(ValueError, match="itself"):
            Triangulation3(1, {(0, 0): (0, 0, {1: 1, 2: 2, 3: 3})})

    def test_non_involutive_rejected(self):
        vmap = {1: 0, 2: 2, 3: 3}
        bad = {(0, 0): (0, 1, vmap),
               (0, 1): (0, 0, {0: 1, 2: 3, 3: 2})}   # wrong inverse
        with pytest.raises(ValueError, match="involutive"):
            Triangulation3(1, bad)


class TestParsing:
    def test_round_trip(self):
        for tri in (s3_5tet(), s2xs1(), t3()):
            text = serialize_triangulation(tri)
            back = parse_triangulation(text)
            assert (back.N3, back.N1, back.N0) == (tri.N3, tri.N1, tri.N0)
            assert serialize_triangulation(back) == text

    def test_comments_and_errors(self):
        assert parse_triangulation("# empty\ntets 1\n").n_tets == 1
        with pytest.raises(ValueError, match="header"):
            parse_triangulation("g 0 0 1 0 0\n")
        with pytest.raises(ValueError, match="perm"):
            parse_triangulation("tets 2\ng 0 0 1 0 9\n")
        with pytest.raises(ValueError, match="twice"):
            parse_triangulation("tets 3\ng 0 0 1 0 0\ng 0 0 2 0 0\n")
        with pytest.raises(ValueError, match="unrecognized"):
            parse_triangulation("tets 1\nbogus\n")

    def test_from_vertex_tets_errors(self):
        with pytest.raises(ValueError, match="repeated"):
            from_vertex_tets([(0, 0, 1, 2)])
        with pytest.raises(ValueError, match="more than two"):
            from_vertex_tets([(0, 1, 2, 3), (0, 1, 2, 4), (0, 1, 2, 5)])


class TestPachner:
    def test_14_counts(self):
        t = pachner_14(s3_5tet(), 0)
        assert t.N3 == 8
        assert t.closed
        assert t.N0 == 6      # one new interior vertex

    def test_23_counts(self):
        s3 = s3_5tet()
        t = pachner_23(s3, s3.faces[0])
        assert t.N3 == 6
        assert t.closed
        assert t.N1 == 11     # one new interior edge

    def test_23_then_32_restores_counts(self):
        s3 = s3_5tet()
        t = pachner_23(s3, s3.faces[0])
        # the new edge joins the two apexes: slots (0,1) of each new tet
        back = pachner_32(t, (t.n_tets - 1, 0))
        assert (back.N3, back.N1, back.N0) == (5, 10, 5)
        assert back.closed

    def test_23_requires_interior_distinct(self):
        single = Triangulation3(1, {})
        with pytest.raises(ValueError, match="boundary"):
            pachner_23(single, (0, 0))
        torus3 = t3()
        # find a self-glued face if any; such faces must be rejected
        for (t, f), (t2, f2, _) in torus3.gluings.items():
            if t == t2:
                with pytest.raises(ValueError, match="distinct"):
                    pachner_23(torus3, (t, f))
                break

    def test_32_inapplicable(self):
        s3 = s3_5tet()
        # every edge of the 5-tet S^3 has three incident tets? No: each edge
        # lies in exactly 3 of the 5 tets, but the complex is not a 2-3 book
        # everywhere; the move must either apply cleanly or raise.
        try:
            out = pachner_32(s3, (0, 0))
        except ValueError:
            return
        assert out.closed and out.N3 == 4

    def test_relabeled(self):
        s3 = s3_5tet()
        out = relabeled(s3, [4, 3, 2, 1, 0])
        assert (out.N3, out.N1, out.N0) == (5, 10, 5)
        with pytest.raises(ValueError):
            relabeled(s3, [0, 0, 1, 2, 3])


class TestTriangulation2:
    def test_torus(self):
        t = two_triangle_torus()
        assert (t.n_tris, t.n_edge_classes, t.n_vertex_classes) == (2, 3, 1)
        assert t.closed

    def test_sphere(self):
        s = boundary_delta3()
        assert (s.n_tris, s.n_edge_classes, s.n_vertex_classes) == (4, 6, 4)
        assert s.closed

    def test_open_surface(self):
        t = Triangulation2(1, {})
        assert not t.closed
        assert len(t.boundary_sides) == 3


class TestDual:
    def test_f2_honeycomb(self):
        lat = honeycomb_torus(1, 2)
        dual, emap = dual_triangulation(lat)
        assert (dual.n_vertex_classes, dual.n_edge_classes, dual.n_tris) == (2, 6, 4)
        assert sorted(emap) == list(range(6))
        assert sorted(emap.values()) == list(range(6))

    def test_f4_honeycomb(self):
        lat = honeycomb_torus(2, 2)
        dual, emap = dual_triangulation(lat)
        assert (dual.n_vertex_classes, dual.n_edge_classes, dual.n_tris) == (4, 12, 8)
        assert len(emap) == lat.n_edges

    def test_edge_count_matches(self):
        for rows, cols in ((1, 2), (1, 3), (2, 2)):
            lat = honeycomb_torus(rows, cols)
            dual, emap = dual_triangulation(lat)
            assert dual.n_edge_classes == lat.n_edges


class TestPrism:
    def test_torus_prism_counts(self):
        x = dual_triangulation(honeycomb_torus(1, 2))[0]
        pc = prism_complex(x)
        assert pc.tri3.n_tets == 3 * x.n_tris == 12
        assert len(pc.tri3.boundary_faces) == 2 * x.n_tris

    def test_boundary_edge_bookkeeping(self):
        x = dual_triangulation(honeycomb_torus(1, 2))[0]
        pc = prism_complex(x)
        bottom = set(pc.bottom_edge.values())
        top = set(pc.top_edge.values())
        assert len(bottom) == 6 and len(top) == 6
        assert bottom.isdisjoint(top)
        assert pc.tri3.boundary_edge_classes == frozenset(bottom | top)
        # interior families: verticals (one per X vertex) and diagonals
        assert len(set(pc.vert_edge.values())) == x.n_vertex_classes == 2
        assert len(set(pc.diag_edge.values())) == x.n_edge_classes == 6
        assert pc.tri3.N1 == 6 + 6 + 2 + 6

    def test_boundary_components_isomorphic_to_base(self):
        x = dual_triangulation(honeycomb_torus(1, 2))[0]
        pc = prism_complex(x)
        # each X triangle's bottom/top face carries the marked edge classes
        for t in range(x.n_tris):
            want_b = {pc.bottom_edge[c] for c in x.tri_edges[t]}
            want_t = {pc.top_edge[c] for c in x.tri_edges[t]}
            (tb, fb), (tt, ft) = pc.bottom_faces[t], pc.top_faces[t]
            got_b = set(_face_edge_classes(pc.tri3, tb, fb))
            got_t = set(_face_edge_classes(pc.tri3, tt, ft))
            assert got_b == want_b
            assert got_t == want_t

    def test_boundary_euler_characteristic(self):
        # torus boundary components: V - E + F = 0
        x = dual_triangulation(honeycomb_torus(1, 2))[0]
        pc = prism_complex(x)
        n_bv = len(pc.tri3.boundary_vertex_classes)
        assert n_bv == 2 * x.n_vertex_classes
        chi = n_bv // 2 - len(pc.bottom_edge) + x.n_tris
        assert chi == 0

    def test_open_base_rejected(self):
        with pytest.raises(ValueError, match="closed"):
            prism_complex(Triangulation2(1, {}))

    def test_sphere_prism_product(self):
        closed = glue_top_to_bottom(prism_complex(boundary_delta3()))
        assert closed.closed
        assert closed.N3 == 12


class TestColorings:
    def test_single_tet_brute_force(self):
        single = Triangulation3(1, {})
        ctx = get_context(3)
        cols = list(enumerate_colorings(single, ctx))
        count = 0
        for assign in product(range(2), repeat=6):
            ok = all(ctx.admissible_doubled(assign[x], assign[y], assign[z])
                     for x, y, z in single.face_edges)
            count += ok
        assert len(cols) == count > 0

    def test_fixed_all_zero(self):
        single = Triangulation3(1, {})
        ctx = get_context(4)
        cols = list(enumerate_colorings(single, ctx,
                                        fixed={e: 0.0 for e in range(6)}))
        assert len(cols) == 1
        assert all(v == 0.0 for v in cols[0].values())

    def test_fixed_inadmissible_empty(self):
        single = Triangulation3(1, {})
        ctx = get_context(4)
        # force (1/2, 0, 0) on a face
        face = single.face_edges[0]
        fixed = {face[0]: 0.5, face[1]: 0.0, face[2]: 0.0}
        assert list(enumerate_colorings(single, ctx, fixed=fixed)) == []

    def test_sharding_partitions(self):
        s3 = s3_5tet()
        ctx = get_context(3)
        full = {tuple(sorted(c.items())) for c in enumerate_colorings(s3, ctx)}
        pieces = []
        for k in range(2):
            pieces.append({tuple(sorted(c.items()))
                           for c in enumerate_colorings(s3, ctx, shard=(k, 2))})
        assert pieces[0] | pieces[1] == full
        assert pieces[0].isdisjoint(pieces[1])

    def test_surface_colorings(self):
        x = two_triangle_torus()
        ctx = get_context(3)
        cols = list(enumerate_colorings(x, ctx))
        # 3 edges, both triangles have the same edge triple
        brute = sum(all(ctx.admissible_doubled(a[x_], a[y_], a[z_])
                        for x_, y_, z_ in x.tri_edges)
                    for a in product(range(2), repeat=3))
        assert len(cols) == brute


def _face_edge_classes(tri, t, f):
    from tvnet.complex3 import FACE_VERTS, EDGE_INDEX
    from itertools import combinations
    return [tri.edge_class[(t, EDGE_INDEX[tuple(sorted(p))])]
            for p in combinations(FACE_VERTS[f], 2)]
