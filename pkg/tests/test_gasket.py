"""Prefractal construction: contractions, curve indexing, vertex enumeration.

Core claims:
    - the three contractions halve toward the corners, exactly;
    - curve ids follow the level/position layout with 3 edges per triangle;
    - counts: 3^(n+1) triangles' edges at level n, (3^(n+1)+3)/2 vertices;
    - vertex enumeration is a stable prefix: V_n sits at the front of any
      deeper build, and equals the brute-force iterated-map vertex set.
"""

import math
import random

import pytest

from prefractal.dyadic import DyadicRational
from prefractal.gasket import (
    CORNERS,
    LatticePoint,
    build_gasket,
    complex_from_dict,
    complex_to_dict,
    curve_count,
    kappa,
    kappa_inverse,
    similitude_apply,
    vertex_count,
)


def _brute_force_vertices(n):
    """Iterate the three corner maps on the corner set, in floats."""
    pts = {(0.0, 0.0), (1.0, 0.0), (0.5, math.sqrt(3) / 2)}
    for _ in range(n):
        nxt = set()
        for (x, y) in pts:
            for (cx, cy) in [(0, 0), (1, 0), (0.5, math.sqrt(3) / 2)]:
                nxt.add((round((x + cx) / 2, 12), round((y + cy) / 2, 12)))
        pts = nxt
    return pts


class TestSimilitudes:
    def test_fixed_points_are_corners(self):
        for r in range(3):
            assert similitude_apply(r, CORNERS[r]) == CORNERS[r]

    def test_halves_toward_corner(self):
        p = similitude_apply(0, CORNERS[1])
        assert p == LatticePoint(DyadicRational(1, 1), DyadicRational(0, 0))

    def test_top_corner_image_of_right(self):
        p = similitude_apply(2, CORNERS[1])
        assert (p.a.as_fraction(), p.b.as_fraction()) == (0.5, 0.5)
        x, y = p.euclidean()
        assert abs(x - 0.75) < 1e-12 and abs(y - math.sqrt(3) / 4) < 1e-12

    def test_invalid_index(self):
        with pytest.raises(ValueError):
            similitude_apply(3, CORNERS[0])

    def test_contraction_ratio_exact(self):
        rng = random.Random(404)
        for _ in range(50):
            p = LatticePoint(DyadicRational(rng.randint(-8, 8), 3),
                             DyadicRational(rng.randint(-8, 8), 3))
            q = LatticePoint(DyadicRational(rng.randint(-8, 8), 3),
                             DyadicRational(rng.randint(-8, 8), 3))
            r = rng.randrange(3)
            d2 = similitude_apply(r, p).squared_distance(similitude_apply(r, q))
            assert d2 * 4 == p.squared_distance(q)


class TestCurveIndexing:
    def test_kappa_values(self):
        assert kappa(0, 0) == 0
        assert kappa(1, 0) == 3
        assert kappa(2, 8) == 36

    def test_kappa_inverse_roundtrip(self):
        for n in range(5):
            for r in range(3**n):
                cid = kappa(n, r)
                for off in range(3):
                    assert kappa_inverse(cid + off) == (n, r, off)

    def test_counts(self):
        assert curve_count(1) == 12
        assert curve_count(4) == 363
        assert vertex_count(4) == 123
        for n in range(7):
            assert curve_count(n) == 3 * (3 ** (n + 1) - 1) // 2
            assert vertex_count(n) == (3 ** (n + 1) + 3) // 2

    def test_position_out_of_range(self):
        with pytest.raises(ValueError):
            kappa(1, 3)


class TestBuildGasket:
    def test_triangle_and_curve_tallies(self):
        cx = build_gasket(3)
        for m in range(4):
            assert len(cx.triangles[m]) == 3**m
            assert len(cx.curves_at_level(m)) == 3 ** (m + 1)
        assert cx.b_n == curve_count(3)

    def test_vertex_counts_per_level(self):
        cx = build_gasket(4)
        assert cx.level_vertex_counts == [vertex_count(n) for n in range(5)]

    def test_vertex_prefix_is_stable(self):
        keys5 = [v.key() for v in build_gasket(5).vertices]
        keys3 = [v.key() for v in build_gasket(3).vertices]
        assert keys5[: len(keys3)] == keys3

    def test_vertices_match_brute_force(self):
        cx = build_gasket(4)
        mine = sorted(v.euclidean() for v in cx.vertices)
        ref = sorted(_brute_force_vertices(4))
        assert len(mine) == len(ref)
        for (x, y), (rx, ry) in zip(mine, ref):
            assert abs(x - rx) < 1e-9 and abs(y - ry) < 1e-9

    def test_curve_endpoints_are_triangle_sides(self):
        cx = build_gasket(3)
        side2 = DyadicRational(1, 6)  # (2^-3)^2
        for c in cx.curves_at_level(3):
            p = cx.vertices[c.endpoints[0]]
            q = cx.vertices[c.endpoints[1]]
            assert p.squared_distance(q) == side2
            assert c.length == DyadicRational(1, 3)

    def test_child_triangles_partition_ids(self):
        cx = build_gasket(2)
        # triangle j at level m spawns children j + r*3^m at level m+1
        for m in range(2):
            for tri in cx.triangles[m]:
                j = tri.index - 1
                for r in range(3):
                    child = cx.triangles[m + 1][j + r * 3**m]
                    assert child.index - 1 == j + r * 3**m

    def test_orientation_cycles(self):
        cx = build_gasket(2)
        for m in range(3):
            for tri in cx.triangles[m]:
                base = kappa(m, tri.index - 1)
                bottom, right, left = (cx.curves[base + k] for k in range(3))
                # bottom ends where right starts, right ends where left starts
                assert bottom.endpoints[1] == right.endpoints[0]
                assert right.endpoints[1] == left.endpoints[0]
                assert left.endpoints[1] == bottom.endpoints[0]


class TestSerialization:
    def test_roundtrip(self):
        cx = build_gasket(3)
        data = complex_to_dict(cx)
        back = complex_from_dict(data)
        assert back.max_level == 3
        assert [v.key() for v in back.vertices] == [v.key() for v in cx.vertices]
        assert len(back.curves) == len(cx.curves)
        for c in cx.curves:
            b = back.curves[c.id]
            assert (b.level, b.kind, b.endpoints, b.length) == (
                c.level, c.kind, c.endpoints, c.length)

    def test_dict_shape(self):
        data = complex_to_dict(build_gasket(1))
        assert data["maxLevel"] == 1
        assert len(data["vertices"]) == 6
        assert all(len(v) == 4 for v in data["vertices"])
        assert {c["kind"] for c in data["curves"]} == {"bottom", "right", "left"}
