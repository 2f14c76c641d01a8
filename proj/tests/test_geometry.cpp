#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "synbuild/geometry.hpp"
#include "synbuild/rng.hpp"

using namespace synbuild;

namespace {

FootprintPolygon make_poly(std::initializer_list<Vec2> pts) {
    FootprintPolygon p;
    p.vertices = pts;
    return p;
}

FootprintPolygon unit_square() { return make_poly({{0, 0}, {1, 0}, {1, 1}, {0, 1}}); }

// Independent membership oracle: brute ray casting from far away in a skewed
// direction, counting proper crossings only. Boundary points are resolved by
// nudging inward along the polygon centroid direction.
bool brute_force_inside(const Vec2& p, const FootprintPolygon& poly) {
    const auto& v = poly.vertices;
    for (size_t i = 0; i < v.size(); ++i) {
        if (point_segment_distance(p, v[i], v[(i + 1) % v.size()]) <= 1e-9) return true;
    }
    Vec2 far{p.x + 1e4 * std::cos(0.123), p.y + 1e4 * std::sin(0.123)};
    int crossings = 0;
    for (size_t i = 0; i < v.size(); ++i) {
        Vec2 a = v[i], b = v[(i + 1) % v.size()];
        double d1 = (b - a).cross(p - a), d2 = (b - a).cross(far - a);
        double d3 = (far - p).cross(a - p), d4 = (far - p).cross(b - p);
        if (((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0))) ++crossings;
    }
    return crossings % 2 == 1;
}

FootprintPolygon random_convex_polygon(Rng& rng) {
    // radial construction around a center; always convex enough and simple
    int n = int(rng.range(3, 8));
    double r = rng.uniform(2.0, 6.0);
    std::vector<double> angles;
    for (int i = 0; i < n; ++i) angles.push_back(rng.uniform(0, 6.28318530717958648));
    std::sort(angles.begin(), angles.end());
    FootprintPolygon p;
    for (double a : angles) p.vertices.push_back({r * std::cos(a), r * std::sin(a)});
    if (polygon_signed_area(p) <= 0.5) return random_convex_polygon(rng);
    return p;
}

}  // namespace

TEST_CASE("polygon_area basics") {
    CHECK(polygon_area(unit_square()) == doctest::Approx(1.0));
    CHECK(polygon_area(make_poly({{0, 0}, {10, 0}, {10, 8}, {0, 8}})) == doctest::Approx(80.0));
    // right triangle, legs 3 and 4: shoelace by hand = 6
    CHECK(polygon_area(make_poly({{0, 0}, {3, 0}, {0, 4}})) == doctest::Approx(6.0));
    CHECK_THROWS(polygon_area(make_poly({{0, 0}, {1, 0}})));
    // CW input has negative signed area and is rejected
    CHECK_THROWS(polygon_area(make_poly({{0, 0}, {0, 1}, {1, 1}, {1, 0}})));
}

TEST_CASE("polygon validation flags self-intersection") {
    auto bad = make_poly({{0, 0}, {2, 2}, {2, 0}, {0, 2}});
    CHECK_FALSE(validate_polygon(bad).has_value());
    CHECK(validate_polygon(unit_square()).has_value());
}

TEST_CASE("point_in_polygon conventions") {
    auto sq = unit_square();
    CHECK(point_in_polygon({0.5, 0.5}, sq));
    CHECK_FALSE(point_in_polygon({2, 2}, sq));
    // vertex and edge points count as inside
    CHECK(point_in_polygon({0, 0}, sq));
    CHECK(point_in_polygon({0.5, 0.0}, sq));
}

TEST_CASE("point_in_polygon matches brute-force ray casting") {
    Rng rng(42);
    for (int trial = 0; trial < 60; ++trial) {
        auto poly = random_convex_polygon(rng);
        for (int k = 0; k < 40; ++k) {
            Vec2 p{rng.uniform(-7, 7), rng.uniform(-7, 7)};
            CHECK(point_in_polygon(p, poly) == brute_force_inside(p, poly));
        }
    }
}

TEST_CASE("rasterize_polygon pixel-center membership") {
    // 2m x 2m square at scale 1 m/px on a 4x4 grid, centered: pixel centers at
    // -0.5, 0.5, 1.5, 2.5 in each axis; only 0.5 and 1.5 fall inside.
    auto sq = make_poly({{0, 0}, {2, 0}, {2, 2}, {0, 2}});
    auto r = rasterize_polygon(sq, 1.0, 4);
    REQUIRE(r.has_value());
    CHECK(r.value().bitmap.count_ones() == 4);
    CHECK(r.value().bitmap.at(1, 1) == 1);
    CHECK(r.value().bitmap.at(2, 2) == 1);
    CHECK(r.value().bitmap.at(0, 0) == 0);

    // too small a grid -> rejection with required-size diagnostic
    auto fail = rasterize_polygon(make_poly({{0, 0}, {10, 0}, {10, 10}, {0, 10}}), 1.0, 4);
    CHECK_FALSE(fail.has_value());
    CHECK(fail.error().find("px") != std::string::npos);

    // determinism
    auto r2 = rasterize_polygon(sq, 1.0, 4);
    CHECK(r.value().bitmap == r2.value().bitmap);
}

TEST_CASE("rasterized area converges to polygon area") {
    Rng rng(7);
    for (int trial = 0; trial < 12; ++trial) {
        auto poly = random_convex_polygon(rng);
        double area = polygon_area(poly);
        double scale = 0.05;
        Vec2 lo, hi;
        polygon_bbox(poly, lo, hi);
        int grid = int(std::ceil(std::max(hi.x - lo.x, hi.y - lo.y) / scale)) + 4;
        auto r = rasterize_polygon(poly, scale, grid);
        REQUIRE(r.has_value());
        double approx = scale * scale * double(r.value().bitmap.count_ones());
        CHECK(std::abs(approx - area) / area < 0.02);
    }
}

TEST_CASE("adjacency matrix invariants") {
    AdjacencyMatrix adj(4);
    adj.connect(0, 1);
    adj.connect(1, 2);
    adj.connect(3, 0);
    CHECK(adj.symmetric_zero_diag());
    CHECK(adj.edge_count() == 3);
    CHECK(adj.at(1, 0) == 1);
    adj.connect(2, 2);  // no-op
    CHECK(adj.symmetric_zero_diag());
    CHECK(adj.edges().size() == 3);
}

TEST_CASE("wireframe validation catches duplicates and non-planar faces") {
    WireframeGraph g;
    g.points = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}};
    g.adjacency = AdjacencyMatrix(4);
    g.adjacency.connect(0, 1);
    g.faces = {{0, 1, 2, 3}};
    CHECK(validate_wireframe(g).has_value());

    WireframeGraph dup = g;
    dup.points.push_back({0, 0, 5e-5});
    dup.adjacency = AdjacencyMatrix(5);
    CHECK_FALSE(validate_wireframe(dup).has_value());

    WireframeGraph bent = g;
    bent.points[2].z = 0.1;
    CHECK_FALSE(validate_wireframe(bent).has_value());
}

TEST_CASE("triangulate_face identity and quad split") {
    std::vector<Point3> tri = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
    auto rt = triangulate_face(tri);
    REQUIRE(rt.has_value());
    CHECK(rt.value().size() == 1);

    std::vector<Point3> quad = {{0, 0, 1}, {4, 0, 1}, {4, 3, 1}, {0, 3, 1}};
    auto rq = triangulate_face(quad);
    REQUIRE(rq.has_value());
    CHECK(rq.value().size() == 2);
    double sum = 0;
    for (const auto& t : rq.value()) sum += t.area();
    CHECK(sum == doctest::Approx(12.0).epsilon(1e-9));

    std::vector<Point3> lifted = {{0, 0, 0}, {4, 0, 0}, {4, 3, 0.1}, {0, 3, 0}};
    CHECK_FALSE(triangulate_face(lifted).has_value());
}

TEST_CASE("triangulate_face conserves area on random planar loops") {
    Rng rng(99);
    for (int trial = 0; trial < 100; ++trial) {
        auto poly = random_convex_polygon(rng);
        // lift into a tilted plane: z = ax + by + c
        double a = rng.uniform(-0.5, 0.5), b = rng.uniform(-0.5, 0.5), c = rng.uniform(0, 3);
        std::vector<Point3> loop;
        for (const auto& v : poly.vertices) loop.push_back({v.x, v.y, a * v.x + b * v.y + c});
        auto r = triangulate_face(loop, 1e-9 + face_planarity_deviation(loop));
        REQUIRE(r.has_value());
        double sum = 0;
        for (const auto& t : r.value()) sum += t.area();
        double ref = face_area(loop);
        CHECK(std::abs(sum - ref) <= 1e-9 * std::max(1.0, ref));
    }
}

TEST_CASE("polygon congruence under translation and cyclic shift") {
    auto a = make_poly({{0, 0}, {4, 0}, {4, 3}, {0, 3}});
    auto b = make_poly({{14, 3}, {10, 3}, {10, 0}, {14, 0}});  // shifted + reversed start
    CHECK(polygons_congruent(a, b));
    auto c = make_poly({{0, 0}, {5, 0}, {5, 3}, {0, 3}});
    CHECK_FALSE(polygons_congruent(a, c));
}
