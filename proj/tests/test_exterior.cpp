#include <cmath>
#include <set>
#include <sstream>

#include "doctest.h"
#include "synbuild/exterior.hpp"

using namespace synbuild;

namespace {

ExteriorConfig plain_config() {
    ExteriorConfig cfg;
    cfg.p_merge = 0;
    cfg.p_extension = 0;
    cfg.supers = {0, 0, 0};
    return cfg;
}

ExteriorConfig box_config(RoofKind kind) {
    ExteriorConfig cfg = plain_config();
    cfg.stories_min = cfg.stories_max = 1;
    cfg.base_width_min_m = cfg.base_width_max_m = 10.0;
    cfg.base_depth_min_m = cfg.base_depth_max_m = 8.0;
    cfg.roof_kinds_enabled = {kind};
    cfg.roof_rise_min_m = cfg.roof_rise_max_m = 2.0;
    return cfg;
}

std::string serialize_hull(const BuildingHull& hull) {
    std::ostringstream os;
    os.precision(17);
    for (const auto& p : hull.wireframe.points) os << p.x << "," << p.y << "," << p.z << ";";
    for (const auto& f : hull.wireframe.faces) {
        for (int idx : f) os << idx << " ";
        os << "|";
    }
    for (auto [i, j] : hull.wireframe.adjacency.edges()) os << i << "-" << j << " ";
    return os.str();
}

BuildingHull must_generate(uint64_t seed, const ExteriorConfig& cfg) {
    auto r = generate_exterior(seed, cfg);
    REQUIRE_MESSAGE(r.has_value(), r.error());
    return r.take();
}

}  // namespace

TEST_CASE("one-story flat box: 8 corners, top face area 80") {
    auto hull = must_generate(11, box_config(RoofKind::Flat));
    CHECK(hull.wireframe.points.size() == 8);
    REQUIRE(hull.sampled_roof_faces.size() == 1);
    auto pts = face_loop_points(hull.wireframe, hull.sampled_roof_faces[0]);
    CHECK(face_area(pts) == doctest::Approx(80.0));
    CHECK(polygon_area(hull.floor_footprints[0]) == doctest::Approx(80.0));
}

TEST_CASE("pyramidal roof apex at centroid, wall_top + rise") {
    auto hull = must_generate(3, box_config(RoofKind::Pyramidal));
    double apex_z = 0;
    Point3 apex;
    for (const auto& p : hull.wireframe.points)
        if (p.z > apex_z) {
            apex_z = p.z;
            apex = p;
        }
    CHECK(apex_z == doctest::Approx(3.0 + 2.0));
    CHECK(apex.x == doctest::Approx(0.0));
    CHECK(apex.y == doctest::Approx(0.0));
}

TEST_CASE("gabled and hipped ridge heights are exactly wall_top + rise") {
    for (RoofKind kind : {RoofKind::Gabled, RoofKind::Hipped, RoofKind::Shed}) {
        auto cfg = box_config(kind);
        cfg.stories_min = cfg.stories_max = 2;
        auto hull = must_generate(17, cfg);
        double zmax = 0;
        for (const auto& p : hull.wireframe.points) zmax = std::max(zmax, p.z);
        CHECK(zmax == doctest::Approx(2 * 3.0 + 2.0));
    }
}

TEST_CASE("determinism: same seed gives identical hulls") {
    ExteriorConfig cfg;  // defaults with merges, extensions, superstructures
    for (uint64_t seed : {1ull, 2ull, 3ull}) {
        auto a = generate_exterior(seed, cfg);
        auto b = generate_exterior(seed, cfg);
        REQUIRE(a.has_value());
        REQUIRE(b.has_value());
        CHECK(serialize_hull(a.value()) == serialize_hull(b.value()));
    }
}

TEST_CASE("every generated hull is watertight and valid") {
    ExteriorConfig cfg;
    cfg.p_merge = 0.5;
    cfg.p_extension = 0.6;
    int built = 0;
    for (uint64_t seed = 0; seed < 40; ++seed) {
        auto r = generate_exterior(seed, cfg);
        if (!r) continue;
        ++built;
        const auto& hull = r.value();
        CHECK(check_watertight(hull.wireframe).has_value());
        CHECK(validate_wireframe(hull.wireframe).has_value());
        CHECK(hull.floor_footprints.size() == size_t(hull.plan.stories));
        // roof faces sit at or above the wall top
        for (int f : hull.sampled_roof_faces) {
            for (const auto& p : face_loop_points(hull.wireframe, f))
                CHECK(p.z >= hull.wall_top() - 1e-9);
        }
    }
    CHECK(built >= 35);  // the vast majority of seeds must build
}

TEST_CASE("append_extensions identity, additivity, and cap") {
    FootprintPolygon rect;
    rect.vertices = {{0, 0}, {10, 0}, {10, 8}, {0, 8}};

    auto same = append_extensions(rect, {}, 5);
    REQUIRE(same.has_value());
    CHECK(polygon_area(same.value()) == doctest::Approx(80.0));

    ExtensionSpec ext;
    ext.shape = ExtensionShape::Rectangular;
    ext.span_m = 2.0;
    ext.depth_m = 3.0;
    auto one = append_extensions(rect, {ext}, 7);
    REQUIRE(one.has_value());
    CHECK(polygon_area(one.value()) == doctest::Approx(86.0));

    std::vector<ExtensionSpec> five(5, ext);
    CHECK_FALSE(append_extensions(rect, five, 7).has_value());
}

TEST_CASE("extension area increases strictly with each extension") {
    FootprintPolygon rect;
    rect.vertices = {{0, 0}, {12, 0}, {12, 9}, {0, 9}};
    ExtensionSpec ext;
    ext.span_m = 2.5;
    ext.depth_m = 2.0;
    double prev = polygon_area(rect);
    for (int k = 1; k <= 4; ++k) {
        std::vector<ExtensionSpec> specs(size_t(k), ext);
        auto r = append_extensions(rect, specs, 99);
        REQUIRE(r.has_value());
        double area = polygon_area(r.value());
        CHECK(area > prev);
        prev = area;
    }
}

TEST_CASE("trapezoidal extension area matches the trapezoid formula") {
    FootprintPolygon rect;
    rect.vertices = {{0, 0}, {10, 0}, {10, 8}, {0, 8}};
    ExtensionSpec ext;
    ext.shape = ExtensionShape::Trapezoidal;
    ext.span_m = 4.0;
    ext.depth_m = 2.0;
    ext.taper_m = 0.5;
    auto r = append_extensions(rect, {ext}, 3);
    REQUIRE(r.has_value());
    // trapezoid: (4 + 3) / 2 * 2 = 7
    CHECK(polygon_area(r.value()) == doctest::Approx(80.0 + 7.0));
}

TEST_CASE("merge of two boxes sharing a full wall gives the union footprint") {
    auto cfg = box_config(RoofKind::Flat);
    auto a = must_generate(21, cfg);
    auto b = must_generate(22, cfg);
    // a spans x in [-5,5], y in [-4,4]; shift b so its west edge lands on x=5
    auto merged = merge_buildings(a, b, {10.0, 0.0});
    REQUIRE_MESSAGE(merged.has_value(), merged.error());
    CHECK(polygon_area(merged.value().floor_footprints[0]) == doctest::Approx(160.0));
    CHECK(check_watertight(merged.value().wireframe).has_value());

    // disjoint -> rejection
    CHECK_FALSE(merge_buildings(a, b, {25.0, 0.0}).has_value());
    // fully contained -> rejection
    auto small_cfg = box_config(RoofKind::Flat);
    small_cfg.base_width_min_m = small_cfg.base_width_max_m = 2.0;
    small_cfg.base_depth_min_m = small_cfg.base_depth_max_m = 2.0;
    auto tiny = must_generate(23, small_cfg);
    CHECK_FALSE(merge_buildings(a, tiny, {0.0, 0.0}).has_value());
}

TEST_CASE("merge requires matching story counts") {
    auto cfg1 = box_config(RoofKind::Flat);
    auto cfg2 = box_config(RoofKind::Flat);
    cfg2.stories_min = cfg2.stories_max = 2;
    auto a = must_generate(31, cfg1);
    auto b = must_generate(32, cfg2);
    CHECK_FALSE(merge_buildings(a, b, {10.0, 0.0}).has_value());
}

TEST_CASE("decompose_floors of a 3-story box") {
    auto cfg = box_config(RoofKind::Gabled);
    cfg.stories_min = cfg.stories_max = 3;
    auto hull = must_generate(41, cfg);
    auto slices = decompose_floors(hull);
    REQUIRE_MESSAGE(slices.has_value(), slices.error());
    REQUIRE(slices.value().size() == 3);
    for (int i = 0; i < 3; ++i) {
        const auto& s = slices.value()[size_t(i)];
        CHECK(s.z_base == doctest::Approx(i * 3.0));
        CHECK(s.z_top == doctest::Approx((i + 1) * 3.0));
        CHECK(polygon_area(s.footprint) == doctest::Approx(80.0));
        CHECK(polygons_congruent(s.footprint, hull.floor_footprints[size_t(i)]));
    }
}

TEST_CASE("decompose_floors sees a setback top floor") {
    // hand-built hull: 10x8 lower box (z 0..3), 6x8 upper box (z 3..6) flush west
    BuildingHull hull;
    WireframeGraph& g = hull.wireframe;
    auto quad = [&](Point3 a, Point3 b, Point3 c, Point3 d) {
        int base = int(g.points.size());
        g.points.push_back(a);
        g.points.push_back(b);
        g.points.push_back(c);
        g.points.push_back(d);
        g.faces.push_back({base, base + 1, base + 2, base + 3});
    };
    // lower walls (0..3)
    quad({0, 0, 0}, {10, 0, 0}, {10, 0, 3}, {0, 0, 3});
    quad({10, 0, 0}, {10, 8, 0}, {10, 8, 3}, {10, 0, 3});
    quad({10, 8, 0}, {0, 8, 0}, {0, 8, 3}, {10, 8, 3});
    quad({0, 8, 0}, {0, 0, 0}, {0, 0, 3}, {0, 8, 3});
    // upper walls (3..6), setback to x in [0,6]
    quad({0, 0, 3}, {6, 0, 3}, {6, 0, 6}, {0, 0, 6});
    quad({6, 0, 3}, {6, 8, 3}, {6, 8, 6}, {6, 0, 6});
    quad({6, 8, 3}, {0, 8, 3}, {0, 8, 6}, {6, 8, 6});
    quad({0, 8, 3}, {0, 0, 3}, {0, 0, 6}, {0, 8, 6});
    g.adjacency = AdjacencyMatrix(g.points.size());
    hull.floor_z = {0, 3, 6};
    hull.floor_footprints.resize(2);

    auto slices = decompose_floors(hull);
    REQUIRE_MESSAGE(slices.has_value(), slices.error());
    REQUIRE(slices.value().size() == 2);
    CHECK(polygon_area(slices.value()[0].footprint) == doctest::Approx(80.0));
    CHECK(polygon_area(slices.value()[1].footprint) == doctest::Approx(48.0));
    // top polygon strictly contained in the lower one
    for (const auto& v : slices.value()[1].footprint.vertices)
        CHECK(point_in_polygon(v, slices.value()[0].footprint));
}

TEST_CASE("invalid config is rejected") {
    ExteriorConfig cfg;
    cfg.stories_min = 3;
    cfg.stories_max = 1;
    CHECK_FALSE(generate_exterior(1, cfg).has_value());
    ExteriorConfig cfg2;
    cfg2.roof_kinds_enabled.clear();
    CHECK_FALSE(generate_exterior(1, cfg2).has_value());
}

TEST_CASE("merged hulls appear across seeds and stay watertight") {
    ExteriorConfig cfg;
    cfg.p_merge = 1.0;
    cfg.p_extension = 0.5;
    int merged_count = 0;
    for (uint64_t seed = 100; seed < 120; ++seed) {
        auto r = generate_exterior(seed, cfg);
        if (!r) continue;
        if (r.value().plan.regions.size() >= 2) {
            bool has_two_roots = false;
            int roots = 0;
            for (const auto& region : r.value().plan.regions)
                if (region.is_root) ++roots;
            has_two_roots = roots == 2;
            if (has_two_roots) ++merged_count;
        }
        CHECK(check_watertight(r.value().wireframe).has_value());
    }
    CHECK(merged_count >= 10);
}
