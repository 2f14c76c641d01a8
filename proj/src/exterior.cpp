#include "synbuild/exterior.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace synbuild {

const char* roof_kind_name(RoofKind k) {
    switch (k) {
        case RoofKind::Flat: return "flat";
        case RoofKind::Gabled: return "gabled";
        case RoofKind::Hipped: return "hipped";
        case RoofKind::Pyramidal: return "pyramidal";
        case RoofKind::Shed: return "shed";
    }
    return "flat";
}

std::optional<RoofKind> roof_kind_from_name(const std::string& name) {
    if (name == "flat") return RoofKind::Flat;
    if (name == "gabled") return RoofKind::Gabled;
    if (name == "hipped") return RoofKind::Hipped;
    if (name == "pyramidal") return RoofKind::Pyramidal;
    if (name == "shed") return RoofKind::Shed;
    return std::nullopt;
}

Result<bool> ExteriorConfig::validate() const {
    if (stories_min < 1 || stories_max < stories_min)
        return Result<bool>::fail("stories range empty or inconsistent");
    if (base_width_min_m <= 0 || base_width_max_m < base_width_min_m)
        return Result<bool>::fail("base width range empty or inconsistent");
    if (base_depth_min_m <= 0 || base_depth_max_m < base_depth_min_m)
        return Result<bool>::fail("base depth range empty or inconsistent");
    if (floor_height_m <= 0) return Result<bool>::fail("floor height must be positive");
    if (roof_kinds_enabled.empty()) return Result<bool>::fail("no roof kinds enabled");
    if (roof_rise_min_m <= 0 || roof_rise_max_m < roof_rise_min_m)
        return Result<bool>::fail("roof rise range empty or inconsistent");
    if (max_extensions < 0 || max_extensions > 4)
        return Result<bool>::fail("max_extensions outside [0,4]");
    return Result<bool>::ok(true);
}

namespace {

constexpr double kQuantum = 1e-7;  // vertex pool resolution, meters

struct VertexKey {
    int64_t x, y, z;
    auto operator<=>(const VertexKey&) const = default;
};

VertexKey quantize(const Point3& p) {
    return {llround(p.x / kQuantum), llround(p.y / kQuantum), llround(p.z / kQuantum)};
}

// Deduplicating vertex pool; std::map keeps ids deterministic.
class VertexPool {
public:
    int add(const Point3& p) {
        VertexKey k = quantize(p);
        auto it = index_.find(k);
        if (it != index_.end()) return it->second;
        int id = int(points_.size());
        points_.push_back(p);
        index_.emplace(k, id);
        return id;
    }
    const std::vector<Point3>& points() const { return points_; }

private:
    std::vector<Point3> points_;
    std::map<VertexKey, int> index_;
};

struct FaceBuilder {
    VertexPool pool;
    std::vector<std::vector<int>> faces;
    std::vector<FaceRole> roles;
    std::vector<int> face_region;  // owning region, -1 for walls/ground/supers

    int add_face(const std::vector<Point3>& loop, FaceRole role, int region = -1) {
        std::vector<int> ids;
        ids.reserve(loop.size());
        for (const auto& p : loop) {
            int id = pool.add(p);
            if (!ids.empty() && ids.back() == id) continue;
            ids.push_back(id);
        }
        while (ids.size() > 1 && ids.front() == ids.back()) ids.pop_back();
        faces.push_back(std::move(ids));
        roles.push_back(role);
        face_region.push_back(region);
        return int(faces.size()) - 1;
    }

    std::vector<Point3> face_points(int f) const {
        std::vector<Point3> pts;
        for (int idx : faces[size_t(f)]) pts.push_back(pool.points()[size_t(idx)]);
        return pts;
    }
};

double edge_param(const Vec2& a, const Vec2& b, const Vec2& p) {
    Vec2 ab = b - a;
    double len2 = ab.dot(ab);
    return len2 > 0 ? (p - a).dot(ab) / len2 : 0.0;
}

bool on_edge(const Vec2& a, const Vec2& b, const Vec2& p, double eps = 1e-6) {
    if (point_segment_distance(p, a, b) > eps) return false;
    double t = edge_param(a, b, p);
    return t > -1e-9 && t < 1.0 + 1e-9;
}

// Sorted interior breakpoints (stored contact endpoints) on the edge a->b.
std::vector<Vec2> edge_breakpoints(const Vec2& a, const Vec2& b,
                                   const std::vector<HullContact>& contacts) {
    std::vector<std::pair<double, Vec2>> ts;
    for (const auto& c : contacts) {
        for (const Vec2& p : {c.a, c.b}) {
            if (!on_edge(a, b, p)) continue;
            double t = edge_param(a, b, p);
            if (t > 1e-9 && t < 1.0 - 1e-9) ts.emplace_back(t, p);
        }
    }
    std::sort(ts.begin(), ts.end(),
              [](const auto& l, const auto& r) { return l.first < r.first; });
    std::vector<Vec2> out;
    for (auto& [t, p] : ts) {
        if (!out.empty() && distance(out.back(), p) < 1e-9) continue;
        out.push_back(p);
    }
    return out;
}

Point3 lift(const Vec2& v, double z) { return {v.x, v.y, z}; }

// Appends a plus any breakpoints; the caller appends b (or continues).
void emit_run(std::vector<Point3>& loop, const Vec2& a, const Vec2& b, double z,
              const std::vector<HullContact>& contacts) {
    loop.push_back(lift(a, z));
    for (const auto& p : edge_breakpoints(a, b, contacts)) loop.push_back(lift(p, z));
}

struct RectSides {
    double x0, x1, y0, y1;
    Vec2 sw() const { return {x0, y0}; }
    Vec2 se() const { return {x1, y0}; }
    Vec2 ne() const { return {x1, y1}; }
    Vec2 nw() const { return {x0, y1}; }
};

bool rect_sides(const FootprintPolygon& poly, RectSides& out) {
    if (poly.vertices.size() != 4) return false;
    Vec2 lo, hi;
    polygon_bbox(poly, lo, hi);
    for (const auto& v : poly.vertices) {
        bool on_x = std::abs(v.x - lo.x) < 1e-9 || std::abs(v.x - hi.x) < 1e-9;
        bool on_y = std::abs(v.y - lo.y) < 1e-9 || std::abs(v.y - hi.y) < 1e-9;
        if (!on_x || !on_y) return false;
    }
    out = {lo.x, hi.x, lo.y, hi.y};
    return true;
}

// Edges of an axis-aligned root rectangle with no vertical face above the
// wall top; only these may carry region-to-region contacts. 0=S 1=E 2=N 3=W.
std::array<bool, 4> eave_sides(RoofKind kind, double w, double d) {
    switch (kind) {
        case RoofKind::Flat:
        case RoofKind::Hipped:
        case RoofKind::Pyramidal:
            return {true, true, true, true};
        case RoofKind::Gabled:
            return w >= d ? std::array<bool, 4>{true, false, true, false}
                          : std::array<bool, 4>{false, true, false, true};
        case RoofKind::Shed:
            return {true, false, false, false};
    }
    return {true, true, true, true};
}

int rect_side_of_edge(const RectSides& r, const Vec2& a, const Vec2& b) {
    Vec2 m = (a + b) * 0.5;
    if (std::abs(m.y - r.y0) < 1e-6) return 0;
    if (std::abs(m.x - r.x1) < 1e-6) return 1;
    if (std::abs(m.y - r.y1) < 1e-6) return 2;
    if (std::abs(m.x - r.x0) < 1e-6) return 3;
    return -1;
}

void build_rect_roof(FaceBuilder& fb, const HullRegion& region, int region_idx, double h,
                     const std::vector<HullContact>& contacts) {
    RectSides r{};
    if (!rect_sides(region.poly, r)) return;
    const double w = r.x1 - r.x0, d = r.y1 - r.y0;
    const double rise = region.roof.rise_m;
    const double cx = (r.x0 + r.x1) * 0.5, cy = (r.y0 + r.y1) * 0.5;

    auto run = [&](std::vector<Point3>& loop, Vec2 a, Vec2 b) {
        emit_run(loop, a, b, h, contacts);
    };

    switch (region.roof.kind) {
        case RoofKind::Flat: {
            std::vector<Point3> cap;
            run(cap, r.sw(), r.se());
            run(cap, r.se(), r.ne());
            run(cap, r.ne(), r.nw());
            run(cap, r.nw(), r.sw());
            fb.add_face(cap, FaceRole::RoofCap, region_idx);
            break;
        }
        case RoofKind::Gabled: {
            if (w >= d) {  // ridge along x
                Point3 r0{r.x0, cy, h + rise}, r1{r.x1, cy, h + rise};
                std::vector<Point3> south, north, west, east;
                run(south, r.sw(), r.se());
                south.push_back(lift(r.se(), h));
                south.push_back(r1);
                south.push_back(r0);
                fb.add_face(south, FaceRole::RoofSlope, region_idx);
                run(north, r.ne(), r.nw());
                north.push_back(lift(r.nw(), h));
                north.push_back(r0);
                north.push_back(r1);
                fb.add_face(north, FaceRole::RoofSlope, region_idx);
                run(west, r.nw(), r.sw());
                west.push_back(lift(r.sw(), h));
                west.push_back(r0);
                fb.add_face(west, FaceRole::GableWall, region_idx);
                run(east, r.se(), r.ne());
                east.push_back(lift(r.ne(), h));
                east.push_back(r1);
                fb.add_face(east, FaceRole::GableWall, region_idx);
            } else {  // ridge along y
                Point3 r0{cx, r.y0, h + rise}, r1{cx, r.y1, h + rise};
                std::vector<Point3> south, north, west, east;
                run(east, r.se(), r.ne());
                east.push_back(lift(r.ne(), h));
                east.push_back(r1);
                east.push_back(r0);
                fb.add_face(east, FaceRole::RoofSlope, region_idx);
                run(west, r.nw(), r.sw());
                west.push_back(lift(r.sw(), h));
                west.push_back(r0);
                west.push_back(r1);
                fb.add_face(west, FaceRole::RoofSlope, region_idx);
                run(south, r.sw(), r.se());
                south.push_back(lift(r.se(), h));
                south.push_back(r0);
                fb.add_face(south, FaceRole::GableWall, region_idx);
                run(north, r.ne(), r.nw());
                north.push_back(lift(r.nw(), h));
                north.push_back(r1);
                fb.add_face(north, FaceRole::GableWall, region_idx);
            }
            break;
        }
        case RoofKind::Hipped: {
            bool ridge_x = w >= d;
            double inset = std::min((ridge_x ? d : w) * 0.5, (ridge_x ? w : d) * 0.45);
            Point3 r0 = ridge_x ? Point3{r.x0 + inset, cy, h + rise}
                                : Point3{cx, r.y0 + inset, h + rise};
            Point3 r1 = ridge_x ? Point3{r.x1 - inset, cy, h + rise}
                                : Point3{cx, r.y1 - inset, h + rise};
            std::vector<Point3> south, east, north, west;
            run(south, r.sw(), r.se());
            south.push_back(lift(r.se(), h));
            south.push_back(ridge_x ? r1 : r0);
            if (ridge_x) south.push_back(r0);
            fb.add_face(south, FaceRole::RoofSlope, region_idx);
            run(east, r.se(), r.ne());
            east.push_back(lift(r.ne(), h));
            east.push_back(r1);
            if (!ridge_x) east.push_back(r0);
            fb.add_face(east, FaceRole::RoofSlope, region_idx);
            run(north, r.ne(), r.nw());
            north.push_back(lift(r.nw(), h));
            north.push_back(ridge_x ? r0 : r1);
            if (ridge_x) north.push_back(r1);
            fb.add_face(north, FaceRole::RoofSlope, region_idx);
            run(west, r.nw(), r.sw());
            west.push_back(lift(r.sw(), h));
            west.push_back(r0);
            if (!ridge_x) west.push_back(r1);
            fb.add_face(west, FaceRole::RoofSlope, region_idx);
            break;
        }
        case RoofKind::Pyramidal: {
            Point3 apex{cx, cy, h + rise};
            const Vec2 corners[4] = {r.sw(), r.se(), r.ne(), r.nw()};
            for (int i = 0; i < 4; ++i) {
                std::vector<Point3> tri;
                run(tri, corners[i], corners[(i + 1) % 4]);
                tri.push_back(lift(corners[(i + 1) % 4], h));
                tri.push_back(apex);
                fb.add_face(tri, FaceRole::RoofSlope, region_idx);
            }
            break;
        }
        case RoofKind::Shed: {
            // plane rising from the south eave (z=h) to the north edge (z=h+rise)
            Point3 nw_top{r.x0, r.y1, h + rise}, ne_top{r.x1, r.y1, h + rise};
            std::vector<Point3> slope, back, west, east;
            run(slope, r.sw(), r.se());
            slope.push_back(lift(r.se(), h));
            slope.push_back(ne_top);
            slope.push_back(nw_top);
            fb.add_face(slope, FaceRole::RoofSlope, region_idx);
            run(back, r.ne(), r.nw());
            back.push_back(lift(r.nw(), h));
            back.push_back(nw_top);
            back.push_back(ne_top);
            fb.add_face(back, FaceRole::GableWall, region_idx);
            run(west, r.nw(), r.sw());
            west.push_back(lift(r.sw(), h));
            west.push_back(nw_top);
            fb.add_face(west, FaceRole::GableWall, region_idx);
            run(east, r.se(), r.ne());
            east.push_back(lift(r.ne(), h));
            east.push_back(ne_top);
            fb.add_face(east, FaceRole::GableWall, region_idx);
            break;
        }
    }
}

void build_flat_cap(FaceBuilder& fb, const HullRegion& region, int region_idx, double h,
                    const std::vector<HullContact>& contacts) {
    std::vector<Point3> cap;
    const auto& v = region.poly.vertices;
    for (size_t i = 0; i < v.size(); ++i) emit_run(cap, v[i], v[(i + 1) % v.size()], h, contacts);
    fb.add_face(cap, FaceRole::RoofCap, region_idx);
}

struct FacePlane {
    Point3 normal;  // unit
    Point3 anchor;
    double z_at(const Vec2& p) const {
        return anchor.z - (normal.x * (p.x - anchor.x) + normal.y * (p.y - anchor.y)) / normal.z;
    }
};

FacePlane face_plane(const std::vector<Point3>& pts) {
    Point3 n = face_normal(pts);
    double len = n.norm();
    FacePlane fp;
    fp.normal = len > 0 ? n * (1.0 / len) : Point3{0, 0, 1};
    Point3 c{0, 0, 0};
    for (const auto& p : pts) c = c + p;
    fp.anchor = c * (1.0 / double(pts.size()));
    return fp;
}

FootprintPolygon plan_projection(const std::vector<Point3>& pts) {
    FootprintPolygon poly;
    for (const auto& p : pts) poly.vertices.push_back({p.x, p.y});
    if (polygon_signed_area(poly) < 0) std::reverse(poly.vertices.begin(), poly.vertices.end());
    return poly;
}

bool inside_with_margin(const Vec2& p, const FootprintPolygon& poly, double margin) {
    if (!point_in_polygon(p, poly)) return false;
    const auto& v = poly.vertices;
    for (size_t i = 0; i < v.size(); ++i)
        if (point_segment_distance(p, v[i], v[(i + 1) % v.size()]) < margin) return false;
    return true;
}

void place_chimney(FaceBuilder& fb, const std::vector<Point3>& face_pts, Rng rng) {
    FacePlane plane = face_plane(face_pts);
    if (std::abs(plane.normal.z) < 0.2) return;
    FootprintPolygon proj = plan_projection(face_pts);
    const double half = 0.25, height = 0.9, margin = 0.3;
    Vec2 lo, hi;
    polygon_bbox(proj, lo, hi);
    for (int attempt = 0; attempt < 8; ++attempt) {
        Vec2 c{rng.uniform(lo.x, hi.x), rng.uniform(lo.y, hi.y)};
        Vec2 corners[4] = {{c.x - half, c.y - half},
                           {c.x + half, c.y - half},
                           {c.x + half, c.y + half},
                           {c.x - half, c.y + half}};
        bool ok = true;
        for (const auto& q : corners)
            if (!inside_with_margin(q, proj, margin)) ok = false;
        if (!ok) continue;
        Point3 base[4];
        double zmax = -1e300;
        for (int i = 0; i < 4; ++i) {
            base[i] = {corners[i].x, corners[i].y, plane.z_at(corners[i])};
            zmax = std::max(zmax, base[i].z);
        }
        double ztop = zmax + height;
        Point3 top[4];
        for (int i = 0; i < 4; ++i) top[i] = {base[i].x, base[i].y, ztop};
        fb.add_face({base[3], base[2], base[1], base[0]}, FaceRole::SuperWall);
        for (int i = 0; i < 4; ++i) {
            int j = (i + 1) % 4;
            fb.add_face({base[i], base[j], top[j], top[i]}, FaceRole::SuperWall);
        }
        fb.add_face({top[0], top[1], top[2], top[3]}, FaceRole::SuperRoof);
        return;
    }
}

void place_dormer(FaceBuilder& fb, const std::vector<Point3>& face_pts, Rng rng) {
    FacePlane plane = face_plane(face_pts);
    double nz = std::abs(plane.normal.z);
    if (nz < 0.2 || nz > 0.98) return;  // needs a real slope
    FootprintPolygon proj = plan_projection(face_pts);
    Vec2 grad{-plane.normal.x / plane.normal.z, -plane.normal.y / plane.normal.z};
    double g = grad.norm();
    if (g < 0.15) return;
    Vec2 down = grad * (-1.0 / g);  // plan direction of decreasing roof height
    Vec2 across = down.rot_cw();

    const double width = 1.2, wall_rise = 0.7, apex_rise = 0.4, clearance = 0.12;
    const double margin = 0.25;
    Vec2 lo, hi;
    polygon_bbox(proj, lo, hi);
    for (int attempt = 0; attempt < 10; ++attempt) {
        Vec2 f{rng.uniform(lo.x, hi.x), rng.uniform(lo.y, hi.y)};
        double zb = plane.z_at(f) + clearance;
        Vec2 pl = f + across * (width / 2), pr = f - across * (width / 2);
        // front profile: base left/right, wall tops, apex
        Point3 front[5] = {
            {pl.x, pl.y, zb},
            {pr.x, pr.y, zb},
            {pr.x, pr.y, zb + wall_rise},
            {f.x, f.y, zb + wall_rise + apex_rise},
            {pl.x, pl.y, zb + wall_rise},
        };
        Point3 back[5];
        bool ok = true;
        for (int i = 0; i < 5 && ok; ++i) {
            Vec2 fp2{front[i].x, front[i].y};
            double t = (front[i].z - plane.z_at(fp2)) / g;  // uphill run to the plane
            if (t <= 0.05) {
                ok = false;
                break;
            }
            Vec2 b2 = fp2 - down * t;
            back[i] = {b2.x, b2.y, front[i].z};
            if (!inside_with_margin(b2, proj, margin) || !inside_with_margin(fp2, proj, margin))
                ok = false;
        }
        if (!ok) continue;
        fb.add_face({front[0], front[1], front[2], front[3], front[4]}, FaceRole::SuperWall);
        fb.add_face({back[4], back[3], back[2], back[1], back[0]}, FaceRole::SuperWall);
        for (int i = 0; i < 5; ++i) {
            int j = (i + 1) % 5;
            FaceRole role = (i == 2 || i == 3) ? FaceRole::SuperRoof : FaceRole::SuperWall;
            fb.add_face({front[i], front[j], back[j], back[i]}, role);
        }
        return;
    }
}

bool place_roof_window(const std::vector<Point3>& face_pts, Rng rng,
                       std::array<Point3, 4>& out) {
    FacePlane plane = face_plane(face_pts);
    double nz = std::abs(plane.normal.z);
    if (nz < 0.2 || nz > 0.98) return false;
    FootprintPolygon proj = plan_projection(face_pts);
    Point3 n = plane.normal;
    Point3 u{-n.y, n.x, 0};
    double ul = u.norm();
    if (ul < 1e-9) return false;
    u = u * (1.0 / ul);
    Point3 v = n.cross(u);  // in-plane, along the slope
    const double hw = 0.5, hh = 0.4, margin = 0.2;
    Vec2 lo, hi;
    polygon_bbox(proj, lo, hi);
    for (int attempt = 0; attempt < 10; ++attempt) {
        Vec2 c2{rng.uniform(lo.x, hi.x), rng.uniform(lo.y, hi.y)};
        Point3 c{c2.x, c2.y, plane.z_at(c2)};
        Point3 quad[4] = {c - u * hw - v * hh, c + u * hw - v * hh, c + u * hw + v * hh,
                          c - u * hw + v * hh};
        bool ok = true;
        for (const auto& q : quad)
            if (!inside_with_margin({q.x, q.y}, proj, margin)) ok = false;
        if (!ok) continue;
        out = {quad[0], quad[1], quad[2], quad[3]};
        return true;
    }
    return false;
}

}  // namespace

std::vector<Point3> face_loop_points(const WireframeGraph& g, int face_index) {
    std::vector<Point3> pts;
    for (int idx : g.faces[size_t(face_index)]) pts.push_back(g.points[size_t(idx)]);
    return pts;
}

Result<bool> check_watertight(const WireframeGraph& g) {
    std::map<std::pair<int, int>, int> incidence;
    for (const auto& loop : g.faces) {
        for (size_t i = 0; i < loop.size(); ++i) {
            int a = loop[i], b = loop[(i + 1) % loop.size()];
            if (a == b) continue;
            incidence[{std::min(a, b), std::max(a, b)}]++;
        }
    }
    for (const auto& [edge, count] : incidence) {
        if (count != 2) {
            std::ostringstream os;
            os << "edge (" << edge.first << "," << edge.second << ") bounds " << count
               << " faces, expected 2";
            return Result<bool>::fail(os.str());
        }
    }
    return Result<bool>::ok(true);
}

Result<BuildingHull> compile_hull(const HullPlan& plan) {
    if (plan.regions.empty()) return Result<BuildingHull>::fail("plan has no regions");
    if (plan.stories < 1) return Result<BuildingHull>::fail("plan needs at least one story");
    auto uv = validate_polygon(plan.union_poly);
    if (!uv) return Result<BuildingHull>::fail("union footprint invalid: " + uv.error());

    const double h = plan.wall_top();
    FaceBuilder fb;

    // ground, reversed so the normal points down
    {
        std::vector<Point3> ground;
        const auto& v = plan.union_poly.vertices;
        for (size_t i = v.size(); i-- > 0;) ground.push_back(lift(v[i], 0.0));
        fb.add_face(ground, FaceRole::Ground);
    }
    // one wall quad per union boundary edge
    {
        const auto& v = plan.union_poly.vertices;
        for (size_t i = 0; i < v.size(); ++i) {
            const Vec2& a = v[i];
            const Vec2& b = v[(i + 1) % v.size()];
            fb.add_face({lift(a, 0), lift(b, 0), lift(b, h), lift(a, h)}, FaceRole::Wall);
        }
    }
    for (size_t r = 0; r < plan.regions.size(); ++r) {
        const auto& region = plan.regions[r];
        if (region.is_root && region.roof.kind != RoofKind::Flat) {
            RectSides rect{};
            if (!rect_sides(region.poly, rect))
                return Result<BuildingHull>::fail("root region is not an axis-aligned rectangle");
            build_rect_roof(fb, region, int(r), h, plan.contacts);
        } else {
            build_flat_cap(fb, region, int(r), h, plan.contacts);
        }
    }

    // superstructures per root region, targeting that region's roof faces
    std::vector<std::array<Point3, 4>> roof_windows;
    {
        Rng super_rng(plan.super_seed);
        int root_ordinal = 0;
        for (size_t r = 0; r < plan.regions.size(); ++r) {
            if (!plan.regions[r].is_root) continue;
            std::vector<int> candidates;
            for (size_t f = 0; f < fb.faces.size(); ++f) {
                if (fb.face_region[f] == int(r) &&
                    (fb.roles[f] == FaceRole::RoofSlope || fb.roles[f] == FaceRole::RoofCap))
                    candidates.push_back(int(f));
            }
            Rng rng = super_rng.stream("root", uint64_t(root_ordinal++));
            if (candidates.empty()) continue;
            if (rng.stream("chimney?").bernoulli(plan.supers.p_chimney)) {
                int f = candidates[size_t(rng.stream("chimney_face").below(candidates.size()))];
                place_chimney(fb, fb.face_points(f), rng.stream("chimney_place"));
            }
            if (rng.stream("dormer?").bernoulli(plan.supers.p_dormer)) {
                int f = candidates[size_t(rng.stream("dormer_face").below(candidates.size()))];
                place_dormer(fb, fb.face_points(f), rng.stream("dormer_place"));
            }
            if (rng.stream("roofwin?").bernoulli(plan.supers.p_roof_window)) {
                int f = candidates[size_t(rng.stream("roofwin_face").below(candidates.size()))];
                std::array<Point3, 4> quad;
                if (place_roof_window(fb.face_points(f), rng.stream("roofwin_place"), quad))
                    roof_windows.push_back(quad);
            }
        }
    }

    BuildingHull hull;
    hull.wireframe.points = fb.pool.points();
    hull.wireframe.faces = fb.faces;
    hull.face_roles = fb.roles;
    hull.wireframe.adjacency = AdjacencyMatrix(hull.wireframe.points.size());
    for (const auto& loop : hull.wireframe.faces) {
        for (size_t i = 0; i < loop.size(); ++i)
            hull.wireframe.adjacency.connect(size_t(loop[i]),
                                             size_t(loop[(i + 1) % loop.size()]));
    }
    for (size_t f = 0; f < fb.roles.size(); ++f) {
        FaceRole role = fb.roles[f];
        if (role == FaceRole::RoofSlope || role == FaceRole::RoofCap ||
            role == FaceRole::SuperRoof)
            hull.sampled_roof_faces.push_back(int(f));
        if (role != FaceRole::Ground && role != FaceRole::Wall)
            hull.roof_stream_faces.push_back(int(f));
    }
    hull.floor_footprints.assign(size_t(plan.stories), plan.union_poly);
    for (int i = 0; i <= plan.stories; ++i) hull.floor_z.push_back(i * plan.floor_height_m);
    hull.roof_window_quads = std::move(roof_windows);
    hull.plan = plan;

    auto wt = check_watertight(hull.wireframe);
    if (!wt) return Result<BuildingHull>::fail("hull not watertight: " + wt.error());
    auto wf = validate_wireframe(hull.wireframe);
    if (!wf) return Result<BuildingHull>::fail("hull wireframe invalid: " + wf.error());
    return Result<BuildingHull>::ok(std::move(hull));
}

namespace {

struct PlacedExtension {
    FootprintPolygon region_poly;
    HullContact contact;
    size_t edge;
    std::vector<Vec2> detour;
};

Result<PlacedExtension> place_extension(const FootprintPolygon& fp, size_t edge,
                                        const ExtensionSpec& spec, double t_center) {
    const auto& v = fp.vertices;
    Vec2 a = v[edge], b = v[(edge + 1) % v.size()];
    double len = distance(a, b);
    if (spec.span_m <= 0 || spec.depth_m <= 0)
        return Result<PlacedExtension>::fail("extension dimensions must be positive");
    double span_frac = spec.span_m / len;
    double t0 = t_center - span_frac / 2, t1 = t_center + span_frac / 2;
    if (t0 < 0.04 || t1 > 0.96)
        return Result<PlacedExtension>::fail("extension does not fit on edge");
    double taper = spec.shape == ExtensionShape::Trapezoidal ? spec.taper_m : 0.0;
    if (taper * 2 >= spec.span_m * 0.9)
        return Result<PlacedExtension>::fail("taper too large for span");
    Vec2 dir = (b - a) * (1.0 / len);
    Vec2 n = dir.rot_cw();  // outward for CCW polygons
    Vec2 p0 = a + (b - a) * t0;
    Vec2 p1 = a + (b - a) * t1;
    Vec2 o0 = p0 + n * spec.depth_m + dir * taper;
    Vec2 o1 = p1 + n * spec.depth_m - dir * taper;
    PlacedExtension out;
    out.edge = edge;
    out.detour = {o0, o1};
    out.contact = {p0, p1};
    out.region_poly.vertices = {p0, o0, o1, p1};
    if (!validate_polygon(out.region_poly))
        return Result<PlacedExtension>::fail("extension region degenerate");
    return Result<PlacedExtension>::ok(std::move(out));
}

// Splices detours into the polygon in one pass; placements are keyed by the
// edge index of the ORIGINAL polygon.
FootprintPolygon splice_all(const FootprintPolygon& base,
                            const std::vector<PlacedExtension>& placed) {
    FootprintPolygon result;
    const auto& v = base.vertices;
    for (size_t i = 0; i < v.size(); ++i) {
        result.vertices.push_back(v[i]);
        for (const auto& pe : placed) {
            if (pe.edge != i) continue;
            if (distance(pe.contact.a, v[i]) > 1e-9) result.vertices.push_back(pe.contact.a);
            for (const auto& d : pe.detour) result.vertices.push_back(d);
            if (distance(pe.contact.b, v[(i + 1) % v.size()]) > 1e-9)
                result.vertices.push_back(pe.contact.b);
        }
    }
    return result;
}

}  // namespace

Result<FootprintPolygon> append_extensions(const FootprintPolygon& footprint,
                                           const std::vector<ExtensionSpec>& extensions,
                                           uint64_t seed) {
    auto valid = validate_polygon(footprint);
    if (!valid) return Result<FootprintPolygon>::fail(valid.error());
    if (extensions.size() > 4)
        return Result<FootprintPolygon>::fail("at most four extensions are supported");
    if (extensions.empty()) return Result<FootprintPolygon>::ok(footprint);

    Rng rng(seed);
    const size_t n = footprint.vertices.size();
    std::vector<size_t> edges(n);
    for (size_t i = 0; i < n; ++i) edges[i] = i;
    rng.stream("edge_order").shuffle(edges);

    std::vector<PlacedExtension> placed;
    size_t edge_cursor = 0;
    for (size_t k = 0; k < extensions.size(); ++k) {
        const auto& spec = extensions[k];
        bool ok = false;
        Rng place_rng = rng.stream("place", k);
        for (int attempt = 0; attempt < 12 && !ok; ++attempt) {
            if (edge_cursor >= edges.size()) break;
            size_t edge = edges[edge_cursor];
            double len =
                distance(footprint.vertices[edge], footprint.vertices[(edge + 1) % n]);
            if (len < spec.span_m * 1.15) {
                ++edge_cursor;
                continue;
            }
            double margin = spec.span_m / len / 2 + 0.05;
            double t_center = place_rng.uniform(margin, 1.0 - margin);
            auto attempt_result = place_extension(footprint, edge, spec, t_center);
            if (attempt_result) {
                // reject placements whose detour would cross earlier ones
                FootprintPolygon probe = splice_all(footprint, placed);
                std::vector<PlacedExtension> with = placed;
                with.push_back(attempt_result.value());
                probe = splice_all(footprint, with);
                if (validate_polygon(probe)) {
                    placed.push_back(attempt_result.take());
                    ++edge_cursor;
                    ok = true;
                }
            }
        }
        if (!ok)
            return Result<FootprintPolygon>::fail(
                "extension placement failed after bounded attempts");
    }

    FootprintPolygon result = splice_all(footprint, placed);
    auto rv = validate_polygon(result);
    if (!rv) return Result<FootprintPolygon>::fail("extended footprint invalid: " + rv.error());
    if (polygon_area(result) <= polygon_area(footprint))
        return Result<FootprintPolygon>::fail("extension did not increase area");
    return Result<FootprintPolygon>::ok(std::move(result));
}

namespace {

// Does the contact sit on an edge where the owning region raises no vertical
// face above the wall top?
bool contact_edge_is_eave(const HullPlan& plan, const HullContact& c) {
    for (const auto& region : plan.regions) {
        const auto& v = region.poly.vertices;
        for (size_t i = 0; i < v.size(); ++i) {
            const Vec2& a = v[i];
            const Vec2& b = v[(i + 1) % v.size()];
            if (!on_edge(a, b, c.a) || !on_edge(a, b, c.b)) continue;
            if (!region.is_root || region.roof.kind == RoofKind::Flat) return true;
            RectSides r{};
            if (!rect_sides(region.poly, r)) return false;
            int side = rect_side_of_edge(r, a, b);
            if (side < 0) return false;
            return eave_sides(region.roof.kind, r.x1 - r.x0, r.y1 - r.y0)[size_t(side)];
        }
    }
    return false;
}

bool strictly_inside(const Vec2& p, const FootprintPolygon& poly) {
    if (!point_in_polygon(p, poly)) return false;
    const auto& v = poly.vertices;
    for (size_t i = 0; i < v.size(); ++i)
        if (point_segment_distance(p, v[i], v[(i + 1) % v.size()]) <= 1e-9) return false;
    return true;
}

}  // namespace

Result<BuildingHull> merge_buildings(const BuildingHull& a, const BuildingHull& b, Vec2 offset) {
    if (a.plan.stories != b.plan.stories)
        return Result<BuildingHull>::fail("merge requires equal story counts");
    if (std::abs(a.plan.floor_height_m - b.plan.floor_height_m) > 1e-9)
        return Result<BuildingHull>::fail("merge requires equal floor heights");

    HullPlan pb = b.plan;
    for (auto& region : pb.regions)
        for (auto& v : region.poly.vertices) v = v + offset;
    for (auto& c : pb.contacts) {
        c.a = c.a + offset;
        c.b = c.b + offset;
    }
    for (auto& v : pb.union_poly.vertices) v = v + offset;

    const auto& ua = a.plan.union_poly.vertices;
    const auto& ub = pb.union_poly.vertices;

    for (const auto& v : ub)
        if (strictly_inside(v, a.plan.union_poly))
            return Result<BuildingHull>::fail(
                "footprints overlap; only flush wall contact is supported");
    for (const auto& v : ua)
        if (strictly_inside(v, pb.union_poly))
            return Result<BuildingHull>::fail(
                "footprints overlap or one contains the other");

    // shared wall segment: anti-parallel collinear edges with real overlap
    struct Found {
        size_t edge_a, edge_b;
        Vec2 u, v;
    };
    std::optional<Found> found;
    for (size_t i = 0; i < ua.size() && !found; ++i) {
        Vec2 p = ua[i], q = ua[(i + 1) % ua.size()];
        Vec2 dir = (q - p).normalized();
        for (size_t j = 0; j < ub.size(); ++j) {
            Vec2 r = ub[j], s = ub[(j + 1) % ub.size()];
            Vec2 dir_b = (s - r).normalized();
            if (dir.dot(dir_b) > -0.999999) continue;
            if (std::abs((r - p).cross(dir)) > 1e-6 || std::abs((s - p).cross(dir)) > 1e-6)
                continue;
            double tr = edge_param(p, q, r), ts = edge_param(p, q, s);
            double lo = std::max(0.0, std::min(tr, ts));
            double hi = std::min(1.0, std::max(tr, ts));
            double len = distance(p, q);
            if ((hi - lo) * len < 0.3) continue;
            found = Found{i, j, p + (q - p) * lo, p + (q - p) * hi};
            break;
        }
    }
    if (!found) return Result<BuildingHull>::fail("disjoint footprints: no shared wall segment");

    HullContact contact{found->u, found->v};
    if (!contact_edge_is_eave(a.plan, contact))
        return Result<BuildingHull>::fail("contact lies on a gable-end edge of the first hull");
    if (!contact_edge_is_eave(pb, contact))
        return Result<BuildingHull>::fail("contact lies on a gable-end edge of the second hull");

    // union boundary: walk a until the contact, detour around b CCW, resume
    FootprintPolygon merged;
    {
        std::vector<Vec2> detour;
        for (size_t k = 0; k < ub.size(); ++k) {
            Vec2 w = ub[(found->edge_b + 1 + k) % ub.size()];
            if (distance(w, found->u) < 1e-9 || distance(w, found->v) < 1e-9) continue;
            detour.push_back(w);
        }
        Vec2 p = ua[found->edge_a], q = ua[(found->edge_a + 1) % ua.size()];
        for (size_t k = 0; k < ua.size(); ++k) {
            merged.vertices.push_back(ua[k]);
            if (k == found->edge_a) {
                if (distance(found->u, p) > 1e-9) merged.vertices.push_back(found->u);
                for (const auto& w : detour) merged.vertices.push_back(w);
                if (distance(found->v, q) > 1e-9) merged.vertices.push_back(found->v);
            }
        }
    }
    auto mv = validate_polygon(merged);
    if (!mv) return Result<BuildingHull>::fail("merged footprint invalid: " + mv.error());

    HullPlan plan;
    plan.regions = a.plan.regions;
    for (const auto& region : pb.regions) plan.regions.push_back(region);
    plan.contacts = a.plan.contacts;
    for (const auto& c : pb.contacts) plan.contacts.push_back(c);
    plan.contacts.push_back(contact);
    plan.union_poly = merged;
    plan.stories = a.plan.stories;
    plan.floor_height_m = a.plan.floor_height_m;
    plan.super_seed = hash_u64(a.plan.super_seed, pb.super_seed);
    plan.supers = a.plan.supers;
    return compile_hull(plan);
}

Result<BuildingHull> generate_exterior(uint64_t seed, const ExteriorConfig& config) {
    auto cv = config.validate();
    if (!cv) return Result<BuildingHull>::fail("config invalid: " + cv.error());

    Rng rng(seed);
    double w = rng.stream("base_w").uniform(config.base_width_min_m, config.base_width_max_m);
    double d = rng.stream("base_d").uniform(config.base_depth_min_m, config.base_depth_max_m);
    int stories = int(rng.stream("stories").range(config.stories_min, config.stories_max));
    RoofKind kind = rng.stream("roof_kind").pick(config.roof_kinds_enabled);
    double rise = kind == RoofKind::Flat
                      ? 0.0
                      : rng.stream("roof_rise").uniform(config.roof_rise_min_m,
                                                        config.roof_rise_max_m);

    HullRegion base;
    base.poly.vertices = {{-w / 2, -d / 2}, {w / 2, -d / 2}, {w / 2, d / 2}, {-w / 2, d / 2}};
    base.roof = {kind, rise};
    base.is_root = true;

    HullPlan plan;
    plan.regions = {base};
    plan.union_poly = base.poly;
    plan.stories = stories;
    plan.floor_height_m = config.floor_height_m;
    plan.super_seed = hash_str(seed, "supers");
    plan.supers = config.supers;

    bool want_merge = rng.stream("merge?").bernoulli(config.p_merge);
    int merge_edge = -1;
    if (want_merge) {
        auto eaves = eave_sides(kind, w, d);
        std::vector<int> options;
        for (int i = 0; i < 4; ++i)
            if (eaves[size_t(i)]) options.push_back(i);
        if (!options.empty())
            merge_edge = options[size_t(rng.stream("merge_edge").below(options.size()))];
    }

    // extensions on the base rectangle, distinct edges, never the merge edge
    std::vector<PlacedExtension> placed;
    {
        Rng ext_rng = rng.stream("ext");
        int k = 0;
        for (int i = 0; i < config.max_extensions; ++i)
            if (ext_rng.stream("count", uint64_t(i)).bernoulli(config.p_extension)) ++k;
        k = std::min(k, merge_edge >= 0 ? 3 : 4);
        std::vector<size_t> edges;
        for (size_t i = 0; i < 4; ++i)
            if (int(i) != merge_edge) edges.push_back(i);
        ext_rng.stream("edges").shuffle(edges);
        int attached = 0;
        for (size_t i = 0; i < edges.size() && attached < k; ++i) {
            size_t edge = edges[i];
            double edge_len =
                distance(base.poly.vertices[edge], base.poly.vertices[(edge + 1) % 4]);
            Rng er = ext_rng.stream("spec", uint64_t(edge));
            ExtensionSpec spec;
            spec.shape = er.stream("shape").bernoulli(0.5) ? ExtensionShape::Trapezoidal
                                                           : ExtensionShape::Rectangular;
            spec.span_m = std::max(1.2, er.stream("span").uniform(0.25, 0.55) * edge_len);
            if (spec.span_m > edge_len * 0.8) spec.span_m = edge_len * 0.8;
            spec.depth_m = er.stream("depth").uniform(1.5, 4.0);
            spec.taper_m = spec.shape == ExtensionShape::Trapezoidal
                               ? er.stream("taper").uniform(0.12, 0.28) * spec.span_m
                               : 0.0;
            for (int attempt = 0; attempt < 8; ++attempt) {
                double margin = spec.span_m / edge_len / 2 + 0.05;
                if (margin >= 0.5) break;
                double t_center =
                    er.stream("pos", uint64_t(attempt)).uniform(margin, 1.0 - margin);
                auto placement = place_extension(base.poly, edge, spec, t_center);
                if (!placement) continue;
                std::vector<PlacedExtension> with = placed;
                with.push_back(placement.value());
                FootprintPolygon probe = splice_all(base.poly, with);
                if (!validate_polygon(probe)) continue;
                placed.push_back(placement.take());
                ++attached;
                break;
            }
        }
        for (const auto& pe : placed) {
            HullRegion ext_region;
            ext_region.poly = pe.region_poly;
            ext_region.roof = {RoofKind::Flat, 0.0};
            ext_region.is_root = false;
            plan.regions.push_back(ext_region);
            plan.contacts.push_back(pe.contact);
        }
        plan.union_poly = splice_all(base.poly, placed);
    }

    auto base_hull = compile_hull(plan);
    if (!base_hull) return base_hull;
    if (merge_edge < 0) return base_hull;

    // merge partner: an axis-aligned rectangle flush against the chosen edge
    Rng mr = rng.stream("partner");
    const auto& bv = base.poly.vertices;
    Vec2 ea = bv[size_t(merge_edge)], eb = bv[(size_t(merge_edge) + 1) % 4];
    double edge_len = distance(ea, eb);
    double contact_len = mr.stream("len").uniform(0.55, 0.95) * edge_len;
    double start = mr.stream("start").uniform(0.0, edge_len - contact_len);
    double depth = mr.stream("depth").uniform(4.0, 10.0);
    Vec2 dir = (eb - ea) * (1.0 / edge_len);
    Vec2 n = dir.rot_cw();
    Vec2 c0 = ea + dir * start;
    Vec2 c1 = c0 + dir * contact_len;
    HullRegion partner;
    partner.poly.vertices = {c0, c0 + n * depth, c1 + n * depth, c1};
    if (polygon_signed_area(partner.poly) < 0)
        std::reverse(partner.poly.vertices.begin(), partner.poly.vertices.end());
    partner.is_root = true;
    {
        RectSides pr{};
        rect_sides(partner.poly, pr);
        double pw = pr.x1 - pr.x0, pd = pr.y1 - pr.y0;
        int contact_side = rect_side_of_edge(pr, c0, c1);
        std::vector<RoofKind> kinds;
        for (RoofKind kk : config.roof_kinds_enabled) {
            auto e = eave_sides(kk, pw, pd);
            if (contact_side >= 0 && e[size_t(contact_side)]) kinds.push_back(kk);
        }
        if (kinds.empty()) kinds.push_back(RoofKind::Hipped);
        partner.roof.kind = mr.stream("roof_kind").pick(kinds);
        partner.roof.rise_m = partner.roof.kind == RoofKind::Flat
                                  ? 0.0
                                  : mr.stream("roof_rise").uniform(config.roof_rise_min_m,
                                                                   config.roof_rise_max_m);
    }
    HullPlan partner_plan;
    partner_plan.regions = {partner};
    partner_plan.union_poly = partner.poly;
    partner_plan.stories = stories;
    partner_plan.floor_height_m = config.floor_height_m;
    partner_plan.super_seed = hash_str(seed, "partner_supers");
    partner_plan.supers = config.supers;
    auto partner_hull = compile_hull(partner_plan);
    if (!partner_hull) return base_hull;  // keep the unmerged hull

    auto merged = merge_buildings(base_hull.value(), partner_hull.value(), {0, 0});
    if (!merged) return base_hull;
    return merged;
}

namespace {

struct SegKey {
    int64_t x, y;
    auto operator<=>(const SegKey&) const = default;
};

SegKey key2(const Vec2& v) { return {llround(v.x / kQuantum), llround(v.y / kQuantum)}; }

}  // namespace

Result<std::vector<FloorSlice>> decompose_floors(const BuildingHull& hull) {
    std::vector<FloorSlice> out;
    for (size_t floor = 0; floor + 1 < hull.floor_z.size(); ++floor) {
        double z0 = hull.floor_z[floor];
        double z1 = hull.floor_z[floor + 1];
        double zmid = 0.5 * (z0 + z1);
        std::vector<std::pair<Vec2, Vec2>> segments;
        for (const auto& loop : hull.wireframe.faces) {
            std::vector<Vec2> hits;
            for (size_t i = 0; i < loop.size(); ++i) {
                const Point3& p = hull.wireframe.points[size_t(loop[i])];
                const Point3& q = hull.wireframe.points[size_t(loop[(i + 1) % loop.size()])];
                if ((p.z - zmid) * (q.z - zmid) < 0) {
                    double t = (zmid - p.z) / (q.z - p.z);
                    hits.push_back({p.x + t * (q.x - p.x), p.y + t * (q.y - p.y)});
                }
            }
            if (hits.size() == 2) {
                segments.emplace_back(hits[0], hits[1]);
            } else if (!hits.empty()) {
                return Result<std::vector<FloorSlice>>::fail(
                    "unexpected face crossing at floor mid-height");
            }
        }
        if (segments.empty())
            return Result<std::vector<FloorSlice>>::fail("no section at floor mid-height");
        std::map<SegKey, std::vector<size_t>> by_end;
        for (size_t s = 0; s < segments.size(); ++s) {
            by_end[key2(segments[s].first)].push_back(s);
            by_end[key2(segments[s].second)].push_back(s);
        }
        std::vector<bool> used(segments.size(), false);
        FootprintPolygon poly;
        Vec2 stop = segments[0].first;
        Vec2 at = segments[0].second;
        poly.vertices.push_back(stop);
        used[0] = true;
        size_t guard = 0;
        while (distance(at, stop) > 1e-7 && guard++ <= segments.size()) {
            poly.vertices.push_back(at);
            auto it = by_end.find(key2(at));
            if (it == by_end.end())
                return Result<std::vector<FloorSlice>>::fail("open section contour");
            bool advanced = false;
            for (size_t s : it->second) {
                if (used[s]) continue;
                used[s] = true;
                at = distance(segments[s].first, at) < 1e-7 ? segments[s].second
                                                            : segments[s].first;
                advanced = true;
                break;
            }
            if (!advanced)
                return Result<std::vector<FloorSlice>>::fail("open section contour");
        }
        if (polygon_signed_area(poly) < 0)
            std::reverse(poly.vertices.begin(), poly.vertices.end());
        FloorSlice slice;
        slice.footprint = poly;
        slice.z_base = z0;
        slice.z_top = z1;
        out.push_back(std::move(slice));
    }
    return Result<std::vector<FloorSlice>>::ok(std::move(out));
}

}  // namespace synbuild
