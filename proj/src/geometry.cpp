#include "synbuild/geometry.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "synbuild/labels.hpp"

namespace synbuild {

const char* label_name(int id) {
    switch (id) {
        case kUnset: return "unset";
        case kLivingRoom: return "living_room";
        case kMasterRoom: return "master_room";
        case kKitchen: return "kitchen";
        case kBathroom: return "bathroom";
        case kDiningRoom: return "dining_room";
        case kChildRoom: return "child_room";
        case kStudyRoom: return "study_room";
        case kSecondRoom: return "second_room";
        case kGuestRoom: return "guest_room";
        case kBalcony: return "balcony";
        case kEntrance: return "entrance";
        case kStorage: return "storage";
        case kWallIn: return "wall_in";
        case kExternal: return "external";
        case kExteriorWall: return "exterior_wall";
        case kInteriorWall: return "interior_wall";
        case kFrontDoor: return "front_door";
        case kInteriorDoor: return "interior_door";
        case kOpenWall: return "open_wall";
        case kWindow: return "window";
        case kBalconyDoor: return "balcony_door";
        default: return "invalid";
    }
}

double polygon_signed_area(const FootprintPolygon& poly) {
    const auto& v = poly.vertices;
    double sum = 0.0;
    for (size_t i = 0; i < v.size(); ++i) {
        const Vec2& a = v[i];
        const Vec2& b = v[(i + 1) % v.size()];
        sum += a.x * b.y - b.x * a.y;
    }
    return 0.5 * sum;
}

double polygon_area(const FootprintPolygon& poly) {
    if (poly.vertices.size() < 3) throw std::invalid_argument("polygon_area: fewer than 3 vertices");
    double a = polygon_signed_area(poly);
    if (a <= 0.0) throw std::invalid_argument("polygon_area: zero or negative area (not CCW?)");
    return a;
}

Vec2 polygon_centroid(const FootprintPolygon& poly) {
    const auto& v = poly.vertices;
    double a = polygon_signed_area(poly);
    if (std::abs(a) < 1e-300) {
        Vec2 c{0, 0};
        for (const auto& p : v) c = c + p;
        return c * (1.0 / double(v.size()));
    }
    double cx = 0, cy = 0;
    for (size_t i = 0; i < v.size(); ++i) {
        const Vec2& p = v[i];
        const Vec2& q = v[(i + 1) % v.size()];
        double w = p.x * q.y - q.x * p.y;
        cx += (p.x + q.x) * w;
        cy += (p.y + q.y) * w;
    }
    return {cx / (6.0 * a), cy / (6.0 * a)};
}

void polygon_bbox(const FootprintPolygon& poly, Vec2& lo, Vec2& hi) {
    lo = {1e300, 1e300};
    hi = {-1e300, -1e300};
    for (const auto& p : poly.vertices) {
        lo.x = std::min(lo.x, p.x);
        lo.y = std::min(lo.y, p.y);
        hi.x = std::max(hi.x, p.x);
        hi.y = std::max(hi.y, p.y);
    }
}

namespace {

bool segments_properly_intersect(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
    auto orient = [](const Vec2& p, const Vec2& q, const Vec2& r) {
        double v = (q - p).cross(r - p);
        if (v > 1e-12) return 1;
        if (v < -1e-12) return -1;
        return 0;
    };
    int o1 = orient(a, b, c), o2 = orient(a, b, d);
    int o3 = orient(c, d, a), o4 = orient(c, d, b);
    return o1 != o2 && o3 != o4 && o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0;
}

}  // namespace

bool polygon_is_simple(const FootprintPolygon& poly) {
    const auto& v = poly.vertices;
    size_t n = v.size();
    if (n < 3) return false;
    for (size_t i = 0; i < n; ++i) {
        size_t i2 = (i + 1) % n;
        for (size_t j = i + 1; j < n; ++j) {
            size_t j2 = (j + 1) % n;
            if (i == j || i2 == j || i == j2) continue;  // adjacent edges share a vertex
            if (segments_properly_intersect(v[i], v[i2], v[j], v[j2])) return false;
        }
    }
    return true;
}

Result<bool> validate_polygon(const FootprintPolygon& poly) {
    if (poly.vertices.size() < 3) return Result<bool>::fail("polygon has fewer than 3 vertices");
    for (const auto& p : poly.vertices)
        if (!std::isfinite(p.x) || !std::isfinite(p.y))
            return Result<bool>::fail("polygon has non-finite vertex");
    double a = polygon_signed_area(poly);
    if (a <= 1e-12) return Result<bool>::fail("polygon area is not strictly positive CCW");
    if (!polygon_is_simple(poly)) return Result<bool>::fail("polygon self-intersects");
    return Result<bool>::ok(true);
}

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
    Vec2 ab = b - a;
    double len2 = ab.dot(ab);
    if (len2 <= 0.0) return distance(p, a);
    double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
    return distance(p, a + ab * t);
}

bool point_in_polygon(const Vec2& p, const FootprintPolygon& poly) {
    const auto& v = poly.vertices;
    size_t n = v.size();
    // On-boundary counts as inside.
    for (size_t i = 0; i < n; ++i) {
        if (point_segment_distance(p, v[i], v[(i + 1) % n]) <= 1e-9) return true;
    }
    bool inside = false;
    for (size_t i = 0; i < n; ++i) {
        const Vec2& a = v[i];
        const Vec2& b = v[(i + 1) % n];
        if ((a.y > p.y) != (b.y > p.y)) {
            double xint = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if (p.x < xint) inside = !inside;
        }
    }
    return inside;
}

bool polygons_congruent(const FootprintPolygon& a, const FootprintPolygon& b, double eps) {
    size_t n = a.vertices.size();
    if (n != b.vertices.size()) return false;
    Vec2 ca = polygon_centroid(a), cb = polygon_centroid(b);
    auto match = [&](bool reversed) {
        for (size_t shift = 0; shift < n; ++shift) {
            bool ok = true;
            for (size_t i = 0; i < n && ok; ++i) {
                size_t bi = reversed ? (shift + n - i) % n : (shift + i) % n;
                Vec2 pa = a.vertices[i] - ca;
                Vec2 pb = b.vertices[bi] - cb;
                if (distance(pa, pb) > eps) ok = false;
            }
            if (ok) return true;
        }
        return false;
    };
    return match(false) || match(true);
}

int64_t BinaryBitmap::count_ones() const {
    return std::accumulate(bits.begin(), bits.end(), int64_t(0));
}

double auto_fit_scale(const FootprintPolygon& poly, int grid_size, int margin_px) {
    Vec2 lo, hi;
    polygon_bbox(poly, lo, hi);
    double extent = std::max(hi.x - lo.x, hi.y - lo.y);
    int usable = grid_size - 2 * margin_px;
    if (usable <= 0) throw std::invalid_argument("auto_fit_scale: margin leaves no usable pixels");
    return extent / double(usable);
}

Result<RasterizedPolygon> rasterize_polygon(const FootprintPolygon& poly, double scale,
                                            int grid_size) {
    auto valid = validate_polygon(poly);
    if (!valid) return Result<RasterizedPolygon>::fail(valid.error());
    if (scale <= 0.0) return Result<RasterizedPolygon>::fail("scale must be positive");
    Vec2 lo, hi;
    polygon_bbox(poly, lo, hi);
    double span = grid_size * scale;
    if (hi.x - lo.x > span || hi.y - lo.y > span) {
        int needed = int(std::ceil(std::max(hi.x - lo.x, hi.y - lo.y) / scale));
        std::ostringstream os;
        os << "polygon does not fit: needs a " << needed << "px grid at scale " << scale
           << ", got " << grid_size << "px";
        return Result<RasterizedPolygon>::fail(os.str());
    }
    RasterizedPolygon out;
    out.frame.scale = scale;
    Vec2 center{(lo.x + hi.x) * 0.5, (lo.y + hi.y) * 0.5};
    out.frame.origin = {center.x - span * 0.5, center.y - span * 0.5};
    out.bitmap = BinaryBitmap(grid_size, grid_size);
    for (int j = 0; j < grid_size; ++j) {
        for (int i = 0; i < grid_size; ++i) {
            if (point_in_polygon(out.frame.pixel_center(i, j), poly)) out.bitmap.set(i, j, 1);
        }
    }
    return Result<RasterizedPolygon>::ok(std::move(out));
}

bool AdjacencyMatrix::symmetric_zero_diag() const {
    for (size_t i = 0; i < n_; ++i) {
        if (bits_[i * n_ + i] != 0) return false;
        for (size_t j = i + 1; j < n_; ++j) {
            if (bits_[i * n_ + j] != bits_[j * n_ + i]) return false;
        }
    }
    return true;
}

int64_t AdjacencyMatrix::edge_count() const {
    int64_t total = std::accumulate(bits_.begin(), bits_.end(), int64_t(0));
    return total / 2;
}

std::vector<std::pair<int, int>> AdjacencyMatrix::edges() const {
    std::vector<std::pair<int, int>> out;
    for (size_t i = 0; i < n_; ++i)
        for (size_t j = i + 1; j < n_; ++j)
            if (bits_[i * n_ + j]) out.emplace_back(int(i), int(j));
    return out;
}

Point3 face_normal(const std::vector<Point3>& pts) {
    Point3 n{0, 0, 0};
    for (size_t i = 0; i < pts.size(); ++i) {
        const Point3& a = pts[i];
        const Point3& b = pts[(i + 1) % pts.size()];
        n.x += (a.y - b.y) * (a.z + b.z);
        n.y += (a.z - b.z) * (a.x + b.x);
        n.z += (a.x - b.x) * (a.y + b.y);
    }
    return n;
}

double face_area(const std::vector<Point3>& pts) { return 0.5 * face_normal(pts).norm(); }

double face_planarity_deviation(const std::vector<Point3>& pts) {
    if (pts.size() <= 3) return 0.0;
    Point3 n = face_normal(pts);
    double len = n.norm();
    if (len <= 0.0) return 0.0;
    n = n * (1.0 / len);
    Point3 c{0, 0, 0};
    for (const auto& p : pts) c = c + p;
    c = c * (1.0 / double(pts.size()));
    double worst = 0.0;
    for (const auto& p : pts) worst = std::max(worst, std::abs((p - c).dot(n)));
    return worst;
}

Result<bool> validate_wireframe(const WireframeGraph& g, double eps_merge, double eps_plane) {
    size_t n = g.points.size();
    if (g.adjacency.size() != n) return Result<bool>::fail("adjacency dimension != point count");
    if (!g.adjacency.symmetric_zero_diag())
        return Result<bool>::fail("adjacency not symmetric with zero diagonal");
    for (size_t i = 0; i < n; ++i)
        if (!g.points[i].finite()) return Result<bool>::fail("non-finite point");
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i + 1; j < n; ++j) {
            if (distance(g.points[i], g.points[j]) < eps_merge) {
                std::ostringstream os;
                os << "points " << i << " and " << j << " closer than merge tolerance";
                return Result<bool>::fail(os.str());
            }
        }
    }
    for (size_t f = 0; f < g.faces.size(); ++f) {
        const auto& loop = g.faces[f];
        if (loop.size() < 3) return Result<bool>::fail("face with fewer than 3 vertices");
        std::vector<Point3> pts;
        for (int idx : loop) {
            if (idx < 0 || size_t(idx) >= n) return Result<bool>::fail("face index out of range");
            pts.push_back(g.points[size_t(idx)]);
        }
        if (face_planarity_deviation(pts) > eps_plane) {
            std::ostringstream os;
            os << "face " << f << " non-planar beyond tolerance";
            return Result<bool>::fail(os.str());
        }
    }
    return Result<bool>::ok(true);
}

Result<std::vector<Triangle3>> triangulate_face(const std::vector<Point3>& loop,
                                                double eps_plane) {
    if (loop.size() < 3) return Result<std::vector<Triangle3>>::fail("loop has fewer than 3 vertices");
    if (face_planarity_deviation(loop) > eps_plane)
        return Result<std::vector<Triangle3>>::fail("loop non-planar beyond tolerance");
    if (loop.size() == 3)
        return Result<std::vector<Triangle3>>::ok({Triangle3{loop[0], loop[1], loop[2]}});

    // Project to the dominant plane, keeping a consistent winding.
    Point3 n = face_normal(loop);
    double ax = std::abs(n.x), ay = std::abs(n.y), az = std::abs(n.z);
    auto project = [&](const Point3& p) -> Vec2 {
        if (az >= ax && az >= ay) return n.z >= 0 ? Vec2{p.x, p.y} : Vec2{p.y, p.x};
        if (ax >= ay) return n.x >= 0 ? Vec2{p.y, p.z} : Vec2{p.z, p.y};
        return n.y >= 0 ? Vec2{p.z, p.x} : Vec2{p.x, p.z};
    };

    std::vector<int> idx(loop.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::vector<Vec2> flat(loop.size());
    for (size_t i = 0; i < loop.size(); ++i) flat[i] = project(loop[i]);

    auto tri_area2 = [&](int a, int b, int c) {
        return (flat[b] - flat[a]).cross(flat[c] - flat[a]);
    };
    auto point_in_tri = [&](const Vec2& p, int a, int b, int c) {
        double d1 = (flat[b] - flat[a]).cross(p - flat[a]);
        double d2 = (flat[c] - flat[b]).cross(p - flat[b]);
        double d3 = (flat[a] - flat[c]).cross(p - flat[c]);
        bool has_neg = (d1 < -1e-12) || (d2 < -1e-12) || (d3 < -1e-12);
        bool has_pos = (d1 > 1e-12) || (d2 > 1e-12) || (d3 > 1e-12);
        return !(has_neg && has_pos);
    };

    std::vector<Triangle3> tris;
    std::vector<int> poly = idx;
    int guard = 0;
    const int guard_max = int(loop.size() * loop.size()) + 16;
    while (poly.size() > 3 && guard++ < guard_max) {
        bool clipped = false;
        for (size_t i = 0; i < poly.size(); ++i) {
            int prev = poly[(i + poly.size() - 1) % poly.size()];
            int curr = poly[i];
            int next = poly[(i + 1) % poly.size()];
            if (tri_area2(prev, curr, next) <= 1e-12) continue;  // reflex or degenerate
            bool contains_other = false;
            for (int other : poly) {
                if (other == prev || other == curr || other == next) continue;
                if (point_in_tri(flat[other], prev, curr, next)) {
                    contains_other = true;
                    break;
                }
            }
            if (contains_other) continue;
            tris.push_back(Triangle3{loop[size_t(prev)], loop[size_t(curr)], loop[size_t(next)]});
            poly.erase(poly.begin() + long(i));
            clipped = true;
            break;
        }
        if (!clipped) return Result<std::vector<Triangle3>>::fail("ear clipping failed (non-simple loop?)");
    }
    if (poly.size() == 3)
        tris.push_back(Triangle3{loop[size_t(poly[0])], loop[size_t(poly[1])], loop[size_t(poly[2])]});
    return Result<std::vector<Triangle3>>::ok(std::move(tris));
}

}  // namespace synbuild
