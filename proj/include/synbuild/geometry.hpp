#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "synbuild/result.hpp"

namespace synbuild {

// Node-uniqueness tolerance in meters. Two points closer than this are the
// same node.
constexpr double kEpsMerge = 1e-4;
// Face coplanarity tolerance in meters.
constexpr double kEpsPlane = 1e-6;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double cross(const Vec2& o) const { return x * o.y - y * o.x; }
    double norm() const { return std::sqrt(x * x + y * y); }
    Vec2 normalized() const {
        double n = norm();
        return n > 0 ? Vec2{x / n, y / n} : Vec2{0, 0};
    }
    // 90 degrees clockwise; the outward normal of a CCW polygon edge.
    Vec2 rot_cw() const { return {y, -x}; }
};

struct Point3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Point3 operator+(const Point3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Point3 operator-(const Point3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Point3 operator*(double s) const { return {x * s, y * s, z * s}; }
    double dot(const Point3& o) const { return x * o.x + y * o.y + z * o.z; }
    Point3 cross(const Point3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    double norm() const { return std::sqrt(x * x + y * y + z * z); }
    bool finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }
};

inline double distance(const Point3& a, const Point3& b) { return (a - b).norm(); }
inline double distance(const Vec2& a, const Vec2& b) { return (a - b).norm(); }

// Simple polygon in meters, counter-clockwise, used for footprints and
// horizontal hull sections.
struct FootprintPolygon {
    std::vector<Vec2> vertices;

    size_t size() const { return vertices.size(); }
    const Vec2& operator[](size_t i) const { return vertices[i]; }
    Vec2 edge_dir(size_t i) const {
        return (vertices[(i + 1) % vertices.size()] - vertices[i]);
    }
};

// Validity: >=3 vertices, CCW, strictly positive area, no self-intersection.
Result<bool> validate_polygon(const FootprintPolygon& poly);
double polygon_signed_area(const FootprintPolygon& poly);
double polygon_area(const FootprintPolygon& poly);  // throws on degenerate input
Vec2 polygon_centroid(const FootprintPolygon& poly);
void polygon_bbox(const FootprintPolygon& poly, Vec2& lo, Vec2& hi);
bool polygon_is_simple(const FootprintPolygon& poly);

// Even-odd membership; points on the boundary count as inside.
bool point_in_polygon(const Vec2& p, const FootprintPolygon& poly);

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b);

// True when the two polygons match vertex-for-vertex after translating both
// by their centroids, under some cyclic shift (either orientation).
bool polygons_congruent(const FootprintPolygon& a, const FootprintPolygon& b,
                        double eps = kEpsMerge);

struct BinaryBitmap {
    int width = 0;
    int height = 0;
    std::vector<uint8_t> bits;  // row-major, values 0/1

    BinaryBitmap() = default;
    BinaryBitmap(int w, int h) : width(w), height(h), bits(size_t(w) * h, 0) {}

    uint8_t at(int x, int y) const { return bits[size_t(y) * width + x]; }
    void set(int x, int y, uint8_t v) { bits[size_t(y) * width + x] = v; }
    bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }
    int64_t count_ones() const;
    bool operator==(const BinaryBitmap& o) const = default;
};

// Maps pixel indices to world coordinates: the center of pixel (i,j) sits at
// origin + (i+0.5, j+0.5) * scale.
struct GridFrame {
    double scale = 1.0;  // meters per pixel
    Vec2 origin;         // world position of the outer corner of pixel (0,0)

    Vec2 pixel_center(int i, int j) const {
        return {origin.x + (i + 0.5) * scale, origin.y + (j + 0.5) * scale};
    }
    // continuous pixel-index coordinates of a world point
    Vec2 to_pixel(const Vec2& w) const {
        return {(w.x - origin.x) / scale - 0.5, (w.y - origin.y) / scale - 0.5};
    }
    Vec2 to_world(const Vec2& px) const {
        return {origin.x + (px.x + 0.5) * scale, origin.y + (px.y + 0.5) * scale};
    }
};

struct RasterizedPolygon {
    BinaryBitmap bitmap;
    GridFrame frame;
};

// Pixel-center sampling: bit = 1 iff the pixel center lies inside the polygon
// (boundary inclusive). The polygon bbox is centered in the grid. Fails with a
// size diagnostic when the polygon does not fit at the given scale.
Result<RasterizedPolygon> rasterize_polygon(const FootprintPolygon& poly, double scale,
                                            int grid_size);

// Auto-fit scale so the polygon bbox spans the grid minus a margin on each side.
double auto_fit_scale(const FootprintPolygon& poly, int grid_size, int margin_px);

// Semantic raster: every value is 0 (unset) or a valid label ID.
struct LabelGrid {
    int width = 0;
    int height = 0;
    double scale = 1.0;  // meters per pixel
    Vec2 origin;         // world position of grid corner, as in GridFrame
    std::vector<uint8_t> labels;

    LabelGrid() = default;
    LabelGrid(int w, int h, double s)
        : width(w), height(h), scale(s), labels(size_t(w) * h, 0) {}

    uint8_t at(int x, int y) const { return labels[size_t(y) * width + x]; }
    void set(int x, int y, uint8_t v) { labels[size_t(y) * width + x] = v; }
    bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }
    GridFrame frame() const { return {scale, origin}; }
    bool operator==(const LabelGrid& o) const = default;
};

// Symmetric binary adjacency with zero diagonal.
class AdjacencyMatrix {
public:
    AdjacencyMatrix() = default;
    explicit AdjacencyMatrix(size_t n) : n_(n), bits_(n * n, 0) {}

    size_t size() const { return n_; }
    uint8_t at(size_t i, size_t j) const { return bits_[i * n_ + j]; }
    void connect(size_t i, size_t j) {
        if (i == j) return;
        bits_[i * n_ + j] = 1;
        bits_[j * n_ + i] = 1;
    }
    void disconnect(size_t i, size_t j) {
        bits_[i * n_ + j] = 0;
        bits_[j * n_ + i] = 0;
    }
    bool symmetric_zero_diag() const;
    int64_t edge_count() const;  // half the number of set entries
    std::vector<std::pair<int, int>> edges() const;

    bool operator==(const AdjacencyMatrix& o) const = default;

private:
    size_t n_ = 0;
    std::vector<uint8_t> bits_;
};

// 3D points plus symmetric adjacency; optional planar faces as vertex-index
// loops. The universal geometry carrier.
struct WireframeGraph {
    std::vector<Point3> points;
    AdjacencyMatrix adjacency;
    std::vector<std::vector<int>> faces;

    size_t node_count() const { return points.size(); }
};

// Checks adjacency shape, node uniqueness at eps_merge, face index validity
// and coplanarity at eps_plane.
Result<bool> validate_wireframe(const WireframeGraph& g, double eps_merge = kEpsMerge,
                                double eps_plane = kEpsPlane);

// Newell normal of a 3D loop (not normalized).
Point3 face_normal(const std::vector<Point3>& pts);
double face_area(const std::vector<Point3>& pts);
// Max distance of loop points from their best-fit plane.
double face_planarity_deviation(const std::vector<Point3>& pts);

struct Triangle3 {
    Point3 a, b, c;
    double area() const { return 0.5 * (b - a).cross(c - a).norm(); }
};

// Ear-clipping triangulation of a simple planar loop. Fails when the loop is
// non-planar beyond eps_plane.
Result<std::vector<Triangle3>> triangulate_face(const std::vector<Point3>& loop,
                                                double eps_plane = kEpsPlane);

}  // namespace synbuild
