#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "synbuild/geometry.hpp"
#include "synbuild/result.hpp"
#include "synbuild/rng.hpp"

namespace synbuild {

enum class RoofKind { Flat, Gabled, Hipped, Pyramidal, Shed };

const char* roof_kind_name(RoofKind k);
std::optional<RoofKind> roof_kind_from_name(const std::string& name);

enum class ExtensionShape { Rectangular, Trapezoidal };

// One footprint extension, attached flush to a single footprint edge.
struct ExtensionSpec {
    ExtensionShape shape = ExtensionShape::Rectangular;
    double span_m = 3.0;   // length of the attachment segment along the edge
    double depth_m = 2.0;  // outward depth
    double taper_m = 0.0;  // per-side inward taper of the outer edge (trapezoidal)
};

struct RoofSpec {
    RoofKind kind = RoofKind::Flat;
    double rise_m = 0.0;  // apex/ridge height above the wall top; 0 for flat
};

// Roles drive which faces feed the roof stream and the roof point cloud.
enum class FaceRole {
    Ground,
    Wall,       // vertical wall between z=0 and the wall top
    RoofSlope,  // sloped roof plane (sampled)
    RoofCap,    // horizontal roof face (sampled)
    GableWall,  // vertical face above the wall top (gable triangles, shed sides)
    SuperWall,  // chimney/dormer sides
    SuperRoof,  // dormer roof planes, chimney cap (sampled)
};

// A rectangular block (base building or merge partner) or an attached
// extension region of the footprint complex.
struct HullRegion {
    FootprintPolygon poly;  // CCW, world coordinates
    RoofSpec roof;          // extensions always carry a flat cap
    bool is_root = false;   // roots are axis-aligned rectangles with shaped roofs
};

// Interior boundary segment between two regions at the wall top; no wall is
// emitted along it and adjoining roof loops are split at its endpoints.
struct HullContact {
    Vec2 a, b;
};

struct SuperstructureSpec {
    double p_chimney = 0.35;
    double p_dormer = 0.35;
    double p_roof_window = 0.35;
};

// Construction recipe for a hull; kept alongside the compiled wireframe so
// that merging can recompile instead of stitching face soups.
struct HullPlan {
    std::vector<HullRegion> regions;
    std::vector<HullContact> contacts;
    FootprintPolygon union_poly;
    int stories = 1;
    double floor_height_m = 3.0;
    uint64_t super_seed = 0;
    SuperstructureSpec supers;

    double wall_top() const { return stories * floor_height_m; }
};

struct BuildingHull {
    WireframeGraph wireframe;
    std::vector<FaceRole> face_roles;        // parallel to wireframe.faces
    std::vector<int> sampled_roof_faces;     // faces the roof cloud samples
    std::vector<int> roof_stream_faces;      // faces serialized as roof geometry
    std::vector<FootprintPolygon> floor_footprints;  // index 0 = ground floor
    std::vector<double> floor_z;             // stories+1 boundaries, 0 first
    std::vector<std::array<Point3, 4>> roof_window_quads;
    HullPlan plan;

    int stories() const { return int(floor_footprints.size()); }
    double wall_top() const { return floor_z.empty() ? 0.0 : floor_z.back(); }
};

struct ExteriorConfig {
    int stories_min = 1;
    int stories_max = 4;
    double base_width_min_m = 8.0;
    double base_width_max_m = 16.0;
    double base_depth_min_m = 6.0;
    double base_depth_max_m = 12.0;
    double floor_height_m = 3.0;
    std::vector<RoofKind> roof_kinds_enabled = {RoofKind::Flat, RoofKind::Gabled,
                                                RoofKind::Hipped, RoofKind::Pyramidal,
                                                RoofKind::Shed};
    double roof_rise_min_m = 1.0;
    double roof_rise_max_m = 3.0;
    double p_merge = 0.25;
    double p_extension = 0.4;
    int max_extensions = 4;
    SuperstructureSpec supers;

    Result<bool> validate() const;
};

// Step 1 entry point: deterministic watertight hull for (seed, config).
Result<BuildingHull> generate_exterior(uint64_t seed, const ExteriorConfig& config);

// Footprint-level extension attachment. Placement (edge choice and position)
// is seeded; each extension lands on a distinct edge of the input polygon.
Result<FootprintPolygon> append_extensions(const FootprintPolygon& footprint,
                                           const std::vector<ExtensionSpec>& extensions,
                                           uint64_t seed);

// Structural merge of two hulls; footprints must share a wall segment after
// offsetting b. Story counts and floor heights must match.
Result<BuildingHull> merge_buildings(const BuildingHull& a, const BuildingHull& b, Vec2 offset);

struct FloorSlice {
    FootprintPolygon footprint;
    double z_base = 0.0;
    double z_top = 0.0;
};

// Horizontal sections of the hull at floor mid-heights, ascending.
Result<std::vector<FloorSlice>> decompose_floors(const BuildingHull& hull);

// Every undirected edge appearing in any face loop must appear in exactly two
// face loops.
Result<bool> check_watertight(const WireframeGraph& g);

// Compile a plan into faces/points/adjacency. Exposed for tests.
Result<BuildingHull> compile_hull(const HullPlan& plan);

std::vector<Point3> face_loop_points(const WireframeGraph& g, int face_index);

}  // namespace synbuild
