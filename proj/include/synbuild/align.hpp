#pragma once

#include <cstdint>

#include "synbuild/geometry.hpp"
#include "synbuild/result.hpp"

namespace synbuild {

// Translation in pixels plus per-axis scale, applied about the centroid of
// the bitmap's set pixels.
struct AlignmentTransform {
    double t_x = 0.0;
    double t_y = 0.0;
    double s_x = 1.0;
    double s_y = 1.0;

    bool is_identity() const { return t_x == 0 && t_y == 0 && s_x == 1 && s_y == 1; }
};

struct AlignSearchConfig {
    double scale_min = 0.8;
    double scale_max = 1.25;
    int coarse_window_px = 16;
    int coarse_stride_px = 4;
    double coarse_scale_step = 0.05;
    double fine_scale_step = 0.02;
    double descent_scale_step = 0.01;
    // Alignment failure when best loss exceeds
    // reject_loss_factor * footprint_ones * coverage_weight.
    double reject_loss_factor = 0.15;
};

constexpr int kCoverageWeight = 20;

// Nearest-neighbor resample of bmp scaled by (s_x, s_y) about the centroid of
// its set pixels, then translated by (t_x, t_y). Pixels mapping outside the
// output are clipped. Rounding is half-away-from-zero.
BinaryBitmap transform_bitmap(const BinaryBitmap& bmp, const AlignmentTransform& t,
                              int out_width, int out_height);

// coverage_weight * #{footprint=1, transformed plan=0} + #{plan=1, footprint=0}
int64_t alignment_loss(const BinaryBitmap& footprint, const BinaryBitmap& plan,
                       const AlignmentTransform& t);

struct AlignmentOutcome {
    AlignmentTransform transform;
    int64_t loss = 0;
    bool accepted = true;
};

// Coarse-to-fine grid search over translation and scale followed by
// coordinate descent. Deterministic: ties break toward the lexicographically
// smallest (t_x, t_y, s_x, s_y). The result never loses to the identity
// transform.
Result<AlignmentOutcome> optimize_alignment(const BinaryBitmap& footprint,
                                            const BinaryBitmap& plan,
                                            const AlignSearchConfig& config = {});

}  // namespace synbuild
