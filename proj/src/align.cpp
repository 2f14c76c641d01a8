#include "synbuild/align.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>
#include <vector>

namespace synbuild {

namespace {

struct Centroid {
    double x = 0, y = 0;
    bool valid = false;
};

Centroid ones_centroid(const BinaryBitmap& bmp) {
    Centroid c;
    int64_t n = 0;
    double sx = 0, sy = 0;
    for (int y = 0; y < bmp.height; ++y) {
        for (int x = 0; x < bmp.width; ++x) {
            if (bmp.at(x, y)) {
                sx += x;
                sy += y;
                ++n;
            }
        }
    }
    if (n > 0) {
        c.x = sx / double(n);
        c.y = sy / double(n);
        c.valid = true;
    }
    return c;
}

}  // namespace

BinaryBitmap transform_bitmap(const BinaryBitmap& bmp, const AlignmentTransform& t,
                              int out_width, int out_height) {
    BinaryBitmap out(out_width, out_height);
    Centroid c = ones_centroid(bmp);
    if (!c.valid) return out;
    if (t.is_identity() && out_width == bmp.width && out_height == bmp.height) return bmp;
    // inverse mapping: source = C + (dest - t - C) / s, rounded half away from zero
    for (int y = 0; y < out_height; ++y) {
        for (int x = 0; x < out_width; ++x) {
            double sxf = c.x + (double(x) - t.t_x - c.x) / t.s_x;
            double syf = c.y + (double(y) - t.t_y - c.y) / t.s_y;
            long sx = std::lround(sxf);
            long sy = std::lround(syf);
            if (sx >= 0 && sx < bmp.width && sy >= 0 && sy < bmp.height)
                out.set(x, y, bmp.at(int(sx), int(sy)));
        }
    }
    return out;
}

int64_t alignment_loss(const BinaryBitmap& footprint, const BinaryBitmap& plan,
                       const AlignmentTransform& t) {
    BinaryBitmap moved = transform_bitmap(plan, t, footprint.width, footprint.height);
    int64_t coverage = 0;  // footprint pixels the plan fails to cover
    int64_t overhang = 0;  // plan pixels outside the footprint
    for (int y = 0; y < footprint.height; ++y) {
        for (int x = 0; x < footprint.width; ++x) {
            uint8_t f = footprint.at(x, y);
            uint8_t p = moved.at(x, y);
            if (f && !p) ++coverage;
            if (p && !f) ++overhang;
        }
    }
    return kCoverageWeight * coverage + overhang;
}

namespace {

struct Best {
    int64_t loss = -1;
    AlignmentTransform t;

    void offer(int64_t candidate_loss, const AlignmentTransform& candidate) {
        auto key = std::make_tuple(candidate.t_x, candidate.t_y, candidate.s_x, candidate.s_y);
        auto cur = std::make_tuple(t.t_x, t.t_y, t.s_x, t.s_y);
        if (loss < 0 || candidate_loss < loss || (candidate_loss == loss && key < cur)) {
            loss = candidate_loss;
            t = candidate;
        }
    }
};

}  // namespace

Result<AlignmentOutcome> optimize_alignment(const BinaryBitmap& footprint,
                                            const BinaryBitmap& plan,
                                            const AlignSearchConfig& cfg) {
    if (footprint.count_ones() == 0 || plan.count_ones() == 0)
        return Result<AlignmentOutcome>::fail("optimize_alignment: empty bitmap");

    auto clamp_scale = [&](double s) { return std::clamp(s, cfg.scale_min, cfg.scale_max); };
    auto eval = [&](const AlignmentTransform& t) { return alignment_loss(footprint, plan, t); };

    Best best;
    best.offer(eval(AlignmentTransform{}), AlignmentTransform{});

    std::vector<double> coarse_scales;
    for (double s = cfg.scale_min + cfg.coarse_scale_step; s <= cfg.scale_max + 1e-9;
         s += cfg.coarse_scale_step)
        coarse_scales.push_back(s);

    for (int ty = -cfg.coarse_window_px; ty <= cfg.coarse_window_px; ty += cfg.coarse_stride_px) {
        for (int tx = -cfg.coarse_window_px; tx <= cfg.coarse_window_px;
             tx += cfg.coarse_stride_px) {
            for (double sx : coarse_scales) {
                for (double sy : coarse_scales) {
                    AlignmentTransform t{double(tx), double(ty), sx, sy};
                    best.offer(eval(t), t);
                }
            }
        }
    }

    // fine pass around the coarse optimum
    Best fine = best;
    for (int dy = -3; dy <= 3; ++dy) {
        for (int dx = -3; dx <= 3; ++dx) {
            for (int is = -1; is <= 1; ++is) {
                for (int js = -1; js <= 1; ++js) {
                    AlignmentTransform t{best.t.t_x + dx, best.t.t_y + dy,
                                         clamp_scale(best.t.s_x + is * cfg.fine_scale_step),
                                         clamp_scale(best.t.s_y + js * cfg.fine_scale_step)};
                    fine.offer(eval(t), t);
                }
            }
        }
    }

    // coordinate descent until no single-parameter step improves
    Best cur = fine;
    bool improved = true;
    int guard = 0;
    while (improved && guard++ < 200) {
        improved = false;
        const AlignmentTransform base = cur.t;
        const int64_t base_loss = cur.loss;
        auto try_step = [&](AlignmentTransform t) {
            t.s_x = clamp_scale(t.s_x);
            t.s_y = clamp_scale(t.s_y);
            cur.offer(eval(t), t);
        };
        for (int d : {-1, 1}) {
            try_step({base.t_x + d, base.t_y, base.s_x, base.s_y});
            try_step({base.t_x, base.t_y + d, base.s_x, base.s_y});
            try_step({base.t_x, base.t_y, base.s_x + d * cfg.descent_scale_step, base.s_y});
            try_step({base.t_x, base.t_y, base.s_x, base.s_y + d * cfg.descent_scale_step});
        }
        if (cur.loss < base_loss) improved = true;
    }

    AlignmentOutcome out;
    out.transform = cur.t;
    out.loss = cur.loss;
    double threshold = cfg.reject_loss_factor * double(footprint.count_ones()) * kCoverageWeight;
    out.accepted = double(out.loss) <= threshold;
    return Result<AlignmentOutcome>::ok(out);
}

}  // namespace synbuild
