#include "featkit/desc/binary.hpp"

#include <cmath>
#include <vector>

#include "featkit/desc/patterns.hpp"
#include "featkit/desc/sampling.hpp"

namespace featkit {

namespace {

void sample_points(const GrayImage& img, const Keypoint& kp, float s,
                   const std::vector<PatternPoint>& pts, float cos_a, float sin_a,
                   float truncate, std::vector<float>& out) {
    out.resize(pts.size());
    for (size_t i = 0; i < pts.size(); ++i) {
        float px = kp.x + s * (cos_a * pts[i].x - sin_a * pts[i].y);
        float py = kp.y + s * (sin_a * pts[i].x + cos_a * pts[i].y);
        out[i] = smoothed_sample(img, px, py, s * pts[i].sigma, truncate);
    }
}

template <typename Pairs>
float pattern_orientation(const std::vector<PatternPoint>& pts,
                          const std::vector<float>& values, float s,
                          const Pairs& pairs) {
    double gx = 0.0, gy = 0.0;
    for (const auto& pr : pairs) {
        double dx = double(pts[pr.b].x - pts[pr.a].x) * s;
        double dy = double(pts[pr.b].y - pts[pr.a].y) * s;
        double n2 = dx * dx + dy * dy;
        double di = (double(values[pr.b]) - double(values[pr.a])) / n2;
        gx += dx * di;
        gy += dy * di;
    }
    gx /= static_cast<double>(pairs.size());
    gy /= static_cast<double>(pairs.size());
    if (gx == 0.0 && gy == 0.0)
        return 0.f;
    return static_cast<float>(std::atan2(gy, gx));
}

template <typename Pairs>
BinaryResult run_pattern(const GrayImage& img, const Keypoint& kp,
                         const BinaryDescriptorParams& params,
                         const std::vector<PatternPoint>& pts, float margin,
                         const Pairs& orientation_pairs,
                         const std::vector<PatternPair>& bit_pairs,
                         float truncate) {
    if (!(params.pattern_scale > 0.f))
        raise(ErrorCode::invalid_parameter, "pattern_scale must be positive");
    if (!(kp.scale > 0.f))
        raise(ErrorCode::invalid_parameter, "keypoint scale must be positive");
    const float s = params.pattern_scale * kp.scale;
    const float need = margin * s + 1.f;
    if (kp.x - need < 0.f || kp.y - need < 0.f ||
        kp.x + need > static_cast<float>(img.width() - 1) ||
        kp.y + need > static_cast<float>(img.height() - 1))
        raise(ErrorCode::out_of_bounds,
              "pattern (extent " + std::to_string(need) +
                  ") leaves the image at (" + std::to_string(kp.x) + "," +
                  std::to_string(kp.y) + ")");

    std::vector<float> values;
    sample_points(img, kp, s, pts, 1.f, 0.f, truncate, values);
    float alpha = pattern_orientation(pts, values, s, orientation_pairs);

    std::vector<float> rotated;
    sample_points(img, kp, s, pts, std::cos(alpha), std::sin(alpha), truncate,
                  rotated);

    BinaryResult r;
    r.alpha = alpha;
    for (size_t k = 0; k < bit_pairs.size(); ++k) {
        const auto& pr = bit_pairs[k];
        if (rotated[pr.b] > rotated[pr.a])
            r.bits[k >> 3] |= static_cast<uint8_t>(1u << (k & 7));
    }
    return r;
}

} // namespace

BinaryResult brisk_descriptor(const GrayImage& img, const Keypoint& kp,
                              const BinaryDescriptorParams& params) {
    const BriskPattern& p = BriskPattern::instance();
    return run_pattern(img, kp, params, p.points, p.margin, p.long_pairs,
                       p.short_pairs, 3.f);
}

BinaryResult freak_descriptor(const GrayImage& img, const Keypoint& kp,
                              const BinaryDescriptorParams& params) {
    const FreakPattern& p = FreakPattern::instance();
    return run_pattern(img, kp, params, p.points, p.margin, p.orientation_pairs,
                       p.pairs, 2.f);
}

} // namespace featkit
