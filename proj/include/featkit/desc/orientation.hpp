#pragma once

#include <vector>

#include "featkit/image.hpp"
#include "featkit/keypoint.hpp"

namespace featkit {

struct OrientationParams {
    int bins = 36;
    float sigma_factor = 1.5f;   // Gaussian weight sigma = factor * scale
    float window_factor = 4.5f;  // window radius = round(factor * scale)
    float peak_ratio = 0.8f;     // secondary peaks above ratio * max
};

// Gradient-histogram orientation assignment. Returns one copy of the
// keypoint per accepted histogram peak (parabola-refined); empty when the
// window leaves the image or contains no gradient. Bin centers sit at
// multiples of the bin width so an axis-aligned gradient lands on an exact
// bin center.
std::vector<Keypoint> assign_orientation(const GrayImage& img, const Keypoint& kp,
                                         const OrientationParams& params = {});

} // namespace featkit
