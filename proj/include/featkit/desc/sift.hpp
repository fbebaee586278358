#pragma once

#include <vector>

#include "featkit/desc/orientation.hpp"
#include "featkit/image.hpp"
#include "featkit/keypoint.hpp"

namespace featkit {

struct SiftParams {
    int grid = 4;                  // spatial cells per side
    int bins = 8;                  // orientation bins per cell
    float cell_width_factor = 3.f; // cell side = factor * scale, pixels
    float clamp = 0.2f;
    OrientationParams orientation;
};

// 4x4x8 gradient histogram around an oriented keypoint, trilinear
// scattering, Gaussian-weighted, normalized with entries held under the
// clamp value. Raises out_of_bounds when the support window leaves the
// image and degenerate_descriptor when the window has no usable gradient
// mass. The keypoint must carry its orientation already.
std::vector<float> sift_descriptor(const GrayImage& img, const Keypoint& kp,
                                   const SiftParams& params = {});

} // namespace featkit
