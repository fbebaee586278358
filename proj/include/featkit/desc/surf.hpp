#pragma once

#include <vector>

#include "featkit/desc/orientation.hpp"
#include "featkit/image.hpp"
#include "featkit/keypoint.hpp"

namespace featkit {

struct SurfParams {
    int grid = 4;           // subregions per side
    int samples = 5;        // Haar samples per subregion side
    float weight_sigma = 3.3f; // Gaussian sigma in units of scale
    OrientationParams orientation;
};

// 4x4 subregions of (sum dx, sum dy, sum |dx|, sum |dy|) over Gaussian-
// weighted Haar responses on a 20-scale window rotated to the keypoint
// orientation; L2-normalized. Haar filters read the integral image of the
// described image. Raises out_of_bounds when any filter leaves the image
// and degenerate_descriptor on zero response.
std::vector<float> surf_descriptor(const GrayImage& img, const IntegralImage& ii,
                                   const Keypoint& kp, const SurfParams& params = {});

} // namespace featkit
