#pragma once

#include <vector>

#include "featkit/image.hpp"
#include "featkit/keypoint.hpp"

namespace featkit {

struct FastHessianParams {
    int octaves = 4;
    int levels = 4;            // filter sizes per octave
    float threshold = 4e-4f;   // on determinant responses of [0,1] input
    float lobe_weight = 0.9f;  // cross-derivative balance factor
    int max_refine_steps = 5;
};

struct HessianResponse {
    double dxx, dyy, dxy; // area-normalized box-filter second derivatives
    double det;           // dxx*dyy - (w*dxy)^2
};

inline double hessian_determinant(double dxx, double dyy, double dxy, double w) {
    return dxx * dyy - (w * dxy) * (w * dxy);
}

// Box-filter Hessian response for one filter size at one pixel; exposed so
// the detector's arithmetic can be checked directly against formula input.
HessianResponse hessian_response(const IntegralImage& ii, int x, int y,
                                 int filter_size, float lobe_weight);

// Integral-image blob detector with filter sizes 9,15,21,27 doubling their
// spacing each octave, 3x3x3 non-max suppression and quadratic refinement.
std::vector<Keypoint> detect_fast_hessian(const GrayImage& img,
                                          const FastHessianParams& params = {});

} // namespace featkit
