#pragma once

#include <vector>

#include "featkit/image.hpp"
#include "featkit/keypoint.hpp"
#include "featkit/pyramid.hpp"

namespace featkit {

struct DogParams {
    PyramidParams pyramid;
    // thresholds apply to intensities normalized to [0,1]
    float contrast_threshold = 0.03f;
    float edge_ratio = 10.f;
    int max_refine_steps = 5;
};

// Scale-space blob detector: strict 26-neighbour extrema of the
// difference-of-Gaussians stack, quadratically refined, contrast- and
// edge-gated.
std::vector<Keypoint> detect_dog(const GrayImage& img, const DogParams& params = {});

} // namespace featkit
