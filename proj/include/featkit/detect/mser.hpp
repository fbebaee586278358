#pragma once

#include <vector>

#include "featkit/image.hpp"
#include "featkit/keypoint.hpp"

namespace featkit {

struct MserParams {
    int delta = 5;             // stability probe distance in gray levels
    int min_area = 30;         // pixels
    int max_area = 0;          // pixels; 0 means 1% of the image area
    float max_variation = 0.25f;
};

// Maximally stable extremal regions over the 8-bit quantized image,
// 4-connectivity. Dark-on-bright regions come from the level sweep of the
// image itself, bright-on-dark from the sweep of its inversion; both are
// returned together. Keypoint = region centroid, scale = radius of the
// equal-area disc, response = inverse variation.
std::vector<Keypoint> detect_mser(const GrayImage& img, const MserParams& params = {});

} // namespace featkit
