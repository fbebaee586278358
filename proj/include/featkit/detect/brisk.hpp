#pragma once

#include <vector>

#include "featkit/image.hpp"
#include "featkit/keypoint.hpp"

namespace featkit {

struct BriskDetectorParams {
    int layers = 8;          // scale layers at ratio sqrt(2), cut at min_dimension
    float threshold = 30.f;  // FAST segment-test threshold (gray levels)
    int min_dimension = 16;
    int arc_length = 9;      // contiguous ring pixels required (FAST 9/16)
};

// FAST 9/16 segment-test score at one pixel: best sum of (|p - c| - t) over
// a contiguous ring arc of >= arc_length pixels that passes the test, 0 if
// none does. The pixel ring has radius 3; callers keep a 3-pixel margin.
float fast_score(const GrayImage& img, int x, int y, float threshold,
                 int arc_length = 9);

// Multi-scale FAST: corners must beat their 8 in-layer neighbours strictly
// and the interpolated scores of the adjacent layers; position and scale are
// refined by parabola fits.
std::vector<Keypoint> detect_brisk(const GrayImage& img,
                                   const BriskDetectorParams& params = {});

} // namespace featkit
