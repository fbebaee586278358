#pragma once

#include <array>

#include "featkit/image.hpp"
#include "featkit/keypoint.hpp"

namespace featkit {

struct BinaryDescriptorParams {
    float pattern_scale = 1.f; // multiplies the keypoint scale
};

struct BinaryResult {
    std::array<uint8_t, 64> bits{}; // 512 comparisons, LSB-first
    float alpha = 0.f;              // pattern orientation used
};

// Smoothed point samples over the scaled pattern; orientation from the
// intensity-gradient sum over the pattern's wide pairs; bits compare the
// re-sampled rotated pattern, 1 iff the second point is strictly brighter.
// Raises out_of_bounds when the pattern leaves the image.
BinaryResult brisk_descriptor(const GrayImage& img, const Keypoint& kp,
                              const BinaryDescriptorParams& params = {});
BinaryResult freak_descriptor(const GrayImage& img, const Keypoint& kp,
                              const BinaryDescriptorParams& params = {});

} // namespace featkit
