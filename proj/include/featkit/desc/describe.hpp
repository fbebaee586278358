#pragma once

#include "featkit/desc/binary.hpp"
#include "featkit/desc/descriptor.hpp"
#include "featkit/desc/sift.hpp"
#include "featkit/desc/surf.hpp"
#include "featkit/image.hpp"

namespace featkit {

struct DescribeParams {
    SiftParams sift;
    SurfParams surf;
    BinaryDescriptorParams brisk;
    BinaryDescriptorParams freak;
};

// Set-level description: assigns orientations (histogram peaks for the
// float descriptors, pattern gradient for the binary ones) and computes one
// row per oriented keypoint. Keypoints whose support leaves the image or
// degenerates are dropped; the returned set stays keypoint/row aligned.
DescriptorSet describe(const GrayImage& img, const std::vector<Keypoint>& kps,
                       DescriptorKind kind, const DescribeParams& params = {});

} // namespace featkit
