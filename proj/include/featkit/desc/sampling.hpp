#pragma once

#include "featkit/image.hpp"

namespace featkit {

// Gaussian-weighted intensity at a continuous position: discrete window of
// radius ceil(truncate*sigma) around (x, y), weights renormalized so a
// constant image samples to its constant. Raises out_of_bounds when the
// window leaves the image.
float smoothed_sample(const GrayImage& img, float x, float y, float sigma,
                      float truncate);

} // namespace featkit
