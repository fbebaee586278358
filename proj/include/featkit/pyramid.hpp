#pragma once

#include <vector>

#include "featkit/image.hpp"

namespace featkit {

// Separable Gaussian, kernel truncated at ceil(3*sigma) and renormalized,
// clamp-to-edge borders.
GrayImage gaussian_blur(const GrayImage& img, float sigma);

struct PyramidParams {
    int octaves = 4;
    int intervals = 3;       // levels per doubling; k = 2^(1/intervals)
    float base_sigma = 1.6f;
    float assumed_blur = 0.5f; // blur already present in the input
    int min_dimension = 16;    // octaves stop before going below this
};

struct PyramidOctave {
    std::vector<GrayImage> levels;
    std::vector<float> sigmas; // absolute, in input-image pixel units
    int pixel_step = 1;        // 2^octave
};

struct GaussianPyramid {
    std::vector<PyramidOctave> octaves;
    PyramidParams params;
    float k = 0.f;
};

// Each octave holds intervals+3 levels. Levels are blurred directly from
// the octave base with the quadrature increment, so sigma bookkeeping is
// exact; the next octave subsamples (every second pixel) the level whose
// sigma is twice the octave base.
GaussianPyramid build_gaussian_pyramid(const GrayImage& img,
                                       const PyramidParams& params = {});

struct DogPyramid {
    std::vector<PyramidOctave> octaves; // intervals+2 difference levels
    PyramidParams params;
    float k = 0.f;
};

// Adjacent-level differences: dog[l] = gauss[l+1] - gauss[l]. The sigma
// recorded for a difference level is that of its lower Gaussian level.
DogPyramid difference_of_gaussians(const GaussianPyramid& pyr);

} // namespace featkit
