#pragma once

#include <string>
#include <utility>
#include <vector>

#include "featkit/image.hpp"

namespace featkit {

// Deterministic synthetic scenes for tests and the default benchmark set.
// Intensities stay in the mid range so strong exposure gains do not clip,
// and structure is concentrated toward the center so it survives heavy
// downscaling.
GrayImage synth_blobs(int width, int height, uint64_t seed);
GrayImage synth_squares(int width, int height, uint64_t seed);
GrayImage synth_mixed(int width, int height, uint64_t seed);

// The named trio used when a benchmark config lists no images.
std::vector<std::pair<std::string, GrayImage>> default_bench_images(int size);

} // namespace featkit
