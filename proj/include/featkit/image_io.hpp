#pragma once

#include <string>

#include "featkit/image.hpp"

namespace featkit {

// Binary PGM (P5), 8-bit. Loader reports file, byte offset and reason on
// malformed input.
GrayImage load_pgm(const std::string& path);
void save_pgm(const std::string& path, const GrayImage& img);

// Dispatches on magic bytes: P5 -> PGM, \x89PNG -> PNG (when built with
// libpng; raises an io error otherwise).
GrayImage load_image(const std::string& path);

bool png_supported();

} // namespace featkit
